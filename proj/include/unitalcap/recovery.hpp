#pragma once

#include "unitalcap/norms.hpp"

// Codes, Petz-type recovery maps, Monte Carlo average fidelity, and checks
// of the recovery-fidelity and codespace-dimension bounds.

namespace unitalcap {

// A d_C-dimensional logical space embedded isometrically into n uses of a
// d-dimensional system plus a d_T-dimensional tag register (last factor).
struct CodeSpec {
  int n = 1;
  Index d = 2;
  Index d_T = 1;
  Index d_C = 2;
  Matrix encoder;  // (d^n * d_T) x d_C, orthonormal columns within 1e-10
};

// Throws unless the shape and isometry conditions hold.
void validate_code(const CodeSpec& code);

// Encoder = first d_C columns of a Haar unitary on the physical space.
CodeSpec random_code(int n, Index d, Index d_T, Index d_C, RandomStream& rng);

// E^(kron n) (x) T where T traces out the tag register and resets it to the
// first basis state (Kraus {|0><t|}). With d_T = 1 this is just E^(kron n).
KrausChannel total_channel(const KrausChannel& ch, int n, Index d_T,
                           Index dim_guard = kDefaultDimGuard,
                           Index kraus_cap = kDefaultKrausCap);

// ch_total(V rho_logical V^dagger).
DensityMatrix apply_noise_to_code(const KrausChannel& ch_total,
                                  const CodeSpec& code,
                                  const DensityMatrix& rho_logical);

// Petz-type recovery for reference state sigma:
//   R_i = sigma^{1/2} E_i^dagger E(sigma)^{-1/2}
// (pseudo-inverse square root on the support), completed off supp(E(sigma))
// by routing to the first basis vector of the input space so the map is
// CPTP. Recovers sigma itself exactly.
KrausChannel petz_recovery(const KrausChannel& ch, const DensityMatrix& sigma);

struct FidelityStats {
  double mean = 0.0;
  double std_err = 0.0;  // sample standard error of the mean
  int trials = 0;
};

// Monte Carlo estimate of the average recovery fidelity
// E_phi F(V phi, rec(ch_total(V phi))) over Haar logical states. Trial t
// draws from stream.derive(t + 1).
FidelityStats average_fidelity(const KrausChannel& ch_total,
                               const CodeSpec& code, const KrausChannel& rec,
                               int trials, const RandomStream& stream);

struct FidelityBoundCheck {
  double lhs = 0.0;  // F^2(psi, rec(ch(psi)))
  double rhs = 0.0;  // sqrt(<psi|P_Pi(ch(psi))|psi> <psi|rec(Pi^2)|psi>)
};

// Both sides of the weighted recovery-fidelity inequality lhs <= rhs.
// Requires ch(psi) supported on supp(Pi) within 1e-8.
FidelityBoundCheck fidelity_bound_check(const KrausChannel& ch,
                                        const KrausChannel& rec,
                                        const WeightOperator& pi,
                                        const PureState& psi);

struct CodespaceVerdict {
  double eta_hat = 0.0;   // Monte Carlo average fidelity
  double std_err = 0.0;
  double g_norm = 0.0;    // two-norm bound B for the weighted map
  bool g_certified = false;
  double tr_pi_sq = 0.0;
  double rhs = 0.0;        // B * tr_pi_sq / eta_hat^4
  double rhs_slack = 0.0;  // same with eta lowered by 3 standard errors
  Index d_C = 0;
  bool pass = false;  // d_C <= rhs_slack
};

// Checks the codespace-dimension bound d_C <= B * Tr(Pi^2) / eta^4 for the
// given code and recovery. Requires d_T = 1 (the weighted-map norm is taken
// on the n system registers alone). Fidelity trials use stream.derive(1),
// the norm ascent stream.derive(2).
CodespaceVerdict codespace_bound_check(const KrausChannel& ch,
                                       const CodeSpec& code,
                                       const KrausChannel& rec,
                                       const WeightOperator& pi, int trials,
                                       const RandomStream& stream,
                                       const AscentOptions& ascent = {});

}  // namespace unitalcap
