#pragma once

#include <string>

#include "unitalcap/norms.hpp"
#include "unitalcap/spectral.hpp"

// Capacity bounds for unital channels: spectral upper bounds, coherent
// information lower bounds, and the fidelity/codespace consequences of the
// two-norm machinery.

namespace unitalcap {

// Upper bound on the quantum capacity of a d-dimensional unital channel
// with second singular value lambda2: log2(1 + d lambda2^2) bits per use.
// The channel overload computes lambda2 and rejects non-unital input.
double q_upper_unital(Index d, double lambda2);
double q_upper_unital(const KrausChannel& ch);

// Same bound routed through the n-fold tensor power:
// (1/n) log2(d^n (1/d + lambda2^2)^n). Telescopes to q_upper_unital for
// every n; kept as a separate entry point so reports can show the two
// routes agree.
double q_upper_2norm(Index d, double lambda2, int n);
double q_upper_2norm(const KrausChannel& ch, int n);

// Coherent information Ic(rho, E) = S(E(rho)) - S((E (x) id_R)(Psi)) in
// bits, with Psi a purification of rho. The joint output entropy is read
// off the k x k Gram matrix M(i, j) = Tr(rho Ei^dag Ej), which carries the
// same nonzero spectrum.
double coherent_information(const KrausChannel& ch, const DensityMatrix& rho);

// Hashing-style lower bound: the best coherent information over the
// maximally mixed input plus `trials` random mixed inputs (reductions of
// Haar pure states on a doubled system), clamped at zero. Trial t draws
// from stream.derive(t + 1).
double q_lower_lsd(const KrausChannel& ch, int trials, RandomStream stream);

struct CapacityOptions {
  int lsd_trials = 16;
  int tensor_n = 1;  // exponent for the 2-norm route of the upper bound
  Index lambda2_max_dim = 64;
  RandomStream stream = RandomStream(0);
};

struct CapacityReport {
  double lambda2 = 0.0;
  double upper_bits = 0.0;
  std::string upper_method;  // "unital-lambda2" or "tensor-2norm"
  double lower_bits = 0.0;
  std::string lower_method;  // "lsd-coherent-information"
  double gap_bits = 0.0;     // upper_bits - lower_bits
};

// Sandwich for a square unital channel: min of the two upper routes (ties
// credited to "unital-lambda2") over the hashing lower bound.
CapacityReport capacity_report(const KrausChannel& ch,
                               const CapacityOptions& opts = {});

struct FidelityDecay {
  double beta = 0.0;
  int n = 0;
  double eta_bound = 0.0;  // (1 + beta)^{-n/4}, strictly decreasing in n
};

// Worst-case average-fidelity decay after n rounds, beta > 0, n >= 1.
FidelityDecay fidelity_decay(double beta, int n);

// Right-hand side of the correctable-dimension bound
// d_C <= B * Tr(Pi^2) / eta^4 for recovery quality eta in (0, 1]. The
// arithmetic overload takes a precomputed two-norm bound B; the channel
// overload derives B from the weighted n-fold map (certified when Pi is the
// identity and the channel unital, ascent estimate otherwise).
double codespace_bound_rhs(double eta, double g_norm_bound, double tr_pi_sq);
double codespace_bound_rhs(const KrausChannel& ch, int n,
                           const WeightOperator& pi, double eta,
                           const AscentOptions& opts = {});

struct ZeroErrorBound {
  double bits = 0.0;
  double g_norm = 0.0;  // two-norm bound B fed into the formula
  bool certified = false;  // B is a proven upper bound, not an ascent value
};

// Zero-error style upper bound (1/n) log2(B * Tr(Pi)^2) where B bounds the
// two-norm of the weighted n-fold map. Uses the certified bound when one is
// available, otherwise the ascent estimate (flagged uncertified).
ZeroErrorBound zero_error_upper(const KrausChannel& ch, int n,
                                const WeightOperator& pi,
                                const AscentOptions& opts = {});

}  // namespace unitalcap
