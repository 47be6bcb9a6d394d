#pragma once

#include <optional>

#include "unitalcap/channel.hpp"
#include "unitalcap/spectral.hpp"

// Output 2-norm ||E||_2 = max over input states of Tr(E(rho)^2), its
// behaviour under tensor powers, and the weighted variant for G_{E,Pi}.
//
// The maximum is attained on pure states, so the estimator runs a
// multiplicative ascent over pure inputs:
//     psi <- normalize( E^dagger( E(psi psi^dagger) ) psi ),
// restarted from Haar-random states. Reported values are maxima over every
// state visited, which makes them certified lower bounds on the true norm;
// the certified_upper field, when present, is an unconditional analytic
// upper bound, so the pair brackets the truth.

namespace unitalcap {

struct AscentOptions {
  int restarts = 64;
  int max_iter = 500;
  double tol = 1e-12;              // stop when the objective moves less
  RandomStream stream = RandomStream(0);
  Index dim_guard = kDefaultDimGuard;
};

struct NormEstimate {
  double value;           // best objective seen: lower bound on the norm
  PureState maximizer;    // state achieving `value`
  int restarts;
  int iterations_per_restart;  // configured ceiling per restart
  bool converged;              // best restart hit the tol criterion
  std::optional<double> certified_upper;
};

// Single-copy ascent. The warm-start overload seeds the first restarts with
// the given vectors (normalized), so the result is never below the
// objective at any of them.
NormEstimate output_2norm(const KrausChannel& ch, const AscentOptions& opts);
NormEstimate output_2norm(const KrausChannel& ch, const AscentOptions& opts,
                          const std::vector<Vector>& warm_starts);

// Ascent over the d^n-dimensional tensor power, applied in factorized form
// (the k^n operator products are never materialized). Restart 0 is seeded
// with the n-fold product of the single-copy maximizer, so the result never
// falls below (single-copy value)^n up to roundoff. For unital channels
// certified_upper = min(1, (1/d + lambda2^2)^n).
NormEstimate output_2norm_tensor(const KrausChannel& ch, int n,
                                 const AscentOptions& opts);

// Same, with a precomputed lambda2 (skips the dense spectral solve).
NormEstimate output_2norm_tensor(const KrausChannel& ch, int n,
                                 const AscentOptions& opts,
                                 std::optional<double> lambda2_hint);

// (1/d + lambda2^2)^n: analytic tensor-power bound for unital channels.
double spectral_2norm_bound(const KrausChannel& ch, int n);
double spectral_2norm_bound(Index d, double lambda2, int n);

// Ascent for G_{E^(kron n), Pi}(rho) = Pi^{-1/2} E^(kron n)(rho) Pi^{-1/2}.
// An identity Pi reduces exactly to output_2norm_tensor.
NormEstimate g_map_2norm(const KrausChannel& ch, int n,
                         const WeightOperator& pi, const AscentOptions& opts);

struct MultiplicativityReport {
  int n;
  NormEstimate norm1;
  NormEstimate norm_n;
  // log(norm_n) / (n log(norm1)): observed multiplicativity exponent.
  // Values at or below 1 mean the tensor norm is at least the product of
  // single-copy norms (warm starts force this up to roundoff).
  double alpha_hat;
  // Exponent from the certified tensor upper bound, when available and < 1;
  // the true exponent is at least this.
  std::optional<double> alpha_certified;
};

// Throws ExponentUndefinedError when norm1 >= 1 - 1e-9 (log vanishes).
MultiplicativityReport multiplicativity_report(const KrausChannel& ch, int n,
                                               const AscentOptions& opts);
MultiplicativityReport multiplicativity_report(const KrausChannel& ch, int n,
                                               const AscentOptions& opts,
                                               std::optional<double> lambda2_hint);

}  // namespace unitalcap
