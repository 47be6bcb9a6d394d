#pragma once

#include "unitalcap/channel.hpp"

// Second singular value of a unital channel and the block structure of its
// transfer matrix.
//
// With P0 = |I><I|/d the projector onto the identity direction and
// P1 = 1 - P0, the transfer matrix T of a unital channel fixes |I> and its
// adjoint fixes |I> as well (trace preservation), so T is block diagonal
// with respect to (P0, P1). lambda2 is the operator norm of P1 T P1: the
// worst-case Frobenius amplification of a traceless operator.

namespace unitalcap {

struct SpectralReport {
  double lambda2 = 0.0;
  // ||T |I> - |I>||_2, scaled by nothing: unitality defect.
  double fixed_point_residual = 0.0;
  // max(||P0 T P1||, ||P1 T P0||): coupling between the identity direction
  // and the traceless sector.
  double offdiag_residual = 0.0;
  // Singular values of T restricted to the traceless sector, descending;
  // d^2 - 1 entries, the first equals lambda2.
  std::vector<double> restricted_singular_values;
};

// Requires a unital channel (1e-9); asserts lambda2 <= 1 + 1e-10, which holds
// for every CPTP unital map. Dense SVD; input dimension is guarded by
// max_dim (default 64, i.e. a 4096^2 transfer matrix).
SpectralReport second_singular_value(const KrausChannel& ch,
                                     Index max_dim = 64);

struct BlockResiduals {
  // Largest clipped-positive eigenvalue of P1 T^dag T P1 - lambda2^2 P1:
  // excess of the traceless block above its certified ceiling.
  double excess_over_lambda2_sq = 0.0;
  // ||P0 T^dag T P0 - P0||: the fixed sector must be exactly preserved.
  double fixed_sector_residual = 0.0;
  // ||P1 T^dag T P0||: off-diagonal coupling, zero for unital + TP.
  double cross_residual = 0.0;
  bool ok = false;  // all three within the tolerance passed in

  // ||T |I> - |I>||_2 (same quantity as SpectralReport).
  double fixed_point_residual = 0.0;
};

// Diagnostic: no unitality precondition, so deliberately broken Kraus sets
// (via KrausChannel::unchecked) show up as nonzero residuals.
BlockResiduals check_block_structure(const KrausChannel& ch,
                                     double tol = 1e-9);

// |lambda2^2 - c/k| <= tol for k = kraus_count.
bool is_expander(const KrausChannel& ch, double c, double tol = 1e-9);

// Matrix-free estimate of lambda2 by power iteration on (P1 T P1)^dag
// (P1 T P1), applying the channel through its Kraus operators. Intended for
// dimensions where the dense route is out of budget; accuracy is limited by
// the relative spectral gap, so treat results as estimates at ~tol level.
double lambda2_power_estimate(const KrausChannel& ch, int max_iter = 2000,
                              double tol = 1e-10);

}  // namespace unitalcap
