#pragma once

#include <vector>

#include "unitalcap/linalg.hpp"

// Kraus-operator channels and the operators derived from them.
//
// A channel E acts as E(rho) = sum_i K_i rho K_i^dagger with
// sum_i K_i^dagger K_i = I (trace preservation, checked at 1e-9).
// The transfer matrix is taken in the row-major vectorization of
// linalg.hpp: T = sum_i K_i kron conj(K_i), so vec(E(rho)) = T vec(rho)
// and the identity's vectorization |I> is the fixed point of a unital
// channel.

namespace unitalcap {

class KrausChannel {
 public:
  // Validates equal operator shapes, k >= 1, and trace preservation.
  explicit KrausChannel(std::vector<Matrix> ops);

  // Skips validation; for diagnostics and deliberately broken test inputs.
  static KrausChannel unchecked(std::vector<Matrix> ops);

  Index input_dim() const { return d_in_; }
  Index output_dim() const { return d_out_; }
  Index kraus_count() const { return static_cast<Index>(ops_.size()); }
  const std::vector<Matrix>& kraus() const { return ops_; }

 private:
  KrausChannel(std::vector<Matrix> ops, bool validate);
  std::vector<Matrix> ops_;
  Index d_in_ = 0;
  Index d_out_ = 0;
};

// sum_i K_i rho K_i^dagger. Accepts any operator, not just states.
Matrix apply(const KrausChannel& ch, const Matrix& rho);
DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);

// Adjoint in the Hilbert-Schmidt inner product: sum_i K_i^dagger x K_i.
// Unital whenever ch is trace preserving.
Matrix adjoint_apply(const KrausChannel& ch, const Matrix& x);

struct TransferMatrix {
  Matrix mat;  // (d_out^2) x (d_in^2)
  Index d_in = 0;
  Index d_out = 0;
};

TransferMatrix transfer_matrix(const KrausChannel& ch);

// ||E(I) - I|| <= tol in operator norm.
bool is_unital(const KrausChannel& ch, double tol = 1e-9);

// E^(kron n): materializes all k^n operator products. kraus_cap bounds k^n
// and dim_guard bounds the composite input/output dimensions.
KrausChannel tensor_power(const KrausChannel& ch, int n,
                          Index dim_guard = kDefaultDimGuard,
                          Index kraus_cap = kDefaultKrausCap);

// rho -> sum_i p_i U_i rho U_i^dagger. Probabilities must be nonnegative
// and sum to 1 within 1e-12; every U_i must be unitary within 1e-10.
KrausChannel unitary_mixture(const std::vector<Matrix>& unitaries,
                             const std::vector<double>& probs);

// Named channels -------------------------------------------------------------

KrausChannel identity_channel(Index d);

// rho -> (1-p) rho + p I/d via the discrete Weyl (shift/clock) operators:
// weight sqrt(1 - p (d^2-1)/d^2) on the identity and sqrt(p/d^2) on each of
// the other d^2 - 1 Weyl operators. Requires 0 <= p <= d^2/(d^2-1).
KrausChannel depolarizing_channel(Index d, double p);

// Qubit dephasing {sqrt(1-p) I, sqrt(p) Z}, 0 <= p <= 1.
KrausChannel dephasing_channel(double p);

// Weyl operator X^a Z^b on a d-dimensional system.
Matrix weyl_operator(Index d, Index a, Index b);

// Generic CPTP channel on d dimensions with k Kraus operators, sampled by
// slicing a Haar isometry (Stinespring dilation with a Haar environment).
KrausChannel random_kraus_channel(Index d, Index k, RandomStream& rng);

// Weight operators -----------------------------------------------------------

// Hermitian PSD weight with cached spectral data. Eigenvalues at or below
// 1e-10 * max eigenvalue count as zero for support and pseudo-inverse
// purposes.
class WeightOperator {
 public:
  explicit WeightOperator(Matrix pi, double rank_tol_rel = 1e-10);

  const Matrix& mat() const { return m_; }
  const Matrix& support_projector() const { return proj_; }
  const Matrix& pinv() const { return pinv_; }
  const Matrix& pinv_sqrt() const { return pinv_sqrt_; }

  Index dim() const { return m_.rows(); }
  Index rank() const { return rank_; }
  double trace() const { return trace_; }
  double trace_square() const { return trace_sq_; }
  bool is_identity(double tol = 1e-12) const;

  // Relative Frobenius weight of rho outside the support.
  double support_leak(const Matrix& rho) const;

 private:
  Matrix m_, proj_, pinv_, pinv_sqrt_;
  Index rank_ = 0;
  double trace_ = 0.0;
  double trace_sq_ = 0.0;
};

// Recovery-side weight map P_Pi(rho) = E^dagger(Pi^+ rho Pi^+). Requires rho
// supported on supp(Pi) within 1e-8 of its Frobenius weight.
Matrix p_pi_map(const KrausChannel& ch, const WeightOperator& pi,
                const Matrix& rho);

// Weighted channel G_{E,Pi}(rho) = Pi^{-1/2} E(rho) Pi^{-1/2} (pseudo-inverse
// square root on the support). Requires E(rho) supported on supp(Pi) within
// 1e-8.
Matrix g_map(const KrausChannel& ch, const WeightOperator& pi,
             const DensityMatrix& rho);

}  // namespace unitalcap
