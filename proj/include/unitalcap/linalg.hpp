#pragma once

#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "unitalcap/random.hpp"
#include "unitalcap/types.hpp"

// Dense linear-algebra primitives for operators on finite-dimensional
// Hilbert spaces. Free functions over Eigen expressions where the operation
// is scalar-generic; concrete double-precision routines where tolerances
// and eigensolvers are involved.
//
// Vectorization convention used throughout: row-major, |i><j| -> |i>|j>,
// i.e. vec(rho)[i*cols + j] = rho(i, j). Under this convention
// vec(A rho B) = (A kron B^T) vec(rho).

namespace unitalcap {

// ---------------------------------------------------------------------------
// Generic expression-friendly primitives
// ---------------------------------------------------------------------------

// Kronecker product. Guarded so a runaway composite dimension fails loudly
// instead of exhausting memory.
template <typename DerivedA, typename DerivedB>
Matrix tensor_product(const Eigen::MatrixBase<DerivedA>& a,
                      const Eigen::MatrixBase<DerivedB>& b,
                      Index dim_guard = kDefaultDimGuard) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if (rows > dim_guard || cols > dim_guard) {
    throw DimensionLimitError("tensor_product: result " + std::to_string(rows) +
                              "x" + std::to_string(cols) +
                              " exceeds dimension guard " +
                              std::to_string(dim_guard));
  }
  return Eigen::kroneckerProduct(a.derived(), b.derived());
}

// Row-major vectorization and its inverse.
template <typename Derived>
Vector vec(const Eigen::MatrixBase<Derived>& m) {
  Matrix mt = m.derived().transpose();  // column-major storage of the transpose = row-major scan
  return Eigen::Map<const Vector>(mt.data(), mt.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols);

// vec of the identity on a d-dimensional system: sum_i |i>|i>.
Vector vec_identity(Index d);

// Trace out every register not listed in `keep` (0-based positions into
// `dims`, strictly increasing). Keeping every register returns the input;
// keeping none returns the 1x1 full trace.
Matrix partial_trace(const Matrix& rho, const std::vector<Index>& dims,
                     const std::vector<int>& keep);

// ---------------------------------------------------------------------------
// Validated state types
// ---------------------------------------------------------------------------

// Hermitian, positive semidefinite (eigenvalues >= -1e-10), unit trace
// within 1e-10. Validation runs a full eigendecomposition; unchecked() is
// for outputs that carry the property by construction (e.g. CPTP images).
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);
  static DensityMatrix unchecked(Matrix m);

  const Matrix& mat() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  struct Unchecked {};
  DensityMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}
  Matrix m_;
};

// Unit vector: |norm^2 - 1| <= 1e-12.
class PureState {
 public:
  explicit PureState(Vector v);
  static PureState normalized(Vector v);  // rescales; rejects near-zero input

  const Vector& vec() const { return v_; }
  Index dim() const { return v_.rows(); }
  Matrix projector() const { return v_ * v_.adjoint(); }
  DensityMatrix density() const { return DensityMatrix::unchecked(projector()); }

 private:
  struct Unchecked {};
  PureState(Vector v, Unchecked) : v_(std::move(v)) {}
  Vector v_;
};

// ---------------------------------------------------------------------------
// Hermitian helpers
// ---------------------------------------------------------------------------

// Eigenvalues of (A + A^dagger)/2, ascending. All spectral routines
// symmetrize first so eigensolver input is exactly Hermitian.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& a);

// Principal square root of a PSD matrix. Eigenvalues in [-neg_tol, 0) are
// clamped to zero; anything more negative is an invariant violation.
Matrix psd_sqrt(const Matrix& a, double neg_tol = 1e-10);

// Pseudo-inverse square root on the support: eigenvalues at or below
// rank_tol_rel * max_eigenvalue count as zero and are left alone.
Matrix psd_pinv_sqrt(const Matrix& a, double rank_tol_rel = 1e-10,
                     double neg_tol = 1e-10);

// Largest singular value.
double operator_norm(const Matrix& a);

// ---------------------------------------------------------------------------
// State functionals
// ---------------------------------------------------------------------------

// Uhlmann fidelity F(rho, sigma) = Tr sqrt(sqrt(rho) sigma sqrt(rho)),
// clamped into [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Fast path for a pure reference state: F = sqrt(<psi|rho|psi>).
double fidelity(const PureState& psi, const Matrix& rho);

// Von Neumann entropy in bits; eigenvalues below 1e-12 are skipped.
double von_neumann_entropy(const DensityMatrix& rho);

// Tr(rho^2).
double purity(const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Haar sampling
// ---------------------------------------------------------------------------

// Haar-distributed unitary: QR of a complex Gaussian matrix with the
// diagonal of R phase-normalized.
Matrix haar_unitary(Index d, RandomStream& rng);

// Haar state on the column span of an isometry (columns orthonormal within
// 1e-10): W g / |W g| for complex Gaussian g.
PureState haar_state_in_subspace(const Matrix& isometry, RandomStream& rng);

// Haar state on a d-dimensional space.
PureState haar_state(Index d, RandomStream& rng);

}  // namespace unitalcap
