#include "unitalcap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace unitalcap {

namespace {

// Shared eigensolver entry point: symmetrize, then solve.
Eigen::SelfAdjointEigenSolver<Matrix> solve_hermitian(const Matrix& a,
                                                      bool with_vectors) {
  if (a.rows() != a.cols()) {
    throw ShapeError("hermitian solve: matrix is " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()));
  }
  Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.compute(h, with_vectors ? Eigen::ComputeEigenvectors
                             : Eigen::EigenvaluesOnly);
  return es;
}

}  // namespace

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) {
    throw ShapeError("unvec: " + std::to_string(v.size()) +
                     " entries cannot fill " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  // Row-major scan order.
  return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic,
                                        Eigen::Dynamic, Eigen::RowMajor>>(
      v.data(), rows, cols);
}

Vector vec_identity(Index d) {
  Vector v = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return v;
}

Matrix partial_trace(const Matrix& rho, const std::vector<Index>& dims,
                     const std::vector<int>& keep) {
  if (rho.rows() != rho.cols()) {
    throw ShapeError("partial_trace: input not square");
  }
  Index total = 1;
  for (Index d : dims) {
    if (d < 1) throw ShapeError("partial_trace: register with dimension < 1");
    total *= d;
  }
  if (total != rho.rows()) {
    throw ShapeError("partial_trace: register dims multiply to " +
                     std::to_string(total) + ", matrix is " +
                     std::to_string(rho.rows()));
  }
  const int m = static_cast<int>(dims.size());
  std::vector<bool> kept(m, false);
  int prev = -1;
  for (int k : keep) {
    if (k <= prev || k >= m) {
      throw ShapeError("partial_trace: keep list must be strictly increasing "
                       "positions into dims");
    }
    kept[k] = true;
    prev = k;
  }

  // Row-major strides over the full register list.
  std::vector<Index> stride(m, 1);
  for (int i = m - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  Index dim_keep = 1, dim_trace = 1;
  std::vector<int> kpos, tpos;
  for (int i = 0; i < m; ++i) {
    if (kept[i]) {
      dim_keep *= dims[i];
      kpos.push_back(i);
    } else {
      dim_trace *= dims[i];
      tpos.push_back(i);
    }
  }

  // Flat offsets contributed by every kept / traced multi-index.
  auto offsets = [&](const std::vector<int>& pos) {
    Index count = 1;
    for (int p : pos) count *= dims[p];
    std::vector<Index> off(count, 0);
    for (Index flat = 0; flat < count; ++flat) {
      Index rem = flat;
      for (int i = static_cast<int>(pos.size()) - 1; i >= 0; --i) {
        const int p = pos[i];
        off[flat] += (rem % dims[p]) * stride[p];
        rem /= dims[p];
      }
    }
    return off;
  };
  const std::vector<Index> koff = offsets(kpos);
  const std::vector<Index> toff = offsets(tpos);

  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  for (Index a = 0; a < dim_keep; ++a) {
    for (Index b = 0; b < dim_keep; ++b) {
      Complex s = 0.0;
      for (Index t = 0; t < dim_trace; ++t) {
        s += rho(koff[a] + toff[t], koff[b] + toff[t]);
      }
      out(a, b) = s;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DensityMatrix / PureState
// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw ShapeError("DensityMatrix: matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvariantError("DensityMatrix: not Hermitian within 1e-10");
  }
  if (std::abs(m_.trace().real() - 1.0) > 1e-10 ||
      std::abs(m_.trace().imag()) > 1e-10) {
    throw InvariantError("DensityMatrix: trace differs from 1 beyond 1e-10");
  }
  const Eigen::VectorXd ev = hermitian_eigenvalues(m_);
  if (ev.minCoeff() < -1e-10) {
    throw InvariantError("DensityMatrix: eigenvalue " +
                         std::to_string(ev.minCoeff()) + " below -1e-10");
  }
}

DensityMatrix DensityMatrix::unchecked(Matrix m) {
  return DensityMatrix(std::move(m), Unchecked{});
}

PureState::PureState(Vector v) : v_(std::move(v)) {
  if (v_.rows() < 1) throw ShapeError("PureState: empty vector");
  if (std::abs(v_.squaredNorm() - 1.0) > 1e-12) {
    throw InvariantError("PureState: squared norm differs from 1 beyond 1e-12");
  }
}

PureState PureState::normalized(Vector v) {
  const double n = v.norm();
  if (!(n > 1e-300)) {
    throw ParameterError("PureState::normalized: vector has (near-)zero norm");
  }
  v /= n;
  return PureState(std::move(v), Unchecked{});
}

// ---------------------------------------------------------------------------
// Hermitian helpers
// ---------------------------------------------------------------------------

Eigen::VectorXd hermitian_eigenvalues(const Matrix& a) {
  return solve_hermitian(a, false).eigenvalues();
}

Matrix psd_sqrt(const Matrix& a, double neg_tol) {
  auto es = solve_hermitian(a, true);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -neg_tol) {
      throw InvariantError("psd_sqrt: eigenvalue " + std::to_string(ev(i)) +
                           " below -" + std::to_string(neg_tol));
    }
    ev(i) = std::sqrt(std::max(0.0, ev(i)));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix psd_pinv_sqrt(const Matrix& a, double rank_tol_rel, double neg_tol) {
  auto es = solve_hermitian(a, true);
  Eigen::VectorXd ev = es.eigenvalues();
  const double cutoff = rank_tol_rel * std::max(0.0, ev.maxCoeff());
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -neg_tol) {
      throw InvariantError("psd_pinv_sqrt: eigenvalue " +
                           std::to_string(ev(i)) + " below -" +
                           std::to_string(neg_tol));
    }
    ev(i) = ev(i) > cutoff ? 1.0 / std::sqrt(ev(i)) : 0.0;
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double operator_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// State functionals
// ---------------------------------------------------------------------------

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw ShapeError("fidelity: dimension mismatch");
  }
  const Matrix s = psd_sqrt(rho.mat());
  // Eigenvalues of sqrt(rho) sigma sqrt(rho); fidelity is the sum of their
  // square roots.
  Eigen::VectorXd ev = hermitian_eigenvalues(s * sigma.mat() * s);
  double f = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-10) {
      throw InvariantError("fidelity: interior eigenvalue below -1e-10");
    }
    f += std::sqrt(std::max(0.0, ev(i)));
  }
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const PureState& psi, const Matrix& rho) {
  if (psi.dim() != rho.rows() || rho.rows() != rho.cols()) {
    throw ShapeError("fidelity: dimension mismatch");
  }
  const double overlap = (psi.vec().adjoint() * rho * psi.vec())(0).real();
  return std::sqrt(std::clamp(overlap, 0.0, 1.0));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(rho.mat());
  double s = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-12) s -= ev(i) * std::log2(ev(i));
  }
  return std::max(0.0, s);
}

double purity(const DensityMatrix& rho) {
  return (rho.mat() * rho.mat()).trace().real();
}

// ---------------------------------------------------------------------------
// Haar sampling
// ---------------------------------------------------------------------------

Matrix haar_unitary(Index d, RandomStream& rng) {
  if (d < 1) throw ParameterError("haar_unitary: dimension must be >= 1");
  Matrix g(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  // Fixing the phases of R's diagonal makes the distribution Haar instead of
  // merely unitary.
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= (a > 0.0) ? (rjj / a) : Complex(1.0, 0.0);
  }
  return q;
}

PureState haar_state_in_subspace(const Matrix& isometry, RandomStream& rng) {
  const Index cols = isometry.cols();
  if (cols < 1 || isometry.rows() < cols) {
    throw ShapeError("haar_state_in_subspace: isometry must be tall");
  }
  const Matrix gram = isometry.adjoint() * isometry;
  if ((gram - Matrix::Identity(cols, cols)).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvariantError(
        "haar_state_in_subspace: columns not orthonormal within 1e-10");
  }
  Vector g(cols);
  for (Index i = 0; i < cols; ++i) {
    g(i) = Complex(rng.gaussian(), rng.gaussian());
  }
  return PureState::normalized(isometry * g);
}

PureState haar_state(Index d, RandomStream& rng) {
  if (d < 1) throw ParameterError("haar_state: dimension must be >= 1");
  Vector g(d);
  for (Index i = 0; i < d; ++i) {
    g(i) = Complex(rng.gaussian(), rng.gaussian());
  }
  return PureState::normalized(std::move(g));
}

}  // namespace unitalcap
