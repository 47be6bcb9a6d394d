#include "unitalcap/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace unitalcap {

namespace {

// P1 T P1 built with rank-one updates; avoids forming the projectors.
Matrix traceless_block(const TransferMatrix& t) {
  const Index d = t.d_in;
  const Vector id = vec_identity(d);  // |I>, squared norm d
  const double dd = static_cast<double>(d);
  const Vector ti = t.mat * id;                 // T |I>
  const Vector tdi = t.mat.adjoint() * id;      // T^dag |I>
  const Complex iti = id.dot(ti);               // <I| T |I>
  Matrix r = t.mat;
  r.noalias() -= (id / dd) * tdi.adjoint();     // P0 T
  r.noalias() -= ti * (id / dd).adjoint();      // T P0
  r.noalias() += (iti / (dd * dd)) * id * id.adjoint();
  return r;
}

// Singular values of a square matrix, descending. Small inputs use Jacobi
// (full accuracy even at tiny singular values); larger ones go through the
// eigenvalues of M^dag M, which is accurate to ~1e-15 in sigma^2.
Eigen::VectorXd singular_values_dense(const Matrix& m) {
  if (m.rows() <= 128) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
  }
  Matrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gram + gram.adjoint()),
                                           Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();  // ascending
  Eigen::VectorXd sv(ev.size());
  for (Index i = 0; i < ev.size(); ++i) {
    sv(i) = std::sqrt(std::max(0.0, ev(ev.size() - 1 - i)));
  }
  return sv;
}

}  // namespace

SpectralReport second_singular_value(const KrausChannel& ch, Index max_dim) {
  if (ch.input_dim() != ch.output_dim()) {
    throw PreconditionError("second_singular_value: channel must be square");
  }
  if (ch.input_dim() > max_dim) {
    throw DimensionLimitError(
        "second_singular_value: dense route guarded at d <= " +
        std::to_string(max_dim));
  }
  if (!is_unital(ch, 1e-9)) {
    throw PreconditionError("second_singular_value: channel is not unital");
  }
  const TransferMatrix t = transfer_matrix(ch);
  const Index d = t.d_in;
  const Vector id = vec_identity(d);

  SpectralReport rep;
  rep.fixed_point_residual = (t.mat * id - id).norm();

  const Matrix r = traceless_block(t);
  // Coupling blocks: P0 T P1 = (P0 T) - (P0 T P0), and symmetrically.
  const double dd = static_cast<double>(d);
  const Vector tdi = t.mat.adjoint() * id;
  const Vector ti = t.mat * id;
  const Complex iti = id.dot(ti) / dd;
  // ||P0 T P1|| = || <I|T P1 ||/sqrt(d); P1 x = x - <I|x> |I>/d.
  Vector row = tdi - (std::conj(iti)) * id;
  Vector col = ti - iti * id;
  rep.offdiag_residual =
      std::max(row.norm() / std::sqrt(dd), col.norm() / std::sqrt(dd));

  Eigen::VectorXd sv = singular_values_dense(r);
  // P1 T P1 carries one synthetic zero singular value on span{|I>}.
  rep.restricted_singular_values.assign(sv.data(), sv.data() + sv.size() - 1);
  rep.lambda2 = sv.size() > 0 ? sv(0) : 0.0;
  if (rep.lambda2 > 1.0 + 1e-10) {
    throw InvariantError(
        "second_singular_value: lambda2 = " + std::to_string(rep.lambda2) +
        " exceeds 1; CPTP unital transfer matrices are contractions");
  }
  return rep;
}

BlockResiduals check_block_structure(const KrausChannel& ch, double tol) {
  if (ch.input_dim() != ch.output_dim()) {
    throw PreconditionError("check_block_structure: channel must be square");
  }
  const TransferMatrix t = transfer_matrix(ch);
  const Index d = t.d_in;
  const Index d2 = d * d;
  const Vector id = vec_identity(d);
  const double dd = static_cast<double>(d);

  const Matrix p0 = (id * id.adjoint()) / dd;
  const Matrix p1 = Matrix::Identity(d2, d2) - p0;
  const Matrix tt = t.mat.adjoint() * t.mat;

  BlockResiduals res;
  res.fixed_point_residual = (t.mat * id - id).norm();

  // lambda2 without the unitality precondition: this is a diagnostic.
  const double l2 = singular_values_dense(traceless_block(t))(0);

  const Matrix excess = p1 * tt * p1 - l2 * l2 * p1;
  res.excess_over_lambda2_sq =
      std::max(0.0, hermitian_eigenvalues(excess).maxCoeff());
  res.fixed_sector_residual = operator_norm(p0 * tt * p0 - p0);
  res.cross_residual = operator_norm(p1 * tt * p0);
  res.ok = res.excess_over_lambda2_sq <= tol &&
           res.fixed_sector_residual <= tol && res.cross_residual <= tol;
  return res;
}

bool is_expander(const KrausChannel& ch, double c, double tol) {
  const SpectralReport rep = second_singular_value(ch);
  const double k = static_cast<double>(ch.kraus_count());
  return std::abs(rep.lambda2 * rep.lambda2 - c / k) <= tol;
}

double lambda2_power_estimate(const KrausChannel& ch, int max_iter,
                              double tol) {
  if (ch.input_dim() != ch.output_dim()) {
    throw PreconditionError("lambda2_power_estimate: channel must be square");
  }
  if (!is_unital(ch, 1e-9)) {
    throw PreconditionError("lambda2_power_estimate: channel is not unital");
  }
  const Index d = ch.input_dim();
  const double dd = static_cast<double>(d);

  auto project_traceless = [&](Matrix& x) {
    const Complex tr = x.trace() / dd;
    x -= tr * Matrix::Identity(d, d);
  };
  auto apply_forward = [&](const Matrix& x) {
    Matrix y = unitalcap::apply(ch, x);
    project_traceless(y);
    return y;
  };
  auto apply_adjoint = [&](const Matrix& x) {
    Matrix y = adjoint_apply(ch, x);
    project_traceless(y);
    return y;
  };

  // Deterministic full-rank start in the traceless sector.
  RandomStream rng(0x1234567f);
  Matrix x(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      x(i, j) = Complex(rng.gaussian(), rng.gaussian());
  project_traceless(x);
  x /= x.norm();

  double sigma2 = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Matrix y = apply_adjoint(apply_forward(x));
    const double next = y.norm();  // Rayleigh estimate of sigma^2
    if (!(next > 0.0)) return 0.0;
    y /= next;
    x.swap(y);
    if (std::abs(next - sigma2) <= tol * std::max(1.0, next)) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
  }
  return std::sqrt(std::max(0.0, sigma2));
}

}  // namespace unitalcap
