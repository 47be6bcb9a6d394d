#include "unitalcap/channel.hpp"

#include <cmath>
#include <numbers>

namespace unitalcap {

KrausChannel::KrausChannel(std::vector<Matrix> ops)
    : KrausChannel(std::move(ops), true) {}

KrausChannel KrausChannel::unchecked(std::vector<Matrix> ops) {
  return KrausChannel(std::move(ops), false);
}

KrausChannel::KrausChannel(std::vector<Matrix> ops, bool validate)
    : ops_(std::move(ops)) {
  if (ops_.empty()) {
    throw InvariantError("KrausChannel: needs at least one operator");
  }
  d_out_ = ops_[0].rows();
  d_in_ = ops_[0].cols();
  if (d_in_ < 1 || d_out_ < 1) {
    throw ShapeError("KrausChannel: empty operator");
  }
  for (const Matrix& k : ops_) {
    if (k.rows() != d_out_ || k.cols() != d_in_) {
      throw ShapeError("KrausChannel: operators differ in shape");
    }
  }
  if (!validate) return;
  Matrix acc = Matrix::Zero(d_in_, d_in_);
  for (const Matrix& k : ops_) acc += k.adjoint() * k;
  const double res =
      (acc - Matrix::Identity(d_in_, d_in_)).cwiseAbs().maxCoeff();
  if (res > 1e-9) {
    throw InvariantError(
        "KrausChannel: sum K^dagger K differs from identity by " +
        std::to_string(res));
  }
}

Matrix apply(const KrausChannel& ch, const Matrix& rho) {
  if (rho.rows() != ch.input_dim() || rho.cols() != ch.input_dim()) {
    throw ShapeError("apply: operand does not match channel input dimension");
  }
  Matrix out = Matrix::Zero(ch.output_dim(), ch.output_dim());
  for (const Matrix& k : ch.kraus()) out += k * rho * k.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  // CPTP maps send states to states; skip revalidation.
  return DensityMatrix::unchecked(unitalcap::apply(ch, rho.mat()));
}

Matrix adjoint_apply(const KrausChannel& ch, const Matrix& x) {
  if (x.rows() != ch.output_dim() || x.cols() != ch.output_dim()) {
    throw ShapeError(
        "adjoint_apply: operand does not match channel output dimension");
  }
  Matrix out = Matrix::Zero(ch.input_dim(), ch.input_dim());
  for (const Matrix& k : ch.kraus()) out += k.adjoint() * x * k;
  return out;
}

TransferMatrix transfer_matrix(const KrausChannel& ch) {
  const Index din2 = ch.input_dim() * ch.input_dim();
  const Index dout2 = ch.output_dim() * ch.output_dim();
  Matrix t = Matrix::Zero(dout2, din2);
  for (const Matrix& k : ch.kraus()) {
    t += tensor_product(k, k.conjugate(), std::max(din2, dout2));
  }
  return TransferMatrix{std::move(t), ch.input_dim(), ch.output_dim()};
}

bool is_unital(const KrausChannel& ch, double tol) {
  if (ch.input_dim() != ch.output_dim()) return false;
  Matrix acc = Matrix::Zero(ch.output_dim(), ch.output_dim());
  for (const Matrix& k : ch.kraus()) acc += k * k.adjoint();
  acc -= Matrix::Identity(ch.output_dim(), ch.output_dim());
  return operator_norm(acc) <= tol;
}

KrausChannel tensor_power(const KrausChannel& ch, int n, Index dim_guard,
                          Index kraus_cap) {
  if (n < 1) throw ParameterError("tensor_power: n must be >= 1");
  const Index k = ch.kraus_count();
  double kn = 1.0, din = 1.0, dout = 1.0;
  for (int i = 0; i < n; ++i) {
    kn *= static_cast<double>(k);
    din *= static_cast<double>(ch.input_dim());
    dout *= static_cast<double>(ch.output_dim());
  }
  if (kn > static_cast<double>(kraus_cap)) {
    throw DimensionLimitError("tensor_power: k^n exceeds operator cap " +
                              std::to_string(kraus_cap));
  }
  if (din > static_cast<double>(dim_guard) ||
      dout > static_cast<double>(dim_guard)) {
    throw DimensionLimitError("tensor_power: d^n exceeds dimension guard " +
                              std::to_string(dim_guard));
  }

  std::vector<Matrix> ops = {Matrix::Ones(1, 1)};
  for (int i = 0; i < n; ++i) {
    std::vector<Matrix> next;
    next.reserve(ops.size() * ch.kraus().size());
    for (const Matrix& a : ops) {
      for (const Matrix& b : ch.kraus()) {
        next.push_back(tensor_product(a, b, dim_guard));
      }
    }
    ops.swap(next);
  }
  // Products of trace-preserving sets are trace preserving; constructor
  // re-checks as a numerical safety net.
  return KrausChannel(std::move(ops));
}

KrausChannel unitary_mixture(const std::vector<Matrix>& unitaries,
                             const std::vector<double>& probs) {
  if (unitaries.empty() || unitaries.size() != probs.size()) {
    throw ShapeError("unitary_mixture: need matching nonempty lists");
  }
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw ParameterError("unitary_mixture: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ParameterError("unitary_mixture: probabilities sum to " +
                         std::to_string(total));
  }
  const Index d = unitaries[0].rows();
  std::vector<Matrix> ops;
  ops.reserve(unitaries.size());
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    const Matrix& u = unitaries[i];
    if (u.rows() != d || u.cols() != d) {
      throw ShapeError("unitary_mixture: unitaries differ in shape");
    }
    if ((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() >
        1e-10) {
      throw InvariantError("unitary_mixture: operator " + std::to_string(i) +
                           " not unitary within 1e-10");
    }
    ops.push_back(std::sqrt(probs[i]) * u);
  }
  return KrausChannel(std::move(ops));
}

KrausChannel identity_channel(Index d) {
  if (d < 1) throw ParameterError("identity_channel: dimension must be >= 1");
  return KrausChannel({Matrix::Identity(d, d)});
}

Matrix weyl_operator(Index d, Index a, Index b) {
  if (d < 1 || a < 0 || b < 0 || a >= d || b >= d) {
    throw ParameterError("weyl_operator: indices must lie in [0, d)");
  }
  Matrix w = Matrix::Zero(d, d);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(d);
  for (Index j = 0; j < d; ++j) {
    // X^a Z^b |j> = omega^{b j} |j + a mod d>.
    const double phase = step * static_cast<double>(b) * static_cast<double>(j);
    w((j + a) % d, j) = Complex(std::cos(phase), std::sin(phase));
  }
  return w;
}

KrausChannel depolarizing_channel(Index d, double p) {
  if (d < 2) throw ParameterError("depolarizing_channel: d must be >= 2");
  const double d2 = static_cast<double>(d * d);
  if (p < 0.0 || p > d2 / (d2 - 1.0)) {
    throw ParameterError("depolarizing_channel: p outside [0, d^2/(d^2-1)]");
  }
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(d * d));
  const double w_id = std::sqrt(1.0 - p * (d2 - 1.0) / d2);
  const double w_rest = std::sqrt(p / d2);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      const double w = (a == 0 && b == 0) ? w_id : w_rest;
      ops.push_back(w * weyl_operator(d, a, b));
    }
  }
  return KrausChannel(std::move(ops));
}

KrausChannel dephasing_channel(double p) {
  if (p < 0.0 || p > 1.0) {
    throw ParameterError("dephasing_channel: p outside [0, 1]");
  }
  Matrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  return KrausChannel(
      {std::sqrt(1.0 - p) * Matrix::Identity(2, 2), std::sqrt(p) * z});
}

KrausChannel random_kraus_channel(Index d, Index k, RandomStream& rng) {
  if (d < 1 || k < 1) {
    throw ParameterError("random_kraus_channel: need d >= 1 and k >= 1");
  }
  const Matrix u = haar_unitary(d * k, rng);
  // V = U[:, :d] is a Haar isometry d -> d*k; slicing its environment rows
  // gives a CPTP Kraus set.
  std::vector<Matrix> ops(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    Matrix e(d, d);
    for (Index r = 0; r < d; ++r) {
      for (Index c = 0; c < d; ++c) e(r, c) = u(r * k + i, c);
    }
    ops[static_cast<std::size_t>(i)] = std::move(e);
  }
  return KrausChannel(std::move(ops));
}

// ---------------------------------------------------------------------------
// WeightOperator
// ---------------------------------------------------------------------------

WeightOperator::WeightOperator(Matrix pi, double rank_tol_rel)
    : m_(std::move(pi)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw ShapeError("WeightOperator: matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvariantError("WeightOperator: not Hermitian within 1e-10");
  }
  m_ = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double vmax = std::max(0.0, ev.maxCoeff());
  if (ev.minCoeff() < -1e-10 * std::max(1.0, vmax)) {
    throw InvariantError("WeightOperator: eigenvalue " +
                         std::to_string(ev.minCoeff()) +
                         " below PSD tolerance");
  }
  const double cutoff = rank_tol_rel * vmax;
  const Index d = m_.rows();
  proj_ = Matrix::Zero(d, d);
  pinv_ = Matrix::Zero(d, d);
  pinv_sqrt_ = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    trace_ += ev(i);
    trace_sq_ += ev(i) * ev(i);
    if (ev(i) > cutoff) {
      ++rank_;
      const Matrix v = es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      proj_ += v;
      pinv_ += v / ev(i);
      pinv_sqrt_ += v / std::sqrt(ev(i));
    }
  }
}

bool WeightOperator::is_identity(double tol) const {
  return (m_ - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
}

double WeightOperator::support_leak(const Matrix& rho) const {
  const double w = rho.norm();
  if (!(w > 0.0)) return 0.0;
  return (rho - proj_ * rho * proj_).norm() / w;
}

Matrix p_pi_map(const KrausChannel& ch, const WeightOperator& pi,
                const Matrix& rho) {
  if (pi.dim() != ch.output_dim()) {
    throw ShapeError("p_pi_map: weight does not act on the channel output");
  }
  if (pi.support_leak(rho) > 1e-8) {
    throw SupportError(
        "p_pi_map: operand leaks outside supp(Pi) beyond 1e-8 of its weight");
  }
  return adjoint_apply(ch, pi.pinv() * rho * pi.pinv());
}

Matrix g_map(const KrausChannel& ch, const WeightOperator& pi,
             const DensityMatrix& rho) {
  if (pi.dim() != ch.output_dim()) {
    throw ShapeError("g_map: weight does not act on the channel output");
  }
  const Matrix out = unitalcap::apply(ch, rho.mat());
  if (pi.support_leak(out) > 1e-8) {
    throw SupportError(
        "g_map: channel output leaks outside supp(Pi) beyond 1e-8");
  }
  Matrix g = pi.pinv_sqrt() * out * pi.pinv_sqrt();
  return 0.5 * (g + g.adjoint());
}

}  // namespace unitalcap
