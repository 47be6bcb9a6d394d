#include "unitalcap/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "unitalcap/capacity.hpp"

namespace unitalcap {

namespace {

Index pow_index(Index base, int e) {
  Index out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

void validate_code(const CodeSpec& code) {
  if (code.n < 1) throw ParameterError("code: n must be >= 1");
  if (code.d < 1 || code.d_T < 1 || code.d_C < 1) {
    throw ParameterError("code: dimensions must be >= 1");
  }
  const Index phys = pow_index(code.d, code.n) * code.d_T;
  if (code.encoder.rows() != phys || code.encoder.cols() != code.d_C) {
    throw ShapeError("code: encoder is " + std::to_string(code.encoder.rows()) +
                     "x" + std::to_string(code.encoder.cols()) + ", expected " +
                     std::to_string(phys) + "x" + std::to_string(code.d_C));
  }
  const Matrix gram = code.encoder.adjoint() * code.encoder;
  const double err =
      (gram - Matrix::Identity(code.d_C, code.d_C)).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw InvariantError("code: encoder columns not orthonormal, deviation " +
                         g17(err));
  }
}

CodeSpec random_code(int n, Index d, Index d_T, Index d_C, RandomStream& rng) {
  CodeSpec code;
  code.n = n;
  code.d = d;
  code.d_T = d_T;
  code.d_C = d_C;
  if (n < 1 || d < 1 || d_T < 1 || d_C < 1) {
    throw ParameterError("random_code: dimensions must be >= 1");
  }
  const Index phys = pow_index(d, n) * d_T;
  if (d_C > phys) {
    throw ParameterError("random_code: d_C exceeds the physical dimension");
  }
  code.encoder = haar_unitary(phys, rng).leftCols(d_C);
  return code;
}

KrausChannel total_channel(const KrausChannel& ch, int n, Index d_T,
                           Index dim_guard, Index kraus_cap) {
  if (d_T < 1) throw ParameterError("total_channel: d_T must be >= 1");
  KrausChannel power = tensor_power(ch, n, dim_guard, kraus_cap);
  if (d_T == 1) return power;
  if (power.output_dim() * d_T > dim_guard ||
      power.input_dim() * d_T > dim_guard) {
    throw DimensionLimitError("total_channel: dimension guard exceeded");
  }
  if (power.kraus_count() * d_T > kraus_cap) {
    throw DimensionLimitError("total_channel: Kraus cap exceeded");
  }
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(power.kraus_count() * d_T));
  for (const Matrix& e : power.kraus()) {
    for (Index t = 0; t < d_T; ++t) {
      Matrix tag = Matrix::Zero(d_T, d_T);
      tag(0, t) = 1.0;
      ops.push_back(tensor_product(e, tag, dim_guard));
    }
  }
  return KrausChannel(std::move(ops));
}

DensityMatrix apply_noise_to_code(const KrausChannel& ch_total,
                                  const CodeSpec& code,
                                  const DensityMatrix& rho_logical) {
  validate_code(code);
  if (rho_logical.dim() != code.d_C) {
    throw ShapeError("apply_noise_to_code: logical state dimension mismatch");
  }
  if (ch_total.input_dim() != code.encoder.rows()) {
    throw ShapeError("apply_noise_to_code: channel/encoder dimension mismatch");
  }
  const Matrix enc =
      code.encoder * rho_logical.mat() * code.encoder.adjoint();
  return DensityMatrix::unchecked(unitalcap::apply(ch_total, enc));
}

KrausChannel petz_recovery(const KrausChannel& ch,
                           const DensityMatrix& sigma) {
  if (sigma.dim() != ch.input_dim()) {
    throw ShapeError("petz_recovery: reference state dimension mismatch");
  }
  const Matrix root_sigma = psd_sqrt(sigma.mat());
  const Matrix out_sigma = unitalcap::apply(ch, sigma.mat());
  const Matrix pinv_root = psd_pinv_sqrt(out_sigma);

  std::vector<Matrix> ops;
  ops.reserve(ch.kraus().size() + 1);
  for (const Matrix& e : ch.kraus()) {
    ops.push_back(root_sigma * e.adjoint() * pinv_root);
  }

  // sum_i R_i^dag R_i equals the projector onto supp(E(sigma)); route the
  // complement to the first input basis vector so the map is CPTP.
  const Index d_out = ch.output_dim();
  Matrix deficiency = Matrix::Identity(d_out, d_out);
  for (const Matrix& r : ops) deficiency -= r.adjoint() * r;
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      0.5 * (deficiency + deficiency.adjoint()));
  for (Index j = 0; j < d_out; ++j) {
    const double mu = es.eigenvalues()(j);
    if (mu > 0.5) {
      Matrix sink = Matrix::Zero(ch.input_dim(), d_out);
      sink.row(0) = std::sqrt(mu) * es.eigenvectors().col(j).adjoint();
      ops.push_back(std::move(sink));
    }
  }
  return KrausChannel(std::move(ops));
}

FidelityStats average_fidelity(const KrausChannel& ch_total,
                               const CodeSpec& code, const KrausChannel& rec,
                               int trials, const RandomStream& stream) {
  if (trials < 1) throw ParameterError("average_fidelity: trials must be >= 1");
  validate_code(code);
  if (rec.input_dim() != ch_total.output_dim() ||
      rec.output_dim() != ch_total.input_dim()) {
    throw ShapeError("average_fidelity: recovery shape does not invert the "
                     "channel shape");
  }
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    RandomStream trial = stream.derive(static_cast<uint64_t>(t) + 1);
    const PureState phi = haar_state(code.d_C, trial);
    const PureState psi = PureState::normalized(code.encoder * phi.vec());
    const Matrix recovered =
        unitalcap::apply(rec, unitalcap::apply(ch_total, psi.projector()));
    const double f = fidelity(psi, recovered);
    sum += f;
    sum_sq += f * f;
  }
  FidelityStats stats;
  stats.trials = trials;
  stats.mean = sum / trials;
  if (trials > 1) {
    const double var =
        std::max(0.0, (sum_sq - sum * sum / trials) / (trials - 1));
    stats.std_err = std::sqrt(var / trials);
  }
  return stats;
}

FidelityBoundCheck fidelity_bound_check(const KrausChannel& ch,
                                        const KrausChannel& rec,
                                        const WeightOperator& pi,
                                        const PureState& psi) {
  if (psi.dim() != ch.input_dim()) {
    throw ShapeError("fidelity_bound_check: state dimension mismatch");
  }
  if (pi.dim() != ch.output_dim()) {
    throw ShapeError("fidelity_bound_check: weight dimension mismatch");
  }
  const Matrix out = unitalcap::apply(ch, psi.projector());

  FidelityBoundCheck chk;
  const double f = fidelity(psi, unitalcap::apply(rec, out));
  chk.lhs = f * f;

  const Matrix back = p_pi_map(ch, pi, out);
  const double term1 = std::max(
      0.0, (psi.vec().adjoint() * back * psi.vec())(0, 0).real());
  const Matrix rec_pi2 = unitalcap::apply(rec, Matrix(pi.mat() * pi.mat()));
  const double term2 = std::max(
      0.0, (psi.vec().adjoint() * rec_pi2 * psi.vec())(0, 0).real());
  chk.rhs = std::sqrt(term1 * term2);
  return chk;
}

CodespaceVerdict codespace_bound_check(const KrausChannel& ch,
                                       const CodeSpec& code,
                                       const KrausChannel& rec,
                                       const WeightOperator& pi, int trials,
                                       const RandomStream& stream,
                                       const AscentOptions& ascent) {
  validate_code(code);
  if (code.d_T != 1) {
    throw PreconditionError(
        "codespace_bound_check: requires d_T = 1 (weight acts on the system "
        "registers only)");
  }
  const KrausChannel ch_total = total_channel(ch, code.n, code.d_T);

  CodespaceVerdict v;
  v.d_C = code.d_C;
  const FidelityStats stats =
      average_fidelity(ch_total, code, rec, trials, stream.derive(1));
  v.eta_hat = stats.mean;
  v.std_err = stats.std_err;

  AscentOptions aopts = ascent;
  aopts.stream = stream.derive(2);
  const NormEstimate g = g_map_2norm(ch, code.n, pi, aopts);
  v.g_certified = g.certified_upper.has_value();
  v.g_norm = v.g_certified ? *g.certified_upper : g.value;
  v.tr_pi_sq = pi.trace_square();

  const double eta = std::min(1.0, std::max(1e-6, v.eta_hat));
  const double eta_lo = std::min(1.0, std::max(1e-6, v.eta_hat - 3.0 * v.std_err));
  v.rhs = codespace_bound_rhs(eta, v.g_norm, v.tr_pi_sq);
  v.rhs_slack = codespace_bound_rhs(eta_lo, v.g_norm, v.tr_pi_sq);
  v.pass = static_cast<double>(v.d_C) <= v.rhs_slack + 1e-12;
  return v;
}

}  // namespace unitalcap
