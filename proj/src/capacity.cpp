#include "unitalcap/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "unitalcap/linalg.hpp"

namespace unitalcap {

double q_upper_unital(Index d, double lambda2) {
  if (d < 1) throw ParameterError("q_upper_unital: d must be >= 1");
  if (lambda2 < 0.0) {
    throw ParameterError("q_upper_unital: lambda2 must be >= 0");
  }
  return std::log2(1.0 + static_cast<double>(d) * lambda2 * lambda2);
}

double q_upper_2norm(Index d, double lambda2, int n) {
  if (n < 1) throw ParameterError("q_upper_2norm: n must be >= 1");
  const double bound_n = spectral_2norm_bound(d, lambda2, n);
  return std::log2(static_cast<double>(d)) +
         std::log2(bound_n) / static_cast<double>(n);
}

double q_upper_unital(const KrausChannel& ch) {
  return q_upper_unital(ch.input_dim(), second_singular_value(ch).lambda2);
}

double q_upper_2norm(const KrausChannel& ch, int n) {
  return q_upper_2norm(ch.input_dim(), second_singular_value(ch).lambda2, n);
}

double coherent_information(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.input_dim()) {
    throw ShapeError("coherent_information: state dimension " +
                     std::to_string(rho.dim()) + " does not match channel input " +
                     std::to_string(ch.input_dim()));
  }
  const double s_out =
      von_neumann_entropy(DensityMatrix::unchecked(unitalcap::apply(ch, rho.mat())));

  // Columns of W flatten Ei sqrt(rho); the joint output (E (x) id)(Psi)
  // equals sum_i w_i w_i^dag, so its nonzero spectrum is that of W^dag W.
  const Matrix root = psd_sqrt(rho.mat());
  const Index k = ch.kraus_count();
  const Index d_out = ch.output_dim();
  Matrix w(d_out * rho.dim(), k);
  for (Index i = 0; i < k; ++i) {
    const Matrix ci = ch.kraus()[static_cast<std::size_t>(i)] * root;
    w.col(i) = Eigen::Map<const Vector>(ci.data(), ci.size());
  }
  const Matrix gram = w.adjoint() * w;
  const double s_joint = von_neumann_entropy(DensityMatrix::unchecked(gram));
  return s_out - s_joint;
}

double q_lower_lsd(const KrausChannel& ch, int trials, RandomStream stream) {
  if (trials < 0) throw ParameterError("q_lower_lsd: trials must be >= 0");
  const Index d = ch.input_dim();
  double best = coherent_information(
      ch, DensityMatrix::unchecked(Matrix::Identity(d, d) /
                                   static_cast<double>(d)));
  for (int t = 0; t < trials; ++t) {
    RandomStream trial = stream.derive(static_cast<uint64_t>(t) + 1);
    const PureState psi = haar_state(d * d, trial);
    const Matrix w = unvec(psi.vec(), d, d);
    const DensityMatrix rho = DensityMatrix::unchecked(w * w.adjoint());
    best = std::max(best, coherent_information(ch, rho));
  }
  return std::max(0.0, best);
}

CapacityReport capacity_report(const KrausChannel& ch,
                               const CapacityOptions& opts) {
  const Index d = ch.input_dim();
  double lambda2;
  if (d <= opts.lambda2_max_dim) {
    lambda2 = second_singular_value(ch, opts.lambda2_max_dim).lambda2;
  } else {
    // Too big for the dense solve; the power estimate needs the same
    // preconditions the dense route enforces.
    if (ch.input_dim() != ch.output_dim() || !is_unital(ch)) {
      throw PreconditionError("capacity_report: channel must be unital");
    }
    lambda2 = lambda2_power_estimate(ch);
  }
  const double via_unital = q_upper_unital(d, lambda2);
  const double via_2norm = q_upper_2norm(d, lambda2, opts.tensor_n);

  CapacityReport rep;
  rep.lambda2 = lambda2;
  if (via_unital <= via_2norm) {
    rep.upper_bits = via_unital;
    rep.upper_method = "unital-lambda2";
  } else {
    rep.upper_bits = via_2norm;
    rep.upper_method = "tensor-2norm";
  }
  rep.lower_bits = q_lower_lsd(ch, opts.lsd_trials, opts.stream);
  rep.lower_method = "lsd-coherent-information";
  rep.gap_bits = rep.upper_bits - rep.lower_bits;
  return rep;
}

FidelityDecay fidelity_decay(double beta, int n) {
  if (!(beta > 0.0)) {
    throw ParameterError("fidelity_decay: beta must be positive");
  }
  if (n < 1) throw ParameterError("fidelity_decay: n must be >= 1");
  return FidelityDecay{beta, n,
                       std::pow(1.0 + beta, -0.25 * static_cast<double>(n))};
}

double codespace_bound_rhs(double eta, double g_norm_bound, double tr_pi_sq) {
  if (!(eta > 0.0) || eta > 1.0 + 1e-12) {
    throw ParameterError("codespace_bound_rhs: eta must lie in (0, 1]");
  }
  if (g_norm_bound < 0.0 || tr_pi_sq < 0.0) {
    throw ParameterError("codespace_bound_rhs: bounds must be nonnegative");
  }
  const double e2 = eta * eta;
  return g_norm_bound * tr_pi_sq / (e2 * e2);
}

double codespace_bound_rhs(const KrausChannel& ch, int n,
                           const WeightOperator& pi, double eta,
                           const AscentOptions& opts) {
  const NormEstimate est = g_map_2norm(ch, n, pi, opts);
  const double b = est.certified_upper ? *est.certified_upper : est.value;
  return codespace_bound_rhs(eta, b, pi.trace_square());
}

ZeroErrorBound zero_error_upper(const KrausChannel& ch, int n,
                                const WeightOperator& pi,
                                const AscentOptions& opts) {
  if (n < 1) throw ParameterError("zero_error_upper: n must be >= 1");
  const NormEstimate est = g_map_2norm(ch, n, pi, opts);
  ZeroErrorBound out;
  out.certified = est.certified_upper.has_value();
  out.g_norm = out.certified ? *est.certified_upper : est.value;
  if (!(out.g_norm > 0.0)) {
    throw InvariantError("zero_error_upper: two-norm bound is not positive");
  }
  const double tr = pi.trace();
  out.bits = (std::log2(out.g_norm) + 2.0 * std::log2(tr)) /
             static_cast<double>(n);
  return out;
}

}  // namespace unitalcap
