#include "unitalcap/expander.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "unitalcap/linalg.hpp"

namespace unitalcap {

KrausChannel random_expander_channel(Index d, int k, RandomStream& stream) {
  if (d < 1) throw ParameterError("random_expander_channel: d must be >= 1");
  if (k < 2 || k % 2 != 0) {
    throw ParameterError("random_expander_channel: k must be even and >= 2");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k / 2; ++i) {
    const Matrix u = haar_unitary(d, stream);
    ops.push_back(scale * u);
    ops.push_back(scale * u.adjoint());
  }
  return KrausChannel(std::move(ops));
}

ExpanderWindow expander_capacity_window(Index d, int k, double c_hat) {
  if (d < 1 || k < 1) {
    throw ParameterError("expander_capacity_window: d, k must be >= 1");
  }
  if (c_hat < 0.0) {
    throw ParameterError("expander_capacity_window: c_hat must be >= 0");
  }
  const double base =
      std::log2(static_cast<double>(d)) - std::log2(static_cast<double>(k));
  ExpanderWindow w;
  w.q_lower_bits = std::max(0.0, base);
  w.q_upper_bits = std::max(
      0.0, base + std::log2(c_hat + static_cast<double>(k) /
                                        static_cast<double>(d)));
  return w;
}

namespace {

// Shared measurement core: lambda2, the capacity window, and the norms.
// mult_n < 2 (or a norm at 1) leaves alpha_hat empty.
ExpanderSample measure(const KrausChannel& ch, Index d, int k,
                       const RandomStream& stream,
                       const ExpanderOptions& opts) {
  ExpanderSample s;
  s.seed = stream.seed();
  s.d = d;
  s.k = k;

  const double lambda2 = d <= opts.lambda2_max_dim
                             ? second_singular_value(ch, opts.lambda2_max_dim)
                                   .lambda2
                             : lambda2_power_estimate(ch);
  s.lambda2_sq = lambda2 * lambda2;
  s.c_hat = static_cast<double>(k) * s.lambda2_sq;

  const ExpanderWindow w = expander_capacity_window(d, k, s.c_hat);
  s.q_upper_bits = w.q_upper_bits;
  s.q_lower_bits = w.q_lower_bits;

  AscentOptions aopts;
  aopts.restarts = opts.ascent_restarts;
  aopts.max_iter = opts.ascent_max_iter;
  aopts.tol = opts.ascent_tol;
  aopts.dim_guard = opts.dim_guard;
  aopts.stream = stream.derive(2);
  s.norm2_est = output_2norm(ch, aopts).value;
  s.norm2_cert_upper =
      std::min(1.0, 1.0 / static_cast<double>(d) + s.lambda2_sq);

  if (opts.mult_n >= 2) {
    aopts.stream = stream.derive(3);
    try {
      s.alpha_hat =
          multiplicativity_report(ch, opts.mult_n, aopts, lambda2).alpha_hat;
    } catch (const ExponentUndefinedError&) {
      s.alpha_hat = std::nullopt;
    } catch (const DimensionLimitError&) {
      s.alpha_hat = std::nullopt;
    }
  }
  return s;
}

}  // namespace

ExpanderSample draw_expander_sample(Index d, int k, const RandomStream& stream,
                                    const ExpanderOptions& opts) {
  RandomStream unitary_stream = stream.derive(1);
  const KrausChannel ch = random_expander_channel(d, k, unitary_stream);
  return measure(ch, d, k, stream, opts);
}

ExpanderSample expander_capacity_report(const KrausChannel& ch,
                                        const ExpanderOptions& opts,
                                        const RandomStream& stream) {
  if (ch.input_dim() != ch.output_dim() || !is_unital(ch, 1e-9)) {
    throw PreconditionError("expander_capacity_report: channel must be unital");
  }
  ExpanderSample s = measure(ch, ch.input_dim(),
                             static_cast<int>(ch.kraus_count()), stream, opts);
  s.seed = 0;
  return s;
}

MultiplicativityVerdict multiplicativity_survey(const KrausChannel& ch, int n,
                                                const AscentOptions& opts,
                                                double margin) {
  const Index k = ch.kraus_count();
  if (k < 2) {
    throw ParameterError("multiplicativity_survey: needs k >= 2 operators");
  }
  MultiplicativityReport rep = multiplicativity_report(ch, n, opts);
  const double spread = 4.0 / std::log2(static_cast<double>(k));
  const double lo = 1.0 - spread;
  const double hi = 1.0 + spread;
  const bool ok_lo = rep.alpha_hat >= lo - margin;
  const bool ok_hi = rep.alpha_hat <= hi + margin;
  return MultiplicativityVerdict{std::move(rep), lo, hi, margin, ok_lo, ok_hi};
}

EnsembleReport ensemble_survey(Index d, int k, int trials, double eps,
                               const RandomStream& stream,
                               const ExpanderOptions& opts) {
  if (trials < 1) throw ParameterError("ensemble_survey: trials must be >= 1");
  std::vector<ExpanderSample> samples;
  samples.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    samples.push_back(draw_expander_sample(
        d, k, stream.derive(static_cast<uint64_t>(t) + 1), opts));
  }
  return summarize_ensemble(d, k, eps, std::move(samples));
}

EnsembleReport summarize_ensemble(Index d, int k, double eps,
                                  std::vector<ExpanderSample> samples) {
  if (samples.empty()) {
    throw ParameterError("summarize_ensemble: need at least one sample");
  }
  if (eps < 0.0) throw ParameterError("summarize_ensemble: eps must be >= 0");

  EnsembleReport rep;
  rep.d = d;
  rep.k = k;
  rep.eps = eps;
  rep.samples = std::move(samples);

  const double tight = (4.0 + 4.0 * eps) / static_cast<double>(k);
  const double loose = (4.0 + 5.0 * eps) / static_cast<double>(k);
  int n_tight = 0, n_loose = 0;
  std::vector<double> c_hats;
  c_hats.reserve(rep.samples.size());
  for (const ExpanderSample& s : rep.samples) {
    if (s.lambda2_sq <= tight) ++n_tight;
    if (s.lambda2_sq <= loose) ++n_loose;
    c_hats.push_back(s.c_hat);
  }
  const double total = static_cast<double>(rep.samples.size());
  rep.frac_within_tight = static_cast<double>(n_tight) / total;
  rep.frac_within_loose = static_cast<double>(n_loose) / total;

  std::sort(c_hats.begin(), c_hats.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(c_hats.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, c_hats.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return c_hats[lo] * (1.0 - frac) + c_hats[hi] * frac;
  };
  rep.c_hat_quantiles = {quantile(0.0), quantile(0.25), quantile(0.5),
                         quantile(0.75), quantile(1.0)};
  return rep;
}

void write_csv(std::ostream& os, const std::vector<ExpanderSample>& samples) {
  os << "seed,d,k,lambda2_sq,c_hat,q_upper_bits,q_lower_bits,norm2_est,"
        "norm2_cert_upper,alpha_hat\n";
  for (const ExpanderSample& s : samples) {
    os << s.seed << ',' << s.d << ',' << s.k << ',' << g17(s.lambda2_sq) << ','
       << g17(s.c_hat) << ',' << g17(s.q_upper_bits) << ','
       << g17(s.q_lower_bits) << ',' << g17(s.norm2_est) << ','
       << g17(s.norm2_cert_upper) << ','
       << (s.alpha_hat ? g17(*s.alpha_hat) : "nan") << '\n';
  }
}

std::string to_csv(const std::vector<ExpanderSample>& samples) {
  std::ostringstream os;
  write_csv(os, samples);
  return os.str();
}

}  // namespace unitalcap
