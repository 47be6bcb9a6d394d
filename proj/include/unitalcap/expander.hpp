#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "unitalcap/norms.hpp"
#include "unitalcap/spectral.hpp"

// Random expander-style unital channels: mixtures of k/2 Haar unitaries and
// their inverses, each with weight 1/k. Surveys of their spectral gap,
// capacity window, and 2-norm multiplicativity.

namespace unitalcap {

// Kraus set {U_i / sqrt(k), U_i^dag / sqrt(k)} for k/2 independent Haar
// unitaries drawn from `stream` (advanced in place). k must be even, >= 2.
KrausChannel random_expander_channel(Index d, int k, RandomStream& stream);

struct ExpanderWindow {
  double q_upper_bits = 0.0;  // max(0, log2(d/k) + log2(c_hat + k/d))
  double q_lower_bits = 0.0;  // max(0, log2(d/k))
};

// Capacity window implied by c_hat = k * lambda2^2. Away from the clamps at
// zero the gap is exactly log2(c_hat + k/d).
ExpanderWindow expander_capacity_window(Index d, int k, double c_hat);

struct ExpanderOptions {
  // Survey-grade ascent: the product warm start carries the estimate, so a
  // single extra random restart and a loose tolerance are enough here.
  int ascent_restarts = 2;
  int ascent_max_iter = 150;
  double ascent_tol = 1e-9;
  int mult_n = 2;             // tensor exponent for alpha_hat; < 2 disables
  Index lambda2_max_dim = 64;  // above this, use the matrix-free estimate
  Index dim_guard = kDefaultDimGuard;
};

struct ExpanderSample {
  uint64_t seed = 0;  // seed of the stream this draw consumed
  Index d = 0;
  int k = 0;
  double lambda2_sq = 0.0;
  double c_hat = 0.0;  // k * lambda2_sq
  double q_upper_bits = 0.0;
  double q_lower_bits = 0.0;
  double norm2_est = 0.0;         // ascent estimate of the single-copy 2-norm
  double norm2_cert_upper = 0.0;  // min(1, 1/d + lambda2_sq)
  std::optional<double> alpha_hat;  // multiplicativity exponent at mult_n
};

// One full measurement of a fresh draw. Substreams: derive(1) feeds the
// unitaries, derive(2) the single-copy ascent, derive(3) the tensor ascent.
ExpanderSample draw_expander_sample(Index d, int k, const RandomStream& stream,
                                    const ExpanderOptions& opts = {});

// Same measurements for an existing unital channel: lambda2, the capacity
// window, and the single-copy 2-norm with its certified ceiling
// min(1, 1/d + lambda2^2). The seed field records `stream`, which drives the
// ascents; alpha_hat follows opts.mult_n as in draw_expander_sample.
ExpanderSample expander_capacity_report(const KrausChannel& ch,
                                        const ExpanderOptions& opts = {},
                                        const RandomStream& stream = RandomStream(0));

struct MultiplicativityVerdict {
  MultiplicativityReport report;
  double exponent_low;   // 1 - 4/log2(k)
  double exponent_high;  // 1 + 4/log2(k)
  double margin;
  bool within_low;   // alpha_hat >= exponent_low - margin
  bool within_high;  // alpha_hat <= exponent_high + margin
};

// Multiplicativity exponent with the near-multiplicativity window implied
// by a k-operator expander. Requires k >= 2.
MultiplicativityVerdict multiplicativity_survey(const KrausChannel& ch, int n,
                                                const AscentOptions& opts = {},
                                                double margin = 0.05);

struct EnsembleReport {
  Index d = 0;
  int k = 0;
  double eps = 0.0;
  std::vector<ExpanderSample> samples;
  // Fractions of draws with lambda2^2 below the two conjectured ceilings.
  double frac_within_tight = 0.0;  // lambda2^2 <= (4 + 4 eps) / k
  double frac_within_loose = 0.0;  // lambda2^2 <= (4 + 5 eps) / k
  std::array<double, 5> c_hat_quantiles{};  // min, q25, median, q75, max
};

// `trials` independent draws; trial t uses stream.derive(t + 1).
EnsembleReport ensemble_survey(Index d, int k, int trials, double eps,
                               const RandomStream& stream,
                               const ExpanderOptions& opts = {});

// Fractions and quantiles over already-drawn samples (order-independent).
EnsembleReport summarize_ensemble(Index d, int k, double eps,
                                  std::vector<ExpanderSample> samples);

// CSV with the fixed header
// seed,d,k,lambda2_sq,c_hat,q_upper_bits,q_lower_bits,norm2_est,
// norm2_cert_upper,alpha_hat (one line). Doubles render via g17; a missing
// alpha_hat renders as nan. Byte-identical for identical samples.
void write_csv(std::ostream& os, const std::vector<ExpanderSample>& samples);
std::string to_csv(const std::vector<ExpanderSample>& samples);

}  // namespace unitalcap
