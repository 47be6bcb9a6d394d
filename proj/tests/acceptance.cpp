// Acceptance harness: one line per criterion, exit code = number of
// failures. Each criterion re-derives its oracle from closed forms, so a
// regression anywhere in the stack flips a line to FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unitalcap/capacity.hpp"
#include "unitalcap/expander.hpp"
#include "unitalcap/recovery.hpp"
#include "unitalcap/verification.hpp"

using namespace unitalcap;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

Outcome suite_outcome(const SuiteResult& res, double seconds,
                      std::optional<double> budget_s) {
  Outcome o;
  o.ok = res.pass();
  std::ostringstream os;
  os << res.checks << " checks, " << res.violations << " violations, worst slack "
     << g17(res.worst_slack);
  if (res.first_bad_seed) os << ", first bad seed " << *res.first_bad_seed;
  if (budget_s && seconds > *budget_s) {
    o.ok = false;
    os << ", over the " << *budget_s << "s budget";
  }
  o.detail = os.str();
  return o;
}

Outcome check_depolarizing_closed_forms() {
  Outcome o;
  o.ok = true;
  double worst_l2 = 0.0, worst_norm = 0.0;
  for (Index d : {2, 3}) {
    for (double p : {0.0, 0.2, 0.5, 1.0}) {
      const KrausChannel ch = depolarizing_channel(d, p);
      const double l2 = second_singular_value(ch).lambda2;
      worst_l2 = std::max(worst_l2, std::abs(l2 - std::abs(1.0 - p)));

      AscentOptions opts;
      opts.restarts = 4;
      opts.max_iter = 300;
      opts.tol = 1e-13;
      opts.stream = RandomStream(40 + static_cast<uint64_t>(10.0 * p));
      const double want = (1.0 - p + p / double(d)) * (1.0 - p + p / double(d)) +
                          double(d - 1) * (p / double(d)) * (p / double(d));
      const double got = output_2norm(ch, opts).value;
      worst_norm = std::max(worst_norm, std::abs(got - want));
    }
  }
  if (worst_l2 > 1e-10) o.ok = false;
  if (worst_norm > 1e-6) o.ok = false;
  std::ostringstream os;
  os << "max |lambda2 - |1-p|| = " << g17(worst_l2)
     << ", max norm deviation = " << g17(worst_norm);
  o.detail = os.str();
  return o;
}

Outcome check_capacity_sandwich() {
  Outcome o;
  o.ok = true;
  std::ostringstream os;
  CapacityOptions copts;
  copts.lsd_trials = 4;
  copts.stream = RandomStream(50);

  for (Index d : {2, 3}) {
    const CapacityReport rep = capacity_report(identity_channel(d), copts);
    if (std::abs(rep.upper_bits - std::log2(1.0 + double(d))) > 1e-9) o.ok = false;
    if (std::abs(rep.lower_bits - std::log2(double(d))) > 1e-9) o.ok = false;
  }
  const CapacityReport flat = capacity_report(depolarizing_channel(2, 1.0), copts);
  if (std::abs(flat.upper_bits) > 1e-9 || std::abs(flat.lower_bits) > 1e-9)
    o.ok = false;

  const CapacityReport mid = capacity_report(depolarizing_channel(2, 0.2), copts);
  if (std::abs(mid.upper_bits - std::log2(2.28)) > 1e-9) o.ok = false;
  if (mid.lower_bits < 0.152 - 1e-3) o.ok = false;

  os << "identity/flat exact, depolarizing(2,0.2) upper "
     << g17(mid.upper_bits) << ", lower " << g17(mid.lower_bits);
  o.detail = os.str();
  return o;
}

Outcome check_expander_ensemble(double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  o.ok = true;
  const Index d = 32;
  const int k = 8;
  const int trials = 20;
  const RandomStream master(0);
  ExpanderOptions opts;

  const EnsembleReport rep = ensemble_survey(d, k, trials, 1.0, master, opts);
  const double alpha_low = 1.0 - 4.0 / std::log2(double(k)) - 0.05;
  std::ostringstream os;
  double max_l2sq = 0.0, worst_gap_dev = 0.0;
  double alpha_min = 2.0, alpha_max = -2.0;
  int unital_ok = 0;
  for (int t = 0; t < trials; ++t) {
    const ExpanderSample& s = rep.samples[static_cast<std::size_t>(t)];
    const RandomStream trial = master.derive(static_cast<uint64_t>(t) + 1);
    if (s.seed != trial.seed()) o.ok = false;
    RandomStream us = trial.derive(1);
    const KrausChannel ch = random_expander_channel(d, k, us);
    if (is_unital(ch, 1e-9)) ++unital_ok;

    max_l2sq = std::max(max_l2sq, s.lambda2_sq);
    const double gap = s.q_upper_bits - s.q_lower_bits;
    worst_gap_dev = std::max(
        worst_gap_dev,
        std::abs(gap - std::log2(s.c_hat + double(k) / double(d))));
    if (!s.alpha_hat) {
      o.ok = false;
      continue;
    }
    alpha_min = std::min(alpha_min, *s.alpha_hat);
    alpha_max = std::max(alpha_max, *s.alpha_hat);
  }
  if (unital_ok != trials) o.ok = false;
  if (!(max_l2sq < 0.9)) o.ok = false;
  if (worst_gap_dev > 1e-12) o.ok = false;
  if (alpha_min < alpha_low || alpha_max > 1.0 + 1e-6) o.ok = false;

  // Determinism: a second full run must serialize to the same bytes.
  const EnsembleReport rerun = ensemble_survey(d, k, trials, 1.0, master, opts);
  const bool same_csv = to_csv(rerun.samples) == to_csv(rep.samples);
  if (!same_csv) o.ok = false;

  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
  if (seconds > 600.0) o.ok = false;
  os << unital_ok << "/20 unital, max lambda2^2 " << g17(max_l2sq)
     << ", max gap deviation " << g17(worst_gap_dev) << ", alpha in ["
     << g17(alpha_min) << ", " << g17(alpha_max) << "], csv "
     << (same_csv ? "stable" : "UNSTABLE");
  o.detail = os.str();
  return o;
}

Outcome check_decay_and_zero_error() {
  Outcome o;
  o.ok = true;
  const double decay = fidelity_decay(1.0, 10).eta_bound;
  if (std::abs(decay - std::pow(2.0, -2.5)) > 1e-12) o.ok = false;

  AscentOptions aopts;
  aopts.restarts = 2;
  aopts.max_iter = 100;
  const WeightOperator pi(Matrix::Identity(2, 2));
  const ZeroErrorBound ze = zero_error_upper(identity_channel(2), 1, pi, aopts);
  if (std::abs(ze.bits - 2.0) > 1e-9) o.ok = false;
  if (!ze.certified) o.ok = false;

  std::ostringstream os;
  os << "decay(1,10) = " << g17(decay) << ", zero-error identity qubit = "
     << g17(ze.bits) << " bits";
  o.detail = os.str();
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome(double&)> body;
  };

  const RandomStream master(0);
  const std::vector<Criterion> criteria = {
      {"recovery-fidelity suite (500 tuples)",
       [&](double& s) {
         const auto t0 = std::chrono::steady_clock::now();
         const SuiteResult r = run_fidelity_bound_suite(500, master);
         s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           t0)
                 .count();
         return suite_outcome(r, s, 60.0);
       }},
      {"tensor-norm ceiling suite (50 channels)",
       [&](double& s) {
         const auto t0 = std::chrono::steady_clock::now();
         const SuiteResult r = run_tensor_norm_suite(50, master);
         s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           t0)
                 .count();
         return suite_outcome(r, s, 300.0);
       }},
      {"transfer block residuals (100 channels)",
       [&](double& s) {
         const auto t0 = std::chrono::steady_clock::now();
         const SuiteResult r = run_block_structure_suite(100, master);
         s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           t0)
                 .count();
         return suite_outcome(r, s, std::nullopt);
       }},
      {"depolarizing closed forms",
       [&](double&) { return check_depolarizing_closed_forms(); }},
      {"capacity sandwich oracles",
       [&](double&) { return check_capacity_sandwich(); }},
      {"expander ensemble d=32 k=8 (20 draws, twice)",
       [&](double& s) { return check_expander_ensemble(s); }},
      {"codespace bound (2000 trials)",
       [&](double& s) {
         const auto t0 = std::chrono::steady_clock::now();
         const SuiteResult r = run_codespace_suite(2000, master);
         s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           t0)
                 .count();
         return suite_outcome(r, s, 120.0);
       }},
      {"decay and zero-error formulas",
       [&](double&) { return check_decay_and_zero_error(); }},
      {"pure-state dominance (200 states)",
       [&](double& s) {
         const auto t0 = std::chrono::steady_clock::now();
         const SuiteResult r = run_pure_dominance_suite(200, master);
         s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           t0)
                 .count();
         return suite_outcome(r, s, std::nullopt);
       }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    double seconds = 0.0;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].body(seconds);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (seconds == 0.0) {
      seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
    }
    std::printf("%s %zu %s: %s (%.1fs)\n", o.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, o.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  return failures;
}
