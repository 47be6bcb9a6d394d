// Command-line front end: channel analysis reports, expander ensemble
// surveys, and the randomized property suites. All floating-point output is
// rendered with 17 significant digits and every report embeds the master
// seed and tool version, so identical invocations produce identical bytes.

#include <CLI11.hpp>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "unitalcap/capacity.hpp"
#include "unitalcap/expander.hpp"
#include "unitalcap/io.hpp"
#include "unitalcap/verification.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace unitalcap;

std::string json_bool(bool b) { return b ? "true" : "false"; }

std::string json_opt(const std::optional<double>& v) {
  return v ? g17(*v) : "null";
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + out_path);
  out << text;
}

int cmd_analyze(const std::string& path, uint64_t seed, int n, int restarts,
                Index guard, const std::string& out_path) {
  const KrausChannel ch = load_channel(path);
  const RandomStream master(seed);
  const bool square = ch.input_dim() == ch.output_dim();
  const bool unital = square && is_unital(ch);

  AscentOptions aopts;
  aopts.restarts = restarts;
  aopts.dim_guard = guard;
  aopts.stream = master.derive(1);
  const NormEstimate norm2 = output_2norm(ch, aopts);

  std::ostringstream os;
  os << "{\n";
  os << " \"version\": \"" << kVersion << "\",\n";
  os << " \"master_seed\": " << seed << ",\n";
  os << " \"d_in\": " << ch.input_dim() << ",\n";
  os << " \"d_out\": " << ch.output_dim() << ",\n";
  os << " \"kraus_count\": " << ch.kraus_count() << ",\n";
  os << " \"unital\": " << json_bool(unital);
  os << ",\n \"norm2\": {\"value\": " << g17(norm2.value)
     << ", \"converged\": " << json_bool(norm2.converged)
     << ", \"restarts\": " << norm2.restarts
     << ", \"certified_upper\": " << json_opt(norm2.certified_upper) << "}";

  if (unital) {
    double lambda2;
    double fixed_residual = -1.0, offdiag_residual = -1.0;
    std::string method;
    if (ch.input_dim() <= 64) {
      const SpectralReport sr = second_singular_value(ch);
      lambda2 = sr.lambda2;
      fixed_residual = sr.fixed_point_residual;
      offdiag_residual = sr.offdiag_residual;
      method = "dense-svd";
    } else {
      lambda2 = lambda2_power_estimate(ch);
      method = "power-iteration";
    }
    os << ",\n \"spectral\": {\"lambda2\": " << g17(lambda2)
       << ", \"method\": \"" << method << "\"";
    if (method == "dense-svd") {
      os << ", \"fixed_point_residual\": " << g17(fixed_residual)
         << ", \"offdiag_residual\": " << g17(offdiag_residual);
    }
    os << "}";

    CapacityOptions copts;
    copts.lsd_trials = restarts;
    copts.stream = master.derive(2);
    const CapacityReport cap = capacity_report(ch, copts);
    os << ",\n \"capacity\": {\"upper_bits\": " << g17(cap.upper_bits)
       << ", \"upper_method\": \"" << cap.upper_method << "\""
       << ", \"lower_bits\": " << g17(cap.lower_bits)
       << ", \"lower_method\": \"" << cap.lower_method << "\""
       << ", \"gap_bits\": " << g17(cap.gap_bits) << "}";

    AscentOptions zopts = aopts;
    zopts.stream = master.derive(3);
    const WeightOperator eye(
        Matrix::Identity(ch.output_dim(), ch.output_dim()));
    const ZeroErrorBound ze = zero_error_upper(ch, 1, eye, zopts);
    os << ",\n \"zero_error\": {\"bits\": " << g17(ze.bits)
       << ", \"certified\": " << json_bool(ze.certified) << "}";
  }

  if (n >= 2 && square) {
    AscentOptions topts = aopts;
    topts.stream = master.derive(4);
    const NormEstimate tn = output_2norm_tensor(ch, n, topts);
    os << ",\n \"tensor\": {\"n\": " << n
       << ", \"norm2_value\": " << g17(tn.value)
       << ", \"certified_upper\": " << json_opt(tn.certified_upper);
    std::optional<double> alpha;
    try {
      AscentOptions mopts = aopts;
      mopts.stream = master.derive(5);
      alpha = multiplicativity_report(ch, n, mopts).alpha_hat;
    } catch (const ExponentUndefinedError&) {
    }
    os << ", \"alpha_hat\": " << json_opt(alpha) << "}";
  }
  os << "\n}\n";
  emit(os.str(), out_path);
  return 0;
}

int cmd_expander_survey(Index d, int k, int trials, double eps, uint64_t seed,
                        int workers, int restarts, Index guard,
                        const std::string& out_path) {
  const RandomStream master(seed);
  ExpanderOptions opts;
  opts.ascent_restarts = restarts;
  opts.dim_guard = guard;

  std::vector<ExpanderSample> samples(static_cast<std::size_t>(trials));
  if (trials < 1) throw ParameterError("expander-survey: trials must be >= 1");
  workers = std::max(1, std::min(workers, trials));
  if (workers == 1) {
    for (int t = 0; t < trials; ++t) {
      samples[static_cast<std::size_t>(t)] = draw_expander_sample(
          d, k, master.derive(static_cast<uint64_t>(t) + 1), opts);
    }
  } else {
    // Trials are independent (per-trial derived streams); results land in
    // their slot, so output is identical for any worker count.
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
          samples[static_cast<std::size_t>(t)] = draw_expander_sample(
              d, k, master.derive(static_cast<uint64_t>(t) + 1), opts);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }
  const EnsembleReport rep = summarize_ensemble(d, k, eps, std::move(samples));

  std::ostringstream summary;
  summary << "{\n";
  summary << " \"version\": \"" << kVersion << "\",\n";
  summary << " \"master_seed\": " << seed << ",\n";
  summary << " \"d\": " << d << ",\n";
  summary << " \"k\": " << k << ",\n";
  summary << " \"trials\": " << trials << ",\n";
  summary << " \"eps\": " << g17(eps) << ",\n";
  summary << " \"fraction_within\": " << g17(rep.frac_within_tight) << ",\n";
  summary << " \"fraction_within_loose\": " << g17(rep.frac_within_loose)
          << ",\n";
  summary << " \"c_hat_quantiles\": [";
  for (std::size_t i = 0; i < rep.c_hat_quantiles.size(); ++i) {
    if (i) summary << ", ";
    summary << g17(rep.c_hat_quantiles[i]);
  }
  summary << "]\n}\n";

  if (out_path.empty()) {
    write_csv(std::cout, rep.samples);
    std::cerr << summary.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ParseError("cannot open file for writing: " + out_path);
    write_csv(out, rep.samples);
    std::cout << summary.str();
  }
  return 0;
}

int cmd_verify(const std::string& suite, int trials, uint64_t seed) {
  const RandomStream master(seed);
  SuiteResult res;
  if (suite == "fidelity-bound") {
    res = run_fidelity_bound_suite(trials > 0 ? trials : 500, master);
  } else if (suite == "tensor-norm") {
    res = run_tensor_norm_suite(trials > 0 ? trials : 50, master);
  } else if (suite == "blocks") {
    res = run_block_structure_suite(trials > 0 ? trials : 100, master);
  } else if (suite == "pure-dominance") {
    res = run_pure_dominance_suite(trials > 0 ? trials : 200, master);
  } else {
    res = run_codespace_suite(trials > 0 ? trials : 2000, master);
  }
  std::cout << "suite=" << res.name << " version=" << kVersion
            << " master_seed=" << seed << " checks=" << res.checks
            << " violations=" << res.violations
            << " worst_slack=" << g17(res.worst_slack) << "\n";
  if (!res.pass()) {
    std::cout << "FAIL first_bad_seed=" << *res.first_bad_seed << "\n";
    return 1;
  }
  std::cout << "PASS\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity-bound toolkit for unital quantum channels"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  uint64_t seed = 0;
  int trials = 0;
  int restarts = 64;
  int n = 1;
  double eps = 1.0;
  std::string out_path;
  Index guard = kDefaultDimGuard;
  int workers = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed")->envname("UNITALCAP_SEED");
    sub->add_option("--restarts", restarts, "Ascent restarts")
        ->envname("UNITALCAP_RESTARTS");
    sub->add_option("--guard", guard, "Dimension guard")
        ->check(CLI::Range(Index{4}, Index{1} << 30))
        ->envname("UNITALCAP_GUARD");
    sub->add_option("--out", out_path, "Output path (default stdout)")
        ->envname("UNITALCAP_OUT");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Analyze a channel file");
  std::string channel_path;
  analyze->add_option("channel", channel_path, "Channel JSON file")
      ->required();
  analyze->add_option("--n", n, "Also report the n-fold tensor norm")
      ->check(CLI::Range(1, 12))
      ->envname("UNITALCAP_N");
  add_common(analyze);

  CLI::App* survey =
      app.add_subcommand("expander-survey", "Sample an expander ensemble");
  Index d = 8;
  int k = 4;
  survey->add_option("--d", d, "System dimension")->check(CLI::Range(1, 4096));
  survey->add_option("--k", k, "Kraus count (even)")
      ->check(CLI::Range(2, 4096));
  survey->add_option("--trials", trials, "Number of draws")
      ->envname("UNITALCAP_TRIALS");
  survey->add_option("--eps", eps, "Threshold parameter")
      ->envname("UNITALCAP_EPS");
  survey->add_option("--workers", workers, "Worker threads")
      ->check(CLI::Range(1, 256))
      ->envname("UNITALCAP_WORKERS");
  add_common(survey);

  CLI::App* verify =
      app.add_subcommand("verify", "Run a randomized property suite");
  std::string suite;
  verify
      ->add_option("suite", suite,
                   "One of: fidelity-bound, tensor-norm, code-bound, blocks, "
                   "pure-dominance")
      ->required()
      ->check(CLI::IsMember({"fidelity-bound", "tensor-norm", "code-bound",
                             "blocks", "pure-dominance"}));
  verify->add_option("--trials", trials, "Cases (0 = suite default)")
      ->envname("UNITALCAP_TRIALS");
  verify->add_option("--seed", seed, "Master seed")->envname("UNITALCAP_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(analyze)) {
      return cmd_analyze(channel_path, seed, n, restarts, guard, out_path);
    }
    if (app.got_subcommand(survey)) {
      if (trials <= 0) trials = 20;
      // Survey ascent only needs a few restarts per sample; 64 is the
      // single-channel default and would dominate the sweep runtime.
      const int srestarts = survey->count("--restarts")
                                ? restarts
                                : ExpanderOptions{}.ascent_restarts;
      return cmd_expander_survey(d, k, trials, eps, seed, workers, srestarts,
                                 guard, out_path);
    }
    return cmd_verify(suite, trials, seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
