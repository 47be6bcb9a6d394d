#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "doctest.h"
#include "unitalcap/io.hpp"

// End-to-end tests of the installed binary: every case shells out to the
// real executable and inspects bytes and exit codes.

namespace fs = std::filesystem;
using nlohmann::json;
using namespace unitalcap;

namespace {

const fs::path kTmp = "cli_tmp";

struct TmpSetup {
  TmpSetup() {
    fs::remove_all(kTmp);
    fs::create_directories(kTmp);
  }
} tmp_setup;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path out = kTmp / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = kTmp / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string("\"") + UNITALCAP_BIN + "\" " + args +
                          " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_channel(const std::string& name, const KrausChannel& ch) {
  const fs::path p = kTmp / name;
  save_channel(p.string(), ch);
  return p;
}

}  // namespace

TEST_CASE("version flag and bad invocations") {
  const RunResult v = run("--version");
  CHECK(v.code == 0);
  CHECK(v.out == "0.1.0\n");

  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);               // a subcommand is required
  CHECK(run("frobnicate").code == 2);     // unknown subcommand
  CHECK(run("verify bogus-suite").code == 2);
  CHECK(run("analyze").code == 2);        // missing channel argument
}

TEST_CASE("analyze reports the identity qubit exactly") {
  const fs::path p = write_channel("id2.json", identity_channel(2));
  const RunResult r = run("analyze " + p.string() + " --seed 1");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["version"] == "0.1.0");
  CHECK(j["master_seed"] == 1);
  CHECK(j["d_in"] == 2);
  CHECK(j["d_out"] == 2);
  CHECK(j["kraus_count"] == 1);
  CHECK(j["unital"] == true);
  CHECK(j["norm2"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["norm2"]["converged"] == true);
  CHECK(j["norm2"]["certified_upper"].is_null());
  CHECK(j["spectral"]["lambda2"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j["spectral"]["method"] == "dense-svd");
  CHECK(j["spectral"]["fixed_point_residual"].get<double>() < 1e-12);
  CHECK(j["capacity"]["upper_bits"].get<double>() ==
        doctest::Approx(1.584962500721156).epsilon(1e-10));
  CHECK(j["capacity"]["lower_bits"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j["capacity"]["upper_method"] == "unital-lambda2");
  CHECK(j["zero_error"]["bits"].get<double>() ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(j["zero_error"]["certified"] == true);
  CHECK_FALSE(j.contains("tensor"));
}

TEST_CASE("analyze --n adds the tensor block") {
  const fs::path p = write_channel("depol.json", depolarizing_channel(2, 0.2));
  const RunResult r = run("analyze " + p.string() + " --seed 2 --n 2");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["unital"] == true);
  CHECK(j["norm2"]["value"].get<double>() ==
        doctest::Approx(0.82).epsilon(1e-10));
  CHECK(j["spectral"]["lambda2"].get<double>() ==
        doctest::Approx(0.8).epsilon(1e-10));
  REQUIRE(j.contains("tensor"));
  CHECK(j["tensor"]["n"] == 2);
  const double tn = j["tensor"]["norm2_value"].get<double>();
  CHECK(tn >= 0.82 * 0.82 - 1e-9);
  CHECK(j["tensor"]["certified_upper"].get<double>() == 1.0);
  const double alpha = j["tensor"]["alpha_hat"].get<double>();
  CHECK(alpha > 0.9);
  CHECK(alpha <= 1.0 + 1e-6);
  // n out of range is a usage error.
  CHECK(run("analyze " + p.string() + " --n 13").code == 2);
}

TEST_CASE("analyze rejects broken inputs with a diagnostic") {
  const fs::path bad = kTmp / "bad.json";
  std::ofstream(bad) << "not json{{{\n";
  const RunResult r = run("analyze " + bad.string());
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(r.err.find("line 1") != std::string::npos);

  const RunResult missing = run("analyze " + (kTmp / "nope.json").string());
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open file") != std::string::npos);
}

TEST_CASE("analyze --out writes the same bytes to a file") {
  const fs::path p = write_channel("deph.json", dephasing_channel(0.25));
  const RunResult direct = run("analyze " + p.string() + " --seed 4");
  REQUIRE(direct.code == 0);
  const fs::path outp = kTmp / "report.json";
  const RunResult filed =
      run("analyze " + p.string() + " --seed 4 --out " + outp.string());
  REQUIRE(filed.code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(outp) == direct.out);
}

TEST_CASE("expander-survey emits a CSV and a summary") {
  const std::string args = "expander-survey --d 4 --k 4 --trials 3 --seed 9";
  const RunResult r = run(args);
  REQUIRE(r.code == 0);
  std::istringstream csv(r.out);
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "seed,d,k,lambda2_sq,c_hat,q_upper_bits,q_lower_bits,norm2_est,"
        "norm2_cert_upper,alpha_hat");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3);

  const json summary = json::parse(r.err);
  CHECK(summary["version"] == "0.1.0");
  CHECK(summary["master_seed"] == 9);
  CHECK(summary["d"] == 4);
  CHECK(summary["k"] == 4);
  CHECK(summary["trials"] == 3);
  CHECK(summary["eps"].get<double>() == 1.0);
  const double tight = summary["fraction_within"].get<double>();
  const double loose = summary["fraction_within_loose"].get<double>();
  CHECK(tight >= 0.0);
  CHECK(tight <= 1.0);
  CHECK(loose >= tight);
  REQUIRE(summary["c_hat_quantiles"].size() == 5);
  CHECK(summary["c_hat_quantiles"][0].get<double>() <=
        summary["c_hat_quantiles"][4].get<double>());

  // Identical seeds produce identical bytes; worker count is invisible.
  const RunResult again = run(args);
  CHECK(again.out == r.out);
  CHECK(again.err == r.err);
  const RunResult threaded = run(args + " --workers 2");
  CHECK(threaded.out == r.out);

  // With --out the CSV goes to the file and the summary to stdout.
  const fs::path outp = kTmp / "survey.csv";
  const RunResult filed = run(args + " --out " + outp.string());
  REQUIRE(filed.code == 0);
  CHECK(slurp(outp) == r.out);
  CHECK(filed.out == r.err);

  // A single trial still yields the header plus exactly one row.
  const RunResult solo = run("expander-survey --d 4 --k 2 --trials 1 --seed 9");
  REQUIRE(solo.code == 0);
  CHECK(std::count(solo.out.begin(), solo.out.end(), '\n') == 2);
  CHECK(json::parse(solo.err)["trials"] == 1);
}

TEST_CASE("verify runs suites and reports PASS") {
  const RunResult blocks = run("verify blocks --trials 5 --seed 3");
  REQUIRE(blocks.code == 0);
  CHECK(blocks.out.find("suite=blocks") != std::string::npos);
  CHECK(blocks.out.find("checks=5") != std::string::npos);
  CHECK(blocks.out.find("violations=0") != std::string::npos);
  CHECK(blocks.out.find("PASS\n") != std::string::npos);

  const RunResult fid = run("verify fidelity-bound --trials 4 --seed 3");
  CHECK(fid.code == 0);
  CHECK(fid.out.find("suite=fidelity-bound") != std::string::npos);
}

TEST_CASE("environment variables feed the parser") {
  setenv("UNITALCAP_SEED", "7", 1);
  const RunResult r = run("verify blocks --trials 4");
  unsetenv("UNITALCAP_SEED");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("master_seed=7") != std::string::npos);

  // Explicit flags beat the environment.
  setenv("UNITALCAP_SEED", "7", 1);
  const RunResult cli = run("verify blocks --trials 4 --seed 8");
  unsetenv("UNITALCAP_SEED");
  CHECK(cli.out.find("master_seed=8") != std::string::npos);
}
