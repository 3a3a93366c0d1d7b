#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "optosqueeze/bogoliubov.hpp"
#include "optosqueeze/derived.hpp"
#include "optosqueeze/rwa.hpp"
#include "oracles.hpp"

using namespace optosqueeze;
using doctest::Approx;
using Json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "optosqueeze");
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string write_cfg(const std::filesystem::path& dir, const std::string& text) {
  const auto p = dir / "case.cfg";
  std::ofstream(p) << text;
  return p.string();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("rwa analytic route") {
  const auto dir = oracle::temp_dir("cli");
  const auto r = run({"rwa", "--ratio", "0.6", "--lambda-bar", "0.6", "--method", "analytic",
                      "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.json()["var_p"].get<double>() == Approx(0.078125).epsilon(1e-12));
  CHECK(std::filesystem::exists(dir / "rwa.json"));
}

TEST_CASE("exit codes") {
  CHECK(run({"rwa", "--ratio", "0.6", "--lambda-bar", "1.05"}).code == 3);
  CHECK(run({"rwa", "--ratio", "0.6", "--lambda-bar", "1.05", "--method", "analytic"}).code == 3);
  CHECK(run({"rwa", "--bogus"}).code == 2);
  CHECK(run({"rwa", "--method", "nope"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"meanfield", "--config", "/does/not/exist.cfg"}).code == 2);
  const auto dir = oracle::temp_dir("cli");
  CHECK(run({"meanfield", "--config", write_cfg(dir, "kappa = 0.1\nkapa = 2\n")}).code == 2);
  CHECK(run({"rwa", "--kappa", "-1"}).code == 2);
  CHECK(run({"sweep", "--axis", "foo=0:1:3"}).code == 2);
}

TEST_CASE("meanfield: zero drive and parametric threshold") {
  const auto dir = oracle::temp_dir("cli");
  const auto cfg = write_cfg(dir, "kappa = 0.1\ngamma_m = 1e-6\ndelta0 = 1\nlambda_bar = 0.5\n");
  const auto r = run({"meanfield", "--config", cfg, "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.json()["orbit"]["periodicity_residual"].get<double>() == 0.0);
  CHECK(std::filesystem::exists(dir / "orbit.csv"));
  CHECK(slurp(dir / "orbit.csv").rfind("t,q_mean,p_mean,re_a,im_a\n", 0) == 0);

  const auto bad = write_cfg(dir, "kappa = 0.1\ngamma_m = 1e-6\ndelta0 = 1\nlambda_bar = 1.2\n");
  CHECK(run({"meanfield", "--config", bad, "--out-dir", dir.string()}).code == 3);
}

TEST_CASE("meanfield on the reference drive writes the orbit window") {
  const auto dir = oracle::temp_dir("cli");
  const auto r = run({"meanfield", "--config", oracle::source_path("configs/reference_orbit.cfg"),
                      "--settle", "200", "--sample", "160", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["orbit"]["periodicity_residual"].get<double>() < 1e-6);
  CHECK(j["coupling_discrepancy"].get<double>() < 0.01);
  const auto rows = read_csv(slurp(dir / "trajectory.csv"));
  REQUIRE(rows.size() == 160 * 256 + 2);
  CHECK(std::stod(rows[1][0]) == Approx(200 * kPi));
  CHECK(std::stod(rows.back()[0]) == Approx(360 * kPi));
  const auto coeffs = Json::parse(slurp(dir / "coefficients.json"));
  CHECK(coeffs.contains("a,0,0"));
}

TEST_CASE("floquet scenarios") {
  const std::string cfg = oracle::source_path("configs/scenarios.cfg");
  const auto dir = oracle::temp_dir("cli");
  const auto both = run({"floquet", "--config", cfg, "--scenario", "both", "--out-dir",
                         dir.string()});
  REQUIRE(both.code == 0);
  CHECK(std::abs(both.json()["var_p_min"].get<double>() - 0.117) <= 0.005);
  const auto cov = read_csv(slurp(dir / "covariance.csv"));
  CHECK(cov[0].size() == 11);
  CHECK(cov[0][1] == "Vqq");
  const auto opa = run({"floquet", "--config", cfg, "--scenario", "opa-only"});
  REQUIRE(opa.code == 0);
  CHECK(std::abs(opa.json()["var_p_min"].get<double>() - 0.359) <= 0.005);
  const auto mod = run({"floquet", "--config", cfg, "--scenario", "mod-only"});
  REQUIRE(mod.code == 0);
  CHECK(std::abs(mod.json()["var_p_min"].get<double>() - 0.153) <= 0.005);
  CHECK(run({"floquet", "--config", cfg, "--scenario", "other"}).code == 2);
}

TEST_CASE("floquet in the rotating frame with counter-rotating terms") {
  const auto r = run({"floquet", "--config", oracle::source_path("configs/rotating_crt.cfg"),
                      "--frame", "crt", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["crt_vs_rwa_p"].get<double>() < 0.05);
  CHECK(run({"floquet", "--config", oracle::source_path("configs/reference_orbit.cfg"), "--frame", "crt"})
            .code == 2);
}

TEST_CASE("rwa compare-all and its bound") {
  const auto dir = oracle::temp_dir("cli");
  const std::vector<std::string> base = {"rwa",        "--ratio", "0.5",  "--lambda-bar",
                                         "0.4",        "--C",     "1e5",  "--gamma-m",
                                         "1e-10",      "--n-m",   "0",    "--compare-all",
                                         "--out-dir",  dir.string()};
  const auto ok = run(base);
  REQUIRE(ok.code == 0);
  const auto j = ok.json();
  CHECK(j["within_bound"].get<bool>());
  CHECK(j["residuals"].contains("lyapunov_vs_spectrum"));
  CHECK(j["residuals"]["lyapunov_vs_spectrum"].get<double>() < 1e-6);
  auto tight = base;
  tight.push_back("--bound");
  tight.push_back("1e-12");
  CHECK(run(tight).code == 4);
}

TEST_CASE("rwa methods agree with library calls") {
  const auto r = run({"rwa", "--ratio", "0.6", "--lambda-bar", "0.5", "--method", "damped",
                      "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["var_p"].get<double>() ==
        Approx(rwa::momentum_variance_damped(1e4, std::atanh(0.6), 0.5, 100, 1e-5).var_p)
            .epsilon(1e-11));
  const auto cfg = run({"rwa", "--config", oracle::source_path("configs/rotating_crt.cfg"), "--format",
                        "json"});
  REQUIRE(cfg.code == 0);
  PhysicalParams p;
  p.kappa = 0.1;
  p.gamma_m = 1e-6;
  p.n_m = 100;
  p.lambda_gain = 0.025;
  const auto c = EffectiveCoupling::from_cooperativity(1e4, 0.1, 1e-6, 0.6, 0.3);
  CHECK(cfg.json()["var_p"].get<double>() ==
        Approx(rwa::steady_covariance(c, p).var_p()).epsilon(1e-11));
}

TEST_CASE("sweep: grid layout and single-point consistency") {
  const auto dir = oracle::temp_dir("cli");
  const auto s = run({"sweep", "--axis", "lambda_bar=0:0.9:4", "--axis", "tanh_r=0.2,0.6",
                      "--C", "1e4", "--out-dir", dir.string(), "--jobs", "3"});
  REQUIRE(s.code == 0);
  const auto rows = read_csv(slurp(dir / "grid.csv"));
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == std::vector<std::string>{"lambda_bar", "tanh_r", "C", "var_p", "db_p",
                                            "stable", "lambda_bar_opt"});

  const auto one = run({"sweep", "--axis", "lambda_bar=0.6", "--axis", "tanh_r=0.6", "--format",
                        "json"});
  REQUIRE(one.code == 0);
  const auto single = read_csv(one.out);
  const auto point = run({"rwa", "--ratio", "0.6", "--lambda-bar", "0.6", "--format", "json"});
  CHECK(std::stod(single[1][3]) == Approx(point.json()["var_p"].get<double>()).epsilon(1e-11));
}

TEST_CASE("sweep: minima sit at the optimal gain") {
  // tanh r = 0.6, C between the thresholds.
  for (double cc : {4e3, 6e3, 8e3}) {
    const auto s = run({"sweep", "--axis", "lambda_bar=0:0.99:100", "--axis", "tanh_r=0.6",
                        "--C", std::to_string(cc), "--format", "json"});
    REQUIRE(s.code == 0);
    const auto rows = read_csv(s.out);
    double best = 1e9;
    double arg = -1;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      const double v = std::stod(rows[k][3]);
      if (v < best) {
        best = v;
        arg = std::stod(rows[k][0]);
      }
    }
    const double opt = std::stod(rows[1][6]);
    CHECK(std::abs(arg - opt) <= 0.01);
  }
}

TEST_CASE("sweep marks unstable points") {
  const auto s = run({"sweep", "--axis", "lambda_bar=0.5,1.2", "--format", "json"});
  REQUIRE(s.code == 0);
  const auto rows = read_csv(s.out);
  CHECK(rows[1][5] == "1");
  CHECK(rows[2][5] == "0");
}

TEST_CASE("determinism and output directory override") {
  const auto a = oracle::temp_dir("cli");
  const auto b = oracle::temp_dir("cli");
  const std::vector<std::string> args = {"sweep", "--axis", "lambda_bar=0:0.9:7", "--axis",
                                         "tanh_r=0:0.8:5", "--jobs", "4"};
  auto with_dir = [&](const std::filesystem::path& d) {
    auto v = args;
    v.push_back("--out-dir");
    v.push_back(d.string());
    return v;
  };
  REQUIRE(run(with_dir(a)).code == 0);
  REQUIRE(run(with_dir(b)).code == 0);
  CHECK(slurp(a / "grid.csv") == slurp(b / "grid.csv"));

  const auto f1 = oracle::temp_dir("cli");
  const auto f2 = oracle::temp_dir("cli");
  const std::string cfg = oracle::source_path("configs/scenarios.cfg");
  REQUIRE(run({"floquet", "--config", cfg, "--out-dir", f1.string()}).code == 0);
  REQUIRE(run({"floquet", "--config", cfg, "--out-dir", f2.string()}).code == 0);
  CHECK(slurp(f1 / "covariance.csv") == slurp(f2 / "covariance.csv"));
  CHECK(slurp(f1 / "report.json") == slurp(f2 / "report.json"));

  const auto env = oracle::temp_dir("cli");
  ::setenv("OPTOSQUEEZE_OUT_DIR", env.string().c_str(), 1);
  const auto r = run({"rwa", "--ratio", "0.3"});
  ::unsetenv("OPTOSQUEEZE_OUT_DIR");
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(env / "rwa.json"));
}
