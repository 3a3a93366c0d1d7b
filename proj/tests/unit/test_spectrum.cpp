#include <doctest.h>

#include <cmath>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/rwa.hpp"
#include "optosqueeze/spectrum.hpp"
#include "oracles.hpp"

using namespace optosqueeze;
using namespace optosqueeze::spectrum;
using doctest::Approx;

namespace {

PhysicalParams base(double lambda_bar, double gamma_m = 1e-6, double n_m = 100) {
  PhysicalParams p;
  p.kappa = 0.1;
  p.gamma_m = gamma_m;
  p.n_m = n_m;
  p.delta0 = 1.0;
  p.lambda_gain = lambda_bar * p.kappa / 2;
  return p;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("Brownian limit of the transfer functions") {
  const auto p = base(0.4, 1e-3);
  for (double w : {-0.3, 0.0, 1e-3, 2.0}) {
    const auto t = transfer_at(w, EffectiveCoupling{}, p);
    const Complex e = std::sqrt(p.gamma_m) / Complex(p.gamma_m / 2, -w);
    CHECK(rel(t.e1, e) < 1e-14);
    CHECK(rel(t.f2, e) < 1e-14);
    CHECK(std::abs(t.a1) == 0.0);
    CHECK(std::abs(t.b1) == 0.0);
    CHECK(std::abs(t.a2) == 0.0);
    CHECK(std::abs(t.b2) == 0.0);
    CHECK(std::abs(t.f1) == 0.0);
    CHECK(std::abs(t.e2) == 0.0);
  }
}

TEST_CASE("no cross thermal mixing without gain") {
  const auto c = EffectiveCoupling::phase_matched(0.01, 0.5);
  for (double w : {-0.05, 0.0, 0.02}) {
    const auto t = transfer_at(w, c, base(0.0));
    CHECK(std::abs(t.f1) < 1e-15 * std::abs(t.e1));
    CHECK(std::abs(t.e2) < 1e-15 * std::abs(t.f2));
  }
}

TEST_CASE("closed-form coefficients against a frequency-domain linear solve") {
  for (int k = 0; k < 20; ++k) {
    auto p = base(oracle::uniform(0, 0.95), oracle::log_uniform(1e-6, 1e-2));
    const auto c = EffectiveCoupling::phase_matched(oracle::log_uniform(1e-3, 0.03),
                                                    oracle::uniform(0, 0.9));
    const auto m = rwa::tilde_matrix(c, p);
    if (!rwa::stability_check(m).stable) continue;
    for (double w : {0.0, oracle::uniform(-0.2, 0.2), oracle::uniform(-2, 2)}) {
      const auto t = transfer_at(w, c, p);
      const auto r = oracle::response(w, m, p.gamma_m, p.kappa);
      CHECK(rel(t.e1, r(0, 0)) < 1e-9);
      const double s1 = r.row(0).cwiseAbs().maxCoeff();
      const double s2 = r.row(1).cwiseAbs().maxCoeff();
      CHECK(std::abs(t.f1 - r(0, 1)) < 1e-9 * s1);
      CHECK(rel(t.a1, r(0, 2)) < 1e-9);
      CHECK(std::abs(t.b1 - r(0, 3)) < 1e-9 * s1);
      CHECK(std::abs(t.e2 - r(1, 0)) < 1e-9 * s2);
      CHECK(rel(t.f2, r(1, 1)) < 1e-9);
      CHECK(std::abs(t.a2 - r(1, 2)) < 1e-9 * s2);
      CHECK(rel(t.b2, r(1, 3)) < 1e-9);
    }
  }
}

TEST_CASE("near-instability is refused") {
  CHECK_THROWS_AS(transfer_at(0.0, EffectiveCoupling{}, base(1.0)), InstabilityError);
}

TEST_CASE("spectra: Lorentzian limit, symmetry, split") {
  std::vector<double> grid;
  for (int k = -50; k <= 50; ++k) grid.push_back(0.004 * k);
  const auto p = base(0.0, 0.01, 3);
  const auto s = spectra(grid, EffectiveCoupling{}, p);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double w = grid[k];
    const double lor = p.gamma_m * (p.n_m + 0.5) / (p.gamma_m * p.gamma_m / 4 + w * w);
    CHECK(s.sq_total[k] == Approx(lor).epsilon(1e-13));
    CHECK(s.sp_total[k] == Approx(lor).epsilon(1e-13));
  }

  const auto q = base(0.7, 1e-4, 20);
  const auto c = EffectiveCoupling::phase_matched(0.01, 0.6);
  const auto t = spectra(grid, c, q);
  const std::size_t n = grid.size();
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(t.sp_total[k] >= 0.0);
    CHECK(t.sq_total[k] >= 0.0);
    CHECK(std::abs(t.sp_total[k] - t.sp_rp[k] - t.sp_th[k]) <= 1e-12 * t.sp_total[k]);
    CHECK(std::abs(t.sq_total[k] - t.sq_rp[k] - t.sq_th[k]) <= 1e-12 * t.sq_total[k]);
    CHECK(t.sp_total[k] == Approx(t.sp_total[n - 1 - k]).epsilon(1e-12));
  }
}

TEST_CASE("integrated variance: Brownian normalization") {
  const auto p = base(0.0, 1e-3, 100);
  const auto v = integrate_variance(EffectiveCoupling{}, p);
  CHECK(v.var_q == Approx(100.5).epsilon(1e-8));
  CHECK(v.var_p == Approx(100.5).epsilon(1e-8));
  CHECK(v.tail_bound < 1e-6);
}

TEST_CASE("integrated variance equals the Lyapunov solution") {
  for (int k = 0; k < 20; ++k) {
    auto p = base(oracle::uniform(0, 0.95), oracle::log_uniform(1e-7, 1e-4),
                  oracle::uniform(0, 200));
    p.n_a = oracle::uniform(0, 1);
    const auto c = EffectiveCoupling::from_cooperativity(oracle::log_uniform(1e2, 1e5), p.kappa,
                                                         p.gamma_m, oracle::uniform(0, 0.9));
    if (!rwa::stability_check(c, p).stable) continue;
    const auto ly = rwa::steady_covariance(c, p);
    const auto v = integrate_variance(c, p);
    CHECK(std::abs(v.var_p / ly.var_p() - 1) < 1e-6);
    CHECK(std::abs(v.var_q / ly.var_q() - 1) < 1e-6);
    CHECK(v.tail_bound < 1e-6);
  }
}

TEST_CASE("gain scans at tanh r = 0.6 match the Lyapunov solution") {
  for (double cc : {2.5e3, 1e4, 5e4}) {
    for (double lb : {0.0, 0.3, 0.6, 0.9, 0.99}) {
      const auto p = base(lb, 1e-6, 100);
      const auto c = EffectiveCoupling::from_cooperativity(cc, p.kappa, p.gamma_m, 0.6);
      const double ly = rwa::steady_covariance(c, p).var_p();
      CHECK(std::abs(integrate_variance(c, p).var_p / ly - 1) < 1e-6);
    }
  }
}

TEST_CASE("quoted strong-gain value") {
  const auto p = base(0.99, 1e-6, 100);
  const auto c = EffectiveCoupling::from_cooperativity(5e4, p.kappa, p.gamma_m, 0.4);
  const auto v = integrate_variance(c, p);
  MESSAGE("var_p = " << v.var_p);
  CHECK(std::abs(v.var_p / 0.117 - 1) < 0.01);
}
