#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "qk/asymptotics.hpp"
#include "qk/density.hpp"
#include "qk/oracle.hpp"

using namespace qk;

namespace {
ContinuousModel m1() { return {}; }
ContinuousModel m3() {
  ContinuousModel m;
  m.sigma = {{{1.0, -0.5}, {-0.5, 1.0}}};
  return m;
}

DiscreteModel d1_third() {
  DiscreteModel m{};
  m.interior[2][1] = 0.1;
  m.interior[0][1] = 0.4;
  m.interior[1][2] = 0.1;
  m.interior[1][0] = 0.4;
  const double t = 1.0 / 3.0;
  m.hwall[2][1] = t;
  m.hwall[0][1] = t;
  m.hwall[1][2] = t;
  m.vwall[1][2] = t;
  m.vwall[1][0] = t;
  m.vwall[2][1] = t;
  m.origin[2][1] = 0.5;
  m.origin[1][2] = 0.5;
  return m;
}
}  // namespace

TEST_CASE("fit recovers a pure exponential") {
  std::vector<double> r, v;
  for (int i = 2; i <= 40; ++i) {
    r.push_back(0.5 * i);
    v.push_back(std::exp(-3.0 * 0.5 * i));
  }
  const auto f = fit_decay_rate(r, v);
  CHECK(std::abs(f.slope + 3.0) < 1e-12);
  CHECK(f.slope_se < 1e-12);
}

TEST_CASE("fit recovers an algebraic prefactor") {
  std::vector<double> r, v;
  for (int i = 2; i <= 40; ++i) {
    const double x = 0.5 * i;
    r.push_back(x);
    v.push_back(std::pow(x, -0.5) * std::exp(-2.0 * x));
  }
  const auto f = fit_decay_rate(r, v);
  CHECK(std::abs(f.slope_log + 2.0) < 1e-6);
  CHECK(std::abs(f.logr_coef + 0.5) < 1e-6);
  CHECK(f.prefer_logr);
}

TEST_CASE("fit input validation") {
  CHECK_THROWS_AS(fit_decay_rate({1, 2, 3}, {1, 1, 1}), config_error);
  // nonpositive values are dropped, not fatal, when enough points remain
  std::vector<double> r, v;
  for (int i = 1; i <= 12; ++i) {
    r.push_back(i);
    v.push_back(i == 5 ? 0.0 : std::exp(-1.0 * i));
  }
  CHECK(std::abs(fit_decay_rate(r, v).slope + 1.0) < 1e-10);
}

TEST_CASE("ray fit of the inverted density matches the regime exponent") {
  const auto m = m3();
  const double want = decay_exponent(m, kPi / 4);
  std::vector<double> r, v;
  for (double x = 4.0; x <= 10.01; x += 0.5) {
    r.push_back(x);
    const double c = x / std::sqrt(2.0);
    v.push_back(density_at(m, c, c).value);
  }
  const auto f = fit_decay_rate(r, v);
  CHECK(std::abs(-f.slope - want) < 0.03 * want);
}

TEST_CASE("lattice stationary distribution basics") {
  const auto m = d1_third();
  const auto sol = lattice_stationary(m, 60);
  CHECK(sol.residual < 1e-12);
  double total = 0.0;
  double mn = 1.0;
  for (double p : sol.pi) {
    total += p;
    mn = std::min(mn, p);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mn > -1e-15);  // nonnegative up to roundoff
}

TEST_CASE("lattice diagonal rate matches the pole rate") {
  const auto m = d1_third();
  const auto sol = lattice_stationary(m, 60);
  std::vector<double> r, v;
  for (int i = 4; i <= 14; ++i) {
    r.push_back(i);
    v.push_back(sol.at(i, i));
  }
  const auto f = fit_decay_rate(r, v);
  const double frozen = 2.0930697824858840;  // log(x* y*) of the wall pole
  CHECK(std::abs(-f.slope - frozen) < 0.03 * frozen);

  // truncation stability: doubling N leaves the fitted rate unchanged
  const auto sol2 = lattice_stationary(m, 120);
  std::vector<double> v2;
  for (int i = 4; i <= 14; ++i) v2.push_back(sol2.at(i, i));
  const auto f2 = fit_decay_rate(r, v2);
  CHECK(std::abs(f2.slope - f.slope) < 0.005 * std::abs(f.slope));
}

TEST_CASE("short simulation agrees with the product form") {
  SimConfig cfg;
  cfg.dt = 2e-3;
  cfg.horizon = 1500.0;
  cfg.burn_in = 150.0;
  cfg.replicas = 4;
  cfg.seed = 7;
  cfg.laplace_thetas = {{-1.0, -1.0}};
  const auto res = simulate_srbm(m1(), cfg);

  const auto lp = res.laplace_estimate(0);
  CHECK(std::abs(lp.mean - 4.0 / 9.0) < 5.0 * lp.se);
  const auto z1 = res.mean_z_estimate(1);
  CHECK(std::abs(z1.mean - 0.5) < 5.0 * z1.se);
  // stationarity fixes the push rate: 0 = mu1 + lim L1/t
  const auto l1 = res.local_time_estimate(1);
  CHECK(std::abs(l1.mean - 1.0) < 5.0 * l1.se);

  CHECK_THROWS_AS(res.laplace_estimate(3), config_error);
  CHECK_THROWS_AS(res.cell_density_estimate(-1.0, 0.5), config_error);
}

TEST_CASE("same seed bitwise reproducible") {
  SimConfig cfg;
  cfg.dt = 4e-3;
  cfg.horizon = 200.0;
  cfg.burn_in = 20.0;
  cfg.replicas = 3;
  cfg.seed = 99;
  cfg.laplace_thetas = {{-0.5, -0.5}};
  const auto a = simulate_srbm(m1(), cfg);
  const auto b = simulate_srbm(m1(), cfg);
  REQUIRE(a.replicas.size() == b.replicas.size());
  for (std::size_t i = 0; i < a.replicas.size(); ++i) {
    CHECK(a.replicas[i].mean_z[0] == b.replicas[i].mean_z[0]);
    CHECK(a.replicas[i].laplace[0] == b.replicas[i].laplace[0]);
    CHECK(a.replicas[i].hist == b.replicas[i].hist);
  }
}

TEST_CASE("save and load round trip") {
  SimConfig cfg;
  cfg.dt = 4e-3;
  cfg.horizon = 100.0;
  cfg.burn_in = 10.0;
  cfg.replicas = 2;
  cfg.seed = 5;
  cfg.laplace_thetas = {{-1.0, -0.5}};
  const auto res = simulate_srbm(m1(), cfg);
  save_sim_result(res, "tmp_sim_roundtrip");
  const auto back = load_sim_result("tmp_sim_roundtrip");
  REQUIRE(back.replicas.size() == res.replicas.size());
  CHECK(back.cfg.seed == res.cfg.seed);
  for (std::size_t i = 0; i < res.replicas.size(); ++i) {
    CHECK(back.replicas[i].laplace == res.replicas[i].laplace);
    CHECK(back.replicas[i].hist == res.replicas[i].hist);
    CHECK(back.replicas[i].time == res.replicas[i].time);
  }
  std::remove("tmp_sim_roundtrip.json");
  std::remove("tmp_sim_roundtrip.bin");

  const auto csv = sim_histogram_csv(res);
  CHECK(csv.rfind("x1_lo,x2_lo,density,se", 0) == 0);
}

TEST_CASE("clamp scheme weak error shrinks with dt") {
  // The clamped reflection has a strong O(sqrt(dt)) bias, which makes the
  // dt scaling visible on short runs; halving dt should shrink the error.
  auto run = [&](double dt) {
    SimConfig cfg;
    cfg.dt = dt;
    cfg.horizon = 4000.0;
    cfg.burn_in = 200.0;
    cfg.replicas = 6;
    cfg.seed = 12345;
    cfg.scheme = SimConfig::Scheme::clamp;
    cfg.laplace_thetas = {{-1.0, -1.0}};
    const auto res = simulate_srbm(m1(), cfg);
    return res.laplace_estimate(0);
  };
  const auto e4 = run(4e-3);
  const auto e2 = run(2e-3);
  const auto e1 = run(1e-3);
  const double err4 = std::abs(e4.mean - 4.0 / 9.0);
  const double err2 = std::abs(e2.mean - 4.0 / 9.0);
  const double err1 = std::abs(e1.mean - 4.0 / 9.0);
  CHECK(err4 > err2);
  CHECK(err2 > err1);
  CHECK(err4 / err1 > 1.3);
  CHECK(err4 / err1 < 4.0);
}

TEST_CASE("standard errors scale like one over sqrt replicas") {
  SimConfig cfg;
  cfg.dt = 2e-3;
  cfg.horizon = 400.0;
  cfg.burn_in = 50.0;
  cfg.replicas = 64;
  cfg.seed = 31;
  cfg.laplace_thetas = {{-1.0, -1.0}};
  const auto res = simulate_srbm(m1(), cfg);

  // SE(n) = block-sd / sqrt(n), with the block variance pooled over the
  // disjoint n-blocks of the 64 replicas so every estimate has enough
  // degrees of freedom to make "within 20%" a meaningful bound.
  auto pooled_se = [&](std::size_t n) {
    double pooled = 0.0;
    const std::size_t blocks = 64 / n;
    for (std::size_t b = 0; b < blocks; ++b) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        mean += res.replicas[b * n + i].laplace[0];
      mean /= n;
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = res.replicas[b * n + i].laplace[0] - mean;
        var += d * d;
      }
      pooled += var / (n - 1);
    }
    return std::sqrt(pooled / blocks / n);
  };
  const double se4 = pooled_se(4);
  const double se16 = pooled_se(16);
  const double se64 = pooled_se(64);
  CHECK(se4 / se16 == doctest::Approx(2.0).epsilon(0.2));
  CHECK(se16 / se64 == doctest::Approx(2.0).epsilon(0.2));
  CHECK(se4 / se64 == doctest::Approx(4.0).epsilon(0.2));
}
