#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qk/asymptotics.hpp"

using namespace qk;

namespace {
ContinuousModel m1() { return {}; }
ContinuousModel m2() {
  ContinuousModel m;
  m.mu = {-2.0, -1.0};
  return m;
}
ContinuousModel m3() {
  ContinuousModel m;
  m.sigma = {{{1.0, -0.5}, {-0.5, 1.0}}};
  return m;
}
}  // namespace

TEST_CASE("saddle stays on the kernel and maximizes the ray functional") {
  for (const auto& m : {m1(), m2(), m3()}) {
    for (double a : {0.2, kPi / 4, 1.3}) {
      const auto th = theta_alpha(m, a);
      CHECK(std::abs(gamma_k(m, th[0], th[1])) < 1e-11);
      // nearby kernel points score lower on <theta | e_alpha>
      const double score = th[0] * std::cos(a) + th[1] * std::sin(a);
      const auto kv = kernel_view(m, 1);
      (void)kv;
      for (double dt : {-1e-3, 1e-3}) {
        const auto [lo, hi] = branches_theta2(m, th[0] + dt);
        const double s2 = (th[0] + dt) * std::cos(a) +
                          std::max(lo.real(), hi.real()) * std::sin(a);
        CHECK(s2 <= score + 1e-6);
      }
    }
  }
}

TEST_CASE("m2 saddle at pi over 4") {
  const auto th = theta_alpha(m2(), kPi / 4);
  CHECK(th[0] == doctest::Approx(2.0 + std::sqrt(10.0) / 2).epsilon(1e-12));
  CHECK(th[1] == doctest::Approx(1.0 + std::sqrt(10.0) / 2).epsilon(1e-12));
}

TEST_CASE("m2 exact exponents across regimes") {
  const double boundary = std::atan(0.5);
  for (int k = 1; k <= 9; ++k) {
    const double a = kPi / 2 * k / 10.0;
    if (std::abs(a - boundary) < 0.05) continue;
    const double got = decay_exponent(m2(), a);
    const double want = 4.0 * std::cos(a) + 2.0 * std::sin(a);
    CHECK(std::abs(got - want) < 1e-9);
  }
}

TEST_CASE("m2 regime labels flank the boundary angle") {
  // Product form: both sign slots flip together at arctan(1/2).
  const double boundary = std::atan(0.5);
  const auto below = classify_regime(m2(), boundary - 0.1);
  CHECK(below.label == Regime::Qmp);
  const auto above = classify_regime(m2(), boundary + 0.1);
  CHECK(above.label == Regime::Qpm);
  const auto at = classify_regime(m2(), boundary);
  CHECK(at.label == Regime::boundary);
}

TEST_CASE("diagonal regime labels") {
  // M1 is symmetric with both transitions at pi/4: exact boundary there.
  const auto r1 = classify_regime(m1(), kPi / 4);
  CHECK(r1.label == Regime::boundary);
  CHECK_THROWS_AS(decay_exponent(m1(), kPi / 4), numeric_error);

  const auto r3 = classify_regime(m3(), kPi / 4);
  CHECK(r3.label == Regime::Qpp);
  CHECK(r3.prefactor_power == 0.0);
  CHECK(r3.dominant == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-10));

  // Positive correlation pushes both poles inactive: saddle regime.
  // Saddle (4/3, 4/3), eta/zeta partners -2/3 < 0 on both axes.
  ContinuousModel mq;
  mq.sigma = {{{1.0, 0.5}, {0.5, 1.0}}};
  const auto rq = classify_regime(mq, kPi / 4);
  CHECK(rq.label == Regime::Qmm);
  CHECK(rq.prefactor_power == doctest::Approx(-0.5));
  CHECK(rq.saddle[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(rq.dominant ==
        doctest::Approx(4.0 * std::sqrt(2.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("distinguished points satisfy their defining equations") {
  const auto m = m3();
  const auto d = distinguished_points(m);
  CHECK(std::abs(gamma_k(m, d.theta_star[0], d.theta_star[1])) < 1e-10);
  CHECK(std::abs(gamma_1(m, d.theta_star[0], d.theta_star[1])) < 1e-10);
  CHECK(std::abs(gamma_k(m, d.theta_star_star[0], d.theta_star_star[1])) <
        1e-10);
  CHECK(std::abs(gamma_2(m, d.theta_star_star[0], d.theta_star_star[1])) <
        1e-10);
  CHECK(d.eta_theta_star[1] == doctest::Approx(d.theta_star[1]));
  CHECK(d.zeta_theta_star_star[0] == doctest::Approx(d.theta_star_star[0]));
}

TEST_CASE("sweep csv shape") {
  const auto csv = regime_sweep_csv(m2(), {0.3, kPi / 4, 1.2});
  CHECK(csv.rfind("alpha,label,dominant,exp_saddle,exp_eta,exp_zeta,"
                  "saddle_theta1,saddle_theta2,prefactor_power",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
