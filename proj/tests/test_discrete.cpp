#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qk/discrete.hpp"

using namespace qk;

namespace {
DiscreteModel d1_interior() {
  DiscreteModel m{};
  m.interior[2][1] = 0.1;   // (+1, 0)
  m.interior[0][1] = 0.4;   // (-1, 0)
  m.interior[1][2] = 0.1;   // (0, +1)
  m.interior[1][0] = 0.4;   // (0, -1)
  m.origin[2][1] = 0.5;
  m.origin[1][2] = 0.5;
  return m;
}

DiscreteModel d1_third() {
  DiscreteModel m = d1_interior();
  const double t = 1.0 / 3.0;
  m.hwall[2][1] = t;
  m.hwall[0][1] = t;
  m.hwall[1][2] = t;
  m.vwall[1][2] = t;
  m.vwall[1][0] = t;
  m.vwall[2][1] = t;
  return m;
}

DiscreteModel d1_pmm() {
  DiscreteModel m = d1_interior();
  m.hwall[0][1] = 0.6;
  m.hwall[2][1] = 0.1;
  m.hwall[1][2] = 0.3;
  m.vwall[1][0] = 0.6;
  m.vwall[1][2] = 0.1;
  m.vwall[2][1] = 0.3;
  return m;
}
}  // namespace

TEST_CASE("walk kernel values") {
  const auto m = d1_third();
  // K(x,y) = xy(sum p x^i y^j - 1); at (1,1) the sum is 1
  CHECK(std::abs(walk_K(m, 1.0, 1.0)) < 1e-15);
  const cplx x(0.5, 0.0), y(2.0, 0.0);
  const cplx expected =
      x * y * (0.1 * x + 0.4 / x + 0.1 * y + 0.4 / y - 1.0);
  CHECK(std::abs(walk_K(m, x, y) - expected) < 1e-14);
  // wall polynomials vanish where their family balances
  CHECK(std::abs(walk_k0(m, 1.0, 1.0)) < 1e-15);
}

TEST_CASE("discriminant roots closed forms") {
  const auto m = d1_third();
  for (int axis : {1, 2}) {
    const auto d = discriminant_roots(m, axis);
    REQUIRE(d.roots.size() == 4);
    const double s5 = std::sqrt(5.0);
    CHECK(d.roots[0] == doctest::Approx(7.0 - 3.0 * s5).epsilon(1e-12));
    CHECK(d.roots[1] == doctest::Approx(3.0 - s5).epsilon(1e-12));
    CHECK(d.roots[2] == doctest::Approx(3.0 + s5).epsilon(1e-12));
    CHECK(d.roots[3] == doctest::Approx(7.0 + 3.0 * s5).epsilon(1e-12));
    CHECK(d.y1 == doctest::Approx(7.0 - 3.0 * s5).epsilon(1e-12));
    CHECK(d.y2 == doctest::Approx(3.0 - s5).epsilon(1e-12));
    CHECK(d.y3 == doctest::Approx(3.0 + s5).epsilon(1e-12));
    REQUIRE(d.y4.has_value());
    CHECK(*d.y4 == doctest::Approx(7.0 + 3.0 * s5).epsilon(1e-12));
  }
}

TEST_CASE("branches satisfy the kernel and vieta") {
  const auto m = d1_third();
  for (double xr : {0.4, 0.9, 1.7}) {
    const cplx x(xr, 0.2);
    const auto [lo, hi] = branches_Y(m, x);
    CHECK(std::abs(walk_K(m, x, lo)) < 1e-12);
    CHECK(std::abs(walk_K(m, x, hi)) < 1e-12);
    // quadratic in y: a y^2 + b y + c with a = 0.1 x, b = x(0.1x + 0.4/x - 1),
    // c = 0.4 x. Vieta: product = c/a = 4.
    CHECK(std::abs(lo * hi - cplx(4.0)) < 1e-10);
  }
  const auto [xlo, xhi] = branches_X(m, cplx(1.3, -0.4));
  CHECK(std::abs(walk_K(m, xlo, cplx(1.3, -0.4))) < 1e-12);
  CHECK(std::abs(walk_K(m, xhi, cplx(1.3, -0.4))) < 1e-12);
}

TEST_CASE("zeta and eta are involutions on the kernel") {
  const auto m = d1_third();
  const cplx x(0.8, 0.3);
  const auto [ylo, yhi] = branches_Y(m, x);
  (void)yhi;
  const cplx y = ylo;
  const auto [zx, zy] = zeta_walk(m, x, y);
  CHECK(zx == x);
  CHECK(std::abs(walk_K(m, zx, zy)) < 1e-10);
  const auto [zzx, zzy] = zeta_walk(m, zx, zy);
  CHECK(std::abs(zzy - y) < 1e-10);
  const auto [ex, ey] = eta_walk(m, x, y);
  CHECK(ey == y);
  CHECK(std::abs(walk_K(m, ex, ey)) < 1e-10);
  const auto [eex, eey] = eta_walk(m, ex, ey);
  CHECK(std::abs(eex - x) < 1e-10);
}

TEST_CASE("group order four") {
  const auto r = walk_group_order(d1_third());
  CHECK(r.verdict == WalkGroupReport::Verdict::finite);
  CHECK(r.order == 4);
  // the simple-weights map delta = (4/x, 4/y) squares to the identity
  const auto r2 = walk_group_order(d1_pmm());
  CHECK(r2.order == 4);
}

TEST_CASE("saddle on the diagonal") {
  const auto [x, y] = discrete_saddle(d1_third(), kPi / 4);
  CHECK(x == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(y == doctest::Approx(4.0).epsilon(1e-12));
  // off-diagonal direction still solves the stationarity system
  const auto [x2, y2] = discrete_saddle(d1_third(), 0.6);
  const double u = std::log(x2), v = std::log(y2);
  const double P = 0.1 * std::exp(u) + 0.4 * std::exp(-u) +
                   0.1 * std::exp(v) + 0.4 * std::exp(-v);
  CHECK(P == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("regime of the symmetric walls walk") {
  // Walls with weight 1/3 make both wall polynomials positive at the
  // generator images of the diagonal saddle: pole-driven on both axes.
  const auto r = discrete_regime(d1_third(), kPi / 4);
  CHECK(r.label == PLabel::Ppp);
  CHECK(r.rate_saddle ==
        doctest::Approx(std::log(16.0) / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.k_at_zeta_saddle > 0.0);
  CHECK(r.kt_at_eta_saddle > 0.0);
  REQUIRE(!r.poles_k.empty());
  // frozen pole of the symmetric-wall model: x* = (13 + sqrt(85))/14,
  // y* = Y0(x*), per-index diagonal rate log(x* y*)
  const double xs = (13.0 + std::sqrt(85.0)) / 14.0;
  CHECK(r.poles_k[0].x == doctest::Approx(xs).epsilon(1e-10));
  CHECK(r.poles_k[0].y == doctest::Approx(5.1097722286464374).epsilon(1e-9));
  CHECK(r.dominant_rate ==
        doctest::Approx(1.4800238366924064).epsilon(1e-9));
  CHECK(r.prefactor_power == 0.0);
}

TEST_CASE("regime of the outward-pulling walls walk") {
  const auto r = discrete_regime(d1_pmm(), kPi / 4);
  CHECK(r.label == PLabel::Pmm);
  CHECK(r.k_at_zeta_saddle < 0.0);
  CHECK(r.kt_at_eta_saddle < 0.0);
  CHECK(r.dominant_rate == doctest::Approx(r.rate_saddle));
  CHECK(r.prefactor_power == doctest::Approx(-0.5));
  // The swapped pairing tests each wall polynomial at the other generator
  // image and scans for its zeros along the other branch curve. For both
  // wall configurations here the swapped sign test names a pole dominant,
  // but the polynomial never vanishes on the swapped curve, so the
  // classifier refuses rather than inventing a rate. The lattice fit
  // (-1/2 log prefactor, saddle rate) confirms the default pairing is the
  // physical one.
  CHECK_THROWS_AS(
      discrete_regime(d1_pmm(), kPi / 4, PsiPhiConvention::psi_is_eta),
      numeric_error);
  CHECK_THROWS_AS(
      discrete_regime(d1_third(), kPi / 4, PsiPhiConvention::psi_is_eta),
      numeric_error);
}

TEST_CASE("curve sample is conjugation closed") {
  const auto s = sample_curve_M(d1_third(), 80);
  REQUIRE(s.points.size() >= 80);
  for (const auto& p : s.points) {
    bool found = false;
    for (const auto& q : s.points)
      if (std::abs(q.value - std::conj(p.value)) < 1e-9) {
        found = true;
        break;
      }
    CHECK(found);
  }
}

TEST_CASE("sweep csv shape") {
  const auto csv = discrete_sweep_csv(d1_third(), {0.5, kPi / 4});
  CHECK(csv.rfind("alpha,x_alpha,y_alpha,label,rate_saddle,dominant_rate,"
                  "prefactor_power",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
