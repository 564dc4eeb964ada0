#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qk/kernel.hpp"

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

TEST_CASE("gamma closed forms") {
  const auto m = m1();
  CHECK(gamma_k(m, 0.0, 0.0) == cplx(0.0, 0.0));
  // 1/2(1+4) + (-1-2) = -0.5
  CHECK(gamma_k(m, 1.0, 2.0).real() == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(gamma_1(m, cplx(2.0, 1.0), 0.5).real() == doctest::Approx(2.0));
  CHECK(gamma_2(m, 0.5, cplx(2.0, 1.0)).real() == doctest::Approx(2.0));
}

TEST_CASE("kernel view coefficients") {
  const auto kv = kernel_view(m2(), 1);
  CHECK(kv.a == doctest::Approx(0.5));
  CHECK(kv.b.c0 == doctest::Approx(-1.0));  // mu2
  CHECK(kv.b.c1 == doctest::Approx(0.0));   // sigma12
  CHECK(kv.c.c1 == doctest::Approx(-2.0));  // mu1
  CHECK(kv.c.c2 == doctest::Approx(0.5));
  // d(t) = b^2 - 4ac = 1 + 4t - t^2 for M2
  CHECK(kv.disc(2.0).real() == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("branch points closed forms") {
  const auto b1 = branch_points(m1(), 1);
  CHECK(b1.low == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK(b1.high == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
  const auto b1m2 = branch_points(m2(), 1);
  CHECK(b1m2.low == doctest::Approx(2.0 - std::sqrt(5.0)).epsilon(1e-14));
  CHECK(b1m2.high == doctest::Approx(2.0 + std::sqrt(5.0)).epsilon(1e-14));
  const auto b2m2 = branch_points(m2(), 2);
  CHECK(b2m2.low == doctest::Approx(1.0 - std::sqrt(5.0)).epsilon(1e-14));
  CHECK(b2m2.high == doctest::Approx(1.0 + std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("branches satisfy the kernel") {
  for (const auto& m : {m1(), m2(), m3()}) {
    for (double re : {-3.0, -1.0, 0.3}) {
      for (double im : {0.0, 0.7, -2.0}) {
        const cplx t1(re, im);
        const auto [lo, hi] = branches_theta2(m, t1);
        CHECK(std::abs(gamma_k(m, t1, lo)) < 1e-10);
        CHECK(std::abs(gamma_k(m, t1, hi)) < 1e-10);
        const auto [l1, h1] = branches_theta1(m, t1);
        CHECK(std::abs(gamma_k(m, l1, t1)) < 1e-10);
        CHECK(std::abs(gamma_k(m, h1, t1)) < 1e-10);
      }
    }
  }
}

TEST_CASE("vieta on branches") {
  const auto m = m3();
  const auto kv = kernel_view(m, 1);
  const cplx t1(-0.8, 0.4);
  const auto [lo, hi] = branches_theta2(m, t1);
  CHECK(std::abs(lo + hi - (-kv.b(t1) / kv.a)) < 1e-12);
  CHECK(std::abs(lo * hi - kv.c(t1) / kv.a) < 1e-12);
}

TEST_CASE("curve sample symmetry and membership") {
  for (const auto& m : {m1(), m2(), m3()}) {
    const auto s = sample_curve_R(m, 101);
    REQUIRE(s.points.size() >= 100);
    // closed under conjugation: the multiset of values equals its conjugate
    for (const auto& p : s.points) {
      bool found = false;
      for (const auto& q : s.points)
        if (std::abs(q.value - std::conj(p.value)) < 1e-9) {
          found = true;
          break;
        }
      CHECK(found);
    }
    CHECK(in_domain_GR(m, cplx(0.0, 0.0)) == DomainPosition::inside);
    // G_R is unbounded leftward; the outside lies right of the curve vertex
    const auto bp1 = branch_points(m, 1);
    const auto bp2 = branch_points(m, 2);
    const double vertex = branches_theta2(m, bp1.low).first.real();
    CHECK(in_domain_GR(m, cplx(0.5 * (vertex + bp2.high), 0.0)) ==
          DomainPosition::outside);
    // curve points themselves sit on the boundary
    CHECK(in_domain_GR(m, s.points[s.points.size() / 2].value) ==
          DomainPosition::boundary);
  }
}

TEST_CASE("curve csv shape") {
  const auto s = sample_curve_R(m1(), 7);
  const auto csv = curve_to_csv(s);
  CHECK(csv.rfind("param,re_value,im_value,branch", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(s.points.size()) + 1);
}
