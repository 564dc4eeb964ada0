#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qk/discrete.hpp"
#include "qk/rng.hpp"

#include "support/random_models.hpp"
#include "qk/sphere.hpp"
#include "qk/transforms.hpp"

using namespace qk;

using qk_test::random_continuous;
using qk_test::random_walks;

TEST_CASE("vieta and kernel residuals on random continuous models") {
  Philox rng(1, 9);
  for (const auto& m : random_continuous(25)) {
    const auto kv = kernel_view(m, 1);
    for (int k = 0; k < 4; ++k) {
      const cplx t1(-2.0 + 3.0 * rng.next_uniform(),
                    -1.5 + 3.0 * rng.next_uniform());
      const auto [lo, hi] = branches_theta2(m, t1);
      const double scale = 1.0 + std::abs(lo) + std::abs(hi);
      CHECK(std::abs(gamma_k(m, t1, lo)) < 1e-9 * scale);
      CHECK(std::abs(gamma_k(m, t1, hi)) < 1e-9 * scale);
      CHECK(std::abs(lo + hi + kv.b(t1) / kv.a) < 1e-9 * scale);
      CHECK(std::abs(lo * hi - kv.c(t1) / kv.a) < 1e-9 * scale * scale);
    }
  }
}

TEST_CASE("uniformization residual on random models") {
  Philox rng(2, 9);
  for (const auto& m : random_continuous(25)) {
    for (int k = 0; k < 3; ++k) {
      const cplx s(-1.5 + 3.0 * rng.next_uniform(),
                   -1.5 + 3.0 * rng.next_uniform());
      if (std::abs(s) < 0.05) continue;
      const auto [t1, t2] = uniformization(m, s);
      const double scale = 1.0 + std::norm(t1) + std::norm(t2);
      CHECK(std::abs(gamma_k(m, t1, t2)) < 1e-9 * scale);
    }
  }
}

TEST_CASE("continuous involutions on random models") {
  Philox rng(3, 9);
  for (const auto& m : random_continuous(25)) {
    const cplx s(0.2 + rng.next_uniform(), -1.0 + 2.0 * rng.next_uniform());
    if (std::abs(s) < 0.05) continue;
    const auto [t1, t2] = uniformization(m, s);
    const auto [z1, z2] = zeta_point(m, t1, t2);
    const auto [zz1, zz2] = zeta_point(m, z1, z2);
    const double scale = 1.0 + std::abs(t2) + std::abs(z2);
    CHECK(std::abs(zz1 - t1) < 1e-8 * scale);
    CHECK(std::abs(zz2 - t2) < 1e-8 * scale);
    const auto [e1, e2] = eta_point(m, t1, t2);
    const auto [ee1, ee2] = eta_point(m, e1, e2);
    CHECK(std::abs(ee1 - t1) < 1e-8 * (1.0 + std::abs(t1) + std::abs(e1)));
    CHECK(std::abs(ee2 - t2) < 1e-8 * (1.0 + std::abs(t1) + std::abs(e1)));
  }
}

TEST_CASE("walk involutions on random walks") {
  Philox rng(4, 9);
  for (const auto& m : random_walks(25)) {
    for (int k = 0; k < 3; ++k) {
      const cplx x(0.3 + 1.2 * rng.next_uniform(),
                   -0.5 + rng.next_uniform());
      const auto [ylo, yhi] = branches_Y(m, x);
      for (const cplx& y : {ylo, yhi}) {
        if (!std::isfinite(std::abs(y)) || std::abs(y) < 1e-9) continue;
        const double ks = 1.0 + std::abs(x) + std::abs(y);
        CHECK(std::abs(walk_K(m, x, y)) < 1e-8 * ks);
        const auto [zx, zy] = zeta_walk(m, x, y);
        const auto [zzx, zzy] = zeta_walk(m, zx, zy);
        CHECK(std::abs(zzx - x) < 1e-7 * (ks + std::abs(zy)));
        CHECK(std::abs(zzy - y) < 1e-7 * (ks + std::abs(zy)));
        const auto [ex, ey] = eta_walk(m, x, y);
        const auto [eex, eey] = eta_walk(m, ex, ey);
        CHECK(std::abs(eex - x) < 1e-7 * (ks + std::abs(ex)));
        CHECK(std::abs(eey - y) < 1e-7 * (ks + std::abs(ex)));
      }
    }
  }
}

TEST_CASE("walk vieta on random walks") {
  Philox rng(5, 9);
  for (const auto& m : random_walks(25)) {
    const auto wv = walk_view(m, 2);  // quadratic in y at frozen x
    const cplx x(0.4 + rng.next_uniform(), 0.3 * rng.next_uniform());
    const auto [lo, hi] = branches_Y(m, x);
    if (!std::isfinite(std::abs(lo)) || !std::isfinite(std::abs(hi))) continue;
    const double scale = 1.0 + std::abs(lo) + std::abs(hi);
    CHECK(std::abs(lo + hi + wv.b(x) / wv.a(x)) < 1e-8 * scale);
    CHECK(std::abs(lo * hi - wv.c(x) / wv.a(x)) < 1e-8 * scale * scale);
  }
}

TEST_CASE("continuation matches direct phi1 on random models") {
  Philox rng(6, 9);
  for (const auto& m : random_continuous(25)) {
    int tested = 0;
    for (int k = 0; k < 8 && tested < 3; ++k) {
      const cplx z(-1.5 * rng.next_uniform(),
                   -1.0 + 2.0 * rng.next_uniform());
      const auto d = phi1(m, z);
      if (!d.ok()) continue;
      TransformValue c;
      try {
        c = continue_phi1(m, z);
      } catch (const config_error&) {
        continue;  // outside the continuation region
      }
      if (!c.ok()) continue;
      CHECK(std::abs(c.value - d.value) < 1e-8 * (1.0 + std::abs(d.value)));
      ++tested;
    }
    CHECK(tested > 0);
  }
}

TEST_CASE("phi1 at zero equals minus mu1 on random models") {
  for (const auto& m : random_continuous(25)) {
    const auto v = phi1(m, cplx(0.0, 0.0));
    REQUIRE(v.ok());
    CHECK(std::abs(v.value - cplx(-m.mu[0])) < 1e-10 * (1.0 + std::abs(m.mu[0])));
  }
}

TEST_CASE("group detector never lies about finiteness") {
  for (const auto& m : random_continuous(10)) {
    const auto g = group_order(m);
    if (g.verdict == GroupReport::Verdict::finite) {
      // claimed order must match the angle: beta = q pi / p
      CHECK(std::abs(g.ratio - double(g.p) / double(g.q)) < 1e-9 * g.ratio);
      CHECK(g.order == 2 * g.p);
    } else {
      CHECK(g.best_error > 1e-9);
    }
  }
  for (const auto& m : random_walks(10)) {
    const auto g = walk_group_order(m);
    if (g.verdict == WalkGroupReport::Verdict::finite) {
      CHECK(g.order >= 2);
      CHECK(g.order % 2 == 0);
    }
  }
}
