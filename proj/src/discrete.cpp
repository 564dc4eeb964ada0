#include "qk/discrete.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "qk/rng.hpp"

namespace qk {

namespace {

// Sum of w_ij * x^i * y^j over one 3x3 family table.
cplx family_sum(const std::array<std::array<double, 3>, 3>& fam, cplx x, cplx y) {
  cplx total = 0.0;
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      const double w = fam[di + 1][dj + 1];
      if (w == 0.0) continue;
      cplx term = w;
      if (di == 1) term *= x;
      if (di == -1) term /= x;
      if (dj == 1) term *= y;
      if (dj == -1) term /= y;
      total += term;
    }
  }
  return total;
}

}  // namespace

cplx walk_K(const DiscreteModel& m, cplx x, cplx y) {
  return x * y * (family_sum(m.interior, x, y) - 1.0);
}

cplx walk_k(const DiscreteModel& m, cplx x, cplx y) {
  return x * (family_sum(m.hwall, x, y) - 1.0);
}

cplx walk_kt(const DiscreteModel& m, cplx x, cplx y) {
  return y * (family_sum(m.vwall, x, y) - 1.0);
}

cplx walk_k0(const DiscreteModel& m, cplx x, cplx y) {
  return family_sum(m.origin, x, y) - 1.0;
}

WalkView walk_view(const DiscreteModel& m, int frozen_axis) {
  if (frozen_axis != 1 && frozen_axis != 2)
    throw config_error("walk_view: axis must be 1 or 2");
  WalkView v;
  v.axis = frozen_axis;
  // K(x,y) = sum p_ij x^{i+1} y^{j+1} - x y. Collecting by powers of the
  // moving variable leaves quadratics whose coefficients are the t-weighted
  // family rows (t the frozen variable); the -xy lands in the middle one.
  if (frozen_axis == 1) {
    v.a = Poly2{m.p(1, -1), m.p(1, 0), m.p(1, 1)};
    v.b = Poly2{m.p(0, -1), m.p(0, 0) - 1.0, m.p(0, 1)};
    v.c = Poly2{m.p(-1, -1), m.p(-1, 0), m.p(-1, 1)};
  } else {
    v.a = Poly2{m.p(-1, 1), m.p(0, 1), m.p(1, 1)};
    v.b = Poly2{m.p(-1, 0), m.p(0, 0) - 1.0, m.p(1, 0)};
    v.c = Poly2{m.p(-1, -1), m.p(0, -1), m.p(1, -1)};
  }
  return v;
}

namespace {

// Quadratic roots of a(t) z^2 + b(t) z + c(t), ordered by modulus (smaller
// first); complex-conjugate pairs tie, broken by imaginary part. When the
// leading coefficient vanishes the quadratic degenerates: the finite root is
// -c/b and the partner escapes to infinity.
std::pair<cplx, cplx> view_roots(const WalkView& v, cplx t) {
  const cplx a = v.a(t);
  const cplx b = v.b(t);
  const cplx c = v.c(t);
  const double ascale = std::abs(a);
  const double bscale = std::abs(b);
  if (ascale < 1e-14 * (bscale + std::abs(c) + 1.0)) {
    const double inf = std::numeric_limits<double>::infinity();
    if (bscale == 0.0) return {cplx(inf, 0.0), cplx(inf, 0.0)};
    return {-c / b, cplx(inf, 0.0)};
  }
  cplx d = v.disc(t);
  if (std::abs(d) < 1e-14 * bscale * bscale) d = 0.0;
  const cplx s = std::sqrt(d);
  cplx r1 = (-b - s) / (2.0 * a);
  cplx r2 = (-b + s) / (2.0 * a);
  const double m1 = std::abs(r1), m2 = std::abs(r2);
  if (std::abs(m1 - m2) > 1e-12 * (m1 + m2)) {
    if (m1 > m2) std::swap(r1, r2);
  } else if (r1.imag() > r2.imag()) {
    std::swap(r1, r2);
  }
  return {r1, r2};
}

}  // namespace

std::pair<cplx, cplx> branches_X(const DiscreteModel& m, cplx y) {
  return view_roots(walk_view(m, 1), y);
}

std::pair<cplx, cplx> branches_Y(const DiscreteModel& m, cplx x) {
  return view_roots(walk_view(m, 2), x);
}

namespace {

// Real roots of sum g[k] t^k via the companion matrix, ascending. Leading
// coefficients below 1e-13 of the largest are trimmed first.
std::vector<double> real_poly_roots(std::vector<double> g) {
  double gmax = 0.0;
  for (double c : g) gmax = std::max(gmax, std::abs(c));
  if (gmax == 0.0) return {};
  while (g.size() > 1 && std::abs(g.back()) < 1e-13 * gmax) g.pop_back();
  const int n = static_cast<int>(g.size()) - 1;
  std::vector<double> roots;
  if (n < 1) return roots;
  if (n == 1) {
    roots.push_back(-g[0] / g[1]);
    return roots;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -g[i] / g[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  const auto& ev = es.eigenvalues();
  for (int i = 0; i < n; ++i) {
    if (std::abs(ev[i].imag()) < 1e-8 * (1.0 + std::abs(ev[i].real())))
      roots.push_back(ev[i].real());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

WalkDiscriminantRoots discriminant_roots(const DiscreteModel& m, int axis) {
  validate_discrete(m);
  const WalkView v = walk_view(m, axis);
  // disc(t) = b(t)^2 - 4 a(t) c(t), degree <= 4 in the frozen variable.
  const double b0 = v.b.c0, b1 = v.b.c1, b2 = v.b.c2;
  const double a0 = v.a.c0, a1 = v.a.c1, a2 = v.a.c2;
  const double c0 = v.c.c0, c1 = v.c.c1, c2 = v.c.c2;
  std::vector<double> g = {
      b0 * b0 - 4.0 * a0 * c0,
      2.0 * b0 * b1 - 4.0 * (a0 * c1 + a1 * c0),
      b1 * b1 + 2.0 * b0 * b2 - 4.0 * (a0 * c2 + a1 * c1 + a2 * c0),
      2.0 * b1 * b2 - 4.0 * (a1 * c2 + a2 * c1),
      b2 * b2 - 4.0 * a2 * c2,
  };
  WalkDiscriminantRoots out;
  const bool quartic = std::abs(g[4]) >= 1e-13 * std::max({std::abs(g[0]), std::abs(g[1]), std::abs(g[2]), std::abs(g[3]), std::abs(g[4])});
  out.roots = real_poly_roots(std::move(g));
  std::vector<double> inside, outside;
  for (double r : out.roots) {
    (std::abs(r) <= 1.0 + 1e-9 ? inside : outside).push_back(r);
  }
  if (inside.size() != 2)
    throw numeric_error(
        "discriminant_roots: expected exactly two branch points in the closed "
        "unit disc, found " + std::to_string(inside.size()));
  out.y1 = inside[0];
  out.y2 = inside[1];
  std::vector<double> beyond;
  for (double r : outside)
    if (r > 1.0) beyond.push_back(r);
  if (beyond.empty())
    throw numeric_error("discriminant_roots: no branch point beyond the unit disc");
  out.y3 = beyond.front();
  if (quartic && beyond.size() >= 2) out.y4 = beyond[1];
  return out;
}

CurveSample sample_curve_M(const DiscreteModel& m, int n) {
  validate_discrete(m);
  if (n < 3) throw config_error("sample_curve_M: need at least 3 grid points");
  const WalkDiscriminantRoots dr = discriminant_roots(m, 1);
  CurveSample cs;
  cs.axis = 1;
  cs.cutoff = dr.y1;
  const double span = dr.y2 - dr.y1;
  auto grid = [&](int i) { return dr.y1 + span * static_cast<double>(i) / (n - 1); };
  // Minus arm left to right, then plus arm back: a closed loop since the
  // branches meet (real double root) at y1 and y2.
  cs.points.reserve(2 * n - 2);
  for (int i = 0; i < n; ++i) {
    const double y = grid(i);
    const auto br = branches_X(m, y);
    const int tag = (i == 0 || i == n - 1) ? 0 : -1;
    cs.points.push_back({y, br.first, tag});
  }
  for (int i = n - 2; i >= 1; --i) {
    const double y = grid(i);
    const auto br = branches_X(m, y);
    cs.points.push_back({y, br.second, +1});
  }
  return cs;
}

namespace {

// Vieta ratio for the generators: at fixed x the product of the two y-roots
// of K is (sum_i p_{i,-1} x^i) / (sum_i p_{i,+1} x^i), so zeta maps a curve
// point to the curve point with the partner y-root (and symmetrically eta).
cplx row_ratio(const DiscreteModel& m, cplx x, int dj_num, int dj_den) {
  cplx num = 0.0, den = 0.0;
  for (int di = -1; di <= 1; ++di) {
    cplx pw = 1.0;
    if (di == 1) pw = x;
    if (di == -1) pw = 1.0 / x;
    num += m.p(di, dj_num) * pw;
    den += m.p(di, dj_den) * pw;
  }
  return num / den;
}

cplx col_ratio(const DiscreteModel& m, cplx y, int di_num, int di_den) {
  cplx num = 0.0, den = 0.0;
  for (int dj = -1; dj <= 1; ++dj) {
    cplx pw = 1.0;
    if (dj == 1) pw = y;
    if (dj == -1) pw = 1.0 / y;
    num += m.p(di_num, dj) * pw;
    den += m.p(di_den, dj) * pw;
  }
  return num / den;
}

}  // namespace

std::pair<cplx, cplx> zeta_walk(const DiscreteModel& m, cplx x, cplx y) {
  return {x, row_ratio(m, x, -1, +1) / y};
}

std::pair<cplx, cplx> eta_walk(const DiscreteModel& m, cplx x, cplx y) {
  return {col_ratio(m, y, -1, +1) / x, y};
}

WalkGroupReport walk_group_order(const DiscreteModel& m, int max_iter,
                                 std::uint64_t seed) {
  validate_discrete(m);
  if (max_iter < 1) throw config_error("walk_group_order: max_iter must be >= 1");
  WalkGroupReport rep;
  rep.max_iter = max_iter;

  Philox rng(seed, 0);
  constexpr int kPoints = 6;
  std::vector<std::pair<cplx, cplx>> base;
  int attempts = 0;
  while (static_cast<int>(base.size()) < kPoints && attempts < 200) {
    ++attempts;
    const double r = 0.6 + 0.8 * rng.next_uniform();
    const double ph = 2.0 * kPi * rng.next_uniform();
    const cplx x = std::polar(r, ph);
    const auto ys = branches_Y(m, x);
    const cplx y = (base.size() % 2 == 0) ? ys.first : ys.second;
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) continue;
    if (std::abs(y) < 1e-8) continue;
    if (std::abs(walk_K(m, x, y)) > 1e-9 * (1.0 + std::abs(x) + std::abs(y)))
      continue;
    base.emplace_back(x, y);
  }
  if (static_cast<int>(base.size()) < kPoints)
    throw numeric_error("walk_group_order: could not seed kernel points");

  auto cur = base;
  for (int n = 1; n <= max_iter; ++n) {
    double worst = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      auto p = eta_walk(m, cur[i].first, cur[i].second);
      p = zeta_walk(m, p.first, p.second);
      cur[i] = p;
      double resid;
      if (!std::isfinite(p.first.real()) || !std::isfinite(p.first.imag()) ||
          !std::isfinite(p.second.real()) || !std::isfinite(p.second.imag())) {
        resid = std::numeric_limits<double>::infinity();
      } else {
        resid = (std::abs(p.first - base[i].first) +
                 std::abs(p.second - base[i].second)) /
                (1.0 + std::abs(base[i].first) + std::abs(base[i].second));
      }
      worst = std::max(worst, resid);
    }
    rep.orbit_residuals.push_back(worst);
    if (worst < 1e-8) {
      rep.verdict = WalkGroupReport::Verdict::finite;
      rep.order = 2 * n;
      return rep;
    }
  }
  rep.verdict = WalkGroupReport::Verdict::exceeds_bound;
  rep.order = 0;
  return rep;
}

namespace {

struct PDerivs {
  double p = 0.0, pu = 0.0, pv = 0.0;
  double puu = 0.0, puv = 0.0, pvv = 0.0;
};

PDerivs p_derivs(const DiscreteModel& m, double u, double v) {
  PDerivs d;
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      const double w = m.p(di, dj);
      if (w == 0.0) continue;
      const double t = w * std::exp(di * u + dj * v);
      d.p += t;
      d.pu += di * t;
      d.pv += dj * t;
      d.puu += di * di * t;
      d.puv += di * dj * t;
      d.pvv += dj * dj * t;
    }
  }
  return d;
}

}  // namespace

std::pair<double, double> discrete_saddle(const DiscreteModel& m, double alpha) {
  validate_discrete(m);
  const double e1 = std::cos(alpha), e2 = std::sin(alpha);

  // {P = 1} in (u, v) = (log x, log y) is a convex loop through the origin
  // (P is log-convex and P(1,1) = 1). Walk the ray t * e_alpha to its second
  // crossing for a warm start on the correct side, then polish with Newton
  // on {P = 1, grad P x e_alpha = 0}.
  auto h = [&](double t) { return p_derivs(m, t * e1, t * e2).p - 1.0; };
  double thi = 0.5;
  int grow = 0;
  while (h(thi) <= 0.0 && grow < 80) {
    thi *= 2.0;
    ++grow;
  }
  if (grow >= 80)
    throw numeric_error("discrete_saddle: no second kernel crossing along e_alpha");
  double tlo = thi * 0.5;
  while (h(tlo) > 0.0 && tlo > 1e-12) tlo *= 0.5;
  if (h(tlo) > 0.0)
    throw numeric_error("discrete_saddle: walk does not decay in that direction");
  // h(tlo) <= 0 < h(thi), so bisection lands on the upward crossing.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (tlo + thi);
    if (h(mid) <= 0.0)
      tlo = mid;
    else
      thi = mid;
  }
  double u = 0.5 * (tlo + thi) * e1;
  double v = 0.5 * (tlo + thi) * e2;

  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const PDerivs d = p_derivs(m, u, v);
    const double f1 = d.p - 1.0;
    const double f2 = d.pu * e2 - d.pv * e1;
    const double j11 = d.pu, j12 = d.pv;
    const double j21 = d.puu * e2 - d.puv * e1;
    const double j22 = d.puv * e2 - d.pvv * e1;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) throw numeric_error("discrete_saddle: singular Newton step");
    const double du = (f1 * j22 - f2 * j12) / det;
    const double dv = (f2 * j11 - f1 * j21) / det;
    u -= du;
    v -= dv;
    if (std::abs(du) + std::abs(dv) < 1e-14 * (1.0 + std::abs(u) + std::abs(v))) {
      converged = true;
      break;
    }
  }
  const PDerivs d = p_derivs(m, u, v);
  const double resid = std::abs(d.p - 1.0) + std::abs(d.pu * e2 - d.pv * e1);
  if (!converged && resid > 1e-10)
    throw numeric_error("discrete_saddle: Newton did not converge");
  if (d.pu * e1 + d.pv * e2 <= 0.0)
    throw numeric_error("discrete_saddle: converged to the wrong kernel point");
  return {std::exp(u), std::exp(v)};
}

namespace {

// Zeros of wall_poly along the real branch curve: scan_axis = 1 walks
// s = x through (1, x3) with y riding the small root Y0(s), scan_axis = 2
// walks s = y with x riding X0(s). Each zero s* yields the pole point with
// the ridden coordinate replaced by its partner root (the generator image),
// which is where the continued boundary transform actually blows up.
std::vector<PolePoint> pole_scan_walk(const DiscreteModel& m, int scan_axis,
                                      bool use_k, double e1, double e2) {
  const WalkDiscriminantRoots dr = discriminant_roots(m, scan_axis == 1 ? 2 : 1);
  const WalkView ridden = walk_view(m, scan_axis == 1 ? 2 : 1);
  std::vector<PolePoint> poles;
  const double hi = dr.y3;
  if (!(hi > 1.0)) return poles;
  const double span = hi - 1.0;
  const double lo = 1.0 + 1e-7 * span;
  const int kGrid = 2048;

  auto branch_pair = [&](double s) {
    return scan_axis == 1 ? branches_Y(m, s) : branches_X(m, s);
  };
  auto eval = [&](double s, bool& valid) -> double {
    if (ridden.disc(s).real() <= 0.0) {
      valid = false;
      return 0.0;
    }
    const auto br = branch_pair(s);
    const cplx small = br.first;
    if (std::abs(small.imag()) > 1e-9 * (1.0 + std::abs(small.real()))) {
      valid = false;
      return 0.0;
    }
    valid = true;
    const cplx xx = scan_axis == 1 ? cplx(s) : small;
    const cplx yy = scan_axis == 1 ? small : cplx(s);
    return (use_k ? walk_k(m, xx, yy) : walk_kt(m, xx, yy)).real();
  };

  double prev_s = 0.0, prev_f = 0.0;
  bool prev_valid = false;
  for (int i = 0; i <= kGrid; ++i) {
    const double s = lo + (hi * (1.0 - 1e-9) - lo) * static_cast<double>(i) / kGrid;
    bool valid = false;
    const double f = eval(s, valid);
    if (valid && prev_valid && ((prev_f < 0.0 && f > 0.0) || (prev_f > 0.0 && f < 0.0))) {
      double a = prev_s, b = s, fa = prev_f;
      for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (a + b);
        bool ok = false;
        const double fm = eval(mid, ok);
        if (!ok) break;
        if ((fa < 0.0) == (fm < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      const double s0 = 0.5 * (a + b);
      if (std::abs(s0 - 1.0) > 1e-6) {
        const auto br = branch_pair(s0);
        const cplx partner = br.second;
        if (std::abs(partner.imag()) <= 1e-7 * (1.0 + std::abs(partner.real())) &&
            partner.real() > 0.0 && s0 > 0.0) {
          PolePoint p;
          p.x = scan_axis == 1 ? s0 : partner.real();
          p.y = scan_axis == 1 ? partner.real() : s0;
          p.rate = e1 * std::log(p.x) + e2 * std::log(p.y);
          bool dup = false;
          for (const auto& q : poles)
            dup = dup || (std::abs(q.x - p.x) + std::abs(q.y - p.y) <
                          1e-7 * (1.0 + p.x + p.y));
          if (!dup) poles.push_back(p);
        }
      }
    }
    prev_s = s;
    prev_f = f;
    prev_valid = valid;
  }
  std::sort(poles.begin(), poles.end(),
            [](const PolePoint& a, const PolePoint& b) { return a.rate < b.rate; });
  return poles;
}

double min_rate(const std::vector<PolePoint>& poles, const char* slot) {
  if (poles.empty())
    throw numeric_error(std::string("discrete_regime: sign test names the ") +
                        slot + " pole dominant but no pole was located");
  return poles.front().rate;
}

}  // namespace

DiscreteRegimeReport discrete_regime(const DiscreteModel& m, double alpha,
                                     PsiPhiConvention conv) {
  validate_discrete(m);
  DiscreteRegimeReport rep;
  rep.alpha = alpha;
  rep.convention = conv;
  const double e1 = std::cos(alpha), e2 = std::sin(alpha);

  rep.saddle = discrete_saddle(m, alpha);
  const double xa = rep.saddle.first, ya = rep.saddle.second;
  rep.rate_saddle = e1 * std::log(xa) + e2 * std::log(ya);

  const auto zimg = zeta_walk(m, xa, ya);
  const auto eimg = eta_walk(m, xa, ya);
  if (conv == PsiPhiConvention::psi_is_zeta) {
    rep.k_at_zeta_saddle = walk_k(m, zimg.first, zimg.second).real();
    rep.kt_at_eta_saddle = walk_kt(m, eimg.first, eimg.second).real();
    rep.poles_k = pole_scan_walk(m, 1, /*use_k=*/true, e1, e2);
    rep.poles_kt = pole_scan_walk(m, 2, /*use_k=*/false, e1, e2);
  } else {
    rep.k_at_zeta_saddle = walk_k(m, eimg.first, eimg.second).real();
    rep.kt_at_eta_saddle = walk_kt(m, zimg.first, zimg.second).real();
    rep.poles_k = pole_scan_walk(m, 2, /*use_k=*/true, e1, e2);
    rep.poles_kt = pole_scan_walk(m, 1, /*use_k=*/false, e1, e2);
  }

  const double band = 1e-10;
  const double s1 = rep.k_at_zeta_saddle, s2 = rep.kt_at_eta_saddle;
  if (std::abs(s1) < band || std::abs(s2) < band) {
    rep.label = PLabel::boundary;
    rep.dominant_rate = rep.rate_saddle;
    rep.prefactor_power = 0.0;
  } else if (s1 < 0.0 && s2 < 0.0) {
    rep.label = PLabel::Pmm;
    rep.dominant_rate = rep.rate_saddle;
    rep.prefactor_power = -0.5;
  } else if (s1 > 0.0 && s2 < 0.0) {
    rep.label = PLabel::Ppm;
    rep.dominant_rate = min_rate(rep.poles_k, "k");
    rep.prefactor_power = 0.0;
  } else if (s1 < 0.0 && s2 > 0.0) {
    rep.label = PLabel::Pmp;
    rep.dominant_rate = min_rate(rep.poles_kt, "kt");
    rep.prefactor_power = 0.0;
  } else {
    rep.label = PLabel::Ppp;
    rep.dominant_rate = std::min(min_rate(rep.poles_k, "k"),
                                 min_rate(rep.poles_kt, "kt"));
    rep.prefactor_power = 0.0;
  }
  return rep;
}

std::string discrete_sweep_csv(const DiscreteModel& m,
                               const std::vector<double>& alphas,
                               PsiPhiConvention conv) {
  std::ostringstream out;
  out << "alpha,x_alpha,y_alpha,label,rate_saddle,dominant_rate,prefactor_power\n";
  for (double a : alphas) {
    const DiscreteRegimeReport r = discrete_regime(m, a, conv);
    out << fmt17(a) << ',' << fmt17(r.saddle.first) << ',' << fmt17(r.saddle.second)
        << ',' << plabel_name(r.label) << ',' << fmt17(r.rate_saddle) << ','
        << fmt17(r.dominant_rate) << ',' << fmt17(r.prefactor_power) << '\n';
  }
  return out.str();
}

const char* plabel_name(PLabel l) {
  switch (l) {
    case PLabel::Pmm: return "P--";
    case PLabel::Ppm: return "P+-";
    case PLabel::Pmp: return "P-+";
    case PLabel::Ppp: return "P++";
    case PLabel::boundary: return "boundary";
  }
  return "?";
}

}  // namespace qk
