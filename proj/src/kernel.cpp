#include "qk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qk {

cplx gamma_k(const ContinuousModel& m, cplx t1, cplx t2) {
  const auto& s = m.sigma;
  return 0.5 * (s[0][0] * t1 * t1 + 2.0 * s[0][1] * t1 * t2 + s[1][1] * t2 * t2) +
         m.mu[0] * t1 + m.mu[1] * t2;
}

cplx gamma_1(const ContinuousModel& m, cplx t1, cplx t2) {
  return m.refl[0][0] * t1 + m.refl[1][0] * t2;
}

cplx gamma_2(const ContinuousModel& m, cplx t1, cplx t2) {
  return m.refl[0][1] * t1 + m.refl[1][1] * t2;
}

KernelView kernel_view(const ContinuousModel& m, int frozen_axis) {
  if (frozen_axis != 1 && frozen_axis != 2)
    throw config_error("kernel_view: axis must be 1 or 2");
  const double s11 = m.sigma[0][0], s12 = m.sigma[0][1], s22 = m.sigma[1][1];
  KernelView kv;
  kv.axis = frozen_axis;
  if (frozen_axis == 1) {
    kv.a = 0.5 * s22;
    kv.b = Poly1{m.mu[1], s12};
    kv.c = Poly2{0.0, m.mu[0], 0.5 * s11};
  } else {
    kv.a = 0.5 * s11;
    kv.b = Poly1{m.mu[0], s12};
    kv.c = Poly2{0.0, m.mu[1], 0.5 * s22};
  }
  // d = b^2 - 4 a c, expanded once so evaluation never cancels b^2 against 4ac.
  kv.d = Poly2{kv.b.c0 * kv.b.c0, 2.0 * kv.b.c0 * kv.b.c1 - 4.0 * kv.a * kv.c.c1,
               kv.b.c1 * kv.b.c1 - 4.0 * kv.a * kv.c.c2};
  return kv;
}

BranchPoints branch_points(const ContinuousModel& m, int axis) {
  const KernelView kv = kernel_view(m, axis);
  // d has negative leading coefficient (sigma12^2 < sigma11 sigma22) and
  // d(0) = mu_other^2 >= 0, so the real roots straddle or touch zero.
  const auto roots = solve_quadratic_real(kv.d.c2, kv.d.c1, kv.d.c0);
  BranchPoints bp;
  bp.low = roots[0];
  bp.high = roots[1];
  bp.low_marginal = std::abs(bp.low) < 1e-12;
  bp.high_marginal = std::abs(bp.high) < 1e-12;
  return bp;
}

namespace {

std::pair<cplx, cplx> branch_pair(const KernelView& kv, cplx t) {
  const cplx b = kv.b(t);
  const cplx d = kv.d(t);
  if (std::abs(d) < 1e-14 * std::norm(b)) {
    const cplx x = -b / (2.0 * kv.a);
    return {x, x};
  }
  const cplx sq = std::sqrt(d);  // principal branch, cut on d < 0
  return {(-b - sq) / (2.0 * kv.a), (-b + sq) / (2.0 * kv.a)};
}

}  // namespace

std::pair<cplx, cplx> branches_theta2(const ContinuousModel& m, cplx t1) {
  return branch_pair(kernel_view(m, 1), t1);
}

std::pair<cplx, cplx> branches_theta1(const ContinuousModel& m, cplx t2) {
  return branch_pair(kernel_view(m, 2), t2);
}

CurveSample sample_curve_R(const ContinuousModel& m, int n, double cutoff_offset) {
  if (n < 2) throw config_error("sample_curve_R: need at least 2 points per arm");
  if (!(cutoff_offset > 0.0))
    throw config_error("sample_curve_R: cutoff_offset must be positive");
  const KernelView kv = kernel_view(m, 1);
  const BranchPoints bp = branch_points(m, 1);

  // Log-spaced offsets below theta1^-: the curve turns fastest at the vertex,
  // so cluster parameters there and stretch toward the cutoff.
  const double dmax = cutoff_offset;
  const double dmin = 1e-8 * std::max(1.0, cutoff_offset);
  const double ratio = std::pow(dmin / dmax, 1.0 / (n - 1));
  std::vector<double> offsets(n);
  for (int i = 0; i < n; ++i) offsets[i] = dmax * std::pow(ratio, i);

  CurveSample cs;
  cs.axis = 1;
  cs.cutoff = bp.low - dmax;
  cs.points.reserve(2 * n + 1);
  for (int i = 0; i < n; ++i) {  // lower arm, cutoff toward vertex
    const double t1 = bp.low - offsets[i];
    cs.points.push_back({t1, branch_pair(kv, cplx(t1, 0.0)).first, -1});
  }
  cs.points.push_back({bp.low, cplx(-kv.b(bp.low).real() / (2.0 * kv.a), 0.0), 0});
  for (int i = n - 1; i >= 0; --i) {  // upper arm, vertex back to cutoff
    const double t1 = bp.low - offsets[i];
    cs.points.push_back({t1, branch_pair(kv, cplx(t1, 0.0)).second, 1});
  }
  return cs;
}

DomainPosition in_domain_GR(const ContinuousModel& m, cplx t2) {
  const double u = t2.real(), v = t2.imag();
  const double s12 = m.sigma[0][1];
  const KernelView kv = kernel_view(m, 1);
  const BranchPoints bp = branch_points(m, 1);

  if (s12 == 0.0) {
    // Re Theta2^pm is the constant -mu2/sigma22: the curve is a vertical line
    // and the domain is the half-plane containing the origin.
    const double ustar = -m.mu[1] / m.sigma[1][1];
    if (std::abs(u - ustar) < 1e-10) return DomainPosition::boundary;
    return ((u < ustar) == (0.0 < ustar)) ? DomainPosition::inside
                                          : DomainPosition::outside;
  }

  // Along the curve, Re Theta2 determines the frozen parameter:
  //   u = -(sigma12 t1 + mu2) / sigma22  =>  t1(u) = -(2 a u + mu2) / sigma12,
  // and Im Theta2 satisfies v^2 = -d(t1(u)) / (2a)^2. The same conic carries a
  // phantom arc over t1 > theta1^+; the selector t1 <= theta1^- excludes it.
  const auto t1_of = [&](double uu) { return -(2.0 * kv.a * uu + m.mu[1]) / s12; };
  const auto d_of = [&](double t) { return kv.d.c0 + t * (kv.d.c1 + kv.d.c2 * t); };
  const double inv4a2 = 1.0 / (4.0 * kv.a * kv.a);

  const double t1p = t1_of(u);
  if (t1p <= 0.5 * (bp.low + bp.high)) {
    const double F = v * v + d_of(t1p) * inv4a2;
    const double dFdu =
        (kv.d.c1 + 2.0 * kv.d.c2 * t1p) * (-2.0 * kv.a / s12) * inv4a2;
    const double grad = std::hypot(dFdu, 2.0 * v);
    if (grad > 0.0 && std::abs(F) / grad < 1e-10) return DomainPosition::boundary;
  }

  const auto in_cup = [&](double uu, double vv) {
    const double t1 = t1_of(uu);
    if (t1 >= bp.low) return false;
    return vv * vv < -d_of(t1) * inv4a2;
  };
  return (in_cup(u, v) == in_cup(0.0, 0.0)) ? DomainPosition::inside
                                            : DomainPosition::outside;
}

std::string curve_to_csv(const CurveSample& s) {
  std::ostringstream out;
  out << "param,re_value,im_value,branch\n";
  for (const auto& p : s.points)
    out << fmt17(p.param) << ',' << fmt17(p.value.real()) << ','
        << fmt17(p.value.imag()) << ',' << p.branch << '\n';
  return out.str();
}

}  // namespace qk
