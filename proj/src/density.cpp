#include "qk/density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace qk {

namespace {

struct GLRule {
  std::vector<double> x, w;
};

// Nodes by Newton on P_n (Golub-Welsch is overkill for fixed small n).
GLRule gauss_legendre(int n) {
  GLRule r;
  r.x.assign(n, 0.0);
  r.w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 64; ++it) {
      double pm = 1.0, pc = x;
      for (int k = 2; k <= n; ++k) {
        const double pn = ((2.0 * k - 1.0) * x * pc - (k - 1.0) * pm) / k;
        pm = pc;
        pc = pn;
      }
      const double pp = n * (x * pc - pm) / (x * x - 1.0);
      const double dx = pc / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double pm = 1.0, pc = x;
    for (int k = 2; k <= n; ++k) {
      const double pn = ((2.0 * k - 1.0) * x * pc - (k - 1.0) * pm) / k;
      pm = pc;
      pc = pn;
    }
    const double pp = n * (x * pc - pm) / (x * x - 1.0);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return r;
}

// Fine rule plus a companion coarse rule on [-1,1]; |fine - coarse| per panel
// is the self-estimate. For tanh-sinh the coarse rule is the h-doubled
// (even-index) subset, for Gauss panels an independent half-order rule.
struct PanelPair {
  std::vector<double> xf, wf, xc, wc;
};

PanelPair make_panel_rule(QuadratureRule rule, int nodes) {
  if (nodes < 4 || nodes > 64)
    throw config_error("quadrature: nodes must be in [4, 64]");
  PanelPair p;
  if (rule == QuadratureRule::gl_panels) {
    const GLRule f = gauss_legendre(nodes);
    const GLRule c = gauss_legendre(std::max(2, nodes / 2));
    p.xf = f.x, p.wf = f.w, p.xc = c.x, p.wc = c.w;
  } else {
    int K = 3 * nodes / 2;
    if (K % 2) ++K;
    const double h = std::asinh(76.0 / kPi) / K;  // last weight ~ underflow
    for (int k = -K; k <= K; ++k) {
      const double sh = 0.5 * kPi * std::sinh(k * h);
      const double x = std::tanh(sh);
      const double w = h * 0.5 * kPi * std::cosh(k * h) /
                       (std::cosh(sh) * std::cosh(sh));
      p.xf.push_back(x);
      p.wf.push_back(w);
      if ((k & 1) == 0) {
        p.xc.push_back(x);
        p.wc.push_back(2.0 * w);
      }
    }
  }
  return p;
}

struct March {
  cplx total;
  double err = 0.0;
  double tmax = 0.0;
  bool decayed = false;
};

// Adaptive two-sided march over the contour parameter t: panels [t, t+w] and
// their mirror images, width growing geometrically up to wmax, stopping after
// three consecutive negligible panels or at the cap.
March march_contour(const std::function<cplx(double)>& f, double w0,
                    double wmax, double cap, double rel_tol,
                    const PanelPair& rule) {
  March out;
  cplx total = 0.0;
  double t = 0.0, w = w0;
  int consec = 0;
  for (int k = 0; k < 200000; ++k) {
    const double b = std::min(t + w, cap);
    const double mid = 0.5 * (t + b), hl = 0.5 * (b - t);
    cplx fine = 0.0, coarse = 0.0;
    for (size_t j = 0; j < rule.xf.size(); ++j) {
      const double tj = mid + hl * rule.xf[j];
      fine += rule.wf[j] * (f(tj) + f(-tj));
    }
    for (size_t j = 0; j < rule.xc.size(); ++j) {
      const double tj = mid + hl * rule.xc[j];
      coarse += rule.wc[j] * (f(tj) + f(-tj));
    }
    fine *= hl;
    coarse *= hl;
    total += fine;
    out.err += std::abs(fine - coarse);
    t = b;
    consec = std::abs(fine) <= rel_tol * std::max(std::abs(total), 1e-300)
                 ? consec + 1
                 : 0;
    if (k >= 7 && consec >= 3) {
      out.decayed = true;
      break;
    }
    if (t >= cap) break;
    w = std::min(w * 1.15, wmax);
  }
  out.total = total;
  out.tmax = t;
  return out;
}

struct OneContour {
  cplx total;
  double err = 0.0, shift = 0.0, tmax = 0.0;
};

double clamp_tol(double t) { return std::min(std::max(t, 1e-14), 0.1); }

// Place the vertical contour for exp(-xa*theta - xb*Branch(theta)): at the
// saddle of the decay exponent when possible, capped with a margin below the
// first transform pole and kept inside the branch-point strip.
double choose_shift(const KernelView& kv, const BranchPoints& bp, double xa,
                    double xb, const std::vector<double>& poles,
                    double explicit_shift) {
  const double lo = bp.low, hi = bp.high, strip = hi - lo;
  const double first_pole =
      poles.empty() ? std::numeric_limits<double>::infinity() : poles.front();
  if (!std::isnan(explicit_shift)) {
    if (explicit_shift <= lo || explicit_shift >= hi ||
        explicit_shift >= first_pole)
      throw config_error(
          "density: explicit contour shift leaves the branch-point strip or "
          "crosses a transform pole");
    return explicit_shift;
  }
  const double m = 0.02 * strip;
  const auto sprime = [&](double c) {
    const double d = kv.d.c0 + c * (kv.d.c1 + kv.d.c2 * c);
    const double dp = kv.d.c1 + 2.0 * kv.d.c2 * c;
    return xa + xb * (-kv.b.c1 + dp / (2.0 * std::sqrt(d))) / (2.0 * kv.a);
  };
  double a = lo + m, b = hi - m, c;
  if (sprime(b) >= 0.0) c = b;
  else if (sprime(a) <= 0.0) c = a;
  else {
    for (int it = 0; it < 80; ++it) {
      c = 0.5 * (a + b);
      (sprime(c) > 0.0 ? a : b) = c;
    }
    c = 0.5 * (a + b);
  }
  if (std::isfinite(first_pole)) {
    const double margin = std::max(0.075 * first_pole, 0.02 * strip);
    c = std::min(c, first_pole - margin);
    c = std::max(c, lo + m);
    if (c >= first_pole)
      throw numeric_error("density: cannot place contour left of the pole");
  }
  return c;
}

// One of the two single-contour integrals making up the density: the contour
// variable theta runs on Re = shift, the other coordinate rides the upper
// kernel branch. xa multiplies theta, xb the branch.
OneContour contour_integral(const ContinuousModel& m, int contour_axis,
                            double xa, double xb,
                            const std::vector<double>& poles, double shift_opt,
                            const QuadratureSpec& spec, const PanelPair& rule) {
  const KernelView kv = kernel_view(m, contour_axis);
  const BranchPoints bp = branch_points(m, contour_axis);
  const int glue_ax = 3 - contour_axis;
  const double drift = glue_ax == 1 ? m.mu[0] : m.mu[1];
  const cplx w0 = glue_axis(m, glue_ax, cplx(0.0)).value;
  const cplx wp0 = glue_prime_axis(m, glue_ax, cplx(0.0)).value;

  const double c = choose_shift(kv, bp, xa, xb, poles, shift_opt);
  const double osc = xa + xb * std::abs(kv.b.c1) / (2.0 * kv.a);
  const double wmax = 1.5 * 2.0 * kPi / std::max(osc, 1e-9);
  double w00 = std::min({wmax, 0.5 * (bp.high - bp.low), 2.0 * (bp.high - c)});
  if (!poles.empty()) w00 = std::min(w00, 2.0 * (poles.front() - c));
  w00 = std::max(w00, 1e-9 * (bp.high - bp.low));

  const auto f = [&](double t) -> cplx {
    const cplx th(c, t);
    const cplx face = -drift * wp0 * th / (glue_axis(m, glue_ax, th).value - w0);
    const cplx sd = std::sqrt(kv.d(th));  // Re d > 0 on the strip contour
    const cplx branch = (-kv.b(th) + sd) / (2.0 * kv.a);
    const cplx gam = contour_axis == 1 ? gamma_2(m, th, branch)
                                       : gamma_1(m, branch, th);
    return face * gam * std::exp(-xa * th - xb * branch) / sd;
  };
  const March mr = march_contour(f, w00, wmax, spec.truncation,
                                 clamp_tol(spec.rel_tol), rule);
  if (!mr.decayed)
    throw numeric_error(
        "density: contour tail had not decayed at the truncation cap");
  return {mr.total, mr.err, c, mr.tmax};
}

struct DensityPlan {
  PanelPair rule;
  std::vector<double> poles_t1;  // poles of phi2, theta1 plane (contour 1)
  std::vector<double> poles_t2;  // poles of phi1, theta2 plane (contour 2)
};

DensityPlan make_plan(const ContinuousModel& m, const QuadratureSpec& spec) {
  require_stable(m);
  if (!m.identity_refl(1e-14))
    throw config_error("density: identity reflection only");
  if (!(spec.truncation > 0.0))
    throw config_error("density: truncation must be positive");
  return {make_panel_rule(spec.rule, spec.nodes), transform_pole_scan(m, 2),
          transform_pole_scan(m, 1)};
}

DensityValue density_core(const ContinuousModel& m, double x1, double x2,
                          const QuadratureSpec& spec, const DensityPlan& plan) {
  if (!(x1 > 0.0) || !(x2 > 0.0))
    throw config_error("density_at: requires x1 > 0 and x2 > 0");
  const OneContour i1 = contour_integral(m, 1, x1, x2, plan.poles_t1,
                                         spec.shift1, spec, plan.rule);
  const OneContour i2 = contour_integral(m, 2, x2, x1, plan.poles_t2,
                                         spec.shift2, spec, plan.rule);
  const double inv2pi = 1.0 / (2.0 * kPi);
  DensityValue v;
  v.value = (i1.total.real() + i2.total.real()) * inv2pi;
  v.imag_residual = std::abs(i1.total.imag() + i2.total.imag()) * inv2pi;
  v.error_estimate = (i1.err + i2.err) * inv2pi;
  v.shift1 = i1.shift;
  v.shift2 = i2.shift;
  v.trunc1 = i1.tmax;
  v.trunc2 = i2.tmax;
  return v;
}

}  // namespace

DensityValue density_at(const ContinuousModel& m, double x1, double x2,
                        const QuadratureSpec& spec) {
  return density_core(m, x1, x2, spec, make_plan(m, spec));
}

DensityValue boundary_density_nu1(const ContinuousModel& m, double x2,
                                  const QuadratureSpec& spec) {
  require_stable(m);
  if (!m.identity_refl(1e-14))
    throw config_error("boundary_density_nu1: identity reflection only");
  if (!(x2 > 0.0))
    throw config_error("boundary_density_nu1: requires x2 > 0");
  const PanelPair rule = make_panel_rule(spec.rule, spec.nodes);
  const BranchPoints bp = branch_points(m, 2);
  const double strip = bp.high - bp.low;
  const std::vector<double> poles = transform_pole_scan(m, 1);
  const double bound =
      poles.empty() ? bp.high : std::min(poles.front(), bp.high);
  double c;
  if (std::isnan(spec.shift2)) {
    c = bound - std::max(0.075 * bound, 0.02 * strip);
    c = std::max(c, bp.low + 0.02 * strip);
    if (c >= bound)
      throw numeric_error(
          "boundary_density_nu1: cannot place contour left of the pole");
  } else {
    c = spec.shift2;
    if (c <= bp.low || c >= bound)
      throw config_error(
          "boundary_density_nu1: shift outside the analyticity strip");
  }

  const cplx w0 = glue_axis(m, 1, cplx(0.0)).value;
  const cplx wp0 = glue_prime_axis(m, 1, cplx(0.0)).value;
  const auto f1 = [&](cplx th) {
    return -m.mu[0] * wp0 * th / (glue_axis(m, 1, th).value - w0);
  };
  const auto f1prime = [&](cplx th) {
    const cplx dw = glue_axis(m, 1, th).value - w0;
    return -m.mu[0] * wp0 * (dw - th * glue_prime_axis(m, 1, th).value) /
           (dw * dw);
  };
  const auto f = [&](double t) -> cplx {
    const cplx th(c, t);
    return f1(th) * std::exp(-th * x2);
  };

  const double wmax = 1.5 * 2.0 * kPi / x2;
  const double w00 =
      std::max(std::min({wmax, strip, 2.0 * (bound - c)}), 1e-9 * strip);
  // The integrand decays only algebraically; march to a moderate T, then add
  // the two-term integration-by-parts tail (the oscillation factor gains a
  // 1/x2 per differentiation of the slowly varying transform).
  const double cap =
      std::min(spec.truncation, std::max(64.0, 64.0 / std::min(x2, 1.0)));
  const March mr =
      march_contour(f, w00, wmax, cap, clamp_tol(spec.rel_tol), rule);

  const double T = mr.tmax;
  const cplx thT(c, T);
  const cplx tail = cplx(0.0, -1.0) * std::exp(-thT * x2) *
                    (f1(thT) / x2 + f1prime(thT) / (x2 * x2));
  // Third-order term estimated by differencing the transform derivative.
  const double dT = std::max(1e-3 * T, 1e-6);
  const cplx f2fd = (f1prime(thT) - f1prime(cplx(c, T - dT))) / cplx(0.0, dT);
  const double tail_err =
      std::abs(f2fd) * std::exp(-c * x2) / (x2 * x2 * x2);

  const cplx total = mr.total + tail + std::conj(tail);
  const double inv2pi = 1.0 / (2.0 * kPi);
  DensityValue v;
  v.value = total.real() * inv2pi;
  v.imag_residual = std::abs(mr.total.imag()) * inv2pi;
  v.error_estimate = (mr.err + 2.0 * tail_err) * inv2pi;
  v.shift2 = c;
  v.trunc2 = T;
  return v;
}

double normalization_check(const ContinuousModel& m, double T,
                           int nodes_per_axis, const QuadratureSpec& spec) {
  if (!(T > 0.0)) throw config_error("normalization_check: T must be positive");
  if (nodes_per_axis < 3)
    throw config_error("normalization_check: need at least 3 nodes per axis");
  const DensityPlan plan = make_plan(m, spec);
  const int cells = nodes_per_axis - 1;
  const double h = T / cells;
  const double off = 0.5 / std::sqrt(3.0);  // two-point Gauss, interior nodes
  std::vector<double> nodes;
  nodes.reserve(2 * cells);
  for (int i = 0; i < cells; ++i) {
    nodes.push_back((i + 0.5 - off) * h);
    nodes.push_back((i + 0.5 + off) * h);
  }
  double sum = 0.0;
  for (double x1 : nodes)
    for (double x2 : nodes)
      sum += density_core(m, x1, x2, spec, plan).value;
  return sum * 0.25 * h * h;  // each node carries weight h/2 per axis
}

std::string density_grid_csv(const std::vector<DensityGridPoint>& pts) {
  std::ostringstream out;
  out << "x1,x2,density,error_estimate\n";
  for (const auto& p : pts)
    out << fmt17(p.x1) << ',' << fmt17(p.x2) << ',' << fmt17(p.v.value) << ','
        << fmt17(p.v.error_estimate) << '\n';
  return out.str();
}

}  // namespace qk
