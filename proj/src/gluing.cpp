#include "qk/gluing.hpp"

#include <cmath>

#include "qk/sphere.hpp"

namespace qk {

namespace {

// Reciprocal pair {z^a, z^-a} with z the better-conditioned of x +- sqrt(x^2-1)
// (the two are exact reciprocals, so the smaller is derived, not subtracted).
struct PowPair {
  cplx pos, neg;   // (x+s)^a, (x-s)^a
  cplx s;          // principal sqrt(x^2 - 1)
};

PowPair chebyshev_pow_pair(double a, cplx x) {
  const cplx s = std::sqrt(x * x - 1.0);
  const cplx zp = x + s, zm = x - s;
  PowPair out;
  out.s = s;
  if (std::abs(zp) >= std::abs(zm)) {
    out.pos = std::pow(zp, a);
    out.neg = 1.0 / out.pos;
  } else {
    out.neg = std::pow(zm, a);
    out.pos = 1.0 / out.neg;
  }
  return out;
}

}  // namespace

cplx chebyshev_T(double a, cplx x) {
  const PowPair p = chebyshev_pow_pair(a, x);
  return 0.5 * (p.pos + p.neg);
}

cplx chebyshev_T_prime(double a, cplx x) {
  if (std::abs(x - 1.0) < 1e-5) {
    // (x+s)^a - (x-s)^a cancels as s -> 0; switch to the expansion of
    // a sin(a phi)/sin(phi) in e = 1 - x (exact for a = 2, 3).
    const cplx e = 1.0 - x;
    return a * a *
           (1.0 + (1.0 - a * a) * e / 3.0 +
            (1.0 - a * a) * (4.0 - a * a) * e * e / 30.0);
  }
  const PowPair p = chebyshev_pow_pair(a, x);
  return 0.5 * a * (p.pos - p.neg) / p.s;
}

cplx chebyshev_T_second(double a, cplx x) {
  if (std::abs(x - 1.0) < 1e-5) {
    const cplx e = 1.0 - x;
    return a * a * (a * a - 1.0) * (1.0 / 3.0 + (4.0 - a * a) * e / 15.0);
  }
  // (1-x^2) T'' - x T' + a^2 T = 0 away from x = +-1.
  return (x * chebyshev_T_prime(a, x) - a * a * chebyshev_T(a, x)) /
         (1.0 - x * x);
}

namespace {

struct GlueMap {
  double order;    // pi / beta
  double lo, hi;   // branch points of the plane being glued
  // x(t) = -(2t - (hi + lo)) / (hi - lo); the cut [hi, inf) maps to (-inf,-1].
  cplx x(cplx t) const { return (cplx(hi + lo) - 2.0 * t) / (hi - lo); }
  double xprime() const { return -2.0 / (hi - lo); }
  bool on_cut(cplx t) const {
    return std::abs(t.imag()) < 1e-12 * (1.0 + std::abs(t.real())) &&
           t.real() >= hi - 1e-12 * (1.0 + std::abs(hi));
  }
};

GlueMap glue_map(const ContinuousModel& m, int axis) {
  if (axis != 1 && axis != 2) throw config_error("glue: axis must be 1 or 2");
  // The gluing for the face-1 transform lives in the theta2 plane and is
  // built from the theta2 branch points (the swapped view), and vice versa.
  const BranchPoints bp = branch_points(m, axis == 1 ? 2 : 1);
  return {kPi / beta_angle(m), bp.low, bp.high};
}

}  // namespace

GlueValue glue_axis(const ContinuousModel& m, int axis, cplx t) {
  const GlueMap g = glue_map(m, axis);
  return {chebyshev_T(g.order, g.x(t)), g.on_cut(t)};
}

GlueValue glue(const ContinuousModel& m, cplx t2) { return glue_axis(m, 1, t2); }

GlueValue glue_prime_axis(const ContinuousModel& m, int axis, cplx t) {
  const GlueMap g = glue_map(m, axis);
  return {chebyshev_T_prime(g.order, g.x(t)) * g.xprime(), g.on_cut(t)};
}

GlueValue glue_prime(const ContinuousModel& m, cplx t2) {
  return glue_prime_axis(m, 1, t2);
}

GlueValue glue_second_axis(const ContinuousModel& m, int axis, cplx t) {
  const GlueMap g = glue_map(m, axis);
  return {chebyshev_T_second(g.order, g.x(t)) * g.xprime() * g.xprime(),
          g.on_cut(t)};
}

LiftedGlueValue glue_lifted(const ContinuousModel& m, cplx s) {
  const double a = kPi / beta_angle(m);
  const cplx z = -s;
  const cplx p = std::pow(z, a);
  const bool cut = std::abs(s.imag()) < 1e-12 * (1.0 + std::abs(s.real())) &&
                   s.real() >= 0.0;
  return {-0.5 * (p + 1.0 / p), cut};
}

}  // namespace qk
