#pragma once

#include <utility>
#include <vector>

#include "qk/model.hpp"

namespace qk {

// gamma(theta) = 1/2 <theta|Sigma theta> + <theta|mu>, and the reflection
// forms gamma_i(theta) = <R^i|theta> (columns of refl).
cplx gamma_k(const ContinuousModel& m, cplx t1, cplx t2);
cplx gamma_1(const ContinuousModel& m, cplx t1, cplx t2);
cplx gamma_2(const ContinuousModel& m, cplx t1, cplx t2);

struct Poly1 {
  double c0 = 0.0, c1 = 0.0;
  cplx operator()(cplx t) const { return c0 + c1 * t; }
};
struct Poly2 {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  cplx operator()(cplx t) const { return c0 + (c1 + c2 * t) * t; }
};

// gamma frozen in one variable is a quadratic in the other:
//   axis = 1: gamma = a x^2 + b(t) x + c(t) with x = theta2, t = theta1,
//   axis = 2: the same with the roles swapped.
// d(t) = b(t)^2 - 4 a c(t) is the discriminant whose real roots are the
// branch points of the algebraic function x(t).
struct KernelView {
  int axis = 1;   // which variable is frozen (the argument t of b, c, d)
  double a = 0.0;
  Poly1 b;
  Poly2 c;
  Poly2 d;
  cplx disc(cplx t) const { return d(t); }
};

KernelView kernel_view(const ContinuousModel& m, int frozen_axis);

// Real roots of the axis discriminant, low < 0 < high for stable models with
// nonzero drift. marginal flags |root| < 1e-12 (drift component vanishing).
struct BranchPoints {
  double low = 0.0, high = 0.0;
  bool low_marginal = false, high_marginal = false;
};

// axis = 1 gives theta1^± (roots of d), axis = 2 gives theta2^± (roots of
// the swapped view's discriminant).
BranchPoints branch_points(const ContinuousModel& m, int axis);

// Two-valued branch Theta2^±(theta1): roots in theta2 of gamma = 0 at frozen
// theta1, principal sqrt of the discriminant. Near a double root
// (|d| < 1e-14 |b|^2) both values collapse to -b/2a to avoid cancellation.
// Returns {minus, plus}; for real theta1 inside (theta1^-, theta1^+) these
// are real and ordered.
std::pair<cplx, cplx> branches_theta2(const ContinuousModel& m, cplx t1);
std::pair<cplx, cplx> branches_theta1(const ContinuousModel& m, cplx t2);

// One point of a sampled algebraic curve: param is the real parameter
// (theta1 for the continuous curve R), value the complex curve point,
// branch in {-1, 0, +1} (0 marks the real vertex).
struct CurvePoint {
  double param = 0.0;
  cplx value;
  int branch = 0;
};

struct CurveSample {
  std::vector<CurvePoint> points;
  double cutoff = 0.0;  // most negative parameter actually used
  int axis = 1;
};

// The curve R = Theta2^±((-inf, theta1^-]): both branches over a log-spaced
// grid of theta1 in [cutoff, theta1^-], vertex included once, points closed
// under conjugation. Order: minus branch from cutoff toward the vertex, the
// vertex, then the plus branch back out to the cutoff.
CurveSample sample_curve_R(const ContinuousModel& m, int n = 200,
                           double cutoff_offset = 50.0);

enum class DomainPosition { inside, outside, boundary };

// Membership in G_R, the open domain bounded by R that contains 0. Decided
// by the implicit real conic carrying the sampled branch plus the branch
// selector theta1(u) <= theta1^-; points within 1e-10 of R (estimated
// distance |F|/|grad F|) report boundary.
DomainPosition in_domain_GR(const ContinuousModel& m, cplx t2);

// CSV with columns param,re_value,im_value,branch (17 significant digits).
std::string curve_to_csv(const CurveSample& s);

}  // namespace qk
