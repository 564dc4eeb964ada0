#pragma once

#include <string>
#include <utility>

#include "qk/kernel.hpp"

namespace qk {

// beta = arccos(-sigma12 / sqrt(sigma11 sigma22)), in (0, pi).
double beta_angle(const ContinuousModel& m);

// Rational uniformization of the compactified kernel zero set:
//   theta1(s) = m1 + (D1/4)(s + 1/s),
//   theta2(s) = m2 + (D2/4)(s e^{-i beta} + e^{i beta}/s),
// with m, D the midpoint and spread of the respective branch points.
// s = 0 and s = inf are the two points over theta = infinity; passing s = 0
// throws numeric_error.
std::pair<cplx, cplx> uniformization(const ContinuousModel& m, cplx s);

// Recover a sphere coordinate from a kernel point: the two preimages of
// theta1 are s and 1/s; the one whose theta2(s) matches is returned.
cplx sphere_recover(const ContinuousModel& m, cplx t1, cplx t2);

// The group generators as point maps on the kernel zero set: each swaps one
// coordinate for the conjugate root of the frozen quadratic, via root sums
// (no division by the current coordinate).
std::pair<cplx, cplx> zeta_point(const ContinuousModel& m, cplx t1, cplx t2);
std::pair<cplx, cplx> eta_point(const ContinuousModel& m, cplx t1, cplx t2);

// Group finiteness. The composition eta.zeta acts on the sphere coordinate
// as multiplication by e^{2 i beta}, so the group is finite of order 2p iff
// pi/beta = p/q in lowest terms. Detection: continued-fraction convergents
// of pi/beta with denominator <= max_denominator, accepted when the
// approximation error is < 1e-9. Never claims infinite: the alternative
// verdict is exceeds_bound (no rational of bounded denominator fits).
struct GroupReport {
  enum class Verdict { finite, exceeds_bound } verdict = Verdict::exceeds_bound;
  int order = 0;       // 2p when finite
  long long p = 0, q = 0;
  double beta = 0.0;
  double ratio = 0.0;  // pi/beta
  double best_error = 0.0;
  int max_denominator = 0;
};

GroupReport group_order(const ContinuousModel& m, int max_denominator = 64);

std::string group_report_json(const GroupReport& r);

}  // namespace qk
