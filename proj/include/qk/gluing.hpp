#pragma once

#include "qk/kernel.hpp"

namespace qk {

// Generalized Chebyshev function of (possibly non-integer) order a:
//   T_a(x) = (1/2){ (x + sqrt(x^2-1))^a + (x - sqrt(x^2-1))^a }
//          = cos(a arccos x) on [-1, 1].
// The two summands are reciprocal, so the value does not depend on the sqrt
// branch; with principal powers T_a is analytic on C \ (-inf, -1] (for
// integer a the cut disappears and T_a is the classical polynomial).
cplx chebyshev_T(double a, cplx x);

// dT_a/dx = (a/2s){(x+s)^a - (x-s)^a}, s = sqrt(x^2-1); series fallback
// T_a' ~ a^2 (1 + (1-a^2)(x-1)/3 + ...) near x = 1 where s vanishes.
cplx chebyshev_T_prime(double a, cplx x);

// From the ODE (1-x^2) T'' - x T' + a^2 T = 0.
cplx chebyshev_T_second(double a, cplx x);

struct GlueValue {
  cplx value;
  bool on_cut = false;  // argument within tolerance of the cut [theta2^+, inf)
};

// Conformal gluing function for G_R in the theta2 plane:
//   w(theta2) = T_{pi/beta}( -(2 theta2 - (t2p + t2m)) / (t2p - t2m) ),
// analytic on C \ [theta2^+, inf), real and equal at conjugate points of R.
// axis = 2 gives the analogous function in the theta1 plane (used by phi2).
GlueValue glue(const ContinuousModel& m, cplx t2);
GlueValue glue_axis(const ContinuousModel& m, int axis, cplx t);

GlueValue glue_prime(const ContinuousModel& m, cplx t2);
GlueValue glue_prime_axis(const ContinuousModel& m, int axis, cplx t);
GlueValue glue_second_axis(const ContinuousModel& m, int axis, cplx t);

struct LiftedGlueValue {
  cplx value;
  bool on_log_cut = false;  // s on [0, inf): principal log of -s undefined
};

// The gluing function composed with the uniformization, in sphere
// coordinates: w(theta2(s)) = -(1/2){ (-s)^{pi/beta} + (-s)^{-pi/beta} }
// with principal powers. (A published variant carries a spurious factor i;
// this form is the one that actually equals glue(theta2(s)) on the common
// sheet, checked directly on models where both sides are elementary.)
LiftedGlueValue glue_lifted(const ContinuousModel& m, cplx s);

}  // namespace qk
