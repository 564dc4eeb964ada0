#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qk/kernel.hpp"
#include "qk/model.hpp"

namespace qk {

// Walk kernel K(x,y) = x y (sum p_ij x^i y^j - 1) and the wall/origin
// inventory polynomials
//   k(x,y)  = x (sum p'_ij  x^i y^j - 1)   (horizontal wall family),
//   kt(x,y) = y (sum p''_ij x^i y^j - 1)   (vertical wall family),
//   k0(x,y) = sum p0_ij x^i y^j - 1.
cplx walk_K(const DiscreteModel& m, cplx x, cplx y);
cplx walk_k(const DiscreteModel& m, cplx x, cplx y);
cplx walk_kt(const DiscreteModel& m, cplx x, cplx y);
cplx walk_k0(const DiscreteModel& m, cplx x, cplx y);

// K as a quadratic in one variable: axis = 1 freezes y (quadratic in x with
// coefficients a(y), b(y), c(y)), axis = 2 freezes x.
struct WalkView {
  int axis = 1;
  Poly2 a, b, c;
  cplx disc(cplx t) const {
    const cplx bt = b(t);
    return bt * bt - 4.0 * a(t) * c(t);
  }
};
WalkView walk_view(const DiscreteModel& m, int frozen_axis);

// X^±(y): roots in x of K(x, y) = 0; same near-double-root guard as the
// continuous branches. Returns {minus, plus} by |.| for real y in (y1, y2)
// (there the pair is complex conjugate; ordering is by imaginary part).
std::pair<cplx, cplx> branches_X(const DiscreteModel& m, cplx y);
std::pair<cplx, cplx> branches_Y(const DiscreteModel& m, cplx x);

// Real roots of the quartic (or cubic) discriminant of the axis view,
// sorted. Exactly two lie in the closed unit disc for walks of interest
// (inside = (y1, y2)); when the degree drops to 3 the fourth root is
// reported absent (the outside interval is (y3, inf)).
struct WalkDiscriminantRoots {
  std::vector<double> roots;  // all real roots, ascending
  double y1 = 0.0, y2 = 0.0;  // the two inside the unit disc
  double y3 = 0.0;            // first root beyond the disc
  std::optional<double> y4;   // absent when the quartic degenerates
};
WalkDiscriminantRoots discriminant_roots(const DiscreteModel& m, int axis);

// The curve M = X^±([y1, y2]): closed, conjugation-symmetric. Sampled over
// a uniform grid of y in [y1, y2], both branches, endpoints once.
CurveSample sample_curve_M(const DiscreteModel& m, int n = 200);

// Group generators as point maps on {K = 0}:
//   zeta(x, y) = (x, (sum_i p_{i,-1} x^i) / (sum_i p_{i,+1} x^i) / y),
//   eta(x, y)  = ((sum_j p_{-1,j} y^j) / (sum_j p_{+1,j} y^j) / x, y).
std::pair<cplx, cplx> zeta_walk(const DiscreteModel& m, cplx x, cplx y);
std::pair<cplx, cplx> eta_walk(const DiscreteModel& m, cplx x, cplx y);

// Order of <zeta, eta> by numeric orbit of delta = zeta o eta on random
// kernel points: the smallest n <= max_iter with delta^n = id (within 1e-8
// on every test point) gives order 2n; otherwise exceeds_bound.
struct WalkGroupReport {
  enum class Verdict { finite, exceeds_bound } verdict = Verdict::exceeds_bound;
  int order = 0;
  int max_iter = 0;
  std::vector<double> orbit_residuals;  // per-iteration max |delta^n(P) - P|
};
WalkGroupReport walk_group_order(const DiscreteModel& m, int max_iter = 64,
                                 std::uint64_t seed = 20240901);

// Saddle of P(u,v) = sum p_ij e^{iu+jv} on {P = 1} in direction e_alpha:
// Newton on {P = 1, grad P parallel e_alpha, <grad P|e_alpha> > 0};
// returns (x, y) = (e^u, e^v).
std::pair<double, double> discrete_saddle(const DiscreteModel& m, double alpha);

enum class PLabel { Pmm, Ppm, Pmp, Ppp, boundary };

// Which wall polynomial is tested against which generator image of the
// saddle. The source text is ambiguous (its psi/phi are defined as zeta/eta
// but used with swapped-looking names); default pairs k with zeta and kt
// with eta, the flag swaps them.
enum class PsiPhiConvention { psi_is_zeta, psi_is_eta };

struct PolePoint {
  double x = 0.0, y = 0.0;
  double rate = 0.0;  // <e_alpha | (log x, log y)>, decay per unit r
};

struct DiscreteRegimeReport {
  PLabel label = PLabel::boundary;
  double alpha = 0.0;
  std::pair<double, double> saddle{};
  double k_at_zeta_saddle = 0.0;   // sign arguments (dead band 1e-10)
  double kt_at_eta_saddle = 0.0;
  double rate_saddle = 0.0;        // <e_alpha | (log x(a), log y(a))>
  std::vector<PolePoint> poles_k;  // solutions of {K = 0, k(zeta(x,y)) = 0}
  std::vector<PolePoint> poles_kt;
  double dominant_rate = 0.0;      // smallest active decay rate per unit r
  double prefactor_power = 0.0;    // -1/2 in Pmm, else 0
  PsiPhiConvention convention = PsiPhiConvention::psi_is_zeta;
};

DiscreteRegimeReport discrete_regime(
    const DiscreteModel& m, double alpha,
    PsiPhiConvention conv = PsiPhiConvention::psi_is_zeta);

// CSV sweep: alpha,x_alpha,y_alpha,label,rate_saddle,dominant_rate,
// prefactor_power.
std::string discrete_sweep_csv(const DiscreteModel& m,
                               const std::vector<double>& alphas,
                               PsiPhiConvention conv = PsiPhiConvention::psi_is_zeta);

const char* plabel_name(PLabel l);

}  // namespace qk
