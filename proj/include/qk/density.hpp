#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qk/transforms.hpp"

namespace qk {

enum class QuadratureRule { gl_panels, tanh_sinh };

// Contour inversion parameters. Contours are vertical lines Re = shift; the
// shift must stay left of theta^+ and of every pole of the transform on the
// contour's axis. NaN shift means choose automatically (decay-optimal,
// capped away from the first pole and the branch point, recorded in the
// result). truncation caps |Im|; nodes is the per-panel quadrature order.
struct QuadratureSpec {
  double shift1 = std::numeric_limits<double>::quiet_NaN();
  double shift2 = std::numeric_limits<double>::quiet_NaN();
  double truncation = 1e6;
  int nodes = 16;
  QuadratureRule rule = QuadratureRule::gl_panels;
  double rel_tol = 1e-10;
};

struct DensityValue {
  double value = 0.0;
  double error_estimate = 0.0;  // embedded-rule self-estimate
  double imag_residual = 0.0;   // |Im| of the contour sum, health check
  double shift1 = 0.0, shift2 = 0.0;
  double trunc1 = 0.0, trunc2 = 0.0;
};

// Stationary density at (x1, x2), x_i > 0, by the two single contour
// integrals
//   pi(x) = (1/2 pi i) Int phi2(t1) gamma2(t1, Th2p(t1))
//             e^{-x1 t1 - x2 Th2p(t1)} dt1 / sqrt(d(t1))
//         + (same with axes swapped),
// over vertical contours through the analyticity strip; sqrt branch fixed by
// continuity from the positive real value at the real-axis crossing (the
// discriminant stays in the right half-plane on such contours, so the
// principal branch is already continuous). Identity reflection only.
DensityValue density_at(const ContinuousModel& m, double x1, double x2,
                        const QuadratureSpec& spec = {});

// Boundary density nu1 on the face {z1 = 0} by Bromwich inversion of phi1:
//   nu1(x2) = (1/2 pi i) Int phi1(t2) e^{-t2 x2} dt2
// over a vertical contour left of every singularity of phi1 in the right
// half-plane, with an integration-by-parts tail correction (the integrand
// decays only algebraically).
DensityValue boundary_density_nu1(const ContinuousModel& m, double x2,
                                  const QuadratureSpec& spec = {});

// Tensor-grid integral of density_at over [0, T]^2: composite two-point
// Gauss cells, (nodes_per_axis - 1) cells per axis. All quadrature nodes are
// interior, which matters: the contour representation loses its exponential
// decay on the quadrant boundary itself. Should be ~1 when T buries the tail.
double normalization_check(const ContinuousModel& m, double T,
                           int nodes_per_axis = 41,
                           const QuadratureSpec& spec = {});

// CSV with columns x1,x2,density,error_estimate.
struct DensityGridPoint {
  double x1, x2;
  DensityValue v;
};
std::string density_grid_csv(const std::vector<DensityGridPoint>& pts);

}  // namespace qk
