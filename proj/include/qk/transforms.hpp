#pragma once

#include <string>
#include <vector>

#include "qk/gluing.hpp"

namespace qk {

enum class TransformKind { phi1, phi2, psi1, psi2, phi };
enum class EvalRoute { direct, continuation };
enum class TransformStatus {
  ok,
  pole,          // at a zero of w - w(0) other than the removable one at 0
  on_cut,        // argument on [theta^+, inf)
  kernel_zero,   // phi requested on gamma = 0 (removable there, no value)
};

struct TransformValue {
  cplx value;
  TransformKind kind = TransformKind::phi1;
  EvalRoute via = EvalRoute::direct;
  TransformStatus status = TransformStatus::ok;
  bool ok() const { return status == TransformStatus::ok; }
};

// Boundary Laplace transforms for orthogonal reflection (refl = I), by the
// closed form phi1(theta2) = -mu1 w'(0) theta2 / (w(theta2) - w(0)).
// Near 0 (|theta2| < 1e-6) the removable singularity of the quotient is
// evaluated by a two-term Taylor ratio. Non-identity reflection throws
// config_error (out of scope for the closed form).
TransformValue phi1(const ContinuousModel& m, cplx t2);
TransformValue phi2(const ContinuousModel& m, cplx t1);

// psi_i = phi_i / theta_i; theta_i = 0 is a genuine simple pole of psi_i.
TransformValue psi1(const ContinuousModel& m, cplx t2);
TransformValue psi2(const ContinuousModel& m, cplx t1);

// Interior transform off the kernel zero set:
//   phi(theta) = -(gamma1 phi1(theta2) + gamma2 phi2(theta1)) / gamma(theta).
// On gamma = 0 the value is removable but not computed; status kernel_zero.
TransformValue phi_interior(const ContinuousModel& m, cplx t1, cplx t2);

// Meromorphic continuation of phi1 off its initial half-plane:
//   phi1(theta2) = -(gamma2/gamma1)(Theta1^-(theta2), theta2)
//                   * phi2(Theta1^-(theta2)),
// valid on {Re theta2 <= 0 or Re Theta1^-(theta2) < 0}; outside that set
// throws config_error, on the cut [theta2^+, inf) reports on_cut.
TransformValue continue_phi1(const ContinuousModel& m, cplx t2);

// |psi1(conj t2) - psi1(t2)| for t2 on the curve R: the boundary condition
// of the Riemann-Hilbert problem, zero in exact arithmetic.
double bc_residual_orthogonal(const ContinuousModel& m, cplx t2_on_R);

// Shift factor of the general-reflection boundary condition
//   phi1(conj t2) = G(t2) phi1(t2) on R:
//   G = (gamma1/gamma2)(Theta1^-(t2), t2) * (gamma2/gamma1)(Theta1^-(t2), conj t2).
cplx bvp_shift_factor_G(const ContinuousModel& m, cplx t2);

// Real zeros of w(.) - w(0) on (0, t^+) other than 0 itself: the poles the
// density contours must stay left of. axis = 1 scans the theta2 plane
// (poles of phi1), axis = 2 the theta1 plane (poles of phi2).
std::vector<double> transform_pole_scan(const ContinuousModel& m, int axis);

// CSV with columns re_arg,im_arg,re_val,im_val,kind,via.
struct TransformEval {
  cplx arg;
  TransformValue val;
};
std::string transforms_to_csv(const std::vector<TransformEval>& evals);

}  // namespace qk
