#pragma once

#include <array>
#include <string>
#include <vector>

#include "qk/kernel.hpp"

namespace qk {

// The point of the kernel ellipse {gamma = 0} maximizing <theta | e_alpha>,
// e_alpha = (cos a, sin a): solved as the stationarity system
// {gamma(theta) = 0, grad gamma x e_alpha = 0, <grad gamma|e_alpha> > 0}
// by Newton with the analytic Jacobian, warm-started from the ellipse
// center pushed along Sigma^{-1} e_alpha.
std::array<double, 2> theta_alpha(const ContinuousModel& m, double alpha);

// theta* is the second intersection of the line {gamma1 = 0} with the
// ellipse, theta** of {gamma2 = 0}; eta theta* shares its second coordinate
// with theta* (partner root in theta1), zeta theta** its first.
struct DistinguishedPoints {
  std::array<double, 2> theta_star{};        // on {gamma1 = 0}
  std::array<double, 2> eta_theta_star{};
  std::array<double, 2> theta_star_star{};   // on {gamma2 = 0}
  std::array<double, 2> zeta_theta_star_star{};
  bool tangent1 = false;  // line gamma1 = 0 tangent: theta* degenerates to 0
  bool tangent2 = false;
};

DistinguishedPoints distinguished_points(const ContinuousModel& m);

enum class Regime { Qmm, Qpm, Qmp, Qpp, boundary };

// Sign classification of the stationary-density decay along e_alpha:
//   sign1 = gamma1(eta theta(alpha)), sign2 = gamma2(zeta theta(alpha)),
//   (-,-) -> Qmm (saddle-driven, r^{-1/2} prefactor),
//   (+,-) -> Qpm (exponent <e_alpha | eta theta*>),
//   (-,+) -> Qmp (exponent <e_alpha | zeta theta**>),
//   (+,+) -> Qpp (both pole exponents; dominant = the smaller).
// Values within 1e-10 of zero classify as boundary, never silently rounded.
struct RegimeReport {
  Regime label = Regime::boundary;
  double alpha = 0.0;
  std::array<double, 2> saddle{};      // theta(alpha)
  double sign1 = 0.0, sign2 = 0.0;
  double exp_saddle = 0.0;             // <e_alpha | theta(alpha)>
  double exp_eta = 0.0;                // <e_alpha | eta theta*>
  double exp_zeta = 0.0;               // <e_alpha | zeta theta**>
  double dominant = 0.0;               // decay exponent of the regime
  double prefactor_power = 0.0;        // -1/2 in Qmm, else 0
};

// Requires theta(alpha) in the closed positive quadrant; other angles are
// unsupported (config_error).
RegimeReport classify_regime(const ContinuousModel& m, double alpha);

// The regime's decay exponent; throws numeric_error on a boundary angle.
double decay_exponent(const ContinuousModel& m, double alpha);

// CSV sweep over angles: alpha,label,dominant,exp_saddle,exp_eta,exp_zeta,
// saddle_theta1,saddle_theta2,prefactor_power.
std::string regime_sweep_csv(const ContinuousModel& m,
                             const std::vector<double>& alphas);

const char* regime_name(Regime r);

}  // namespace qk
