#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace qk {

using cplx = std::complex<double>;

// Configuration and model problems: the caller gave us something malformed.
// The CLI maps these to exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric procedure failed its own health checks (non-convergence, contour
// crossing a pole, quadrature self-estimate blown). CLI exit code 1.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// 17 significant digits: round-trippable doubles in every text output.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt17(cplx v) {
  return fmt17(v.real()) + (v.imag() < 0 ? "-" : "+") +
         fmt17(std::abs(v.imag())) + "i";
}

// Stable quadratic roots: solve a x^2 + b x + c = 0 without cancellation,
// using q = -(b + sign(b) sqrt(d)) / 2 and Vieta for the partner root.
// Returns {smaller, larger} by real part for real-coefficient calls.
inline std::array<double, 2> solve_quadratic_real(double a, double b, double c) {
  const double d = b * b - 4.0 * a * c;
  if (d < 0.0) throw numeric_error("solve_quadratic_real: negative discriminant");
  const double sd = std::sqrt(d);
  const double q = -0.5 * (b + (b >= 0.0 ? sd : -sd));
  double r1, r2;
  if (q != 0.0) {
    r1 = q / a;
    r2 = c / q;
  } else {  // b == 0
    r1 = -sd / (2.0 * a);
    r2 = sd / (2.0 * a);
  }
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

}  // namespace qk
