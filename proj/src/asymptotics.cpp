#include "qk/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "qk/sphere.hpp"

namespace qk {

namespace {

struct Ellipse {
  double c1, c2;  // center -Sigma^{-1} mu
  double rho2;    // <center | Sigma center>
};

Ellipse ellipse_data(const ContinuousModel& m) {
  const double s11 = m.sigma[0][0], s12 = m.sigma[0][1], s22 = m.sigma[1][1];
  const double det = s11 * s22 - s12 * s12;
  Ellipse e;
  e.c1 = -(s22 * m.mu[0] - s12 * m.mu[1]) / det;
  e.c2 = -(s11 * m.mu[1] - s12 * m.mu[0]) / det;
  e.rho2 = e.c1 * (s11 * e.c1 + s12 * e.c2) + e.c2 * (s12 * e.c1 + s22 * e.c2);
  return e;
}

}  // namespace

std::array<double, 2> theta_alpha(const ContinuousModel& m, double alpha) {
  require_stable(m);
  const double s11 = m.sigma[0][0], s12 = m.sigma[0][1], s22 = m.sigma[1][1];
  const double e1 = std::cos(alpha), e2 = std::sin(alpha);
  const Ellipse el = ellipse_data(m);
  const double det = s11 * s22 - s12 * s12;
  // Warm start: center pushed along Sigma^{-1} e_alpha (unnormalized).
  double t1 = el.c1 + (s22 * e1 - s12 * e2) / det;
  double t2 = el.c2 + (s11 * e2 - s12 * e1) / det;

  // Newton on {gamma = 0, grad gamma x e_alpha = 0}; the Jacobian row of the
  // cross equation is constant because grad gamma is affine.
  const double j21 = s11 * e2 - s12 * e1;
  const double j22 = s12 * e2 - s22 * e1;
  double g = 0.0, cross = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double d1 = s11 * t1 + s12 * t2 + m.mu[0];
    const double d2 = s12 * t1 + s22 * t2 + m.mu[1];
    g = 0.5 * (t1 * (s11 * t1 + s12 * t2) + t2 * (s12 * t1 + s22 * t2)) +
        m.mu[0] * t1 + m.mu[1] * t2;
    cross = d1 * e2 - d2 * e1;
    const double jdet = d1 * j22 - d2 * j21;
    if (jdet == 0.0) break;
    const double dt1 = (-g * j22 + cross * d2) / jdet;
    const double dt2 = (-cross * d1 + g * j21) / jdet;
    t1 += dt1;
    t2 += dt2;
    if (std::abs(dt1) + std::abs(dt2) <
        1e-15 * (1.0 + std::abs(t1) + std::abs(t2)))
      break;
  }
  const double scale = 1.0 + std::abs(el.rho2);
  if (std::abs(g) > 1e-9 * scale || std::abs(cross) > 1e-9 * scale)
    throw numeric_error("theta_alpha: Newton did not converge");
  // Of the two stationary points pick the maximizer, <grad gamma | e> > 0;
  // the antipode through the center is the exact companion solution.
  const double d1 = s11 * t1 + s12 * t2 + m.mu[0];
  const double d2 = s12 * t1 + s22 * t2 + m.mu[1];
  if (d1 * e1 + d2 * e2 < 0.0) {
    t1 = 2.0 * el.c1 - t1;
    t2 = 2.0 * el.c2 - t2;
  }
  return {t1, t2};
}

DistinguishedPoints distinguished_points(const ContinuousModel& m) {
  require_stable(m);
  DistinguishedPoints dp;
  const auto second_intersection = [&](double u1, double u2, bool& tangent) {
    const double den = u1 * (m.sigma[0][0] * u1 + m.sigma[0][1] * u2) +
                       u2 * (m.sigma[0][1] * u1 + m.sigma[1][1] * u2);
    const double num = m.mu[0] * u1 + m.mu[1] * u2;
    tangent = std::abs(num) <
              1e-12 * (1.0 + std::hypot(m.mu[0], m.mu[1]) * std::hypot(u1, u2));
    const double t = -2.0 * num / den;
    return std::array<double, 2>{t * u1, t * u2};
  };
  // {gamma1 = 0} has direction (-r21, r11); {gamma2 = 0} has (r22, -r12).
  dp.theta_star = second_intersection(-m.refl[1][0], m.refl[0][0], dp.tangent1);
  dp.theta_star_star =
      second_intersection(m.refl[1][1], -m.refl[0][1], dp.tangent2);
  const auto eta_ts = eta_point(m, dp.theta_star[0], dp.theta_star[1]);
  dp.eta_theta_star = {eta_ts.first.real(), eta_ts.second.real()};
  const auto zeta_tss =
      zeta_point(m, dp.theta_star_star[0], dp.theta_star_star[1]);
  dp.zeta_theta_star_star = {zeta_tss.first.real(), zeta_tss.second.real()};
  return dp;
}

RegimeReport classify_regime(const ContinuousModel& m, double alpha) {
  RegimeReport r;
  r.alpha = alpha;
  const auto th = theta_alpha(m, alpha);
  if (th[0] < -1e-12 || th[1] < -1e-12)
    throw config_error(
        "classify_regime: theta(alpha) leaves the closed positive quadrant; "
        "angle unsupported");
  r.saddle = th;
  const double e1 = std::cos(alpha), e2 = std::sin(alpha);
  const auto eta_th = eta_point(m, th[0], th[1]);
  const auto zeta_th = zeta_point(m, th[0], th[1]);
  r.sign1 = gamma_1(m, eta_th.first, eta_th.second).real();
  r.sign2 = gamma_2(m, zeta_th.first, zeta_th.second).real();

  const DistinguishedPoints dp = distinguished_points(m);
  r.exp_saddle = e1 * th[0] + e2 * th[1];
  r.exp_eta = e1 * dp.eta_theta_star[0] + e2 * dp.eta_theta_star[1];
  r.exp_zeta = e1 * dp.zeta_theta_star_star[0] + e2 * dp.zeta_theta_star_star[1];

  const double band = 1e-10;
  if (std::abs(r.sign1) < band || std::abs(r.sign2) < band) {
    r.label = Regime::boundary;
    r.dominant = r.exp_saddle;
    r.prefactor_power = 0.0;
    return r;
  }
  if (r.sign1 < 0.0 && r.sign2 < 0.0) {
    r.label = Regime::Qmm;
    r.dominant = r.exp_saddle;
    r.prefactor_power = -0.5;
  } else if (r.sign1 > 0.0 && r.sign2 < 0.0) {
    r.label = Regime::Qpm;
    r.dominant = r.exp_eta;
    r.prefactor_power = 0.0;
  } else if (r.sign1 < 0.0 && r.sign2 > 0.0) {
    r.label = Regime::Qmp;
    r.dominant = r.exp_zeta;
    r.prefactor_power = 0.0;
  } else {
    r.label = Regime::Qpp;
    r.dominant = std::min(r.exp_eta, r.exp_zeta);
    r.prefactor_power = 0.0;
  }
  return r;
}

double decay_exponent(const ContinuousModel& m, double alpha) {
  const RegimeReport r = classify_regime(m, alpha);
  if (r.label == Regime::boundary)
    throw numeric_error(
        "decay_exponent: angle sits on a regime boundary (sign within the "
        "dead band)");
  return r.dominant;
}

std::string regime_sweep_csv(const ContinuousModel& m,
                             const std::vector<double>& alphas) {
  std::ostringstream out;
  out << "alpha,label,dominant,exp_saddle,exp_eta,exp_zeta,saddle_theta1,"
         "saddle_theta2,prefactor_power\n";
  for (double a : alphas) {
    const RegimeReport r = classify_regime(m, a);
    out << fmt17(a) << ',' << regime_name(r.label) << ',' << fmt17(r.dominant)
        << ',' << fmt17(r.exp_saddle) << ',' << fmt17(r.exp_eta) << ','
        << fmt17(r.exp_zeta) << ',' << fmt17(r.saddle[0]) << ','
        << fmt17(r.saddle[1]) << ',' << fmt17(r.prefactor_power) << '\n';
  }
  return out.str();
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Qmm: return "Q--";
    case Regime::Qpm: return "Q+-";
    case Regime::Qmp: return "Q-+";
    case Regime::Qpp: return "Q++";
    case Regime::boundary: return "boundary";
  }
  return "?";
}

}  // namespace qk
