#include "qk/transforms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qk {

namespace {

void require_orthogonal(const ContinuousModel& m, const char* who) {
  if (!m.identity_refl(1e-14))
    throw config_error(std::string(who) +
                       ": closed form requires identity reflection");
}

TransformValue face_transform(const ContinuousModel& m, int axis, cplx t) {
  // axis 1: phi1(theta2), built from the theta2-plane gluing; axis 2 swapped.
  const double drift = axis == 1 ? m.mu[0] : m.mu[1];
  TransformValue out;
  out.kind = axis == 1 ? TransformKind::phi1 : TransformKind::phi2;
  const GlueValue gp0 = glue_prime_axis(m, axis, cplx(0.0));
  if (std::abs(t) < 1e-6) {
    // Removable singularity of t / (w(t) - w(0)): two-term Taylor ratio.
    const GlueValue gs0 = glue_second_axis(m, axis, cplx(0.0));
    out.value = -drift * gp0.value / (gp0.value + 0.5 * gs0.value * t);
    return out;
  }
  const GlueValue g = glue_axis(m, axis, t);
  const GlueValue g0 = glue_axis(m, axis, cplx(0.0));
  const cplx denom = g.value - g0.value;
  if (g.on_cut) out.status = TransformStatus::on_cut;
  else if (std::abs(denom) <
           1e-12 * (1.0 + std::abs(g.value) + std::abs(g0.value)))
    out.status = TransformStatus::pole;
  out.value = std::abs(denom) == 0.0
                  ? cplx(std::numeric_limits<double>::infinity(), 0.0)
                  : -drift * gp0.value * t / denom;
  return out;
}

const char* kind_name(TransformKind k) {
  switch (k) {
    case TransformKind::phi1: return "phi1";
    case TransformKind::phi2: return "phi2";
    case TransformKind::psi1: return "psi1";
    case TransformKind::psi2: return "psi2";
    case TransformKind::phi: return "phi";
  }
  return "?";
}

}  // namespace

TransformValue phi1(const ContinuousModel& m, cplx t2) {
  require_orthogonal(m, "phi1");
  return face_transform(m, 1, t2);
}

TransformValue phi2(const ContinuousModel& m, cplx t1) {
  require_orthogonal(m, "phi2");
  return face_transform(m, 2, t1);
}

namespace {

TransformValue quotient_by_arg(TransformValue v, cplx t, TransformKind kind) {
  v.kind = kind;
  if (std::abs(t) == 0.0) {
    v.status = TransformStatus::pole;
    v.value = cplx(std::numeric_limits<double>::infinity(), 0.0);
  } else {
    v.value /= t;
  }
  return v;
}

}  // namespace

TransformValue psi1(const ContinuousModel& m, cplx t2) {
  return quotient_by_arg(phi1(m, t2), t2, TransformKind::psi1);
}

TransformValue psi2(const ContinuousModel& m, cplx t1) {
  return quotient_by_arg(phi2(m, t1), t1, TransformKind::psi2);
}

TransformValue phi_interior(const ContinuousModel& m, cplx t1, cplx t2) {
  TransformValue out;
  out.kind = TransformKind::phi;
  const cplx g = gamma_k(m, t1, t2);
  const auto& s = m.sigma;
  const double scale = 0.5 * std::abs(s[0][0] * t1 * t1) +
                       std::abs(s[0][1] * t1 * t2) +
                       0.5 * std::abs(s[1][1] * t2 * t2) +
                       std::abs(m.mu[0] * t1) + std::abs(m.mu[1] * t2);
  if (std::abs(g) < 1e-10 * (scale + 1e-300)) {
    out.status = TransformStatus::kernel_zero;
    return out;
  }
  const TransformValue f1 = phi1(m, t2);
  const TransformValue f2 = phi2(m, t1);
  if (!f1.ok()) out.status = f1.status;
  else if (!f2.ok()) out.status = f2.status;
  out.value =
      -(gamma_1(m, t1, t2) * f1.value + gamma_2(m, t1, t2) * f2.value) / g;
  return out;
}

TransformValue continue_phi1(const ContinuousModel& m, cplx t2) {
  require_orthogonal(m, "continue_phi1");
  const cplx th1 = branches_theta1(m, t2).first;
  if (!(t2.real() <= 0.0 || th1.real() < 0.0))
    throw config_error(
        "continue_phi1: argument outside the continuation region "
        "{Re theta2 <= 0 or Re Theta1^-(theta2) < 0}");
  TransformValue out;
  out.kind = TransformKind::phi1;
  out.via = EvalRoute::continuation;
  const TransformValue f2 = phi2(m, th1);
  const cplx g1 = gamma_1(m, th1, t2);
  const cplx g2 = gamma_2(m, th1, t2);
  const double scale =
      std::abs(m.refl[0][0] * th1) + std::abs(m.refl[1][0] * t2);
  if (std::abs(g1) < 1e-13 * (scale + 1e-300)) {
    out.status = TransformStatus::pole;
    out.value = cplx(std::numeric_limits<double>::infinity(), 0.0);
    return out;
  }
  out.value = -(g2 / g1) * f2.value;
  if (!f2.ok()) {
    out.status = f2.status;
    return out;
  }
  const BranchPoints bp2 = branch_points(m, 2);
  if (std::abs(t2.imag()) < 1e-12 * (1.0 + std::abs(t2.real())) &&
      t2.real() >= bp2.high - 1e-12 * (1.0 + std::abs(bp2.high)))
    out.status = TransformStatus::on_cut;
  return out;
}

double bc_residual_orthogonal(const ContinuousModel& m, cplx t2_on_R) {
  const TransformValue a = psi1(m, std::conj(t2_on_R));
  const TransformValue b = psi1(m, t2_on_R);
  if (!a.ok() || !b.ok())
    throw numeric_error("bc_residual_orthogonal: psi1 not evaluable at point");
  return std::abs(a.value - b.value);
}

cplx bvp_shift_factor_G(const ContinuousModel& m, cplx t2) {
  const cplx th1 = branches_theta1(m, t2).first;
  const cplx tc = std::conj(t2);
  return (gamma_1(m, th1, t2) / gamma_2(m, th1, t2)) *
         (gamma_2(m, th1, tc) / gamma_1(m, th1, tc));
}

std::vector<double> transform_pole_scan(const ContinuousModel& m, int axis) {
  if (axis != 1 && axis != 2)
    throw config_error("transform_pole_scan: axis must be 1 or 2");
  const BranchPoints bp = branch_points(m, axis == 1 ? 2 : 1);
  const double hi = bp.high;
  if (!(hi > 0.0)) return {};
  const GlueValue g0 = glue_axis(m, axis, cplx(0.0));
  const auto h = [&](double t) {
    return (glue_axis(m, axis, cplx(t)).value - g0.value).real();
  };
  // w - w(0) is real analytic on (0, theta^+); bracket sign changes on a
  // uniform grid (zeros closer than one cell to each other can be missed).
  const int ngrid = 4096;
  const double lo = 1e-9 * hi;
  std::vector<double> zeros;
  double tprev = lo, hprev = h(tprev);
  for (int i = 1; i <= ngrid; ++i) {
    const double t = lo + (hi * (1.0 - 1e-9) - lo) * i / ngrid;
    const double ht = h(t);
    if (hprev == 0.0) zeros.push_back(tprev);
    else if (hprev * ht < 0.0) {
      double a = tprev, b = t, ha = hprev;
      for (int it = 0; it < 100 && b - a > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (a + b), hm = h(mid);
        if (hm == 0.0) { a = b = mid; break; }
        if (ha * hm < 0.0) b = mid;
        else a = mid, ha = hm;
      }
      zeros.push_back(0.5 * (a + b));
    }
    tprev = t, hprev = ht;
  }
  return zeros;
}

std::string transforms_to_csv(const std::vector<TransformEval>& evals) {
  std::ostringstream out;
  out << "re_arg,im_arg,re_val,im_val,kind,via\n";
  for (const auto& e : evals)
    out << fmt17(e.arg.real()) << ',' << fmt17(e.arg.imag()) << ','
        << fmt17(e.val.value.real()) << ',' << fmt17(e.val.value.imag()) << ','
        << kind_name(e.val.kind) << ','
        << (e.val.via == EvalRoute::direct ? "direct" : "continuation") << '\n';
  return out.str();
}

}  // namespace qk
