#include "qk/sphere.hpp"

#include <cmath>
#include <sstream>

namespace qk {

double beta_angle(const ContinuousModel& m) {
  const double s11 = m.sigma[0][0], s12 = m.sigma[0][1], s22 = m.sigma[1][1];
  return std::acos(-s12 / std::sqrt(s11 * s22));
}

namespace {

struct Uniform {
  double m1, d1;  // midpoint and spread of the theta1 branch points
  double m2, d2;
  double beta;
};

Uniform uniform_data(const ContinuousModel& m) {
  const BranchPoints b1 = branch_points(m, 1);
  const BranchPoints b2 = branch_points(m, 2);
  return {0.5 * (b1.low + b1.high), b1.high - b1.low,
          0.5 * (b2.low + b2.high), b2.high - b2.low, beta_angle(m)};
}

}  // namespace

std::pair<cplx, cplx> uniformization(const ContinuousModel& m, cplx s) {
  if (s == cplx(0.0, 0.0))
    throw numeric_error("uniformization: s = 0 lies over theta = infinity");
  const Uniform u = uniform_data(m);
  const cplx e = std::polar(1.0, -u.beta);  // e^{-i beta}
  const cplx t1 = u.m1 + 0.25 * u.d1 * (s + 1.0 / s);
  const cplx t2 = u.m2 + 0.25 * u.d2 * (s * e + 1.0 / (s * e));
  return {t1, t2};
}

cplx sphere_recover(const ContinuousModel& m, cplx t1, cplx t2) {
  const Uniform u = uniform_data(m);
  // theta1(s) = t1 is s^2 - 2w s + 1 = 0 with w = 2(t1 - m1)/d1; the two
  // preimages are reciprocal.
  const cplx w = 2.0 * (t1 - u.m1) / u.d1;
  const cplx root = std::sqrt(w * w - 1.0);
  const cplx sa = w + root;
  const cplx sb = w - root;  // = 1/sa
  const auto resid = [&](cplx s) {
    return std::abs(uniformization(m, s).second - t2);
  };
  const cplx best = resid(sa) <= resid(sb) ? sa : sb;
  if (resid(best) > 1e-6 * (1.0 + std::abs(t2)))
    throw numeric_error("sphere_recover: point is not on the kernel zero set");
  return best;
}

std::pair<cplx, cplx> zeta_point(const ContinuousModel& m, cplx t1, cplx t2) {
  const KernelView kv = kernel_view(m, 1);
  return {t1, -kv.b(t1) / kv.a - t2};  // partner root via the root sum
}

std::pair<cplx, cplx> eta_point(const ContinuousModel& m, cplx t1, cplx t2) {
  const KernelView kv = kernel_view(m, 2);
  return {-kv.b(t2) / kv.a - t1, t2};
}

GroupReport group_order(const ContinuousModel& m, int max_denominator) {
  if (max_denominator < 1)
    throw config_error("group_order: max_denominator must be >= 1");
  GroupReport r;
  r.beta = beta_angle(m);
  r.ratio = kPi / r.beta;
  r.max_denominator = max_denominator;

  // Best rational approximation with bounded denominator, via continued
  // fraction convergents of pi/beta.
  double frac = r.ratio - std::floor(r.ratio);
  long long h0 = 1, h1 = static_cast<long long>(std::floor(r.ratio));
  long long k0 = 0, k1 = 1;
  r.p = h1;
  r.q = k1;
  r.best_error = std::abs(r.ratio - static_cast<double>(h1));
  for (int it = 0; it < 64 && frac > 1e-15; ++it) {
    const double x = 1.0 / frac;
    const double af = std::floor(x);
    if (af > 9e17) break;
    frac = x - af;
    const long long a = static_cast<long long>(af);
    const long long h2 = a * h1 + h0;
    const long long k2 = a * k1 + k0;
    if (k2 > max_denominator) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    const double err =
        std::abs(r.ratio - static_cast<double>(h1) / static_cast<double>(k1));
    if (err < r.best_error) {
      r.best_error = err;
      r.p = h1;
      r.q = k1;
    }
  }
  if (r.p >= 1 && r.best_error < 1e-9) {
    r.verdict = GroupReport::Verdict::finite;
    r.order = static_cast<int>(2 * r.p);
  } else {
    r.verdict = GroupReport::Verdict::exceeds_bound;
    r.order = 0;
  }
  return r;
}

std::string group_report_json(const GroupReport& r) {
  std::ostringstream out;
  out << "{\n"
      << "  \"verdict\": \""
      << (r.verdict == GroupReport::Verdict::finite ? "finite" : "exceeds_bound")
      << "\",\n"
      << "  \"order\": " << r.order << ",\n"
      << "  \"p\": " << r.p << ",\n"
      << "  \"q\": " << r.q << ",\n"
      << "  \"beta\": " << fmt17(r.beta) << ",\n"
      << "  \"ratio\": " << fmt17(r.ratio) << ",\n"
      << "  \"best_error\": " << fmt17(r.best_error) << ",\n"
      << "  \"max_denominator\": " << r.max_denominator << "\n"
      << "}\n";
  return out.str();
}

}  // namespace qk
