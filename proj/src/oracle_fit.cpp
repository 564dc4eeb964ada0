#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "qk/oracle.hpp"

namespace qk {

namespace {

struct Ols {
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  double rss = 0.0;
  double aic = 0.0;
};

Ols ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const auto n = X.rows();
  const auto k = X.cols();
  Ols fit;
  const Eigen::MatrixXd xtx = X.transpose() * X;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
  fit.coef = ldlt.solve(X.transpose() * y);
  const Eigen::VectorXd resid = y - X * fit.coef;
  fit.rss = resid.squaredNorm();
  const double s2 = fit.rss / static_cast<double>(n - k);
  const Eigen::MatrixXd cov = s2 * ldlt.solve(Eigen::MatrixXd::Identity(k, k));
  fit.se.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) fit.se[i] = std::sqrt(std::max(cov(i, i), 0.0));
  fit.aic = static_cast<double>(n) *
                std::log(std::max(fit.rss / static_cast<double>(n), 1e-300)) +
            2.0 * static_cast<double>(k);
  return fit;
}

}  // namespace

DecayFit fit_decay_rate(const std::vector<double>& r, const std::vector<double>& v) {
  if (r.size() != v.size())
    throw config_error("fit_decay_rate: r and v must have equal length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (v[i] > 0.0 && r[i] > 0.0) {
      xs.push_back(r[i]);
      ys.push_back(std::log(v[i]));
    }
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  if (n < 5) throw config_error("fit_decay_rate: need at least 5 usable points");

  Eigen::VectorXd y(n);
  Eigen::MatrixXd X2(n, 2), X3(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = ys[i];
    X2(i, 0) = 1.0;
    X2(i, 1) = xs[i];
    X3(i, 0) = 1.0;
    X3(i, 1) = xs[i];
    X3(i, 2) = std::log(xs[i]);
  }

  const Ols plain = ols(X2, y);
  const Ols withlog = ols(X3, y);

  DecayFit out;
  out.intercept = plain.coef[0];
  out.slope = plain.coef[1];
  out.slope_se = plain.se[1];
  out.slope_log = withlog.coef[1];
  out.slope_log_se = withlog.se[1];
  out.logr_coef = withlog.coef[2];
  out.logr_coef_se = withlog.se[2];
  out.aic_plain = plain.aic;
  out.aic_logr = withlog.aic;
  out.prefer_logr = withlog.aic < plain.aic;
  return out;
}

}  // namespace qk
