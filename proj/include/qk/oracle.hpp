#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qk/model.hpp"

namespace qk {

// Euler scheme for the reflected diffusion with per-step constraint
// restoration: after a free Euler move the overshoot is resolved by a 2x2
// linear complementarity problem in the push magnitudes lambda >= 0,
// z + R lambda >= 0, lambda_i (z + R lambda)_i = 0. Scheme 'clamp' applies
// the minimal push (projection, weak error O(sqrt(dt))); 'mirror' doubles it
// (reflection, weak error O(dt) for identity R; the default). Pushes
// accumulate into the local-time estimate either way.
struct SimConfig {
  double dt = 1e-3;
  double horizon = 2e4;
  double burn_in = 1e3;
  int replicas = 8;
  std::uint64_t seed = 1;
  enum class Scheme { mirror, clamp } scheme = Scheme::mirror;
  std::vector<std::array<double, 2>> laplace_thetas;  // declared up front
  double hist_bin = 0.1;
  double hist_max = 10.0;
  int threads = 0;  // 0: QK_THREADS env or hardware count
};

struct ReplicaAccum {
  double time = 0.0;                    // post burn-in time simulated
  std::array<double, 2> mean_z{};       // time averages
  std::array<double, 2> mean_z2{};
  std::array<double, 2> local_time{};   // total push per face / time
  std::vector<double> laplace;          // time averages of e^{<theta|Z>}
  std::vector<double> hist;             // row-major (x1 bin major) frequencies
};

struct SimResult {
  SimConfig cfg;
  int hist_n = 0;  // bins per axis
  std::vector<ReplicaAccum> replicas;

  // Replica-mean merge with standard errors (std over replicas / sqrt(n)).
  struct Estimate {
    double mean = 0.0, se = 0.0;
  };
  Estimate laplace_estimate(std::size_t theta_index) const;
  Estimate mean_z_estimate(int axis) const;
  Estimate local_time_estimate(int axis) const;
  // Average density over the histogram cell containing (x1, x2).
  Estimate cell_density_estimate(double x1, double x2) const;
};

SimResult simulate_srbm(const ContinuousModel& m, const SimConfig& cfg);

// Persistence: <prefix>.json carries the config, schema and scalar
// accumulators; <prefix>.bin the concatenated per-replica histograms as
// little-endian doubles. Histogram CSV columns: x1_lo,x2_lo,density,se.
void save_sim_result(const SimResult& r, const std::string& prefix);
SimResult load_sim_result(const std::string& prefix);
std::string sim_histogram_csv(const SimResult& r);

// Stationary distribution of the walk truncated to {0..N}^2 with reflecting
// truncation (outward jumps renormalized into the wall), solved as the
// sparse linear system (P^T - I) pi = 0 with the normalization row; direct
// sparse LU, residual reported.
struct LatticeSolution {
  int N = 0;
  std::vector<double> pi;  // (N+1)^2, row-major in i
  double residual = 0.0;   // max |(P^T - I) pi| post solve
  double at(int i, int j) const { return pi[std::size_t(i) * (N + 1) + j]; }
};
LatticeSolution lattice_stationary(const DiscreteModel& m, int N);

// Least-squares decay fit of log(v) against r, with and without a log r
// regressor: log v = a + b r (+ c log r). Reports both slopes, the
// log-coefficient, standard errors from residual variance, and an AIC
// preference.
struct DecayFit {
  double slope = 0.0, slope_se = 0.0, intercept = 0.0;          // plain model
  double slope_log = 0.0, slope_log_se = 0.0, logr_coef = 0.0,  // with log r
      logr_coef_se = 0.0;
  double aic_plain = 0.0, aic_logr = 0.0;
  bool prefer_logr = false;
};
DecayFit fit_decay_rate(const std::vector<double>& r,
                        const std::vector<double>& v);

}  // namespace qk
