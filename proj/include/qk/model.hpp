#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "qk/common.hpp"

namespace qk {

// Semimartingale reflected Brownian motion in the quadrant, parameterized by
// the covariance Sigma (symmetric positive definite), interior drift mu, and
// reflection matrix R whose columns R1, R2 are the push directions on the
// faces {z1 = 0} and {z2 = 0}. refl[i][j] is the entry in row i+1, col j+1.
struct ContinuousModel {
  std::array<std::array<double, 2>, 2> sigma{{{1.0, 0.0}, {0.0, 1.0}}};
  std::array<double, 2> mu{-1.0, -1.0};
  std::array<std::array<double, 2>, 2> refl{{{1.0, 0.0}, {0.0, 1.0}}};

  bool identity_refl(double tol = 0.0) const {
    return std::abs(refl[0][0] - 1.0) <= tol && std::abs(refl[0][1]) <= tol &&
           std::abs(refl[1][0]) <= tol && std::abs(refl[1][1] - 1.0) <= tol;
  }
};

// The five stability left-hand sides, in order:
//   r11, r22, r11 r22 - r12 r21, r22 mu1 - r12 mu2, r11 mu2 - r21 mu1.
// Stable iff the first three are > 0 and the last two are < 0.
struct StabilityReport {
  bool stable = false;
  std::array<double, 5> condition_values{};
  std::array<bool, 5> marginal{};  // |value| < 1e-12: do not trust the verdict
  bool any_marginal() const {
    for (bool m : marginal)
      if (m) return true;
    return false;
  }
};

// Throws config_error for a malformed model (non-PD sigma, zero refl column);
// returns the stability verdict otherwise. An unstable model is a valid input
// here, just not for the stationary analytics downstream.
StabilityReport validate_continuous(const ContinuousModel& m);

// Throws config_error unless the model is valid and stable; returns report.
StabilityReport require_stable(const ContinuousModel& m);

// Nearest-neighbor reflected random walk in the quadrant. Four jump-weight
// families indexed by [di+1][dj+1] for steps (di,dj) in {-1,0,1}^2:
// interior, horizontal wall (j = 0, i > 0), vertical wall (i = 0, j > 0),
// and the origin. Weights include the (0,0) self-loops.
struct DiscreteModel {
  std::array<std::array<double, 3>, 3> interior{};
  std::array<std::array<double, 3>, 3> hwall{};
  std::array<std::array<double, 3>, 3> vwall{};
  std::array<std::array<double, 3>, 3> origin{};

  double p(int di, int dj) const { return interior[di + 1][dj + 1]; }
};

struct DiscreteReport {
  std::array<double, 4> family_sums{};       // interior, hwall, vwall, origin
  std::array<double, 2> interior_drift{};    // (sum i*pij, sum j*pij)
};

// Throws config_error listing the offending family/entry when a family does
// not sum to 1 (tolerance 1e-12), has a negative entry, or jumps out of the
// quadrant (e.g. a downward jump from the horizontal wall).
DiscreteReport validate_discrete(const DiscreteModel& m);

using Model = std::variant<ContinuousModel, DiscreteModel>;

// Strict JSON loader. Schema:
//   {"type": "continuous", "sigma": [[..,..],[..,..]], "mu": [..,..],
//    "refl": [[..,..],[..,..]]}
//   {"type": "discrete", "interior": {"1,0": 0.1, ...}, "hwall": {...},
//    "vwall": {...}, "origin": {...}}
// Unknown or missing fields are config errors naming the field path.
Model load_model_json(const std::string& json_text);
Model load_model_file(const std::string& path);

std::string model_to_json(const Model& m);

}  // namespace qk
