#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "qk/oracle.hpp"

namespace qk {

LatticeSolution lattice_stationary(const DiscreteModel& m, int N) {
  validate_discrete(m);
  if (N < 2) throw config_error("lattice_stationary: N must be at least 2");
  const int side = N + 1;
  const int dim = side * side;
  auto idx = [side](int i, int j) { return i * side + j; };

  // Row-stochastic transitions on {0..N}^2: the family matching the state's
  // face decides the step law; steps leaving the box are clamped onto it,
  // which renormalizes outward mass into the wall.
  std::vector<Eigen::Triplet<double>> base;  // P^T - I
  base.reserve(static_cast<std::size_t>(dim) * 10);
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      const int s = idx(i, j);
      const auto* fam = &m.interior;
      if (i == 0 && j == 0)
        fam = &m.origin;
      else if (j == 0)
        fam = &m.hwall;
      else if (i == 0)
        fam = &m.vwall;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const double w = (*fam)[di + 1][dj + 1];
          if (w == 0.0) continue;
          const int ti = std::clamp(i + di, 0, N);
          const int tj = std::clamp(j + dj, 0, N);
          base.emplace_back(idx(ti, tj), s, w);
        }
      }
      base.emplace_back(s, s, -1.0);
    }
  }

  // Swap the last balance row for the normalization sum(pi) = 1; the
  // discarded row is recovered by the others (columns of P^T - I sum to 0).
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(base.size() + dim);
  for (const auto& t : base)
    if (t.row() != dim - 1) trip.push_back(t);
  for (int c = 0; c < dim; ++c) trip.emplace_back(dim - 1, c, 1.0);

  Eigen::SparseMatrix<double> A(dim, dim);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs[dim - 1] = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw numeric_error("lattice_stationary: sparse LU factorization failed");
  Eigen::VectorXd pi = lu.solve(rhs);
  if (lu.info() != Eigen::Success)
    throw numeric_error("lattice_stationary: sparse LU solve failed");

  LatticeSolution sol;
  sol.N = N;
  sol.pi.assign(pi.data(), pi.data() + dim);

  // Residual against the untouched balance operator.
  std::vector<double> r(dim, 0.0);
  for (const auto& t : base) r[t.row()] += t.value() * sol.pi[t.col()];
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  sol.residual = worst;
  return sol;
}

}  // namespace qk
