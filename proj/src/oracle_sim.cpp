#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "qk/oracle.hpp"
#include "qk/rng.hpp"

namespace qk {

namespace {

int resolve_threads(int requested, int replicas) {
  int t = requested;
  if (t <= 0) {
    if (const char* env = std::getenv("QK_THREADS")) t = std::atoi(env);
  }
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  if (t <= 0) t = 1;
  return std::min(t, replicas);
}

struct Chol2 {
  double l11, l21, l22;
};

Chol2 cholesky2(const ContinuousModel& m) {
  const double s11 = m.sigma[0][0], s12 = m.sigma[0][1], s22 = m.sigma[1][1];
  Chol2 c;
  c.l11 = std::sqrt(s11);
  c.l21 = s12 / c.l11;
  const double rest = s22 - c.l21 * c.l21;
  if (rest <= 0.0) throw config_error("simulate_srbm: covariance not positive definite");
  c.l22 = std::sqrt(rest);
  return c;
}

// Minimal-push LCP for the 2x2 reflection matrix: lambda >= 0,
// w + R lambda >= 0, complementary. Stability implies R is completely-S,
// so one of the four support cases always resolves.
std::array<double, 2> lcp_push(const std::array<std::array<double, 2>, 2>& r,
                               double w1, double w2) {
  if (w1 >= 0.0 && w2 >= 0.0) return {0.0, 0.0};
  if (w1 < 0.0) {
    const double l1 = -w1 / r[0][0];
    if (w2 + r[1][0] * l1 >= 0.0) return {l1, 0.0};
  }
  if (w2 < 0.0) {
    const double l2 = -w2 / r[1][1];
    if (w1 + r[0][1] * l2 >= 0.0) return {0.0, l2};
  }
  const double det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
  const double l1 = (-w1 * r[1][1] + w2 * r[0][1]) / det;
  const double l2 = (-w2 * r[0][0] + w1 * r[1][0]) / det;
  return {std::max(l1, 0.0), std::max(l2, 0.0)};
}

void run_replica(const ContinuousModel& m, const SimConfig& cfg, int replica,
                 int hist_n, ReplicaAccum& acc) {
  Philox rng(cfg.seed, static_cast<std::uint64_t>(replica));
  const Chol2 ch = cholesky2(m);
  const double dt = cfg.dt;
  const double sdt = std::sqrt(dt);
  const long n_burn = std::lround(cfg.burn_in / dt);
  const long n_main = std::lround((cfg.horizon - cfg.burn_in) / dt);
  const bool mirror = cfg.scheme == SimConfig::Scheme::mirror;

  acc.laplace.assign(cfg.laplace_thetas.size(), 0.0);
  acc.hist.assign(static_cast<std::size_t>(hist_n) * hist_n, 0.0);

  double z1 = 0.0, z2 = 0.0;
  double n1, n2;
  for (long step = 0; step < n_burn + n_main; ++step) {
    rng.next_normal_pair(n1, n2);
    double w1 = z1 + m.mu[0] * dt + sdt * (ch.l11 * n1);
    double w2 = z2 + m.mu[1] * dt + sdt * (ch.l21 * n1 + ch.l22 * n2);
    auto push = lcp_push(m.refl, w1, w2);
    double applied1 = push[0], applied2 = push[1];
    const double scale = mirror ? 2.0 : 1.0;
    z1 = w1 + scale * (m.refl[0][0] * push[0] + m.refl[0][1] * push[1]);
    z2 = w2 + scale * (m.refl[1][0] * push[0] + m.refl[1][1] * push[1]);
    if (mirror) {
      applied1 *= 2.0;
      applied2 *= 2.0;
      if (z1 < 0.0 || z2 < 0.0) {
        // Doubling can overshoot through the other face for skewed R;
        // restore feasibility with one more minimal push and count it.
        auto fix = lcp_push(m.refl, z1, z2);
        z1 += m.refl[0][0] * fix[0] + m.refl[0][1] * fix[1];
        z2 += m.refl[1][0] * fix[0] + m.refl[1][1] * fix[1];
        applied1 += fix[0];
        applied2 += fix[1];
      }
    }
    if (z1 < 0.0) z1 = 0.0;
    if (z2 < 0.0) z2 = 0.0;

    if (step < n_burn) continue;

    acc.local_time[0] += applied1;
    acc.local_time[1] += applied2;
    acc.mean_z[0] += z1 * dt;
    acc.mean_z[1] += z2 * dt;
    acc.mean_z2[0] += z1 * z1 * dt;
    acc.mean_z2[1] += z2 * z2 * dt;
    for (std::size_t t = 0; t < cfg.laplace_thetas.size(); ++t) {
      acc.laplace[t] +=
          std::exp(cfg.laplace_thetas[t][0] * z1 + cfg.laplace_thetas[t][1] * z2) * dt;
    }
    const int bi = static_cast<int>(z1 / cfg.hist_bin);
    const int bj = static_cast<int>(z2 / cfg.hist_bin);
    if (bi >= 0 && bi < hist_n && bj >= 0 && bj < hist_n)
      acc.hist[static_cast<std::size_t>(bi) * hist_n + bj] += dt;
  }

  const double time = static_cast<double>(n_main) * dt;
  acc.time = time;
  if (time <= 0.0) throw config_error("simulate_srbm: horizon must exceed burn_in");
  for (double& v : acc.mean_z) v /= time;
  for (double& v : acc.mean_z2) v /= time;
  for (double& v : acc.local_time) v /= time;
  for (double& v : acc.laplace) v /= time;
  for (double& v : acc.hist) v /= time;
}

SimResult::Estimate merge(const std::vector<double>& xs) {
  SimResult::Estimate e;
  const std::size_t n = xs.size();
  for (double x : xs) e.mean += x;
  e.mean /= static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - e.mean) * (x - e.mean);
    e.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  return e;
}

}  // namespace

SimResult simulate_srbm(const ContinuousModel& m, const SimConfig& cfg) {
  validate_continuous(m);
  require_stable(m);
  if (cfg.dt <= 0.0) throw config_error("simulate_srbm: dt must be positive");
  if (cfg.burn_in < 0.0 || cfg.horizon <= cfg.burn_in)
    throw config_error("simulate_srbm: need 0 <= burn_in < horizon");
  if (cfg.replicas < 1) throw config_error("simulate_srbm: need at least one replica");
  if (cfg.hist_bin <= 0.0 || cfg.hist_max < cfg.hist_bin)
    throw config_error("simulate_srbm: bad histogram geometry");

  SimResult res;
  res.cfg = cfg;
  res.hist_n = static_cast<int>(std::floor(cfg.hist_max / cfg.hist_bin + 0.5));
  res.replicas.resize(cfg.replicas);

  const int nthreads = resolve_threads(cfg.threads, cfg.replicas);
  if (nthreads <= 1) {
    for (int rix = 0; rix < cfg.replicas; ++rix)
      run_replica(m, cfg, rix, res.hist_n, res.replicas[rix]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::string> errors(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t]() {
        try {
          for (int rix = t; rix < cfg.replicas; rix += nthreads)
            run_replica(m, cfg, rix, res.hist_n, res.replicas[rix]);
        } catch (const std::exception& ex) {
          errors[t] = ex.what();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (!e.empty()) throw numeric_error("simulate_srbm: " + e);
  }
  return res;
}

SimResult::Estimate SimResult::laplace_estimate(std::size_t theta_index) const {
  if (theta_index >= cfg.laplace_thetas.size())
    throw config_error("laplace_estimate: theta index out of range");
  std::vector<double> xs;
  for (const auto& r : replicas) xs.push_back(r.laplace[theta_index]);
  return merge(xs);
}

SimResult::Estimate SimResult::mean_z_estimate(int axis) const {
  if (axis != 1 && axis != 2) throw config_error("mean_z_estimate: axis must be 1 or 2");
  std::vector<double> xs;
  for (const auto& r : replicas) xs.push_back(r.mean_z[axis - 1]);
  return merge(xs);
}

SimResult::Estimate SimResult::local_time_estimate(int axis) const {
  if (axis != 1 && axis != 2)
    throw config_error("local_time_estimate: axis must be 1 or 2");
  std::vector<double> xs;
  for (const auto& r : replicas) xs.push_back(r.local_time[axis - 1]);
  return merge(xs);
}

SimResult::Estimate SimResult::cell_density_estimate(double x1, double x2) const {
  const int bi = static_cast<int>(x1 / cfg.hist_bin);
  const int bj = static_cast<int>(x2 / cfg.hist_bin);
  if (x1 < 0.0 || x2 < 0.0 || bi >= hist_n || bj >= hist_n)
    throw config_error("cell_density_estimate: point outside histogram range");
  const double area = cfg.hist_bin * cfg.hist_bin;
  std::vector<double> xs;
  for (const auto& r : replicas)
    xs.push_back(r.hist[static_cast<std::size_t>(bi) * hist_n + bj] / area);
  return merge(xs);
}

namespace {

void write_le_doubles(std::ofstream& out, const std::vector<double>& xs) {
  for (double x : xs) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(x));
    std::memcpy(&bits, &x, sizeof(bits));
    unsigned char buf[8];
    for (int b = 0; b < 8; ++b) buf[b] = static_cast<unsigned char>(bits >> (8 * b));
    out.write(reinterpret_cast<const char*>(buf), 8);
  }
}

std::vector<double> read_le_doubles(std::ifstream& in, std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8))
      throw config_error("load_sim_result: histogram file truncated");
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[b]) << (8 * b);
    double x;
    std::memcpy(&x, &bits, sizeof(x));
    xs[i] = x;
  }
  return xs;
}

}  // namespace

void save_sim_result(const SimResult& r, const std::string& prefix) {
  nlohmann::json j;
  j["schema"] = "srbm-sim-result-v1";
  j["dt"] = r.cfg.dt;
  j["horizon"] = r.cfg.horizon;
  j["burn_in"] = r.cfg.burn_in;
  j["replicas"] = r.cfg.replicas;
  j["seed"] = r.cfg.seed;
  j["scheme"] = r.cfg.scheme == SimConfig::Scheme::mirror ? "mirror" : "clamp";
  j["laplace_thetas"] = nlohmann::json::array();
  for (const auto& th : r.cfg.laplace_thetas)
    j["laplace_thetas"].push_back({th[0], th[1]});
  j["hist_bin"] = r.cfg.hist_bin;
  j["hist_max"] = r.cfg.hist_max;
  j["threads"] = r.cfg.threads;
  j["hist_n"] = r.hist_n;
  j["accum"] = nlohmann::json::array();
  for (const auto& a : r.replicas) {
    nlohmann::json ja;
    ja["time"] = a.time;
    ja["mean_z"] = {a.mean_z[0], a.mean_z[1]};
    ja["mean_z2"] = {a.mean_z2[0], a.mean_z2[1]};
    ja["local_time"] = {a.local_time[0], a.local_time[1]};
    ja["laplace"] = a.laplace;
    j["accum"].push_back(std::move(ja));
  }
  std::ofstream jf(prefix + ".json");
  if (!jf) throw config_error("save_sim_result: cannot write " + prefix + ".json");
  jf << j.dump(2) << '\n';

  std::ofstream bf(prefix + ".bin", std::ios::binary);
  if (!bf) throw config_error("save_sim_result: cannot write " + prefix + ".bin");
  for (const auto& a : r.replicas) write_le_doubles(bf, a.hist);
}

SimResult load_sim_result(const std::string& prefix) {
  std::ifstream jf(prefix + ".json");
  if (!jf) throw config_error("load_sim_result: cannot read " + prefix + ".json");
  nlohmann::json j;
  jf >> j;
  if (j.value("schema", "") != std::string("srbm-sim-result-v1"))
    throw config_error("load_sim_result: unrecognized schema");

  SimResult r;
  r.cfg.dt = j.at("dt").get<double>();
  r.cfg.horizon = j.at("horizon").get<double>();
  r.cfg.burn_in = j.at("burn_in").get<double>();
  r.cfg.replicas = j.at("replicas").get<int>();
  r.cfg.seed = j.at("seed").get<std::uint64_t>();
  r.cfg.scheme = j.at("scheme").get<std::string>() == "clamp"
                     ? SimConfig::Scheme::clamp
                     : SimConfig::Scheme::mirror;
  for (const auto& th : j.at("laplace_thetas"))
    r.cfg.laplace_thetas.push_back({th.at(0).get<double>(), th.at(1).get<double>()});
  r.cfg.hist_bin = j.at("hist_bin").get<double>();
  r.cfg.hist_max = j.at("hist_max").get<double>();
  r.cfg.threads = j.at("threads").get<int>();
  r.hist_n = j.at("hist_n").get<int>();

  std::ifstream bf(prefix + ".bin", std::ios::binary);
  if (!bf) throw config_error("load_sim_result: cannot read " + prefix + ".bin");
  const std::size_t cells = static_cast<std::size_t>(r.hist_n) * r.hist_n;
  for (const auto& ja : j.at("accum")) {
    ReplicaAccum a;
    a.time = ja.at("time").get<double>();
    a.mean_z = {ja.at("mean_z").at(0).get<double>(), ja.at("mean_z").at(1).get<double>()};
    a.mean_z2 = {ja.at("mean_z2").at(0).get<double>(),
                 ja.at("mean_z2").at(1).get<double>()};
    a.local_time = {ja.at("local_time").at(0).get<double>(),
                    ja.at("local_time").at(1).get<double>()};
    a.laplace = ja.at("laplace").get<std::vector<double>>();
    a.hist = read_le_doubles(bf, cells);
    r.replicas.push_back(std::move(a));
  }
  if (static_cast<int>(r.replicas.size()) != r.cfg.replicas)
    throw config_error("load_sim_result: replica count mismatch");
  return r;
}

std::string sim_histogram_csv(const SimResult& r) {
  std::string out = "x1_lo,x2_lo,density,se\n";
  const double bin = r.cfg.hist_bin;
  for (int i = 0; i < r.hist_n; ++i) {
    for (int jx = 0; jx < r.hist_n; ++jx) {
      const auto e = r.cell_density_estimate((i + 0.5) * bin, (jx + 0.5) * bin);
      out += fmt17(i * bin);
      out += ',';
      out += fmt17(jx * bin);
      out += ',';
      out += fmt17(e.mean);
      out += ',';
      out += fmt17(e.se);
      out += '\n';
    }
  }
  return out;
}

}  // namespace qk
