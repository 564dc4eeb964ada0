#include "qk/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qk {

namespace {

constexpr double kMarginalTol = 1e-12;

const char* family_name(int f) {
  switch (f) {
    case 0: return "interior";
    case 1: return "hwall";
    case 2: return "vwall";
    default: return "origin";
  }
}

}  // namespace

StabilityReport validate_continuous(const ContinuousModel& m) {
  const auto& s = m.sigma;
  if (std::abs(s[0][1] - s[1][0]) > 1e-14 * (1.0 + std::abs(s[0][1])))
    throw config_error("sigma must be symmetric");
  const double det_s = s[0][0] * s[1][1] - s[0][1] * s[1][0];
  if (!(s[0][0] > 0.0) || !(det_s > 0.0))
    throw config_error("sigma must be positive definite");

  const auto& r = m.refl;
  for (int col = 0; col < 2; ++col) {
    if (r[0][col] == 0.0 && r[1][col] == 0.0)
      throw config_error(std::string("refl column ") +
                         (col == 0 ? "R1" : "R2") + " is zero");
  }

  StabilityReport rep;
  const double r11 = r[0][0], r12 = r[0][1], r21 = r[1][0], r22 = r[1][1];
  rep.condition_values = {r11, r22, r11 * r22 - r12 * r21,
                          r22 * m.mu[0] - r12 * m.mu[1],
                          r11 * m.mu[1] - r21 * m.mu[0]};
  for (int i = 0; i < 5; ++i)
    rep.marginal[i] = std::abs(rep.condition_values[i]) < kMarginalTol;
  rep.stable = rep.condition_values[0] > 0.0 && rep.condition_values[1] > 0.0 &&
               rep.condition_values[2] > 0.0 && rep.condition_values[3] < 0.0 &&
               rep.condition_values[4] < 0.0;
  return rep;
}

StabilityReport require_stable(const ContinuousModel& m) {
  StabilityReport rep = validate_continuous(m);
  if (!rep.stable) throw config_error("model is not stable");
  return rep;
}

DiscreteReport validate_discrete(const DiscreteModel& m) {
  const std::array<const std::array<std::array<double, 3>, 3>*, 4> fams = {
      &m.interior, &m.hwall, &m.vwall, &m.origin};
  DiscreteReport rep;
  std::ostringstream problems;
  for (int f = 0; f < 4; ++f) {
    double sum = 0.0;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        const double p = (*fams[f])[di + 1][dj + 1];
        if (p < 0.0)
          problems << family_name(f) << " weight (" << di << "," << dj
                   << ") is negative (" << fmt17(p) << "); ";
        const bool blocked = (f == 1 && dj < 0) || (f == 2 && di < 0) ||
                             (f == 3 && (di < 0 || dj < 0));
        if (blocked && p != 0.0)
          problems << family_name(f) << " jump (" << di << "," << dj
                   << ") leaves the quadrant; ";
        sum += p;
      }
    }
    rep.family_sums[f] = sum;
    if (std::abs(sum - 1.0) > 1e-12)
      problems << family_name(f) << " weights sum to " << fmt17(sum)
               << ", not 1; ";
  }
  rep.interior_drift = {0.0, 0.0};
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      rep.interior_drift[0] += di * m.interior[di + 1][dj + 1];
      rep.interior_drift[1] += dj * m.interior[di + 1][dj + 1];
    }
  const std::string msg = problems.str();
  if (!msg.empty()) throw config_error("invalid walk model: " + msg);
  return rep;
}

namespace {

using nlohmann::json;

std::array<std::array<double, 2>, 2> parse_mat2(const json& j,
                                                const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2)
    throw config_error(path + " must be a 2x2 array of numbers");
  std::array<std::array<double, 2>, 2> out{};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      if (!j[i][k].is_number())
        throw config_error(path + " must contain numbers only");
      out[i][k] = j[i][k].get<double>();
    }
  return out;
}

std::array<double, 2> parse_vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw config_error(path + " must be an array of 2 numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::array<std::array<double, 3>, 3> parse_family(const json& j,
                                                  const std::string& path) {
  if (!j.is_object())
    throw config_error(path + " must be an object of \"i,j\" keys");
  std::array<std::array<double, 3>, 3> out{};
  for (const auto& [key, val] : j.items()) {
    int di = 0, dj = 0;
    char extra = 0;
    if (std::sscanf(key.c_str(), "%d,%d%c", &di, &dj, &extra) != 2 ||
        di < -1 || di > 1 || dj < -1 || dj > 1)
      throw config_error(path + "." + key +
                         ": keys must be \"i,j\" with i,j in {-1,0,1}");
    if (!val.is_number())
      throw config_error(path + "." + key + " must be a number");
    out[di + 1][dj + 1] = val.get<double>();
  }
  return out;
}

void reject_unknown(const json& j, std::initializer_list<const char*> known) {
  for (const auto& [key, val] : j.items()) {
    (void)val;
    bool ok = false;
    for (const char* k : known)
      if (key == k) ok = true;
    if (!ok) throw config_error("unknown field \"" + key + "\"");
  }
}

json family_to_json(const std::array<std::array<double, 3>, 3>& fam) {
  json out = json::object();
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      if (fam[di + 1][dj + 1] != 0.0)
        out[std::to_string(di) + "," + std::to_string(dj)] =
            fam[di + 1][dj + 1];
  return out;
}

}  // namespace

Model load_model_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string())
    throw config_error("missing field \"type\" (continuous or discrete)");
  const std::string type = j["type"].get<std::string>();
  if (type == "continuous") {
    reject_unknown(j, {"type", "sigma", "mu", "refl"});
    for (const char* req : {"sigma", "mu"})
      if (!j.contains(req))
        throw config_error(std::string("missing field \"") + req + "\"");
    ContinuousModel m;
    m.sigma = parse_mat2(j["sigma"], "sigma");
    m.mu = parse_vec2(j["mu"], "mu");
    if (j.contains("refl")) m.refl = parse_mat2(j["refl"], "refl");
    validate_continuous(m);
    return m;
  }
  if (type == "discrete") {
    reject_unknown(j, {"type", "interior", "hwall", "vwall", "origin"});
    for (const char* req : {"interior", "hwall", "vwall", "origin"})
      if (!j.contains(req))
        throw config_error(std::string("missing field \"") + req + "\"");
    DiscreteModel m;
    m.interior = parse_family(j["interior"], "interior");
    m.hwall = parse_family(j["hwall"], "hwall");
    m.vwall = parse_family(j["vwall"], "vwall");
    m.origin = parse_family(j["origin"], "origin");
    validate_discrete(m);
    return m;
  }
  throw config_error("type must be \"continuous\" or \"discrete\", got \"" +
                     type + "\"");
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model_json(ss.str());
}

std::string model_to_json(const Model& m) {
  json j;
  if (std::holds_alternative<ContinuousModel>(m)) {
    const auto& c = std::get<ContinuousModel>(m);
    j["type"] = "continuous";
    j["sigma"] = {{c.sigma[0][0], c.sigma[0][1]},
                  {c.sigma[1][0], c.sigma[1][1]}};
    j["mu"] = {c.mu[0], c.mu[1]};
    j["refl"] = {{c.refl[0][0], c.refl[0][1]}, {c.refl[1][0], c.refl[1][1]}};
  } else {
    const auto& d = std::get<DiscreteModel>(m);
    j["type"] = "discrete";
    j["interior"] = family_to_json(d.interior);
    j["hwall"] = family_to_json(d.hwall);
    j["vwall"] = family_to_json(d.vwall);
    j["origin"] = family_to_json(d.origin);
  }
  return j.dump(2);
}

}  // namespace qk
