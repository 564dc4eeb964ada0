#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "qk/model.hpp"

using namespace qk;

namespace {
ContinuousModel m1() { return {}; }

DiscreteModel d1_third() {
  DiscreteModel m{};
  m.interior[2][1] = 0.1;
  m.interior[0][1] = 0.4;
  m.interior[1][2] = 0.1;
  m.interior[1][0] = 0.4;
  const double t = 1.0 / 3.0;
  m.hwall[2][1] = t;
  m.hwall[0][1] = t;
  m.hwall[1][2] = t;
  m.vwall[1][2] = t;
  m.vwall[1][0] = t;
  m.vwall[2][1] = t;
  m.origin[2][1] = 0.5;
  m.origin[1][2] = 0.5;
  return m;
}
}  // namespace

TEST_CASE("stability verdicts") {
  auto r = validate_continuous(m1());
  CHECK(r.stable);
  CHECK(r.condition_values[0] == 1.0);
  CHECK(r.condition_values[3] == -1.0);

  ContinuousModel up = m1();
  up.mu = {1.0, 1.0};
  CHECK_FALSE(validate_continuous(up).stable);

  ContinuousModel skew = m1();
  skew.refl = {{{1.0, 2.0}, {2.0, 1.0}}};  // det < 0
  CHECK_FALSE(validate_continuous(skew).stable);

  CHECK_THROWS_AS(require_stable(up), config_error);
}

TEST_CASE("sigma must be positive definite") {
  ContinuousModel bad = m1();
  bad.sigma = {{{1.0, 2.0}, {2.0, 1.0}}};
  CHECK_THROWS_AS(validate_continuous(bad), config_error);
  bad.sigma = {{{1.0, 0.5}, {0.4, 1.0}}};  // asymmetric
  CHECK_THROWS_AS(validate_continuous(bad), config_error);
}

TEST_CASE("json round trip continuous") {
  ContinuousModel m = m1();
  m.sigma = {{{1.25, -0.5}, {-0.5, 2.0}}};
  m.mu = {-0.75, -1.5};
  const auto loaded = load_model_json(model_to_json(m));
  const auto& back = std::get<ContinuousModel>(loaded);
  CHECK(back.sigma == m.sigma);
  CHECK(back.mu == m.mu);
  CHECK(back.refl == m.refl);
}

TEST_CASE("json round trip discrete") {
  const DiscreteModel m = d1_third();
  const auto loaded = load_model_json(model_to_json(m));
  const auto& back = std::get<DiscreteModel>(loaded);
  CHECK(back.interior == m.interior);
  CHECK(back.hwall == m.hwall);
  CHECK(back.origin == m.origin);
}

TEST_CASE("loader rejects malformed and unknown") {
  CHECK_THROWS_AS(load_model_json("{\"type\": "), config_error);
  CHECK_THROWS_AS(
      load_model_json(
          "{\"type\":\"continuous\",\"sigma\":[[1,0],[0,1]],"
          "\"mu\":[-1,-1],\"refl\":[[1,0],[0,1]],\"bogus\":1}"),
      config_error);
  CHECK_THROWS_AS(load_model_json("{\"type\":\"tilted\"}"), config_error);
  // parse diagnostics mention the position
  try {
    load_model_json("{\"type\": ");
    CHECK(false);
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("parse") != std::string::npos);
  }
}

TEST_CASE("discrete family validation") {
  auto r = validate_discrete(d1_third());
  CHECK(r.family_sums[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.interior_drift[0] == doctest::Approx(-0.3));
  CHECK(r.interior_drift[1] == doctest::Approx(-0.3));

  DiscreteModel bad = d1_third();
  bad.interior[1][1] = 0.2;  // sum now 1.2
  CHECK_THROWS_AS(validate_discrete(bad), config_error);

  bad = d1_third();
  bad.hwall[1][2] = 0.0;
  bad.hwall[1][0] = 1.0 / 3.0;  // downward jump off the horizontal wall
  CHECK_THROWS_AS(validate_discrete(bad), config_error);

  bad = d1_third();
  bad.interior[2][1] = -0.1;
  CHECK_THROWS_AS(validate_discrete(bad), config_error);
}

TEST_CASE("file loader") {
  const char* path = "tmp_model_test.json";
  {
    std::ofstream f(path);
    f << model_to_json(ContinuousModel{});
  }
  const auto m = load_model_file(path);
  CHECK(std::holds_alternative<ContinuousModel>(m));
  std::remove(path);
  CHECK_THROWS_AS(load_model_file("no_such_file.json"), config_error);
}
