#include <doctest.h>

#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "gyro/errors.hpp"
#include "gyro/scenario.hpp"
#include "support.hpp"

using namespace gyro;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string b0_text() { return read_file(std::string(GYRO_SCENARIO_DIR) + "/b0.json"); }

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "s.json");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

void replace(std::string& s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  s.replace(pos, from.size(), to);
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("reference scenario parses and validates") {
    const auto s = parse_scenario(b0_text());
    CHECK(s.geometry.to_geometry() == GyrometerGeometry::baseline());
    CHECK(s.operating == OperatingPoint::baseline());
    REQUIRE(s.sweep);
    CHECK(s.sweep->temperatures().size() == 25);
    CHECK(s.sweep->temperatures().front() == 0.01);
    CHECK(s.sweep->temperatures().back() == 0.6);
    CHECK_NOTHROW(validate_scenario(s, test::constants()));
  }

  TEST_CASE("serialisation round trip is exact") {
    const auto s = parse_scenario(b0_text());
    const auto again = parse_scenario(to_json(s));
    CHECK(again == s);
    CHECK(to_json(again) == to_json(s));
  }

  TEST_CASE("strict parsing names the offending path") {
    auto t = b0_text();
    replace(t, "\"area_m2\": 0.03,", "\"area_m2\": 0.03, \"radius_m\": 0.1,");
    CHECK(error_of(t).find("geometry.radius_m") != std::string::npos);
    CHECK(error_of(t).find("unknown key") != std::string::npos);

    t = b0_text();
    replace(t, "\"spring_constant_N_per_m\": 1e4,", "");
    CHECK(error_of(t).find("spring_constant_N_per_m") != std::string::npos);

    t = b0_text();
    replace(t, "\"phi0_rad\": 2.3", "\"phi0_rad\": \"2.3\"");
    CHECK(error_of(t).find("operating.phi0_rad: expected a number") != std::string::npos);

    t = b0_text();
    replace(t, "\"seed\": 20240917", "\"seed\": -4");
    CHECK(error_of(t).find("sim.seed") != std::string::npos);
  }

  TEST_CASE("malformed JSON reports line and column") {
    const std::string text = "{\n  \"geometry\": {\n    \"area_m2\": 0.03,,\n";
    CHECK(error_of(text).rfind("s.json:3:", 0) == 0);
  }

  TEST_CASE("sweep needs exactly one temperature form") {
    auto t = b0_text();
    replace(t, "\"temperature_grid_K\": {\"min\": 0.01, \"max\": 0.6, \"points\": 25},",
            "\"temperature_grid_K\": {\"min\": 0.01, \"max\": 0.6, \"points\": 25}, \"temperatures_K\": [0.1],");
    CHECK(error_of(t).find("exactly one") != std::string::npos);
  }

  TEST_CASE("semantic validation") {
    auto s = parse_scenario(b0_text());
    s.operating.temperature = 0.8;
    CHECK_THROWS_AS(validate_scenario(s, test::constants()), DomainError);
    s = parse_scenario(b0_text());
    s.sim->trials = 50;
    CHECK_THROWS_AS(validate_scenario(s, test::constants()), ValidationError);
    s = parse_scenario(b0_text());
    s.geometry.critical_current_kg_per_s *= 2;
    CHECK_THROWS_AS(validate_scenario(s, test::constants()), StabilityError);
  }

  TEST_CASE("simulation config follows the scenario") {
    const auto s = parse_scenario(b0_text());
    const auto c = make_sim_config(s, test::constants());
    CHECK(c.dt == 5e-5);
    CHECK(c.duration == 2.0);
    CHECK(c.seed == 20240917u);
    CHECK(c.decimation == 4);
    CHECK(c.rotation_phase == 0.0);
  }

  TEST_CASE("design-space file converts Hz to rad/s") {
    const auto d = parse_design_space(
        R"({"phiA_max_rad": 0.15, "max_evaluations": 50, "free": {"diaphragm_resonance_Hz": [1000, 5000], "phi0_rad": [2, 2.5]}})");
    CHECK(d.phiA_max == 0.15);
    CHECK(d.max_evaluations == 50);
    REQUIRE(d.free.size() == 2);
    CHECK(d.free[0].first == DesignParameter::diaphragm_omega);
    CHECK(d.free[0].second.lo == doctest::Approx(2 * std::numbers::pi * 1000));
    CHECK(d.free[1].first == DesignParameter::phi0);
    CHECK_THROWS_AS(parse_design_space(R"({"free": {"radius": [1, 2]}})"), ValidationError);
    CHECK_THROWS_AS(parse_design_space(R"({"free": {"area_m2": [1]}})"), ValidationError);
  }

  TEST_CASE("applying a design point touches only changed values") {
    auto s = parse_scenario(b0_text());
    const auto before = s;
    DesignPoint p{s.geometry.to_geometry(), s.operating};
    apply_design_point(s, p);
    CHECK(s == before);
    p.op.phi0 = 2.0;
    p.geometry.diaphragm_omega = 2 * std::numbers::pi * 2500;
    apply_design_point(s, p);
    CHECK(s.operating.phi0 == 2.0);
    CHECK(s.geometry.diaphragm_resonance_Hz == doctest::Approx(2500).epsilon(1e-14));
    CHECK(s.geometry.area_m2 == before.geometry.area_m2);
  }
}
