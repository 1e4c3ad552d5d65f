#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

#include "cablemap/survey_frame.hpp"
#include "cablemap/synthetic_oracle.hpp"

using namespace cablemap;

namespace {

bool same_point(const DetectedPoint& a, const DetectedPoint& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

}  // namespace

TEST_CASE("normalize_points sorts ascending by x") {
  const auto out = normalize_points({{2, 1, 0.5}, {0, 1, 0.5}});
  REQUIRE(out.size() == 2);
  CHECK(same_point(out[0], {0, 1, 0.5}));
  CHECK(same_point(out[1], {2, 1, 0.5}));
}

TEST_CASE("normalize_points is the identity on a singleton") {
  const auto out = normalize_points({{0, 1, 0.5}});
  REQUIRE(out.size() == 1);
  CHECK(same_point(out[0], {0, 1, 0.5}));
}

TEST_CASE("normalize_points keeps ties in input order") {
  const std::vector<DetectedPoint> in = {{0, 2, 0.4}, {0, 8, 0.6}, {2, 2.1, 0.4}};
  const auto out = normalize_points(in);
  REQUIRE(out.size() == 3);
  for (std::size_t i = 0; i < in.size(); ++i) CHECK(same_point(out[i], in[i]));
}

TEST_CASE("normalize_points rejects bad input") {
  CHECK_THROWS_AS(normalize_points({}), EmptyInput);
  CHECK_THROWS_AS(normalize_points({{0, std::nan(""), 0}}), NonFiniteValue);
  CHECK_THROWS_AS(normalize_points({{std::numeric_limits<double>::infinity(), 0, 0}}),
                  NonFiniteValue);
}

TEST_CASE("normalize_points is idempotent and preserves the multiset") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<DetectedPoint> raw;
    const int n = 1 + static_cast<int>(rng.uniform() * 40);
    for (int i = 0; i < n; ++i) {
      // Coarse x values force plenty of ties.
      raw.push_back({std::floor(rng.uniform() * 5), rng.uniform() * 10, rng.uniform()});
    }
    const auto once = normalize_points(raw);
    const auto twice = normalize_points(once);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) CHECK(same_point(once[i], twice[i]));

    auto key = [](const DetectedPoint& p) { return std::make_tuple(p.x, p.y, p.z); };
    std::vector<std::tuple<double, double, double>> a, b;
    for (const auto& p : raw) a.push_back(key(p));
    for (const auto& p : once) b.push_back(key(p));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("SurveyConfig validation") {
  SurveyConfig config;
  CHECK_NOTHROW(config.validate());  // defaults are sane, no lines required

  config.line_positions = {0, 2, 4};
  CHECK_NOTHROW(config.validate());
  CHECK(config.line_spacing() == doctest::Approx(2.0));

  SurveyConfig bad = config;
  bad.line_positions = {0, 2, 2};
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = config;
  bad.line_positions = {5};
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = config;
  bad.wave_speed_v = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = config;
  bad.beta = -1;
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = config;
  bad.theta_y = -0.1;
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = config;
  bad.min_trace_points = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = config;
  bad.sample_step = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = config;
  bad.angle_threshold_deg = 91;
  CHECK_THROWS_AS(bad.validate(), InputError);
}
