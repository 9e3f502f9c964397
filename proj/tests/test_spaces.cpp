#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "approxvar/space.hpp"

using namespace approxvar;

TEST_CASE("distance basics") {
  MetricSpace real = MetricSpace::real();
  CHECK(distance(real, Point::real(0.0), Point::real(1.0)) == 1.0);

  MetricSpace fin = MetricSpace::finite({"a", "b"}, {{0.0, 2.5}, {2.5, 0.0}});
  CHECK(distance(fin, Point::finite(0), Point::finite(1)) == 2.5);

  MetricSpace pun = MetricSpace::punctured(0.4, 0.6, false);
  CHECK(distance(pun, Point::real(0.0), Point::real(1.0)) == 1.0);

  MetricSpace euc = MetricSpace::euclidean_space(2);
  CHECK(distance(euc, Point::vec({0.0, 0.0}), Point::vec({3.0, 4.0})) ==
        Catch::Approx(5.0));
}

TEST_CASE("distance errors") {
  MetricSpace euc = MetricSpace::euclidean_space(3);
  CHECK_THROWS_AS(distance(euc, Point::vec({1.0}), Point::vec({0.0, 0.0, 0.0})),
                  Error);
  MetricSpace pun = MetricSpace::punctured(0.4, 0.6, false);
  CHECK_THROWS_AS(distance(pun, Point::real(0.5), Point::real(1.0)), Error);
}

TEST_CASE("punctured membership at the hole boundary") {
  // open hole removed: boundary points stay members; closed hole: they do not
  MetricSpace proper = MetricSpace::punctured(0.4, 0.6, false);
  CHECK(is_member(proper, Point::real(0.4)));
  CHECK(is_member(proper, Point::real(0.6)));
  CHECK_FALSE(is_member(proper, Point::real(0.5)));

  MetricSpace improper = MetricSpace::punctured(0.4, 0.6, true);
  CHECK_FALSE(is_member(improper, Point::real(0.4)));
  CHECK_FALSE(is_member(improper, Point::real(0.6)));
  CHECK(is_member(improper, Point::real(0.39)));

  // degenerate single-point puncture
  MetricSpace dot = MetricSpace::punctured(0.5, 0.5, true);
  CHECK_FALSE(is_member(dot, Point::real(0.5)));
  CHECK(is_member(dot, Point::real(0.5 + 1e-9)));
}

TEST_CASE("validate_space") {
  MetricSpace ok = MetricSpace::finite(
      {"a", "b", "c"},
      {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  CHECK(validate_space(ok).valid);

  MetricSpace bad = MetricSpace::finite(
      {"a", "b", "c"},
      {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  ValidationReport r = validate_space(bad);
  CHECK_FALSE(r.valid);
  bool triangle = false;
  for (const std::string& v : r.violations)
    triangle = triangle || v.find("triangle") != std::string::npos;
  CHECK(triangle);

  CHECK(validate_space(MetricSpace::euclidean_space(3)).valid);
}

TEST_CASE("ball_members") {
  MetricSpace two = MetricSpace::two_point(1.0);
  auto only_x = ball_members(two, Point::finite(0), 0.5);
  REQUIRE(only_x.size() == 1);
  CHECK(only_x[0].label == 0);

  auto both = ball_members(two, Point::finite(0), 1.0);  // boundary inclusive
  CHECK(both.size() == 2);

  auto only_y = ball_members(two, Point::finite(1), 0.99);
  REQUIRE(only_y.size() == 1);
  CHECK(only_y[0].label == 1);
}

TEST_CASE("ball monotone in eps and metric axioms by exhaustion") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> wd(0.2, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    int m = 2 + static_cast<int>(rng() % 4);
    std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) d[i][j] = d[j][i] = wd(rng);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    std::vector<std::string> labels;
    for (int i = 0; i < m; ++i) labels.push_back("p" + std::to_string(i));
    MetricSpace s = MetricSpace::finite(labels, d);
    REQUIRE(validate_space(s).valid);
    for (int i = 0; i < m; ++i) {
      CHECK(distance(s, Point::finite(i), Point::finite(i)) == 0.0);
      for (int j = 0; j < m; ++j)
        CHECK(distance(s, Point::finite(i), Point::finite(j)) ==
              distance(s, Point::finite(j), Point::finite(i)));
      auto small = ball_members(s, Point::finite(i), 0.3);
      auto large = ball_members(s, Point::finite(i), 1.1);
      for (const Point& p : small) {
        bool found = false;
        for (const Point& q : large) found = found || q.label == p.label;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("enclosing radius") {
  MetricSpace real = MetricSpace::real();
  RadiusBound rb = enclosing_radius_upper(
      real, {Point::real(0.0), Point::real(1.0), Point::real(0.25)});
  CHECK(rb.radius == Catch::Approx(0.5));

  // two euclidean values: midpoint center, radius = half separation
  MetricSpace euc = MetricSpace::euclidean_space(2);
  RadiusBound rb2 = enclosing_radius_upper(
      euc, {Point::vec({0.0, 0.0}), Point::vec({2.0, 0.0})});
  CHECK(rb2.radius == Catch::Approx(1.0));
}
