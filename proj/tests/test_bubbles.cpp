#include <doctest.h>

#include <cmath>
#include <random>

#include "masscost/bubbles.hpp"
#include "support.hpp"

using namespace masscost;

namespace {

double gauss(double x, double c, double sigma, double mass) {
  return mass * std::exp(-0.5 * (x - c) * (x - c) / (sigma * sigma)) / (sigma * std::sqrt(2.0 * M_PI));
}

GridDensity uniform_line(double L, double h) {
  const auto n = static_cast<std::size_t>(std::llround(L / h)) + 1;
  return testing::grid_1d(0.0, h, n, [L](double) { return 1.0 / L; });
}

GridDensity random_density(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> pos(-40.0, 40.0), wid(0.3, 4.0), mass(0.01, 2.0), noise(0.0, 0.02);
  if (k % 4 == 3) {
    std::vector<std::array<double, 4>> bumps(3);
    for (auto& b : bumps) b = {pos(rng) / 4, pos(rng) / 4, wid(rng), mass(rng)};
    return testing::grid_2d(-10.0, 0.25, 81, [&](double x, double y) {
      double v = 0.0;
      for (const auto& b : bumps)
        v += b[3] * std::exp(-0.5 * ((x - b[0]) * (x - b[0]) + (y - b[1]) * (y - b[1])) / (b[2] * b[2]));
      return v;
    });
  }
  std::vector<std::array<double, 3>> bumps(1 + k % 5);
  for (auto& b : bumps) b = {pos(rng), wid(rng), mass(rng)};
  auto g = testing::grid_1d(-50.0, 0.1, 1001, [&](double x) {
    double v = 0.0;
    for (const auto& b : bumps) v += gauss(x, b[0], b[1], b[2]);
    return v;
  });
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += noise(rng);
  return g;
}

double dist(const Bubble& a, const Bubble& b) {
  return std::hypot(a.center[0] - b.center[0], a.center[1] - b.center[1]);
}

}  // namespace

TEST_CASE("bubbling sup") {
  const auto u = uniform_line(1000.0, 0.01);
  CHECK(std::abs(bubbling_sup(u, 1.0).mass - 0.002) < 2e-5);

  auto spike = GridDensity::zeros(1, {0.0, 0.0}, 0.1, {100, 1});
  spike[40] = 3.0 / 0.1;
  const auto s = bubbling_sup(spike, 0.5);
  CHECK(s.mass == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(s.index == 35);  // leftmost center whose ball still holds the spike

  auto two = GridDensity::zeros(1, {0.0, 0.0}, 0.1, {100, 1});
  two[40] = 1.0 / 0.1;
  two[50] = 2.0 / 0.1;
  CHECK(bubbling_sup(two, 0.6).mass == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(bubbling_sup(two, 0.4).mass == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS(bubbling_sup(two, 0.05));

  // equal spikes: the leftmost center reaching the first one wins
  auto tie = GridDensity::zeros(1, {0.0, 0.0}, 0.1, {100, 1});
  tie[20] = tie[70] = 10.0;
  CHECK(bubbling_sup(tie, 0.2).index == 18);
}

TEST_CASE("two Gaussians give two bubbles") {
  const auto u = testing::grid_1d(-40.0, 0.05, 1601, [](double x) { return gauss(x, -20, 1, 1) + gauss(x, 20, 1, 1); });
  const auto set = extract_bubbles(u, {5.0, 0.05});
  REQUIRE(set.bubbles.size() == 2);
  for (const auto& b : set.bubbles) CHECK(std::abs(b.mass - 1.0) < 0.01);
  CHECK(set.remainder_mass < 1e-3);
  CHECK_FALSE(set.incomplete);

  const auto g2 = testing::grid_2d(-10.0, 0.1, 201, [](double x, double y) {
    return std::exp(-((x - 5) * (x - 5) + y * y)) + 2.0 * std::exp(-((x + 5) * (x + 5) + y * y));
  });
  const auto set2 = extract_bubbles(g2, {2.0, 0.05 * g2.mass()});
  REQUIRE(set2.bubbles.size() == 2);
  CHECK(set2.bubbles[0].center[0] == doctest::Approx(-5.0));
  CHECK(std::abs(set2.bubbles[0].mass - 2.0 * M_PI) < 0.01 * 2.0 * M_PI);
  CHECK(std::abs(set2.bubbles[1].mass - M_PI) < 0.01 * M_PI);
}

TEST_CASE("uniform and single-spike densities") {
  const auto u = uniform_line(1000.0, 0.01);
  const auto set = extract_bubbles(u, {1.0, 0.01});
  CHECK(set.bubbles.empty());
  CHECK(std::abs(set.vanishing_sup - 0.002) < 2e-5);
  CHECK(set.vanishing_sup < 0.01);

  auto spike = GridDensity::zeros(1, {0.0, 0.0}, 0.1, {100, 1});
  spike[40] = 2.5 / 0.1;
  const auto one = extract_bubbles(spike, {0.5, 0.1});
  REQUIRE(one.bubbles.size() == 1);
  CHECK(one.bubbles[0].mass == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(one.remainder_mass == 0.0);
}

TEST_CASE("bubble cap flags an incomplete decomposition") {
  const auto u = testing::grid_1d(-40.0, 0.05, 1601, [](double x) {
    return gauss(x, -20, 1, 1) + gauss(x, 0, 1, 1) + gauss(x, 20, 1, 1);
  });
  BubbleParams p{5.0, 0.05};
  p.max_bubbles = 2;
  const auto set = extract_bubbles(u, p);
  CHECK(set.bubbles.size() == 2);
  CHECK(set.incomplete);
}

TEST_CASE("accounting, separation, idempotence and floor monotonicity on random inputs") {
  std::mt19937_64 rng(1234);
  for (int k = 0; k < 100; ++k) {
    const auto u = random_density(rng, k);
    const double r = u.dim() == 1 ? 2.0 : 1.0;
    const double floor = 0.05 * u.mass();
    const auto set = extract_bubbles(u, {r, floor});
    double sum = set.remainder_mass;
    for (const auto& b : set.bubbles) sum += b.mass;
    CHECK(std::abs(sum - set.total_mass) <= 1e-12 * set.total_mass);
    for (std::size_t a = 0; a < set.bubbles.size(); ++a)
      for (std::size_t b = a + 1; b < set.bubbles.size(); ++b)
        CHECK(dist(set.bubbles[a], set.bubbles[b]) - set.bubbles[a].radius - set.bubbles[b].radius >= r - 1e-9);

    const GridDensity rest(u.dim(), u.origin(), u.spacing(), u.shape(), set.remainder);
    CHECK(extract_bubbles(rest, {r, floor}).bubbles.empty());

    const auto coarse = extract_bubbles(u, {r, 2.0 * floor});
    REQUIRE(coarse.bubbles.size() <= set.bubbles.size());
    for (std::size_t a = 0; a < coarse.bubbles.size(); ++a) {
      CHECK(coarse.bubbles[a].center == set.bubbles[a].center);
      CHECK(coarse.bubbles[a].mass <= set.bubbles[a].mass);
    }
  }
}

TEST_CASE("decomposition along drifting and spreading sequences") {
  std::vector<GridDensity> drift;
  for (int n = 10; n <= 30; n += 5)
    drift.push_back(testing::grid_1d(-60.0, 0.1, 1201, [n](double x) {
      return gauss(x, -0.5 * n, 1, 1) + gauss(x, 0.5 * n, 1, 0.7);
    }));
  const BubbleParams p{3.0, 0.05};
  const auto rep = decomposition_report(drift, p);
  CHECK_FALSE(rep.ambiguous);
  REQUIRE(rep.tracks.size() == 2);
  for (const auto& t : rep.tracks) {
    CHECK(t.first_index == 0);
    REQUIRE(t.masses.size() == drift.size());
    for (double m : t.masses) CHECK(std::abs(m / t.masses.front() - 1.0) < 0.01);
  }
  for (std::size_t n = 1; n < drift.size(); ++n) CHECK(*rep.min_separation[n] > *rep.min_separation[n - 1]);

  std::vector<GridDensity> spread;
  for (double L : {5.0, 50.0, 500.0})
    spread.push_back(testing::grid_1d(0.0, 0.05, 10001, [L](double x) { return x <= L ? 1.0 / L : 0.0; }));
  const auto vr = decomposition_report(spread, {1.0, 0.1});
  CHECK(vr.sets.back().bubbles.empty());
  CHECK(vr.vanishing_sup[2] < vr.vanishing_sup[1]);
  CHECK(vr.vanishing_sup[1] < 0.1);
}
