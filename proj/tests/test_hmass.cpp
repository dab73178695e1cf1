#include <doctest.h>

#include <cmath>
#include <random>

#include "masscost/hmass.hpp"

using namespace masscost;

namespace {

AtomicMeasure random_measure(std::mt19937_64& rng, int atoms) {
  std::uniform_real_distribution<double> pos(-10.0, 10.0), mass(0.01, 3.0);
  AtomicMeasure u;
  for (int k = 0; k < atoms; ++k) u.atoms.push_back({{pos(rng), pos(rng)}, mass(rng)});
  return u;
}

std::vector<double> step_grid(double step, double hi) {
  std::vector<double> g;
  for (double m = step; m <= hi + 1e-12; m += step) g.push_back(m);
  return g;
}

}  // namespace

TEST_CASE("h-mass examples") {
  const auto root = CostFunction::power(1.0, 0.5);
  AtomicMeasure u{{{{0.0}, 1.0}, {{5.0}, 4.0}}, 0.0};
  CHECK(h_mass(root, u) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(h_mass(root, AtomicMeasure{}) == 0.0);
  AtomicMeasure diffuse{{}, 0.1};
  CHECK(std::isinf(h_mass(root, diffuse)));
  CHECK(h_mass(CostFunction::power(2.0, 1.0), diffuse) == doctest::Approx(0.2));
}

TEST_CASE("measure validation") {
  AtomicMeasure dup{{{{1.0}, 1.0}, {{1.0}, 2.0}}, 0.0};
  CHECK_THROWS_AS(dup.validate(), std::invalid_argument);
  AtomicMeasure neg{{{{1.0}, -1.0}}, 0.0};
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
  AtomicMeasure mixed{{{{1.0}, 1.0}, {{1.0, 2.0}, 1.0}}, 0.0};
  CHECK_THROWS_AS(mixed.validate(), std::invalid_argument);
  AtomicMeasure neg_diffuse{{}, -0.5};
  CHECK_THROWS_AS(neg_diffuse.validate(), std::invalid_argument);
}

TEST_CASE("merging atoms never increases the h-mass") {
  std::mt19937_64 rng(13);
  const auto root = CostFunction::power(1.0, 0.5);
  for (int trial = 0; trial < 1000; ++trial) {
    auto u = random_measure(rng, 2 + trial % 6);
    const double before = h_mass(root, u);
    auto merged = u;
    merged.atoms[0].m += merged.atoms[1].m;
    merged.atoms.erase(merged.atoms.begin() + 1);
    CHECK(h_mass(root, merged) <= before);
  }
}

TEST_CASE("homogeneity separates linear from concave costs") {
  std::mt19937_64 rng(17);
  const auto lin = CostFunction::power(1.5, 1.0);
  const auto root = CostFunction::power(1.0, 0.5);
  std::uniform_real_distribution<double> T(0.05, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = random_measure(rng, 1 + trial % 5);
    CHECK(h_mass(lin, u) == doctest::Approx(1.5 * u.total_mass()).epsilon(1e-13));
    const double t = T(rng);
    auto tu = u;
    for (auto& a : tu.atoms) a.m *= t;
    CHECK(h_mass(root, tu) > t * h_mass(root, u));
  }
}

TEST_CASE("sampled cost functions") {
  const auto H = CostFunction::sampled({1.0, 2.0, 4.0}, {1.0, 1.5, 2.0});
  CHECK(H(0.0) == 0.0);
  CHECK(H(0.5) == doctest::Approx(0.5));
  CHECK(H(3.0) == doctest::Approx(1.75));
  CHECK(H(6.0) == doctest::Approx(2.5));
  CHECK(H.slope_at_zero() == doctest::Approx(1.0));
  CHECK_THROWS(CostFunction::sampled({1.0, 1.0}, {1.0, 2.0}));
  CHECK_THROWS(CostFunction::sampled({1.0, 2.0}, {1.0, -2.0}));
  CHECK(std::isinf(CostFunction::power(1.0, 0.5).slope_at_zero()));
  CHECK(CostFunction::power(3.0, 1.0).slope_at_zero() == 3.0);

  CostCurve c;
  c.samples = {{0.5, 0.8, SolverStatus::Converged}, {1.0, 1.0, SolverStatus::MaxIter},
               {2.0, 1.6, SolverStatus::Converged}, {4.0, 2.5, SolverStatus::Converged}};
  const auto F = CostFunction::from_curve(c);
  CHECK(F.masses().size() == 3);
  CHECK(F(0.0) == 0.0);
  double prev = 0.0;
  for (double m = 0.0; m <= 5.0; m += 0.05) {
    CHECK(F(m) >= prev);
    prev = F(m);
  }
}

TEST_CASE("subadditivity") {
  const auto grid = step_grid(0.25, 4.0);
  const auto root = subadditivity_check(CostFunction::power(1.0, 0.5), grid);
  CHECK(root.violations.empty());
  CHECK(root.equalities.empty());
  const auto lin = subadditivity_check(CostFunction::power(1.0, 1.0), grid);
  CHECK(lin.violations.empty());
  CHECK(lin.equalities.size() == grid.size() * (grid.size() + 1) / 2);  // pairs a <= b
  CHECK(lin.linear_on_range);
  const auto convex = subadditivity_check(CostFunction::power(1.0, 1.5), grid);
  CHECK_FALSE(convex.violations.empty());
}

TEST_CASE("linear plateau") {
  const auto grid = step_grid(0.5, 4.0);
  std::vector<double> H;
  for (double m : grid) H.push_back(m <= 1.0 ? m : 2.0 * std::sqrt(m) - 1.0);
  const auto kinked = detect_linear_plateau(CostFunction::sampled(grid, H));
  CHECK(std::abs(kinked.m_star - 1.0) <= 0.5);
  CHECK(kinked.strictly_concave_beyond);
  CHECK_FALSE(kinked.inconclusive);

  const auto power = detect_linear_plateau(CostFunction::power(1.0, 5.0 / 7.0), grid);
  CHECK(power.m_star == 0.0);
  CHECK(power.strictly_concave_beyond);

  const auto line = detect_linear_plateau(CostFunction::power(2.0, 1.0), grid);
  CHECK(line.m_star == 4.0);

  std::vector<double> bumpy = {0.5, 1.0, 1.3, 1.9, 2.0, 2.1, 2.2, 2.3};
  const auto noisy = detect_linear_plateau(CostFunction::sampled(grid, bumpy));
  CHECK(noisy.inconclusive);
}

TEST_CASE("concavity check") {
  const std::vector<double> m{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> ok{1.0, 1.8, 2.4, 2.8};
  const auto a = concavity_check(m, ok);
  CHECK(a.monotone);
  CHECK(a.concave);
  const std::vector<double> dip{1.0, 0.9, 2.4, 2.8};
  const auto b = concavity_check(m, dip);
  CHECK_FALSE(b.monotone);
  CHECK_FALSE(b.concave);
  CHECK_FALSE(b.failures.empty());
}
