#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "masscost/exponents.hpp"
#include "masscost/radial_solver.hpp"
#include "support.hpp"

using namespace masscost;
using testing::rel;

namespace {

// |u'|^2 + u^{1/2} in 1D: the first integral u'^2 = u^{1/2} - mu u gives a
// compacton with u_max = mu^-2; substituting u = u_max t^2 turns mass, energy
// and half-width into Beta integrals.
struct BetaOracle {
  double mu, energy, half_width;
  explicit BetaOracle(double m) {
    const double b32 = std::beta(1.5, 0.5), b52 = std::beta(2.5, 0.5), b72 = std::beta(3.5, 0.5);
    mu = std::pow(4.0 * b72 / m, 2.0 / 7.0);
    energy = 4.0 * std::pow(mu, -2.5) * (2.0 * b52 - b72);
    half_width = 2.0 * std::pow(mu, -1.5) * b32;
  }
};

constexpr double kH_1 = 2.069471413079122;
constexpr double kH_eighth = 0.4685923078358568;
constexpr double kH_8 = 9.139526744113539;
constexpr double kHalfWidth_1 = 1.748045685531305;

// |grad u|^2 + 1_{u>0} in 2D: on a disc of radius a the best profile is the
// torsion function, E(a) = 8 m^2 / (pi a^4) + pi a^2; minimize over a.
double support_oracle(double m) {
  auto E = [m](double a) { return 8.0 * m * m / (M_PI * std::pow(a, 4)) + M_PI * a * a; };
  double lo = 1e-3, hi = 100.0;
  for (int it = 0; it < 200; ++it) {
    const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
    if (E(a) < E(b))
      hi = b;
    else
      lo = a;
  }
  return E(0.5 * (lo + hi));
}

constexpr double kSupport_quarter = 2.1968878313422846;
constexpr double kSupport_1 = 5.535810445932085;
constexpr double kSupport_4 = 13.949368218115515;

}  // namespace

TEST_CASE("oracles reproduce the frozen values") {
  CHECK(rel(BetaOracle(1.0).energy, kH_1) < 1e-13);
  CHECK(rel(BetaOracle(0.125).energy, kH_eighth) < 1e-13);
  CHECK(rel(BetaOracle(8.0).energy, kH_8) < 1e-13);
  CHECK(rel(BetaOracle(1.0).half_width, kHalfWidth_1) < 1e-13);
  CHECK(rel(support_oracle(0.25), kSupport_quarter) < 1e-12);
  CHECK(rel(support_oracle(1.0), kSupport_1) < 1e-12);
  CHECK(rel(support_oracle(4.0), kSupport_4) < 1e-12);
}

TEST_CASE("zero mass and invalid input") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  const auto r = minimize_profile(f, 0.0);
  CHECK(r.energy == 0.0);
  for (double v : r.profile.values()) CHECK(v == 0.0);
  CHECK_THROWS_AS(minimize_profile(f, -1.0), std::invalid_argument);
  SolverConfig small;
  small.n = 8;
  CHECK_THROWS_AS(minimize_profile(f, 1.0, small), std::invalid_argument);
}

TEST_CASE("one-dimensional compacton against the Beta oracle") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  const auto r = minimize_profile(f, 1.0);
  CHECK(r.status == SolverStatus::Converged);
  CHECK(r.monotone);
  CHECK(rel(r.profile.mass(), 1.0) < 1e-10);
  CHECK(rel(r.energy, kH_1) < 1e-3);
  CHECK(r.energy >= kH_1 * (1.0 - 1e-4));
  const auto u = r.profile.values();
  std::size_t last = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] > 0.0) last = i;
  // u vanishes like (a - x)^4 at the edge, so the last cells carry almost nothing
  CHECK(std::abs(r.profile.radius(last) - kHalfWidth_1) < 0.03);

  const auto r2 = minimize_profile(f, 2.0);
  CHECK(std::abs(r2.energy / r.energy / std::pow(2.0, 5.0 / 7.0) - 1.0) < 0.03);
}

TEST_CASE("linear potential spreads toward its mass") {
  const auto f = Lagrangian::power_sum(2.0, 1.0, 1);
  SolverConfig near, far;
  near.outer_radius = 25.0;
  far.outer_radius = 100.0;
  const auto a = minimize_profile(f, 1.0, near);
  const auto b = minimize_profile(f, 1.0, far);
  CHECK(b.energy >= 1.0);
  CHECK(b.energy <= 1.1);
  CHECK(a.energy >= b.energy);
}

TEST_CASE("support measure in 2D follows m^{2/3}") {
  const auto f = Lagrangian::power_sum(2.0, 0.0, 2);
  SolverConfig cfg;
  cfg.n = 400;
  const std::vector<double> masses{0.25, 1.0, 4.0};
  const auto c = cost_curve(f, masses, cfg);
  REQUIRE(c.fit.has_value());
  CHECK(std::abs(c.fit->alpha / alpha_exponent(0.0, 2.0, 2).alpha - 1.0) < 0.05);
  const double ref[] = {kSupport_quarter, kSupport_1, kSupport_4};
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(c.samples[j].status == SolverStatus::Converged);
    CHECK(rel(c.samples[j].H, ref[j]) < 0.03);
  }
}

TEST_CASE("power-law fit") {
  std::vector<std::pair<double, double>> exact, lin;
  for (int k = 0; k < 10; ++k) {
    const double m = std::pow(1.7, k - 4);
    exact.emplace_back(m, 2.0 * std::pow(m, 0.7));
    lin.emplace_back(m, m);
  }
  const auto a = fit_power_law(exact);
  CHECK(std::abs(a.alpha - 0.7) < 1e-10);
  CHECK(std::abs(a.c - 2.0) < 1e-10);
  CHECK(a.r_squared > 1.0 - 1e-12);
  const auto b = fit_power_law(lin);
  CHECK(std::abs(b.alpha - 1.0) < 1e-10);
  CHECK(std::abs(b.c - 1.0) < 1e-10);

  exact.emplace_back(3.0, 0.0);
  const auto c = fit_power_law(exact);
  CHECK(c.excluded == 1);
  CHECK(c.used == 10);
  const std::vector<std::pair<double, double>> two{{1.0, 1.0}, {2.0, 2.0}, {3.0, -1.0}};
  CHECK_THROWS_AS(fit_power_law(two), std::invalid_argument);
}

TEST_CASE("cost curve guards and worker independence") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  SolverConfig cfg;
  cfg.n = 400;
  const std::vector<double> one{1.0};
  const auto single = cost_curve(f, one, cfg);
  CHECK_FALSE(single.fit.has_value());
  CHECK_FALSE(single.fit_note.empty());
  const std::vector<double> bad{1.0, 0.5};
  CHECK_THROWS_AS(cost_curve(f, bad, cfg), std::invalid_argument);

  const std::vector<double> masses{0.5, 1.0, 2.0};
  const auto a = cost_curve(f, masses, cfg, 1);
  const auto b = cost_curve(f, masses, cfg, 3);
  for (std::size_t j = 0; j < masses.size(); ++j) {
    CHECK(a.samples[j].H == b.samples[j].H);
    CHECK(a.samples[j].status == SolverStatus::Converged);
    if (j > 0) CHECK(a.samples[j].H >= a.samples[j - 1].H - 1e-6);
  }
}

TEST_CASE("doubling the radius barely moves H") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  SolverConfig a, b;
  a.outer_radius = 5.0;
  a.n = 1000;
  b.outer_radius = 10.0;
  b.n = 2000;
  const auto ra = minimize_profile(f, 1.0, a);
  const auto rb = minimize_profile(f, 1.0, b);
  REQUIRE(ra.status == SolverStatus::Converged);
  REQUIRE(rb.status == SolverStatus::Converged);
  CHECK(rel(ra.energy, rb.energy) < 5e-3);
}

TEST_CASE("restarting from a minimizer stays put") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  SolverConfig cfg;
  cfg.n = 400;
  cfg.outer_radius = 5.0;
  const auto r = minimize_profile(f, 1.0, cfg);
  const auto again = minimize_profile_from(f, 1.0, r.profile, cfg);
  CHECK(again.energy <= r.energy * (1.0 + 1e-10));
  CHECK(rel(again.energy, r.energy) < 1e-6);
}

TEST_CASE("slope construction") {
  const auto a = slope_construction_profile(1e-2, 2);
  CHECK(std::abs(a.mass - 2.0 * M_PI * 1e-2) < 1e-4);
  CHECK(std::abs(a.closed_form_mass - 2.0 * M_PI * 1e-2) < 1e-15);
  const auto b = slope_construction_profile(1e-2, 3);
  CHECK(std::abs(b.mass - 8.0 * M_PI * 1e-2) < 1e-3);
  CHECK_THROWS_AS(slope_construction_profile(1e-2, 1), std::invalid_argument);

  const auto f = Lagrangian::power_sum(2.0, 1.0, 2);
  std::vector<double> ratios;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const auto s = slope_construction_profile(eps, 2, &f);
    REQUIRE(s.energy_per_mass.has_value());
    ratios.push_back(*s.energy_per_mass);
  }
  for (double r : ratios) CHECK(r < 2.0);
  CHECK(ratios[2] <= ratios[0]);
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(0, 0) != derive_seed(0, 1));
  CHECK(derive_seed(1, 0) != derive_seed(0, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}
