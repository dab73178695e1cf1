#include <doctest.h>

#include <cmath>
#include <random>

#include "masscost/energy.hpp"
#include "masscost/gamma_lab.hpp"
#include "masscost/radial_solver.hpp"
#include "support.hpp"

using namespace masscost;
using testing::rel;

namespace {

// Minimal cost of |u'|^2 + u^{1/2} in 1D (closed-form compacton), H(m) = H(1) m^{5/7}.
constexpr double kH_1 = 2.069471413079122;
double cost(double m) { return kH_1 * std::pow(m, 5.0 / 7.0); }

GridDensity smooth_random(std::mt19937_64& rng, int dim, std::size_t n) {
  std::uniform_real_distribution<double> c(-1.0, 1.0), w(0.2, 0.8), a(0.1, 2.0);
  double cx[3], cy[3], wb[3], ab[3];
  for (int b = 0; b < 3; ++b) {
    cx[b] = c(rng);
    cy[b] = c(rng);
    wb[b] = w(rng);
    ab[b] = a(rng);
  }
  auto f = [&](double x, double y) {
    double v = 0.0;
    for (int b = 0; b < 3; ++b) v += ab[b] * std::exp(-((x - cx[b]) * (x - cx[b]) + (y - cy[b]) * (y - cy[b])) / (wb[b] * wb[b]));
    return v;
  };
  const double h = 4.0 / static_cast<double>(n);
  if (dim == 1) return testing::grid_1d(-2.0, h, n, [&](double x) { return f(x, 0.0); });
  return testing::grid_2d(-2.0, h, n, f);
}

GammaConfig line_config(std::size_t cells) {
  GammaConfig cfg;
  cfg.cells = cells;
  return cfg;
}

}  // namespace

TEST_CASE("unit eps matches the plain constrained minimization") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  const auto init = initial_density(line_config(256), 1.0);
  const DescentOptions opts{5000, 1e-10};
  const auto a = minimize_rescaled(f, 1.0, 1.0, init, opts);
  const auto b = minimize_rescaled_direct(f, 1.0, 1.0, init, opts);
  CHECK(a.energy == b.energy);
  for (std::size_t k = 0; k < a.density.size(); ++k) CHECK(a.density[k] == b.density[k]);
  CHECK(rel(a.density.mass(), 1.0) < 1e-12);
  CHECK(a.monotone);
  CHECK(rel(eval_energy(f, a.density), a.energy) < 1e-12);
}

TEST_CASE("substitution agrees with direct minimization on small grids") {
  const DescentOptions opts{200000, 1e-12};
  {
    const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
    const auto init = initial_density(line_config(64), 1.0);
    const auto a = minimize_rescaled(f, 0.5, 1.0, init, opts);
    const auto b = minimize_rescaled_direct(f, 0.5, 1.0, init, opts);
    CHECK(a.monotone);
    CHECK(b.monotone);
    CHECK(rel(a.energy, b.energy) < 1e-10);
    CHECK(rel(rescaled_energy(f, 0.5, a.density), a.energy) < 1e-12);
  }
  {
    const auto f = Lagrangian::power_sum(2.0, 0.5, 2);
    GammaConfig cfg;
    cfg.dim = 2;
    cfg.cells = 16;
    const auto init = initial_density(cfg, 1.0);
    const auto a = minimize_rescaled(f, 0.5, 1.0, init, opts);
    const auto b = minimize_rescaled_direct(f, 0.5, 1.0, init, opts);
    CHECK(rel(a.energy, b.energy) < 1e-10);
  }
}

TEST_CASE("scale-invariant minimization does not see eps") {
  const auto f = Lagrangian::scale_invariant(1.5, 2);
  GammaConfig cfg;
  cfg.dim = 2;
  cfg.cells = 24;
  const auto init = initial_density(cfg, 1.0);
  const DescentOptions opts{30000, 1e-12};
  const auto ref = minimize_rescaled(f, 1.0, 1.0, init, opts);
  for (double eps : {0.5, 0.1}) {
    const auto r = minimize_rescaled(f, eps, 1.0, init, opts);
    CHECK(rel(r.energy, ref.energy) < 1e-12);
  }
}

TEST_CASE("sweep approaches the radial cost") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  const std::vector<double> schedule{1.0, 0.5, 0.25, 0.125};
  const auto H = CostFunction::power(kH_1, 5.0 / 7.0);
  const auto run = gamma_sweep(f, 1.0, schedule, line_config(2048), &H);
  REQUIRE(run.steps.size() == 4);
  for (const auto& s : run.steps) {
    CHECK(s.monotone);
    CHECK(s.energy >= 0.0);
    CHECK(s.concentration >= 0.0);
    CHECK(s.concentration <= 1.0);
    CHECK(rel(s.energy, kH_1) < 0.05);
  }
  CHECK(run.steps.back().droplets == 1);
  REQUIRE(run.relative_gap.has_value());
  CHECK(std::abs(*run.relative_gap) < 0.05);
  for (const auto& e : liminf_check(run, H)) CHECK(e.holds);

  const std::vector<double> bad{0.5, 1.0};
  CHECK_THROWS_AS(gamma_sweep(f, 1.0, bad, line_config(256)), std::invalid_argument);
}

TEST_CASE("two droplets cost more than one") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  auto cfg = line_config(4096);
  const DescentOptions opts{20000, 1e-8};
  const auto one = minimize_rescaled(f, 1.0, 1.0, initial_density(cfg, 1.0), opts);
  cfg.init = InitPolicy::TwoBump;
  const auto two = minimize_rescaled(f, 1.0, 1.0, initial_density(cfg, 1.0), opts);
  CHECK(two.energy <= 2.0 * cost(0.5) * (1.0 + 1e-3));
  CHECK(std::abs(two.energy / one.energy / std::pow(2.0, 1.0 - 5.0 / 7.0) - 1.0) < 0.05);
  const auto set = extract_bubbles(two.density, {0.5, 0.01});
  CHECK(set.bubbles.size() == 2);
}

TEST_CASE("energy vanishes with the mass") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  const auto cfg = line_config(2048);
  double prev = kInfinity;
  for (double m : {1e-1, 1e-2, 1e-3}) {
    const auto r = minimize_rescaled(f, 0.5, m, initial_density(cfg, m), {20000, 1e-8});
    CHECK(r.energy < prev);
    prev = r.energy;
  }
  CHECK(prev < 0.02);
}

TEST_CASE("spreading families") {
  const std::vector<double> radii{10.0, 100.0, 1000.0};
  const auto sub = vanishing_lower_bound_check(Lagrangian::power_sum(2.0, 0.5, 1), 1.0, radii);
  REQUIRE(sub.entries.size() == 3);
  CHECK(sub.increasing);
  CHECK(sub.consistent);
  CHECK(sub.entries.back().ratio > 10.0);

  const auto lin = vanishing_lower_bound_check(Lagrangian::power_sum(2.0, 1.0, 1), 1.0, radii);
  CHECK(lin.consistent);
  CHECK(std::abs(lin.entries.back().ratio - 1.0) < 0.05);
  for (const auto& e : lin.entries) CHECK(e.ratio >= 1.0);

  CHECK(vanishing_lower_bound_check(Lagrangian::power_sum(2.0, 0.5, 1), 0.0, radii).entries.empty());
}

TEST_CASE("recovery family reproduces the profile energy") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  SolverConfig sc;
  sc.outer_radius = 4.0;
  sc.n = 2000;
  const auto prof = minimize_profile(f, 1.0, sc);
  const std::vector<double> schedule{1.0, 0.5, 0.25};
  const auto rep = recovery_family_check(f, prof.profile, schedule, line_config(4096));
  CHECK(rel(rep.reference, prof.energy) < 1e-12);
  CHECK(rep.max_relative_error < 0.01);
}

TEST_CASE("droplet rescaling identity") {
  std::mt19937_64 rng(31);
  using B = Potential::Builtin;
  for (auto form : {B::Power, B::PowerPlusLinear, B::PowerExp}) {
    for (int dim : {1, 2}) {
      const auto W = Potential::builtin(form, 0.5);
      const auto u = smooth_random(rng, dim, dim == 1 ? 400 : 60);
      for (double eps : {0.5, 0.1, 0.03}) CHECK(droplet_equivalence_check(W, 0.5, eps, u) <= 1e-12);
      CHECK(droplet_equivalence_check(W, 0.5, 1.0, u) == 0.0);
    }
  }
  const auto T = Potential::table({0.5, 1.0, 2.0}, {0.6, 1.0, 1.5}, -0.5);
  CHECK(droplet_equivalence_check(T, -0.5, 0.2, smooth_random(rng, 1, 300)) <= 1e-12);
}

TEST_CASE("lower bound on the rescaled potential") {
  std::vector<double> eps, us;
  for (int k = 0; k < 10; ++k) eps.push_back(std::pow(10.0, -0.4 * k));
  for (int k = 0; k < 1000; ++k) us.push_back(std::pow(10.0, -8.0 + 14.0 * k / 999.0));

  const auto W = Potential::builtin(Potential::Builtin::PowerExp, 0.5);
  const auto rep = lemma_w_bound_check(W, 0.5, 0.9, eps, us);
  CHECK(rep.hypotheses_pass);
  REQUIRE(rep.c_delta.has_value());
  CHECK(*rep.c_delta > 0.0);
  CHECK(rep.samples == 10000);
  CHECK(rep.violations == 0);

  const auto P = Potential::builtin(Potential::Builtin::Power, 0.5);
  const auto pure = lemma_w_bound_check(P, 0.5, 0.5, eps, us);
  CHECK(pure.hypotheses_pass);
  CHECK(*pure.threshold == 0.0);
  CHECK(pure.violations == 0);

  const auto Z = Potential::table({1.0, 2.0, 3.0}, {1.0, 0.0, 2.0}, 0.5);
  const auto bad = lemma_w_bound_check(Z, 0.5, 0.9, eps, us);
  CHECK_FALSE(bad.hypotheses_pass);
  CHECK_FALSE(bad.c_delta.has_value());
  bool hw2 = false;
  for (const auto& h : bad.hypotheses)
    if (h.name == "HW2") hw2 = !h.pass && h.witness.has_value();
  CHECK(hw2);
}

TEST_CASE("initial densities and policies") {
  for (auto p : {InitPolicy::SingleBump, InitPolicy::TwoBump, InitPolicy::Uniform}) {
    CHECK(parse_init_policy(to_string(p)) == p);
    GammaConfig cfg;
    cfg.init = p;
    cfg.cells = 512;
    CHECK(rel(initial_density(cfg, 2.5).mass(), 2.5) < 1e-12);
  }
  CHECK_THROWS(parse_init_policy("three"));
  GammaConfig big;
  big.dim = 2;
  big.cells = 1024;
  CHECK_THROWS(initial_density(big, 1.0));
  big.dim = 1;
  big.cells = 200000;
  CHECK_THROWS(initial_density(big, 1.0));
}

TEST_CASE("concentration fraction") {
  const auto u = testing::grid_1d(-5.0, 0.01, 1001, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
  // both boundary nodes count in full, adding about h/2 to the continuum 0.75
  CHECK(std::abs(concentration_fraction(u, 0.5) - 0.75) < 0.01);
  CHECK(concentration_fraction(u, 10.0) == doctest::Approx(1.0));
}

TEST_CASE("doubling the box barely moves the energy") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  auto small = line_config(2048);
  auto big = line_config(4096);
  big.box = 2.0 * small.box;
  const DescentOptions opts{20000, 1e-8};
  const auto a = minimize_rescaled(f, 0.25, 1.0, initial_density(small, 1.0), opts);
  const auto b = minimize_rescaled(f, 0.25, 1.0, initial_density(big, 1.0), opts);
  CHECK(rel(a.energy, b.energy) < 5e-3);
}
