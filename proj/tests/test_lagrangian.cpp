#include <doctest.h>

#include <cmath>
#include <random>

#include "masscost/energy.hpp"
#include "masscost/lagrangian.hpp"
#include "support.hpp"

using namespace masscost;
using testing::rel;

namespace {

std::vector<Lagrangian> builtin_kinds() {
  return {
      Lagrangian::power_sum(2.0, 0.5, 1),
      Lagrangian::power_sum(3.0, -0.5, 2),
      Lagrangian::power_sum(1.5, 1.0, 3),
      Lagrangian::scale_invariant(2.0, 3),
      Lagrangian::scale_invariant_perturbed(2.0, 3),
      Lagrangian::droplet(0.5, Potential::builtin(Potential::Builtin::PowerExp, 0.5), 0.1, 1),
      Lagrangian(TabulatedF{{0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}, {0, 1, 4, 1, 2, 5, 2, 3, 6}}, 1),
  };
}

// Tent (1 - |x|)_+ on [-2, 2].
GridDensity tent(double h) {
  const auto n = static_cast<std::size_t>(std::llround(4.0 / h)) + 1;
  return testing::grid_1d(-2.0, h, n, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
}

// Direct transcription of the rescaled power-sum integrand with the 1D grid
// quadrature (average over forward and backward differences).
double power_sum_rescaled_1d(double p, double s, double eps, const GridDensity& u) {
  const double h = u.spacing();
  const std::size_t n = u.nx();
  const double grad_w = std::pow(eps, p + p - 1.0);
  const double pot_w = std::pow(eps, -(1.0 - s));
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = u[i];
    const double up = i + 1 < n ? u[i + 1] : 0.0;
    const double um = i > 0 ? u[i - 1] : 0.0;
    if (c == 0.0 && up == 0.0 && um == 0.0) continue;
    const double gp = std::pow(std::abs(up - c) / h, p), gm = std::pow(std::abs(c - um) / h, p);
    const double pot = c > 0.0 ? std::pow(c, s) : 0.0;
    total += 0.5 * h * grad_w * (gp + gm) + h * pot_w * pot;
  }
  return total;
}

}  // namespace

TEST_CASE("pointwise values") {
  CHECK(Lagrangian::power_sum(2.0, 1.0, 1)(1.0, 1.0) == 2.0);
  const auto si = Lagrangian::scale_invariant(2.0, 3);
  CHECK(scale_invariant_weight_exponent(2.0, 3) == doctest::Approx(-5.0 / 3.0).epsilon(1e-15));
  CHECK(si(1.0, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(si(8.0, 1.0) == doctest::Approx(std::pow(8.0, -5.0 / 3.0)).epsilon(1e-14));
  for (const auto& f : builtin_kinds()) CHECK_MESSAGE(f(0.0, 0.0) == 0.0, f.kind_name());
}

TEST_CASE("non-negativity on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 10.0), X(0.0, 10.0);
  for (const auto& f : builtin_kinds()) {
    const bool table = std::holds_alternative<TabulatedF>(f.kind());
    int bad = 0;
    for (int k = 0; k < 10000; ++k) {
      const double u = table ? U(rng) / 5.0 : U(rng), xi = table ? X(rng) / 5.0 : X(rng);
      if (!(f(u, xi) >= 0.0)) ++bad;
    }
    CHECK_MESSAGE(bad == 0, f.kind_name());
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(Lagrangian::power_sum(1.0, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(Lagrangian::power_sum(2.0, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(Lagrangian::power_sum(2.0, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(Lagrangian::scale_invariant(3.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(Lagrangian::scale_invariant(2.0, 1), std::invalid_argument);
  const auto W = Potential::builtin(Potential::Builtin::Power, 0.5);
  CHECK_THROWS_AS(Lagrangian::droplet(1.0, W, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(Lagrangian::droplet(0.5, W, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Lagrangian(TabulatedF{{0.0, 1.0}, {0.0}, {0.0}}, 1), std::invalid_argument);
}

TEST_CASE("tent energies") {
  const auto u = tent(1e-3);
  CHECK(eval_energy(Lagrangian::power_sum(2.0, 1.0, 1), u) == doctest::Approx(3.0).epsilon(5e-3 / 3.0));
  CHECK(std::abs(eval_energy(Lagrangian::power_sum(2.0, 0.5, 1), u) - 10.0 / 3.0) < 1e-2);
  const auto zero = GridDensity::zeros(1, {0.0, 0.0}, 0.1, {50, 1});
  for (const auto& f : builtin_kinds())
    if (f.dim() == 1) CHECK(eval_energy(f, zero) == 0.0);
}

TEST_CASE("rescaled power sum matches the explicit eps weights") {
  const auto u = tent(1e-2);
  for (double s : {1.0, 0.5, 0.0}) {
    for (double p : {2.0, 3.0}) {
      const auto f = Lagrangian::power_sum(p, s, 1);
      for (double eps : {1.0, 0.3, 0.01}) {
        CHECK(rel(rescaled_energy(f, eps, u), power_sum_rescaled_1d(p, s, eps, u)) < 1e-12);
      }
    }
  }
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  CHECK(rescaled_energy(f, 1.0, u) == eval_energy(f, u));
}

TEST_CASE("scale-invariant energies do not depend on eps") {
  std::mt19937_64 rng(11);
  const auto f = Lagrangian::scale_invariant(2.0, 3);
  for (int k = 0; k < 5; ++k) {
    const auto u = testing::random_profile(3, 5.0, 400, rng);
    const double e = eval_energy(f, u);
    for (double eps : {1.0, 0.1, 0.01}) CHECK(rel(rescaled_energy(f, eps, u), e) < 1e-12);
  }
  const auto g = Lagrangian::scale_invariant(1.5, 2);
  const auto d = testing::grid_2d(-2.0, 0.05, 81, [](double x, double y) { return std::exp(-x * x - 2 * y * y); });
  CHECK(rel(rescaled_energy(g, 0.1, d), eval_energy(g, d)) < 1e-12);
}

TEST_CASE("change of variables for blown-up profiles") {
  std::mt19937_64 rng(5);
  for (int dim : {1, 2, 3}) {
    const auto f = Lagrangian::power_sum(2.0, 0.5, dim);
    const auto v = testing::random_profile(dim, 4.0, 800, rng);
    for (double eps : {0.5, 0.1}) {
      std::vector<double> w(v.values().begin(), v.values().end());
      for (double& x : w) x *= std::pow(eps, -dim);
      const RadialProfile u(dim, 4.0 * eps, std::move(w));
      CHECK(rel(rescaled_energy(f, eps, u), eval_energy(f, v)) < 1e-10);
    }
  }
}

TEST_CASE("energy is additive over separated supports") {
  const auto f = Lagrangian::power_sum(2.0, 0.5, 1);
  auto bump = [](double c) {
    return [c](double x) { return std::max(0.0, 1.0 - (x - c) * (x - c)); };
  };
  const auto u1 = testing::grid_1d(-5.0, 0.01, 1001, bump(-2.0));
  const auto u2 = testing::grid_1d(-5.0, 0.01, 1001, bump(2.0));
  std::vector<double> mx(1001), mn(1001);
  for (std::size_t i = 0; i < 1001; ++i) {
    mx[i] = std::max(u1[i], u2[i]);
    mn[i] = std::min(u1[i], u2[i]);
  }
  const GridDensity umax(1, {-5.0, 0.0}, 0.01, {1001, 1}, mx), umin(1, {-5.0, 0.0}, 0.01, {1001, 1}, mn);
  CHECK(rel(eval_energy(f, umax) + eval_energy(f, umin), eval_energy(f, u1) + eval_energy(f, u2)) < 1e-13);

  const auto g = Lagrangian::power_sum(2.0, 0.5, 2);
  auto disc = [](double cx) {
    return [cx](double x, double y) { return std::max(0.0, 1.0 - (x - cx) * (x - cx) - y * y); };
  };
  const auto a = testing::grid_2d(-4.0, 0.05, 161, disc(-2.0));
  const auto b = testing::grid_2d(-4.0, 0.05, 161, disc(2.0));
  std::vector<double> ab(a.size());
  for (std::size_t k = 0; k < ab.size(); ++k) ab[k] = a[k] + b[k];
  const GridDensity sum(2, a.origin(), a.spacing(), a.shape(), ab);
  CHECK(rel(eval_energy(g, sum), eval_energy(g, a) + eval_energy(g, b)) < 1e-13);
}

TEST_CASE("slope at zero") {
  CHECK(std::isinf(slope_at_zero(Lagrangian::power_sum(2.0, 0.5, 1)).value));
  CHECK(slope_at_zero(Lagrangian::power_sum(2.0, 1.0, 1)).value == 1.0);
  const auto lin = Lagrangian::droplet(0.5, Potential::builtin(Potential::Builtin::LinearPower, 0.5), 1.0, 1);
  const auto est = slope_at_zero(lin);
  CHECK_FALSE(est.analytic);
  CHECK(std::abs(est.value - 1.0) < 1e-2);
}

TEST_CASE("hypothesis sampling") {
  const auto ps = verify_hypotheses(Lagrangian::power_sum(2.0, 0.5, 1));
  for (const char* h : {"H1", "H2", "H3", "H5"}) CHECK_MESSAGE(ps.get(h).status == CheckStatus::Pass, h);

  const auto si = verify_hypotheses(Lagrangian::scale_invariant(2.0, 3));
  CHECK(si.get("H5").status == CheckStatus::Fail);
  REQUIRE(si.get("H5").witness.has_value());
  CHECK(si.get("H5").witness->first > 1.0);

  const auto pert = verify_hypotheses(Lagrangian::scale_invariant_perturbed(2.0, 3));
  CHECK(pert.get("H5").status == CheckStatus::Pass);
  CHECK(pert.get("H6").status == CheckStatus::Fail);
  CHECK(slope_rho_integral(3) == 6.0);
}

TEST_CASE("potential tables") {
  const auto W = Potential::table({1.0, 2.0}, {1.0, 3.0}, 0.5);
  CHECK(W(0.0) == 0.0);
  CHECK(W(0.5) == doctest::Approx(0.5));
  CHECK(W(1.5) == doctest::Approx(2.0));
  CHECK(W(8.0) == doctest::Approx(3.0 * 2.0));
  CHECK_THROWS(Potential::table({1.0, 0.5}, {1.0, 2.0}, 0.5));
  CHECK_THROWS(Potential::table({1.0, 2.0}, {1.0, -2.0}, 0.5));
  const auto P = Potential::builtin(Potential::Builtin::PowerExp, 0.5);
  CHECK(P(4.0) == doctest::Approx(2.0 * (1.0 + std::exp(-4.0))).epsilon(1e-15));
  CHECK(P.derivative(1.0) == doctest::Approx((0.5 * (1 + std::exp(-1.0)) - std::exp(-1.0))).epsilon(1e-12));
}

TEST_CASE("droplet Lagrangian at a new eps") {
  const auto f = Lagrangian::droplet(0.5, Potential::builtin(Potential::Builtin::Power, 0.5), 0.5, 1);
  const auto g = f.at_eps(0.25);
  CHECK(std::get<DropletW>(g.kind()).eps == 0.25);
  // eps^{Ns} W(eps^{-N} u) = u^s for a pure power
  CHECK(g(2.0, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(g(2.0, 3.0) == doctest::Approx(std::sqrt(2.0) + 9.0).epsilon(1e-14));
}
