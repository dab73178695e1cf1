#include "masscost/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <stdexcept>

#include "masscost/energy.hpp"

namespace masscost {

std::uint64_t derive_seed(std::uint64_t global, std::uint64_t index) {
  // splitmix64 of the pair
  std::uint64_t z = global + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct RadialSetup {
  int dim;
  double R;
  std::size_t n;
  double h;
  MassConstraint constraint;
};

RadialSetup make_setup(int dim, double R, std::size_t n, double mass) {
  RadialSetup s{dim, R, n, R / static_cast<double>(n), {}};
  const auto w = RadialProfile::zeros(dim, R, n).mass_weights();
  s.constraint.weights = w;
  s.constraint.metric = w;
  if (dim >= 2) {
    // Node 0 carries no trapezoid mass; give it the volume of B_{h/2}.
    s.constraint.metric[0] = sphere_area(dim) * std::pow(0.5 * s.h, dim) / dim;
  }
  s.constraint.fixed.assign(n + 1, 0);
  s.constraint.fixed[n] = 1;
  s.constraint.mass = mass;
  return s;
}

std::vector<double> scale_to_mass(std::vector<double> u, const RadialSetup& s) {
  u.back() = 0.0;
  const double cur = std::inner_product(u.begin(), u.end(), s.constraint.weights.begin(), 0.0);
  if (cur > 0.0)
    for (double& v : u) v *= s.constraint.mass / cur;
  return u;
}

std::vector<double> gaussian_init(const RadialSetup& s, double sigma) {
  std::vector<double> u(s.n + 1);
  for (std::size_t i = 0; i <= s.n; ++i) {
    const double r = s.h * static_cast<double>(i);
    u[i] = std::exp(-0.5 * r * r / (sigma * sigma));
  }
  return scale_to_mass(std::move(u), s);
}

std::vector<double> compacton_init(const RadialSetup& s, double radius, double gamma) {
  std::vector<double> u(s.n + 1);
  for (std::size_t i = 0; i <= s.n; ++i) {
    const double r = s.h * static_cast<double>(i);
    u[i] = r < radius ? std::pow(1.0 - r / radius, gamma) : 0.0;
  }
  return scale_to_mass(std::move(u), s);
}

std::vector<double> random_bump_init(const RadialSetup& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(0.0, s.R / 3.0);
  std::uniform_real_distribution<double> width(s.R / 20.0, s.R / 5.0);
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  std::vector<double> u(s.n + 1, 0.0);
  const double base = s.R / 5.0;
  for (std::size_t i = 0; i <= s.n; ++i) {
    const double r = s.h * static_cast<double>(i);
    u[i] = 0.05 * std::exp(-0.5 * r * r / (base * base));
  }
  for (int b = 0; b < 3; ++b) {
    const double c = center(rng);
    const double w = width(rng);
    const double a = amp(rng);
    for (std::size_t i = 0; i <= s.n; ++i) {
      const double r = s.h * static_cast<double>(i);
      u[i] += a * std::exp(-0.5 * (r - c) * (r - c) / (w * w));
    }
  }
  return scale_to_mass(std::move(u), s);
}

// Exponent of the compacton (1 - r/R0)_+^gamma: finite energy needs
// (gamma - 1) p > -1, and gamma s > -1 when s < 0.
double compacton_exponent(const Lagrangian& f) {
  const double p = f.gradient_exponent();
  double s = 1.0;
  if (const auto* k = std::get_if<PowerSum>(&f.kind())) s = k->s;
  if (const auto* k = std::get_if<DropletW>(&f.kind())) s = k->s;
  if (s < 0.0) return 0.5 * ((1.0 - 1.0 / p) + (-1.0 / s));
  return 2.0;
}

std::size_t support_end(std::span<const double> u) {
  std::size_t last = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] > 0.0) last = i;
  return last;
}

ProfileResult run_descent(const Lagrangian& f, const RadialSetup& s, std::vector<double> init,
                          const SolverConfig& cfg, int restart_index) {
  const int dim = s.dim;
  const double h = s.h;
  EnergyFn energy = [&f, dim, h](std::span<const double> u, std::span<double> g) {
    return radial_energy(f, dim, h, u, g);
  };
  DescentOptions opts{cfg.max_iterations, cfg.tolerance};
  auto d = projected_descent(energy, s.constraint, std::move(init), opts);
  d.u.back() = 0.0;
  ProfileResult r{RadialProfile(dim, s.R, std::move(d.u))};
  r.energy = d.energy;
  r.status = d.status;
  r.iterations = d.iterations;
  r.residual = d.residual;
  r.monotone = d.monotone;
  r.restart_index = restart_index;
  return r;
}

bool better(const ProfileResult& a, const ProfileResult& b) {
  if (a.status == SolverStatus::Diverged) return false;
  if (b.status == SolverStatus::Diverged) return true;
  const double tie = 1e-10 * std::max(std::abs(a.energy), std::abs(b.energy));
  if (a.energy < b.energy - tie) return true;
  if (a.energy > b.energy + tie) return false;
  return support_end(a.profile.values()) < support_end(b.profile.values());
}

// Golden-section search of a unimodal objective over [lo, hi].
template <class Eval>
ProfileResult golden_scan(double lo, double hi, double width, Eval&& at) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - phi * (hi - lo);
  double b = lo + phi * (hi - lo);
  auto ra = at(a);
  auto rb = at(b);
  for (int it = 0; it < 40 && hi - lo > width; ++it) {
    if (better(ra, rb)) {
      hi = b;
      b = a;
      rb = std::move(ra);
      a = hi - phi * (hi - lo);
      ra = at(a);
    } else {
      lo = a;
      a = b;
      ra = std::move(rb);
      b = lo + phi * (hi - lo);
      rb = at(b);
    }
  }
  return better(ra, rb) ? std::move(ra) : std::move(rb);
}

double support_radius(const ProfileResult& r) {
  return r.profile.radius(std::min(support_end(r.profile.values()) + 1, r.profile.intervals()));
}

// Descent cannot move the support edge when the barrier is active, so the
// support radius itself is the search variable. A coarse scan locates it,
// then a narrow bracket on the working grid is refined from the dilated
// coarse optimum.
ProfileResult frozen_support_scan(const Lagrangian& f, double mass, double R, const SolverConfig& cfg) {
  const double gamma = compacton_exponent(f);
  const std::size_t nc = std::min(cfg.n, std::max<std::size_t>(256, cfg.n / 8));
  const auto sc = make_setup(f.dim(), R, nc, mass);
  auto coarse = golden_scan(std::log(std::max(R / 200.0, 4.0 * sc.h)), std::log(0.9 * R), 1e-2,
                            [&](double lr) {
                              return run_descent(f, sc, compacton_init(sc, std::exp(lr), gamma), cfg, 0);
                            });
  if (nc >= cfg.n) return coarse;

  const auto s = make_setup(f.dim(), R, cfg.n, mass);
  const double rc = support_radius(coarse);
  auto at = [&](double lr) {
    const double k = rc / std::exp(lr);
    std::vector<double> u(s.n + 1);
    for (std::size_t i = 0; i <= s.n; ++i) u[i] = coarse.profile.interpolate(k * s.h * static_cast<double>(i));
    return run_descent(f, s, scale_to_mass(std::move(u), s), cfg, 0);
  };
  const double lo = std::log(std::max(rc - 3.0 * sc.h, 2.0 * s.h));
  const double hi = std::log(std::min(rc + 3.0 * sc.h, 0.95 * R));
  return golden_scan(lo, hi, 1e-3, at);
}

ProfileResult solve_at_radius(const Lagrangian& f, double mass, double R, const SolverConfig& cfg) {
  if (f.support_is_frozen()) return frozen_support_scan(f, mass, R, cfg);
  const auto s = make_setup(f.dim(), R, cfg.n, mass);
  std::vector<std::vector<double>> inits;
  inits.push_back(gaussian_init(s, R / 6.0));
  inits.push_back(compacton_init(s, R / 2.0, compacton_exponent(f)));
  for (int k = 2; k < std::max(cfg.restarts, 1); ++k)
    inits.push_back(random_bump_init(s, derive_seed(cfg.seed, static_cast<std::uint64_t>(k))));
  inits.resize(static_cast<std::size_t>(std::max(cfg.restarts, 1)));

  std::optional<ProfileResult> best;
  for (std::size_t k = 0; k < inits.size(); ++k) {
    auto r = run_descent(f, s, std::move(inits[k]), cfg, static_cast<int>(k));
    if (!best || better(r, *best)) best = std::move(r);
  }
  return std::move(*best);
}

}  // namespace

ProfileResult minimize_profile(const Lagrangian& f, double mass, const SolverConfig& cfg) {
  if (!(mass >= 0.0) || !std::isfinite(mass))
    throw std::invalid_argument("minimize_profile: mass must be non-negative");
  if (cfg.n < 16) throw std::invalid_argument("minimize_profile: grid size must be >= 16");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("minimize_profile: tolerance must be positive");
  double R = cfg.outer_radius.value_or(cfg.initial_radius);
  if (!(R > 0.0)) throw std::invalid_argument("minimize_profile: outer radius must be positive");
  if (mass == 0.0) {
    return ProfileResult{RadialProfile::zeros(f.dim(), R, cfg.n)};
  }

  for (int doubling = 0;; ++doubling) {
    auto r = solve_at_radius(f, mass, R, cfg);
    if (cfg.outer_radius) return r;
    const auto u = r.profile.values();
    const double peak = *std::max_element(u.begin(), u.end());
    if (u[u.size() - 2] < 1e-8 * peak) return r;
    if (doubling >= cfg.max_doublings) {
      r.truncation_active = true;
      return r;
    }
    R *= 2.0;
  }
}

ProfileResult minimize_profile_from(const Lagrangian& f, double mass, const RadialProfile& init,
                                    const SolverConfig& cfg) {
  if (!(mass > 0.0)) throw std::invalid_argument("minimize_profile_from: mass must be positive");
  const auto s = make_setup(f.dim(), init.outer_radius(), init.intervals(), mass);
  std::vector<double> u(init.values().begin(), init.values().end());
  return run_descent(f, s, scale_to_mass(std::move(u), s), cfg, 0);
}

PowerFit fit_power_law(std::span<const std::pair<double, double>> samples) {
  std::vector<double> x, y;
  std::size_t excluded = 0;
  for (const auto& [m, H] : samples) {
    if (m > 0.0 && H > 0.0 && std::isfinite(m) && std::isfinite(H)) {
      x.push_back(std::log(m));
      y.push_back(std::log(H));
    } else {
      ++excluded;
    }
  }
  if (x.size() < 3) throw std::invalid_argument("fit_power_law: need at least three positive samples");
  const double k = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_power_law: masses must not all coincide");
  const double alpha = sxy / sxx;
  const double intercept = my - alpha * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (intercept + alpha * x[i]);
    ss_res += e * e;
  }
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {alpha, std::exp(intercept), r2, x.size(), excluded};
}

CostCurve cost_curve(const Lagrangian& f, std::span<const double> masses, const SolverConfig& cfg,
                     unsigned workers) {
  for (std::size_t j = 0; j < masses.size(); ++j) {
    if (!(masses[j] > 0.0)) throw std::invalid_argument("cost_curve: masses must be positive");
    if (j > 0 && !(masses[j] > masses[j - 1]))
      throw std::invalid_argument("cost_curve: masses must be strictly increasing");
  }
  CostCurve curve;
  curve.lagrangian = f.kind_name();
  curve.dim = f.dim();

  auto solve = [&](std::size_t j) {
    SolverConfig local = cfg;
    local.seed = derive_seed(cfg.seed, j);
    return minimize_profile(f, masses[j], local);
  };
  std::vector<std::optional<ProfileResult>> results(masses.size());
  workers = std::max(1u, workers);
  for (std::size_t start = 0; start < masses.size(); start += workers) {
    std::vector<std::future<ProfileResult>> batch;
    const std::size_t end = std::min(masses.size(), start + workers);
    for (std::size_t j = start; j < end; ++j)
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, solve, j));
    for (std::size_t j = start; j < end; ++j) results[j] = batch[j - start].get();
  }

  std::vector<std::pair<double, double>> converged;
  for (std::size_t j = 0; j < masses.size(); ++j) {
    curve.samples.push_back({masses[j], results[j]->energy, results[j]->status});
    curve.profiles.push_back(results[j]->profile);
    if (results[j]->status == SolverStatus::Converged) converged.emplace_back(masses[j], results[j]->energy);
  }
  if (converged.size() < 3) {
    curve.fit_note = "insufficient converged samples for a power-law fit";
  } else {
    try {
      curve.fit = fit_power_law(converged);
    } catch (const std::invalid_argument& e) {
      curve.fit_note = e.what();
    }
  }
  return curve;
}

SlopeProfile slope_construction_profile(double eps, int dim, const Lagrangian* f, std::size_t n,
                                        double outer_radius) {
  if (dim < 2) throw std::invalid_argument("slope_construction_profile: requires N >= 2");
  if (!(eps > 0.0)) throw std::invalid_argument("slope_construction_profile: eps must be positive");
  if (n < 16) throw std::invalid_argument("slope_construction_profile: grid too coarse");
  std::vector<double> u(n + 1);
  const double h = outer_radius / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = eps * std::exp(-h * static_cast<double>(i));
  u[n] = 0.0;
  RadialProfile profile(dim, outer_radius, std::move(u));
  SlopeProfile out{profile, eps, profile.mass(),
                   sphere_area(dim) * eps * std::tgamma(static_cast<double>(dim)), std::nullopt};
  if (f) {
    if (f->dim() != dim) throw std::invalid_argument("slope_construction_profile: dimension mismatch");
    out.energy_per_mass = eval_energy(*f, out.profile) / out.mass;
  }
  return out;
}

}  // namespace masscost
