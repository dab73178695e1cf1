#include "masscost/gamma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "masscost/energy.hpp"
#include "masscost/exponents.hpp"

namespace masscost {

namespace {

std::size_t rows(const GridDensity& g) { return g.dim() == 2 ? g.ny() : 1; }

std::vector<double> scaled_to_mass(const GridDensity& g, double mass) {
  std::vector<double> v(g.values().begin(), g.values().end());
  const double cur = g.mass();
  if (cur > 0.0)
    for (double& x : v) x *= mass / cur;
  return v;
}

MassConstraint uniform_constraint(std::size_t n, double weight, double mass) {
  MassConstraint c;
  c.weights.assign(n, weight);
  c.metric.assign(n, weight);
  c.fixed.assign(n, 0);
  c.mass = mass;
  return c;
}

void check_rescaled_inputs(double eps, double mass, const GridDensity& init) {
  if (!(eps > 0.0)) throw std::invalid_argument("minimize_rescaled: eps must be positive");
  if (!(mass > 0.0)) throw std::invalid_argument("minimize_rescaled: mass must be positive");
  if (init.dim() != 1 && init.dim() != 2) throw std::invalid_argument("minimize_rescaled: dim must be 1 or 2");
  if (!(init.mass() > 0.0)) throw std::invalid_argument("minimize_rescaled: initial density has no mass");
}

GridResult wrap(const GridDensity& like, std::vector<double> values, const DescentResult& d) {
  GridResult r{GridDensity(like.dim(), like.origin(), like.spacing(), like.shape(), std::move(values))};
  r.energy = d.energy;
  r.status = d.status;
  r.iterations = d.iterations;
  r.residual = d.residual;
  r.monotone = d.monotone;
  return r;
}

double interpolate(const GridDensity& g, double x, double y) {
  const auto o = g.origin();
  const double h = g.spacing();
  const double tx = (x - o[0]) / h;
  const double fx = std::floor(tx);
  const auto nx = static_cast<long>(g.nx());
  auto val = [&](long i, long j) {
    if (i < 0 || i >= nx) return 0.0;
    if (g.dim() == 1) return g.at(static_cast<std::size_t>(i));
    if (j < 0 || j >= static_cast<long>(g.ny())) return 0.0;
    return g.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };
  const long i = static_cast<long>(fx);
  const double a = tx - fx;
  if (g.dim() == 1) return (1.0 - a) * val(i, 0) + a * val(i + 1, 0);
  const double ty = (y - o[1]) / h;
  const double fy = std::floor(ty);
  const long j = static_cast<long>(fy);
  const double b = ty - fy;
  return (1.0 - a) * (1.0 - b) * val(i, j) + a * (1.0 - b) * val(i + 1, j) + (1.0 - a) * b * val(i, j + 1) +
         a * b * val(i + 1, j + 1);
}

std::size_t densest(const GridDensity& u) {
  const auto v = u.values();
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Shrinks each droplet about its own center by the factor k, keeping its mass.
GridDensity shrink_droplets(const GridDensity& prev, const std::vector<Bubble>& droplets, double k) {
  std::vector<Bubble> balls = droplets;
  if (balls.empty()) balls.push_back({prev.position(densest(prev)), std::numeric_limits<double>::infinity(), 0.0, 0});
  GridDensity next = GridDensity::zeros(prev.dim(), prev.origin(), prev.spacing(), prev.shape());
  const double amp = std::pow(k, prev.dim());
  for (std::size_t q = 0; q < next.size(); ++q) {
    const auto x = next.position(q);
    double v = 0.0;
    for (const auto& b : balls) {
      const double yx = b.center[0] + (x[0] - b.center[0]) * k;
      const double yy = b.center[1] + (x[1] - b.center[1]) * k;
      if (std::hypot(yx - b.center[0], yy - b.center[1]) > b.radius) continue;
      v += amp * interpolate(prev, yx, yy);
    }
    next[q] = v;
  }
  return next;
}

}  // namespace

GridResult minimize_rescaled(const Lagrangian& f, double eps, double mass, const GridDensity& init,
                             const DescentOptions& opts) {
  check_rescaled_inputs(eps, mass, init);
  const int dim = init.dim();
  const double scale = std::pow(eps, dim);
  const double hv = init.spacing() / eps;
  const std::size_t nx = init.nx(), ny = rows(init);
  std::vector<double> v = scaled_to_mass(init, mass);
  for (double& x : v) x *= scale;
  EnergyFn energy = [&f, dim, hv, nx, ny](std::span<const double> w, std::span<double> g) {
    return grid_energy(f, dim, hv, nx, ny, w, g);
  };
  const auto c = uniform_constraint(v.size(), std::pow(hv, dim), mass);
  auto d = projected_descent(energy, c, std::move(v), opts);
  std::vector<double> u = d.u;
  for (double& x : u) x /= scale;
  return wrap(init, std::move(u), d);
}

GridResult minimize_rescaled_direct(const Lagrangian& f, double eps, double mass, const GridDensity& init,
                                    const DescentOptions& opts) {
  check_rescaled_inputs(eps, mass, init);
  const int dim = init.dim();
  const double h = init.spacing();
  const std::size_t nx = init.nx(), ny = rows(init);
  const auto sc = EnergyScaling::rescaled(eps, dim);
  EnergyFn energy = [&f, dim, h, nx, ny, sc](std::span<const double> w, std::span<double> g) {
    return grid_energy(f, dim, h, nx, ny, w, g, sc);
  };
  const auto c = uniform_constraint(init.size(), init.cell_volume(), mass);
  auto d = projected_descent(energy, c, scaled_to_mass(init, mass), opts);
  std::vector<double> u = d.u;
  return wrap(init, std::move(u), d);
}

std::string to_string(InitPolicy p) {
  switch (p) {
    case InitPolicy::SingleBump: return "single";
    case InitPolicy::TwoBump: return "two-bump";
    case InitPolicy::Uniform: return "uniform";
  }
  return "?";
}

InitPolicy parse_init_policy(const std::string& s) {
  if (s == "single") return InitPolicy::SingleBump;
  if (s == "two-bump") return InitPolicy::TwoBump;
  if (s == "uniform") return InitPolicy::Uniform;
  throw std::invalid_argument("unknown init policy '" + s + "' (single, two-bump, uniform)");
}

GridDensity initial_density(const GammaConfig& cfg, double mass) {
  if (cfg.dim != 1 && cfg.dim != 2) throw std::invalid_argument("gamma: dim must be 1 or 2");
  if (!(cfg.box > 0.0)) throw std::invalid_argument("gamma: box must be positive");
  const std::size_t cap = cfg.dim == 1 ? 100000 : 512;
  if (cfg.cells < 8 || cfg.cells > cap) throw std::invalid_argument("gamma: cells out of range");
  const double h = cfg.box / static_cast<double>(cfg.cells);
  const double o = -0.5 * cfg.box + 0.5 * h;
  const std::array<std::size_t, 2> shape{cfg.cells, cfg.dim == 2 ? cfg.cells : 1};
  auto g = GridDensity::zeros(cfg.dim, {o, cfg.dim == 2 ? o : 0.0}, h, shape);
  auto bump = [&](const std::array<double, 2>& x, double cx, double sigma) {
    double d2 = (x[0] - cx) * (x[0] - cx);
    if (cfg.dim == 2) d2 += x[1] * x[1];
    return std::exp(-0.5 * d2 / (sigma * sigma));
  };
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.position(k);
    switch (cfg.init) {
      case InitPolicy::SingleBump: g[k] = bump(x, 0.0, cfg.box / 8.0); break;
      case InitPolicy::TwoBump:
        g[k] = bump(x, -cfg.box / 4.0, cfg.box / 10.0) + bump(x, cfg.box / 4.0, cfg.box / 10.0);
        break;
      case InitPolicy::Uniform: g[k] = 1.0; break;
    }
  }
  const double cur = g.mass();
  for (std::size_t k = 0; k < g.size(); ++k) g[k] *= mass / cur;
  return g;
}

double concentration_fraction(const GridDensity& u, double radius) {
  const double total = u.mass();
  if (!(total > 0.0)) return 0.0;
  const auto c = u.position(densest(u));
  double inside = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const auto x = u.position(k);
    if (std::hypot(x[0] - c[0], x[1] - c[1]) <= radius * (1.0 + 1e-12)) inside += u[k];
  }
  return std::min(1.0, inside * u.cell_volume() / total);
}

bool GammaRunResult::all_converged() const {
  return std::all_of(steps.begin(), steps.end(),
                     [](const GammaStep& s) { return s.status == SolverStatus::Converged; });
}

GammaRunResult gamma_sweep(const Lagrangian& f, double mass, std::span<const double> schedule,
                           const GammaConfig& cfg, const CostFunction* H) {
  if (!(mass > 0.0)) throw std::invalid_argument("gamma_sweep: mass must be positive");
  if (schedule.empty()) throw std::invalid_argument("gamma_sweep: empty schedule");
  for (std::size_t j = 0; j < schedule.size(); ++j)
    if (!(schedule[j] > 0.0) || (j > 0 && !(schedule[j] < schedule[j - 1])))
      throw std::invalid_argument("gamma_sweep: schedule must be positive and strictly decreasing");
  if (f.dim() != cfg.dim) throw std::invalid_argument("gamma_sweep: dimension mismatch");

  GammaRunResult run;
  run.lagrangian = f.kind_name();
  run.mass = mass;
  const GridDensity cold = initial_density(cfg, mass);
  std::vector<Bubble> prev_droplets;
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    const double eps = schedule[j];
    GridDensity init = cold;
    if (cfg.warm_start && j > 0)
      init = shrink_droplets(run.steps.back().snapshot, prev_droplets, schedule[j - 1] / eps);
    const Lagrangian fe = f.at_eps(eps);
    auto res = minimize_rescaled(fe, eps, mass, init, cfg.descent);

    const double r = std::max(cfg.concentration_factor * eps, res.density.spacing());
    BubbleParams bp{r, cfg.droplet_floor * mass, 64, std::nullopt};
    const auto set = extract_bubbles(res.density, bp);
    GammaStep step{eps, res.energy, res.status, res.iterations, res.monotone,
                   concentration_fraction(res.density, cfg.concentration_factor * eps),
                   set.bubbles.size(), {}, std::move(res.density)};
    for (const auto& b : set.bubbles) step.droplet_masses.push_back(b.mass);
    prev_droplets = set.bubbles;
    run.steps.push_back(std::move(step));
  }
  if (H) {
    run.prediction = (*H)(mass);
    if (*run.prediction > 0.0) run.relative_gap = (run.steps.back().energy - *run.prediction) / *run.prediction;
  }
  return run;
}

RecoveryReport recovery_family_check(const Lagrangian& f, const RadialProfile& profile,
                                     std::span<const double> schedule, const GammaConfig& cfg) {
  if (profile.dim() != cfg.dim || f.dim() != cfg.dim)
    throw std::invalid_argument("recovery_family_check: dimension mismatch");
  RecoveryReport rep{eval_energy(f, profile), {}, 0.0};
  GammaConfig grid_cfg = cfg;
  grid_cfg.init = InitPolicy::Uniform;
  const GridDensity base = initial_density(grid_cfg, 1.0);
  for (double eps : schedule) {
    if (!(eps > 0.0)) throw std::invalid_argument("recovery_family_check: eps must be positive");
    GridDensity u = GridDensity::zeros(base.dim(), base.origin(), base.spacing(), base.shape());
    const double amp = std::pow(eps, -cfg.dim);
    for (std::size_t k = 0; k < u.size(); ++k) {
      const auto x = u.position(k);
      u[k] = amp * profile.interpolate(std::hypot(x[0], x[1]) / eps);
    }
    const double e = rescaled_energy(f.at_eps(eps), eps, u);
    const double err = std::abs(e - rep.reference) / rep.reference;
    rep.entries.push_back({eps, e, err});
    rep.max_relative_error = std::max(rep.max_relative_error, err);
  }
  return rep;
}

std::vector<LiminfEntry> liminf_check(const GammaRunResult& run, const CostFunction& H, double slack) {
  std::vector<LiminfEntry> out;
  for (const auto& s : run.steps) {
    double bound = 0.0;
    for (double m : s.droplet_masses) bound += H(m);
    out.push_back({s.eps, s.energy, bound, s.energy >= (1.0 - slack) * bound});
  }
  return out;
}

VanishingReport vanishing_lower_bound_check(const Lagrangian& f, double mass, std::span<const double> radii,
                                            std::size_t cells, double tol) {
  VanishingReport rep;
  rep.slope = slope_at_zero(f);
  if (mass == 0.0 || radii.empty()) return rep;
  if (!(mass > 0.0)) throw std::invalid_argument("vanishing_lower_bound_check: mass must be positive");
  for (double R : radii) {
    if (!(R > 0.0)) throw std::invalid_argument("vanishing_lower_bound_check: radii must be positive");
    const double w = R / 20.0;
    const double outer = 1.2 * R;
    std::vector<double> v(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
      const double r = outer * static_cast<double>(i) / static_cast<double>(cells);
      v[i] = std::clamp((R + w - r) / (2.0 * w), 0.0, 1.0);
    }
    v[cells] = 0.0;
    RadialProfile base(f.dim(), outer, v);
    const double scale = mass / base.mass();
    for (double& x : v) x *= scale;
    RadialProfile u(f.dim(), outer, std::move(v));
    rep.entries.push_back({R, eval_energy(f, u) / mass});
  }
  rep.increasing = true;
  for (std::size_t j = 1; j < rep.entries.size(); ++j)
    if (!(rep.entries[j].ratio > rep.entries[j - 1].ratio)) rep.increasing = false;
  if (std::isinf(rep.slope.value)) {
    rep.consistent = rep.increasing;
  } else {
    const double slope = rep.slope.value;
    rep.consistent = std::abs(rep.entries.back().ratio - slope) <= tol * std::max(slope, 1e-300);
    for (const auto& e : rep.entries)
      if (e.ratio < slope * (1.0 - tol)) rep.consistent = false;
  }
  return rep;
}

double droplet_equivalence_check(const Potential& W, double s, double eps, const GridDensity& u) {
  const int dim = u.dim();
  const auto ex = droplet_exponents(s, dim);
  const double ebar = std::pow(eps, ex.epsbar_exponent);
  const Lagrangian unit(DropletW{s, W, 1.0}, dim);
  const double literal = scaled_energy(unit, u, EnergyScaling{1.0, std::sqrt(ebar), std::pow(ebar, -ex.rho)});
  const double rescaled = rescaled_energy(Lagrangian(DropletW{s, W, eps}, dim), eps, u);
  if (literal == rescaled) return 0.0;
  return std::abs(literal - rescaled) / std::abs(rescaled);
}

namespace {

std::vector<double> potential_grid(const Potential& W, double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  for (double t : W.table_u())
    if (t > 0.0) g.push_back(t);
  std::sort(g.begin(), g.end());
  return g;
}

double spow(double u, double s) { return u > 0.0 ? std::pow(u, s) : 0.0; }

}  // namespace

std::vector<PotentialCheck> verify_potential(const Potential& W, double s) {
  std::vector<PotentialCheck> out;
  const auto grid = potential_grid(W, 1e-10, 1e8, 2001);
  char buf[200];

  {
    PotentialCheck c{"HW1", true, "W(u) <= liminf of nearby values on the sample", std::nullopt};
    for (double u : grid) {
      const double w = W(u);
      const double near = std::min(W(u * (1.0 - 1e-9)), W(u * (1.0 + 1e-9)));
      if (w > near + 1e-9 * std::max(1.0, std::abs(w))) {
        c.pass = false;
        c.witness = u;
        std::snprintf(buf, sizeof buf, "W jumps down next to u=%g", u);
        c.detail = buf;
        break;
      }
    }
    out.push_back(c);
  }
  {
    PotentialCheck c{"HW2", true, "W(0) = 0 and W > 0 on the sample", std::nullopt};
    if (W(0.0) != 0.0) {
      c.pass = false;
      c.witness = 0.0;
      c.detail = "W(0) != 0";
    } else {
      for (double u : grid)
        if (!(W(u) > 0.0)) {
          c.pass = false;
          c.witness = u;
          std::snprintf(buf, sizeof buf, "W vanishes at u=%g", u);
          c.detail = buf;
          break;
        }
    }
    out.push_back(c);
  }
  const double r6 = W(1e6) / std::pow(1e6, s);
  const double r7 = W(1e7) / std::pow(1e7, s);
  const double r8 = W(1e8) / std::pow(1e8, s);
  {
    PotentialCheck c{"HW3", true, "", std::nullopt};
    c.pass = std::abs(r8 - 1.0) < 1e-2 && std::abs(r8 - 1.0) <= std::abs(r6 - 1.0) + 1e-12;
    std::snprintf(buf, sizeof buf, "W/u^s = %.6g, %.6g, %.6g at u = 1e6, 1e7, 1e8", r6, r7, r8);
    c.detail = buf;
    if (!c.pass) c.witness = 1e8;
    out.push_back(c);
  }
  {
    double sup = 0.0, at = 0.0;
    for (double u : grid) {
      const double q = W(u) / std::pow(u, s);
      if (!(q <= sup)) {
        sup = q;
        at = u;
      }
    }
    PotentialCheck c{"HW4", std::isfinite(sup) && r8 <= 1.01 * r7, "", std::nullopt};
    std::snprintf(buf, sizeof buf, "sup W/u^s = %.6g at u=%g%s", sup, at,
                  r8 > 1.01 * r7 ? " and still growing" : "");
    c.detail = buf;
    if (!c.pass) c.witness = at;
    out.push_back(c);
  }
  {
    double low = kInfinity, mid = kInfinity, at = 0.0;
    for (double u : grid) {
      if (u > 1e-4) break;
      const double q = W(u) / u;
      if (u <= 1e-8) {
        if (q < low) {
          low = q;
          at = u;
        }
      } else {
        mid = std::min(mid, q);
      }
    }
    PotentialCheck c{"HW5", low > 0.0 && low >= 0.5 * mid, "", std::nullopt};
    std::snprintf(buf, sizeof buf, "min W/u = %.6g on [1e-10,1e-8], %.6g on (1e-8,1e-4]", low, mid);
    c.detail = buf;
    if (!c.pass) c.witness = at;
    out.push_back(c);
  }
  return out;
}

LemmaWReport lemma_w_bound_check(const Potential& W, double s, double delta, std::span<const double> eps,
                                 std::span<const double> u, int dim) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("lemma_w_bound_check: delta must lie in (0,1)");
  if (!(s < 1.0)) throw std::invalid_argument("lemma_w_bound_check: s must be < 1");
  LemmaWReport rep;
  rep.hypotheses = verify_potential(W, s);
  rep.hypotheses_pass = std::all_of(rep.hypotheses.begin(), rep.hypotheses.end(),
                                    [](const PotentialCheck& c) { return c.pass; });
  if (!rep.hypotheses_pass) return rep;

  const auto grid = potential_grid(W, 1e-12, 1e8, 20001);
  std::size_t k = grid.size();
  while (k > 0 && delta * std::pow(grid[k - 1], s) <= W(grid[k - 1])) --k;
  const double M = k == 0 ? 0.0 : grid[std::min(k, grid.size() - 1)];
  const double upto = k == 0 ? 1.0 : M;
  double c = kInfinity;
  for (double t : grid) {
    if (t > upto) break;
    c = std::min(c, W(t) / t);
  }
  // Safety margin for values between grid points.
  c *= 1.0 - 1e-3;
  rep.threshold = M;
  rep.c_delta = c;

  const double n = static_cast<double>(dim);
  double worst = 0.0;
  for (double e : eps) {
    if (!(e > 0.0)) throw std::invalid_argument("lemma_w_bound_check: eps must be positive");
    const double lin = c * std::pow(e, -n * (1.0 - s));
    const double pre = std::pow(e, n * s);
    const double inv = std::pow(e, -n);
    for (double x : u) {
      if (x < 0.0) throw std::invalid_argument("lemma_w_bound_check: u samples must be non-negative");
      ++rep.samples;
      if (x == 0.0) continue;
      const double lhs = delta * std::min(spow(x, s), lin * x);
      const double rhs = pre * W(inv * x);
      if (lhs > rhs * (1.0 + 1e-12)) {
        ++rep.violations;
        const double excess = lhs / rhs;
        if (excess > worst) {
          worst = excess;
          rep.worst = std::make_pair(e, x);
        }
      }
    }
  }
  return rep;
}

}  // namespace masscost
