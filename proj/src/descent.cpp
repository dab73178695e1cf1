#include "masscost/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace masscost {

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::MaxIter: return "max-iter";
    case SolverStatus::Diverged: return "diverged";
  }
  return "?";
}

SolverStatus parse_status(const std::string& s) {
  if (s == "converged") return SolverStatus::Converged;
  if (s == "max-iter") return SolverStatus::MaxIter;
  if (s == "diverged") return SolverStatus::Diverged;
  throw std::invalid_argument("unknown solver status '" + s + "'");
}

std::vector<double> project_mass_cone(std::span<const double> y, const MassConstraint& c) {
  const std::size_t n = y.size();
  if (c.weights.size() != n || c.metric.size() != n || c.fixed.size() != n)
    throw std::invalid_argument("project_mass_cone: size mismatch");
  std::vector<double> u(n, 0.0);

  struct Breakpoint {
    double at;  // tau where the node leaves the support
    std::size_t i;
    double ratio;
  };
  std::vector<Breakpoint> bps;
  bps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (c.fixed[i] || !(y[i] > -std::numeric_limits<double>::infinity())) continue;
    const double ratio = c.weights[i] / c.metric[i];
    if (ratio <= 0.0) {
      u[i] = std::max(0.0, y[i]);
      continue;
    }
    bps.push_back({y[i] / ratio, i, ratio});
  }
  if (c.mass <= 0.0) return u;
  if (bps.empty()) throw std::domain_error("project_mass_cone: no free node can carry mass");

  std::sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) {
    return a.at > b.at || (a.at == b.at && a.i < b.i);
  });
  // Active set = first k breakpoints; mass(tau) = Sy - tau * Sc there.
  double sy = 0.0;
  double sc = 0.0;
  double tau = 0.0;
  std::size_t k = 0;
  for (; k < bps.size(); ++k) {
    const auto& b = bps[k];
    sy += c.weights[b.i] * y[b.i];
    sc += c.weights[b.i] * b.ratio;
    tau = (sy - c.mass) / sc;
    const double next = k + 1 < bps.size() ? bps[k + 1].at : -std::numeric_limits<double>::infinity();
    if (tau >= next) break;
  }
  if (k == bps.size()) k = bps.size() - 1;
  for (std::size_t a = 0; a <= k; ++a) {
    const auto& b = bps[a];
    u[b.i] = std::max(0.0, y[b.i] - tau * b.ratio);
  }
  return u;
}

namespace {

double m_norm(std::span<const double> v, std::span<const double> metric) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += metric[i] * v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace

DescentResult projected_descent(const EnergyFn& energy, const MassConstraint& c,
                                std::vector<double> init, const DescentOptions& opts) {
  const std::size_t n = init.size();
  const auto& metric = c.metric;
  DescentResult res;

  std::vector<double> x = project_mass_cone(init, c);
  std::vector<double> gx(n), gy(n), gz(n), z(n), y(n), x_prev(n), step(n);
  double fx = energy(x, gx);
  if (!std::isfinite(fx)) {
    res.u = std::move(x);
    res.energy = fx;
    res.status = SolverStatus::Diverged;
    return res;
  }
  res.trace.push_back(fx);

  // Gradient step from `from` with gradient `g` at inverse step size L.
  auto gradient_step = [&](std::span<const double> from, std::span<const double> g, double L) {
    for (std::size_t i = 0; i < n; ++i) {
      if (c.fixed[i]) {
        step[i] = 0.0;
        continue;
      }
      step[i] = std::isfinite(g[i]) ? from[i] - g[i] / (L * metric[i])
                                    : (g[i] > 0 ? -std::numeric_limits<double>::infinity() : from[i]);
    }
    return project_mass_cone(step, c);
  };
  // Relative projected-gradient norm at x.
  auto relative_residual = [&](double L) {
    const auto p = gradient_step(x, gx, L);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += metric[i] * (p[i] - x[i]) * (p[i] - x[i]);
    const double unorm = m_norm(x, metric);
    const double scale = unorm > 0.0 ? std::abs(fx) / unorm : 1.0;
    return L * std::sqrt(s) / std::max(scale, std::numeric_limits<double>::min());
  };

  // Initial curvature guess |g|_{M^-1} / |x|_M; it transforms like the true
  // one under rescaling of u, so runs on rescaled variables stay in step.
  double L = 1.0;
  {
    double gg = 0.0, xx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (c.fixed[i] || !std::isfinite(gx[i])) continue;
      gg += gx[i] * gx[i] / metric[i];
      xx += metric[i] * x[i] * x[i];
    }
    if (gg > 0.0 && xx > 0.0 && std::isfinite(gg / xx)) L = std::sqrt(gg / xx);
  }
  double t = 1.0;
  y = x;
  double fy = fx;
  gy = gx;
  res.status = SolverStatus::MaxIter;

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    double fz = 0.0;
    for (;;) {
      z = gradient_step(y, gy, L);
      fz = energy(z, gz);
      double lin = 0.0;
      double quad = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = z[i] - y[i];
        if (d == 0.0 || !std::isfinite(gy[i])) continue;
        lin += gy[i] * d;
        quad += metric[i] * d * d;
      }
      const double model = fy + lin + 0.5 * L * quad;
      if (std::isfinite(fz) && fz <= model + 1e-13 * std::abs(fy)) break;
      L *= 2.0;
      if (L > 1e300) {
        res.status = SolverStatus::Diverged;
        break;
      }
    }
    if (res.status == SolverStatus::Diverged) break;

    if (fz > fx) {
      // Momentum overshoot: restart from the last accepted iterate.
      if (t == 1.0 && y == x) {
        // Plain step failed to decrease within rounding; accept x as final.
        res.status = SolverStatus::Converged;
        break;
      }
      t = 1.0;
      y = x;
      fy = fx;
      gy = gx;
      continue;
    }

    x_prev.swap(x);
    x = z;
    fx = fz;
    gx = gz;
    res.trace.push_back(fx);

    if (relative_residual(L) <= opts.tolerance) {
      res.status = SolverStatus::Converged;
      ++it;
      break;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    double beta = (t - 1.0) / t_next;
    double restart_test = 0.0;
    for (std::size_t i = 0; i < n; ++i) restart_test += (y[i] - x[i]) * (x[i] - x_prev[i]);
    if (restart_test > 0.0) {
      beta = 0.0;
      t = 1.0;
    } else {
      t = t_next;
    }
    if (beta == 0.0) {
      y = x;
      fy = fx;
      gy = gx;
    } else {
      for (std::size_t i = 0; i < n; ++i) step[i] = c.fixed[i] ? 0.0 : x[i] + beta * (x[i] - x_prev[i]);
      y = project_mass_cone(step, c);
      fy = energy(y, gy);
      if (!std::isfinite(fy)) {
        t = 1.0;
        y = x;
        fy = fx;
        gy = gx;
      }
    }
    L *= 0.9;
  }

  res.iterations = it;
  res.residual = relative_residual(L);
  for (std::size_t k = 1; k < res.trace.size(); ++k)
    if (res.trace[k] > res.trace[k - 1]) res.monotone = false;
  res.u = std::move(x);
  res.energy = fx;
  return res;
}

}  // namespace masscost
