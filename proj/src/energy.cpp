#include "masscost/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace masscost {

EnergyScaling EnergyScaling::rescaled(double eps, int dim) {
  if (!(eps > 0.0)) throw std::invalid_argument("rescaled energy: eps must be positive");
  const double n = static_cast<double>(dim);
  return {std::pow(eps, n), std::pow(eps, n + 1.0), std::pow(eps, -n)};
}

namespace {

double zero_threshold(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, v);
  return kZeroThreshold * m;
}

double radial_weight(double area, int dim, double r) {
  switch (dim) {
    case 1: return area;
    case 2: return area * r;
    case 3: return area * r * r;
    default: return area * std::pow(r, dim - 1);
  }
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double radial_energy(const Lagrangian& f, int dim, double h, std::span<const double> u,
                     std::span<double> grad, const EnergyScaling& sc) {
  const std::size_t n = u.size() - 1;
  const double thr = zero_threshold(u);
  const double area = sphere_area(dim);
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
  auto eff = [&](std::size_t k) { return u[k] < thr ? 0.0 : u[k]; };

  const double c = sc.weight_scale * 0.5 * h;
  double total = 0.0;
  double a_lo = radial_weight(area, dim, 0.0);
  double u_lo = eff(0);
  for (std::size_t k = 0; k < n; ++k) {
    const double a_hi = radial_weight(area, dim, h * static_cast<double>(k + 1));
    const double u_hi = eff(k + 1);
    const double d = sc.gradient_scale * (u_hi - u_lo) / h;
    const double r = std::abs(d);
    const auto p_lo = f.partials(sc.value_scale * u_lo, r);
    const auto p_hi = f.partials(sc.value_scale * u_hi, r);
    const bool masked = u_lo == 0.0 && u_hi == 0.0;
    if (!masked) {
      if (a_lo > 0.0) total += c * a_lo * p_lo.f;
      total += c * a_hi * p_hi.f;
    }
    if (want_grad) {
      if (a_lo > 0.0) grad[k] += c * a_lo * p_lo.df_du * sc.value_scale;
      grad[k + 1] += c * a_hi * p_hi.df_du * sc.value_scale;
      if (r > 0.0) {
        const double slope = c * ((a_lo > 0.0 ? a_lo * p_lo.df_dxi : 0.0) + a_hi * p_hi.df_dxi) *
                             sign(d) * sc.gradient_scale / h;
        grad[k + 1] += slope;
        grad[k] -= slope;
      }
    }
    a_lo = a_hi;
    u_lo = u_hi;
  }
  return total;
}

double grid_energy(const Lagrangian& f, int dim, double h, std::size_t nx, std::size_t ny,
                   std::span<const double> u, std::span<double> grad, const EnergyScaling& sc) {
  const double thr = zero_threshold(u);
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
  auto eff = [&](std::size_t k) { return u[k] < thr ? 0.0 : u[k]; };
  const double vs = sc.value_scale;
  const double gs = sc.gradient_scale;
  double total = 0.0;

  if (dim == 1) {
    const double c = sc.weight_scale * h * 0.5;
    for (std::size_t i = 0; i < nx; ++i) {
      const double uc = eff(i);
      const double up = i + 1 < nx ? eff(i + 1) : 0.0;
      const double um = i > 0 ? eff(i - 1) : 0.0;
      const double dp = gs * (up - uc) / h;
      const double dm = gs * (uc - um) / h;
      const bool masked = uc == 0.0 && up == 0.0 && um == 0.0;
      const auto pp = f.partials(vs * uc, std::abs(dp));
      const auto pm = f.partials(vs * uc, std::abs(dm));
      if (!masked) total += c * (pp.f + pm.f);
      if (want_grad) {
        grad[i] += c * (pp.df_du + pm.df_du) * vs;
        if (dp != 0.0) {
          const double s = c * pp.df_dxi * sign(dp) * gs / h;
          if (i + 1 < nx) grad[i + 1] += s;
          grad[i] -= s;
        }
        if (dm != 0.0) {
          const double s = c * pm.df_dxi * sign(dm) * gs / h;
          grad[i] += s;
          if (i > 0) grad[i - 1] -= s;
        }
      }
    }
    return total;
  }

  const double c = sc.weight_scale * h * h * 0.25;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = j * nx + i;
      const double uc = eff(k);
      const double xp = i + 1 < nx ? eff(k + 1) : 0.0;
      const double xm = i > 0 ? eff(k - 1) : 0.0;
      const double yp = j + 1 < ny ? eff(k + nx) : 0.0;
      const double ym = j > 0 ? eff(k - nx) : 0.0;
      const bool masked = uc == 0.0 && xp == 0.0 && xm == 0.0 && yp == 0.0 && ym == 0.0;
      const double dx[2] = {gs * (xp - uc) / h, gs * (uc - xm) / h};
      const double dy[2] = {gs * (yp - uc) / h, gs * (uc - ym) / h};
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double r = std::hypot(dx[a], dy[b]);
          const auto p = f.partials(vs * uc, r);
          if (!masked) total += c * p.f;
          if (!want_grad) continue;
          grad[k] += c * p.df_du * vs;
          if (r <= 0.0) continue;
          const double coef = c * p.df_dxi / r * gs / h;
          // d/du of the x-difference: forward (a = 0) is u_{i+1} - u_i.
          if (a == 0) {
            if (i + 1 < nx) grad[k + 1] += coef * dx[a];
            grad[k] -= coef * dx[a];
          } else {
            grad[k] += coef * dx[a];
            if (i > 0) grad[k - 1] -= coef * dx[a];
          }
          if (b == 0) {
            if (j + 1 < ny) grad[k + nx] += coef * dy[b];
            grad[k] -= coef * dy[b];
          } else {
            grad[k] += coef * dy[b];
            if (j > 0) grad[k - nx] -= coef * dy[b];
          }
        }
      }
    }
  }
  return total;
}

double scaled_energy(const Lagrangian& f, const RadialProfile& u, const EnergyScaling& sc) {
  if (u.dim() != f.dim()) throw std::invalid_argument("energy: profile and Lagrangian dimensions differ");
  return radial_energy(f, u.dim(), u.spacing(), u.values(), {}, sc);
}

double scaled_energy(const Lagrangian& f, const GridDensity& u, const EnergyScaling& sc) {
  if (u.dim() != f.dim()) throw std::invalid_argument("energy: grid and Lagrangian dimensions differ");
  return grid_energy(f, u.dim(), u.spacing(), u.nx(), u.ny(), u.values(), {}, sc);
}

double eval_energy(const Lagrangian& f, const RadialProfile& u) { return scaled_energy(f, u, {}); }
double eval_energy(const Lagrangian& f, const GridDensity& u) { return scaled_energy(f, u, {}); }

double rescaled_energy(const Lagrangian& f, double eps, const RadialProfile& u) {
  if (eps == 1.0) return eval_energy(f, u);
  return scaled_energy(f, u, EnergyScaling::rescaled(eps, f.dim()));
}

double rescaled_energy(const Lagrangian& f, double eps, const GridDensity& u) {
  if (eps == 1.0) return eval_energy(f, u);
  return scaled_energy(f, u, EnergyScaling::rescaled(eps, f.dim()));
}

double energy_gradient(const Lagrangian& f, const RadialProfile& u, std::span<double> grad) {
  if (grad.size() != u.values().size()) throw std::invalid_argument("energy_gradient: size mismatch");
  return radial_energy(f, u.dim(), u.spacing(), u.values(), grad);
}

double energy_gradient(const Lagrangian& f, const GridDensity& u, std::span<double> grad) {
  if (grad.size() != u.size()) throw std::invalid_argument("energy_gradient: size mismatch");
  return grid_energy(f, u.dim(), u.spacing(), u.nx(), u.ny(), u.values(), grad);
}

}  // namespace masscost
