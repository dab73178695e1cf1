#pragma once

#include <span>
#include <vector>

#include "masscost/grid.hpp"
#include "masscost/lagrangian.hpp"

namespace masscost {

/// Values below this fraction of max u are exact zeros for the energy.
inline constexpr double kZeroThreshold = 1e-14;

/// Affine rescaling applied inside the quadrature: the integrand is
/// f(value_scale * u, gradient_scale * |grad u|) * weight_scale.
struct EnergyScaling {
  double value_scale = 1.0;
  double gradient_scale = 1.0;
  double weight_scale = 1.0;

  /// Scaling of the rescaled energy E_eps in dimension N.
  static EnergyScaling rescaled(double eps, int dim);
};

// Radial quadrature: on each interval [r_k, r_{k+1}] the one-sided slope
// D_k = (u_{k+1} - u_k)/h is paired with both endpoint values and the
// trapezoid weight |S^{N-1}| r^{N-1} h/2.
//
// Grid quadrature: each node pairs its value with every combination of
// forward/backward differences (zero extension outside the box) and
// averages f over them, weighted by h^dim.

double eval_energy(const Lagrangian& f, const RadialProfile& u);
double eval_energy(const Lagrangian& f, const GridDensity& u);

double rescaled_energy(const Lagrangian& f, double eps, const RadialProfile& u);
double rescaled_energy(const Lagrangian& f, double eps, const GridDensity& u);

double scaled_energy(const Lagrangian& f, const RadialProfile& u, const EnergyScaling& sc);
double scaled_energy(const Lagrangian& f, const GridDensity& u, const EnergyScaling& sc);

/// Energy and its partial derivatives dE/du_i. Entries are +inf at zero
/// nodes where f has an infinite (or jump) slope at u = 0.
double energy_gradient(const Lagrangian& f, const RadialProfile& u, std::span<double> grad);
double energy_gradient(const Lagrangian& f, const GridDensity& u, std::span<double> grad);

// Raw-array forms used by the descent loops (values need not satisfy the
// profile invariants mid-iteration).
double radial_energy(const Lagrangian& f, int dim, double h, std::span<const double> u,
                     std::span<double> grad, const EnergyScaling& sc = {});
double grid_energy(const Lagrangian& f, int dim, double h, std::size_t nx, std::size_t ny,
                   std::span<const double> u, std::span<double> grad, const EnergyScaling& sc = {});

}  // namespace masscost
