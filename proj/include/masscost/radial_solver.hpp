#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "masscost/descent.hpp"
#include "masscost/grid.hpp"
#include "masscost/lagrangian.hpp"

namespace masscost {

struct SolverConfig {
  std::size_t n = 2000;
  /// Fixed outer radius; when absent the radius starts at initial_radius and
  /// doubles until the minimizer's boundary value is below 1e-8 * max.
  std::optional<double> outer_radius;
  double initial_radius = 10.0;
  int max_doublings = 6;
  int max_iterations = 50000;
  double tolerance = 1e-8;
  int restarts = 5;
  std::uint64_t seed = 0;
};

struct ProfileResult {
  RadialProfile profile;
  double energy = 0.0;
  SolverStatus status = SolverStatus::Converged;
  int iterations = 0;
  double residual = 0.0;
  bool monotone = true;
  /// The boundary value never dropped below the threshold: the infimum is
  /// approached by spreading and the energy depends on the box.
  bool truncation_active = false;
  int restart_index = 0;
};

/// Upper bound for H_f(m): best local minimizer of the radial energy under
/// the mass constraint over several seeded initializations.
ProfileResult minimize_profile(const Lagrangian& f, double mass, const SolverConfig& cfg = {});

/// Same, on a fixed radius, started from a given profile only.
ProfileResult minimize_profile_from(const Lagrangian& f, double mass, const RadialProfile& init,
                                    const SolverConfig& cfg = {});

struct CostSample {
  double m;
  double H;
  SolverStatus status;
};

struct PowerFit {
  double alpha;
  double c;
  double r_squared;
  std::size_t used;
  std::size_t excluded;
};

/// Least squares fit of log H = log c + alpha log m. Samples with
/// non-positive m or H are excluded (and counted); throws
/// std::invalid_argument with fewer than three usable samples.
PowerFit fit_power_law(std::span<const std::pair<double, double>> samples);

struct CostCurve {
  std::string lagrangian;
  int dim = 1;
  std::vector<CostSample> samples;
  std::optional<PowerFit> fit;
  std::string fit_note;  // why the fit was skipped, if it was
  std::vector<RadialProfile> profiles;
};

/// Minimizes for each mass (masses positive and strictly increasing) and fits
/// a power law over the converged samples. Mass j uses the seed derived from
/// (cfg.seed, j), so results do not depend on the worker count.
CostCurve cost_curve(const Lagrangian& f, std::span<const double> masses, const SolverConfig& cfg = {},
                     unsigned workers = 1);

std::uint64_t derive_seed(std::uint64_t global, std::uint64_t index);

struct SlopeProfile {
  RadialProfile profile;
  double eps;
  double mass;              // quadrature
  double closed_form_mass;  // |S^{N-1}| eps (N-1)!
  std::optional<double> energy_per_mass;
};

/// Profile eps * exp(-r) solving v' = -v, v(0) = eps (rho(t) = t), N >= 2.
SlopeProfile slope_construction_profile(double eps, int dim, const Lagrangian* f = nullptr,
                                        std::size_t n = 6000, double outer_radius = 60.0);

}  // namespace masscost
