#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "masscost/bubbles.hpp"
#include "masscost/descent.hpp"
#include "masscost/grid.hpp"
#include "masscost/hmass.hpp"
#include "masscost/lagrangian.hpp"

namespace masscost {

struct GridResult {
  GridDensity density;
  double energy = 0.0;
  SolverStatus status = SolverStatus::MaxIter;
  int iterations = 0;
  double residual = 0.0;
  bool monotone = true;
};

/// Minimizes the rescaled energy E_eps under {sum u h^dim = m, u >= 0} on the
/// grid of `init`, through v(y) = eps^N u(eps y) on spacing h/eps, which turns
/// E_eps(u) into E(v) exactly (also for the discrete quadrature).
GridResult minimize_rescaled(const Lagrangian& f, double eps, double mass, const GridDensity& init,
                             const DescentOptions& opts = {});

/// Same problem minimized directly in u with the rescaled quadrature.
GridResult minimize_rescaled_direct(const Lagrangian& f, double eps, double mass, const GridDensity& init,
                                    const DescentOptions& opts = {});

enum class InitPolicy { SingleBump, TwoBump, Uniform };
std::string to_string(InitPolicy p);
InitPolicy parse_init_policy(const std::string& s);

struct GammaConfig {
  int dim = 1;
  double box = 8.0;          // side length of the box centered at 0
  std::size_t cells = 4096;  // per axis
  InitPolicy init = InitPolicy::SingleBump;
  bool warm_start = true;
  double concentration_factor = 10.0;  // radius c * eps
  double droplet_floor = 0.01;         // bubble floor as a fraction of the mass
  DescentOptions descent{20000, 1e-8};
};

/// Initial density of the policy on the configured grid, with mass m.
GridDensity initial_density(const GammaConfig& cfg, double mass);

struct GammaStep {
  double eps;
  double energy;
  SolverStatus status;
  int iterations;
  bool monotone;
  double concentration;  // mass within c * eps of the densest node / total
  std::size_t droplets;
  std::vector<double> droplet_masses;
  GridDensity snapshot;
};

struct GammaRunResult {
  std::string lagrangian;
  double mass;
  std::vector<GammaStep> steps;
  std::optional<double> prediction;    // M^H of the limit, H(m) for one droplet
  std::optional<double> relative_gap;  // (E_last - prediction) / prediction
  bool all_converged() const;
};

/// Minimizes E_eps along a strictly decreasing schedule. DropletW Lagrangians
/// are re-parameterized with f.at_eps(eps) at each step. With warm starts
/// every droplet of the previous minimizer is shrunk about its own center by
/// eps_prev/eps. `H` gives the single-droplet prediction H(m).
GammaRunResult gamma_sweep(const Lagrangian& f, double mass, std::span<const double> schedule,
                           const GammaConfig& cfg, const CostFunction* H = nullptr);

/// Mass within radius c*eps of the densest node, as a fraction of the total.
double concentration_fraction(const GridDensity& u, double radius);

struct RecoveryEntry {
  double eps;
  double energy;
  double relative_error;  // against the energy of the radial profile
};

struct RecoveryReport {
  double reference;  // eval_energy of the radial profile
  std::vector<RecoveryEntry> entries;
  double max_relative_error;
};

/// Rescaled energies of u_eps(x) = eps^{-N} u*(|x|/eps) sampled on the
/// configured grid; u* is a radial profile in the same dimension.
RecoveryReport recovery_family_check(const Lagrangian& f, const RadialProfile& profile,
                                     std::span<const double> schedule, const GammaConfig& cfg);

struct LiminfEntry {
  double eps;
  double energy;
  double bound;  // sum of H over the droplet masses
  bool holds;
};

/// energy >= (1 - slack) * sum_i H(m_i) over the droplets of every step.
std::vector<LiminfEntry> liminf_check(const GammaRunResult& run, const CostFunction& H, double slack = 0.05);

struct VanishingEntry {
  double radius;
  double ratio;  // energy / mass
};

struct VanishingReport {
  std::vector<VanishingEntry> entries;
  SlopeEstimate slope;
  bool increasing = false;
  /// For a finite slope: the last ratio is within tol above it and no ratio
  /// lies below it; for an infinite slope: ratios increase.
  bool consistent = false;
};

/// Energy per mass of u_R = (m/|B_R|) 1_{B_R}, with the edge replaced by a
/// linear ramp of width R/10, for each R.
VanishingReport vanishing_lower_bound_check(const Lagrangian& f, double mass, std::span<const double> radii,
                                            std::size_t cells = 4000, double tol = 0.05);

/// |W_ebar(u) - E_eps(u)| / |E_eps(u)|, where W_ebar is the literal droplet
/// functional ebar^{-rho} (W(u) + ebar |grad u|^2) with ebar = eps^{(N+2)+N(1-s)}
/// and E_eps the rescaled energy of W_eps(u) + |xi|^2.
double droplet_equivalence_check(const Potential& W, double s, double eps, const GridDensity& u);

struct PotentialCheck {
  std::string name;  // "HW1" ... "HW5"
  bool pass;
  std::string detail;
  std::optional<double> witness;
};

/// Sampled checks of lower semicontinuity, {W = 0} = {0}, W ~ u^s at
/// infinity, sup W/u^s < inf and a positive liminf of W/u at 0+.
std::vector<PotentialCheck> verify_potential(const Potential& W, double s);

struct LemmaWReport {
  std::vector<PotentialCheck> hypotheses;
  bool hypotheses_pass = false;
  std::optional<double> threshold;  // M
  std::optional<double> c_delta;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::optional<std::pair<double, double>> worst;  // (eps, u) of the largest violation
};

/// Builds M with delta u^s <= W(u) for u >= M and c = inf W/u on (0, M] from
/// a log grid, then checks delta min(u^s, c eps^{-N(1-s)} u) <= W_eps(u) on all
/// (eps, u) pairs.
LemmaWReport lemma_w_bound_check(const Potential& W, double s, double delta, std::span<const double> eps,
                                 std::span<const double> u, int dim = 1);

}  // namespace masscost
