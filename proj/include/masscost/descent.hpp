#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace masscost {

enum class SolverStatus { Converged, MaxIter, Diverged };
std::string to_string(SolverStatus s);
SolverStatus parse_status(const std::string& s);

/// Feasible set {sum_i w_i u_i = mass, u >= 0, u_i = 0 on fixed nodes},
/// projected onto in the norm sum_i M_i (u_i - y_i)^2.
struct MassConstraint {
  std::vector<double> weights;
  std::vector<double> metric;
  std::vector<char> fixed;
  double mass = 0.0;
};

/// Exact projection: u_i = max(0, y_i - tau w_i / M_i) with tau chosen so
/// that the mass is met. Entries with y_i = -inf are held at 0. Throws
/// std::domain_error when no free node can carry the mass.
std::vector<double> project_mass_cone(std::span<const double> y, const MassConstraint& c);

/// Energy with gradient written into the second argument.
using EnergyFn = std::function<double(std::span<const double>, std::span<double>)>;

struct DescentOptions {
  int max_iterations = 50000;
  /// Stop when the projected-gradient norm drops below tolerance * |E| / |u|.
  double tolerance = 1e-8;
};

struct DescentResult {
  std::vector<double> u;
  double energy = 0.0;
  SolverStatus status = SolverStatus::MaxIter;
  int iterations = 0;
  double residual = 0.0;  // relative projected-gradient norm at exit
  bool monotone = true;   // accepted energies never increased
  std::vector<double> trace;
};

/// Accelerated projected gradient with backtracking and adaptive restart.
/// Accepted iterates never increase the energy.
DescentResult projected_descent(const EnergyFn& energy, const MassConstraint& constraint,
                                std::vector<double> init, const DescentOptions& opts);

}  // namespace masscost
