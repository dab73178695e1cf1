#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "masscost/radial_solver.hpp"

namespace masscost {

struct Atom {
  std::vector<double> x;
  double m;
};

/// Atoms at pairwise distinct points plus a diffuse part represented only by
/// its total mass.
struct AtomicMeasure {
  std::vector<Atom> atoms;
  double diffuse_mass = 0.0;

  /// Throws std::invalid_argument on non-positive atom masses, repeated
  /// positions, mixed dimensions or negative diffuse mass.
  void validate() const;
  double total_mass() const;
};

/// Cost function m -> H(m): either c m^alpha or a sampled curve, linearly
/// interpolated, with H(0) = 0.
class CostFunction {
 public:
  static CostFunction power(double c, double alpha);
  /// Samples need positive, strictly increasing masses and H >= 0.
  static CostFunction sampled(std::vector<double> m, std::vector<double> H);
  /// Converged samples of a cost curve.
  static CostFunction from_curve(const CostCurve& curve);

  double operator()(double m) const;

  /// H'(0+): for samples, sup H_j/m_j, reported as +inf when the sup exceeds
  /// 1e8 at the smallest masses.
  double slope_at_zero() const;

  bool is_sampled() const { return !m_.empty(); }
  const std::vector<double>& masses() const { return m_; }
  const std::vector<double>& values() const { return H_; }
  std::optional<std::pair<double, double>> power_form() const;

 private:
  CostFunction() = default;
  double c_ = 0.0;
  double alpha_ = 1.0;
  std::vector<double> m_;
  std::vector<double> H_;
};

/// M^H(u) = sum H(m_i) + H'(0+) * diffuse mass.
double h_mass(const CostFunction& H, const AtomicMeasure& u);

struct SubadditivityReport {
  struct Pair {
    double a;
    double b;
    double excess;  // H(a+b) - H(a) - H(b)
  };
  std::vector<Pair> violations;
  std::vector<Pair> equalities;
  /// When some split is an equality: largest m such that H is linear on
  /// [0, m] within the linearity tolerance.
  std::optional<double> linear_up_to;
  bool linear_on_range = false;
};

/// Checks H(a+b) <= H(a) + H(b) for all pairs a, b of the grid (a + b is
/// evaluated by interpolation for sampled H). Equalities within 1e-9 relative
/// trigger a linearity check with tolerance 1e-6.
SubadditivityReport subadditivity_check(const CostFunction& H, std::span<const double> masses,
                                        double violation_tol = 1e-9);

struct PlateauReport {
  double m_star;
  bool strictly_concave_beyond;
  bool inconclusive;
  std::string note;
};

/// Largest prefix of the sample grid (0 included) on which one line through
/// the origin fits within the relative tolerance; beyond it every three
/// consecutive samples must be strictly concave by more than tol.
PlateauReport detect_linear_plateau(const CostFunction& H, double tol = 1e-3);
/// Same on an explicit grid for closed-form H.
PlateauReport detect_linear_plateau(const CostFunction& H, std::span<const double> grid,
                                    double tol = 1e-3);

struct ConcavityReport {
  bool monotone;
  bool concave;
  std::vector<std::string> failures;
};

/// Non-decrease of H_j with absolute slack, and concavity of every chord:
/// for m_i < m_j < m_k, H_j >= interpolated chord value minus relative slack.
ConcavityReport concavity_check(std::span<const double> m, std::span<const double> H,
                                double monotone_slack = 1e-6, double concavity_slack = 1e-3);

}  // namespace masscost
