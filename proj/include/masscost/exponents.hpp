#pragma once

#include <optional>
#include <string>

namespace masscost {

/// Half-open interval (lo, hi] used for the non-triviality ranges.
struct HalfOpenRange {
  double lo;
  double hi;
  bool contains(double x) const { return x > lo && x <= hi; }
};

struct AlphaResult {
  double alpha;
  bool nontrivial;        // s in (-p', 1]
  HalfOpenRange s_range;  // (-p', 1]
};

/// alpha = (1 - s/p + s/N) / (1 - s/p + 1/N); the cost of the power-sum
/// Lagrangian |xi|^p + u^s scales as H(m) = H(1) m^alpha.
AlphaResult alpha_exponent(double s, double p, int dim);

/// lambda = m^{(s/p - 1)/(1 + N - sN/p)}: u = m lambda^N v(lambda x) maps a
/// unit-mass v to mass m.
double mass_scaling_lambda(double m, double s, double p, int dim);
double mass_scaling_exponent(double s, double p, int dim);

/// 1 - p/N for scale-invariant Lagrangians, 1 < p < N.
double scale_invariant_alpha(double p, int dim);

struct DropletExponents {
  double rho;             // N(1-s)/((N+2) + N(1-s))
  double epsbar_exponent; // (N+2) + N(1-s)
  double one_minus_rho;   // (N+2)/((N+2) + N(1-s))
};

DropletExponents droplet_exponents(double s, int dim);

struct BranchedExponents {
  double beta;
  double gamma1;
  double gamma2;
  bool supercritical;  // alpha in (1 - 1/d, 1]
  bool attainable;     // alpha in ((2d-4)/(2d+1), 1]
  HalfOpenRange supercritical_range;
  HalfOpenRange attainable_range;
};

BranchedExponents bt_exponents(double alpha, int d);

/// Everything above for one parameter set, as printed by the CLI.
struct ExponentReport {
  double s;
  double p;
  int dim;
  AlphaResult alpha;
  double lambda_exponent;
  std::optional<double> scale_invariant_alpha;  // when 1 < p < N
  std::optional<DropletExponents> droplet;       // when s < 1
  std::optional<int> bt_dimension;
  std::optional<BranchedExponents> branched;     // d = N + 1 by default
};

ExponentReport exponent_report(double s, double p, int dim, std::optional<int> bt_dimension = {},
                               std::optional<double> bt_alpha = {});

}  // namespace masscost
