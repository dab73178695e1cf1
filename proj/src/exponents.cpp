#include "masscost/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace masscost {

namespace {

constexpr double kDegenerate = 1e-14;

void require_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be a positive integer");
}

}  // namespace

AlphaResult alpha_exponent(double s, double p, int dim) {
  require_dim(dim);
  if (!(p > 1.0)) throw std::invalid_argument("alpha_exponent: p must be > 1");
  const double n = static_cast<double>(dim);
  const double den = 1.0 - s / p + 1.0 / n;
  if (std::abs(den) < kDegenerate) throw std::domain_error("alpha_exponent: degenerate denominator");
  const double alpha = (1.0 - s / p + s / n) / den;
  const double p_conj = p / (p - 1.0);
  const HalfOpenRange range{-p_conj, 1.0};
  return {alpha, range.contains(s), range};
}

double mass_scaling_exponent(double s, double p, int dim) {
  require_dim(dim);
  if (!(p > 1.0)) throw std::invalid_argument("mass_scaling_lambda: p must be > 1");
  const double n = static_cast<double>(dim);
  const double den = 1.0 + n - s * n / p;
  if (std::abs(den) < kDegenerate)
    throw std::domain_error("mass_scaling_lambda: degenerate denominator");
  return (s / p - 1.0) / den;
}

double mass_scaling_lambda(double m, double s, double p, int dim) {
  if (!(m > 0.0)) throw std::invalid_argument("mass_scaling_lambda: m must be positive");
  return std::pow(m, mass_scaling_exponent(s, p, dim));
}

double scale_invariant_alpha(double p, int dim) {
  require_dim(dim);
  if (!(p > 1.0 && p < dim)) throw std::invalid_argument("scale_invariant_alpha: requires 1 < p < N");
  return 1.0 - p / static_cast<double>(dim);
}

DropletExponents droplet_exponents(double s, int dim) {
  require_dim(dim);
  if (!(s < 1.0)) throw std::invalid_argument("droplet_exponents: s must be < 1");
  const double n = static_cast<double>(dim);
  const double total = (n + 2.0) + n * (1.0 - s);
  return {n * (1.0 - s) / total, total, (n + 2.0) / total};
}

BranchedExponents bt_exponents(double alpha, int d) {
  if (d < 2) throw std::invalid_argument("bt_exponents: d must be >= 2");
  const double dd = static_cast<double>(d);
  const double den = 3.0 - dd + alpha * (dd - 1.0);
  if (std::abs(den) < kDegenerate) throw std::domain_error("bt_exponents: degenerate denominator");
  BranchedExponents r{};
  r.beta = (2.0 - 2.0 * dd + 2.0 * alpha * dd) / den;
  r.gamma1 = (dd - 1.0) * (1.0 - alpha);
  r.gamma2 = den;
  r.supercritical_range = {1.0 - 1.0 / dd, 1.0};
  r.attainable_range = {(2.0 * dd - 4.0) / (2.0 * dd + 1.0), 1.0};
  r.supercritical = r.supercritical_range.contains(alpha);
  r.attainable = r.attainable_range.contains(alpha);
  return r;
}

ExponentReport exponent_report(double s, double p, int dim, std::optional<int> bt_dimension,
                               std::optional<double> bt_alpha) {
  ExponentReport r{};
  r.s = s;
  r.p = p;
  r.dim = dim;
  r.alpha = alpha_exponent(s, p, dim);
  r.lambda_exponent = mass_scaling_exponent(s, p, dim);
  if (p > 1.0 && p < dim) r.scale_invariant_alpha = scale_invariant_alpha(p, dim);
  if (s < 1.0) r.droplet = droplet_exponents(s, dim);
  const int d = bt_dimension.value_or(dim + 1);
  const double a = bt_alpha.value_or(r.alpha.alpha);
  if (d >= 2 && a > 0.0 && a <= 1.0) {
    r.bt_dimension = d;
    r.branched = bt_exponents(a, d);
  }
  return r;
}

}  // namespace masscost
