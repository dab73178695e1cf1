#include "masscost/grid.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace masscost {

double sphere_area(int dim) {
  if (dim < 1) throw std::invalid_argument("sphere_area: dimension must be positive");
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {

void check_non_negative(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument(std::string(what) + ": values must be finite and non-negative");
  }
}

}  // namespace

RadialProfile::RadialProfile(int dim, double outer_radius, std::vector<double> values)
    : dim_(dim), outer_radius_(outer_radius), values_(std::move(values)) {
  if (dim_ < 1) throw std::invalid_argument("RadialProfile: dimension must be positive");
  if (!(outer_radius_ > 0.0)) throw std::invalid_argument("RadialProfile: outer radius must be positive");
  if (values_.size() < 2) throw std::invalid_argument("RadialProfile: need at least one interval");
  check_non_negative(values_, "RadialProfile");
  if (values_.back() != 0.0) throw std::invalid_argument("RadialProfile: value at r = R must be 0");
}

RadialProfile RadialProfile::zeros(int dim, double outer_radius, std::size_t n) {
  return RadialProfile(dim, outer_radius, std::vector<double>(n + 1, 0.0));
}

std::vector<double> RadialProfile::mass_weights() const {
  const std::size_t n = intervals();
  const double h = spacing();
  const double area = sphere_area(dim_);
  std::vector<double> w(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = radius(i);
    const double ends = (i == 0 || i == n) ? 0.5 : 1.0;
    w[i] = area * std::pow(r, dim_ - 1) * h * ends;
  }
  return w;
}

double RadialProfile::mass() const {
  const auto w = mass_weights();
  return std::inner_product(w.begin(), w.end(), values_.begin(), 0.0);
}

double RadialProfile::interpolate(double r) const {
  if (r < 0.0) r = -r;
  if (r >= outer_radius_) return 0.0;
  const double t = r / spacing();
  const auto i = static_cast<std::size_t>(t);
  if (i >= intervals()) return values_.back();
  const double frac = t - static_cast<double>(i);
  return (1.0 - frac) * values_[i] + frac * values_[i + 1];
}

GridDensity::GridDensity(int dim, std::array<double, 2> origin, double spacing,
                         std::array<std::size_t, 2> shape, std::vector<double> values)
    : dim_(dim), origin_(origin), spacing_(spacing), shape_(shape), values_(std::move(values)) {
  if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("GridDensity: dimension must be 1 or 2");
  if (!(spacing_ > 0.0)) throw std::invalid_argument("GridDensity: spacing must be positive");
  if (dim_ == 1) shape_[1] = 1;
  if (shape_[0] == 0 || shape_[1] == 0) throw std::invalid_argument("GridDensity: empty shape");
  if (values_.size() != shape_[0] * shape_[1])
    throw std::invalid_argument("GridDensity: value count does not match shape");
  check_non_negative(values_, "GridDensity");
}

GridDensity GridDensity::zeros(int dim, std::array<double, 2> origin, double spacing,
                               std::array<std::size_t, 2> shape) {
  if (dim == 1) shape[1] = 1;
  return GridDensity(dim, origin, spacing, shape, std::vector<double>(shape[0] * shape[1], 0.0));
}

double GridDensity::cell_volume() const { return dim_ == 1 ? spacing_ : spacing_ * spacing_; }

double GridDensity::mass() const {
  return cell_volume() * std::accumulate(values_.begin(), values_.end(), 0.0);
}

std::array<double, 2> GridDensity::position(std::size_t k) const {
  const std::size_t i = k % nx();
  const std::size_t j = k / nx();
  return {origin_[0] + spacing_ * static_cast<double>(i),
          origin_[1] + spacing_ * static_cast<double>(j)};
}

}  // namespace masscost
