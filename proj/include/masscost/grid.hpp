#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace masscost {

/// Surface area |S^{N-1}| of the unit sphere in R^N (|S^0| = 2).
double sphere_area(int dim);

/// Radial profile u(|x|) sampled at r_i = i*R/n, i = 0..n, with u(R) = 0.
class RadialProfile {
 public:
  RadialProfile(int dim, double outer_radius, std::vector<double> values);

  /// Zero profile with n intervals.
  static RadialProfile zeros(int dim, double outer_radius, std::size_t n);

  int dim() const { return dim_; }
  double outer_radius() const { return outer_radius_; }
  std::size_t intervals() const { return values_.size() - 1; }
  double spacing() const { return outer_radius_ / static_cast<double>(intervals()); }
  double radius(std::size_t i) const { return spacing() * static_cast<double>(i); }

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Trapezoid weights |S^{N-1}| r_i^{N-1} * (h or h/2) so that mass = sum w_i u_i.
  std::vector<double> mass_weights() const;
  double mass() const;

  /// Piecewise linear interpolation, zero beyond R.
  double interpolate(double r) const;

 private:
  int dim_;
  double outer_radius_;
  std::vector<double> values_;
};

/// Non-negative density on a uniform 1D or 2D grid. Values are stored
/// row-major: index = j * nx + i, node (i, j) sits at origin + h * (i, j).
class GridDensity {
 public:
  GridDensity(int dim, std::array<double, 2> origin, double spacing,
              std::array<std::size_t, 2> shape, std::vector<double> values);

  static GridDensity zeros(int dim, std::array<double, 2> origin, double spacing,
                           std::array<std::size_t, 2> shape);

  int dim() const { return dim_; }
  std::array<double, 2> origin() const { return origin_; }
  double spacing() const { return spacing_; }
  std::array<std::size_t, 2> shape() const { return shape_; }
  std::size_t nx() const { return shape_[0]; }
  std::size_t ny() const { return shape_[1]; }
  std::size_t size() const { return values_.size(); }

  /// Volume of one cell, h^dim.
  double cell_volume() const;
  double mass() const;

  std::span<const double> values() const { return values_; }
  std::span<double> values_mut() { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double at(std::size_t i, std::size_t j = 0) const { return values_[j * nx() + i]; }

  std::array<double, 2> position(std::size_t k) const;

 private:
  int dim_;
  std::array<double, 2> origin_;
  double spacing_;
  std::array<std::size_t, 2> shape_;
  std::vector<double> values_;
};

}  // namespace masscost
