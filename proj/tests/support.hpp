#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "masscost/grid.hpp"

namespace testing {

// Smooth positive radial profile: a few random Gaussian bumps cut off at R.
inline masscost::RadialProfile random_profile(int dim, double R, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(0.0, 0.5 * R), w(0.05 * R, 0.3 * R), a(0.1, 2.0);
  std::vector<double> u(n + 1, 0.0);
  for (int b = 0; b < 3; ++b) {
    const double cb = c(rng), wb = w(rng), ab = a(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = R * static_cast<double>(i) / static_cast<double>(n);
      u[i] += ab * std::exp(-0.5 * (r - cb) * (r - cb) / (wb * wb));
    }
  }
  return {dim, R, std::move(u)};
}

// 1D grid density on [lo, lo + h*(n-1)] sampled from a function.
template <class F>
masscost::GridDensity grid_1d(double lo, double h, std::size_t n, F&& fn) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = fn(lo + h * static_cast<double>(i));
  return {1, {lo, 0.0}, h, {n, 1}, std::move(v)};
}

template <class F>
masscost::GridDensity grid_2d(double lo, double h, std::size_t n, F&& fn) {
  std::vector<double> v(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      v[j * n + i] = fn(lo + h * static_cast<double>(i), lo + h * static_cast<double>(j));
  return {2, {lo, lo}, h, {n, n}, std::move(v)};
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
