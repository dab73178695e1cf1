#include "masscost/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace masscost {

namespace {

// Closed-ball sums over a row-major array with per-row prefix sums.
class BallSums {
 public:
  BallSums(const GridDensity& g, std::span<const double> values)
      : nx_(g.nx()), ny_(g.dim() == 2 ? g.ny() : 1), h_(g.spacing()), vol_(g.cell_volume()),
        prefix_(ny_ * (nx_ + 1), 0.0) {
    for (std::size_t j = 0; j < ny_; ++j) {
      double* p = &prefix_[j * (nx_ + 1)];
      for (std::size_t i = 0; i < nx_; ++i) p[i + 1] = p[i] + values[j * nx_ + i];
    }
  }

  // Row half-widths (in cells) of the ball of radius rho.
  std::vector<std::size_t> half_widths(double rho) const {
    const double cells = rho / h_ * (1.0 + 1e-12);
    const std::size_t rows = ny_ > 1 ? static_cast<std::size_t>(std::floor(cells)) : 0;
    std::vector<std::size_t> w(rows + 1);
    for (std::size_t d = 0; d <= rows; ++d) {
      const double dd = static_cast<double>(d);
      w[d] = static_cast<std::size_t>(std::floor(std::sqrt(std::max(0.0, cells * cells - dd * dd))));
    }
    return w;
  }

  double sum(std::size_t ci, std::size_t cj, const std::vector<std::size_t>& w) const {
    double s = 0.0;
    const std::size_t rows = w.size() - 1;
    const std::size_t jlo = cj >= rows ? cj - rows : 0;
    const std::size_t jhi = std::min(ny_ - 1, cj + rows);
    for (std::size_t j = jlo; j <= jhi; ++j) {
      const std::size_t d = j > cj ? j - cj : cj - j;
      const std::size_t ilo = ci >= w[d] ? ci - w[d] : 0;
      const std::size_t ihi = std::min(nx_ - 1, ci + w[d]);
      const double* p = &prefix_[j * (nx_ + 1)];
      s += p[ihi + 1] - p[ilo];
    }
    return s * vol_;
  }

 private:
  std::size_t nx_, ny_;
  double h_, vol_;
  std::vector<double> prefix_;
};

// With occupied_only, centers are restricted to nodes carrying mass.
BallMass sup_over(const GridDensity& g, std::span<const double> values, double r, bool occupied_only) {
  const BallSums sums(g, values);
  const auto w = sums.half_widths(r);
  const std::size_t nx = g.nx();
  const std::size_t ny = g.dim() == 2 ? g.ny() : 1;
  BallMass best{0.0, g.position(0), 0};
  bool found = false;
  // x-major scan so that the first maximum is the lexicographically smallest.
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t k = j * nx + i;
      if (occupied_only && !(values[k] > 0.0)) continue;
      const double m = sums.sum(i, j, w);
      if (!found || m > best.mass * (1.0 + 1e-12)) {
        best = {m, g.position(k), k};
        found = true;
      }
    }
  return best;
}

double distance(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// Zeroes the closed ball and returns the mass removed.
double carve(const GridDensity& g, std::vector<double>& values, const std::array<double, 2>& c,
             double rho) {
  const double h = g.spacing();
  const auto o = g.origin();
  const std::size_t nx = g.nx();
  const std::size_t ny = g.dim() == 2 ? g.ny() : 1;
  const double reach = rho * (1.0 + 1e-12);
  auto range = [&](double center, double origin, std::size_t n) {
    const double lo = std::ceil((center - reach - origin) / h - 1e-9);
    const double hi = std::floor((center + reach - origin) / h + 1e-9);
    const auto clamp = [&](double v) {
      return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(n - 1)));
    };
    return std::make_pair(clamp(lo), clamp(hi));
  };
  const auto [ilo, ihi] = range(c[0], o[0], nx);
  const auto [jlo, jhi] = g.dim() == 2 ? range(c[1], o[1], ny) : std::make_pair<std::size_t, std::size_t>(0, 0);
  double removed = 0.0;
  for (std::size_t j = jlo; j <= jhi; ++j)
    for (std::size_t i = ilo; i <= ihi; ++i) {
      const std::size_t k = j * nx + i;
      if (distance(g.position(k), c) > reach) continue;
      removed += values[k];
      values[k] = 0.0;
    }
  return removed * g.cell_volume();
}

double ball_mass(const GridDensity& g, std::span<const double> values, const std::array<double, 2>& c,
                 double rho) {
  std::vector<double> copy(values.begin(), values.end());
  return carve(g, copy, c, rho);
}

}  // namespace

BallMass bubbling_sup(const GridDensity& u, double r) {
  if (!(r >= u.spacing() * (1.0 - 1e-12))) throw std::invalid_argument("bubbling_sup: radius below grid spacing");
  return sup_over(u, u.values(), r, false);
}

BubbleSet extract_bubbles(const GridDensity& u, const BubbleParams& params) {
  if (!(params.floor > 0.0)) throw std::invalid_argument("extract_bubbles: mass floor must be positive");
  if (params.max_bubbles < 1) throw std::invalid_argument("extract_bubbles: max_bubbles must be >= 1");
  const double r = params.radius;
  if (!(r >= u.spacing() * (1.0 - 1e-12))) throw std::invalid_argument("extract_bubbles: radius below grid spacing");

  BubbleSet out;
  out.params = params;
  out.total_mass = u.mass();
  out.dim = u.dim();
  const double tol = params.growth_tolerance.value_or(0.01 * out.total_mass / r);
  const double h = u.spacing();
  double diameter = h * static_cast<double>(u.nx());
  if (u.dim() == 2) diameter = std::hypot(diameter, h * static_cast<double>(u.ny()));

  std::vector<double> work(u.values().begin(), u.values().end());
  auto separated = [&](const std::array<double, 2>& c, double rho, std::size_t skip) {
    for (std::size_t i = 0; i < out.bubbles.size(); ++i) {
      if (i == skip) continue;
      const auto& b = out.bubbles[i];
      if (distance(c, b.center) < rho + b.radius + r) return false;
    }
    return true;
  };

  for (;;) {
    const BallMass cand = sup_over(u, work, r, true);
    if (cand.mass < params.floor || !(work[cand.index] > 0.0)) break;
    if (out.bubbles.size() >= params.max_bubbles) {
      out.incomplete = true;
      break;
    }
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    if (!separated(cand.center, r, none)) {
      std::size_t near = 0;
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < out.bubbles.size(); ++i) {
        const double d = distance(cand.center, out.bubbles[i].center) - out.bubbles[i].radius;
        if (d < gap) {
          gap = d;
          near = i;
        }
      }
      Bubble& b = out.bubbles[near];
      b.mass += carve(u, work, cand.center, r);
      double cap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < out.bubbles.size(); ++i)
        if (i != near)
          cap = std::min(cap, distance(b.center, out.bubbles[i].center) - out.bubbles[i].radius - r);
      b.radius = std::max(b.radius, std::min(cap, distance(cand.center, b.center) + r));
      ++b.merged;
      continue;
    }

    double rho = r;
    double inside = ball_mass(u, work, cand.center, rho);
    while (rho + h <= diameter && separated(cand.center, rho + h, none)) {
      const double grown = ball_mass(u, work, cand.center, rho + h);
      if ((grown - inside) / h <= tol) break;
      rho += h;
      inside = grown;
    }
    Bubble b{cand.center, rho, 0.0, 0};
    b.mass = carve(u, work, cand.center, rho);
    out.bubbles.push_back(b);
  }

  out.remainder_mass = std::accumulate(work.begin(), work.end(), 0.0) * u.cell_volume();
  GridDensity rest(u.dim(), u.origin(), u.spacing(), u.shape(), work);
  out.vanishing_sup = sup_over(rest, work, r, false).mass;
  out.remainder = std::move(work);
  return out;
}

DecompositionReport decomposition_report(std::span<const GridDensity> sequence, const BubbleParams& params) {
  DecompositionReport rep;
  std::vector<std::size_t> prev_track;  // track id of each bubble at the previous index
  char buf[200];
  for (std::size_t n = 0; n < sequence.size(); ++n) {
    auto set = extract_bubbles(sequence[n], params);
    rep.vanishing_sup.push_back(set.vanishing_sup);
    std::optional<double> sep;
    for (std::size_t a = 0; a < set.bubbles.size(); ++a)
      for (std::size_t b = a + 1; b < set.bubbles.size(); ++b) {
        const double d = distance(set.bubbles[a].center, set.bubbles[b].center);
        sep = sep ? std::min(*sep, d) : d;
      }
    rep.min_separation.push_back(sep);

    std::vector<std::size_t> cur_track(set.bubbles.size());
    std::vector<int> claims(prev_track.size(), 0);
    const auto* prev = n > 0 ? &rep.sets.back() : nullptr;
    for (std::size_t a = 0; a < set.bubbles.size(); ++a) {
      const auto& b = set.bubbles[a];
      std::size_t best = prev_track.size();
      double best_d = std::numeric_limits<double>::infinity();
      int within = 0;
      for (std::size_t q = 0; prev && q < prev->bubbles.size(); ++q) {
        const double d = distance(b.center, prev->bubbles[q].center);
        if (d <= params.radius) ++within;
        if (d < best_d) {
          best_d = d;
          best = q;
        }
      }
      if (within > 1) {
        rep.ambiguous = true;
        std::snprintf(buf, sizeof buf, "index %zu: bubble %zu is within r of %d previous centers", n, a, within);
        rep.notes.emplace_back(buf);
      }
      if (best < prev_track.size() && claims[best]++ == 0) {
        auto& t = rep.tracks[prev_track[best]];
        t.masses.push_back(b.mass);
        t.centers.push_back(b.center);
        cur_track[a] = prev_track[best];
      } else {
        if (best < prev_track.size()) {
          rep.ambiguous = true;
          std::snprintf(buf, sizeof buf, "index %zu: previous bubble %zu claimed twice", n, best);
          rep.notes.emplace_back(buf);
        }
        rep.tracks.push_back({n, {b.mass}, {b.center}});
        cur_track[a] = rep.tracks.size() - 1;
      }
    }
    prev_track = std::move(cur_track);
    rep.sets.push_back(std::move(set));
  }
  return rep;
}

}  // namespace masscost
