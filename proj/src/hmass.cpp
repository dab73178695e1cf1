#include "masscost/hmass.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace masscost {

void AtomicMeasure::validate() const {
  if (!(diffuse_mass >= 0.0) || !std::isfinite(diffuse_mass))
    throw std::invalid_argument("diffuse mass must be a non-negative number");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i].m > 0.0) || !std::isfinite(atoms[i].m))
      throw std::invalid_argument("atom masses must be positive");
    if (atoms[i].x.size() != atoms.front().x.size())
      throw std::invalid_argument("atoms must share one dimension");
    for (std::size_t j = 0; j < i; ++j)
      if (atoms[i].x == atoms[j].x) throw std::invalid_argument("atom positions must be distinct");
  }
}

double AtomicMeasure::total_mass() const {
  double t = diffuse_mass;
  for (const auto& a : atoms) t += a.m;
  return t;
}

CostFunction CostFunction::power(double c, double alpha) {
  if (!(c >= 0.0) || !(alpha > 0.0)) throw std::invalid_argument("power cost needs c >= 0, alpha > 0");
  CostFunction h;
  h.c_ = c;
  h.alpha_ = alpha;
  return h;
}

CostFunction CostFunction::sampled(std::vector<double> m, std::vector<double> H) {
  if (m.size() != H.size() || m.empty()) throw std::invalid_argument("sampled cost: size mismatch");
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (!(m[j] > 0.0) || (j > 0 && !(m[j] > m[j - 1])))
      throw std::invalid_argument("sampled cost: masses must be positive and strictly increasing");
    if (!(H[j] >= 0.0) || !std::isfinite(H[j]))
      throw std::invalid_argument("sampled cost: values must be finite and non-negative");
  }
  CostFunction h;
  h.m_ = std::move(m);
  h.H_ = std::move(H);
  return h;
}

CostFunction CostFunction::from_curve(const CostCurve& curve) {
  std::vector<double> m, H;
  for (const auto& s : curve.samples) {
    if (s.status != SolverStatus::Converged) continue;
    m.push_back(s.m);
    H.push_back(s.H);
  }
  if (m.empty()) throw std::invalid_argument("cost curve has no converged samples");
  return sampled(std::move(m), std::move(H));
}

std::optional<std::pair<double, double>> CostFunction::power_form() const {
  if (is_sampled()) return std::nullopt;
  return std::make_pair(c_, alpha_);
}

double CostFunction::operator()(double m) const {
  if (m < 0.0) throw std::invalid_argument("cost function: negative mass");
  if (m == 0.0) return 0.0;
  if (!is_sampled()) return c_ * std::pow(m, alpha_);
  if (m <= m_.front()) return H_.front() * m / m_.front();
  const std::size_t n = m_.size();
  if (m >= m_.back()) {
    if (n == 1) return H_.back() * m / m_.back();
    // Continue the last segment.
    const double slope = (H_[n - 1] - H_[n - 2]) / (m_[n - 1] - m_[n - 2]);
    return H_.back() + slope * (m - m_.back());
  }
  const auto it = std::upper_bound(m_.begin(), m_.end(), m);
  const std::size_t k = static_cast<std::size_t>(it - m_.begin());
  const double t = (m - m_[k - 1]) / (m_[k] - m_[k - 1]);
  return (1.0 - t) * H_[k - 1] + t * H_[k];
}

double CostFunction::slope_at_zero() const {
  if (!is_sampled()) {
    if (c_ == 0.0 || alpha_ > 1.0) return 0.0;
    return alpha_ < 1.0 ? kInfinity : c_;
  }
  double sup = 0.0;
  for (std::size_t j = 0; j < m_.size(); ++j) sup = std::max(sup, H_[j] / m_[j]);
  return sup > 1e8 ? kInfinity : sup;
}

double h_mass(const CostFunction& H, const AtomicMeasure& u) {
  u.validate();
  double total = 0.0;
  for (const auto& a : u.atoms) total += H(a.m);
  if (u.diffuse_mass > 0.0) total += H.slope_at_zero() * u.diffuse_mass;
  return total;
}

namespace {

bool linear_below(const CostFunction& H, std::span<const double> grid, double upto, double tol) {
  double lo = kInfinity, hi = 0.0;
  for (double m : grid) {
    if (m > upto * (1.0 + 1e-12) || m <= 0.0) continue;
    const double q = H(m) / m;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  if (upto > 0.0) {
    const double q = H(upto) / upto;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return hi - lo <= tol * hi;
}

}  // namespace

SubadditivityReport subadditivity_check(const CostFunction& H, std::span<const double> masses,
                                        double violation_tol) {
  for (double m : masses)
    if (!(m > 0.0)) throw std::invalid_argument("subadditivity_check: masses must be positive");
  const double limit = H.is_sampled() ? H.masses().back() * (1.0 + 1e-12) : kInfinity;
  SubadditivityReport rep;
  std::vector<double> grid(masses.begin(), masses.end());
  std::sort(grid.begin(), grid.end());
  bool all_linear = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i; j < grid.size(); ++j) {
      const double a = grid[i], b = grid[j];
      if (a + b > limit) continue;
      const double ha = H(a), hb = H(b);
      const double excess = H(a + b) - ha - hb;
      const double scale = ha + hb;
      if (excess > violation_tol * scale) {
        rep.violations.push_back({a, b, excess});
      } else if (std::abs(excess) <= 1e-9 * scale) {
        rep.equalities.push_back({a, b, excess});
        if (linear_below(H, grid, a + b, 1e-6)) {
          rep.linear_up_to = std::max(rep.linear_up_to.value_or(0.0), a + b);
        } else {
          all_linear = false;
        }
      }
    }
  }
  rep.linear_on_range = all_linear && rep.linear_up_to && *rep.linear_up_to >= grid.back();
  return rep;
}

PlateauReport detect_linear_plateau(const CostFunction& H, std::span<const double> grid, double tol) {
  std::vector<double> m;
  for (double x : grid) {
    if (x < 0.0) throw std::invalid_argument("detect_linear_plateau: negative grid mass");
    if (x > 0.0) m.push_back(x);
  }
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  std::vector<double> h(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) h[j] = H(m[j]);

  // Prefix [0, m_k] fits a line through the origin when the spread of the
  // ratios H/m allows one slope within tol of every sample.
  PlateauReport rep{0.0, true, false, ""};
  std::size_t plateau_end = 0;  // number of positive samples on the plateau
  double qlo = kInfinity, qhi = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (h[k] <= 0.0) break;
    const double q = h[k] / m[k];
    qlo = std::min(qlo, q);
    qhi = std::max(qhi, q);
    if ((qhi - qlo) / (qhi + qlo) > tol) break;
    if (k >= 1) plateau_end = k + 1;
  }
  if (plateau_end >= 2) rep.m_star = m[plateau_end - 1];

  // Strict concavity of consecutive triples from the plateau end on, the
  // origin counting as a sample.
  std::vector<double> xs{0.0}, ys{0.0};
  for (std::size_t j = 0; j < m.size(); ++j) {
    xs.push_back(m[j]);
    ys.push_back(h[j]);
  }
  const std::size_t start = plateau_end;  // index in xs of m_star (0 = origin)
  int weak = 0, convex = 0;
  for (std::size_t j = start + 1; j + 1 < xs.size(); ++j) {
    const double t = (xs[j] - xs[j - 1]) / (xs[j + 1] - xs[j - 1]);
    const double chord = (1.0 - t) * ys[j - 1] + t * ys[j + 1];
    const double deficit = ys[j] - chord;
    if (deficit <= tol * ys[j]) {
      rep.strictly_concave_beyond = false;
      ++weak;
      if (deficit < -tol * ys[j]) ++convex;
    }
  }
  if (convex > 0) {
    rep.inconclusive = true;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d triple(s) convex beyond tolerance; noise exceeds tol", convex);
    rep.note = buf;
  } else if (weak > 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d triple(s) concave by less than tol", weak);
    rep.note = buf;
  }
  return rep;
}

PlateauReport detect_linear_plateau(const CostFunction& H, double tol) {
  if (!H.is_sampled())
    throw std::invalid_argument("detect_linear_plateau: closed-form cost needs an explicit grid");
  return detect_linear_plateau(H, H.masses(), tol);
}

ConcavityReport concavity_check(std::span<const double> m, std::span<const double> H,
                                double monotone_slack, double concavity_slack) {
  if (m.size() != H.size()) throw std::invalid_argument("concavity_check: size mismatch");
  ConcavityReport rep{true, true, {}};
  char buf[200];
  for (std::size_t j = 1; j < m.size(); ++j) {
    if (H[j] < H[j - 1] - monotone_slack) {
      rep.monotone = false;
      std::snprintf(buf, sizeof buf, "H decreases between m=%g and m=%g", m[j - 1], m[j]);
      rep.failures.emplace_back(buf);
    }
  }
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      for (std::size_t k = j + 1; k < m.size(); ++k) {
        const double t = (m[j] - m[i]) / (m[k] - m[i]);
        const double chord = (1.0 - t) * H[i] + t * H[k];
        if (H[j] < chord - concavity_slack * (H[i] + H[k])) {
          rep.concave = false;
          std::snprintf(buf, sizeof buf, "chord (m=%g, m=%g) lies above H at m=%g", m[i], m[k], m[j]);
          rep.failures.emplace_back(buf);
        }
      }
  return rep;
}

}  // namespace masscost
