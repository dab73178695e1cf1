#include "masscost/lagrangian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace masscost {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double pow_fast(double x, double p) {
  if (p == 2.0) return x * x;
  if (p == 1.0) return x;
  if (p == 0.5) return std::sqrt(x);
  if (p == 3.0) return x * x * x;
  return std::pow(x, p);
}

// u^s with the convention 0^s = 0 for every s.
double power_or_zero(double u, double s) {
  if (u <= 0.0) return 0.0;
  if (s == 0.0) return 1.0;
  return pow_fast(u, s);
}

// Radical inverse in base b (Halton coordinate).
double radical_inverse(std::uint64_t k, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Potential

Potential Potential::builtin(Builtin form, double s) {
  if (!std::isfinite(s)) throw std::invalid_argument("Potential: exponent must be finite");
  Potential w;
  w.form_ = form;
  w.s_ = s;
  return w;
}

Potential Potential::table(std::vector<double> u, std::vector<double> w, double tail_exponent) {
  if (u.size() != w.size() || u.size() < 2)
    throw std::invalid_argument("Potential table: need at least two (u, W) rows");
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!std::isfinite(u[k]) || !std::isfinite(w[k]) || u[k] < 0.0 || w[k] < 0.0)
      throw std::invalid_argument("Potential table: entries must be finite and non-negative");
    if (k > 0 && !(u[k] > u[k - 1]))
      throw std::invalid_argument("Potential table: u column must be strictly increasing");
  }
  if (u.back() <= 0.0) throw std::invalid_argument("Potential table: last u must be positive");
  Potential p;
  p.s_ = tail_exponent;
  if (u.front() > 0.0) {
    u.insert(u.begin(), 0.0);
    w.insert(w.begin(), 0.0);
  }
  p.table_u_ = std::move(u);
  p.table_w_ = std::move(w);
  return p;
}

double Potential::operator()(double u) const {
  if (u < 0.0) return kInfinity;
  if (is_table()) {
    const double last = table_u_.back();
    if (u >= last) return table_w_.back() * std::pow(u / last, s_);
    const auto it = std::upper_bound(table_u_.begin(), table_u_.end(), u);
    const std::size_t k = static_cast<std::size_t>(it - table_u_.begin()) - 1;
    const double t = (u - table_u_[k]) / (table_u_[k + 1] - table_u_[k]);
    return (1.0 - t) * table_w_[k] + t * table_w_[k + 1];
  }
  if (u == 0.0) return 0.0;
  switch (*form_) {
    case Builtin::Power:
      return power_or_zero(u, s_);
    case Builtin::PowerPlusLinear:
      return power_or_zero(u, s_) + u;
    case Builtin::PowerExp:
      return power_or_zero(u, s_) * (1.0 + std::exp(-u));
    case Builtin::LinearPower:
      return std::min(u, power_or_zero(u, s_));
  }
  return kInfinity;
}

double Potential::derivative(double u) const {
  if (is_table()) {
    const double last = table_u_.back();
    if (u >= last) return table_w_.back() * s_ * std::pow(u / last, s_ - 1.0) / last;
    const auto it = std::upper_bound(table_u_.begin(), table_u_.end(), std::max(u, 0.0));
    const std::size_t k = static_cast<std::size_t>(it - table_u_.begin()) - 1;
    return (table_w_[k + 1] - table_w_[k]) / (table_u_[k + 1] - table_u_[k]);
  }
  const bool singular_at_zero = s_ < 1.0;
  switch (*form_) {
    case Builtin::Power:
      if (u <= 0.0) return singular_at_zero ? kInfinity : (s_ == 1.0 ? 1.0 : 0.0);
      return s_ == 0.0 ? 0.0 : s_ * std::pow(u, s_ - 1.0);
    case Builtin::PowerPlusLinear:
      if (u <= 0.0) return singular_at_zero ? kInfinity : (s_ == 1.0 ? 2.0 : 1.0);
      return (s_ == 0.0 ? 0.0 : s_ * std::pow(u, s_ - 1.0)) + 1.0;
    case Builtin::PowerExp: {
      if (u <= 0.0) return singular_at_zero ? kInfinity : 2.0 * s_;
      const double e = std::exp(-u);
      const double us = power_or_zero(u, s_);
      const double dus = s_ == 0.0 ? 0.0 : s_ * std::pow(u, s_ - 1.0);
      return dus * (1.0 + e) - us * e;
    }
    case Builtin::LinearPower:
      if (u <= 0.0) return 1.0;
      if (u <= power_or_zero(u, s_)) return 1.0;
      return s_ == 0.0 ? 0.0 : s_ * std::pow(u, s_ - 1.0);
  }
  return kInfinity;
}

std::string builtin_potential_name(Potential::Builtin form) {
  switch (form) {
    case Potential::Builtin::Power: return "power";
    case Potential::Builtin::PowerPlusLinear: return "power_plus_linear";
    case Potential::Builtin::PowerExp: return "power_exp";
    case Potential::Builtin::LinearPower: return "linear_power";
  }
  return "unknown";
}

std::optional<Potential::Builtin> parse_builtin_potential(const std::string& name) {
  for (auto form : {Potential::Builtin::Power, Potential::Builtin::PowerPlusLinear,
                    Potential::Builtin::PowerExp, Potential::Builtin::LinearPower}) {
    if (builtin_potential_name(form) == name) return form;
  }
  return std::nullopt;
}

std::string Potential::describe() const {
  if (is_table()) return "table(" + std::to_string(table_u_.size()) + " rows)";
  return "builtin:" + builtin_potential_name(*form_);
}

// ---------------------------------------------------------------- Lagrangian

double scale_invariant_weight_exponent(double p, int dim) {
  const double n = static_cast<double>(dim);
  const double p_star = p * n / (n - p);
  return p * (1.0 / p_star - 1.0);
}

Lagrangian::Lagrangian(LagrangianKind kind, int dim, std::optional<Coercivity> coercivity)
    : kind_(std::move(kind)), dim_(dim), coercivity_(coercivity) {
  if (dim_ < 1) throw std::invalid_argument("Lagrangian: dimension must be positive");
  const double n = static_cast<double>(dim_);
  std::visit(
      overloaded{
          [](const PowerSum& k) {
            if (!(k.p > 1.0) || !std::isfinite(k.p))
              throw std::invalid_argument("PowerSum: p must be > 1");
            if (!(k.s <= 1.0) || !std::isfinite(k.s))
              throw std::invalid_argument("PowerSum: s must be <= 1");
          },
          [n](const ScaleInvariant& k) {
            if (!(k.p > 1.0 && k.p < n))
              throw std::invalid_argument("ScaleInvariant: requires 1 < p < N");
          },
          [n](const ScaleInvariantPerturbed& k) {
            if (!(k.p > 1.0 && k.p < n))
              throw std::invalid_argument("ScaleInvariantPerturbed: requires 1 < p < N");
          },
          [](const DropletW& k) {
            if (!(k.s < 1.0)) throw std::invalid_argument("DropletW: s must be < 1");
            if (!(k.eps > 0.0) || !std::isfinite(k.eps))
              throw std::invalid_argument("DropletW: eps must be positive");
          },
          [](const TabulatedF& k) {
            if (k.u.size() < 2 || k.xi.size() < 2 || k.f.size() != k.u.size() * k.xi.size())
              throw std::invalid_argument("TabulatedF: inconsistent grid sizes");
            for (std::size_t i = 1; i < k.u.size(); ++i)
              if (!(k.u[i] > k.u[i - 1])) throw std::invalid_argument("TabulatedF: u grid not increasing");
            for (std::size_t j = 1; j < k.xi.size(); ++j)
              if (!(k.xi[j] > k.xi[j - 1])) throw std::invalid_argument("TabulatedF: xi grid not increasing");
            if (k.u.front() < 0.0 || k.xi.front() < 0.0)
              throw std::invalid_argument("TabulatedF: grids must start at a non-negative value");
            for (double v : k.f)
              if (!(v >= 0.0)) throw std::invalid_argument("TabulatedF: values must be non-negative");
          },
      },
      kind_);
  if (coercivity_) {
    if (!(coercivity_->alpha > 0.0) || !(coercivity_->beta >= 0.0) || !(coercivity_->p > 1.0))
      throw std::invalid_argument("coercivity witness needs alpha > 0, beta >= 0, p > 1");
  }
}

std::string Lagrangian::kind_name() const {
  return std::visit(overloaded{
                        [](const PowerSum&) { return std::string("power_sum"); },
                        [](const ScaleInvariant&) { return std::string("scale_invariant"); },
                        [](const ScaleInvariantPerturbed&) {
                          return std::string("scale_invariant_perturbed");
                        },
                        [](const DropletW&) { return std::string("droplet"); },
                        [](const TabulatedF&) { return std::string("tabulated"); },
                    },
                    kind_);
}

namespace {

struct BilinearCell {
  std::size_t i, j;
  double tu, tx;
};

std::optional<BilinearCell> locate(const TabulatedF& t, double u, double xi) {
  if (u < t.u.front() || u > t.u.back() || xi < t.xi.front() || xi > t.xi.back())
    return std::nullopt;
  auto cell = [](const std::vector<double>& g, double x) {
    auto it = std::upper_bound(g.begin(), g.end(), x);
    std::size_t k = static_cast<std::size_t>(it - g.begin());
    k = k == 0 ? 0 : k - 1;
    if (k >= g.size() - 1) k = g.size() - 2;
    return k;
  };
  const std::size_t i = cell(t.u, u);
  const std::size_t j = cell(t.xi, xi);
  return BilinearCell{i, j, (u - t.u[i]) / (t.u[i + 1] - t.u[i]),
                      (xi - t.xi[j]) / (t.xi[j + 1] - t.xi[j])};
}

LocalValue tabulated_partials(const TabulatedF& t, double u, double xi) {
  const auto c = locate(t, u, xi);
  if (!c) return {kInfinity, 0.0, 0.0};
  const std::size_t m = t.xi.size();
  const double f00 = t.f[c->i * m + c->j];
  const double f01 = t.f[c->i * m + c->j + 1];
  const double f10 = t.f[(c->i + 1) * m + c->j];
  const double f11 = t.f[(c->i + 1) * m + c->j + 1];
  const double du = t.u[c->i + 1] - t.u[c->i];
  const double dx = t.xi[c->j + 1] - t.xi[c->j];
  const double f = (1 - c->tu) * ((1 - c->tx) * f00 + c->tx * f01) +
                   c->tu * ((1 - c->tx) * f10 + c->tx * f11);
  const double fu = ((1 - c->tx) * (f10 - f00) + c->tx * (f11 - f01)) / du;
  const double fx = ((1 - c->tu) * (f01 - f00) + c->tu * (f11 - f10)) / dx;
  return {f, fu, fx};
}

// u^a |xi|^p evaluated in the log domain, 0 when xi = 0 or u = 0.
double weighted_gradient_power(double u, double a, double xi, double p) {
  if (xi <= 0.0 || u <= 0.0) return 0.0;
  return std::exp(a * std::log(u) + p * std::log(xi));
}

}  // namespace

double Lagrangian::operator()(double u, double xi) const {
  return partials(u, xi).f;
}

LocalValue Lagrangian::partials(double u, double xi) const {
  if (u < 0.0) return {kInfinity, 0.0, 0.0};
  const double n = static_cast<double>(dim_);
  return std::visit(
      overloaded{
          [&](const PowerSum& k) -> LocalValue {
            const double grad = pow_fast(xi, k.p);
            const double dgrad = k.p == 2.0 ? 2.0 * xi : k.p * std::pow(xi, k.p - 1.0);
            const double pot = power_or_zero(u, k.s);
            double dpot;
            if (u > 0.0) {
              dpot = k.s == 1.0 ? 1.0 : (k.s == 0.0 ? 0.0 : k.s * pow_fast(u, k.s - 1.0));
            } else {
              dpot = k.s < 1.0 ? kInfinity : 1.0;
            }
            return {grad + pot, dpot, dgrad};
          },
          [&](const ScaleInvariant& k) -> LocalValue {
            const double a = scale_invariant_weight_exponent(k.p, dim_);
            if (u <= 0.0) return {0.0, xi > 0.0 ? kInfinity : 0.0, 0.0};
            const double f = weighted_gradient_power(u, a, xi, k.p);
            return {f, a * f / u, xi > 0.0 ? k.p * f / xi : 0.0};
          },
          [&](const ScaleInvariantPerturbed& k) -> LocalValue {
            const double a = scale_invariant_weight_exponent(k.p, dim_);
            const double base = pow_fast(xi, k.p);
            const double dbase = k.p * std::pow(xi, k.p - 1.0);
            if (u <= 0.0) return {base, xi > 0.0 ? kInfinity : 0.0, dbase};
            const double w = weighted_gradient_power(u, a, xi, k.p);
            const double weight = u > 0.0 ? std::exp(a * std::log(u)) : 0.0;
            return {base + w, a * w / u, dbase * (1.0 + weight)};
          },
          [&](const DropletW& k) -> LocalValue {
            const double scale_in = std::pow(k.eps, -n);
            const double scale_out = std::pow(k.eps, n * k.s);
            const double v = u * scale_in;
            const double pot = scale_out * k.W(v);
            const double dW = k.W.derivative(v);
            const double dpot = std::isinf(dW) ? dW : scale_out * scale_in * dW;
            return {pot + xi * xi, dpot, 2.0 * xi};
          },
          [&](const TabulatedF& k) -> LocalValue { return tabulated_partials(k, u, xi); },
      },
      kind_);
}

std::optional<Coercivity> Lagrangian::coercivity() const {
  if (coercivity_) return coercivity_;
  return std::visit(overloaded{
                        [](const PowerSum& k) -> std::optional<Coercivity> {
                          return Coercivity{1.0, 0.0, k.p};
                        },
                        [](const ScaleInvariant& k) -> std::optional<Coercivity> {
                          return Coercivity{1.0, 0.0, k.p};
                        },
                        [](const ScaleInvariantPerturbed& k) -> std::optional<Coercivity> {
                          return Coercivity{1.0, 0.0, k.p};
                        },
                        [](const DropletW&) -> std::optional<Coercivity> {
                          return Coercivity{1.0, 0.0, 2.0};
                        },
                        [](const TabulatedF&) -> std::optional<Coercivity> { return std::nullopt; },
                    },
                    kind_);
}

Lagrangian Lagrangian::at_eps(double eps) const {
  if (const auto* d = std::get_if<DropletW>(&kind_)) {
    return Lagrangian(DropletW{d->s, d->W, eps}, dim_, coercivity_);
  }
  return *this;
}

bool Lagrangian::zero_is_barrier() const {
  return std::visit(overloaded{
                        [](const PowerSum& k) { return k.s < 1.0; },
                        [](const ScaleInvariant&) { return true; },
                        [](const ScaleInvariantPerturbed&) { return true; },
                        [](const DropletW& k) { return std::isinf(k.W.derivative(0.0)); },
                        [](const TabulatedF&) { return false; },
                    },
                    kind_);
}

bool Lagrangian::support_is_frozen() const {
  return std::visit(overloaded{
                        [](const PowerSum& k) { return k.s <= 0.0; },
                        [](const DropletW& k) {
                          return !k.W.is_table() && k.W.builtin_form() == Potential::Builtin::Power &&
                                 k.s <= 0.0;
                        },
                        [](const auto&) { return false; },
                    },
                    kind_);
}

double Lagrangian::gradient_exponent() const {
  return std::visit(overloaded{
                        [](const PowerSum& k) { return k.p; },
                        [](const ScaleInvariant& k) { return k.p; },
                        [](const ScaleInvariantPerturbed& k) { return k.p; },
                        [](const DropletW&) { return 2.0; },
                        [](const TabulatedF&) { return 2.0; },
                    },
                    kind_);
}

// ---------------------------------------------------------------- slope

namespace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  const double decades = std::log10(hi / lo);
  const int n = static_cast<int>(std::lround(decades * per_decade));
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) g[static_cast<std::size_t>(k)] = lo * std::pow(10.0, decades * k / n);
  return g;
}

// Minimum (or maximum) of a per-u ratio over the u-window [lo, hi].
double window_extreme(const std::vector<double>& us, const std::vector<double>& ratio, double lo,
                      double hi, bool take_max) {
  double best = take_max ? -kInfinity : kInfinity;
  for (std::size_t k = 0; k < us.size(); ++k) {
    if (us[k] < lo * (1 - 1e-12) || us[k] > hi * (1 + 1e-12)) continue;
    best = take_max ? std::max(best, ratio[k]) : std::min(best, ratio[k]);
  }
  return best;
}

}  // namespace

SlopeEstimate slope_at_zero(const Lagrangian& f) {
  if (const auto* k = std::get_if<PowerSum>(&f.kind())) {
    return {k->s < 1.0 ? kInfinity : 1.0, true};
  }
  const auto us = log_grid(1e-8, 1e-1, 10);
  auto xis = log_grid(1e-8, 1e-1, 10);
  xis.insert(xis.begin(), 0.0);

  std::vector<double> ratio(us.size());
  std::vector<double> arg_xi(us.size());
  for (std::size_t a = 0; a < us.size(); ++a) {
    double best = kInfinity;
    double best_xi = 0.0;
    for (double xi : xis) {
      const double r = f(us[a], xi) / us[a];
      if (r < best) {
        best = r;
        best_xi = xi;
      }
    }
    ratio[a] = best;
    arg_xi[a] = best_xi;
  }

  SlopeEstimate est{kInfinity, false};
  for (std::size_t a = 0; a < us.size(); ++a) {
    if (us[a] > 1e-5 * (1 + 1e-12)) continue;
    if (ratio[a] < est.value) {
      est.value = ratio[a];
      est.argmin_u = us[a];
      est.argmin_xi = arg_xi[a];
    }
  }
  const double tail = window_extreme(us, ratio, 1e-8, 1e-7, false);
  const double mid = window_extreme(us, ratio, 1e-6, 1e-5, false);
  if (tail > 2.0 * mid) est.value = kInfinity;
  return est;
}

double slope_rho_integral(int dim) { return std::tgamma(static_cast<double>(dim) + 1.0); }

// ---------------------------------------------------------------- hypotheses

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

const HypothesisResult& HypothesisReport::get(const std::string& name) const {
  for (const auto& r : results)
    if (r.name == name) return r;
  throw std::out_of_range("no hypothesis named " + name);
}

bool HypothesisReport::all_pass() const {
  return std::all_of(results.begin(), results.end(),
                     [](const HypothesisResult& r) { return r.status == CheckStatus::Pass; });
}

namespace {

struct SamplePoint {
  double u, xi, angle;
};

std::vector<SamplePoint> quasi_random_points(const SampleConfig& cfg) {
  std::vector<SamplePoint> pts;
  pts.reserve(cfg.samples);
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    const double a = radical_inverse(k + 1, 2);
    const double b = radical_inverse(k + 1, 3);
    const double c = radical_inverse(k + 1, 5);
    // Every other point is pushed towards the origin so that the small-u
    // behaviour is probed as densely as the bulk.
    const bool near_zero = (k % 2) == 1;
    const double u = near_zero ? cfg.u_max * std::pow(a, 6.0) : cfg.u_max * a;
    const double xi = near_zero ? cfg.xi_max * std::pow(b, 6.0) : cfg.xi_max * b;
    pts.push_back({(k % 97 == 0) ? 0.0 : u, (k % 89 == 0) ? 0.0 : xi, 2.0 * std::numbers::pi * c});
  }
  return pts;
}

std::string fmt_point(double u, double xi) {
  std::ostringstream os;
  os.precision(6);
  os << "(u=" << u << ", |xi|=" << xi << ")";
  return os.str();
}

HypothesisResult check_lsc(const Lagrangian& f, const std::vector<SamplePoint>& pts) {
  HypothesisResult res{"H1", CheckStatus::Pass, "sampled lower semicontinuity", std::nullopt};
  for (const auto& pt : pts) {
    const double center = f(pt.u, pt.xi);
    const double du = pt.u > 0.0 ? 1e-9 * pt.u : 1e-12;
    const double dx = pt.xi > 0.0 ? 1e-9 * pt.xi : 1e-12;
    double lowest = kInfinity;
    for (int su = -1; su <= 1; ++su) {
      for (int sx = -1; sx <= 1; ++sx) {
        if (su == 0 && sx == 0) continue;
        const double u = pt.u + su * du;
        const double xi = pt.xi + sx * dx;
        if (u < 0.0 || xi < 0.0) continue;
        lowest = std::min(lowest, f(u, xi));
      }
    }
    if (std::isinf(lowest)) continue;
    if (center > lowest * (1.0 + 1e-6) + 1e-12) {
      res.status = CheckStatus::Fail;
      res.detail = "f jumps down near " + fmt_point(pt.u, pt.xi);
      res.witness = {{pt.u, pt.xi}};
      return res;
    }
  }
  return res;
}

HypothesisResult check_convexity(const Lagrangian& f, const std::vector<SamplePoint>& pts,
                                 double tol) {
  HypothesisResult res{"H2", CheckStatus::Pass, "midpoint convexity in xi", std::nullopt};
  const bool scalar = f.dim() == 1;
  for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
    const double u = pts[k].u;
    const double r1 = pts[k].xi;
    const double r2 = pts[k + 1].xi;
    double mid;
    if (scalar) {
      // Opposite signs are the hard case for |xi|-dependent convexity.
      const double x1 = r1;
      const double x2 = (k / 2) % 2 == 0 ? r2 : -r2;
      mid = std::abs(0.5 * (x1 + x2));
    } else {
      const double t1 = pts[k].angle;
      const double t2 = pts[k + 1].angle;
      const double mx = 0.5 * (r1 * std::cos(t1) + r2 * std::cos(t2));
      const double my = 0.5 * (r1 * std::sin(t1) + r2 * std::sin(t2));
      mid = std::hypot(mx, my);
    }
    const double lhs = f(u, mid);
    const double rhs = 0.5 * (f(u, r1) + f(u, r2));
    if (std::isinf(rhs)) continue;
    if (lhs > rhs * (1.0 + tol) + tol) {
      res.status = CheckStatus::Fail;
      res.detail = "midpoint convexity violated at " + fmt_point(u, mid);
      res.witness = {{u, mid}};
      return res;
    }
  }
  return res;
}

HypothesisResult check_coercivity(const Lagrangian& f, const std::vector<SamplePoint>& pts,
                                  double tol) {
  const auto w = f.coercivity();
  if (!w) return {"H5", CheckStatus::Skipped, "no coercivity witness supplied", std::nullopt};
  std::ostringstream d;
  d << "f >= " << w->alpha << "|xi|^" << w->p << " - " << w->beta << " u";
  HypothesisResult res{"H5", CheckStatus::Pass, d.str(), std::nullopt};
  double worst = 0.0;
  for (const auto& pt : pts) {
    // grad u = 0 a.e. on {u = 0}, so (0, xi != 0) never enters an energy.
    if (pt.u == 0.0 && pt.xi > 0.0) continue;
    const double lhs = f(pt.u, pt.xi);
    const double rhs = w->alpha * std::pow(pt.xi, w->p) - w->beta * pt.u;
    const double excess = (rhs - lhs) / (1.0 + std::abs(rhs));
    if (excess > tol && excess > worst) {
      worst = excess;
      res.status = CheckStatus::Fail;
      res.witness = {{pt.u, pt.xi}};
    }
  }
  if (res.status == CheckStatus::Fail)
    res.detail += "; violated, worst at " + fmt_point(res.witness->first, res.witness->second);
  return res;
}

HypothesisResult check_slope(const Lagrangian& f) {
  const auto lower = slope_at_zero(f);
  const auto us = log_grid(1e-8, 1e-1, 10);
  std::vector<double> ratio(us.size());
  const bool one_dim = f.dim() == 1;
  for (std::size_t a = 0; a < us.size(); ++a) {
    const double xi = one_dim ? 0.0 : us[a];  // rho(t) = t, rho = 0 in 1D
    ratio[a] = f(us[a], xi) / us[a];
  }
  double upper = window_extreme(us, ratio, 1e-8, 1e-5, true);
  const double tail = window_extreme(us, ratio, 1e-8, 1e-7, true);
  const double mid = window_extreme(us, ratio, 1e-6, 1e-5, true);
  if (tail > 2.0 * mid) upper = kInfinity;

  std::ostringstream d;
  d << "liminf f/u = " << lower.value << ", limsup f(u,rho(u))/u = " << upper;
  if (!one_dim) d << ", rho(t)=t with integral " << slope_rho_integral(f.dim());
  HypothesisResult res{"H6", CheckStatus::Pass, d.str(), std::nullopt};
  const bool ok = std::isinf(lower.value) ||
                  (!std::isinf(upper) && lower.value >= upper * (1.0 - 1e-3) - 1e-9);
  if (!ok) {
    res.status = CheckStatus::Fail;
    res.witness = {{1e-8, one_dim ? 0.0 : 1e-8}};
  }
  return res;
}

}  // namespace

HypothesisReport verify_hypotheses(const Lagrangian& f, const SampleConfig& cfg) {
  const auto pts = quasi_random_points(cfg);
  HypothesisReport report;
  report.results.push_back(check_lsc(f, pts));
  report.results.push_back(check_convexity(f, pts, cfg.tolerance));
  const double f00 = f(0.0, 0.0);
  report.results.push_back({"H3", f00 == 0.0 ? CheckStatus::Pass : CheckStatus::Fail,
                            "f(0,0) = " + std::to_string(f00),
                            f00 == 0.0 ? std::nullopt
                                       : std::optional<std::pair<double, double>>({0.0, 0.0})});
  report.results.push_back(check_coercivity(f, pts, cfg.tolerance));
  report.results.push_back(check_slope(f));
  return report;
}

}  // namespace masscost
