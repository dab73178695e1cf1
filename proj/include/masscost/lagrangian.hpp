#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace masscost {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Double-well-free potential W(u) of the droplet model. Either one of a few
/// closed forms parameterized by the exponent s, or a table (u_k, W_k) with
/// piecewise linear interpolation (through the origin below the first node)
/// and a power tail W(u_last) * (u / u_last)^s beyond the last node.
class Potential {
 public:
  enum class Builtin {
    Power,            // u^s
    PowerPlusLinear,  // u^s + u
    PowerExp,         // u^s (1 + e^{-u})
    LinearPower,      // min(u, u^s)
  };

  static Potential builtin(Builtin form, double s);
  static Potential table(std::vector<double> u, std::vector<double> w, double tail_exponent);

  double operator()(double u) const;
  double derivative(double u) const;

  bool is_table() const { return !table_u_.empty(); }
  std::optional<Builtin> builtin_form() const { return form_; }
  double exponent() const { return s_; }
  const std::vector<double>& table_u() const { return table_u_; }
  const std::vector<double>& table_w() const { return table_w_; }
  std::string describe() const;

 private:
  Potential() = default;
  std::optional<Builtin> form_;
  double s_ = 0.0;
  std::vector<double> table_u_;
  std::vector<double> table_w_;
};

std::optional<Potential::Builtin> parse_builtin_potential(const std::string& name);
std::string builtin_potential_name(Potential::Builtin form);

/// f(u, xi) = |xi|^p + u^s  (u^s read as 0 at u = 0).
struct PowerSum {
  double p;
  double s;
};

/// f(u, xi) = u^{p(1/p* - 1)} |xi|^p for u > 0, 0 otherwise; p* = pN/(N-p).
struct ScaleInvariant {
  double p;
};

/// f(u, xi) = (1 + u^{p(1/p* - 1)}) |xi|^p.
struct ScaleInvariantPerturbed {
  double p;
};

/// f_eps(u, xi) = eps^{Ns} W(eps^{-N} u) + |xi|^2.
struct DropletW {
  double s;
  Potential W;
  double eps;
};

/// f sampled on a (u, |xi|) grid, bilinear in between, +inf outside.
struct TabulatedF {
  std::vector<double> u;
  std::vector<double> xi;
  std::vector<double> f;  // f[i * xi.size() + j] = f(u[i], xi[j])
};

using LagrangianKind =
    std::variant<PowerSum, ScaleInvariant, ScaleInvariantPerturbed, DropletW, TabulatedF>;

/// Witness (alpha, beta, p) for the lower bound f >= alpha |xi|^p - beta u.
struct Coercivity {
  double alpha;
  double beta;
  double p;
};

/// Value and partial derivatives with respect to u and |xi|.
struct LocalValue {
  double f;
  double df_du;
  double df_dxi;
};

/// An isotropic, x-independent Lagrangian f(u, |xi|) on R^N.
class Lagrangian {
 public:
  /// Validates parameters; throws std::invalid_argument on bad input.
  Lagrangian(LagrangianKind kind, int dim, std::optional<Coercivity> coercivity = std::nullopt);

  static Lagrangian power_sum(double p, double s, int dim) { return {PowerSum{p, s}, dim}; }
  static Lagrangian scale_invariant(double p, int dim) { return {ScaleInvariant{p}, dim}; }
  static Lagrangian scale_invariant_perturbed(double p, int dim) {
    return {ScaleInvariantPerturbed{p}, dim};
  }
  static Lagrangian droplet(double s, Potential W, double eps, int dim) {
    return {DropletW{s, std::move(W), eps}, dim};
  }

  /// f(u, xi) with |xi| = xi_norm; may return +inf.
  double operator()(double u, double xi_norm) const;

  /// Partial derivatives. At u = 0 the u-derivative is the one-sided slope
  /// (possibly +inf, also used for a jump up of f at 0).
  LocalValue partials(double u, double xi_norm) const;

  const LagrangianKind& kind() const { return kind_; }
  int dim() const { return dim_; }
  std::string kind_name() const;

  /// Explicit witness if given, otherwise the natural one for the kind
  /// (none for tabulated Lagrangians).
  std::optional<Coercivity> coercivity() const;
  std::optional<Coercivity> explicit_coercivity() const { return coercivity_; }

  /// Same Lagrangian with the droplet parameter eps replaced; other kinds
  /// do not depend on eps and are returned unchanged.
  Lagrangian at_eps(double eps) const;

  /// True when u = 0 is a barrier: f_u(0+) = +inf or f jumps up at 0+, so the
  /// descent never re-enters a node from zero.
  bool zero_is_barrier() const;

  /// True when the potential part is non-increasing near 0+ (s <= 0), so that
  /// projected descent cannot shrink the support on its own.
  bool support_is_frozen() const;

  /// Exponent p of the gradient term.
  double gradient_exponent() const;

 private:
  LagrangianKind kind_;
  int dim_;
  std::optional<Coercivity> coercivity_;
};

/// Exponent p(1/p* - 1) = (N - p)/N - p of the scale-invariant Lagrangians.
double scale_invariant_weight_exponent(double p, int dim);

/// Lower slope f'_-(0+, 0) = liminf f(u, xi)/u as (u, xi) -> (0+, 0).
struct SlopeEstimate {
  double value;          // +inf when divergent
  bool analytic;         // closed form used
  double argmin_u = 0.0; // grid minimizer (numeric case)
  double argmin_xi = 0.0;
};

SlopeEstimate slope_at_zero(const Lagrangian& f);

struct SampleConfig {
  std::size_t samples = 10000;
  double u_max = 1e3;
  double xi_max = 1e3;
  double tolerance = 1e-9;  // relative slack for inequalities
};

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus s);

struct HypothesisResult {
  std::string name;  // "H1" ... "H6"
  CheckStatus status;
  std::string detail;
  std::optional<std::pair<double, double>> witness;  // (u, |xi|) of a failure
};

struct HypothesisReport {
  std::vector<HypothesisResult> results;
  const HypothesisResult& get(const std::string& name) const;
  bool all_pass() const;
};

/// Sampled checks of lower semicontinuity (H1), convexity in xi (H2),
/// f(0,0) = 0 (H3), coercivity (H5) and the slope condition (H6) with
/// rho(t) = t for N >= 2 and rho = 0 for N = 1.
HypothesisReport verify_hypotheses(const Lagrangian& f, const SampleConfig& cfg = {});

/// int_0^1 (int_y^1 dt/rho(t))^N dy for rho(t) = t, i.e. N!.
double slope_rho_integral(int dim);

}  // namespace masscost
