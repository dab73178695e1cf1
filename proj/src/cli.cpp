#include "masscost/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "masscost/bubbles.hpp"
#include "masscost/energy.hpp"
#include "masscost/exponents.hpp"
#include "masscost/gamma_lab.hpp"
#include "masscost/hmass.hpp"
#include "masscost/io.hpp"
#include "masscost/radial_solver.hpp"

namespace masscost {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string num(double x) { return fmt("%.15g", x); }

// Files are rendered in memory first so that a failing run writes nothing.
struct Output {
  std::vector<std::pair<std::string, std::string>> files;

  void add(const std::string& name, const std::string& body) { files.emplace_back(name, body); }
  void json(const std::string& name, const Json& j) { add(name, j.dump(2) + "\n"); }

  void flush(const fs::path& dir) const {
    fs::create_directories(dir);
    for (const auto& [name, body] : files) {
      std::ofstream f(dir / name, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
      f << body;
    }
  }
};

struct Common {
  std::string out_dir;
  std::uint64_t seed = 0;
};

struct SolverFlags {
  std::size_t n = 2000;
  double radius = 0.0;
  int restarts = 5;
  int max_iter = 50000;
  double tol = 1e-8;

  void add_to(CLI::App* app) {
    app->add_option("--n", n, "radial grid intervals")->check(CLI::Range(16, 1000000));
    app->add_option("--radius", radius, "fixed outer radius (default: adaptive doubling from 10)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--restarts", restarts, "seeded initializations")->check(CLI::Range(1, 100));
    app->add_option("--max-iter", max_iter, "iteration cap per descent")->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "relative projected-gradient tolerance")->check(CLI::PositiveNumber);
  }

  SolverConfig config(std::uint64_t seed) const {
    SolverConfig c;
    c.n = n;
    if (radius > 0.0) c.outer_radius = radius;
    c.restarts = restarts;
    c.max_iterations = max_iter;
    c.tolerance = tol;
    c.seed = seed;
    return c;
  }
};

fs::path output_dir(const Common& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "masscost-out";
}

std::string render(const std::function<void(std::ostream&)>& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal cost functions of mass-constrained integral functionals", "masscost"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--out", common.out_dir, "output directory (default $MASSCOST_OUT_DIR or ./masscost-out)");
  app.add_option("--seed", common.seed, "global seed");

  std::function<int()> action;
  Output output;

  // exponents
  double ex_s = 0.0, ex_p = 2.0;
  int ex_N = 1;
  std::optional<int> ex_d;
  std::optional<double> ex_alpha;
  bool ex_json = false;
  auto* ex = app.add_subcommand("exponents", "closed-form scaling exponents");
  ex->add_option("--s", ex_s, "potential exponent s")->required();
  ex->add_option("--p", ex_p, "gradient exponent p")->required();
  ex->add_option("--N", ex_N, "dimension")->required()->check(CLI::PositiveNumber);
  ex->add_option("--d", ex_d, "branched transport dimension (default N+1)");
  ex->add_option("--bt-alpha", ex_alpha, "exponent fed to the branched transport formulas (default alpha)");
  ex->add_flag("--json", ex_json, "print JSON instead of text");
  ex->callback([&] {
    action = [&] {
      const auto r = exponent_report(ex_s, ex_p, ex_N, ex_d, ex_alpha);
      const Json j = to_json(r);
      output.json("exponents.json", j);
      if (ex_json) {
        out << j.dump(2) << "\n";
        return kExitOk;
      }
      auto line = [&out](const std::string& k, const std::string& v) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-22s %s\n", k.c_str(), v.c_str());
        out << buf;
      };
      line("alpha", num(r.alpha.alpha) + (r.alpha.nontrivial ? "  (non-trivial)" : "  (outside (-p', 1])"));
      line("lambda exponent", num(r.lambda_exponent));
      if (r.scale_invariant_alpha) line("scale-invariant alpha", num(*r.scale_invariant_alpha));
      if (r.droplet) {
        line("droplet rho", num(r.droplet->rho));
        line("epsbar exponent", num(r.droplet->epsbar_exponent));
      }
      if (r.branched) {
        const auto& b = *r.branched;
        line("bt d", std::to_string(*r.bt_dimension));
        line("bt beta", num(b.beta));
        line("bt gamma1", num(b.gamma1));
        line("bt gamma2", num(b.gamma2));
        line("bt supercritical", b.supercritical ? "yes" : "no");
        line("bt attainable", b.attainable ? "yes" : "no");
      }
      return kExitOk;
    };
  });

  // verify
  std::string lag_path;
  SampleConfig sample_cfg;
  auto* ve = app.add_subcommand("verify", "sampled hypothesis checks of a Lagrangian");
  ve->add_option("--lagrangian", lag_path, "Lagrangian config file")->required();
  ve->add_option("--samples", sample_cfg.samples, "quasi-random sample count")->check(CLI::PositiveNumber);
  ve->add_option("--u-max", sample_cfg.u_max, "largest sampled u")->check(CLI::PositiveNumber);
  ve->add_option("--xi-max", sample_cfg.xi_max, "largest sampled |xi|")->check(CLI::PositiveNumber);
  ve->callback([&] {
    action = [&] {
      const auto f = load_lagrangian(lag_path);
      const auto rep = verify_hypotheses(f, sample_cfg);
      output.json("verify.json", to_json(rep));
      for (const auto& h : rep.results) out << h.name << " " << to_string(h.status) << ": " << h.detail << "\n";
      return kExitOk;
    };
  });

  // cost-curve
  std::string masses_spec;
  SolverFlags cc_flags;
  unsigned workers = 1;
  auto* cc = app.add_subcommand("cost-curve", "sampled minimal cost m -> H(m) with a power-law fit");
  cc->add_option("--lagrangian", lag_path, "Lagrangian config file")->required();
  cc->add_option("--masses", masses_spec, "geom:lo:hi:count, lin:lo:hi:count or a comma list")->required();
  cc->add_option("--workers", workers, "parallel workers")->check(CLI::Range(1, 256));
  cc_flags.add_to(cc);
  cc->callback([&] {
    action = [&] {
      const auto f = load_lagrangian(lag_path);
      const auto masses = parse_sequence(masses_spec);
      const auto curve = cost_curve(f, masses, cc_flags.config(common.seed), workers);
      output.add("cost_curve.csv", render([&](std::ostream& os) { write_cost_curve_csv(os, curve); }));
      output.json("cost_curve.json", to_json(curve));
      bool ok = true;
      for (const auto& s : curve.samples) {
        out << "m=" << num(s.m) << " H=" << num(s.H) << " " << to_string(s.status) << "\n";
        ok = ok && s.status == SolverStatus::Converged;
      }
      if (curve.fit)
        out << "fit alpha_hat=" << num(curve.fit->alpha) << " c_hat=" << num(curve.fit->c)
            << " r_squared=" << num(curve.fit->r_squared) << "\n";
      else
        out << "fit skipped: " << curve.fit_note << "\n";
      return ok ? kExitOk : kExitNotConverged;
    };
  });

  // profile
  double mass = 1.0;
  SolverFlags pr_flags;
  auto* pr = app.add_subcommand("profile", "optimal radial profile for one mass");
  pr->add_option("--lagrangian", lag_path, "Lagrangian config file")->required();
  pr->add_option("--mass", mass, "mass m")->required()->check(CLI::NonNegativeNumber);
  pr_flags.add_to(pr);
  pr->callback([&] {
    action = [&] {
      const auto f = load_lagrangian(lag_path);
      const auto r = minimize_profile(f, mass, pr_flags.config(common.seed));
      output.add("profile.csv", render([&](std::ostream& os) { write_profile_csv(os, r.profile); }));
      output.json("profile.json", to_json(r));
      out << "m=" << num(mass) << " E=" << num(r.energy) << " " << to_string(r.status)
          << " R=" << num(r.profile.outer_radius()) << (r.truncation_active ? " truncation-active" : "") << "\n";
      return r.status == SolverStatus::Converged ? kExitOk : kExitNotConverged;
    };
  });

  // slope-profile
  int sp_N = 2;
  double sp_eps = 1e-2;
  std::size_t sp_n = 6000;
  double sp_R = 60.0;
  auto* sp = app.add_subcommand("slope-profile", "profile eps*exp(-r) of the slope construction");
  sp->add_option("--N", sp_N, "dimension (>= 2)")->required();
  sp->add_option("--eps", sp_eps, "eps")->required()->check(CLI::PositiveNumber);
  sp->add_option("--lagrangian", lag_path, "optional Lagrangian for the energy per mass");
  sp->add_option("--n", sp_n, "radial grid intervals")->check(CLI::Range(16, 10000000));
  sp->add_option("--radius", sp_R, "outer radius")->check(CLI::PositiveNumber);
  sp->callback([&] {
    action = [&] {
      std::optional<Lagrangian> f;
      if (!lag_path.empty()) f = load_lagrangian(lag_path);
      const auto s = slope_construction_profile(sp_eps, sp_N, f ? &*f : nullptr, sp_n, sp_R);
      output.add("slope_profile.csv", render([&](std::ostream& os) { write_profile_csv(os, s.profile); }));
      output.json("slope_profile.json", to_json(s));
      out << "mass=" << num(s.mass) << " closed_form=" << num(s.closed_form_mass);
      if (s.energy_per_mass) out << " energy_per_mass=" << num(*s.energy_per_mass);
      out << "\n";
      return kExitOk;
    };
  });

  // bubbles
  std::string density_path;
  BubbleParams bp{1.0, 0.01, 64, std::nullopt};
  auto* bu = app.add_subcommand("bubbles", "greedy bubble decomposition of a density");
  bu->add_option("--density", density_path, "density csv (x,value or x,y,value)")->required();
  bu->add_option("--radius", bp.radius, "scan radius")->required()->check(CLI::PositiveNumber);
  bu->add_option("--floor", bp.floor, "mass floor delta")->required()->check(CLI::PositiveNumber);
  bu->add_option("--max-bubbles", bp.max_bubbles, "bubble cap")->check(CLI::PositiveNumber);
  bu->add_option("--growth-tol", bp.growth_tolerance, "radius growth tolerance (mass per unit radius)");
  bu->callback([&] {
    action = [&] {
      const auto u = read_density_file(density_path);
      const auto set = extract_bubbles(u, bp);
      output.json("bubbles.json", to_json(set));
      GridDensity rest(u.dim(), u.origin(), u.spacing(), u.shape(), set.remainder);
      output.add("remainder.csv", render([&](std::ostream& os) { write_density_csv(os, rest); }));
      for (const auto& b : set.bubbles)
        out << "bubble center=" << num(b.center[0]) << (u.dim() == 2 ? "," + num(b.center[1]) : std::string())
            << " radius=" << num(b.radius) << " mass=" << num(b.mass) << "\n";
      out << "remainder=" << num(set.remainder_mass) << " vanishing_sup=" << num(set.vanishing_sup)
          << (set.incomplete ? " incomplete" : "") << "\n";
      return kExitOk;
    };
  });

  // gamma-run
  std::string eps_spec;
  GammaConfig gcfg;
  std::string init_policy = "single";
  bool cold = false, no_prediction = false;
  auto* gr = app.add_subcommand("gamma-run", "minimize the rescaled energies along an eps schedule");
  gr->add_option("--lagrangian", lag_path, "Lagrangian config file")->required();
  gr->add_option("--mass", mass, "mass m")->required()->check(CLI::PositiveNumber);
  gr->add_option("--eps", eps_spec, "strictly decreasing schedule (geom:1:0.03125:6 or list)")->required();
  gr->add_option("--cells", gcfg.cells, "cells per axis");
  gr->add_option("--box", gcfg.box, "box side length")->check(CLI::PositiveNumber);
  gr->add_option("--init", init_policy, "single, two-bump or uniform");
  gr->add_flag("--cold", cold, "cold start at every eps");
  gr->add_flag("--no-prediction", no_prediction, "skip the radial H(m) prediction");
  gr->add_option("--max-iter", gcfg.descent.max_iterations, "iteration cap per eps")->check(CLI::PositiveNumber);
  gr->add_option("--tol", gcfg.descent.tolerance, "relative projected-gradient tolerance")->check(CLI::PositiveNumber);
  gr->callback([&] {
    action = [&] {
      const auto f = load_lagrangian(lag_path);
      gcfg.dim = f.dim();
      gcfg.init = parse_init_policy(init_policy);
      gcfg.warm_start = !cold;
      const auto schedule = parse_sequence(eps_spec);
      std::optional<CostFunction> H;
      int code = kExitOk;
      if (!no_prediction) {
        SolverConfig sc;
        sc.seed = common.seed;
        const auto r = minimize_profile(f.at_eps(schedule.back()), mass, sc);
        if (r.status != SolverStatus::Converged) code = kExitNotConverged;
        H = CostFunction::sampled({mass}, {r.energy});
      }
      const auto run = gamma_sweep(f, mass, schedule, gcfg, H ? &*H : nullptr);
      output.json("gamma.json", to_json(run));
      output.add("gamma_trace.csv", render([&](std::ostream& os) { write_gamma_trace_csv(os, run); }));
      for (std::size_t k = 0; k < run.steps.size(); ++k) {
        const auto& s = run.steps[k];
        output.add("gamma_density_" + std::to_string(k) + ".csv",
                   render([&](std::ostream& os) { write_density_csv(os, s.snapshot); }));
        out << "eps=" << num(s.eps) << " E=" << num(s.energy) << " concentration=" << fmt("%.6f", s.concentration)
            << " droplets=" << s.droplets << " " << to_string(s.status) << "\n";
      }
      if (run.relative_gap) out << "prediction=" << num(*run.prediction) << " gap=" << num(*run.relative_gap) << "\n";
      if (!run.all_converged()) code = kExitNotConverged;
      return code;
    };
  });

  // droplet-check
  std::string W_spec;
  double dc_s = 0.5, dc_delta = 0.9;
  std::string dc_eps = "0.1";
  int dc_N = 1;
  std::size_t dc_cells = 256, dc_samples = 10000;
  auto* dc = app.add_subcommand("droplet-check", "droplet rescaling identity and the lower bound on W_eps");
  dc->add_option("--W", W_spec, "builtin:<name> or csv:<path>")->required();
  dc->add_option("--s", dc_s, "exponent s < 1")->required();
  dc->add_option("--eps", dc_eps, "eps value or list")->required();
  dc->add_option("--N", dc_N, "dimension (1 or 2)")->check(CLI::Range(1, 2));
  dc->add_option("--cells", dc_cells, "cells per axis of the random test density")->check(CLI::Range(8, 4096));
  dc->add_option("--delta", dc_delta, "delta in (0,1)");
  dc->add_option("--samples", dc_samples, "u samples for the lower bound")->check(CLI::PositiveNumber);
  dc->callback([&] {
    action = [&] {
      const auto W = parse_potential(W_spec, dc_s);
      const auto eps = parse_sequence(dc_eps);
      std::mt19937_64 rng(derive_seed(common.seed, 0));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double h = 8.0 / static_cast<double>(dc_cells);
      const std::array<std::size_t, 2> shape{dc_cells, dc_N == 2 ? dc_cells : 1};
      auto u = GridDensity::zeros(dc_N, {-4.0 + 0.5 * h, dc_N == 2 ? -4.0 + 0.5 * h : 0.0}, h, shape);
      for (int b = 0; b < 3; ++b) {
        const double cx = -2.0 + 4.0 * unit(rng), cy = -2.0 + 4.0 * unit(rng);
        const double w = 0.3 + unit(rng), a = 0.2 + unit(rng);
        for (std::size_t k = 0; k < u.size(); ++k) {
          const auto x = u.position(k);
          double d2 = (x[0] - cx) * (x[0] - cx);
          if (dc_N == 2) d2 += (x[1] - cy) * (x[1] - cy);
          u[k] += a * std::exp(-0.5 * d2 / (w * w));
        }
      }
      Json checks = Json::array();
      double worst = 0.0;
      for (double e : eps) {
        const double d = droplet_equivalence_check(W, dc_s, e, u);
        worst = std::max(worst, d);
        checks.push_back({{"eps", e}, {"discrepancy", d}});
        out << "eps=" << num(e) << " discrepancy=" << fmt("%.3e", d) << "\n";
      }
      std::vector<double> samples(dc_samples);
      for (auto& x : samples) x = std::pow(10.0, -8.0 + 12.0 * unit(rng));
      const auto lemma = lemma_w_bound_check(W, dc_s, dc_delta, eps, samples, dc_N);
      Json j{{"W", W.describe()}, {"s", dc_s}, {"N", dc_N}, {"identity", checks}, {"max_discrepancy", worst}};
      j["lower_bound"] = to_json(lemma);
      output.json("droplet_check.json", j);
      if (lemma.hypotheses_pass)
        out << "c_delta=" << num(*lemma.c_delta) << " M=" << num(*lemma.threshold) << " violations=" << lemma.violations
            << "/" << lemma.samples << "\n";
      else
        for (const auto& h : lemma.hypotheses)
          if (!h.pass) out << h.name << " fails: " << h.detail << "\n";
      return worst <= 1e-12 && (!lemma.hypotheses_pass || lemma.violations == 0) ? kExitOk : kExitNotConverged;
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitValidation;
  }
  if (!action) {
    err << app.help();
    return kExitValidation;
  }
  int code;
  try {
    code = action();
    output.flush(output_dir(common));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return code;
}

}  // namespace masscost
