#include "masscost/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace masscost {

namespace fs = std::filesystem;

// ------------------------------------------------------------------ CSV

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const CsvRow& header, const std::vector<CsvRow>& rows) {
  auto line = [&os](const CsvRow& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::vector<CsvRow> read_csv(std::istream& is) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false, any = false;
  char c;
  auto end_row = [&] {
    row.push_back(field);
    field.clear();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(row);
    row.clear();
    any = false;
  };
  while (is.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\r') {
      if (is.peek() == '\n') is.get(c);
      end_row();
    } else if (c == '\n') {
      end_row();
    } else {
      field += c;
    }
  }
  if (quoted) throw std::invalid_argument("csv: unterminated quoted field");
  if (any) end_row();
  return rows;
}

std::vector<CsvRow> read_csv_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");
  return read_csv(in);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_number(const std::string& raw, const std::string& what) {
  std::string s = raw;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  s = s.substr(b);
  if (s == "inf" || s == "+inf") return kInfinity;
  if (s == "-inf") return -kInfinity;
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto r = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::invalid_argument(what + ": '" + raw + "' is not a number");
  return v;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool is_header(const CsvRow& row) {
  for (const auto& f : row) {
    try {
      parse_number(f, "");
    } catch (const std::invalid_argument&) {
      return true;
    }
  }
  return false;
}

int parse_int(const std::string& s, const std::string& what) {
  const double v = parse_number(s, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument(what + " must be an integer");
  return static_cast<int>(v);
}

fs::path resolve(const std::string& p, const fs::path& base) {
  fs::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace

// ------------------------------------------------------------------ config

std::map<std::string, std::string> parse_key_values(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw std::invalid_argument("config: duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

Potential read_potential_csv(const fs::path& path, double s) {
  auto rows = read_csv_file(path);
  if (!rows.empty() && is_header(rows.front())) rows.erase(rows.begin());
  std::vector<double> u, w;
  for (const auto& r : rows) {
    if (r.size() != 2) throw std::invalid_argument("potential csv: expected two columns u,W");
    u.push_back(parse_number(r[0], "potential u"));
    w.push_back(parse_number(r[1], "potential W"));
  }
  return Potential::table(std::move(u), std::move(w), s);
}

Potential parse_potential(const std::string& spec, double s, const fs::path& base_dir) {
  if (spec.rfind("builtin:", 0) == 0) {
    const auto form = parse_builtin_potential(spec.substr(8));
    if (!form) throw std::invalid_argument("unknown builtin potential '" + spec.substr(8) + "'");
    return Potential::builtin(*form, s);
  }
  if (spec.rfind("csv:", 0) == 0) return read_potential_csv(resolve(spec.substr(4), base_dir), s);
  throw std::invalid_argument("potential must be builtin:<name> or csv:<path>, got '" + spec + "'");
}

Lagrangian lagrangian_from_config(const std::map<std::string, std::string>& kv, const fs::path& base_dir) {
  static const std::vector<std::string> known{"kind", "N", "p", "s", "eps", "W", "table", "coercivity", "isotropic"};
  for (const auto& [k, v] : kv)
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw std::invalid_argument("config: unknown key '" + k + "'");
  auto get = [&](const std::string& k) -> const std::string& {
    const auto it = kv.find(k);
    if (it == kv.end()) throw std::invalid_argument("config: missing key '" + k + "'");
    return it->second;
  };
  auto num = [&](const std::string& k) { return parse_number(get(k), "config key " + k); };

  if (kv.count("isotropic")) {
    const auto& v = kv.at("isotropic");
    if (v == "false") throw std::invalid_argument("config: anisotropic Lagrangians are not supported");
    if (v != "true") throw std::invalid_argument("config: isotropic must be true or false");
  }
  const std::string kind = get("kind");
  const int dim = parse_int(get("N"), "config key N");
  std::optional<Coercivity> coercivity;
  if (kv.count("coercivity")) {
    std::stringstream ss(kv.at("coercivity"));
    std::string part;
    std::vector<double> v;
    while (std::getline(ss, part, ',')) v.push_back(parse_number(part, "coercivity"));
    if (v.size() != 3) throw std::invalid_argument("config: coercivity needs alpha,beta,p");
    coercivity = Coercivity{v[0], v[1], v[2]};
  }

  if (kind == "power_sum") return Lagrangian(PowerSum{num("p"), num("s")}, dim, coercivity);
  if (kind == "scale_invariant") return Lagrangian(ScaleInvariant{num("p")}, dim, coercivity);
  if (kind == "scale_invariant_perturbed") return Lagrangian(ScaleInvariantPerturbed{num("p")}, dim, coercivity);
  if (kind == "droplet") {
    const double s = num("s");
    const double eps = kv.count("eps") ? num("eps") : 1.0;
    return Lagrangian(DropletW{s, parse_potential(get("W"), s, base_dir), eps}, dim, coercivity);
  }
  if (kind == "tabulated") {
    auto rows = read_csv_file(resolve(get("table"), base_dir));
    if (!rows.empty() && is_header(rows.front())) rows.erase(rows.begin());
    std::vector<double> us, xs;
    std::map<std::pair<double, double>, double> values;
    for (const auto& r : rows) {
      if (r.size() != 3) throw std::invalid_argument("table csv: expected columns u,xi,f");
      const double u = parse_number(r[0], "table u"), xi = parse_number(r[1], "table xi");
      values[{u, xi}] = parse_number(r[2], "table f");
      us.push_back(u);
      xs.push_back(xi);
    }
    for (auto* v : {&us, &xs}) {
      std::sort(v->begin(), v->end());
      v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    TabulatedF t{us, xs, std::vector<double>(us.size() * xs.size())};
    for (std::size_t i = 0; i < us.size(); ++i)
      for (std::size_t j = 0; j < xs.size(); ++j) {
        const auto it = values.find({us[i], xs[j]});
        if (it == values.end()) throw std::invalid_argument("table csv: the (u, xi) grid is incomplete");
        t.f[i * xs.size() + j] = it->second;
      }
    return Lagrangian(std::move(t), dim, coercivity);
  }
  throw std::invalid_argument("config: unknown kind '" + kind + "'");
}

Lagrangian load_lagrangian(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open lagrangian config '" + path.string() + "'");
  return lagrangian_from_config(parse_key_values(in), path.parent_path());
}

std::string lagrangian_to_config(const Lagrangian& f) {
  std::ostringstream os;
  os << "kind = " << f.kind_name() << "\n";
  os << "N = " << f.dim() << "\n";
  std::visit(
      [&os](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PowerSum>) {
          os << "p = " << format_number(k.p) << "\ns = " << format_number(k.s) << "\n";
        } else if constexpr (std::is_same_v<K, ScaleInvariant> || std::is_same_v<K, ScaleInvariantPerturbed>) {
          os << "p = " << format_number(k.p) << "\n";
        } else if constexpr (std::is_same_v<K, DropletW>) {
          if (k.W.is_table()) throw std::invalid_argument("tabulated potentials are written as csv files");
          os << "s = " << format_number(k.s) << "\nW = " << k.W.describe() << "\neps = " << format_number(k.eps)
             << "\n";
        } else {
          throw std::invalid_argument("tabulated Lagrangians are written as csv files");
        }
      },
      f.kind());
  if (const auto c = f.explicit_coercivity())
    os << "coercivity = " << format_number(c->alpha) << "," << format_number(c->beta) << "," << format_number(c->p)
       << "\n";
  return os.str();
}

std::vector<double> parse_sequence(const std::string& spec) {
  std::vector<double> out;
  for (const char* prefix : {"geom:", "lin:"}) {
    if (spec.rfind(prefix, 0) != 0) continue;
    std::stringstream ss(spec.substr(std::string(prefix).size()));
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw std::invalid_argument("sequence: expected " + std::string(prefix) + "lo:hi:count");
    const double lo = parse_number(parts[0], "sequence start");
    const double hi = parse_number(parts[1], "sequence end");
    const int count = parse_int(parts[2], "sequence count");
    if (count < 1) throw std::invalid_argument("sequence: count must be >= 1");
    const bool geom = prefix[0] == 'g';
    if (geom && !(lo > 0.0 && hi > 0.0)) throw std::invalid_argument("sequence: geometric ends must be positive");
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      out.push_back(geom ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    if (count > 1) out.back() = hi;
    return out;
  }
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_number(part, "sequence entry"));
  if (out.empty()) throw std::invalid_argument("sequence: empty");
  return out;
}

// ------------------------------------------------------------------ densities

void write_density_csv(std::ostream& os, const GridDensity& u) {
  std::vector<CsvRow> rows;
  rows.reserve(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const auto x = u.position(k);
    if (u.dim() == 1)
      rows.push_back({format_number(x[0]), format_number(u[k])});
    else
      rows.push_back({format_number(x[0]), format_number(x[1]), format_number(u[k])});
  }
  write_csv(os, u.dim() == 1 ? CsvRow{"x", "value"} : CsvRow{"x", "y", "value"}, rows);
}

namespace {

// Uniform spacing from sorted distinct coordinates.
double uniform_spacing(const std::vector<double>& xs, const std::string& axis) {
  if (xs.size() < 2) throw std::invalid_argument("density csv: need at least two " + axis + " values");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (std::abs(xs[i] - xs[i - 1] - h) > 1e-6 * h)
      throw std::invalid_argument("density csv: " + axis + " values are not uniformly spaced");
  return h;
}

}  // namespace

GridDensity read_density_csv(std::istream& is) {
  auto rows = read_csv(is);
  if (rows.empty()) throw std::invalid_argument("density csv: empty");
  const CsvRow header = rows.front();
  if (header == CsvRow{"x", "value"}) {
    rows.erase(rows.begin());
    std::vector<double> xs, vs;
    for (const auto& r : rows) {
      if (r.size() != 2) throw std::invalid_argument("density csv: expected columns x,value");
      xs.push_back(parse_number(r[0], "density x"));
      vs.push_back(parse_number(r[1], "density value"));
    }
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("density csv: x must be increasing");
    const double h = uniform_spacing(xs, "x");
    return GridDensity(1, {xs.front(), 0.0}, h, {xs.size(), 1}, std::move(vs));
  }
  if (header == CsvRow{"x", "y", "value"}) {
    rows.erase(rows.begin());
    std::vector<double> xs, ys, vs;
    for (const auto& r : rows) {
      if (r.size() != 3) throw std::invalid_argument("density csv: expected columns x,y,value");
      xs.push_back(parse_number(r[0], "density x"));
      ys.push_back(parse_number(r[1], "density y"));
      vs.push_back(parse_number(r[2], "density value"));
    }
    std::vector<double> ux = xs, uy = ys;
    for (auto* v : {&ux, &uy}) {
      std::sort(v->begin(), v->end());
      v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    const double hx = uniform_spacing(ux, "x");
    const double hy = uniform_spacing(uy, "y");
    if (std::abs(hx - hy) > 1e-6 * hx) throw std::invalid_argument("density csv: x and y spacings differ");
    const std::size_t nx = ux.size(), ny = uy.size();
    if (vs.size() != nx * ny) throw std::invalid_argument("density csv: grid is incomplete");
    for (std::size_t k = 0; k < vs.size(); ++k) {
      const std::size_t i = k % nx, j = k / nx;
      if (std::abs(xs[k] - ux[i]) > 1e-6 * hx || std::abs(ys[k] - uy[j]) > 1e-6 * hx)
        throw std::invalid_argument("density csv: rows must be in row-major order (y outer)");
    }
    return GridDensity(2, {ux.front(), uy.front()}, hx, {nx, ny}, std::move(vs));
  }
  throw std::invalid_argument("density csv: header must be x,value or x,y,value");
}

GridDensity read_density_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open density '" + path.string() + "'");
  return read_density_csv(in);
}

void write_profile_csv(std::ostream& os, const RadialProfile& u) {
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < u.values().size(); ++i) rows.push_back({format_number(u.radius(i)), format_number(u[i])});
  write_csv(os, {"r", "value"}, rows);
}

RadialProfile read_profile_csv(std::istream& is, int dim) {
  auto rows = read_csv(is);
  if (rows.empty() || rows.front() != CsvRow{"r", "value"}) throw std::invalid_argument("profile csv: header must be r,value");
  rows.erase(rows.begin());
  std::vector<double> rs, vs;
  for (const auto& r : rows) {
    if (r.size() != 2) throw std::invalid_argument("profile csv: expected columns r,value");
    rs.push_back(parse_number(r[0], "profile r"));
    vs.push_back(parse_number(r[1], "profile value"));
  }
  if (rs.size() < 2 || rs.front() != 0.0) throw std::invalid_argument("profile csv: radii must start at 0");
  uniform_spacing(rs, "r");
  return RadialProfile(dim, rs.back(), std::move(vs));
}

// ------------------------------------------------------------------ JSON

Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(j.get<std::string>(), "json number");
  throw std::invalid_argument("json: expected a number");
}

namespace {

Json range_json(const HalfOpenRange& r) { return Json{{"lo", json_number(r.lo)}, {"hi", json_number(r.hi)}, {"closed", "upper"}}; }

Json opt_number(const std::optional<double>& x) { return x ? json_number(*x) : Json(nullptr); }

Json center_json(const std::array<double, 2>& c, int dim) {
  Json j = Json::array({c[0]});
  if (dim == 2) j.push_back(c[1]);
  return j;
}

}  // namespace

Json to_json(const ExponentReport& r) {
  Json j;
  j["s"] = r.s;
  j["p"] = r.p;
  j["N"] = r.dim;
  j["alpha"] = json_number(r.alpha.alpha);
  j["alpha_nontrivial"] = r.alpha.nontrivial;
  j["alpha_s_range"] = range_json(r.alpha.s_range);
  j["lambda_exponent"] = json_number(r.lambda_exponent);
  j["scale_invariant_alpha"] = opt_number(r.scale_invariant_alpha);
  if (r.droplet) {
    j["droplet"] = {{"rho", r.droplet->rho},
                    {"epsbar_exponent", r.droplet->epsbar_exponent},
                    {"one_minus_rho", r.droplet->one_minus_rho}};
  } else {
    j["droplet"] = nullptr;
  }
  if (r.branched) {
    const auto& b = *r.branched;
    j["branched"] = {{"d", *r.bt_dimension},
                     {"beta", json_number(b.beta)},
                     {"gamma1", json_number(b.gamma1)},
                     {"gamma2", json_number(b.gamma2)},
                     {"supercritical", b.supercritical},
                     {"attainable", b.attainable},
                     {"supercritical_range", range_json(b.supercritical_range)},
                     {"attainable_range", range_json(b.attainable_range)}};
  } else {
    j["branched"] = nullptr;
  }
  return j;
}

Json to_json(const HypothesisReport& r) {
  Json arr = Json::array();
  for (const auto& h : r.results) {
    Json e{{"name", h.name}, {"status", to_string(h.status)}, {"detail", h.detail}};
    e["witness"] = h.witness ? Json{{"u", json_number(h.witness->first)}, {"xi", json_number(h.witness->second)}}
                             : Json(nullptr);
    arr.push_back(e);
  }
  return Json{{"all_pass", r.all_pass()}, {"hypotheses", arr}};
}

Json to_json(const CostCurve& c) {
  Json j;
  j["lagrangian"] = c.lagrangian;
  j["N"] = c.dim;
  Json samples = Json::array();
  for (const auto& s : c.samples)
    samples.push_back({{"m", json_number(s.m)}, {"H", json_number(s.H)}, {"status", to_string(s.status)}});
  j["samples"] = samples;
  if (c.fit) {
    j["fit"] = {{"alpha_hat", c.fit->alpha},
                {"c_hat", c.fit->c},
                {"r_squared", c.fit->r_squared},
                {"used", c.fit->used},
                {"excluded", c.fit->excluded}};
  } else {
    j["fit"] = nullptr;
  }
  j["fit_note"] = c.fit_note;
  return j;
}

Json to_json(const ProfileResult& r) {
  return Json{{"N", r.profile.dim()},
              {"outer_radius", r.profile.outer_radius()},
              {"n", r.profile.intervals()},
              {"mass", r.profile.mass()},
              {"energy", json_number(r.energy)},
              {"status", to_string(r.status)},
              {"iterations", r.iterations},
              {"residual", json_number(r.residual)},
              {"monotone", r.monotone},
              {"truncation_active", r.truncation_active},
              {"restart_index", r.restart_index}};
}

Json to_json(const SlopeProfile& s) {
  return Json{{"N", s.profile.dim()},
              {"eps", s.eps},
              {"mass", s.mass},
              {"closed_form_mass", s.closed_form_mass},
              {"relative_mass_error", std::abs(s.mass - s.closed_form_mass) / s.closed_form_mass},
              {"energy_per_mass", opt_number(s.energy_per_mass)}};
}

Json to_json(const BubbleSet& b) {
  Json arr = Json::array();
  for (const auto& x : b.bubbles)
    arr.push_back({{"center", center_json(x.center, b.dim)},
                   {"radius", x.radius},
                   {"mass", x.mass},
                   {"merged", x.merged}});
  Json params{{"radius", b.params.radius},
              {"floor", b.params.floor},
              {"max_bubbles", b.params.max_bubbles},
              {"growth_tolerance", opt_number(b.params.growth_tolerance)}};
  return Json{{"bubbles", arr},
              {"remainder_mass", b.remainder_mass},
              {"vanishing_sup", b.vanishing_sup},
              {"total_mass", b.total_mass},
              {"incomplete", b.incomplete},
              {"params", params}};
}

Json to_json(const GammaRunResult& g) {
  Json steps = Json::array();
  for (const auto& s : g.steps) {
    steps.push_back({{"eps", s.eps},
                     {"energy", json_number(s.energy)},
                     {"status", to_string(s.status)},
                     {"iterations", s.iterations},
                     {"monotone", s.monotone},
                     {"concentration", s.concentration},
                     {"droplets", s.droplets},
                     {"droplet_masses", s.droplet_masses}});
  }
  return Json{{"lagrangian", g.lagrangian},
              {"mass", g.mass},
              {"steps", steps},
              {"prediction", opt_number(g.prediction)},
              {"relative_gap", opt_number(g.relative_gap)}};
}

Json to_json(const LemmaWReport& r) {
  Json hyp = Json::array();
  for (const auto& h : r.hypotheses)
    hyp.push_back({{"name", h.name}, {"pass", h.pass}, {"detail", h.detail}, {"witness", opt_number(h.witness)}});
  Json j{{"hypotheses", hyp},
         {"hypotheses_pass", r.hypotheses_pass},
         {"threshold", opt_number(r.threshold)},
         {"c_delta", opt_number(r.c_delta)},
         {"samples", r.samples},
         {"violations", r.violations}};
  j["worst"] = r.worst ? Json{{"eps", r.worst->first}, {"u", r.worst->second}} : Json(nullptr);
  return j;
}

Json to_json(const AtomicMeasure& u) {
  Json atoms = Json::array();
  for (const auto& a : u.atoms) {
    Json row = Json::array();
    for (double x : a.x) row.push_back(x);
    row.push_back(a.m);
    atoms.push_back(row);
  }
  return Json{{"atoms", atoms}, {"diffuse_mass", u.diffuse_mass}};
}

AtomicMeasure atomic_measure_from_json(const Json& j) {
  AtomicMeasure u;
  if (!j.is_object() || !j.contains("atoms")) throw std::invalid_argument("atomic measure json: missing atoms");
  for (const auto& row : j.at("atoms")) {
    if (!row.is_array() || row.size() < 2) throw std::invalid_argument("atomic measure json: atom needs coords and mass");
    Atom a;
    for (std::size_t i = 0; i + 1 < row.size(); ++i) a.x.push_back(number_from_json(row[i]));
    a.m = number_from_json(row.back());
    u.atoms.push_back(std::move(a));
  }
  u.diffuse_mass = j.contains("diffuse_mass") ? number_from_json(j.at("diffuse_mass")) : 0.0;
  u.validate();
  return u;
}

void write_cost_curve_csv(std::ostream& os, const CostCurve& c) {
  std::vector<CsvRow> rows;
  for (const auto& s : c.samples) rows.push_back({format_number(s.m), format_number(s.H), to_string(s.status)});
  write_csv(os, {"m", "H", "status"}, rows);
}

CostCurve read_cost_curve_csv(std::istream& is) {
  auto rows = read_csv(is);
  if (rows.empty() || rows.front() != CsvRow{"m", "H", "status"})
    throw std::invalid_argument("cost curve csv: header must be m,H,status");
  CostCurve c;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 3) throw std::invalid_argument("cost curve csv: expected three columns");
    c.samples.push_back({parse_number(r[0], "m"), parse_number(r[1], "H"), parse_status(r[2])});
  }
  return c;
}

void write_gamma_trace_csv(std::ostream& os, const GammaRunResult& g) {
  std::vector<CsvRow> rows;
  for (const auto& s : g.steps)
    rows.push_back({format_number(s.eps), format_number(s.energy), format_number(s.concentration),
                    std::to_string(s.droplets), to_string(s.status)});
  write_csv(os, {"eps", "energy", "concentration", "droplets", "status"}, rows);
}

}  // namespace masscost
