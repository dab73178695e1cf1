#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "masscost/bubbles.hpp"
#include "masscost/exponents.hpp"
#include "masscost/gamma_lab.hpp"
#include "masscost/hmass.hpp"
#include "masscost/lagrangian.hpp"
#include "masscost/radial_solver.hpp"

namespace masscost {

using Json = nlohmann::ordered_json;

// ------------------------------------------------------------------ CSV

using CsvRow = std::vector<std::string>;

/// RFC 4180: fields with commas, quotes or line breaks are quoted, quotes doubled.
std::string csv_field(const std::string& s);
void write_csv(std::ostream& os, const CsvRow& header, const std::vector<CsvRow>& rows);
std::vector<CsvRow> read_csv(std::istream& is);
std::vector<CsvRow> read_csv_file(const std::filesystem::path& path);

/// Shortest text that parses back to the same double.
std::string format_number(double x);
/// Parses a full string as a double ("inf" accepted); throws std::invalid_argument.
double parse_number(const std::string& s, const std::string& what);

// ------------------------------------------------------------------ config

/// Key-value text: `key = value` per line, `#` starts a comment.
std::map<std::string, std::string> parse_key_values(std::istream& is);

/// Builds a Lagrangian from a config. Keys: kind (power_sum, scale_invariant,
/// scale_invariant_perturbed, droplet, tabulated), N, p, s, eps,
/// W (builtin:<name> or csv:<path>), table (csv path with columns u,xi,f),
/// coercivity (alpha,beta,p), isotropic (must be true when given).
/// Relative paths resolve against base_dir.
Lagrangian lagrangian_from_config(const std::map<std::string, std::string>& kv,
                                  const std::filesystem::path& base_dir = {});
Lagrangian load_lagrangian(const std::filesystem::path& path);
/// Inverse of lagrangian_from_config for non-table kinds; tables are written
/// next to the config by save_lagrangian.
std::string lagrangian_to_config(const Lagrangian& f);

/// "builtin:<name>" or "csv:<path>" with columns u, W.
Potential parse_potential(const std::string& spec, double s, const std::filesystem::path& base_dir = {});
Potential read_potential_csv(const std::filesystem::path& path, double s);

/// "geom:lo:hi:count", "lin:lo:hi:count" or a comma separated list.
std::vector<double> parse_sequence(const std::string& spec);

// ------------------------------------------------------------------ densities

/// 1D: columns x,value. 2D: columns x,y,value in row-major order (y outer).
void write_density_csv(std::ostream& os, const GridDensity& u);
GridDensity read_density_csv(std::istream& is);
GridDensity read_density_file(const std::filesystem::path& path);

void write_profile_csv(std::ostream& os, const RadialProfile& u);
RadialProfile read_profile_csv(std::istream& is, int dim);

// ------------------------------------------------------------------ JSON

Json to_json(const ExponentReport& r);
Json to_json(const HypothesisReport& r);
Json to_json(const CostCurve& c);
Json to_json(const ProfileResult& r);
Json to_json(const SlopeProfile& s);
Json to_json(const BubbleSet& b);
Json to_json(const GammaRunResult& g);
Json to_json(const LemmaWReport& r);
Json to_json(const AtomicMeasure& u);
AtomicMeasure atomic_measure_from_json(const Json& j);

/// JSON number, or the strings "inf" / "-inf" / "nan".
Json json_number(double x);
double number_from_json(const Json& j);

void write_cost_curve_csv(std::ostream& os, const CostCurve& c);
CostCurve read_cost_curve_csv(std::istream& is);
void write_gamma_trace_csv(std::ostream& os, const GammaRunResult& g);

}  // namespace masscost
