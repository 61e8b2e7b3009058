// grasq — experiment descriptor loading: a small TOML-style key/value format
// with sections, typed values, per-kind schemas, unknown-key rejection, and
// numeric precondition validation at load time.
#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grasq/util/common.hpp"

namespace grasq {

/// Configuration / validation failure; `line` is −1 for non-parse errors.
struct config_error : std::runtime_error {
  int line;
  config_error(const std::string& path, int line_, const std::string& msg)
      : std::runtime_error(line_ >= 0 ? path + ":" + std::to_string(line_) + ": " + msg
                                      : path + ": " + msg),
        line(line_) {}
};

struct ConfigValue {
  enum class Type { number, string, boolean };
  Type type = Type::number;
  double num = 0;
  std::string str;
  bool flag = false;
  int line = -1;
};

struct ExperimentDescriptor {
  std::string kind;
  std::string name;
  std::string source_path;
  std::map<std::string, ConfigValue> values;               // "section.key"
  std::vector<std::pair<std::string, std::string>> raw;    // ordered echo

  bool has(const std::string& key) const { return values.count(key) != 0; }
  double num(const std::string& key, double def) const {
    auto it = values.find(key);
    return it == values.end() ? def : it->second.num;
  }
  std::string str(const std::string& key, const std::string& def) const {
    auto it = values.find(key);
    return it == values.end() ? def : it->second.str;
  }
  bool flag(const std::string& key, bool def) const {
    auto it = values.find(key);
    return it == values.end() ? def : it->second.flag;
  }
};

/// Generator budget: default 64, overridable by GRASQ_MAX_GENERATORS, hard
/// cap 128.
inline int max_generators() {
  int cap = 64;
  if (const char* env = std::getenv("GRASQ_MAX_GENERATORS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) cap = static_cast<int>(v);
  }
  return std::min(cap, 128);
}

namespace cli_detail {

struct FieldSpec {
  const char* key;  // "section.key"
  ConfigValue::Type type;
  bool required;
  const char* doc;
};

struct KindSpec {
  const char* kind;
  const char* doc;
  std::vector<FieldSpec> fields;
};

inline const std::vector<KindSpec>& kind_table() {
  using T = ConfigValue::Type;
  static const std::vector<KindSpec> table = {
      {"gaussian-moments",
       "Pfaffian vs exhaustive-pairing Wick moments on random covariances",
       {{"params.count", T::number, false, "number of random covariances"},
        {"params.max_n", T::number, false, "largest generator count"},
        {"params.max_order", T::number, false, "largest moment order"},
        {"params.seed", T::number, false, "splitmix64 seed"},
        {"tolerances.rel", T::number, false, "relative agreement tolerance"}}},
      {"ou",
       "linear-drift Picard solution vs the exact OU kernel and Lyapunov data",
       {{"params.steps", T::number, false, "grid cells on [0, T]"},
        {"params.t", T::number, false, "time horizon"},
        {"tolerances.match", T::number, false, "covariance agreement tolerance"},
        {"tolerances.lyapunov", T::number, false, "Lyapunov residual tolerance"}}},
      {"sde",
       "symbolic Picard fixed point of the quartic-potential model at N = 4",
       {{"params.lambda", T::number, false, "potential coupling"},
        {"params.cells", T::number, false, "grid cells"},
        {"params.t", T::number, false, "time horizon"},
        {"tolerances.fixed_point", T::number, false, "Picard convergence delta"}}},
      {"ito",
       "Ito-formula residual decay under grid refinement",
       {{"params.steps0", T::number, false, "coarsest grid cells"},
        {"params.halvings", T::number, false, "number of grid halvings"},
        {"params.t", T::number, false, "time horizon"},
        {"tolerances.slope_min", T::number, false, "minimum fitted log-log slope"},
        {"tolerances.residual_max", T::number, false, "residual ceiling on all grids"}}},
      {"invariant",
       "stationarity residuals of the weighted state for the quartic model",
       {{"params.lambda", T::number, false, "potential coupling"},
        {"tolerances.residual", T::number, false, "basis residual tolerance"}}},
      {"sq",
       "stochastic-quantization identity: Berezin oracle vs moment-ODE kernel",
       {{"params.n", T::number, false, "generators (2 or 4)"},
        {"params.lambda", T::number, false, "explicit coupling (validated)"},
        {"params.lambda_frac", T::number, false, "coupling as fraction of lambda0"},
        {"params.t_trunc", T::number, false, "stationarity window"},
        {"tolerances.rel", T::number, false, "identity tolerance"},
        {"tolerances.remark41", T::number, false, "product-identity tolerance"}}},
      {"tree",
       "ternary tree series vs the mild Picard fixed point (cubic drift, N = 3)",
       {{"params.order", T::number, false, "largest |I(tau)| summed"},
        {"params.lambda", T::number, false, "drift coupling"},
        {"params.cells", T::number, false, "grid cells"},
        {"params.t", T::number, false, "time horizon"},
        {"tolerances.match", T::number, false, "partial-sum tolerance"}}},
      {"majorant",
       "scalar majorant branch, critical coupling, coefficient domination",
       {{"params.p3", T::number, false, "cubic majorant coefficient"},
        {"params.c", T::number, false, "data bound c"},
        {"params.n_max", T::number, false, "domination orders checked"},
        {"params.cells", T::number, false, "grid cells for the discrete system"},
        {"tolerances.lambda_star", T::number, false, "turning-point tolerance"}}},
      {"yukawa",
       "finite-mode Yukawa model: Schwinger identity and cutoff sweep",
       {{"params.radius", T::number, false, "mode cutoff |k| <= radius (0 or 1)"},
        {"params.m_f", T::number, true, "fermion mass"},
        {"params.m_b", T::number, false, "boson mass"},
        {"params.eps", T::number, false, "UV regularization scale"},
        {"params.profile", T::string, false, "UV profile: gaussian or bump"},
        {"params.lambda", T::number, false, "explicit coupling (validated)"},
        {"params.lambda_frac", T::number, false, "coupling as fraction of lambda0"},
        {"params.nsweep", T::boolean, false, "also run the cutoff sweep"},
        {"tolerances.identity", T::number, false, "Schwinger identity tolerance"}}},
  };
  return table;
}

inline const KindSpec* find_kind(const std::string& kind) {
  for (const auto& k : kind_table())
    if (kind == k.kind) return &k;
  return nullptr;
}

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline bool bare_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

inline ConfigValue parse_value(const std::string& path, int line, const std::string& v) {
  ConfigValue out;
  out.line = line;
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    out.type = ConfigValue::Type::string;
    out.str = v.substr(1, v.size() - 2);
    return out;
  }
  if (v == "true" || v == "false") {
    out.type = ConfigValue::Type::boolean;
    out.flag = (v == "true");
    return out;
  }
  {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end && *end == '\0' && end != v.c_str()) {
      out.type = ConfigValue::Type::number;
      out.num = d;
      return out;
    }
  }
  if (bare_token(v)) {
    out.type = ConfigValue::Type::string;
    out.str = v;
    return out;
  }
  throw config_error(path, line, "cannot parse value '" + v + "'");
}

}  // namespace cli_detail

inline ExperimentDescriptor config_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path, -1, "cannot open file");
  ExperimentDescriptor d;
  d.source_path = path;
  std::string section, line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = cli_detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(path, lineno, "unterminated section header");
      section = cli_detail::trim(line.substr(1, line.size() - 2));
      if (!cli_detail::bare_token(section))
        throw config_error(path, lineno, "invalid section name '" + section + "'");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path, lineno, "expected 'key = value'");
    const std::string key = cli_detail::trim(line.substr(0, eq));
    const std::string val = cli_detail::trim(line.substr(eq + 1));
    if (!cli_detail::bare_token(key))
      throw config_error(path, lineno, "invalid key '" + key + "'");
    if (section.empty())
      throw config_error(path, lineno, "key '" + key + "' outside any section");
    const std::string full = section + "." + key;
    if (d.values.count(full))
      throw config_error(path, lineno, "duplicate key '" + full + "'");
    d.values[full] = cli_detail::parse_value(path, lineno, val);
    d.raw.emplace_back(full, val);
  }
  // experiment section
  auto kind_it = d.values.find("experiment.kind");
  if (kind_it == d.values.end())
    throw config_error(path, -1, "missing required key 'experiment.kind'");
  if (kind_it->second.type != ConfigValue::Type::string)
    throw config_error(path, kind_it->second.line, "experiment.kind must be a string");
  d.kind = kind_it->second.str;
  d.name = d.str("experiment.name", d.kind);
  const cli_detail::KindSpec* spec = cli_detail::find_kind(d.kind);
  if (!spec)
    throw config_error(path, kind_it->second.line, "unknown kind '" + d.kind + "'");
  // schema: unknown keys rejected, required keys present, types checked
  for (const auto& [key, value] : d.values) {
    if (key == "experiment.kind" || key == "experiment.name") continue;
    const cli_detail::FieldSpec* match = nullptr;
    for (const auto& f : spec->fields)
      if (key == f.key) match = &f;
    if (!match)
      throw config_error(path, value.line,
                         "unknown key '" + key + "' for kind '" + d.kind + "'");
    if (value.type != match->type)
      throw config_error(path, value.line, "key '" + key + "' has the wrong type");
  }
  for (const auto& f : spec->fields)
    if (f.required && !d.values.count(f.key))
      throw config_error(path, -1, "missing required key '" + std::string(f.key) +
                                       "' for kind '" + d.kind + "'");
  return d;
}

}  // namespace grasq
