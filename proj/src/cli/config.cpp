#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "nhsw/cli.hpp"

namespace nhsw {
namespace {

enum class Kind { Real, Count, Text, RealList, CountList, Bool };

using Value = std::variant<double, std::size_t, std::string, std::vector<double>,
                           std::vector<std::size_t>, bool>;

struct KeySpec {
  const char* section;
  const char* key;
  Kind kind;
  const char* scenarios;  // comma list, nullptr for every scenario
};

constexpr KeySpec kKeys[] = {
    {"scenario", "name", Kind::Text, nullptr},
    {"scenario", "length", Kind::Real, nullptr},
    {"scenario", "a", Kind::Real, "solitary"},
    {"scenario", "H0", Kind::Real, "solitary,beach"},
    {"scenario", "d", Kind::Real, "solitary"},
    {"scenario", "x0", Kind::Real, "solitary"},
    {"scenario", "HL", Kind::Real, "dam_break"},
    {"scenario", "HR", Kind::Real, "dam_break"},
    {"scenario", "x_d", Kind::Real, "dam_break"},
    {"scenario", "eps", Kind::Real, "dam_break"},
    {"scenario", "printed_amplitude", Kind::Bool, "dam_break"},
    {"scenario", "flat_until", Kind::Real, "beach"},
    {"scenario", "crest_height", Kind::Real, "beach"},
    {"scenario", "wave_amplitude", Kind::Real, "beach,dingemans"},
    {"scenario", "wave_period", Kind::Real, "beach,dingemans"},
    {"scenario", "eta0", Kind::Real, "dingemans"},
    {"scenario", "toe", Kind::Real, "dingemans"},
    {"scenario", "up_slope", Kind::Real, "dingemans"},
    {"scenario", "crest_depth", Kind::Real, "dingemans"},
    {"scenario", "crest_length", Kind::Real, "dingemans"},
    {"scenario", "down_slope", Kind::Real, "dingemans"},
    {"scenario", "gauges", Kind::RealList, "dingemans"},
    {"scenario", "measured", Kind::Text, "dingemans"},
    {"mesh", "nodes", Kind::Count, nullptr},
    {"mesh", "pair", Kind::Text, nullptr},
    {"time", "integrator", Kind::Text, nullptr},
    {"time", "t_end", Kind::Real, nullptr},
    {"time", "cfl", Kind::Real, nullptr},
    {"time", "output_times", Kind::RealList, nullptr},
    {"time", "report_stride", Kind::Count, nullptr},
    {"solver", "method", Kind::Text, nullptr},
    {"solver", "tol", Kind::Real, nullptr},
    {"solver", "stop_factor", Kind::Real, nullptr},
    {"physics", "g", Kind::Real, nullptr},
    {"physics", "h_eps", Kind::Real, nullptr},
    {"output", "dir", Kind::Text, nullptr},
    {"study", "meshes", Kind::CountList, nullptr},
    {"study", "pairs", Kind::Text, nullptr},
    {"study", "bench_nodes", Kind::CountList, nullptr},
    {"study", "bench_repeats", Kind::Count, nullptr},
    {"study", "bench_sample_stride", Kind::Count, nullptr},
};

constexpr const char* kRequired[] = {"scenario.name", "mesh.nodes"};
constexpr const char* kScenarios[] = {"solitary", "dam_break", "beach", "dingemans"};

struct Entry {
  std::size_t line;
  std::string raw;
  Value value;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) out.push_back(trim(tok));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

bool parse_real(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(v);
}

bool parse_count(const std::string& s, std::size_t& v) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return false;
  v = std::strtoull(s.c_str(), nullptr, 10);
  return true;
}

std::optional<Value> convert(Kind kind, const std::string& raw) {
  switch (kind) {
    case Kind::Real: {
      double v;
      if (parse_real(raw, v)) return v;
      return std::nullopt;
    }
    case Kind::Count: {
      std::size_t v;
      if (parse_count(raw, v)) return v;
      return std::nullopt;
    }
    case Kind::Text:
      if (raw.empty()) return std::nullopt;
      return raw;
    case Kind::Bool:
      if (raw == "true" || raw == "yes" || raw == "1") return true;
      if (raw == "false" || raw == "no" || raw == "0") return false;
      return std::nullopt;
    case Kind::RealList: {
      std::vector<double> out;
      for (const auto& t : split_list(raw)) {
        double v;
        if (!parse_real(t, v)) return std::nullopt;
        out.push_back(v);
      }
      return out;
    }
    case Kind::CountList: {
      std::vector<std::size_t> out;
      for (const auto& t : split_list(raw)) {
        std::size_t v;
        if (!parse_count(t, v)) return std::nullopt;
        out.push_back(v);
      }
      if (out.empty()) return std::nullopt;
      return out;
    }
  }
  return std::nullopt;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Real: return "a real number";
    case Kind::Count: return "a non-negative integer";
    case Kind::Text: return "a non-empty string";
    case Kind::Bool: return "true or false";
    case Kind::RealList: return "a comma-separated list of reals";
    case Kind::CountList: return "a comma-separated list of integers";
  }
  return "";
}

bool applies(const KeySpec& spec, const std::string& scenario) {
  if (spec.scenarios == nullptr) return true;
  for (const auto& s : split_list(spec.scenarios)) {
    if (s == scenario) return true;
  }
  return false;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : Error(ErrorCode::InvalidArgument,
            [&] {
              std::string msg = "invalid configuration:";
              for (const auto& e : errors) msg += "\n  " + e;
              return msg;
            }()),
      errors_(std::move(errors)) {}

RunConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        errors.push_back(at_line(lineno) + "malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(at_line(lineno) + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (section.empty()) {
      errors.push_back(at_line(lineno) + "key '" + key + "' outside of any section");
      continue;
    }
    const std::string full = section + "." + key;
    const auto spec = std::find_if(std::begin(kKeys), std::end(kKeys), [&](const KeySpec& s) {
      return section == s.section && key == s.key;
    });
    if (spec == std::end(kKeys)) {
      errors.push_back(at_line(lineno) + "unknown key '" + full + "'");
      continue;
    }
    if (const auto it = entries.find(full); it != entries.end()) {
      errors.push_back(at_line(lineno) + "duplicate key '" + full + "' (first set on line " +
                       std::to_string(it->second.line) + ")");
      continue;
    }
    auto value = convert(spec->kind, raw);
    if (!value) {
      errors.push_back(at_line(lineno) + "'" + full + "' must be " + kind_name(spec->kind) +
                       ", got '" + raw + "'");
      continue;
    }
    entries.emplace(full, Entry{lineno, raw, std::move(*value)});
  }

  for (const char* req : kRequired) {
    if (!entries.count(req)) errors.push_back(std::string("missing required key '") + req + "'");
  }

  RunConfig cfg;
  const auto name_it = entries.find("scenario.name");
  if (name_it != entries.end()) {
    cfg.scenario = std::get<std::string>(name_it->second.value);
    if (std::find(std::begin(kScenarios), std::end(kScenarios), cfg.scenario) ==
        std::end(kScenarios)) {
      errors.push_back(at_line(name_it->second.line) + "unknown scenario '" + cfg.scenario +
                       "' (solitary, dam_break, beach, dingemans)");
      cfg.scenario.clear();
    }
  }
  if (!cfg.scenario.empty()) {
    for (const auto& [full, e] : entries) {
      const auto dot = full.find('.');
      const auto spec = std::find_if(std::begin(kKeys), std::end(kKeys), [&](const KeySpec& s) {
        return full.compare(0, dot, s.section) == 0 && full.substr(dot + 1) == s.key;
      });
      if (!applies(*spec, cfg.scenario)) {
        errors.push_back(at_line(e.line) + "key '" + full + "' does not apply to scenario '" +
                         cfg.scenario + "'");
      }
    }
  }

  auto real = [&](const char* key, double& dst) {
    if (auto it = entries.find(key); it != entries.end()) dst = std::get<double>(it->second.value);
  };
  auto count = [&](const char* key, std::size_t& dst) {
    if (auto it = entries.find(key); it != entries.end()) {
      dst = std::get<std::size_t>(it->second.value);
    }
  };
  auto line_of = [&](const char* key) -> std::string {
    if (auto it = entries.find(key); it != entries.end()) return at_line(it->second.line);
    return "";
  };
  auto check = [&](bool ok, const char* key, const std::string& what) {
    if (!ok) errors.push_back(line_of(key) + "'" + key + "' " + what);
  };

  if (cfg.scenario == "solitary") {
    real("scenario.a", cfg.solitary.a);
    real("scenario.H0", cfg.solitary.H0);
    real("scenario.d", cfg.solitary.d);
    real("scenario.x0", cfg.solitary.x0);
    real("scenario.length", cfg.solitary_length);
    check(cfg.solitary.a > 0.0, "scenario.a", "must be positive");
    check(cfg.solitary.H0 > 0.0, "scenario.H0", "must be positive");
    check(cfg.solitary.d > 0.0, "scenario.d", "must be positive");
    check(cfg.solitary_length > 0.0, "scenario.length", "must be positive");
    cfg.t_end = 5.9025;
  } else if (cfg.scenario == "dam_break") {
    auto& dp = cfg.dam_break;
    real("scenario.HL", dp.HL);
    real("scenario.HR", dp.HR);
    real("scenario.x_d", dp.x_d);
    real("scenario.eps", dp.eps);
    real("scenario.length", dp.length);
    if (auto it = entries.find("scenario.printed_amplitude"); it != entries.end()) {
      dp.printed_amplitude = std::get<bool>(it->second.value);
    }
    check(dp.HL > 0.0, "scenario.HL", "must be positive");
    check(dp.HR > 0.0, "scenario.HR", "must be positive");
    check(dp.eps > 0.0, "scenario.eps", "must be positive");
    check(dp.length > 0.0, "scenario.length", "must be positive");
    check(dp.x_d > 0.0 && dp.x_d < dp.length, "scenario.x_d", "must lie inside the domain");
    check(!dp.printed_amplitude || 2.0 * dp.HR - dp.HL > 0.0, "scenario.printed_amplitude",
          "gives a negative left depth for these HL, HR");
    cfg.t_end = 45.0;
  } else if (cfg.scenario == "beach") {
    auto& bp = cfg.beach;
    real("scenario.length", bp.length);
    real("scenario.H0", bp.H0);
    real("scenario.flat_until", bp.flat_until);
    real("scenario.crest_height", bp.crest_height);
    real("scenario.wave_amplitude", bp.wave.amplitude);
    real("scenario.wave_period", bp.wave.period);
    bp.wave.depth = bp.H0;
    check(bp.H0 > 0.0, "scenario.H0", "must be positive");
    check(bp.flat_until > 0.0 && bp.flat_until < bp.length, "scenario.flat_until",
          "must lie inside the domain");
    check(bp.crest_height >= 0.0, "scenario.crest_height", "must be non-negative");
    check(bp.wave.period > 0.0, "scenario.wave_period", "must be positive");
    cfg.t_end = 12.0;
  } else if (cfg.scenario == "dingemans") {
    auto& dp = cfg.dingemans;
    real("scenario.length", dp.length);
    real("scenario.eta0", dp.eta0);
    real("scenario.toe", dp.toe);
    real("scenario.up_slope", dp.up_slope);
    real("scenario.crest_depth", dp.crest_depth);
    real("scenario.crest_length", dp.crest_length);
    real("scenario.down_slope", dp.down_slope);
    real("scenario.wave_amplitude", dp.wave.amplitude);
    real("scenario.wave_period", dp.wave.period);
    if (auto it = entries.find("scenario.gauges"); it != entries.end()) {
      dp.gauges = std::get<std::vector<double>>(it->second.value);
    }
    if (auto it = entries.find("scenario.measured"); it != entries.end()) {
      cfg.measured = std::get<std::string>(it->second.value);
    }
    dp.wave.depth = dp.eta0;
    check(dp.eta0 > 0.0, "scenario.eta0", "must be positive");
    check(dp.crest_depth > 0.0 && dp.crest_depth < dp.eta0, "scenario.crest_depth",
          "must lie in (0, eta0)");
    check(dp.up_slope > 0.0, "scenario.up_slope", "must be positive");
    check(dp.down_slope > 0.0, "scenario.down_slope", "must be positive");
    check(dp.crest_length >= 0.0, "scenario.crest_length", "must be non-negative");
    check(dp.wave.period > 0.0, "scenario.wave_period", "must be positive");
    for (double gpos : dp.gauges) {
      check(gpos >= 0.0 && gpos <= dp.length, "scenario.gauges",
            "has a gauge outside [0, length]");
    }
    cfg.t_end = 40.0;
  }

  count("mesh.nodes", cfg.nodes);
  if (auto it = entries.find("mesh.pair"); it != entries.end()) {
    try {
      cfg.pair = pair_from_string(std::get<std::string>(it->second.value));
    } catch (const Error& e) {
      errors.push_back(at_line(it->second.line) + e.what());
    }
  }
  if (entries.count("mesh.nodes")) {
    check(cfg.nodes >= 3, "mesh.nodes", "must be at least 3");
    check(cfg.pair != PairTag::P1isoP2P1 || cfg.nodes % 2 == 1, "mesh.nodes",
          "must be odd for the P1isoP2P1 pair (got " + std::to_string(cfg.nodes) + ")");
  }

  if (auto it = entries.find("time.integrator"); it != entries.end()) {
    try {
      cfg.integrator = integrator_from_string(std::get<std::string>(it->second.value));
    } catch (const Error& e) {
      errors.push_back(at_line(it->second.line) + e.what());
    }
  }
  real("time.t_end", cfg.t_end);
  real("time.cfl", cfg.params.cfl);
  count("time.report_stride", cfg.report_stride);
  if (auto it = entries.find("time.output_times"); it != entries.end()) {
    cfg.output_times = std::get<std::vector<double>>(it->second.value);
  } else {
    cfg.output_times = {0.0, cfg.t_end};
  }
  check(cfg.t_end >= 0.0, "time.t_end", "must be non-negative");
  check(cfg.params.cfl > 0.0 && cfg.params.cfl <= 1.0, "time.cfl", "must lie in (0, 1]");
  check(cfg.report_stride >= 1, "time.report_stride", "must be at least 1");
  for (double t : cfg.output_times) {
    check(t >= 0.0, "time.output_times", "must be non-negative");
  }

  if (auto it = entries.find("solver.method"); it != entries.end()) {
    try {
      cfg.params.method = solver_method_from_string(std::get<std::string>(it->second.value));
    } catch (const Error& e) {
      errors.push_back(at_line(it->second.line) + e.what());
    }
  }
  real("solver.tol", cfg.params.tol);
  real("solver.stop_factor", cfg.stop_factor);
  check(cfg.params.tol > 0.0 && cfg.params.tol < 1.0, "solver.tol", "must lie in (0, 1)");
  check(cfg.stop_factor > 0.0 && cfg.stop_factor <= 1.0, "solver.stop_factor",
        "must lie in (0, 1]");

  real("physics.g", cfg.params.g);
  real("physics.h_eps", cfg.params.h_eps);
  check(cfg.params.g > 0.0, "physics.g", "must be positive");
  check(cfg.params.h_eps > 0.0, "physics.h_eps", "must be positive");

  if (auto it = entries.find("output.dir"); it != entries.end()) {
    cfg.output_dir = std::get<std::string>(it->second.value);
  }

  if (auto it = entries.find("study.meshes"); it != entries.end()) {
    cfg.study_meshes = std::get<std::vector<std::size_t>>(it->second.value);
  }
  if (auto it = entries.find("study.pairs"); it != entries.end()) {
    cfg.study_pairs.clear();
    for (const auto& p : split_list(std::get<std::string>(it->second.value))) {
      try {
        cfg.study_pairs.push_back(pair_from_string(p));
      } catch (const Error& e) {
        errors.push_back(at_line(it->second.line) + e.what());
      }
    }
  }
  for (std::size_t n : cfg.study_meshes) {
    check(n >= 3, "study.meshes", "entries must be at least 3");
    const bool iso = std::find(cfg.study_pairs.begin(), cfg.study_pairs.end(),
                               PairTag::P1isoP2P1) != cfg.study_pairs.end();
    check(!iso || n % 2 == 1, "study.meshes",
          "entries must be odd for the P1isoP2P1 pair (got " + std::to_string(n) + ")");
  }
  if (auto it = entries.find("study.bench_nodes"); it != entries.end()) {
    cfg.bench_nodes = std::get<std::vector<std::size_t>>(it->second.value);
  } else if (cfg.nodes > 0) {
    cfg.bench_nodes = {cfg.nodes};
  }
  for (std::size_t n : cfg.bench_nodes) {
    check(n >= 3, "study.bench_nodes", "entries must be at least 3");
    check(cfg.pair != PairTag::P1isoP2P1 || n % 2 == 1, "study.bench_nodes",
          "entries must be odd for the P1isoP2P1 pair");
  }
  count("study.bench_repeats", cfg.bench_repeats);
  count("study.bench_sample_stride", cfg.bench_sample_stride);
  check(cfg.bench_repeats >= 1, "study.bench_repeats", "must be at least 1");
  check(cfg.bench_sample_stride >= 1, "study.bench_sample_stride", "must be at least 1");

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Scenario make_scenario(const RunConfig& cfg, std::size_t nodes, PairTag pair) {
  if (cfg.scenario == "solitary") {
    return make_solitary(nodes, pair, cfg.params, cfg.solitary, cfg.solitary_length);
  }
  if (cfg.scenario == "dam_break") return make_dam_break(nodes, pair, cfg.params, cfg.dam_break);
  if (cfg.scenario == "beach") return make_beach(nodes, pair, cfg.params, cfg.beach);
  if (cfg.scenario == "dingemans") {
    return make_dingemans(nodes, pair, cfg.params, cfg.dingemans);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + cfg.scenario + "'");
}

Scenario make_scenario(const RunConfig& cfg) { return make_scenario(cfg, cfg.nodes, cfg.pair); }

std::string resolve_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("NHSW_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return cfg.output_dir;
}

}  // namespace nhsw
