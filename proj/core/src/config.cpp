#include "carom/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "carom/errors.hpp"

namespace carom {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string collapse_spaces(const std::string& s) {
  std::string out;
  bool in_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out += ' ';
    in_space = false;
    out += c;
  }
  return out;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

double parse_double_or_throw(const std::string& key, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + tok + "' is not a number");
  }
}

long parse_int_or_throw(const std::string& key, const std::string& tok) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ConfigError("key '" + key + "': '" + tok + "' is not an integer");
  return v;
}

std::uint64_t parse_uint_or_throw(const std::string& key, const std::string& tok) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ConfigError("key '" + key + "': '" + tok + "' is not a nonnegative integer");
  return v;
}

// ---- per-key validators -------------------------------------------------

void check_uint(const std::string& key, const std::string& v) { parse_uint_or_throw(key, v); }

void check_pos_int(const std::string& key, const std::string& v) {
  if (parse_int_or_throw(key, v) < 1)
    throw ConfigError("key '" + key + "': must be a positive integer");
}

void check_int_min2(const std::string& key, const std::string& v) {
  if (parse_int_or_throw(key, v) < 2) throw ConfigError("key '" + key + "': must be at least 2");
}

void check_pos_double(const std::string& key, const std::string& v) {
  if (!(parse_double_or_throw(key, v) > 0.0))
    throw ConfigError("key '" + key + "': must be positive");
}

void check_double(const std::string& key, const std::string& v) {
  parse_double_or_throw(key, v);
}

void check_table(const std::string& key, const std::string& v) {
  try {
    make_table(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

void check_tiling(const std::string& key, const std::string& v) {
  try {
    make_tiling(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

void check_map_word(const std::string& key, const std::string& v) {
  if (v != "birkhoff" && v != "symplectic")
    throw ConfigError("key '" + key + "': must be one of birkhoff, symplectic");
}

void check_geometry_word(const std::string& key, const std::string& v) {
  if (v != "euclidean" && v != "hyperbolic")
    throw ConfigError("key '" + key + "': must be one of euclidean, hyperbolic");
}

void check_labels(const std::string& key, const std::string& v) {
  if (v == "sides") return;
  check_pos_int(key, v);
}

// ---- schema --------------------------------------------------------------

struct KeyRule {
  const char* key;
  bool required;
  const char* def;  // nullptr: no default
  void (*check)(const std::string&, const std::string&);
};

const std::vector<std::pair<ExperimentKind, const char*>>& kind_names() {
  static const std::vector<std::pair<ExperimentKind, const char*>> names = {
      {ExperimentKind::OrbitSweep, "orbit-sweep"},
      {ExperimentKind::PeriodicSearch, "periodic-search"},
      {ExperimentKind::CountPT, "count-PT"},
      {ExperimentKind::TilingSim, "tiling-sim"},
      {ExperimentKind::FoldScan, "fold-scan"},
      {ExperimentKind::Flow, "flow"},
      {ExperimentKind::Strobe, "strobe"},
      {ExperimentKind::Complexity, "complexity"},
      {ExperimentKind::Front, "front"},
      {ExperimentKind::LineDomain, "line-domain"},
  };
  return names;
}

const std::vector<KeyRule>& rules_for(ExperimentKind kind) {
  static const std::vector<KeyRule> common = {
      {"kind", true, nullptr, nullptr},
      {"seed", false, "0", check_uint},
      {"threads", false, "1", check_pos_int},
  };
  static const std::map<ExperimentKind, std::vector<KeyRule>> per_kind = [] {
    std::map<ExperimentKind, std::vector<KeyRule>> m;
    auto with = [](std::initializer_list<KeyRule> extra) {
      std::vector<KeyRule> v = common;
      v.insert(v.end(), extra);
      return v;
    };
    m[ExperimentKind::OrbitSweep] = with({
        {"table", true, nullptr, check_table},
        {"map", false, "birkhoff", check_map_word},
        {"steps", false, "1000", check_pos_int},
        {"orbits", false, "100", check_pos_int},
    });
    m[ExperimentKind::PeriodicSearch] = with({
        {"table", true, nullptr, check_table},
        {"geometry", false, "euclidean", check_geometry_word},
        {"n-max", false, "10", check_int_min2},
        {"multistarts", false, "48", check_pos_int},
        {"grad-tol", false, "1e-9", check_pos_double},
    });
    m[ExperimentKind::CountPT] = with({
        {"table", true, nullptr, check_table},
        {"n-max", false, "100", check_int_min2},
        {"t-min", false, "20", check_pos_double},
        {"t-max", false, "200", check_pos_double},
        {"t-samples", false, "10", check_int_min2},
        {"multistarts", false, "8", check_pos_int},
    });
    m[ExperimentKind::TilingSim] = with({
        {"tiling", true, nullptr, check_tiling},
        {"steps", false, "100000", check_pos_int},
        {"starts", false, "10", check_pos_int},
    });
    m[ExperimentKind::FoldScan] = with({
        {"tiling", true, nullptr, check_tiling},
        {"radius", false, "6", check_pos_int},
        {"budget", false, "400000", check_pos_int},
    });
    m[ExperimentKind::Flow] = with({
        {"c", false, "0.1", check_double},
        {"t-max", false, "10", check_pos_double},
        {"samples", false, "101", check_int_min2},
        {"x0", false, "1", check_double},
        {"p0", false, "0", check_double},
        {"eta", false, "0", check_double},
        {"tolerance", false, "1e-10", check_pos_double},
    });
    m[ExperimentKind::Strobe] = with({
        {"amp", false, "1", check_double},
        {"n", false, "1", check_pos_int},
        {"m", false, "1", check_pos_int},
        {"u0", false, "0", check_double},
        {"p0", false, "10", check_double},
        {"iterations", false, "1000", check_pos_int},
        {"tolerance", false, "1e-10", check_pos_double},
    });
    m[ExperimentKind::Complexity] = with({
        {"table", true, nullptr, check_table},
        {"map", false, "birkhoff", check_map_word},
        {"labels", false, "4", check_labels},
        {"n-max", false, "8", check_pos_int},
        {"orbits", false, "200", check_pos_int},
        {"steps", false, "256", check_pos_int},
    });
    m[ExperimentKind::Front] = with({
        {"table", true, nullptr, check_table},
        {"source-x", false, "0.3", check_double},
        {"source-y", false, "0.1", check_double},
        {"t-max", false, "5", check_pos_double},
        {"eps", false, "0.05", check_pos_double},
        {"rays", false, "4096", check_pos_int},
    });
    m[ExperimentKind::LineDomain] = with({
        {"table", true, nullptr, check_table},
        {"grid", false, "256", check_pos_int},
        {"states", false, "100", check_pos_int},
    });
    return m;
  }();
  return per_kind.at(kind);
}

std::string valid_keys_message(ExperimentKind kind) {
  std::string msg = "valid keys:";
  for (const KeyRule& r : rules_for(kind)) {
    msg += ' ';
    msg += r.key;
  }
  return msg;
}

ExperimentKind kind_from_name(const std::string& name) {
  for (const auto& [k, n] : kind_names())
    if (name == n) return k;
  std::string msg = "unknown experiment kind '" + name + "'; valid kinds:";
  for (const auto& [k, n] : kind_names()) {
    (void)k;
    msg += ' ';
    msg += n;
  }
  throw ConfigError(msg);
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& [kk, n] : kind_names())
    if (kk == k) return n;
  return "?";
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

double ExperimentConfig::get_double(const std::string& key) const {
  return parse_double_or_throw(key, raw(key));
}

long ExperimentConfig::get_int(const std::string& key) const {
  return parse_int_or_throw(key, raw(key));
}

std::uint64_t ExperimentConfig::get_uint(const std::string& key) const {
  return parse_uint_or_throw(key, raw(key));
}

std::vector<std::string> ExperimentConfig::get_words(const std::string& key) const {
  return split_words(raw(key));
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = collapse_spaces(trim(line.substr(eq + 1)));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty value for key '" + key +
                        "'");
    if (kv.count(key))
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    kv.emplace(std::move(key), std::move(value));
  }

  auto kind_it = kv.find("kind");
  if (kind_it == kv.end()) throw ConfigError("missing required key 'kind'");

  ExperimentConfig cfg;
  cfg.kind = kind_from_name(kind_it->second);
  const auto& rules = rules_for(cfg.kind);

  for (const auto& [key, value] : kv) {
    auto rule = std::find_if(rules.begin(), rules.end(),
                             [&](const KeyRule& r) { return key == r.key; });
    if (rule == rules.end())
      throw ConfigError("unknown key '" + key + "' for kind '" + to_string(cfg.kind) + "'; " +
                        valid_keys_message(cfg.kind));
    if (rule->check) rule->check(key, value);
  }
  for (const KeyRule& r : rules) {
    if (kv.count(r.key)) continue;
    if (r.required) throw ConfigError("missing required key '" + std::string(r.key) + "'");
    if (r.def) kv.emplace(r.key, r.def);
  }

  cfg.values = std::move(kv);
  cfg.seed = cfg.get_uint("seed");
  cfg.threads = static_cast<int>(cfg.get_int("threads"));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string print_config(const ExperimentConfig& config) {
  std::string out = "kind = " + config.raw("kind") + "\n";
  for (const auto& [key, value] : config.values) {
    if (key == "kind") continue;
    out += key + " = " + value + "\n";
  }
  return out;
}

BoundaryCurve make_table(const std::string& spec) {
  const auto w = split_words(spec);
  if (w.empty()) throw ConfigError("empty table description");
  auto num = [&](std::size_t i) { return parse_double_or_throw("table", w[i]); };
  if (w[0] == "circle" && w.size() == 2) return BoundaryCurve::circle(num(1));
  if (w[0] == "ellipse" && w.size() == 3) return BoundaryCurve::ellipse(num(1), num(2));
  if (w[0] == "regular" && w.size() == 3) {
    const long n = parse_int_or_throw("table", w[1]);
    if (n < 3) throw ConfigError("key 'table': regular polygon needs at least 3 corners");
    return BoundaryCurve::regular_polygon(static_cast<int>(n), num(2));
  }
  if (w[0] == "stadium" && w.size() == 3) return BoundaryCurve::stadium(num(1), num(2));
  if (w[0] == "polygon" && w.size() >= 7 && (w.size() - 1) % 2 == 0) {
    std::vector<Vec2> pts;
    for (std::size_t i = 1; i + 1 < w.size(); i += 2) pts.push_back({num(i), num(i + 1)});
    return BoundaryCurve::polygon(std::move(pts));
  }
  throw ConfigError(
      "key 'table': expected one of: circle R | ellipse a b | regular n R | stadium l r | "
      "polygon x1 y1 x2 y2 x3 y3 ...");
}

Tiling make_tiling(const std::string& spec) {
  const auto w = split_words(spec);
  if (w.empty()) throw ConfigError("empty tiling description");
  auto num = [&](std::size_t i) { return parse_double_or_throw("tiling", w[i]); };
  if (w[0] == "triangle" && w.size() == 3)
    return Tiling::triangle_central_symmetry(num(1), num(2));
  if (w[0] == "parallelogram" && w.size() == 4)
    return Tiling::parallelogram(num(1), num(2), num(3));
  if (w[0] == "brick" && w.size() == 2) return Tiling::brick(num(1));
  if (w[0] == "wind-tree" && w.size() == 3) return Tiling::wind_tree(num(1), num(2));
  throw ConfigError(
      "key 'tiling': expected one of: triangle alpha beta | parallelogram a b alpha | "
      "brick theta | wind-tree a b");
}

}  // namespace carom
