#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "carom/curve.hpp"
#include "carom/tiling.hpp"

namespace carom {

// Experiment kinds the runner understands.
enum class ExperimentKind {
  OrbitSweep,
  PeriodicSearch,
  CountPT,
  TilingSim,
  FoldScan,
  Flow,
  Strobe,
  Complexity,
  Front,
  LineDomain,
};

std::string to_string(ExperimentKind k);

// A validated experiment description.  The text format is line-oriented
// `key = value`; `#` starts a comment; keys are lower-kebab-case; every kind
// declares its own allowed keys and defaults are filled in at parse time, so
// a printed config is fully explicit and parses back to an equal value.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::OrbitSweep;
  std::uint64_t seed = 0;
  int threads = 1;
  std::map<std::string, std::string> values;  // includes kind/seed/threads

  const std::string& raw(const std::string& key) const;
  bool has(const std::string& key) const { return values.count(key) != 0; }
  double get_double(const std::string& key) const;
  long get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  std::vector<std::string> get_words(const std::string& key) const;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.values == b.values;
  }
};

// Throws ConfigError with a line number on syntax errors, and with the
// offending key (plus the list of valid keys) on schema violations.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical text form; parse(print(c)) == c.
std::string print_config(const ExperimentConfig& config);

// Shared value syntaxes:
//   table  = circle R | ellipse a b | regular n R | stadium l r
//            | polygon x1 y1 x2 y2 ... (counterclockwise, >= 3 corners)
//   tiling = triangle alpha beta | parallelogram a b alpha
//            | brick theta | wind-tree a b          (angles in radians)
BoundaryCurve make_table(const std::string& spec);
Tiling make_tiling(const std::string& spec);

}  // namespace carom
