// Command line front end: validate configs, run experiments, render CSV
// artifacts to SVG.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "carom/config.hpp"
#include "carom/csv.hpp"
#include "carom/errors.hpp"
#include "carom/experiment.hpp"
#include "carom/svg.hpp"
#include "carom/vec2.hpp"

namespace {

int find_column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

int cmd_validate(const std::string& path) {
  const carom::ExperimentConfig cfg = carom::load_config(path);
  std::cout << carom::print_config(cfg);
  return 0;
}

int cmd_run(const std::string& path, const std::optional<std::uint64_t>& seed,
            const std::optional<int>& threads, const std::string& out_dir) {
  carom::ExperimentConfig cfg = carom::load_config(path);
  if (seed) {
    cfg.seed = *seed;
    cfg.values["seed"] = std::to_string(*seed);
  }
  if (threads) {
    if (*threads < 1) {
      std::cerr << "error: --threads must be a positive integer\n";
      return 2;
    }
    cfg.threads = *threads;
    cfg.values["threads"] = std::to_string(*threads);
  }

  const carom::ExperimentResult result = carom::run_experiment(cfg, out_dir);
  for (const std::string& file : result.files) std::cout << file << "\n";
  if (result.exit_code != 0) std::cerr << "error: " << result.error << "\n";
  return result.exit_code;
}

int cmd_render(const std::string& csv_path, const std::string& svg_path,
               const std::string& x_col, const std::string& y_col,
               const std::string& group_col, bool dots) {
  const carom::CsvData data = carom::read_csv_file(csv_path);
  if (data.rows.empty()) {
    std::cerr << "error: '" << csv_path << "' has no data rows\n";
    return 2;
  }

  int xi = x_col.empty() ? find_column(data.header, "x") : find_column(data.header, x_col);
  int yi = y_col.empty() ? find_column(data.header, "y") : find_column(data.header, y_col);
  if (!x_col.empty() && xi < 0) {
    std::cerr << "error: no column '" << x_col << "' in " << csv_path << "\n";
    return 2;
  }
  if (!y_col.empty() && yi < 0) {
    std::cerr << "error: no column '" << y_col << "' in " << csv_path << "\n";
    return 2;
  }
  if (xi < 0 || yi < 0) {  // fall back to the first two columns
    if (data.header.size() < 2) {
      std::cerr << "error: need at least two columns to render\n";
      return 2;
    }
    xi = 0;
    yi = 1;
  }

  int gi = -1;
  if (!group_col.empty()) {
    gi = find_column(data.header, group_col);
    if (gi < 0) {
      std::cerr << "error: no column '" << group_col << "' in " << csv_path << "\n";
      return 2;
    }
  } else {
    for (const char* candidate : {"piece", "orbit", "ray", "start", "state", "trajectory"}) {
      gi = find_column(data.header, candidate);
      if (gi >= 0) break;
    }
  }

  // Collect the points of each group in row order.
  std::map<std::string, std::vector<carom::Vec2>> groups;
  std::vector<std::string> order;
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const auto& row : data.rows) {
    if (static_cast<int>(row.size()) <= std::max(xi, yi)) continue;
    double x = 0.0, y = 0.0;
    try {
      x = std::stod(row[xi]);
      y = std::stod(row[yi]);
    } catch (const std::exception&) {
      continue;  // non-numeric cell; skip the row
    }
    const std::string key = gi >= 0 && static_cast<int>(row.size()) > gi ? row[gi] : "";
    if (groups.find(key) == groups.end()) order.push_back(key);
    groups[key].push_back({x, y});
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  if (groups.empty()) {
    std::cerr << "error: no numeric (x, y) rows found\n";
    return 2;
  }

  const double mx = std::max(1e-9, 0.05 * (x_hi - x_lo));
  const double my = std::max(1e-9, 0.05 * (y_hi - y_lo));
  carom::SvgCanvas canvas(x_lo - mx, y_lo - my, x_hi + mx, y_hi + my);

  static const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad",
                                   "#d35400", "#16a085", "#7f8c8d", "#2c3e50"};
  std::size_t color = 0;
  for (const std::string& key : order) {
    const std::string stroke = kPalette[color++ % 8];
    const std::vector<carom::Vec2>& pts = groups[key];
    if (dots || pts.size() == 1) {
      for (const carom::Vec2& p : pts) canvas.dot(p, 2.0, stroke);
    } else {
      canvas.polyline(pts, stroke, 1.2);
    }
  }
  canvas.write_file(svg_path);
  std::cout << svg_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carom: billiard, tiling, and flow experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  CLI::App* validate = app.add_subcommand("validate", "Parse a config and print its canonical form");
  validate->add_option("config", config_path, "experiment config file")->required();

  CLI::App* run = app.add_subcommand("run", "Run an experiment and write CSV artifacts");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--seed", seed, "override the seed");
  run->add_option("--threads", threads, "override the worker count");
  run->add_option("--out-dir", out_dir, "artifact directory (default: out)");

  std::string csv_path, svg_path, x_col, y_col, group_col;
  bool dots = false;
  CLI::App* render = app.add_subcommand("render", "Render a CSV artifact to SVG");
  render->add_option("csv", csv_path, "input CSV file")->required();
  render->add_option("--svg", svg_path, "output SVG file")->required();
  render->add_option("--x-col", x_col, "x column name (default: 'x', else first column)");
  render->add_option("--y-col", y_col, "y column name (default: 'y', else second column)");
  render->add_option("--group", group_col,
                     "series column (default: first of piece/orbit/ray/start/state)");
  render->add_flag("--dots", dots, "draw points instead of polylines");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(config_path);
    if (run->parsed()) return cmd_run(config_path, seed, threads, out_dir);
    if (render->parsed()) return cmd_render(csv_path, svg_path, x_col, y_col, group_col, dots);
  } catch (const carom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
