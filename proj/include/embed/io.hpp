#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "embed/sim.hpp"
#include "embed/solve.hpp"

namespace embed::io {

/// Shortest decimal that reads back to the same double; "inf", "-inf", "nan".
std::string format_double(double x);

struct BoundaryRow {
  double l;
  double phi_minus;
  double phi_plus;
  double survival;  // P(L_T > l)
};

/// phi_minus is reported as 0 for one-sided (positive) rules.
std::vector<BoundaryRow> tabulate(const Embedding& e, const std::vector<double>& grid);
std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

void write_boundary_csv(std::ostream& os, const std::vector<BoundaryRow>& rows);
void write_breakpoints_csv(std::ostream& os, const Breakpoints& bp);
void write_batch_csv(std::ostream& os, const SampleBatch& batch);
nlohmann::ordered_json batch_meta(const SampleBatch& batch);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line plot; non-finite points break the polyline.
void write_svg(std::ostream& os, const std::vector<Series>& series, const std::string& title,
               const std::string& x_label, const std::string& y_label);

struct RunConfig {
  nlohmann::json target;
  nlohmann::json char_spec;
  std::string solver = "auto";
  std::string sampler = "exact";
  std::uint64_t seed = 1;
  std::size_t count = 100000;
  double mesh = 1e-3;
  std::string functional = "extrema";
  double space_step = 0.005;
  double level = 0.01;
  double l_max = 10.0;
  std::size_t points = 201;
  std::string out_dir = ".";
  bool emit_csv = true;
  bool emit_svg = false;

  TargetMeasure build_target() const;
  CharMeasure build_char() const;
  /// Solver selector resolved against the target; throws if inconsistent.
  SolverKind solver_kind(const TargetMeasure& mu) const;
};

/// Parses a configuration document; throws EmbedError(configuration).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// "csv,svg" style list.
void set_emit(RunConfig& cfg, const std::string& list);

}  // namespace embed::io
