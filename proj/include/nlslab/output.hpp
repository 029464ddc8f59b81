#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlslab/harness.hpp"
#include "nlslab/observables.hpp"

namespace nlslab {

/// Column order:
/// t, mass, P_1..P_N, E_total, J, K, h1eps, eta1_1..eta1_N, eta2, eta2_tilde,
/// eta3_1..eta3_N, eta_total, split_resid, fit_center_1..N, fit_phase0,
/// fit_residual, shift_w
std::vector<std::string> csv_header(std::size_t dim);

/// Numbers are printed with %.17g, so parsing restores every bit.
void write_rows_csv(std::ostream& out, std::size_t dim, const std::vector<ObservableRow>& rows);
void write_rows_csv(const std::filesystem::path& path, std::size_t dim, const std::vector<ObservableRow>& rows);

struct ParsedRows {
  std::size_t dim = 0;
  std::vector<ObservableRow> rows;
};
/// Throws IoError (with path and line) on malformed input.
ParsedRows read_rows_csv(std::istream& in, const std::string& origin = "<stream>");
ParsedRows read_rows_csv(const std::filesystem::path& path);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  bool markers = false;
};

/// Self-contained SVG line plot; non-positive values are skipped on log axes.
std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Writes rows CSV, classical trajectory CSV, summary and (optionally) the
/// residual plot for one run into `dir`. Returns the written paths.
std::vector<std::filesystem::path> emit_run(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                                            const RunResult& run);

/// Per-run outputs, scaling.csv, report.txt and the log-log panel.
std::vector<std::filesystem::path> emit_sweep(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                                              const SweepResult& sweep, const std::string& kind);

std::string run_summary(const ExperimentConfig& cfg, const RunResult& run);
std::string hypothesis_summary(const HypothesisReport& rep);
std::string run_stem(const RunResult& run);

}  // namespace nlslab
