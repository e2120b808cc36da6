#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tfseg/corpus.hpp"
#include "tfseg/metrics.hpp"

namespace tfseg {

// The three axes of the hyper-parameter sweep.
struct GridSpec {
  std::vector<std::vector<int>> n_sets;
  std::vector<double> t_mcs;
  std::vector<double> t_tms;

  // Rank sets {1}..{7} and prefixes {1,2}..{1..7}, five pruning cutoffs,
  // sixteen boundary thresholds: 13 x 5 x 16 = 1040 points.
  static GridSpec defaults();
};

void validate_grid_spec(const GridSpec& spec);
GridSpec load_grid_spec(const std::string& path);

// One evaluated grid point. Base metrics are stored exactly as they will
// appear in the results CSV (six decimals), so every consumer — selection,
// correlations, re-reading the CSV — sees identical numbers.
struct GridRow {
  std::vector<int> n_set;
  double t_mc = 0.0;
  double t_tm = 0.0;
  MetricVector metrics;
};

enum class MetricSource { test, train };

struct GridOptions {
  MetricSource metric_source = MetricSource::test;
  int jobs = 1;
  std::function<void(const std::string&)> log;  // optional progress sink
};

std::vector<GridRow> run_grid(const Corpus& train, const Corpus& test,
                              const ReferenceSegmentation& reference,
                              const GridSpec& spec,
                              const GridOptions& options = {});

// Row value (CSV precision) for one of: f1, c_pct, anti_entropy, csf1,
// add2, add3, mul2, mul3.
double metric_value(const GridRow& row, const std::string& metric);

enum class SelectMode { max, min };

struct Selection {
  std::size_t index = 0;
  GridRow row;
};

// Extremal row for the named metric; ties go to the earliest row.
Selection select_best(const std::vector<GridRow>& rows,
                      const std::string& metric, SelectMode mode);

struct ReportEntry {
  std::string metric;
  std::optional<double> pearson_vs_f1;  // empty = undefined (zero variance)
  Selection argmax;
  std::optional<Selection> argmin;  // for metrics where smaller may be better
};

struct Report {
  std::size_t rows = 0;
  std::vector<ReportEntry> entries;  // fixed metric order, each once
  std::optional<double> csf1_vs_anti_entropy;
  std::optional<double> csf1_vs_c_pct;
  std::optional<double> anti_entropy_vs_c_pct;
};

Report correlation_report(const std::vector<GridRow>& rows);

// Fixed-point formatting shared by every emitted file: six decimal
// digits, ties to even.
std::string format_real(double value);
// The double that format_real's output parses back to.
double csv_round(double value);

std::string format_n_set(const std::vector<int>& n_set);
std::vector<int> parse_n_set(const std::string& text);

std::string rows_to_csv(const std::vector<GridRow>& rows);
std::vector<GridRow> rows_from_csv(const std::string& text,
                                   const std::string& name);
void write_rows_csv(const std::vector<GridRow>& rows, const std::string& path);
std::vector<GridRow> read_rows_csv(const std::string& path);

std::string report_to_json(const Report& report);
std::string figure_to_csv(const Report& report);
void write_text_file(const std::string& text, const std::string& path);

}  // namespace tfseg
