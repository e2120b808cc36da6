#include "tfseg/search.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tfseg/error.hpp"
#include "tfseg/parallel.hpp"
#include "tfseg/tokenizer.hpp"

namespace tfseg {

namespace {

constexpr const char* kCsvHeader =
    "n_set;t_mc;t_tm;f1;c_pct;anti_entropy;csf1;add2;add3;mul2;mul3";

const std::vector<std::string> kCsvMetrics = {
    "f1", "c_pct", "anti_entropy", "csf1", "add2", "add3", "mul2", "mul3"};

// Report order: the three base target metrics, then the composites.
const std::vector<std::string> kTargetMetrics = {
    "c_pct", "anti_entropy", "csf1", "add2", "add3", "mul2", "mul3"};

// C% grows when compression worsens, so metrics containing it are also
// reported at their minimum.
bool involves_compression(const std::string& metric) {
  return metric == "c_pct" || metric == "add2" || metric == "add3" ||
         metric == "mul2" || metric == "mul3";
}

double parse_real(std::string_view text) {
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size())
    throw input_error("bad real '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

// Per-line boundary profiles for every rank, under one pruned model.
// Indexed [rank index][line index].
using ProfileCache = std::vector<std::vector<std::vector<double>>>;

ProfileCache build_cache(const NGramModel& model,
                         const std::vector<std::u32string>& lines,
                         const std::vector<int>& ranks, int jobs) {
  ProfileCache cache(ranks.size(),
                     std::vector<std::vector<double>>(lines.size()));
  parallel_for(lines.size(), jobs, [&](std::size_t li) {
    for (std::size_t ri = 0; ri < ranks.size(); ++ri)
      cache[ri][li] = rank_profile(model, lines[li], ranks[ri]);
  });
  return cache;
}

// Mean of the cached rank profiles over one n_set, per line. Summing in
// rank order keeps the result bit-identical to boundary_profile.
std::vector<std::vector<double>> assemble_profiles(
    const ProfileCache& cache, const std::vector<int>& n_set,
    const std::vector<int>& ranks, std::size_t line_count) {
  std::vector<std::size_t> rank_index;
  rank_index.reserve(n_set.size());
  for (int n : n_set)
    rank_index.push_back(
        std::lower_bound(ranks.begin(), ranks.end(), n) - ranks.begin());
  std::vector<std::vector<double>> profiles(line_count);
  std::vector<const std::vector<double>*> views(n_set.size());
  for (std::size_t li = 0; li < line_count; ++li) {
    for (std::size_t r = 0; r < rank_index.size(); ++r)
      views[r] = &cache[rank_index[r]][li];
    profiles[li] = mean_profile(views);
  }
  return profiles;
}

std::vector<Tokenization> cut_lines(
    const std::vector<std::u32string>& lines,
    const std::vector<std::vector<double>>& profiles, double t_tm) {
  std::vector<Tokenization> result(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    result[i].line = lines[i];
    result[i].boundaries = threshold_boundaries(profiles[i], t_tm);
  }
  return result;
}

std::vector<double> metric_column(const std::vector<GridRow>& rows,
                                  const std::string& metric) {
  std::vector<double> values;
  values.reserve(rows.size());
  for (const GridRow& row : rows) values.push_back(metric_value(row, metric));
  return values;
}

std::string json_real(const std::optional<double>& value) {
  return value ? format_real(*value) : "\"undefined\"";
}

std::string selection_json(const char* label, const Selection& selection,
                           const std::string& metric, bool trailing_comma) {
  std::string out;
  out += "      \"" + std::string(label) + "\": {\n";
  out += "        \"n_set\": \"" + format_n_set(selection.row.n_set) + "\",\n";
  out += "        \"t_mc\": " + format_real(selection.row.t_mc) + ",\n";
  out += "        \"t_tm\": " + format_real(selection.row.t_tm) + ",\n";
  out += "        \"value\": " + format_real(metric_value(selection.row, metric)) + ",\n";
  out += "        \"f1\": " + format_real(metric_value(selection.row, "f1")) + "\n";
  out += trailing_comma ? "      },\n" : "      }\n";
  return out;
}

}  // namespace

GridSpec GridSpec::defaults() {
  GridSpec spec;
  for (int n = 1; n <= 7; ++n) spec.n_sets.push_back({n});
  for (int k = 2; k <= 7; ++k) {
    std::vector<int> prefix(k);
    std::iota(prefix.begin(), prefix.end(), 1);
    spec.n_sets.push_back(std::move(prefix));
  }
  spec.t_mcs = {0.0, 0.0001, 0.001, 0.01, 0.1};
  spec.t_tms = {0.0001, 0.0005, 0.001, 0.005, 0.01, 0.02, 0.05, 0.1,
                0.2,    0.3,    0.4,   0.5,   0.6,  0.7,  0.8,  0.9};
  return spec;
}

void validate_grid_spec(const GridSpec& spec) {
  if (spec.n_sets.empty()) throw input_error("grid needs at least one n rank set");
  if (spec.t_mcs.empty()) throw input_error("grid needs at least one pruning threshold");
  if (spec.t_tms.empty()) throw input_error("grid needs at least one tokenization threshold");
  for (const std::vector<int>& n_set : spec.n_sets) {
    if (n_set.empty()) throw input_error("empty n rank set");
    for (std::size_t i = 0; i < n_set.size(); ++i) {
      if (n_set[i] < 1)
        throw input_error("n rank must be positive, got " +
                          std::to_string(n_set[i]));
      if (i > 0 && n_set[i] <= n_set[i - 1])
        throw input_error("n rank set must be strictly increasing: " +
                          format_n_set(n_set));
    }
  }
  for (std::size_t i = 0; i < spec.n_sets.size(); ++i)
    for (std::size_t j = i + 1; j < spec.n_sets.size(); ++j)
      if (spec.n_sets[i] == spec.n_sets[j])
        throw input_error("duplicate n rank set " +
                          format_n_set(spec.n_sets[i]));
  for (std::size_t i = 0; i < spec.t_mcs.size(); ++i) {
    (void)PruneThreshold(spec.t_mcs[i]);  // range check
    for (std::size_t j = i + 1; j < spec.t_mcs.size(); ++j)
      if (spec.t_mcs[i] == spec.t_mcs[j])
        throw input_error("duplicate pruning threshold " +
                          format_real(spec.t_mcs[i]));
  }
  for (std::size_t i = 0; i < spec.t_tms.size(); ++i) {
    if (!(spec.t_tms[i] > 0.0 && spec.t_tms[i] <= 1.0))
      throw input_error("tokenization threshold must lie in (0, 1], got " +
                        std::to_string(spec.t_tms[i]));
    for (std::size_t j = i + 1; j < spec.t_tms.size(); ++j)
      if (spec.t_tms[i] == spec.t_tms[j])
        throw input_error("duplicate tokenization threshold " +
                          format_real(spec.t_tms[i]));
  }
}

GridSpec load_grid_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  GridSpec spec;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const std::size_t hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    std::istringstream fields(line);
    std::string directive, value, extra;
    if (!(fields >> directive)) continue;
    if (!(fields >> value) || fields >> extra)
      throw input_error(path + ": line " + std::to_string(line_no) +
                        ": expected '<directive> <value>'");
    try {
      if (directive == "n_set") {
        spec.n_sets.push_back(parse_n_set(value));
      } else if (directive == "t_mc") {
        spec.t_mcs.push_back(parse_real(value));
      } else if (directive == "t_tm") {
        spec.t_tms.push_back(parse_real(value));
      } else {
        throw input_error("unknown directive '" + directive + "'");
      }
    } catch (const input_error& e) {
      throw input_error(path + ": line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  try {
    validate_grid_spec(spec);
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
  return spec;
}

std::vector<GridRow> run_grid(const Corpus& train, const Corpus& test,
                              const ReferenceSegmentation& reference,
                              const GridSpec& spec,
                              const GridOptions& options) {
  validate_grid_spec(spec);
  if (reference.lines.size() != test.lines.size())
    throw input_error("reference covers " +
                      std::to_string(reference.lines.size()) +
                      " lines, test corpus has " +
                      std::to_string(test.lines.size()));
  for (std::size_t i = 0; i < test.lines.size(); ++i)
    if (reference.lines[i] != test.lines[i])
      throw input_error("reference disagrees with the test corpus on line " +
                        std::to_string(i + 1));
  if (test.symbol_count == 0) throw input_error("test corpus has no symbols");

  const auto log = [&](const std::string& message) {
    if (options.log) options.log(message);
  };

  std::vector<int> ranks;
  for (const std::vector<int>& n_set : spec.n_sets)
    ranks.insert(ranks.end(), n_set.begin(), n_set.end());
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  const int order = ranks.back() + 1;

  log("building order-" + std::to_string(order) + " models");
  const NGramModel base = build_model(train, order);
  const auto halves = split_halves(train);
  const NGramModel base_a = build_model(halves.first, order);
  const NGramModel base_b = build_model(halves.second, order);

  const bool metrics_on_train = options.metric_source == MetricSource::train;
  std::vector<GridRow> rows(spec.n_sets.size() * spec.t_mcs.size() *
                            spec.t_tms.size());

  for (std::size_t mi = 0; mi < spec.t_mcs.size(); ++mi) {
    const PruneThreshold t_mc(spec.t_mcs[mi]);
    log("evaluating t_mc=" + format_real(t_mc.value));

    // The pruned models are only needed to fill the profile caches; all
    // grid points then work off the cached per-rank scores.
    ProfileCache cache_test, cache_a, cache_b, cache_train;
    {
      const NGramModel pruned = prune_model(base, t_mc);
      cache_test = build_cache(pruned, test.lines, ranks, options.jobs);
      if (metrics_on_train)
        cache_train = build_cache(pruned, train.lines, ranks, options.jobs);
    }
    {
      const NGramModel pruned_a = prune_model(base_a, t_mc);
      cache_a = build_cache(pruned_a, test.lines, ranks, options.jobs);
    }
    {
      const NGramModel pruned_b = prune_model(base_b, t_mc);
      cache_b = build_cache(pruned_b, test.lines, ranks, options.jobs);
    }

    parallel_for(spec.n_sets.size(), options.jobs, [&](std::size_t si) {
      const std::vector<int>& n_set = spec.n_sets[si];
      const auto prof_test =
          assemble_profiles(cache_test, n_set, ranks, test.lines.size());
      const auto prof_a =
          assemble_profiles(cache_a, n_set, ranks, test.lines.size());
      const auto prof_b =
          assemble_profiles(cache_b, n_set, ranks, test.lines.size());
      const auto prof_train =
          metrics_on_train
              ? assemble_profiles(cache_train, n_set, ranks, train.lines.size())
              : std::vector<std::vector<double>>();

      for (std::size_t ti = 0; ti < spec.t_tms.size(); ++ti) {
        const double t_tm = spec.t_tms[ti];
        try {
          const auto tok_test = cut_lines(test.lines, prof_test, t_tm);
          const auto tok_a = cut_lines(test.lines, prof_a, t_tm);
          const auto tok_b = cut_lines(test.lines, prof_b, t_tm);

          MetricVector metrics;
          metrics.f1 = csv_round(boundary_f1(tok_test, reference).f1);
          metrics.csf1 = csv_round(boundary_f1(tok_a, tok_b).f1);
          if (metrics_on_train) {
            const auto tok_train = cut_lines(train.lines, prof_train, t_tm);
            metrics.c_pct = csv_round(compression_factor(tok_train));
            metrics.anti_entropy = csv_round(anti_entropy(tok_train));
          } else {
            metrics.c_pct = csv_round(compression_factor(tok_test));
            metrics.anti_entropy = csv_round(anti_entropy(tok_test));
          }

          GridRow& row = rows[(si * spec.t_mcs.size() + mi) * spec.t_tms.size() + ti];
          row.n_set = n_set;
          row.t_mc = t_mc.value;
          row.t_tm = t_tm;
          row.metrics = metrics;
        } catch (const input_error& e) {
          throw input_error("grid point n_set=" + format_n_set(n_set) +
                            " t_mc=" + format_real(t_mc.value) +
                            " t_tm=" + format_real(t_tm) + ": " + e.what());
        }
      }
    });
  }
  return rows;
}

double metric_value(const GridRow& row, const std::string& metric) {
  const MetricVector& m = row.metrics;
  double value = 0.0;
  if (metric == "f1") {
    value = m.f1;
  } else if (metric == "c_pct") {
    value = m.c_pct;
  } else if (metric == "anti_entropy") {
    value = m.anti_entropy;
  } else if (metric == "csf1") {
    value = m.csf1;
  } else if (metric == "add2") {
    value = m.add2();
  } else if (metric == "add3") {
    value = m.add3();
  } else if (metric == "mul2") {
    value = m.mul2();
  } else if (metric == "mul3") {
    value = m.mul3();
  } else {
    throw input_error("unknown metric '" + metric + "'");
  }
  return csv_round(value);
}

Selection select_best(const std::vector<GridRow>& rows,
                      const std::string& metric, SelectMode mode) {
  if (rows.empty()) throw input_error("no grid rows to select from");
  std::size_t best = 0;
  double best_value = metric_value(rows[0], metric);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double value = metric_value(rows[i], metric);
    const bool better =
        mode == SelectMode::max ? value > best_value : value < best_value;
    if (better) {
      best = i;
      best_value = value;
    }
  }
  return Selection{best, rows[best]};
}

Report correlation_report(const std::vector<GridRow>& rows) {
  if (rows.size() < 2)
    throw input_error("correlation report needs at least 2 rows, got " +
                      std::to_string(rows.size()));
  Report report;
  report.rows = rows.size();
  const std::vector<double> f1 = metric_column(rows, "f1");
  for (const std::string& metric : kTargetMetrics) {
    ReportEntry entry;
    entry.metric = metric;
    entry.pearson_vs_f1 = pearson(f1, metric_column(rows, metric));
    entry.argmax = select_best(rows, metric, SelectMode::max);
    if (involves_compression(metric))
      entry.argmin = select_best(rows, metric, SelectMode::min);
    report.entries.push_back(std::move(entry));
  }
  const std::vector<double> c_pct = metric_column(rows, "c_pct");
  const std::vector<double> anti = metric_column(rows, "anti_entropy");
  const std::vector<double> csf1 = metric_column(rows, "csf1");
  report.csf1_vs_anti_entropy = pearson(csf1, anti);
  report.csf1_vs_c_pct = pearson(csf1, c_pct);
  report.anti_entropy_vs_c_pct = pearson(anti, c_pct);
  return report;
}

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  std::string out = buffer;
  if (out == "-0.000000") out.erase(0, 1);
  return out;
}

double csv_round(double value) {
  const std::string text = format_real(value);
  double parsed = 0.0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (ec != std::errc() || end != text.data() + text.size())
    throw std::runtime_error("unparsable formatted real: " + text);
  return parsed;
}

std::string format_n_set(const std::vector<int>& n_set) {
  std::string out;
  for (std::size_t i = 0; i < n_set.size(); ++i) {
    if (i > 0) out += '+';
    out += std::to_string(n_set[i]);
  }
  return out;
}

std::vector<int> parse_n_set(const std::string& text) {
  std::vector<int> values;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '+') {
      const std::string_view part(text.data() + start, i - start);
      int value = 0;
      const auto [end, ec] =
          std::from_chars(part.data(), part.data() + part.size(), value);
      if (part.empty() || ec != std::errc() ||
          end != part.data() + part.size() || value < 1)
        throw input_error("bad n rank set '" + text + "'");
      values.push_back(value);
      start = i + 1;
    }
  }
  return values;
}

std::string rows_to_csv(const std::vector<GridRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const GridRow& row : rows) {
    out += format_n_set(row.n_set);
    out += ";" + format_real(row.t_mc);
    out += ";" + format_real(row.t_tm);
    for (const std::string& metric : kCsvMetrics)
      out += ";" + format_real(metric_value(row, metric));
    out += "\n";
  }
  return out;
}

std::vector<GridRow> rows_from_csv(const std::string& text,
                                   const std::string& name) {
  const auto lines = split_on(text, '\n');
  std::size_t line_count = lines.size();
  if (line_count > 0 && lines.back().empty()) --line_count;  // final newline
  if (line_count == 0) throw input_error(name + ": empty results file");

  const auto fail = [&](std::size_t index, const std::string& message) {
    throw input_error(name + ": line " + std::to_string(index + 1) + ": " +
                      message);
  };

  std::string_view header = lines[0];
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
  if (header != kCsvHeader) fail(0, "unexpected header");

  std::vector<GridRow> rows;
  rows.reserve(line_count - 1);
  for (std::size_t i = 1; i < line_count; ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto fields = split_on(line, ';');
    if (fields.size() != 11)
      fail(i, "expected 11 fields, got " + std::to_string(fields.size()));
    GridRow row;
    try {
      row.n_set = parse_n_set(std::string(fields[0]));
      row.t_mc = parse_real(fields[1]);
      row.t_tm = parse_real(fields[2]);
      row.metrics.f1 = parse_real(fields[3]);
      row.metrics.c_pct = parse_real(fields[4]);
      row.metrics.anti_entropy = parse_real(fields[5]);
      row.metrics.csf1 = parse_real(fields[6]);
      (void)PruneThreshold(row.t_mc);  // range check
    } catch (const input_error& e) {
      fail(i, e.what());
    }
    for (std::size_t k = 1; k < row.n_set.size(); ++k)
      if (row.n_set[k] <= row.n_set[k - 1])
        fail(i, "n rank set must be strictly increasing");
    if (!(row.t_tm > 0.0 && row.t_tm <= 1.0))
      fail(i, "tokenization threshold out of (0, 1]");
    // The composite columns must agree with the parts they were derived
    // from; a disagreement means the file was not produced by this tool.
    const std::vector<std::pair<const char*, std::string_view>> composites = {
        {"add2", fields[7]},
        {"add3", fields[8]},
        {"mul2", fields[9]},
        {"mul3", fields[10]}};
    for (const auto& [metric, field] : composites)
      if (format_real(metric_value(row, metric)) != field)
        fail(i, std::string("column ") + metric +
                    " disagrees with its parts");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_rows_csv(const std::vector<GridRow>& rows,
                    const std::string& path) {
  write_text_file(rows_to_csv(rows), path);
}

std::vector<GridRow> read_rows_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw input_error("read error: " + path);
  return rows_from_csv(text, path);
}

std::string report_to_json(const Report& report) {
  std::string out = "{\n";
  out += "  \"rows\": " + std::to_string(report.rows) + ",\n";
  out += "  \"metrics\": {\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const ReportEntry& entry = report.entries[i];
    out += "    \"" + entry.metric + "\": {\n";
    out += "      \"pearson_vs_f1\": " + json_real(entry.pearson_vs_f1) + ",\n";
    out += selection_json("argmax", entry.argmax, entry.metric,
                          entry.argmin.has_value());
    if (entry.argmin)
      out += selection_json("argmin", *entry.argmin, entry.metric, false);
    out += i + 1 < report.entries.size() ? "    },\n" : "    }\n";
  }
  out += "  },\n";
  out += "  \"pairwise\": {\n";
  out += "    \"csf1_vs_anti_entropy\": " + json_real(report.csf1_vs_anti_entropy) + ",\n";
  out += "    \"csf1_vs_c_pct\": " + json_real(report.csf1_vs_c_pct) + ",\n";
  out += "    \"anti_entropy_vs_c_pct\": " + json_real(report.anti_entropy_vs_c_pct) + "\n";
  out += "  }\n";
  out += "}\n";
  return out;
}

std::string figure_to_csv(const Report& report) {
  std::string out = "metric;f1_at_argmax;pearson_vs_f1\n";
  for (const ReportEntry& entry : report.entries) {
    out += entry.metric;
    out += ";" + format_real(metric_value(entry.argmax.row, "f1"));
    out += ";";
    out += entry.pearson_vs_f1 ? format_real(*entry.pearson_vs_f1)
                               : "undefined";
    out += "\n";
  }
  return out;
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open file: " + path);
  out << text;
  out.flush();
  if (!out) throw input_error("write error: " + path);
}

}  // namespace tfseg
