#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tfseg/corpus.hpp"
#include "tfseg/error.hpp"
#include "tfseg/metrics.hpp"
#include "tfseg/model.hpp"
#include "tfseg/search.hpp"
#include "tfseg/tokenizer.hpp"
#include "tfseg/utf8.hpp"

namespace {

using Clock = std::chrono::steady_clock;

std::string elapsed_since(Clock::time_point start) {
  const std::chrono::duration<double> seconds = Clock::now() - start;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2fs", seconds.count());
  return buffer;
}

std::string corpus_to_text(const tfseg::Corpus& corpus) {
  std::string out;
  for (const std::u32string& line : corpus.lines) {
    out += tfseg::encode_utf8(line);
    out += '\n';
  }
  return out;
}

// grid and report write their two report files next to the results CSV.
std::string output_base(const std::string& path) {
  if (path.size() > 4 && path.ends_with(".csv"))
    return path.substr(0, path.size() - 4);
  return path;
}

std::optional<std::size_t> max_lines_of(const CLI::Option* option,
                                        std::size_t value) {
  if (option->count() == 0) return std::nullopt;
  return value;
}

int cmd_build(const std::string& corpus_path, int n_max,
              const std::string& out_path,
              std::optional<std::size_t> max_lines) {
  const auto start = Clock::now();
  const tfseg::Corpus corpus = tfseg::load_corpus(corpus_path, max_lines);
  const tfseg::NGramModel model = tfseg::build_model(corpus, n_max);
  tfseg::save_model(model, out_path);
  for (int n = 1; n <= model.max_order(); ++n)
    std::cerr << "order " << n << ": " << model.table(n).size() << " grams\n";
  std::cerr << "built " << out_path << " in " << elapsed_since(start) << "\n";
  return 0;
}

int cmd_prune(const std::string& model_path, double t_mc,
              const std::string& out_path) {
  const tfseg::NGramModel model = tfseg::load_model(model_path);
  const tfseg::NGramModel pruned =
      tfseg::prune_model(model, tfseg::PruneThreshold(t_mc));
  tfseg::save_model(pruned, out_path);
  for (int n = 1; n <= pruned.max_order(); ++n)
    std::cerr << "order " << n << ": " << pruned.table(n).size()
              << " grams (was " << model.table(n).size() << ")\n";
  return 0;
}

int cmd_split(const std::string& corpus_path, const std::string& out_prefix) {
  const tfseg::Corpus corpus = tfseg::load_corpus(corpus_path);
  const auto halves = tfseg::split_halves(corpus);
  tfseg::write_text_file(corpus_to_text(halves.first), out_prefix + ".a");
  tfseg::write_text_file(corpus_to_text(halves.second), out_prefix + ".b");
  std::cerr << corpus.lines.size() << " lines -> "
            << halves.first.lines.size() << " + "
            << halves.second.lines.size() << "\n";
  return 0;
}

int cmd_tokenize(const std::string& model_path, const std::string& corpus_path,
                 const std::string& n_set_text, double t_tm,
                 std::optional<double> t_mc, const std::string& out_path,
                 const std::string& format,
                 std::optional<std::size_t> max_lines) {
  if (format != "tokens" && format != "boundaries")
    throw tfseg::input_error("--format must be tokens or boundaries, got '" +
                             format + "'");
  tfseg::NGramModel model = tfseg::load_model(model_path);
  if (model.pruned()) {
    if (t_mc)
      throw tfseg::input_error("model is already pruned; --t-mc does not apply");
  } else {
    model = tfseg::prune_model(model, tfseg::PruneThreshold(t_mc.value_or(0.0)));
  }
  const tfseg::TokenizerParams params(tfseg::parse_n_set(n_set_text),
                                      tfseg::PruneThreshold(t_mc.value_or(0.0)),
                                      t_tm);
  const tfseg::Corpus corpus = tfseg::load_corpus(corpus_path, max_lines);
  const auto tokenizations = tfseg::tokenize_corpus(model, corpus, params);

  std::string out;
  for (const tfseg::Tokenization& tokenization : tokenizations) {
    if (format == "tokens") {
      const auto tokens = tokenization.tokens();
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (t > 0) out += '\t';
        out += tfseg::encode_utf8(tokens[t]);
      }
    } else {
      for (std::size_t b = 0; b < tokenization.boundaries.size(); ++b) {
        if (b > 0) out += ',';
        out += std::to_string(tokenization.boundaries[b]);
      }
    }
    out += '\n';
  }
  tfseg::write_text_file(out, out_path);
  return 0;
}

int cmd_eval(const std::string& candidate_path,
             const std::string& reference_path) {
  const tfseg::ReferenceSegmentation candidate =
      tfseg::reference_from_tokens(candidate_path);
  const tfseg::ReferenceSegmentation reference =
      tfseg::reference_from_tokens(reference_path);
  std::vector<tfseg::Tokenization> tokenizations;
  tokenizations.reserve(candidate.lines.size());
  for (std::size_t i = 0; i < candidate.lines.size(); ++i)
    tokenizations.push_back({candidate.lines[i], candidate.boundaries[i]});
  const tfseg::ScoreTriple score = tfseg::boundary_f1(tokenizations, reference);
  std::cout << "precision " << tfseg::format_real(score.precision) << "\n"
            << "recall " << tfseg::format_real(score.recall) << "\n"
            << "f1 " << tfseg::format_real(score.f1) << "\n"
            << "c_pct " << tfseg::format_real(tfseg::compression_factor(tokenizations)) << "\n"
            << "anti_entropy " << tfseg::format_real(tfseg::anti_entropy(tokenizations)) << "\n";
  return 0;
}

int cmd_grid(const std::string& train_path, const std::string& test_path,
             const std::string& reference_path,
             const std::optional<std::string>& grid_path,
             const std::string& out_path, int jobs,
             std::optional<std::size_t> max_lines,
             const std::string& metric_set) {
  if (jobs < 1) throw tfseg::input_error("--jobs must be at least 1");
  if (metric_set != "test" && metric_set != "train")
    throw tfseg::input_error("--metric-set must be test or train, got '" +
                             metric_set + "'");
  const auto start = Clock::now();
  const tfseg::GridSpec spec = grid_path ? tfseg::load_grid_spec(*grid_path)
                                         : tfseg::GridSpec::defaults();
  const tfseg::Corpus train = tfseg::load_corpus(train_path, max_lines);
  const tfseg::Corpus test = tfseg::load_corpus(test_path);
  const tfseg::ReferenceSegmentation reference =
      tfseg::reference_from_tokens(reference_path);

  tfseg::GridOptions options;
  options.jobs = jobs;
  options.metric_source = metric_set == "train" ? tfseg::MetricSource::train
                                                : tfseg::MetricSource::test;
  options.log = [](const std::string& message) {
    std::cerr << message << "\n";
  };

  const auto rows = tfseg::run_grid(train, test, reference, spec, options);
  tfseg::write_rows_csv(rows, out_path);
  const tfseg::Report report = tfseg::correlation_report(rows);
  const std::string base = output_base(out_path);
  tfseg::write_text_file(tfseg::report_to_json(report), base + ".report.json");
  tfseg::write_text_file(tfseg::figure_to_csv(report), base + ".figure.csv");
  std::cerr << rows.size() << " grid points in " << elapsed_since(start)
            << "; wrote " << out_path << ", " << base << ".report.json, "
            << base << ".figure.csv\n";
  return 0;
}

int cmd_report(const std::string& results_path,
               const std::optional<std::string>& out_path) {
  const auto rows = tfseg::read_rows_csv(results_path);
  const tfseg::Report report = tfseg::correlation_report(rows);
  const std::string base = output_base(out_path.value_or(results_path));
  tfseg::write_text_file(tfseg::report_to_json(report), base + ".report.json");
  tfseg::write_text_file(tfseg::figure_to_csv(report), base + ".figure.csv");
  std::cerr << "wrote " << base << ".report.json, " << base
            << ".figure.csv\n";
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"transition-freedom tokenization toolkit"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "count n-grams of a corpus into a model file");
  std::string build_corpus, build_out;
  int build_n_max = 0;
  std::size_t build_max_lines = 0;
  build->add_option("--corpus", build_corpus, "training text, one line per unit")->required();
  build->add_option("--n-max", build_n_max, "highest n-gram order to count")->required();
  build->add_option("--out", build_out, "model file to write")->required();
  auto* build_max_lines_opt = build->add_option("--max-lines", build_max_lines, "only read this many lines");

  // prune
  auto* prune = app.add_subcommand("prune", "drop low-frequency grams from a model");
  std::string prune_model, prune_out;
  double prune_t_mc = 0.0;
  prune->add_option("--model", prune_model, "model file to read")->required();
  prune->add_option("--t-mc", prune_t_mc, "relative-frequency cutoff in [0, 1)")->required();
  prune->add_option("--out", prune_out, "model file to write")->required();

  // split
  auto* split = app.add_subcommand("split", "cut a corpus into two halves by line");
  std::string split_corpus, split_out;
  split->add_option("--corpus", split_corpus, "corpus to split")->required();
  split->add_option("--out", split_out, "output prefix; writes <prefix>.a and <prefix>.b")->required();

  // tokenize
  auto* tokenize = app.add_subcommand("tokenize", "segment a corpus with a model");
  std::string tok_model, tok_corpus, tok_n_set, tok_out;
  std::string tok_format = "tokens";
  double tok_t_tm = 0.0, tok_t_mc = 0.0;
  std::size_t tok_max_lines = 0;
  tokenize->add_option("--model", tok_model, "model file")->required();
  tokenize->add_option("--corpus", tok_corpus, "text to segment")->required();
  tokenize->add_option("--n-set", tok_n_set, "n ranks to average, e.g. 1+2+3")->required();
  tokenize->add_option("--t-tm", tok_t_tm, "boundary score threshold in (0, 1]")->required();
  auto* tok_t_mc_opt = tokenize->add_option("--t-mc", tok_t_mc, "prune an unpruned model first");
  tokenize->add_option("--out", tok_out, "segmented output file")->required();
  tokenize->add_option("--format", tok_format, "tokens (tab-joined) or boundaries (comma-joined indices)");
  auto* tok_max_lines_opt = tokenize->add_option("--max-lines", tok_max_lines, "only read this many lines");

  // eval
  auto* eval = app.add_subcommand("eval", "score a segmentation against a reference");
  std::string eval_corpus, eval_reference;
  eval->add_option("--corpus", eval_corpus, "candidate segmentation, tab-joined tokens")->required();
  eval->add_option("--reference", eval_reference, "reference segmentation, tab-joined tokens")->required();

  // grid
  auto* grid = app.add_subcommand("grid", "sweep hyper-parameters and report metric correlations");
  std::string grid_train, grid_test, grid_reference, grid_out;
  std::string grid_metric_set = "test";
  std::string grid_config;
  int grid_jobs = 1;
  std::size_t grid_max_lines = 0;
  grid->add_option("--corpus", grid_train, "training text")->required();
  grid->add_option("--test", grid_test, "evaluation text")->required();
  grid->add_option("--reference", grid_reference, "reference segmentation of the evaluation text")->required();
  grid->add_option("--out", grid_out, "results CSV; the report files are written next to it")->required();
  auto* grid_config_opt = grid->add_option("--grid", grid_config, "grid config file (defaults to the built-in grid)");
  grid->add_option("--jobs", grid_jobs, "worker threads");
  auto* grid_max_lines_opt = grid->add_option("--max-lines", grid_max_lines, "only read this many training lines");
  grid->add_option("--metric-set", grid_metric_set, "compute compression metrics over: test or train");

  // report
  auto* report = app.add_subcommand("report", "rebuild the correlation report from a results CSV");
  std::string report_results;
  std::string report_out;
  report->add_option("results", report_results, "results CSV from a grid run")->required();
  auto* report_out_opt = report->add_option("--out", report_out, "output base path (defaults to the CSV path)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (build->parsed())
    return cmd_build(build_corpus, build_n_max, build_out,
                     max_lines_of(build_max_lines_opt, build_max_lines));
  if (prune->parsed()) return cmd_prune(prune_model, prune_t_mc, prune_out);
  if (split->parsed()) return cmd_split(split_corpus, split_out);
  if (tokenize->parsed())
    return cmd_tokenize(tok_model, tok_corpus, tok_n_set, tok_t_tm,
                        tok_t_mc_opt->count() > 0
                            ? std::optional<double>(tok_t_mc)
                            : std::nullopt,
                        tok_out, tok_format,
                        max_lines_of(tok_max_lines_opt, tok_max_lines));
  if (eval->parsed()) return cmd_eval(eval_corpus, eval_reference);
  if (grid->parsed())
    return cmd_grid(grid_train, grid_test, grid_reference,
                    grid_config_opt->count() > 0
                        ? std::optional<std::string>(grid_config)
                        : std::nullopt,
                    grid_out, grid_jobs,
                    max_lines_of(grid_max_lines_opt, grid_max_lines),
                    grid_metric_set);
  if (report->parsed())
    return cmd_report(report_results, report_out_opt->count() > 0
                                          ? std::optional<std::string>(report_out)
                                          : std::nullopt);
  return 2;  // unreachable: a subcommand is required
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const tfseg::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
