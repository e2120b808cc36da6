#include "tfseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "tfseg/error.hpp"

namespace tfseg {

namespace {

std::size_t intersection_size(const std::vector<std::size_t>& a,
                              const std::vector<std::size_t>& b) {
  std::size_t i = 0, j = 0, shared = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return shared;
}

// Precision/recall with the degenerate cases pinned down: an empty
// boundary set matches another empty set perfectly and anything else
// not at all.
double pooled_ratio(std::size_t shared, std::size_t own, std::size_t other) {
  if (own == 0) return other == 0 ? 1.0 : 0.0;
  return static_cast<double>(shared) / static_cast<double>(own);
}

ScoreTriple pooled_f1(std::size_t shared, std::size_t candidate,
                      std::size_t reference) {
  ScoreTriple score;
  score.precision = pooled_ratio(shared, candidate, reference);
  score.recall = pooled_ratio(shared, reference, candidate);
  const double sum = score.precision + score.recall;
  score.f1 = sum > 0.0 ? 2.0 * score.precision * score.recall / sum : 0.0;
  return score;
}

void check_paired_lines(std::size_t candidate_lines,
                        std::size_t reference_lines) {
  if (candidate_lines != reference_lines)
    throw input_error("segmentations cover " +
                      std::to_string(candidate_lines) + " vs " +
                      std::to_string(reference_lines) + " lines");
}

[[noreturn]] void fail_line_mismatch(std::size_t index) {
  throw input_error("segmentations disagree on the text of line " +
                    std::to_string(index + 1));
}

}  // namespace

ScoreTriple boundary_f1(const std::vector<Tokenization>& candidate,
                        const ReferenceSegmentation& reference) {
  check_paired_lines(candidate.size(), reference.lines.size());
  std::size_t shared = 0, cand = 0, ref = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (candidate[i].line != reference.lines[i]) fail_line_mismatch(i);
    shared += intersection_size(candidate[i].boundaries,
                                reference.boundaries[i]);
    cand += candidate[i].boundaries.size();
    ref += reference.boundaries[i].size();
  }
  return pooled_f1(shared, cand, ref);
}

ScoreTriple boundary_f1(const std::vector<Tokenization>& candidate,
                        const std::vector<Tokenization>& reference) {
  check_paired_lines(candidate.size(), reference.size());
  std::size_t shared = 0, cand = 0, ref = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (candidate[i].line != reference[i].line) fail_line_mismatch(i);
    shared += intersection_size(candidate[i].boundaries,
                                reference[i].boundaries);
    cand += candidate[i].boundaries.size();
    ref += reference[i].boundaries.size();
  }
  return pooled_f1(shared, cand, ref);
}

double compression_factor(const std::vector<Tokenization>& tokenizations) {
  std::size_t symbols = 0;
  std::size_t occurrences = 0;
  std::size_t dictionary = 0;
  std::unordered_set<std::u32string_view> seen;
  for (const Tokenization& tokenization : tokenizations) {
    symbols += tokenization.line.size();
    for (std::u32string_view token : tokenization.tokens()) {
      ++occurrences;
      if (seen.insert(token).second) dictionary += token.size();
    }
  }
  if (symbols == 0) throw input_error("no symbols to compress");
  return static_cast<double>(occurrences + dictionary) /
         static_cast<double>(symbols);
}

double anti_entropy(const std::vector<Tokenization>& tokenizations) {
  // Token types in first-occurrence order, so the entropy sum below does
  // not depend on hash-table iteration order.
  std::vector<std::u32string_view> types;
  std::unordered_map<std::u32string_view, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const Tokenization& tokenization : tokenizations)
    for (std::u32string_view token : tokenization.tokens()) {
      ++total;
      auto [it, inserted] = counts.emplace(token, 0);
      if (inserted) types.push_back(token);
      ++it->second;
    }
  if (total == 0) throw input_error("no tokens to measure");
  if (types.size() == 1) return 1.0;

  double entropy = 0.0;
  for (std::u32string_view type : types) {
    const double p = static_cast<double>(counts.at(type)) /
                     static_cast<double>(total);
    entropy -= p * std::log2(p);
  }
  const double value =
      1.0 - entropy / std::log2(static_cast<double>(types.size()));
  return std::clamp(value, 0.0, 1.0);
}

double cross_split_f1(const NGramModel& model_a, const NGramModel& model_b,
                      const Corpus& test, const TokenizerParams& params) {
  const auto by_a = tokenize_corpus(model_a, test, params);
  const auto by_b = tokenize_corpus(model_b, test, params);
  return boundary_f1(by_a, by_b).f1;
}

std::optional<double> pearson(std::span<const double> xs,
                              std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw input_error("correlation needs series of equal length, got " +
                      std::to_string(xs.size()) + " and " +
                      std::to_string(ys.size()));
  if (xs.size() < 2)
    throw input_error("correlation needs at least 2 points, got " +
                      std::to_string(xs.size()));
  // A constant series has zero variance by definition; detect it exactly,
  // because the computed variance of repeated non-dyadic values can come
  // out as rounding noise instead of zero.
  const auto constant = [](std::span<const double> values) {
    for (const double value : values)
      if (value != values.front()) return false;
    return true;
  };
  if (constant(xs) || constant(ys)) return std::nullopt;
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(xs.size());
  mean_y /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace tfseg
