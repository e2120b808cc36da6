#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tfseg/corpus.hpp"
#include "tfseg/tokenizer.hpp"

namespace tfseg {

struct ScoreTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// The four base metrics of one grid point plus the derived composites.
struct MetricVector {
  double f1 = 0.0;
  double c_pct = 0.0;
  double anti_entropy = 0.0;
  double csf1 = 0.0;

  double add2() const { return c_pct + anti_entropy; }
  double add3() const { return add2() + csf1; }
  double mul2() const { return c_pct * anti_entropy; }
  double mul3() const { return mul2() * csf1; }
};

// Boundary-position F1 with counts pooled across all lines.
ScoreTriple boundary_f1(const std::vector<Tokenization>& candidate,
                        const ReferenceSegmentation& reference);
ScoreTriple boundary_f1(const std::vector<Tokenization>& candidate,
                        const std::vector<Tokenization>& reference);

// (token occurrences + summed lengths of the distinct tokens) / symbols.
// Greater than 1 means the "compressed" form is larger than the text.
double compression_factor(const std::vector<Tokenization>& tokenizations);

// 1 - H / log2(L) over token occurrences, where H is the Shannon entropy
// and L the number of distinct tokens; 1 when only one token type exists.
double anti_entropy(const std::vector<Tokenization>& tokenizations);

// F1 agreement between tokenizations of `test` under two models trained
// on different halves of the same corpus.
double cross_split_f1(const NGramModel& model_a, const NGramModel& model_b,
                      const Corpus& test, const TokenizerParams& params);

// Sample Pearson correlation; empty when either series has zero variance.
std::optional<double> pearson(std::span<const double> xs,
                              std::span<const double> ys);

}  // namespace tfseg
