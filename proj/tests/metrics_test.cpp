#include "tfseg/metrics.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "support/testutil.hpp"
#include "tfseg/error.hpp"
#include "tfseg/model.hpp"

using testutil::corpus_of;
using tfseg::ReferenceSegmentation;
using tfseg::Tokenization;

namespace {

std::vector<Tokenization> toks(
    const std::vector<std::pair<std::u32string, std::vector<std::size_t>>>&
        entries) {
  std::vector<Tokenization> out;
  for (const auto& [line, cuts] : entries) out.push_back({line, cuts});
  return out;
}

ReferenceSegmentation ref_of(
    const std::vector<std::pair<std::u32string, std::vector<std::size_t>>>&
        entries) {
  ReferenceSegmentation ref;
  for (const auto& [line, cuts] : entries) {
    ref.lines.push_back(line);
    ref.boundaries.push_back(cuts);
  }
  return ref;
}

}  // namespace

TEST_CASE("identical segmentations score a perfect f1") {
  const auto candidate = toks({{U"abcd", {2}}, {U"xy", {1}}});
  const auto score = tfseg::boundary_f1(candidate, ref_of({{U"abcd", {2}},
                                                           {U"xy", {1}}}));
  CHECK(score.precision == 1.0);
  CHECK(score.recall == 1.0);
  CHECK(score.f1 == 1.0);
}

TEST_CASE("half-overlapping boundary sets score one half") {
  const auto score = tfseg::boundary_f1(toks({{U"abcd", {1, 2}}}),
                                        ref_of({{U"abcd", {2, 3}}}));
  CHECK(score.precision == 0.5);
  CHECK(score.recall == 0.5);
  CHECK(score.f1 == 0.5);
}

TEST_CASE("two empty boundary sets agree perfectly") {
  const auto score =
      tfseg::boundary_f1(toks({{U"abcd", {}}}), ref_of({{U"abcd", {}}}));
  CHECK(score.precision == 1.0);
  CHECK(score.recall == 1.0);
  CHECK(score.f1 == 1.0);
}

TEST_CASE("an empty candidate against real boundaries scores zero") {
  const auto score =
      tfseg::boundary_f1(toks({{U"abcd", {}}}), ref_of({{U"abcd", {2}}}));
  CHECK(score.precision == 0.0);
  CHECK(score.recall == 0.0);
  CHECK(score.f1 == 0.0);
}

TEST_CASE("counts pool across lines instead of averaging per line") {
  // line 1: C={1} R={1}; line 2: C={2,3} R={3}
  // pooled: TP=2, |C|=3, |R|=2 -> p=2/3, r=1, f1=0.8
  // (a per-line mean of f1 would give (1 + 2/3)/2 = 5/6 instead)
  const auto score =
      tfseg::boundary_f1(toks({{U"ab", {1}}, {U"abcd", {2, 3}}}),
                         ref_of({{U"ab", {1}}, {U"abcd", {3}}}));
  CHECK(score.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(score.recall == 1.0);
  CHECK(score.f1 == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("boundary f1 is symmetric in its arguments") {
  const auto a = toks({{U"abcd", {1}}, {U"xyz", {1, 2}}});
  const auto b = toks({{U"abcd", {1, 3}}, {U"xyz", {2}}});
  CHECK(tfseg::boundary_f1(a, b).f1 == tfseg::boundary_f1(b, a).f1);
  CHECK(tfseg::boundary_f1(a, b).precision ==
        tfseg::boundary_f1(b, a).recall);
}

TEST_CASE("mismatched segmentations are rejected") {
  CHECK_THROWS_AS(
      tfseg::boundary_f1(toks({{U"ab", {}}}), ref_of({{U"ab", {}},
                                                      {U"cd", {}}})),
      tfseg::input_error);
  CHECK_THROWS_WITH(
      tfseg::boundary_f1(toks({{U"ab", {}}, {U"xx", {}}}),
                         ref_of({{U"ab", {}}, {U"cd", {}}})),
      doctest::Contains("line 2"));
}

TEST_CASE("compression factor follows the dictionary-plus-indexes formula") {
  CHECK(tfseg::compression_factor(toks({{U"abcd", {}}})) == 1.25);
  CHECK(tfseg::compression_factor(toks({{U"abab", {2}}})) == 1.0);
  CHECK(tfseg::compression_factor(toks({{U"aaaa", {1, 2, 3}}})) == 1.25);
  // one-token lines, all distinct: (lines + symbols) / symbols
  CHECK(tfseg::compression_factor(toks({{U"abc", {}}, {U"de", {}}})) ==
        doctest::Approx((2.0 + 5.0) / 5.0).epsilon(1e-12));
  CHECK_THROWS_AS(tfseg::compression_factor(toks({{U"", {}}})),
                  tfseg::input_error);
}

TEST_CASE("anti-entropy spans the uniform and degenerate extremes") {
  // four occurrences of four distinct types: uniform, floor value 0
  CHECK(tfseg::anti_entropy(toks({{U"abcd", {1, 2, 3}}})) == 0.0);
  // a single type: ceiling value 1
  CHECK(tfseg::anti_entropy(toks({{U"aaaa", {2}}, {U"aa", {}}})) == 1.0);
  // counts {3, 1}: 1 - H(0.75, 0.25)
  CHECK(tfseg::anti_entropy(toks({{U"ababab", {2, 4}}, {U"cd", {}}})) ==
        doctest::Approx(0.18872187554086717).epsilon(1e-12));
  CHECK_THROWS_AS(tfseg::anti_entropy(toks({{U"", {}}})), tfseg::input_error);
  CHECK(tfseg::anti_entropy(toks({{U"", {}}, {U"aa", {}}})) == 1.0);
}

TEST_CASE("cross-split agreement is one for identical models") {
  const tfseg::Corpus corpus = corpus_of({"ab ac", "ad ae"});
  const auto model = tfseg::prune_model(tfseg::build_model(corpus, 2),
                                        tfseg::PruneThreshold(0.0));
  const tfseg::TokenizerParams params({1}, tfseg::PruneThreshold(0.0), 0.3);
  CHECK(tfseg::cross_split_f1(model, model, corpus, params) == 1.0);
}

TEST_CASE("cross-split agreement is symmetric and detects disagreement") {
  const tfseg::Corpus test = corpus_of({"ab cd"});
  const auto model_a =
      tfseg::prune_model(tfseg::build_model(corpus_of({"ab cd", "ab ce"}), 2),
                         tfseg::PruneThreshold(0.0));
  const auto model_b =
      tfseg::prune_model(tfseg::build_model(corpus_of({"zz zz"}), 2),
                         tfseg::PruneThreshold(0.0));
  const tfseg::TokenizerParams params({1}, tfseg::PruneThreshold(0.0), 0.2);
  const double ab = tfseg::cross_split_f1(model_a, model_b, test, params);
  const double ba = tfseg::cross_split_f1(model_b, model_a, test, params);
  CHECK(ab == ba);
  CHECK(ab < 1.0);
}

TEST_CASE("pearson handles the classic fixed points") {
  const std::vector<double> xs = {1.0, 2.0, 3.0};
  const std::vector<double> affine = {3.0, 5.0, 7.0};
  const std::vector<double> negated = {-1.0, -2.0, -3.0};
  const std::vector<double> swapped = {1.0, 3.0, 2.0};
  CHECK(*tfseg::pearson(xs, affine) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*tfseg::pearson(xs, negated) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(*tfseg::pearson(xs, swapped) == 0.5);
}

TEST_CASE("pearson flags zero variance instead of inventing a number") {
  const std::vector<double> flat = {2.0, 2.0, 2.0};
  const std::vector<double> moving = {1.0, 2.0, 3.0};
  // 0.1 is not a dyadic rational: its naive computed variance is rounding
  // noise, not zero, so constant series need an exact check
  const std::vector<double> tricky = {0.1, 0.1, 0.1};
  const std::vector<double> one = {1.0};
  const std::vector<double> two = {1.0, 2.0};
  CHECK_FALSE(tfseg::pearson(flat, moving).has_value());
  CHECK_FALSE(tfseg::pearson(moving, flat).has_value());
  CHECK_FALSE(tfseg::pearson(tricky, moving).has_value());
  CHECK_FALSE(tfseg::pearson(moving, tricky).has_value());
  CHECK_THROWS_AS(tfseg::pearson(one, one), tfseg::input_error);
  CHECK_THROWS_AS(tfseg::pearson(two, one), tfseg::input_error);
}

TEST_CASE("pearson is invariant under positive affine maps") {
  const std::vector<double> xs = {0.1, 0.9, 0.4, 0.7};
  const std::vector<double> ys = {1.0, 0.2, 0.5, 0.3};
  std::vector<double> scaled;
  for (const double x : xs) scaled.push_back(3.0 * x + 2.0);
  CHECK(*tfseg::pearson(scaled, ys) ==
        doctest::Approx(*tfseg::pearson(xs, ys)).epsilon(1e-12));
  std::vector<double> flipped;
  for (const double x : xs) flipped.push_back(-2.0 * x);
  CHECK(*tfseg::pearson(flipped, ys) ==
        doctest::Approx(-*tfseg::pearson(xs, ys)).epsilon(1e-12));
}

TEST_CASE("composites derive from the stored parts") {
  tfseg::MetricVector m;
  m.f1 = 0.5;
  m.c_pct = 1.2;
  m.anti_entropy = 0.3;
  m.csf1 = 0.8;
  CHECK(m.add2() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(m.add3() == doctest::Approx(2.3).epsilon(1e-12));
  CHECK(m.mul2() == doctest::Approx(0.36).epsilon(1e-12));
  CHECK(m.mul3() == doctest::Approx(0.288).epsilon(1e-12));
  m.anti_entropy = 0.0;
  CHECK(m.mul2() == 0.0);
  CHECK(m.mul3() == 0.0);
}
