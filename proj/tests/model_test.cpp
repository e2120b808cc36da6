#include "tfseg/model.hpp"

#include <filesystem>
#include <string>

#include "doctest.h"
#include "support/brute.hpp"
#include "support/testutil.hpp"
#include "tfseg/error.hpp"

using testutil::corpus_of;
using tfseg::Direction;
using tfseg::NGramModel;
using tfseg::PruneThreshold;

TEST_CASE("build_model counts sliding windows per line") {
  const NGramModel model = tfseg::build_model(corpus_of({"abab"}), 2);
  CHECK(model.max_order() == 2);
  CHECK(model.symbol_count() == 4);
  CHECK_FALSE(model.pruned());
  CHECK(model.table(1).size() == 2);
  CHECK(model.count(U"a") == 2);
  CHECK(model.count(U"b") == 2);
  CHECK(model.table(2).size() == 2);
  CHECK(model.count(U"ab") == 2);
  CHECK(model.count(U"ba") == 1);
  CHECK(model.count(U"bb") == 0);
}

TEST_CASE("grams never span line breaks") {
  const NGramModel model = tfseg::build_model(corpus_of({"ab", "ab"}), 2);
  CHECK(model.count(U"ab") == 2);
  CHECK(model.count(U"ba") == 0);
  CHECK(model.table(2).size() == 1);
}

TEST_CASE("orders longer than every line stay empty") {
  const NGramModel model = tfseg::build_model(corpus_of({"a"}), 2);
  CHECK(model.table(1).size() == 1);
  CHECK(model.table(2).empty());
}

TEST_CASE("build_model validates its inputs") {
  CHECK_THROWS_AS(tfseg::build_model(corpus_of({"abc"}), 1),
                  tfseg::input_error);
  CHECK_THROWS_AS(tfseg::build_model(corpus_of({"abc"}), 0),
                  tfseg::input_error);
  CHECK_THROWS_AS(tfseg::build_model(corpus_of({}), 2), tfseg::input_error);
  CHECK_THROWS_AS(tfseg::build_model(corpus_of({"", ""}), 2),
                  tfseg::input_error);
}

TEST_CASE("freedom counts distinct continuations") {
  // order-2 grams of "ab ac ad": ab, "b ", " a" x2, ac, "c ", ad
  const NGramModel model = tfseg::build_model(corpus_of({"ab ac ad"}), 2);
  CHECK(model.freedom(U"a", Direction::forward) == 3);   // ab, ac, ad
  CHECK(model.freedom(U"b", Direction::forward) == 1);   // "b "
  CHECK(model.freedom(U"a", Direction::backward) == 1);  // " a"
  CHECK(model.freedom(U" ", Direction::backward) == 2);  // b and c before it
  CHECK(model.freedom(U"d", Direction::forward) == 0);   // line-final only
  CHECK(model.freedom(U"z", Direction::forward) == 0);   // absent gram
}

TEST_CASE("freedom rejects grams outside the usable lengths") {
  const NGramModel model = tfseg::build_model(corpus_of({"abcd"}), 3);
  CHECK(model.freedom(U"ab", Direction::forward) == 1);
  CHECK_THROWS_AS(model.freedom(U"", Direction::forward), tfseg::input_error);
  CHECK_THROWS_AS(model.freedom(U"abc", Direction::forward),
                  tfseg::input_error);
}

TEST_CASE("freedom agrees with a direct corpus scan") {
  const std::vector<std::string> text = {"abab cd", "ab cdcd", "a ccd"};
  const tfseg::Corpus corpus = corpus_of(text);
  const NGramModel model = tfseg::build_model(corpus, 4);
  for (const std::string& gram : {"a", "b", "c", "d", " ", "ab", "cd", "ba",
                                  "d ", " c", "cdc", "ab "})
    for (const bool forward : {true, false}) {
      const auto dir = forward ? Direction::forward : Direction::backward;
      CHECK_MESSAGE(
          model.freedom(testutil::u32(gram), dir) ==
              brute::freedom(corpus.lines, testutil::u32(gram), forward, 0.0),
          "gram=" << gram << " forward=" << forward);
    }
}

TEST_CASE("prune_model drops grams below the per-order relative cutoff") {
  // order 1: a:3 b:1; order 2: aa:2 ab:1
  const NGramModel model = tfseg::build_model(corpus_of({"aaab"}), 2);
  const NGramModel pruned = tfseg::prune_model(model, PruneThreshold(0.5));
  CHECK(pruned.pruned());
  CHECK(pruned.count(U"a") == 3);
  CHECK(pruned.count(U"b") == 0);   // 1/3 < 0.5
  CHECK(pruned.count(U"aa") == 2);
  CHECK(pruned.count(U"ab") == 1);  // exactly 0.5, kept: not strictly below
}

TEST_CASE("pruning at zero keeps everything but marks the model") {
  const NGramModel model = tfseg::build_model(corpus_of({"abcabc"}), 3);
  const NGramModel pruned = tfseg::prune_model(model, PruneThreshold(0.0));
  CHECK(pruned.pruned());
  for (int order = 1; order <= 3; ++order)
    CHECK(pruned.table(order).size() == model.table(order).size());
  CHECK_THROWS_AS(tfseg::prune_model(pruned, PruneThreshold(0.0)),
                  tfseg::input_error);
}

TEST_CASE("pruning updates the freedom index") {
  // forward freedom of "a" drops as rare continuations get pruned away
  const NGramModel model =
      tfseg::build_model(corpus_of({"ab ab ab ac"}), 2);
  CHECK(model.freedom(U"a", Direction::forward) == 2);  // ab and ac
  const NGramModel pruned = tfseg::prune_model(model, PruneThreshold(0.5));
  CHECK(pruned.freedom(U"a", Direction::forward) ==
        brute::freedom(corpus_of({"ab ab ab ac"}).lines, U"a", true, 0.5));
}

TEST_CASE("threshold range is validated") {
  CHECK_THROWS_AS(PruneThreshold(-0.1), tfseg::input_error);
  CHECK_THROWS_AS(PruneThreshold(1.0), tfseg::input_error);
  CHECK_NOTHROW(PruneThreshold(0.0));
  CHECK_NOTHROW(PruneThreshold(0.999));
}

TEST_CASE("serialize_model is sorted and round-trips exactly") {
  const tfseg::Corpus corpus =
      corpus_of({"ab\tc\\d", "мир 中文", "ab\tc\\d"});
  const NGramModel model = tfseg::build_model(corpus, 3);
  const std::string text = tfseg::serialize_model(model);
  const NGramModel parsed = tfseg::parse_model(text, "test");
  CHECK(parsed.max_order() == model.max_order());
  CHECK(parsed.symbol_count() == model.symbol_count());
  CHECK(parsed.pruned() == model.pruned());
  for (int order = 1; order <= 3; ++order)
    CHECK(parsed.table(order) == model.table(order));
  CHECK(tfseg::serialize_model(parsed) == text);

  // header first, then one section per order
  CHECK(text.substr(0, 4) == "NGM ");
  CHECK(text.find("#ORDER 1 ") != std::string::npos);
  CHECK(text.find("\\t") != std::string::npos);   // escaped tab
  CHECK(text.find("\\\\") != std::string::npos);  // escaped backslash
}

TEST_CASE("save_model and load_model go through the filesystem") {
  const NGramModel model =
      tfseg::build_model(corpus_of({"привет мир"}), 2);
  const std::string path =
      (std::filesystem::temp_directory_path() / "tfseg_model_rt.ngm").string();
  tfseg::save_model(model, path);
  const NGramModel loaded = tfseg::load_model(path);
  CHECK(loaded.table(2) == model.table(2));
  CHECK(loaded.symbol_count() == 10);
  CHECK_THROWS_WITH(tfseg::load_model("/no/such/model.ngm"),
                    doctest::Contains("/no/such/model.ngm"));
}

TEST_CASE("parse_model rejects malformed files with line numbers") {
  const std::string good =
      "NGM 1 2 4 0\n#ORDER 1 2\na\t2\nb\t2\n#ORDER 2 1\nab\t2\n";
  CHECK_NOTHROW(tfseg::parse_model(good, "m"));

  auto fails_with = [](const std::string& text, const std::string& needle) {
    CHECK_THROWS_WITH(tfseg::parse_model(text, "m"),
                      doctest::Contains(needle.c_str()));
  };
  fails_with("XYZ 1 2 4 0\n", "expected header");
  fails_with("NGM 9 2 4 0\n", "unsupported version");
  fails_with("NGM 1 0 4 0\n", "bad max order");
  fails_with("NGM 1 2 4 2\n", "pruned flag");
  fails_with("NGM 1 2 4 0\n#ORDER 2 0\n", "expected '#ORDER 1");
  fails_with("NGM 1 2 4 0\n#ORDER 1 2\na\t2\n", "unexpected end of file");
  fails_with("NGM 1 2 4 0\n#ORDER 1 1\na 2\n", "line 3");
  fails_with("NGM 1 2 4 0\n#ORDER 1 1\nab\t2\n#ORDER 2 0\n",
             "2 symbols in the order-1 section");
  fails_with("NGM 1 2 4 0\n#ORDER 1 1\na\t0\n", "count must be positive");
  fails_with("NGM 1 2 4 0\n#ORDER 1 2\na\t1\na\t2\n", "duplicate gram");
  fails_with("NGM 1 2 4 0\n#ORDER 1 1\n\\q\t1\n", "bad escape");
  fails_with("NGM 1 2 4 0\n#ORDER 1 1\na\t1\n#ORDER 2 0\nextra\n",
             "trailing content");
}
