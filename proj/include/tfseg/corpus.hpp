#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tfseg {

// A loaded text corpus. Lines are sequences of Unicode code points and never
// contain '\n'; symbol_count is the total code points across lines, line
// separators excluded.
struct Corpus {
  std::vector<std::u32string> lines;
  std::size_t symbol_count = 0;
};

// Builds a Corpus from in-memory lines, computing symbol_count and rejecting
// lines that contain a line separator.
Corpus make_corpus(std::vector<std::u32string> lines);

// Loads a UTF-8 text file. Lines are split on '\n' with a trailing '\r'
// stripped per line; empty lines are preserved. With max_lines, only the
// first max_lines lines are kept.
Corpus load_corpus(const std::string& path,
                   std::optional<std::size_t> max_lines = std::nullopt);

// First ceil(n/2) lines and the remainder. Needs at least 2 lines.
std::pair<Corpus, Corpus> split_halves(const Corpus& corpus);

// Extracts one named column from a tab-delimited file whose first line is a
// header. Rows with fewer fields than the header abort with the line number.
Corpus load_parallel_tsv(const std::string& path, const std::string& column);

// Ground-truth segmentation paired with a test corpus: per line the raw text
// (token concatenation, tabs removed) plus strictly increasing boundary
// positions p with 0 < p < line length, a boundary sitting between code
// points p-1 and p.
struct ReferenceSegmentation {
  std::vector<std::u32string> lines;
  std::vector<std::vector<std::size_t>> boundaries;
};

// Reads a file with one test line per input line, tokens separated by a
// single tab. Adjacent tabs (an empty token) abort; an empty input line
// yields zero tokens.
ReferenceSegmentation reference_from_tokens(const std::string& path);

}  // namespace tfseg
