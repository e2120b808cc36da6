#include "tfseg/corpus.hpp"

#include <fstream>
#include <sstream>

#include "tfseg/error.hpp"
#include "tfseg/utf8.hpp"

namespace tfseg {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw input_error("read error: " + path);
  return std::move(buffer).str();
}

std::vector<std::u32string> split_lines(const std::u32string& text) {
  std::vector<std::u32string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() && i == start) break;  // no line after the final '\n'
    if (i == text.size() || text[i] == U'\n') {
      std::size_t end = i;
      if (end > start && text[end - 1] == U'\r') --end;
      lines.emplace_back(text.substr(start, end - start));
      start = i + 1;
    }
  }
  return lines;
}

std::vector<std::u32string> split_on_tabs(const std::u32string& line) {
  std::vector<std::u32string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == U'\t') {
      fields.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

}  // namespace

Corpus make_corpus(std::vector<std::u32string> lines) {
  std::size_t symbols = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find(U'\n') != std::u32string::npos)
      throw input_error("line " + std::to_string(i + 1) +
                        " contains a line separator");
    symbols += lines[i].size();
  }
  return Corpus{std::move(lines), symbols};
}

Corpus load_corpus(const std::string& path,
                   std::optional<std::size_t> max_lines) {
  const std::string bytes = read_file(path);
  std::u32string text;
  try {
    text = decode_utf8(bytes);
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
  auto lines = split_lines(text);
  if (max_lines && lines.size() > *max_lines) lines.resize(*max_lines);
  return make_corpus(std::move(lines));
}

std::pair<Corpus, Corpus> split_halves(const Corpus& corpus) {
  if (corpus.lines.size() < 2)
    throw input_error("cross-split needs at least 2 lines, got " +
                      std::to_string(corpus.lines.size()));
  const std::size_t half = (corpus.lines.size() + 1) / 2;
  std::vector<std::u32string> a(corpus.lines.begin(),
                                corpus.lines.begin() + half);
  std::vector<std::u32string> b(corpus.lines.begin() + half,
                                corpus.lines.end());
  return {make_corpus(std::move(a)), make_corpus(std::move(b))};
}

Corpus load_parallel_tsv(const std::string& path, const std::string& column) {
  const Corpus raw = load_corpus(path);
  if (raw.lines.empty())
    throw input_error(path + ": missing header line");
  const std::u32string wanted = decode_utf8(column);
  const auto header = split_on_tabs(raw.lines[0]);
  std::size_t column_index = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == wanted) {
      column_index = i;
      break;
    }
  if (column_index == header.size())
    throw input_error(path + ": unknown column '" + column + "'");

  std::vector<std::u32string> lines;
  lines.reserve(raw.lines.size() - 1);
  for (std::size_t row = 1; row < raw.lines.size(); ++row) {
    const auto fields = split_on_tabs(raw.lines[row]);
    if (fields.size() < header.size())
      throw input_error(path + ": row at line " + std::to_string(row + 1) +
                        " has " + std::to_string(fields.size()) +
                        " fields, header has " +
                        std::to_string(header.size()));
    lines.push_back(fields[column_index]);
  }
  return make_corpus(std::move(lines));
}

ReferenceSegmentation reference_from_tokens(const std::string& path) {
  const Corpus raw = load_corpus(path);
  ReferenceSegmentation ref;
  ref.lines.reserve(raw.lines.size());
  ref.boundaries.reserve(raw.lines.size());
  for (std::size_t i = 0; i < raw.lines.size(); ++i) {
    if (raw.lines[i].empty()) {
      ref.lines.emplace_back();
      ref.boundaries.emplace_back();
      continue;
    }
    const auto tokens = split_on_tabs(raw.lines[i]);
    std::u32string joined;
    std::vector<std::size_t> bounds;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (tokens[t].empty())
        throw input_error(path + ": empty token at line " +
                          std::to_string(i + 1));
      joined += tokens[t];
      if (t + 1 < tokens.size()) bounds.push_back(joined.size());
    }
    ref.lines.push_back(std::move(joined));
    ref.boundaries.push_back(std::move(bounds));
  }
  return ref;
}

}  // namespace tfseg
