#include "tfseg/model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <utility>

#include "tfseg/error.hpp"
#include "tfseg/utf8.hpp"

namespace tfseg {

namespace {

constexpr const char* kMagic = "NGM";
constexpr const char* kVersion = "1";

std::string escape_gram(const std::u32string& gram) {
  std::string out;
  for (char byte : encode_utf8(gram)) {
    switch (byte) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += byte;
    }
  }
  return out;
}

std::string unescape_gram(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] != '\\') {
      out += bytes[i];
      continue;
    }
    if (++i == bytes.size()) throw input_error("dangling escape");
    switch (bytes[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw input_error(std::string("bad escape \\") + bytes[i]);
    }
  }
  return out;
}

std::uint64_t parse_number(std::string_view text) {
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty())
    throw input_error("bad number '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
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

// Walks the serialized model line by line, tagging errors with positions.
struct ModelReader {
  std::string_view text;
  std::string name;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  bool done() const { return pos >= text.size(); }

  std::string_view next_line() {
    if (done()) fail("unexpected end of file");
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw input_error(name + ": line " + std::to_string(line_no) + ": " +
                      message);
  }
};

}  // namespace

PruneThreshold::PruneThreshold(double v) : value(v) {
  if (!(v >= 0.0 && v < 1.0))
    throw input_error("prune threshold must lie in [0, 1), got " +
                      std::to_string(v));
}

NGramModel::NGramModel(std::vector<Table> tables, std::size_t symbol_count,
                       bool pruned)
    : tables_(std::move(tables)), symbol_count_(symbol_count),
      pruned_(pruned) {
  const std::size_t contexts = tables_.empty() ? 0 : tables_.size() - 1;
  forward_.resize(contexts);
  backward_.resize(contexts);
  for (std::size_t n = 2; n <= tables_.size(); ++n) {
    for (const auto& entry : tables_[n - 1]) {
      ++forward_[n - 2][entry.first.substr(0, n - 1)];
      ++backward_[n - 2][entry.first.substr(1)];
    }
  }
}

const NGramModel::Table& NGramModel::table(int order) const {
  if (order < 1 || order > max_order())
    throw std::out_of_range("no order-" + std::to_string(order) + " table");
  return tables_[order - 1];
}

std::uint64_t NGramModel::count(const std::u32string& gram) const {
  if (gram.empty() || gram.size() > tables_.size()) return 0;
  const Table& table = tables_[gram.size() - 1];
  const auto it = table.find(gram);
  return it == table.end() ? 0 : it->second;
}

std::size_t NGramModel::freedom(const std::u32string& gram,
                                Direction dir) const {
  const std::size_t len = gram.size();
  if (len < 1 || len + 1 > tables_.size())
    throw input_error("freedom needs a gram of length 1.." +
                      std::to_string(max_order() - 1) + ", got " +
                      std::to_string(len));
  if (!tables_[len - 1].contains(gram)) return 0;
  const auto& index = dir == Direction::forward ? forward_ : backward_;
  const auto it = index[len - 1].find(gram);
  return it == index[len - 1].end() ? 0 : it->second;
}

NGramModel build_model(const Corpus& corpus, int max_order) {
  if (max_order < 2)
    throw input_error("model order must be at least 2, got " +
                      std::to_string(max_order));
  if (corpus.symbol_count == 0) throw input_error("corpus has no symbols");
  std::vector<NGramModel::Table> tables(max_order);
  for (const std::u32string& line : corpus.lines) {
    const std::size_t len = line.size();
    for (int n = 1; n <= max_order; ++n) {
      if (static_cast<std::size_t>(n) > len) break;
      NGramModel::Table& table = tables[n - 1];
      for (std::size_t i = 0; i + n <= len; ++i) ++table[line.substr(i, n)];
    }
  }
  return NGramModel(std::move(tables), corpus.symbol_count, false);
}

NGramModel prune_model(const NGramModel& model, PruneThreshold threshold) {
  if (model.pruned()) throw input_error("model is already pruned");
  std::vector<NGramModel::Table> tables(model.max_order());
  for (int n = 1; n <= model.max_order(); ++n) {
    const NGramModel::Table& source = model.table(n);
    if (source.empty()) continue;
    std::uint64_t max_count = 0;
    for (const auto& entry : source)
      max_count = std::max(max_count, entry.second);
    for (const auto& entry : source) {
      const double relative = static_cast<double>(entry.second) /
                              static_cast<double>(max_count);
      if (!(relative < threshold.value)) tables[n - 1].insert(entry);
    }
  }
  return NGramModel(std::move(tables), model.symbol_count(), true);
}

std::string serialize_model(const NGramModel& model) {
  std::string out = std::string(kMagic) + " " + kVersion + " " +
                    std::to_string(model.max_order()) + " " +
                    std::to_string(model.symbol_count()) + " " +
                    (model.pruned() ? "1" : "0") + "\n";
  for (int n = 1; n <= model.max_order(); ++n) {
    const NGramModel::Table& table = model.table(n);
    std::vector<std::pair<std::u32string, std::uint64_t>> entries(
        table.begin(), table.end());
    std::sort(entries.begin(), entries.end());
    out += "#ORDER " + std::to_string(n) + " " +
           std::to_string(entries.size()) + "\n";
    for (const auto& [gram, count] : entries)
      out += escape_gram(gram) + "\t" + std::to_string(count) + "\n";
  }
  return out;
}

NGramModel parse_model(const std::string& text, const std::string& name) {
  ModelReader reader{text, name};

  const auto header = split_fields(reader.next_line(), ' ');
  if (header.size() != 5 || header[0] != kMagic)
    reader.fail("expected header '" + std::string(kMagic) + " " + kVersion +
                " <max-order> <symbols> <pruned>'");
  if (header[1] != kVersion)
    reader.fail("unsupported version '" + std::string(header[1]) + "'");
  std::uint64_t max_order = 0;
  std::uint64_t symbols = 0;
  try {
    max_order = parse_number(header[2]);
    symbols = parse_number(header[3]);
  } catch (const input_error& e) {
    reader.fail(e.what());
  }
  if (max_order < 1 || max_order > 64) reader.fail("bad max order");
  if (header[4] != "0" && header[4] != "1")
    reader.fail("pruned flag must be 0 or 1");
  const bool pruned = header[4] == "1";

  std::vector<NGramModel::Table> tables(max_order);
  for (std::uint64_t n = 1; n <= max_order; ++n) {
    const auto section = split_fields(reader.next_line(), ' ');
    if (section.size() != 3 || section[0] != "#ORDER" ||
        section[1] != std::to_string(n))
      reader.fail("expected '#ORDER " + std::to_string(n) + " <entries>'");
    std::uint64_t entries = 0;
    try {
      entries = parse_number(section[2]);
    } catch (const input_error& e) {
      reader.fail(e.what());
    }
    NGramModel::Table& table = tables[n - 1];
    table.reserve(entries);
    for (std::uint64_t row = 0; row < entries; ++row) {
      const std::string_view line = reader.next_line();
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos)
        reader.fail("expected '<gram>\\t<count>'");
      std::u32string gram;
      std::uint64_t count = 0;
      try {
        gram = decode_utf8(unescape_gram(line.substr(0, tab)));
        count = parse_number(line.substr(tab + 1));
      } catch (const input_error& e) {
        reader.fail(e.what());
      }
      if (gram.size() != n)
        reader.fail("gram has " + std::to_string(gram.size()) +
                     " symbols in the order-" + std::to_string(n) +
                     " section");
      if (count == 0) reader.fail("count must be positive");
      if (!table.emplace(std::move(gram), count).second)
        reader.fail("duplicate gram");
    }
  }
  while (!reader.done())
    if (!reader.next_line().empty()) reader.fail("trailing content");

  return NGramModel(std::move(tables), symbols, pruned);
}

void save_model(const NGramModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open file: " + path);
  out << serialize_model(model);
  out.flush();
  if (!out) throw input_error("write error: " + path);
}

NGramModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw input_error("read error: " + path);
  return parse_model(text, path);
}

}  // namespace tfseg
