#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tfseg/corpus.hpp"

namespace tfseg {

enum class Direction { forward, backward };

// Relative-frequency cutoff used when pruning a model; valid range [0, 1).
struct PruneThreshold {
  explicit PruneThreshold(double v);
  double value = 0.0;
};

class NGramModel {
 public:
  using Table = std::unordered_map<std::u32string, std::uint64_t>;

  NGramModel(std::vector<Table> tables, std::size_t symbol_count, bool pruned);

  int max_order() const { return static_cast<int>(tables_.size()); }
  std::size_t symbol_count() const { return symbol_count_; }
  bool pruned() const { return pruned_; }

  const Table& table(int order) const;
  std::uint64_t count(const std::u32string& gram) const;

  // Number of distinct code points that extend `gram` by one position:
  // after it for forward, before it for backward. Zero when the gram
  // itself is absent from its own order's table.
  std::size_t freedom(const std::u32string& gram, Direction dir) const;

 private:
  std::vector<Table> tables_;  // tables_[n - 1] holds the order-n grams
  std::vector<std::unordered_map<std::u32string, std::uint32_t>> forward_;
  std::vector<std::unordered_map<std::u32string, std::uint32_t>> backward_;
  std::size_t symbol_count_ = 0;
  bool pruned_ = false;
};

NGramModel build_model(const Corpus& corpus, int max_order);
NGramModel prune_model(const NGramModel& model, PruneThreshold threshold);

std::string serialize_model(const NGramModel& model);
NGramModel parse_model(const std::string& text, const std::string& name);
void save_model(const NGramModel& model, const std::string& path);
NGramModel load_model(const std::string& path);

}  // namespace tfseg
