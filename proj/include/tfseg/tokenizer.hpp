#pragma once

#include <string_view>
#include <vector>

#include "tfseg/model.hpp"

namespace tfseg {

// Hyper-parameters of one tokenization run. The constructor sorts and
// deduplicates the ranks and validates every range.
struct TokenizerParams {
  TokenizerParams(std::vector<int> n_set_in, PruneThreshold t_mc_in,
                  double t_tm_in);

  std::vector<int> n_set;  // sorted, unique, each >= 1
  PruneThreshold t_mc;
  double t_tm;  // in (0, 1]
};

struct Tokenization {
  std::u32string line;
  std::vector<std::size_t> boundaries;  // strictly increasing, in (0, size)

  // Substrings between consecutive boundaries; views into `line`.
  std::vector<std::u32string_view> tokens() const;
};

// Normalized positive derivative of the transition freedom at every
// interior position, one value per direction.
struct DirectionalProfile {
  std::vector<double> forward;
  std::vector<double> backward;
};

DirectionalProfile directional_profile(const NGramModel& model,
                                       const std::u32string& line, int n);

// (forward + backward) / 2 of the directional profile.
std::vector<double> rank_profile(const NGramModel& model,
                                 const std::u32string& line, int n);

// Element-wise mean of equal-length profiles.
std::vector<double> mean_profile(
    const std::vector<const std::vector<double>*>& profiles);

// Mean over the ranks in n_set of each rank profile. Empty for lines
// shorter than two symbols.
std::vector<double> boundary_profile(const NGramModel& model,
                                     const std::u32string& line,
                                     const std::vector<int>& n_set);

// Positions whose score strictly exceeds t_tm; profile[k] scores the
// boundary before symbol k + 1.
std::vector<std::size_t> threshold_boundaries(
    const std::vector<double>& profile, double t_tm);

Tokenization tokenize_line(const NGramModel& model, const std::u32string& line,
                           const TokenizerParams& params);
std::vector<Tokenization> tokenize_corpus(const NGramModel& model,
                                          const Corpus& corpus,
                                          const TokenizerParams& params);

}  // namespace tfseg
