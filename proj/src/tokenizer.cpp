#include "tfseg/tokenizer.hpp"

#include <algorithm>

#include "tfseg/error.hpp"

namespace tfseg {

namespace {

// Rescale the positive part of each derivative by the profile maximum so
// every value lands in [0, 1]; an all-non-positive profile stays zero.
std::vector<double> normalize_positive(const std::vector<double>& deltas) {
  std::vector<double> scaled(deltas.size(), 0.0);
  double peak = 0.0;
  for (double d : deltas) peak = std::max(peak, d);
  if (peak <= 0.0) return scaled;
  for (std::size_t i = 0; i < deltas.size(); ++i)
    if (deltas[i] > 0.0) scaled[i] = deltas[i] / peak;
  return scaled;
}

void check_ranks(const NGramModel& model, const std::vector<int>& n_set) {
  if (n_set.empty()) throw input_error("empty n rank set");
  for (int n : n_set) {
    if (n < 1) throw input_error("n rank must be positive, got " + std::to_string(n));
    if (n + 1 > model.max_order())
      throw input_error("n rank " + std::to_string(n) +
                        " needs a model of order at least " +
                        std::to_string(n + 1) + ", model has order " +
                        std::to_string(model.max_order()));
  }
}

}  // namespace

TokenizerParams::TokenizerParams(std::vector<int> n_set_in,
                                 PruneThreshold t_mc_in, double t_tm_in)
    : n_set(std::move(n_set_in)), t_mc(t_mc_in), t_tm(t_tm_in) {
  if (n_set.empty()) throw input_error("empty n rank set");
  std::sort(n_set.begin(), n_set.end());
  n_set.erase(std::unique(n_set.begin(), n_set.end()), n_set.end());
  if (n_set.front() < 1)
    throw input_error("n rank must be positive, got " +
                      std::to_string(n_set.front()));
  if (!(t_tm > 0.0 && t_tm <= 1.0))
    throw input_error("tokenization threshold must lie in (0, 1], got " +
                      std::to_string(t_tm));
}

std::vector<std::u32string_view> Tokenization::tokens() const {
  std::vector<std::u32string_view> out;
  if (line.empty()) return out;
  out.reserve(boundaries.size() + 1);
  const std::u32string_view view = line;
  std::size_t start = 0;
  for (std::size_t b : boundaries) {
    out.push_back(view.substr(start, b - start));
    start = b;
  }
  out.push_back(view.substr(start));
  return out;
}

DirectionalProfile directional_profile(const NGramModel& model,
                                       const std::u32string& line, int n) {
  check_ranks(model, {n});
  const std::size_t len = line.size();
  DirectionalProfile profile;
  if (len < 2) return profile;

  // Transition freedom at each interior position: looking forward out of
  // the gram that ends there, and backward out of the gram that starts
  // there. Grams shrink to fit near the line edges.
  const std::size_t count = len - 1;
  std::vector<double> fwd(count), bwd(count);
  for (std::size_t i = 1; i < len; ++i) {
    const std::size_t before = std::min<std::size_t>(n, i);
    const std::size_t after = std::min<std::size_t>(n, len - i);
    fwd[i - 1] = static_cast<double>(
        model.freedom(line.substr(i - before, before), Direction::forward));
    bwd[i - 1] = static_cast<double>(
        model.freedom(line.substr(i, after), Direction::backward));
  }

  // A boundary shows up as a jump in freedom: against the previous
  // position going forward, against the next position going backward.
  std::vector<double> fwd_delta(count, 0.0), bwd_delta(count, 0.0);
  for (std::size_t k = 1; k < count; ++k) {
    fwd_delta[k] = fwd[k] - fwd[k - 1];
    bwd_delta[k - 1] = bwd[k - 1] - bwd[k];
  }
  profile.forward = normalize_positive(fwd_delta);
  profile.backward = normalize_positive(bwd_delta);
  return profile;
}

std::vector<double> rank_profile(const NGramModel& model,
                                 const std::u32string& line, int n) {
  const DirectionalProfile profile = directional_profile(model, line, n);
  std::vector<double> combined(profile.forward.size());
  for (std::size_t i = 0; i < combined.size(); ++i)
    combined[i] = (profile.forward[i] + profile.backward[i]) / 2.0;
  return combined;
}

std::vector<double> mean_profile(
    const std::vector<const std::vector<double>*>& profiles) {
  if (profiles.empty()) throw input_error("no profiles to average");
  std::vector<double> mean(profiles.front()->size(), 0.0);
  for (const std::vector<double>* profile : profiles) {
    if (profile->size() != mean.size())
      throw input_error("profile length mismatch");
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (*profile)[i];
  }
  const double ranks = static_cast<double>(profiles.size());
  for (double& value : mean) value /= ranks;
  return mean;
}

std::vector<double> boundary_profile(const NGramModel& model,
                                     const std::u32string& line,
                                     const std::vector<int>& n_set) {
  check_ranks(model, n_set);
  if (line.size() < 2) return {};
  std::vector<std::vector<double>> per_rank;
  per_rank.reserve(n_set.size());
  for (int n : n_set) per_rank.push_back(rank_profile(model, line, n));
  std::vector<const std::vector<double>*> views;
  views.reserve(per_rank.size());
  for (const auto& profile : per_rank) views.push_back(&profile);
  return mean_profile(views);
}

std::vector<std::size_t> threshold_boundaries(
    const std::vector<double>& profile, double t_tm) {
  std::vector<std::size_t> boundaries;
  for (std::size_t k = 0; k < profile.size(); ++k)
    if (profile[k] > t_tm) boundaries.push_back(k + 1);
  return boundaries;
}

Tokenization tokenize_line(const NGramModel& model, const std::u32string& line,
                           const TokenizerParams& params) {
  Tokenization result;
  result.line = line;
  result.boundaries =
      threshold_boundaries(boundary_profile(model, line, params.n_set),
                           params.t_tm);
  return result;
}

std::vector<Tokenization> tokenize_corpus(const NGramModel& model,
                                          const Corpus& corpus,
                                          const TokenizerParams& params) {
  std::vector<Tokenization> result;
  result.reserve(corpus.lines.size());
  for (const std::u32string& line : corpus.lines)
    result.push_back(tokenize_line(model, line, params));
  return result;
}

}  // namespace tfseg
