#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cotest/core/dataset.hpp"
#include "cotest/errors.hpp"

namespace cotest {

struct VoteOutcome {
  int label = 0;
  // Winning margin normalized to [0,1]; absent when the inputs carry no
  // confidence.
  std::optional<double> margin;
};

// Weighted vote: argmax_l of the summed confidences of the views voting l.
// Every voter must carry a confidence. Label-sum ties break to the lowest
// label id.
inline VoteOutcome weighted_vote(std::span<const Prediction> votes, int num_labels) {
  if (votes.empty()) throw ContractError("weighted_vote: no votes");
  std::vector<double> sum(static_cast<std::size_t>(num_labels), 0.0);
  double total = 0.0;
  for (const Prediction& p : votes) {
    if (!p.confidence)
      throw ContractError("weighted_vote: a voting hypothesis provides no confidence");
    sum[static_cast<std::size_t>(p.label)] += *p.confidence;
    total += *p.confidence;
  }
  int best = 0;
  for (int l = 1; l < num_labels; ++l)
    if (sum[static_cast<std::size_t>(l)] > sum[static_cast<std::size_t>(best)]) best = l;
  double second = 0.0;
  bool any = false;
  for (int l = 0; l < num_labels; ++l)
    if (l != best) {
      second = any ? std::max(second, sum[static_cast<std::size_t>(l)]) : sum[static_cast<std::size_t>(l)];
      any = true;
    }
  std::optional<double> margin;
  if (total > 0.0 && any) margin = (sum[static_cast<std::size_t>(best)] - second) / total;
  return {best, margin};
}

// Majority vote: the label predicted by most views; vote-count ties break to
// the lowest label id.
inline VoteOutcome majority_vote(std::span<const Prediction> votes, int num_labels) {
  if (votes.empty()) throw ContractError("majority_vote: no votes");
  std::vector<int> count(static_cast<std::size_t>(num_labels), 0);
  for (const Prediction& p : votes) ++count[static_cast<std::size_t>(p.label)];
  int best = 0;
  for (int l = 1; l < num_labels; ++l)
    if (count[static_cast<std::size_t>(l)] > count[static_cast<std::size_t>(best)]) best = l;
  return {best, std::nullopt};
}

// Winner-takes-all: the view with the fewest mistakes on the query log; ties
// break to the lowest view index.
inline std::size_t winner_view(std::span<const int> mistakes) {
  if (mistakes.empty()) throw ContractError("winner_view: no views");
  std::size_t best = 0;
  for (std::size_t i = 1; i < mistakes.size(); ++i)
    if (mistakes[i] < mistakes[best]) best = i;
  return best;
}

}  // namespace cotest
