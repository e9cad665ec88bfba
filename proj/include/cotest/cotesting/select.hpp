#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "cotest/cotesting/strategy.hpp"
#include "cotest/errors.hpp"
#include "cotest/rng.hpp"

namespace cotest {

// A distinguished "no prediction": a wrapper rule that fails to extract. It
// disagrees with every concrete prediction; two abstentions agree.
inline constexpr int kNoPrediction = -1;

// Contention points: pool positions where at least two strong views predict a
// different value. `strong_predictions[p][i]` is the label (or extraction
// index, or kNoPrediction) of strong view i on pool item p.
inline std::vector<std::size_t> contention_points(
    const std::vector<std::vector<int>>& strong_predictions) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < strong_predictions.size(); ++p) {
    const auto& preds = strong_predictions[p];
    if (preds.size() < 2)
      throw ContractError("contention_points: need >= 2 strong views");
    bool differ = false;
    for (std::size_t i = 1; i < preds.size() && !differ; ++i)
      differ = (preds[i] != preds[0]);
    if (differ) out.push_back(p);
  }
  return out;
}

// One contention point as seen by the selection strategies.
struct QueryCandidate {
  std::size_t pool_index = 0;          // position in the current pool
  std::vector<double> confidences;     // per strong view; required by
                                       // aggressive / conservative
  std::vector<int> violations;         // weak-view violation counts per strong
                                       // view; required by weak_view_aggressive
};

namespace detail {

inline void require_confidences(const QueryCandidate& c) {
  if (c.confidences.size() < 2)
    throw ContractError("select_query: strategy requires a confidence per strong view");
  for (double v : c.confidences)
    if (!std::isfinite(v)) throw ContractError("select_query: non-finite confidence");
}

}  // namespace detail

// Chooses one candidate. Returns its position in `candidates`; candidates are
// expected in pool order, so "first wins" scanning breaks ties by the lowest
// pool index. Naive selection is the only strategy that consumes randomness.
inline std::size_t select_query(QueryStrategy strategy, std::span<const QueryCandidate> candidates,
                                Rng& rng) {
  if (candidates.empty()) throw ContractError("select_query: no contention");
  switch (strategy) {
    case QueryStrategy::naive:
      return rng.next_below(candidates.size());

    case QueryStrategy::aggressive: {
      std::size_t best = 0;
      double best_score = -1.0;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        detail::require_confidences(candidates[i]);
        double mn = candidates[i].confidences[0];
        for (double v : candidates[i].confidences) mn = std::min(mn, v);
        if (mn > best_score) {
          best_score = mn;
          best = i;
        }
      }
      return best;
    }

    case QueryStrategy::conservative: {
      std::size_t best = 0;
      double best_spread = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        detail::require_confidences(candidates[i]);
        double mn = candidates[i].confidences[0], mx = mn;
        for (double v : candidates[i].confidences) {
          mn = std::min(mn, v);
          mx = std::max(mx, v);
        }
        if (mx - mn < best_spread) {
          best_spread = mx - mn;
          best = i;
        }
      }
      return best;
    }

    case QueryStrategy::weak_view_aggressive: {
      std::size_t best = 0;
      long best_score = -1;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].violations.size() < 2)
          throw ContractError(
              "select_query: weak-view aggressive requires violation counts per strong view");
        long mn = candidates[i].violations[0];
        for (int v : candidates[i].violations) mn = std::min<long>(mn, v);
        if (mn > best_score) {
          best_score = mn;
          best = i;
        }
      }
      return best;
    }
  }
  throw ContractError("unreachable query strategy");
}

}  // namespace cotest
