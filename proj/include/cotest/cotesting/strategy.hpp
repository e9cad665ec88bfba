#pragma once

#include <string>

#include "cotest/errors.hpp"

namespace cotest {

// How the next query is chosen among the contention points.
enum class QueryStrategy {
  naive,                 // a seeded-random contention point
  aggressive,            // argmax over points of the minimum per-view confidence
  conservative,          // argmin of (max - min) per-view confidence spread
  weak_view_aggressive,  // argmax of min(n1, n2) weak-view violation counts
};

// How the final predictor is assembled from the per-view hypotheses.
enum class OutputStrategy {
  weighted_vote,      // argmax_l sum of confidences of views voting l
  majority_vote,      // argmax_l number of views voting l
  winner_takes_all,   // the single view with fewest mistakes on the query log
  weak_tiebreak_vote, // strong-view majority; the weak view breaks ties
};

inline QueryStrategy parse_query_strategy(const std::string& s) {
  if (s == "naive") return QueryStrategy::naive;
  if (s == "aggressive") return QueryStrategy::aggressive;
  if (s == "conservative") return QueryStrategy::conservative;
  if (s == "weak-aggressive") return QueryStrategy::weak_view_aggressive;
  throw ConfigError("unknown query strategy '" + s + "'");
}

inline OutputStrategy parse_output_strategy(const std::string& s) {
  if (s == "weighted-vote") return OutputStrategy::weighted_vote;
  if (s == "majority-vote") return OutputStrategy::majority_vote;
  if (s == "winner-takes-all" || s == "winner") return OutputStrategy::winner_takes_all;
  if (s == "weak-tiebreak") return OutputStrategy::weak_tiebreak_vote;
  throw ConfigError("unknown output strategy '" + s + "'");
}

}  // namespace cotest
