#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <vector>

#include "cotest/core/folds.hpp"
#include "cotest/cotesting/select.hpp"
#include "cotest/cotesting/strategy.hpp"
#include "cotest/cotesting/vote.hpp"
#include "cotest/learners/learner_spec.hpp"

namespace cotest {

using Predictor = std::function<Prediction(const MultiViewExample&)>;

struct CoTestOptions {
  QueryStrategy query = QueryStrategy::naive;
  OutputStrategy output = OutputStrategy::weighted_vote;
  int episodes = 1;
  int batch = 1;  // queries per episode
};

// One labeled query, with the strong views' predictions at selection time
// (before retraining). Fallback entries were drawn outside the contention set
// because the views agreed everywhere.
struct QueryRecord {
  std::size_t pool_id = 0;
  int true_label = 0;
  std::vector<Prediction> strong_predictions;
  bool fallback = false;
};

struct Snapshot {
  std::size_t labeled_count = 0;
  Predictor predict;
};

struct RunResult {
  std::vector<Snapshot> snapshots;  // one per executed episode
  std::vector<QueryRecord> log;
  Predictor output;
  std::vector<int> mistakes;  // per strong view, over the whole log
};

namespace detail {

inline std::vector<TrainExample> project_labeled(std::span<const MultiViewExample> labeled,
                                                 std::size_t view_idx) {
  std::vector<TrainExample> out;
  out.reserve(labeled.size());
  for (const MultiViewExample& ex : labeled) out.push_back({ex.views[view_idx], *ex.label});
  return out;
}

inline Predictor make_output_predictor(OutputStrategy os, std::vector<HypothesisPtr> hyps,
                                       std::vector<std::size_t> strong,
                                       std::optional<std::size_t> weak, std::vector<int> mistakes,
                                       int num_labels) {
  switch (os) {
    case OutputStrategy::weighted_vote:
      return [=](const MultiViewExample& x) {
        std::vector<Prediction> votes;
        votes.reserve(strong.size());
        for (std::size_t s : strong) votes.push_back(hyps[s]->predict(x.views[s]));
        VoteOutcome v = weighted_vote(votes, num_labels);
        return Prediction{v.label, v.margin};
      };
    case OutputStrategy::majority_vote:
      return [=](const MultiViewExample& x) {
        std::vector<Prediction> votes;
        votes.reserve(strong.size());
        for (std::size_t s : strong) votes.push_back(hyps[s]->predict(x.views[s]));
        VoteOutcome v = majority_vote(votes, num_labels);
        return Prediction{v.label, v.margin};
      };
    case OutputStrategy::winner_takes_all:
      return [=](const MultiViewExample& x) {
        std::size_t w = strong[winner_view(mistakes)];
        return hyps[w]->predict(x.views[w]);
      };
    case OutputStrategy::weak_tiebreak_vote:
      return [=](const MultiViewExample& x) {
        std::vector<int> count(static_cast<std::size_t>(num_labels), 0);
        for (std::size_t s : strong) ++count[static_cast<std::size_t>(hyps[s]->predict(x.views[s]).label)];
        int best_count = *std::max_element(count.begin(), count.end());
        std::vector<int> leaders;
        for (int l = 0; l < num_labels; ++l)
          if (count[static_cast<std::size_t>(l)] == best_count) leaders.push_back(l);
        if (leaders.size() == 1) return Prediction{leaders[0], std::nullopt};
        int tiebreak = hyps[*weak]->predict(x.views[*weak]).label;
        for (int l : leaders)
          if (l == tiebreak) return Prediction{l, std::nullopt};
        return Prediction{leaders[0], std::nullopt};
      };
  }
  throw ContractError("unreachable output strategy");
}

}  // namespace detail

// The multi-view active-learning loop: train a hypothesis per view, find the
// pool examples on which the strong views disagree, query one of them, move
// it to the labeled set and repeat. Snapshots are taken after every episode,
// once the episode's queries are labeled and the models retrained.
//
// `learners` holds one spec per view (or a single spec reused for all views).
inline RunResult run_cotesting(const Dataset& meta, const ActiveSplit& split,
                               std::span<const BaseLearnerSpec> learners,
                               const CoTestOptions& opt, Rng rng) {
  const ViewSpec& vs = meta.view_spec;
  const std::vector<std::size_t> strong = vs.strong_indices();
  const std::optional<std::size_t> weak = vs.weak_index();
  const int num_labels = meta.num_labels();

  if (strong.size() < 2)
    throw ContractError("run_cotesting: need at least 2 strong views");
  if (learners.size() != 1 && learners.size() != vs.view_count())
    throw ContractError("run_cotesting: need one learner spec, or one per view");
  if (opt.episodes < 0 || opt.batch < 1)
    throw ContractError("run_cotesting: bad episode schedule");
  auto learner_for = [&](std::size_t view_idx) -> const BaseLearnerSpec& {
    return learners.size() == 1 ? learners[0] : learners[view_idx];
  };

  const bool needs_confidence = opt.query == QueryStrategy::aggressive ||
                                opt.query == QueryStrategy::conservative ||
                                opt.output == OutputStrategy::weighted_vote;
  if (needs_confidence)
    for (std::size_t s : strong)
      if (!learner_for(s).confidence_supported())
        throw ContractError(
            "run_cotesting: the configured strategy requires prediction confidences, which the "
            "base learner does not provide");
  if (opt.query == QueryStrategy::weak_view_aggressive)
    throw ContractError(
        "run_cotesting: weak-view aggressive selection needs violation counts; use the wrapper "
        "runner");
  if (opt.output == OutputStrategy::weak_tiebreak_vote && !weak)
    throw ContractError("run_cotesting: weak-tiebreak output requires a weak view");
  if (split.labeled.empty()) throw ContractError("run_cotesting: empty initial labeled set");

  std::vector<ViewContext> ctx(vs.view_count());
  for (std::size_t v = 0; v < vs.view_count(); ++v)
    ctx[v] = {num_labels, vs.views()[v].features};

  std::vector<MultiViewExample> labeled = split.labeled;
  std::vector<PoolItem> pool = split.pool;

  std::vector<HypothesisPtr> hyps(vs.view_count());
  auto retrain = [&] {
    for (std::size_t v = 0; v < vs.view_count(); ++v) {
      auto tr = detail::project_labeled(labeled, v);
      hyps[v] = train(learner_for(v), tr, ctx[v]);
    }
  };
  retrain();

  RunResult result;
  result.mistakes.assign(strong.size(), 0);

  for (int episode = 0; episode < opt.episodes && !pool.empty(); ++episode) {
    Rng episode_rng = rng.derive("episode").derive(static_cast<std::uint64_t>(episode));

    // strong-view predictions over the pool, made once per episode
    std::vector<std::vector<Prediction>> preds(pool.size());
    std::vector<std::vector<int>> pred_labels(pool.size());
    for (std::size_t p = 0; p < pool.size(); ++p) {
      preds[p].reserve(strong.size());
      for (std::size_t s : strong) preds[p].push_back(hyps[s]->predict(pool[p].x.views[s]));
      pred_labels[p].reserve(strong.size());
      for (const Prediction& pr : preds[p]) pred_labels[p].push_back(pr.label);
    }
    std::vector<std::size_t> contention = contention_points(pred_labels);

    // rank the episode's queries: top-batch by the strategy's criterion,
    // without re-ranking inside the batch
    std::vector<std::size_t> order;
    if (opt.query == QueryStrategy::naive) {
      order = contention;
      episode_rng.shuffle(order);
    } else {
      std::vector<QueryCandidate> cands;
      cands.reserve(contention.size());
      for (std::size_t p : contention) {
        QueryCandidate c;
        c.pool_index = p;
        for (const Prediction& pr : preds[p]) {
          if (!pr.confidence)
            throw ContractError("run_cotesting: missing confidence under " +
                                std::string(opt.query == QueryStrategy::aggressive
                                                ? "aggressive"
                                                : "conservative") +
                                " selection");
          c.confidences.push_back(*pr.confidence);
        }
        cands.push_back(std::move(c));
      }
      std::vector<std::size_t> rank(cands.size());
      for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
      auto score = [&](std::size_t i) {
        const auto& cf = cands[i].confidences;
        double mn = *std::min_element(cf.begin(), cf.end());
        if (opt.query == QueryStrategy::aggressive) return -mn;  // ascending sort
        double mx = *std::max_element(cf.begin(), cf.end());
        return mx - mn;
      };
      std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
        double sa = score(a), sb = score(b);
        if (sa != sb) return sa < sb;
        return cands[a].pool_index < cands[b].pool_index;
      });
      for (std::size_t i : rank) order.push_back(cands[i].pool_index);
    }

    std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(opt.batch), pool.size());
    std::vector<std::size_t> chosen(order.begin(),
                                    order.begin() + std::min<std::size_t>(want, order.size()));
    std::vector<bool> taken(pool.size(), false);
    for (std::size_t p : chosen) taken[p] = true;

    // views agree everywhere (or the contention set is smaller than the
    // batch): fall back to seeded-random pool members, logged as such
    std::size_t n_contention = chosen.size();
    while (chosen.size() < want) {
      std::size_t p = episode_rng.next_below(pool.size());
      if (taken[p]) continue;
      taken[p] = true;
      chosen.push_back(p);
    }

    for (std::size_t k = 0; k < chosen.size(); ++k) {
      std::size_t p = chosen[k];
      QueryRecord rec;
      rec.pool_id = pool[p].id;
      rec.true_label = split.oracle.reveal(pool[p].id);
      rec.strong_predictions = preds[p];
      rec.fallback = (k >= n_contention);
      for (std::size_t s = 0; s < strong.size(); ++s)
        if (rec.strong_predictions[s].label != rec.true_label) ++result.mistakes[s];
      result.log.push_back(std::move(rec));

      MultiViewExample ex = pool[p].x;
      ex.label = split.oracle.reveal(pool[p].id);
      labeled.push_back(std::move(ex));
    }
    std::sort(chosen.begin(), chosen.end(), std::greater<>());
    for (std::size_t p : chosen) pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(p));

    retrain();
    result.snapshots.push_back(
        {labeled.size(), detail::make_output_predictor(opt.output, hyps, strong, weak,
                                                       result.mistakes, num_labels)});
  }

  result.output = detail::make_output_predictor(opt.output, hyps, strong, weak, result.mistakes,
                                                num_labels);
  return result;
}

// Accuracy of a predictor over a labeled test set.
inline double evaluate(const Predictor& predict, std::span<const MultiViewExample> test) {
  if (test.empty()) throw ContractError("evaluate: empty test set");
  std::size_t correct = 0;
  for (const MultiViewExample& ex : test) {
    if (!ex.label) throw ContractError("evaluate: unlabeled test example");
    if (predict(ex).label == *ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace cotest
