#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cotest/cotesting/run.hpp"

namespace cotest {

// The single-view baselines operate on the union view V1 ∪ V2 ∪ ...; they
// never see the per-view structure.
inline FeatureVector union_features(const MultiViewExample& x) { return merged(x.views); }

inline ViewContext union_context(const Dataset& meta) {
  ViewContext ctx;
  ctx.num_labels = meta.num_labels();
  for (const View& v : meta.view_spec.views())
    ctx.vocabulary.insert(ctx.vocabulary.end(), v.features.begin(), v.features.end());
  std::sort(ctx.vocabulary.begin(), ctx.vocabulary.end());
  return ctx;
}

struct ScheduleOptions {
  int episodes = 1;
  int batch = 1;
};

namespace detail {

// What an episode wants to query, most-preferred first. Positions beyond
// n_criterion (and random completions when ranked is exhausted) are logged as
// fallback queries.
struct EpisodePlan {
  std::vector<std::size_t> ranked;
  std::size_t n_criterion = 0;
};

// Shared pool-based sampling loop. The planner sees the current pool, the
// union-projected labeled set and the current hypothesis; it never sees the
// oracle.
template <typename Planner>
RunResult run_pool_sampler(const Dataset& meta, const ActiveSplit& split,
                           const BaseLearnerSpec& learner, const ScheduleOptions& sched, Rng rng,
                           Planner plan_episode) {
  if (sched.episodes < 0 || sched.batch < 1)
    throw ContractError("pool sampler: bad episode schedule");
  if (split.labeled.empty()) throw ContractError("pool sampler: empty initial labeled set");

  ViewContext ctx = union_context(meta);
  std::vector<TrainExample> labeled;
  for (const MultiViewExample& ex : split.labeled)
    labeled.push_back({union_features(ex), *ex.label});
  std::vector<PoolItem> pool = split.pool;

  HypothesisPtr hyp = train(learner, labeled, ctx);
  auto snapshot_predictor = [](HypothesisPtr h) -> Predictor {
    return [h](const MultiViewExample& x) { return h->predict(union_features(x)); };
  };

  RunResult result;
  for (int episode = 0; episode < sched.episodes && !pool.empty(); ++episode) {
    Rng episode_rng = rng.derive("episode").derive(static_cast<std::uint64_t>(episode));
    EpisodePlan plan = plan_episode(pool, labeled, hyp, episode_rng);

    std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(sched.batch), pool.size());
    std::vector<std::size_t> chosen(
        plan.ranked.begin(), plan.ranked.begin() + std::min<std::size_t>(want, plan.ranked.size()));
    std::vector<bool> taken(pool.size(), false);
    for (std::size_t p : chosen) taken[p] = true;
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
      rec.fallback = (k >= plan.n_criterion);
      result.log.push_back(std::move(rec));
      labeled.push_back({union_features(pool[p].x), split.oracle.reveal(pool[p].id)});
    }
    std::sort(chosen.begin(), chosen.end(), std::greater<>());
    for (std::size_t p : chosen) pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(p));

    hyp = train(learner, labeled, ctx);
    result.snapshots.push_back({labeled.size(), snapshot_predictor(hyp)});
  }
  result.output = snapshot_predictor(hyp);
  return result;
}

inline double vote_entropy(const std::vector<int>& votes, int num_labels) {
  std::vector<int> count(static_cast<std::size_t>(num_labels), 0);
  for (int v : votes) ++count[static_cast<std::size_t>(v)];
  double h = 0.0;
  for (int c : count) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(votes.size());
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace detail

// Strawman: uniformly random queries from U without replacement.
inline RunResult random_sampling(const Dataset& meta, const ActiveSplit& split,
                                 const BaseLearnerSpec& learner, const ScheduleOptions& sched,
                                 Rng rng) {
  return detail::run_pool_sampler(
      meta, split, learner, sched, rng,
      [](const std::vector<PoolItem>& pool, std::span<const TrainExample>, const HypothesisPtr&,
         Rng& episode_rng) {
        detail::EpisodePlan plan;
        plan.ranked.resize(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) plan.ranked[i] = i;
        episode_rng.shuffle(plan.ranked);
        plan.n_criterion = plan.ranked.size();  // random is the criterion
        return plan;
      });
}

// Queries the pool example with the least confident prediction. Rejected at
// configuration time for learners that provide no confidence estimate.
inline RunResult uncertainty_sampling(const Dataset& meta, const ActiveSplit& split,
                                      const BaseLearnerSpec& learner, const ScheduleOptions& sched,
                                      Rng rng) {
  if (!learner.confidence_supported())
    throw ContractError(
        "uncertainty_sampling: the base learner does not provide an estimate of the confidence "
        "of its prediction");
  return detail::run_pool_sampler(
      meta, split, learner, sched, rng,
      [](const std::vector<PoolItem>& pool, std::span<const TrainExample>, const HypothesisPtr& hyp,
         Rng&) {
        std::vector<double> conf(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
          Prediction p = hyp->predict(union_features(pool[i].x));
          if (!p.confidence) throw ContractError("uncertainty_sampling: prediction had no confidence");
          conf[i] = *p.confidence;
        }
        detail::EpisodePlan plan;
        plan.ranked.resize(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) plan.ranked[i] = i;
        std::stable_sort(plan.ranked.begin(), plan.ranked.end(),
                         [&](std::size_t a, std::size_t b) {
                           if (conf[a] != conf[b]) return conf[a] < conf[b];
                           return a < b;
                         });
        plan.n_criterion = plan.ranked.size();
        return plan;
      });
}

// Query-by-Bagging: a fresh bagged committee each episode; queries maximize
// committee vote entropy. A chosen point the committee is unanimous on is
// logged as a zero-disagreement (fallback) query.
inline RunResult query_by_bagging(const Dataset& meta, const ActiveSplit& split,
                                  const BaseLearnerSpec& learner, int m,
                                  const ScheduleOptions& sched, Rng rng) {
  ViewContext ctx = union_context(meta);
  return detail::run_pool_sampler(
      meta, split, learner, sched, rng,
      [&, ctx, m](const std::vector<PoolItem>& pool, std::span<const TrainExample> labeled,
                  const HypothesisPtr&, Rng& episode_rng) {
        auto committee = bagged_committee(learner, labeled, m, ctx, episode_rng.derive("bag"));
        std::vector<double> entropy(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
          FeatureVector u = union_features(pool[i].x);
          std::vector<int> votes;
          votes.reserve(committee.size());
          for (const HypothesisPtr& h : committee) votes.push_back(h->predict(u).label);
          entropy[i] = detail::vote_entropy(votes, ctx.num_labels);
        }
        detail::EpisodePlan plan;
        plan.ranked.resize(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) plan.ranked[i] = i;
        std::stable_sort(plan.ranked.begin(), plan.ranked.end(),
                         [&](std::size_t a, std::size_t b) {
                           if (entropy[a] != entropy[b]) return entropy[a] > entropy[b];
                           return a < b;
                         });
        plan.n_criterion = 0;
        while (plan.n_criterion < plan.ranked.size() &&
               entropy[plan.ranked[plan.n_criterion]] > 0.0)
          ++plan.n_criterion;
        return plan;
      });
}

// Query-by-Committee for Naive Bayes: committee members sampled from the
// Gamma posterior of the NB parameters; queries a random member of the
// disagreement set, falling back to a random pool member when the committee
// is unanimous everywhere.
inline RunResult query_by_committee_nb(const Dataset& meta, const ActiveSplit& split, double alpha,
                                       int m, const ScheduleOptions& sched, Rng rng) {
  ViewContext ctx = union_context(meta);
  BaseLearnerSpec nb;
  nb.kind = BaseLearnerSpec::Kind::naive_bayes;
  nb.alpha = alpha;
  return detail::run_pool_sampler(
      meta, split, nb, sched, rng,
      [ctx, alpha, m](const std::vector<PoolItem>& pool, std::span<const TrainExample> labeled,
                      const HypothesisPtr&, Rng& episode_rng) {
        auto committee = sample_nb_committee(labeled, ctx.num_labels, alpha, ctx.vocabulary, m,
                                             episode_rng.derive("qbc"));
        std::vector<std::size_t> disagree;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          FeatureVector u = union_features(pool[i].x);
          int first = committee[0]->predict(u).label;
          for (std::size_t k = 1; k < committee.size(); ++k)
            if (committee[k]->predict(u).label != first) {
              disagree.push_back(i);
              break;
            }
        }
        detail::EpisodePlan plan;
        plan.ranked = disagree;
        episode_rng.shuffle(plan.ranked);
        plan.n_criterion = plan.ranked.size();
        return plan;
      });
}

}  // namespace cotest
