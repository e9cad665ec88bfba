#pragma once

#include <functional>
#include <span>

#include "cotest/core/folds.hpp"
#include "cotest/cotesting/select.hpp"
#include "cotest/wrapper/content_pattern.hpp"

namespace cotest::wrapper {

// Query selection for extraction tasks. Naive and the random baseline use a
// winner-takes-all output; aggressive uses the weak content view both to pick
// queries (argmax of min(n1,n2)) and to break output disagreements.
enum class WrapperMode { naive, aggressive, random };

inline WrapperMode parse_wrapper_mode(const std::string& s) {
  if (s == "naive") return WrapperMode::naive;
  if (s == "aggressive") return WrapperMode::aggressive;
  if (s == "random") return WrapperMode::random;
  throw ConfigError("unknown wrapper mode '" + s + "'");
}

struct WrapperPoolItem {
  std::size_t id = 0;
  Document doc;  // target structurally absent
};

class WrapperOracle {
 public:
  WrapperOracle() = default;
  explicit WrapperOracle(std::vector<std::size_t> targets) : targets_(std::move(targets)) {}
  std::size_t reveal(std::size_t pool_id) const {
    if (pool_id >= targets_.size())
      throw ContractError("wrapper oracle: unknown pool id " + std::to_string(pool_id));
    return targets_[pool_id];
  }

 private:
  std::vector<std::size_t> targets_;
};

struct WrapperSplit {
  std::vector<LabeledDocument> labeled;
  std::vector<WrapperPoolItem> pool;
  WrapperOracle oracle;
};

inline WrapperSplit wrapper_split_initial(std::span<const LabeledDocument> train,
                                          std::size_t n_initial, std::uint64_t seed) {
  if (n_initial == 0) throw ContractError("wrapper_split_initial: n_initial must be >= 1");
  if (n_initial > train.size())
    throw ContractError("wrapper_split_initial: n_initial exceeds training size");
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  WrapperSplit split;
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const LabeledDocument& d = train[order[i]];
    if (i < n_initial) {
      split.labeled.push_back(d);
    } else {
      split.pool.push_back({targets.size(), d.doc});
      targets.push_back(d.target);
    }
  }
  split.oracle = WrapperOracle(std::move(targets));
  return split;
}

// Plain (unstratified) k-fold over n documents; wrapper tasks have no class
// structure to preserve.
inline std::vector<FoldSplit> kfold_documents(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || n < k) throw ContractError("kfold_documents: need n >= k >= 2");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<FoldSplit> folds(k);
  for (std::size_t i = 0; i < n; ++i) folds[i % k].test.push_back(order[i]);
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(folds[f].test.begin(), folds[f].test.end());
    for (std::size_t g = 0; g < k; ++g)
      if (g != f)
        folds[f].train.insert(folds[f].train.end(), folds[g].test.begin(), folds[g].test.end());
    std::sort(folds[f].train.begin(), folds[f].train.end());
  }
  return folds;
}

using Extractor = std::function<ExtractionPrediction(const Document&)>;

struct WrapperQueryRecord {
  std::size_t pool_id = 0;
  std::size_t true_target = 0;
  ExtractionPrediction forward_pred, backward_pred;  // at selection time
  bool fallback = false;
};

struct WrapperSnapshot {
  std::size_t labeled_count = 0;
  Extractor extract;
};

struct WrapperRunResult {
  LandmarkRule forward, backward;
  std::optional<ContentPattern> pattern;
  std::vector<WrapperQueryRecord> log;
  WrapperSnapshot initial;                 // trained on L0, before any query
  std::vector<WrapperSnapshot> snapshots;  // one per query
  Extractor output;
  int forward_mistakes = 0, backward_mistakes = 0;
};

namespace detail {

inline std::vector<std::vector<Token>> labeled_positives(std::span<const LabeledDocument> docs) {
  std::vector<std::vector<Token>> out;
  out.reserve(docs.size());
  for (const LabeledDocument& d : docs) out.push_back(item_tokens(d.doc.tokens, d.target));
  return out;
}

inline Extractor make_extractor(WrapperMode mode, LandmarkRule fwd, LandmarkRule bwd,
                                std::optional<ContentPattern> pattern, int fwd_mistakes,
                                int bwd_mistakes) {
  if (mode == WrapperMode::aggressive) {
    return [fwd, bwd, pattern](const Document& doc) {
      ExtractionPrediction pf = apply_rule(fwd, doc);
      ExtractionPrediction pb = apply_rule(bwd, doc);
      if (pf.index == pb.index) return pf;  // includes the double-abstention case
      if (!pf.index) return pb;
      if (!pb.index) return pf;
      auto sf = item_tokens(doc.tokens, *pf.index);
      auto sb = item_tokens(doc.tokens, *pb.index);
      // fewer weak-view violations wins; ties keep the forward view
      return violations(*pattern, &sb) < violations(*pattern, &sf) ? pb : pf;
    };
  }
  // winner-takes-all on the query log; ties keep the forward view
  const LandmarkRule& winner = (bwd_mistakes < fwd_mistakes) ? bwd : fwd;
  return [winner](const Document& doc) { return apply_rule(winner, doc); };
}

}  // namespace detail

// The co-testing loop specialized to extraction: two strong views (forward
// and backward landmark rules) and, in aggressive mode, the weak content
// view. Contention points are the pool documents from which the two rules do
// not extract the same thing, an abstention disagreeing with every concrete
// extraction.
inline WrapperRunResult run_wrapper_cotesting(const WrapperSplit& split, int queries,
                                              WrapperMode mode, Rng rng) {
  if (split.labeled.empty()) throw ContractError("run_wrapper_cotesting: empty initial labeled set");
  if (queries < 0) throw ContractError("run_wrapper_cotesting: negative query budget");

  std::vector<LabeledDocument> labeled = split.labeled;
  std::vector<WrapperPoolItem> pool = split.pool;

  WrapperRunResult result;
  auto retrain = [&] {
    result.forward = learn_rule(labeled, RuleDirection::forward);
    result.backward = learn_rule(labeled, RuleDirection::backward);
    if (mode == WrapperMode::aggressive) {
      auto positives = detail::labeled_positives(labeled);
      result.pattern = learn_content_pattern(positives);
    }
  };
  auto snapshot = [&] {
    return WrapperSnapshot{labeled.size(),
                           detail::make_extractor(mode, result.forward, result.backward,
                                                  result.pattern, result.forward_mistakes,
                                                  result.backward_mistakes)};
  };

  retrain();
  result.initial = snapshot();

  for (int q = 0; q < queries && !pool.empty(); ++q) {
    Rng episode_rng = rng.derive("episode").derive(static_cast<std::uint64_t>(q));

    std::vector<ExtractionPrediction> fwd_preds(pool.size()), bwd_preds(pool.size());
    std::vector<std::size_t> contention;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      fwd_preds[p] = apply_rule(result.forward, pool[p].doc);
      bwd_preds[p] = apply_rule(result.backward, pool[p].doc);
      if (fwd_preds[p].index != bwd_preds[p].index) contention.push_back(p);
    }

    std::size_t chosen;
    bool fallback = false;
    if (mode == WrapperMode::random) {
      chosen = episode_rng.next_below(pool.size());
    } else if (contention.empty()) {
      chosen = episode_rng.next_below(pool.size());
      fallback = true;
    } else if (mode == WrapperMode::naive) {
      chosen = contention[episode_rng.next_below(contention.size())];
    } else {
      std::vector<QueryCandidate> cands;
      cands.reserve(contention.size());
      for (std::size_t p : contention) {
        QueryCandidate c;
        c.pool_index = p;
        auto count = [&](const ExtractionPrediction& pred) {
          if (!pred.index) return violations(*result.pattern, nullptr);
          auto s = item_tokens(pool[p].doc.tokens, *pred.index);
          return violations(*result.pattern, &s);
        };
        c.violations = {count(fwd_preds[p]), count(bwd_preds[p])};
        cands.push_back(std::move(c));
      }
      chosen = cands[select_query(QueryStrategy::weak_view_aggressive, cands, episode_rng)].pool_index;
    }

    WrapperQueryRecord rec;
    rec.pool_id = pool[chosen].id;
    rec.true_target = split.oracle.reveal(pool[chosen].id);
    rec.forward_pred = fwd_preds[chosen];
    rec.backward_pred = bwd_preds[chosen];
    rec.fallback = fallback;
    if (!rec.forward_pred.index || *rec.forward_pred.index != rec.true_target)
      ++result.forward_mistakes;
    if (!rec.backward_pred.index || *rec.backward_pred.index != rec.true_target)
      ++result.backward_mistakes;
    result.log.push_back(rec);

    labeled.push_back({pool[chosen].doc, rec.true_target});
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(chosen));

    retrain();
    result.snapshots.push_back(snapshot());
  }

  result.output = result.snapshots.empty() ? result.initial.extract : result.snapshots.back().extract;
  return result;
}

// Extraction accuracy: correct iff the extracted index equals the labeled one.
inline double evaluate_extractor(const Extractor& extract, std::span<const LabeledDocument> test) {
  if (test.empty()) throw ContractError("evaluate_extractor: empty test set");
  std::size_t correct = 0;
  for (const LabeledDocument& d : test) {
    ExtractionPrediction p = extract(d.doc);
    if (p.index && *p.index == d.target) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace cotest::wrapper
