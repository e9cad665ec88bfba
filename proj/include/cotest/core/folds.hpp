#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "cotest/core/dataset.hpp"
#include "cotest/errors.hpp"
#include "cotest/rng.hpp"

namespace cotest {

struct FoldSplit {
  std::vector<std::size_t> train;  // indices into the dataset
  std::vector<std::size_t> test;
};

// Stratified k-fold over the labeled examples. Within each class the examples
// are shuffled by the seeded stream and dealt round-robin starting at a seeded
// offset, so per-fold class counts deviate from proportionality by at most one
// and remainder assignment carries no positional bias.
inline std::vector<FoldSplit> stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ContractError("stratified_kfold: k must be >= 2");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ds.examples.size(); ++i)
    if (ds.examples[i].label) by_class[*ds.examples[i].label].push_back(i);

  for (const auto& [label, idx] : by_class)
    if (idx.size() < k)
      throw ContractError("stratification error: class " + std::to_string(label) + " has " +
                          std::to_string(idx.size()) + " examples, fewer than k=" +
                          std::to_string(k));

  Rng rng(seed);
  std::vector<std::vector<std::size_t>> fold_members(k);
  for (auto& [label, idx] : by_class) {
    Rng stream = rng.derive(static_cast<std::uint64_t>(label));
    stream.shuffle(idx);
    std::size_t offset = stream.next_below(k);
    for (std::size_t i = 0; i < idx.size(); ++i)
      fold_members[(offset + i) % k].push_back(idx[i]);
  }

  std::vector<FoldSplit> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(fold_members[f].begin(), fold_members[f].end());
    folds[f].test = fold_members[f];
    for (std::size_t g = 0; g < k; ++g)
      if (g != f)
        folds[f].train.insert(folds[f].train.end(), fold_members[g].begin(), fold_members[g].end());
    std::sort(folds[f].train.begin(), folds[f].train.end());
  }
  return folds;
}

// An unlabeled pool member. `id` is stable for the lifetime of a run and keys
// the oracle; the example itself carries no label.
struct PoolItem {
  std::size_t id = 0;
  MultiViewExample x;  // x.label is always nullopt
};

// The only component that can reveal a hidden label. Samplers receive the
// pool, never the oracle; the loop drivers hold it.
class Oracle {
 public:
  Oracle() = default;
  explicit Oracle(std::vector<int> truth) : truth_(std::move(truth)) {}

  int reveal(std::size_t pool_id) const {
    if (pool_id >= truth_.size())
      throw ContractError("oracle: unknown pool id " + std::to_string(pool_id));
    return truth_[pool_id];
  }

  std::size_t size() const { return truth_.size(); }

 private:
  std::vector<int> truth_;
};

struct ActiveSplit {
  std::vector<MultiViewExample> labeled;  // L0, labels kept
  std::vector<PoolItem> pool;             // U0, labels structurally removed
  Oracle oracle;
};

// Seeded split of a training set into n_initial labeled examples and an
// unlabeled pool. The pool's labels live only inside the returned oracle.
inline ActiveSplit split_initial(std::span<const MultiViewExample> train, std::size_t n_initial,
                                 std::uint64_t seed) {
  if (n_initial == 0) throw ContractError("split_initial: n_initial must be >= 1");
  if (n_initial > train.size())
    throw ContractError("split_initial: n_initial=" + std::to_string(n_initial) +
                        " exceeds training size " + std::to_string(train.size()));
  for (const MultiViewExample& ex : train)
    if (!ex.label) throw ContractError("split_initial: training set contains an unlabeled example");

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  ActiveSplit split;
  std::vector<int> truth;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const MultiViewExample& ex = train[order[i]];
    if (i < n_initial) {
      split.labeled.push_back(ex);
    } else {
      PoolItem item;
      item.id = truth.size();
      item.x = ex;
      item.x.label.reset();
      truth.push_back(*ex.label);
      split.pool.push_back(std::move(item));
    }
  }
  split.oracle = Oracle(std::move(truth));
  return split;
}

inline std::vector<MultiViewExample> subset(const Dataset& ds, std::span<const std::size_t> idx) {
  std::vector<MultiViewExample> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(ds.examples[i]);
  return out;
}

}  // namespace cotest
