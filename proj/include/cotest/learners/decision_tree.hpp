#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "cotest/errors.hpp"
#include "cotest/learners/hypothesis.hpp"

namespace cotest {

struct TreeHyper {
  int max_depth = 64;
  int min_leaf = 1;
};

// Greedy decision tree with binary threshold splits (x[f] <= t) ranked by
// information gain. Unpruned; max_depth caps growth. Splitting continues
// while a node is impure and some threshold separates the examples, even at
// zero gain, so parity-style concepts remain learnable. Deliberately exposes
// no prediction confidence.
class DecisionTreeModel final : public Hypothesis {
 public:
  DecisionTreeModel(std::span<const TrainExample> examples, TreeHyper hp) {
    if (examples.empty()) throw ContractError("train_decision_tree: empty training set");
    if (hp.max_depth < 1) throw ContractError("train_decision_tree: max_depth must be >= 1");
    if (hp.min_leaf < 1) throw ContractError("train_decision_tree: min_leaf must be >= 1");
    hp_ = hp;
    examples_.assign(examples.begin(), examples.end());
    std::set<FeatureId> feats;
    for (const TrainExample& ex : examples_)
      for (const auto& [f, v] : ex.x.entries()) feats.insert(f);
    features_.assign(feats.begin(), feats.end());
    std::vector<std::size_t> all(examples_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    root_ = build(all, 0);
    examples_.clear();
    features_.clear();
  }

  Prediction predict(const FeatureVector& x) const override {
    std::size_t n = 0;
    while (!nodes_[n].leaf)
      n = (x.at(nodes_[n].feature) <= nodes_[n].threshold) ? nodes_[n].left : nodes_[n].right;
    return {nodes_[n].label, std::nullopt};
  }

  bool confidence_supported() const override { return false; }

  int depth() const { return depth_of(root_); }

 private:
  struct Node {
    bool leaf = true;
    int label = 0;
    FeatureId feature = 0;
    double threshold = 0.0;
    std::size_t left = 0, right = 0;
  };

  static double entropy(const std::map<int, std::size_t>& counts, std::size_t n) {
    double h = 0.0;
    for (const auto& [label, c] : counts) {
      if (c == 0) continue;
      double p = static_cast<double>(c) / static_cast<double>(n);
      h -= p * std::log2(p);
    }
    return h;
  }

  std::map<int, std::size_t> label_counts(const std::vector<std::size_t>& idx) const {
    std::map<int, std::size_t> counts;
    for (std::size_t i : idx) ++counts[examples_[i].label];
    return counts;
  }

  static int majority(const std::map<int, std::size_t>& counts) {
    int best = counts.begin()->first;
    std::size_t best_c = counts.begin()->second;
    for (const auto& [label, c] : counts)
      if (c > best_c) {  // ties keep the lowest label id (map order)
        best = label;
        best_c = c;
      }
    return best;
  }

  std::size_t build(const std::vector<std::size_t>& idx, int depth) {
    auto counts = label_counts(idx);
    Node node;
    node.label = majority(counts);
    std::size_t self = nodes_.size();
    nodes_.push_back(node);

    if (counts.size() <= 1 || depth >= hp_.max_depth ||
        idx.size() < 2 * static_cast<std::size_t>(hp_.min_leaf))
      return self;

    double parent_h = entropy(counts, idx.size());
    double best_gain = -1.0;
    FeatureId best_f = 0;
    double best_t = 0.0;
    for (FeatureId f : features_) {
      std::vector<double> values;
      values.reserve(idx.size());
      for (std::size_t i : idx) values.push_back(examples_[i].x.at(f));
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (std::size_t v = 0; v + 1 < values.size(); ++v) {
        double t = 0.5 * (values[v] + values[v + 1]);
        std::map<int, std::size_t> lc, rc;
        std::size_t ln = 0;
        for (std::size_t i : idx) {
          if (examples_[i].x.at(f) <= t) {
            ++lc[examples_[i].label];
            ++ln;
          } else {
            ++rc[examples_[i].label];
          }
        }
        std::size_t rn = idx.size() - ln;
        if (ln < static_cast<std::size_t>(hp_.min_leaf) ||
            rn < static_cast<std::size_t>(hp_.min_leaf))
          continue;
        double gain = parent_h -
                      (static_cast<double>(ln) / static_cast<double>(idx.size())) * entropy(lc, ln) -
                      (static_cast<double>(rn) / static_cast<double>(idx.size())) * entropy(rc, rn);
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_f = f;
          best_t = t;
        }
      }
    }
    if (best_gain < 0.0) return self;  // nothing separates this node

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx)
      (examples_[i].x.at(best_f) <= best_t ? left : right).push_back(i);
    nodes_[self].leaf = false;
    nodes_[self].feature = best_f;
    nodes_[self].threshold = best_t;
    nodes_[self].left = build(left, depth + 1);
    nodes_[self].right = build(right, depth + 1);
    return self;
  }

  int depth_of(std::size_t n) const {
    if (nodes_[n].leaf) return 0;
    return 1 + std::max(depth_of(nodes_[n].left), depth_of(nodes_[n].right));
  }

  TreeHyper hp_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
  // training-time scratch
  std::vector<TrainExample> examples_;
  std::vector<FeatureId> features_;
};

inline std::shared_ptr<DecisionTreeModel> train_decision_tree(std::span<const TrainExample> examples,
                                                              TreeHyper hp = {}) {
  return std::make_shared<DecisionTreeModel>(examples, hp);
}

}  // namespace cotest
