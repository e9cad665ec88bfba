#pragma once

#include <span>
#include <vector>

#include "cotest/errors.hpp"
#include "cotest/learners/hypothesis.hpp"

namespace cotest {

// 1-NN under Euclidean distance on the sparse vectors. Ties are broken by the
// lowest training-example index. Confidence is the 1/(1+d) heuristic, which
// is unreliable when training data is scarce; co-testing setups built on this
// learner should use naive selection, which never reads it.
class NearestNeighborModel final : public Hypothesis {
 public:
  explicit NearestNeighborModel(std::vector<TrainExample> train) : train_(std::move(train)) {
    if (train_.empty()) throw ContractError("train_nearest_neighbor: empty training set");
  }

  Prediction predict(const FeatureVector& x) const override {
    std::size_t best = 0;
    double best_d2 = squared_distance(x, train_[0].x);
    for (std::size_t i = 1; i < train_.size(); ++i) {
      double d2 = squared_distance(x, train_[i].x);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    return {train_[best].label, 1.0 / (1.0 + std::sqrt(best_d2))};
  }

  bool confidence_supported() const override { return true; }

 private:
  std::vector<TrainExample> train_;
};

inline std::shared_ptr<NearestNeighborModel> train_nearest_neighbor(
    std::span<const TrainExample> examples) {
  return std::make_shared<NearestNeighborModel>(
      std::vector<TrainExample>(examples.begin(), examples.end()));
}

}  // namespace cotest
