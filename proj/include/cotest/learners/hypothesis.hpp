#pragma once

#include <memory>
#include <span>

#include "cotest/core/dataset.hpp"

namespace cotest {

// A labeled example projected onto a single view.
struct TrainExample {
  FeatureVector x;
  int label = 0;
};

// A trained single-view predictor. Immutable after training; safe to share
// across concurrent evaluations. When confidence_supported() is false every
// Prediction it returns carries no confidence.
class Hypothesis {
 public:
  virtual ~Hypothesis() = default;
  virtual Prediction predict(const FeatureVector& x) const = 0;
  virtual bool confidence_supported() const = 0;
};

using HypothesisPtr = std::shared_ptr<const Hypothesis>;

}  // namespace cotest
