#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cotest/errors.hpp"
#include "cotest/learners/hypothesis.hpp"
#include "cotest/rng.hpp"

namespace cotest {

// Multinomial Naive Bayes with Laplace-style smoothing, computed in log space.
//
// The class conditionals are smoothed over an explicit vocabulary (the view's
// feature set); features outside it fall back to the zero-count estimate.
// Prediction confidence is the normalized posterior of the predicted class,
// which lies in [1/N, 1].
class NaiveBayesModel final : public Hypothesis {
 public:
  NaiveBayesModel(int num_labels, double alpha, std::vector<FeatureId> vocab)
      : num_labels_(num_labels), alpha_(alpha), vocab_(std::move(vocab)) {
    std::sort(vocab_.begin(), vocab_.end());
    vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
    log_prior_.assign(static_cast<std::size_t>(num_labels_), 0.0);
    log_cond_.assign(static_cast<std::size_t>(num_labels_),
                     std::vector<double>(vocab_.size(), 0.0));
    log_unseen_.assign(static_cast<std::size_t>(num_labels_), 0.0);
  }

  Prediction predict(const FeatureVector& x) const override {
    std::vector<double> post = posteriors(x);
    int best = 0;
    for (int c = 1; c < num_labels_; ++c)
      if (post[static_cast<std::size_t>(c)] > post[static_cast<std::size_t>(best)]) best = c;
    return {best, post[static_cast<std::size_t>(best)]};
  }

  // Posterior distribution over classes; sums to 1.
  std::vector<double> posteriors(const FeatureVector& x) const {
    std::vector<double> score(log_prior_);
    for (const auto& [f, val] : x.entries()) {
      auto idx = vocab_index(f);
      for (int c = 0; c < num_labels_; ++c) {
        double lp = idx ? log_cond_[static_cast<std::size_t>(c)][*idx]
                        : log_unseen_[static_cast<std::size_t>(c)];
        score[static_cast<std::size_t>(c)] += val * lp;
      }
    }
    double mx = *std::max_element(score.begin(), score.end());
    double sum = 0.0;
    for (double& s : score) {
      s = std::exp(s - mx);
      sum += s;
    }
    for (double& s : score) s /= sum;
    return score;
  }

  bool confidence_supported() const override { return true; }

  int num_labels() const { return num_labels_; }
  const std::vector<FeatureId>& vocabulary() const { return vocab_; }

  // log P(f | c) for a vocabulary feature; used by tests and sampling.
  double log_conditional(int c, FeatureId f) const {
    auto idx = vocab_index(f);
    return idx ? log_cond_[static_cast<std::size_t>(c)][*idx]
               : log_unseen_[static_cast<std::size_t>(c)];
  }

 private:
  std::optional<std::size_t> vocab_index(FeatureId f) const {
    auto it = std::lower_bound(vocab_.begin(), vocab_.end(), f);
    if (it == vocab_.end() || *it != f) return std::nullopt;
    return static_cast<std::size_t>(it - vocab_.begin());
  }

  int num_labels_;
  double alpha_;
  std::vector<FeatureId> vocab_;
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> log_cond_;  // [class][vocab position]
  std::vector<double> log_unseen_;             // zero-count fallback per class

  friend struct NaiveBayesTrainer;
};

struct NaiveBayesTrainer {
  // Raw per-class statistics; shared by deterministic training and the
  // Gamma-sampled committees.
  struct Counts {
    std::vector<double> class_count;               // per class
    std::vector<std::vector<double>> word_count;   // [class][vocab position]
    std::vector<double> total_count;               // per class
    double n = 0.0;
  };

  static Counts count(std::span<const TrainExample> examples, const NaiveBayesModel& shape) {
    Counts c;
    std::size_t n = static_cast<std::size_t>(shape.num_labels_);
    c.class_count.assign(n, 0.0);
    c.word_count.assign(n, std::vector<double>(shape.vocab_.size(), 0.0));
    c.total_count.assign(n, 0.0);
    for (const TrainExample& ex : examples) {
      if (ex.label < 0 || ex.label >= shape.num_labels_)
        throw ContractError("naive bayes: label out of range");
      auto cls = static_cast<std::size_t>(ex.label);
      c.class_count[cls] += 1.0;
      c.n += 1.0;
      for (const auto& [f, val] : ex.x.entries()) {
        if (val < 0.0) throw ContractError("naive bayes: negative feature value");
        auto idx = shape.vocab_index(f);
        if (idx) {
          c.word_count[cls][*idx] += val;
          c.total_count[cls] += val;
        }
      }
    }
    return c;
  }

  static void fill_priors(NaiveBayesModel& m, const Counts& c) {
    double denom = c.n + m.alpha_ * m.num_labels_;
    for (int cls = 0; cls < m.num_labels_; ++cls)
      m.log_prior_[static_cast<std::size_t>(cls)] =
          std::log((c.class_count[static_cast<std::size_t>(cls)] + m.alpha_) / denom);
  }

  static void fill_deterministic(NaiveBayesModel& m, const Counts& counts) {
    fill_priors(m, counts);
    double v = static_cast<double>(m.vocab_.size());
    for (int cls = 0; cls < m.num_labels_; ++cls) {
      auto c = static_cast<std::size_t>(cls);
      double denom = std::log(counts.total_count[c] + m.alpha_ * v);
      for (std::size_t w = 0; w < m.vocab_.size(); ++w)
        m.log_cond_[c][w] = std::log(counts.word_count[c][w] + m.alpha_) - denom;
      m.log_unseen_[c] = std::log(m.alpha_) - denom;
    }
  }

  static void fill_sampled(NaiveBayesModel& m, const Counts& counts, Rng& rng) {
    fill_priors(m, counts);
    for (int cls = 0; cls < m.num_labels_; ++cls) {
      auto c = static_cast<std::size_t>(cls);
      std::vector<double> theta(m.vocab_.size());
      double sum = 0.0;
      for (std::size_t w = 0; w < theta.size(); ++w) {
        theta[w] = rng.next_gamma(counts.word_count[c][w] + m.alpha_);
        sum += theta[w];
      }
      for (std::size_t w = 0; w < theta.size(); ++w)
        m.log_cond_[c][w] = std::log(theta[w] / sum);
      // zero-count fallback mirrors the deterministic estimate
      m.log_unseen_[c] = std::log(m.alpha_) -
                         std::log(counts.total_count[c] +
                                  m.alpha_ * static_cast<double>(theta.size()));
    }
  }
};

inline std::shared_ptr<NaiveBayesModel> train_naive_bayes(std::span<const TrainExample> examples,
                                                          int num_labels, double alpha,
                                                          std::vector<FeatureId> vocab) {
  if (examples.empty()) throw ContractError("train_naive_bayes: empty training set");
  if (alpha <= 0.0) throw ContractError("train_naive_bayes: smoothing alpha must be > 0");
  auto m = std::make_shared<NaiveBayesModel>(num_labels, alpha, std::move(vocab));
  auto counts = NaiveBayesTrainer::count(examples, *m);
  NaiveBayesTrainer::fill_deterministic(*m, counts);
  return m;
}

// Committee for query-by-committee: each member's per-class word parameters
// are drawn from Gamma(count + alpha, 1) and normalized, i.e. a Dirichlet
// posterior sample around the smoothed estimate. Priors stay deterministic.
inline std::vector<HypothesisPtr> sample_nb_committee(std::span<const TrainExample> examples,
                                                      int num_labels, double alpha,
                                                      std::vector<FeatureId> vocab, int m,
                                                      Rng rng) {
  if (m < 2) throw ContractError("sample_nb_committee: need m >= 2");
  if (examples.empty()) throw ContractError("sample_nb_committee: empty training set");
  if (alpha <= 0.0) throw ContractError("sample_nb_committee: smoothing alpha must be > 0");

  NaiveBayesModel shape(num_labels, alpha, vocab);
  auto counts = NaiveBayesTrainer::count(examples, shape);

  std::vector<HypothesisPtr> committee;
  committee.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    auto member = std::make_shared<NaiveBayesModel>(num_labels, alpha, vocab);
    NaiveBayesTrainer::fill_sampled(*member, counts, rng);
    committee.push_back(std::move(member));
  }
  return committee;
}

}  // namespace cotest
