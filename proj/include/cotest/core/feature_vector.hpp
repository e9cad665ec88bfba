#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace cotest {

using FeatureId = std::uint32_t;

// Sparse feature vector: entries sorted by feature id, zeros never stored.
class FeatureVector {
 public:
  using Entry = std::pair<FeatureId, double>;

  FeatureVector() = default;

  static FeatureVector from_pairs(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    FeatureVector fv;
    for (const Entry& e : entries) {
      if (e.second == 0.0) continue;
      if (!fv.entries_.empty() && fv.entries_.back().first == e.first)
        fv.entries_.back().second += e.second;
      else
        fv.entries_.push_back(e);
    }
    // collapsing duplicates can produce new zeros
    std::erase_if(fv.entries_, [](const Entry& e) { return e.second == 0.0; });
    return fv;
  }

  void set(FeatureId f, double value) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), f,
                               [](const Entry& e, FeatureId id) { return e.first < id; });
    if (it != entries_.end() && it->first == f) {
      if (value == 0.0)
        entries_.erase(it);
      else
        it->second = value;
    } else if (value != 0.0) {
      entries_.insert(it, {f, value});
    }
  }

  void add(FeatureId f, double delta) { set(f, at(f) + delta); }

  double at(FeatureId f) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), f,
                               [](const Entry& e, FeatureId id) { return e.first < id; });
    return (it != entries_.end() && it->first == f) ? it->second : 0.0;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool operator==(const FeatureVector& other) const = default;

 private:
  std::vector<Entry> entries_;
};

inline double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double d2 = 0.0;
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
      d2 += ea[i].second * ea[i].second;
      ++i;
    } else if (i == ea.size() || eb[j].first < ea[i].first) {
      d2 += eb[j].second * eb[j].second;
      ++j;
    } else {
      double d = ea[i].second - eb[j].second;
      d2 += d * d;
      ++i;
      ++j;
    }
  }
  return d2;
}

inline double euclidean_distance(const FeatureVector& a, const FeatureVector& b) {
  return std::sqrt(squared_distance(a, b));
}

// Union of disjoint per-view descriptions into one vector.
inline FeatureVector merged(std::span<const FeatureVector> parts) {
  std::vector<FeatureVector::Entry> all;
  for (const FeatureVector& p : parts)
    all.insert(all.end(), p.entries().begin(), p.entries().end());
  return FeatureVector::from_pairs(std::move(all));
}

}  // namespace cotest
