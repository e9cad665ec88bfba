#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cotest/core/feature_vector.hpp"
#include "cotest/errors.hpp"

namespace cotest {

struct Label {
  int id = 0;  // dense 0..N-1
  std::string name;
};

// Prediction of a single hypothesis. Confidence is absent for learners that
// cannot estimate it, such as the decision tree.
struct Prediction {
  int label = 0;
  std::optional<double> confidence;
};

enum class ViewStrength { strong, weak };

struct View {
  int id = 0;
  ViewStrength strength = ViewStrength::strong;
  std::vector<FeatureId> features;  // sorted, disjoint across views
};

// Partition of the feature universe into views.
class ViewSpec {
 public:
  ViewSpec() = default;

  // Validates pairwise disjointness; the union defines the feature universe.
  static ViewSpec validated(std::vector<View> views) {
    ViewSpec spec;
    std::map<FeatureId, int> owner;
    for (View& v : views) {
      std::sort(v.features.begin(), v.features.end());
      v.features.erase(std::unique(v.features.begin(), v.features.end()), v.features.end());
      for (FeatureId f : v.features) {
        auto [it, inserted] = owner.emplace(f, v.id);
        if (!inserted)
          throw ConfigError("views not a partition: feature " + std::to_string(f) +
                            " assigned to views " + std::to_string(it->second) + " and " +
                            std::to_string(v.id));
      }
    }
    spec.views_ = std::move(views);
    spec.owner_ = std::move(owner);
    return spec;
  }

  const std::vector<View>& views() const { return views_; }
  std::size_t view_count() const { return views_.size(); }

  // Position of a view id within views().
  std::size_t index_of(int view_id) const {
    for (std::size_t i = 0; i < views_.size(); ++i)
      if (views_[i].id == view_id) return i;
    throw ContractError("unknown view id " + std::to_string(view_id));
  }

  std::vector<std::size_t> strong_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < views_.size(); ++i)
      if (views_[i].strength == ViewStrength::strong) out.push_back(i);
    return out;
  }

  std::optional<std::size_t> weak_index() const {
    for (std::size_t i = 0; i < views_.size(); ++i)
      if (views_[i].strength == ViewStrength::weak) return i;
    return std::nullopt;
  }

  // View position owning a feature, or nullopt if the feature is uncovered.
  std::optional<std::size_t> owner_view(FeatureId f) const {
    auto it = owner_.find(f);
    if (it == owner_.end()) return std::nullopt;
    return index_of(it->second);
  }

 private:
  std::vector<View> views_;
  std::map<FeatureId, int> owner_;  // feature -> view id
};

// One instance described once per view; label absent while in the unlabeled pool.
struct MultiViewExample {
  std::vector<FeatureVector> views;  // parallel to ViewSpec::views()
  std::optional<int> label;
};

// project: the stored description of an example in one view.
inline const FeatureVector& project(const MultiViewExample& x, const ViewSpec& spec, int view_id) {
  std::size_t idx = spec.index_of(view_id);
  return x.views[idx];
}

struct Dataset {
  std::vector<Label> labels;
  ViewSpec view_spec;
  std::vector<MultiViewExample> examples;

  int num_labels() const { return static_cast<int>(labels.size()); }

  int label_id(const std::string& name) const {
    for (const Label& l : labels)
      if (l.name == name) return l.id;
    throw ConfigError("unknown label '" + name + "'");
  }
};

namespace detail {

inline bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// "0-1499" or "3,7,12" or a single id.
inline void parse_feature_list(const std::string& tok, std::vector<FeatureId>& out,
                               const std::string& file, std::size_t lineno) {
  auto parse_id = [&](const std::string& s) -> FeatureId {
    try {
      std::size_t pos = 0;
      long v = std::stol(s, &pos);
      if (pos != s.size() || v < 0) throw std::invalid_argument(s);
      return static_cast<FeatureId>(v);
    } catch (const std::exception&) {
      throw ParseError(file, lineno, "bad feature id '" + s + "'");
    }
  };
  std::stringstream ss(tok);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto dash = part.find('-');
    if (dash != std::string::npos && dash > 0) {
      FeatureId lo = parse_id(part.substr(0, dash));
      FeatureId hi = parse_id(part.substr(dash + 1));
      if (hi < lo) throw ParseError(file, lineno, "bad feature range '" + part + "'");
      for (FeatureId f = lo; f <= hi; ++f) out.push_back(f);
    } else {
      out.push_back(parse_id(part));
    }
  }
}

}  // namespace detail

// Views file: one line per view, `view <id> strong|weak <feat-range-or-list>...`
inline ViewSpec load_view_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open views file " + path.string());
  std::vector<View> views;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    std::istringstream ss(line);
    std::string kw, strength;
    int id = 0;
    if (!(ss >> kw >> id >> strength) || kw != "view")
      throw ParseError(path.string(), lineno, "expected 'view <id> strong|weak <features>'");
    View v;
    v.id = id;
    if (strength == "strong")
      v.strength = ViewStrength::strong;
    else if (strength == "weak")
      v.strength = ViewStrength::weak;
    else
      throw ParseError(path.string(), lineno, "view strength must be strong|weak, got '" + strength + "'");
    std::string tok;
    while (ss >> tok) detail::parse_feature_list(tok, v.features, path.string(), lineno);
    if (v.features.empty()) throw ParseError(path.string(), lineno, "view has no features");
    views.push_back(std::move(v));
  }
  if (views.empty()) throw ConfigError("views file " + path.string() + " declares no views");
  return ViewSpec::validated(std::move(views));
}

// Example file: one example per line, `label feat:val feat:val ...`.
// `?` marks an unlabeled example; `#` starts a comment line.
inline Dataset load_dataset(const std::filesystem::path& data_path,
                            const std::filesystem::path& views_path) {
  Dataset ds;
  ds.view_spec = load_view_spec(views_path);

  std::ifstream in(data_path);
  if (!in) throw ConfigError("cannot open data file " + data_path.string());

  std::map<std::string, int> label_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    std::istringstream ss(line);
    std::string label_tok;
    if (!(ss >> label_tok)) continue;

    MultiViewExample ex;
    ex.views.assign(ds.view_spec.view_count(), FeatureVector{});
    if (label_tok != "?") {
      auto [it, inserted] = label_ids.emplace(label_tok, static_cast<int>(label_ids.size()));
      if (inserted) ds.labels.push_back({it->second, label_tok});
      ex.label = it->second;
    }

    std::string tok;
    while (ss >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError(data_path.string(), lineno, "expected feat:val, got '" + tok + "'");
      FeatureId f;
      double val;
      try {
        f = static_cast<FeatureId>(std::stoul(tok.substr(0, colon)));
        val = std::stod(tok.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError(data_path.string(), lineno, "bad feat:val '" + tok + "'");
      }
      if (val < 0.0)
        throw ParseError(data_path.string(), lineno,
                         "feature values must be nonnegative, got '" + tok + "'");
      auto view_idx = ds.view_spec.owner_view(f);
      if (!view_idx)
        throw ParseError(data_path.string(), lineno,
                         "views not a partition: feature " + std::to_string(f) +
                             " is not covered by any view");
      ex.views[*view_idx].add(f, val);
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

inline void save_dataset(const Dataset& ds, const std::filesystem::path& data_path,
                         const std::filesystem::path& views_path) {
  {
    std::ofstream out(views_path);
    if (!out) throw ConfigError("cannot write " + views_path.string());
    for (const View& v : ds.view_spec.views()) {
      out << "view " << v.id << ' '
          << (v.strength == ViewStrength::strong ? "strong" : "weak");
      // emit maximal runs as ranges
      std::size_t i = 0;
      while (i < v.features.size()) {
        std::size_t j = i;
        while (j + 1 < v.features.size() && v.features[j + 1] == v.features[j] + 1) ++j;
        out << ' ' << v.features[i];
        if (j > i) out << '-' << v.features[j];
        i = j + 1;
      }
      out << '\n';
    }
  }
  std::ofstream out(data_path);
  if (!out) throw ConfigError("cannot write " + data_path.string());
  for (const MultiViewExample& ex : ds.examples) {
    if (ex.label)
      out << ds.labels[static_cast<std::size_t>(*ex.label)].name;
    else
      out << '?';
    for (const FeatureVector& fv : ex.views)
      for (const auto& [f, val] : fv.entries()) {
        out << ' ' << f << ':';
        if (val == static_cast<long long>(val))
          out << static_cast<long long>(val);
        else
          out << val;
      }
    out << '\n';
  }
}

}  // namespace cotest
