#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "cotest/core/dataset.hpp"
#include "cotest/rng.hpp"
#include "cotest/wrapper/cotesting.hpp"

namespace cotest {

// ---------------------------------------------------------------------------
// Synthetic multi-view classification tasks.
//
// Binary concept, bag-of-words views. Each view has `signal` indicative
// features and `noise` uninformative ones. Every description draws `tokens`
// words: with probability `redundancy` from the class's signal vocabulary,
// otherwise from the noise block. With probability `noise_rate` a view's
// description degrades to noise-block tokens only (the hyperlink-view
// failure: a view that says nothing about the instance), so the views
// occasionally contradict each other. Labels themselves are never corrupted.
//
// A `rare_rate` fraction of the instances belong to rare sub-concepts whose
// signal vocabulary is disjoint from the common one (the signal block splits
// into class x {common, rare} quarters). Each rare instance speaks a single
// rare word per view, so a learner must collect the whole rare vocabulary
// before it stops guessing on them; those instances are exactly where
// hypotheses trained in different views disagree, which is what separates
// query strategies.

struct SyntheticView {
  int signal = 20;
  int noise = 80;
  double redundancy = 0.7;
};

struct SyntheticClassSpec {
  std::vector<SyntheticView> views{{}, {}};
  int examples = 1000;
  double noise_rate = 0.05;
  double rare_rate = 0.0;
  int tokens = 8;  // words drawn per view description
  std::uint64_t seed = 1;
};

inline Dataset generate_synthetic_classification(const SyntheticClassSpec& spec) {
  if (spec.views.size() < 2) throw ConfigError("synthetic classification: need >= 2 views");
  if (spec.noise_rate < 0.0 || spec.noise_rate >= 0.5)
    throw ConfigError("synthetic classification: noise rate must be in [0, 0.5)");
  if (spec.examples < 1 || spec.tokens < 1)
    throw ConfigError("synthetic classification: bad size");
  if (spec.rare_rate < 0.0 || spec.rare_rate > 0.5)
    throw ConfigError("synthetic classification: rare rate must be in [0, 0.5]");
  for (const SyntheticView& v : spec.views) {
    int parts = spec.rare_rate > 0.0 ? 4 : 2;
    if (v.signal < parts || v.signal % parts != 0)
      throw ConfigError("synthetic classification: signal feature count must be a positive multiple of " +
                        std::to_string(parts));
    if (v.noise < 1) throw ConfigError("synthetic classification: need >= 1 noise feature per view");
    if (v.redundancy < 0.0 || v.redundancy > 1.0)
      throw ConfigError("synthetic classification: redundancy must be in [0, 1]");
  }

  Dataset ds;
  ds.labels = {{0, "pos"}, {1, "neg"}};
  std::vector<View> views;
  FeatureId base = 0;
  for (std::size_t v = 0; v < spec.views.size(); ++v) {
    View view;
    view.id = static_cast<int>(v + 1);
    view.strength = ViewStrength::strong;
    auto total = static_cast<FeatureId>(spec.views[v].signal + spec.views[v].noise);
    for (FeatureId f = 0; f < total; ++f) view.features.push_back(base + f);
    base += total;
    views.push_back(std::move(view));
  }
  ds.view_spec = ViewSpec::validated(std::move(views));

  Rng rng = Rng(spec.seed).derive("synth-class");
  for (int i = 0; i < spec.examples; ++i) {
    int label = rng.next_double() < 0.5 ? 0 : 1;
    bool rare = rng.next_double() < spec.rare_rate;
    MultiViewExample ex;
    ex.label = label;
    FeatureId offset = 0;
    for (const SyntheticView& v : spec.views) {
      bool degraded = rng.next_double() < spec.noise_rate;
      FeatureVector fv;
      // signal layout: [class0 common | class0 rare | class1 common | class1 rare]
      int quarter = spec.rare_rate > 0.0 ? v.signal / 4 : v.signal / 2;
      // rare instances carry one fixed rare word per view
      std::size_t rare_word = rng.next_below(static_cast<std::size_t>(quarter));
      for (int t = 0; t < spec.tokens; ++t) {
        FeatureId f;
        if (!degraded && rng.next_double() < v.redundancy) {
          int block = spec.rare_rate > 0.0 ? (label * 2 + (rare ? 1 : 0)) : label;
          std::size_t word = rare ? rare_word : rng.next_below(static_cast<std::size_t>(quarter));
          f = offset + static_cast<FeatureId>(block * quarter) + static_cast<FeatureId>(word);
        } else {
          f = offset + static_cast<FeatureId>(v.signal) +
              static_cast<FeatureId>(rng.next_below(static_cast<std::size_t>(v.noise)));
        }
        fv.add(f, 1.0);
      }
      ex.views.push_back(std::move(fv));
      offset += static_cast<FeatureId>(v.signal + v.noise);
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Synthetic wrapper-induction tasks.
//
// Restaurant-card documents with one labeled phone number, phone-shaped
// distractors the weak content view cannot tell apart, and optional
// structural features that defeat the shortcut rules a learner would
// otherwise induce from a couple of documents. Ambiguity modes:
//   none            every document has the same structure; both rules learn
//                   from 2 examples
//   prefix-variant  some documents replace the "Phone" marker, breaking the
//                   forward rule until it generalizes
//   hard            several independent rare features, each of which breaks
//                   one view's current rule: marker text variants and
//                   header blocks that mimic the marker context (forward),
//                   trailing fax blocks and section marker variants
//                   (backward)
//   mixed           a suite mixing the three modes

struct SyntheticWrapperSpec {
  int tasks = 20;
  int size = 100;       // documents per task
  int templates = 3;    // filler-vocabulary rotations
  int distractors = 2;  // phone-shaped distractor blocks on feature documents
  std::string ambiguity = "mixed";
  double variant_rate = 0.12;  // marker-variant rate per ambiguous dimension
  std::uint64_t seed = 1;
};

namespace detail {

inline const std::array<const char*, 8> kFirstNames = {"Joe",  "Maria", "Kim",  "Ana",
                                                       "Lee",  "Omar",  "Sara", "Ivan"};
inline const std::array<const char*, 6> kLastNames = {"Smith", "Chen",   "Lopez",
                                                      "Patel", "Novak", "Garcia"};
inline const std::array<const char*, 8> kCuisines = {"Mexican", "Thai",  "Italian", "French",
                                                     "Greek",   "Indian", "Seafood", "Basque"};
inline const std::array<const char*, 4> kRemarkWords = {"Summer", "Holiday", "Weekend", "Lunch"};
inline const std::array<const char*, 3> kPrefixVariants = {"Tel", "Contact", "Direct"};
inline const std::array<const char*, 3> kSuffixVariants = {"Category", "Style", "Genre"};
inline const std::array<const char*, 3> kTrailingLabels = {"Fax", "Office", "Cell"};

inline void push_phone(std::vector<std::string>& pieces, Rng& rng) {
  pieces.push_back("(");
  pieces.push_back(std::to_string(100 + rng.next_below(900)));
  pieces.push_back(")");
  pieces.push_back(std::to_string(100 + rng.next_below(900)));
  pieces.push_back("-");
  pieces.push_back(std::to_string(1000 + rng.next_below(9000)));
}

// per-document structural features
struct WrapperDocFeatures {
  bool remark = false;          // "( Summer Hours )" decoration before the item
  bool hours = false;           // "Hours : ( 9 to 5 )" decoration before the item
  bool prefix_variant = false;  // marker text other than "Phone"
  bool header = false;          // an "Info : <br> Where : ..." block that mimics
                                // the ": <br> Word :" context of the marker
  bool trailing = false;        // phone-shaped blocks after the section marker
  bool suffix_variant = false;  // section marker other than "Cuisine"
};

}  // namespace detail

inline wrapper::WrapperTask generate_wrapper_task(const SyntheticWrapperSpec& spec, int task_index,
                                                  const std::string& mode) {
  using namespace detail;
  if (spec.size < 4) throw ConfigError("synthetic wrapper: need >= 4 documents per task");
  if (spec.distractors < 1 || spec.distractors > 3)
    throw ConfigError("synthetic wrapper: distractors must be in [1, 3]");
  if (spec.variant_rate < 0.0 || spec.variant_rate > 0.5)
    throw ConfigError("synthetic wrapper: variant rate must be in [0, 0.5]");
  if (mode != "none" && mode != "prefix-variant" && mode != "hard")
    throw ConfigError("synthetic wrapper: unknown task mode '" + mode + "'");

  Rng rng = Rng(spec.seed).derive("synth-wrapper").derive(static_cast<std::uint64_t>(task_index));
  std::size_t vocab_shift = static_cast<std::size_t>(task_index) %
                            static_cast<std::size_t>(std::max(1, spec.templates));

  wrapper::WrapperTask task;
  task.item_name = "phone";
  for (int d = 0; d < spec.size; ++d) {
    WrapperDocFeatures f;
    if (mode == "prefix-variant") {
      f.remark = true;  // constant structure; only the marker text varies
      f.hours = true;
      f.prefix_variant = rng.next_double() < spec.variant_rate;
    } else if (mode == "hard") {
      f.remark = rng.next_double() < 0.15;
      f.hours = rng.next_double() < 0.12;
      f.prefix_variant = rng.next_double() < spec.variant_rate;
      f.header = rng.next_double() < spec.variant_rate;
      f.trailing = rng.next_double() < spec.variant_rate;
      f.suffix_variant = f.trailing && rng.next_double() < 0.5;
    }

    std::string pre = "Phone";
    std::string suf = "Cuisine";
    if (f.prefix_variant)
      pre = kPrefixVariants[(rng.next_below(kPrefixVariants.size()) + vocab_shift) %
                            kPrefixVariants.size()];
    if (f.suffix_variant)
      suf = kSuffixVariants[(rng.next_below(kSuffixVariants.size()) + vocab_shift) %
                            kSuffixVariants.size()];

    std::vector<std::string> pieces;
    pieces.emplace_back("<html>");
    pieces.emplace_back("Name");
    pieces.emplace_back(":");
    pieces.emplace_back(kFirstNames[(rng.next_below(kFirstNames.size()) + vocab_shift) %
                                    kFirstNames.size()]);
    pieces.emplace_back(kLastNames[rng.next_below(kLastNames.size())]);
    pieces.emplace_back("<br>");
    if (f.remark) {  // a parenthesized remark: no digits, not preceded by ':'
      pieces.emplace_back("(");
      pieces.emplace_back(kRemarkWords[rng.next_below(kRemarkWords.size())]);
      pieces.emplace_back("Hours");
      pieces.emplace_back(")");
      pieces.emplace_back("<br>");
    }
    if (f.hours) {  // an early ': (' context with no phone-shaped content
      pieces.emplace_back("Hours");
      pieces.emplace_back(":");
      pieces.emplace_back("(");
      pieces.emplace_back(std::to_string(7 + rng.next_below(3)));
      pieces.emplace_back("to");
      pieces.emplace_back(std::to_string(4 + rng.next_below(3)));
      pieces.emplace_back(")");
      pieces.emplace_back("<br>");
    }
    if (f.header) {  // reproduces the marker's ': <br> Word :' context
      pieces.emplace_back("Info");
      pieces.emplace_back(":");
      pieces.emplace_back("<br>");
      pieces.emplace_back("Where");
      pieces.emplace_back(":");
      pieces.emplace_back(kLastNames[rng.next_below(kLastNames.size())]);
      pieces.emplace_back("St");
      pieces.emplace_back("<br>");
    }
    pieces.emplace_back("Contacts");
    pieces.emplace_back(":");
    pieces.emplace_back("<br>");
    pieces.push_back(pre);
    pieces.emplace_back(":");
    std::size_t target = pieces.size();
    push_phone(pieces, rng);
    pieces.emplace_back("<br>");
    pieces.push_back(suf);
    pieces.emplace_back(":");
    pieces.emplace_back(kCuisines[(rng.next_below(kCuisines.size()) + vocab_shift) %
                                  kCuisines.size()]);
    pieces.emplace_back("<br>");
    if (f.trailing) {
      for (int k = 0; k < spec.distractors; ++k) {
        pieces.emplace_back(kTrailingLabels[static_cast<std::size_t>(k) % kTrailingLabels.size()]);
        pieces.emplace_back(":");
        push_phone(pieces, rng);
        pieces.emplace_back("<br>");
      }
    }
    pieces.emplace_back("</html>");

    wrapper::LabeledDocument doc;
    doc.doc.id = "d" + std::to_string(d);
    std::string raw;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (i) raw += ' ';
      raw += pieces[i];
    }
    doc.doc.raw = std::move(raw);
    doc.doc.tokens = wrapper::tokenize(doc.doc.raw);
    doc.target = target;
    task.docs.push_back(std::move(doc));
  }
  return task;
}

inline std::string wrapper_mode_for_task(const SyntheticWrapperSpec& spec, int task_index) {
  if (spec.ambiguity != "mixed") return spec.ambiguity;
  // suite mix: one trivially easy task and a few forward-ambiguous ones per
  // ten; the rest carry the full structural feature set
  int r = task_index % 10;
  if (r < 1) return "none";
  if (r < 3) return "prefix-variant";
  return "hard";
}

inline std::vector<wrapper::WrapperTask> generate_synthetic_wrapper(const SyntheticWrapperSpec& spec) {
  if (spec.tasks < 1) throw ConfigError("synthetic wrapper: need >= 1 task");
  if (spec.ambiguity != "mixed" && spec.ambiguity != "none" && spec.ambiguity != "prefix-variant" &&
      spec.ambiguity != "hard")
    throw ConfigError("synthetic wrapper: unknown ambiguity mode '" + spec.ambiguity + "'");
  std::vector<wrapper::WrapperTask> tasks;
  for (int t = 0; t < spec.tasks; ++t)
    tasks.push_back(generate_wrapper_task(spec, t, wrapper_mode_for_task(spec, t)));
  return tasks;
}

inline std::vector<std::filesystem::path> write_wrapper_suite(const SyntheticWrapperSpec& spec,
                                                              const std::filesystem::path& outdir) {
  std::filesystem::create_directories(outdir);
  auto tasks = generate_synthetic_wrapper(spec);
  std::vector<std::filesystem::path> paths;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "task_%02zu.tsv", t);
    std::filesystem::path p = outdir / name;
    wrapper::save_wrapper_task(tasks[t], p);
    paths.push_back(p);
  }
  return paths;
}

}  // namespace cotest
