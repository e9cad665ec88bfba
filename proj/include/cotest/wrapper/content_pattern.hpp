#pragma once

#include <span>

#include "cotest/errors.hpp"
#include "cotest/wrapper/rule_learning.hpp"

namespace cotest::wrapper {

// The weak content view: a prototype of the item itself, learned from
// positive examples only. Deliberately more general than the target concept
// (it cannot tell a home number from a fax number), which is exactly what
// makes it a weak view.
struct ContentPattern {
  std::size_t min_len = 0, max_len = 0;  // in tokens
  std::uint8_t allowed_classes = 0;      // union of observed class bits
  Landmark start_pattern;                // at most kContentPatternLen matchers
  Landmark end_pattern;
};

inline constexpr std::size_t kContentPatternLen = 3;
inline constexpr int kViolationFamilies = 4;

// Length range, allowed token classes, and the longest common start/end
// matcher patterns (literal where the texts agree, the most specific shared
// class otherwise, cut at the first position with no common matcher).
inline ContentPattern learn_content_pattern(std::span<const std::vector<Token>> positives) {
  if (positives.empty()) throw ContractError("learn_content_pattern: no positive examples");
  ContentPattern pat;
  pat.min_len = positives[0].size();
  pat.max_len = positives[0].size();
  for (const auto& p : positives) {
    pat.min_len = std::min(pat.min_len, p.size());
    pat.max_len = std::max(pat.max_len, p.size());
    for (const Token& t : p) pat.allowed_classes |= t.classes;
  }
  std::size_t cap = std::min(pat.min_len, kContentPatternLen);
  for (std::size_t j = 0; j < cap; ++j) {
    std::vector<const Token*> slot;
    for (const auto& p : positives) slot.push_back(&p[j]);
    auto m = detail::unify_tokens(slot);
    if (!m) break;
    pat.start_pattern.push_back(*m);
  }
  for (std::size_t j = 0; j < cap; ++j) {
    std::vector<const Token*> slot;
    for (const auto& p : positives) slot.push_back(&p[p.size() - 1 - j]);
    auto m = detail::unify_tokens(slot);
    if (!m) break;
    pat.end_pattern.insert(pat.end_pattern.begin(), *m);
  }
  return pat;
}

// Number of violated constraint families (0..4): length range, token classes,
// start pattern, end pattern. An abstention violates all four.
inline int violations(const ContentPattern& pat, const std::vector<Token>* item) {
  if (item == nullptr) return kViolationFamilies;
  const std::vector<Token>& s = *item;
  int v = 0;
  if (s.size() < pat.min_len || s.size() > pat.max_len) ++v;
  bool classes_ok = true;
  for (const Token& t : s)
    if ((t.classes & ~pat.allowed_classes) != 0) classes_ok = false;
  if (!classes_ok) ++v;
  bool start_ok = s.size() >= pat.start_pattern.size();
  for (std::size_t j = 0; start_ok && j < pat.start_pattern.size(); ++j)
    start_ok = pat.start_pattern[j].matches(s[j]);
  if (!start_ok) ++v;
  bool end_ok = s.size() >= pat.end_pattern.size();
  for (std::size_t j = 0; end_ok && j < pat.end_pattern.size(); ++j)
    end_ok = pat.end_pattern[pat.end_pattern.size() - 1 - j].matches(s[s.size() - 1 - j]);
  if (!end_ok) ++v;
  return v;
}

}  // namespace cotest::wrapper
