#pragma once

#include <array>
#include <span>

#include "cotest/errors.hpp"
#include "cotest/wrapper/rule.hpp"

namespace cotest::wrapper {

namespace detail {

// Generalization order: literal, then the most specific shared token class.
inline constexpr std::array<TokenClass, kTokenClassCount> kClassPriority = {
    TokenClass::HtmlTag,     TokenClass::Number,      TokenClass::AllCaps,
    TokenClass::Capitalized, TokenClass::AlphaNum,    TokenClass::Punctuation,
    TokenClass::Whitespace,
};

inline std::optional<Matcher> unify_tokens(std::span<const Token* const> tokens) {
  bool same_text = true;
  for (std::size_t i = 1; i < tokens.size(); ++i)
    if (tokens[i]->text != tokens[0]->text) {
      same_text = false;
      break;
    }
  if (same_text) return Matcher::lit(tokens[0]->text);
  std::uint8_t shared = 0xFF;
  for (const Token* t : tokens) shared &= t->classes;
  for (TokenClass c : kClassPriority)
    if (shared & class_bit(c)) return Matcher::wild(c);
  return std::nullopt;
}

inline Matcher most_specific_wildcard(const Token& t) {
  for (TokenClass c : kClassPriority)
    if (t.has(c)) return Matcher::wild(c);
  return Matcher::wild(TokenClass::Punctuation);
}

inline bool rule_consistent(const LandmarkRule& rule, std::span<const LabeledDocument> docs) {
  for (const LabeledDocument& d : docs) {
    ExtractionPrediction p = apply_rule(rule, d.doc);
    if (!p.index || *p.index != d.target) return false;
  }
  return true;
}

// The landmark adjacent to the target, unified across all docs: for forward
// rules the `len` tokens ending at the target, for backward rules the `len`
// tokens starting at it. Empty when some doc lacks room or some slot has no
// common matcher.
inline std::optional<Landmark> unified_adjacent(std::span<const LabeledDocument> docs,
                                                RuleDirection dir, std::size_t len) {
  Landmark lm;
  for (std::size_t j = 0; j < len; ++j) {
    std::vector<const Token*> slot;
    slot.reserve(docs.size());
    for (const LabeledDocument& d : docs) {
      std::size_t n = d.doc.tokens.size();
      if (dir == RuleDirection::forward) {
        if (d.target < len) return std::nullopt;
        slot.push_back(&d.doc.tokens.tokens[d.target - len + j]);
      } else {
        if (d.target + len > n) return std::nullopt;
        slot.push_back(&d.doc.tokens.tokens[d.target + j]);
      }
    }
    auto m = unify_tokens(slot);
    if (!m) return std::nullopt;
    lm.push_back(*m);
  }
  return lm;
}

}  // namespace detail

inline constexpr std::size_t kMaxLandmarkLen = 4;

// Greedy landmark-rule induction over single-chain rules of at most two
// landmarks. The final landmark is the window adjacent to the extraction
// point, unified across the training documents (literal where the texts
// agree, the most specific shared token class otherwise); window lengths are
// tried shortest first. When no adjacent window alone extracts correctly
// everywhere, a disambiguating landmark taken from the first document's
// context is prepended, nearest window first, literal before generalized.
// The returned rule extracts the labeled index on every training document.
inline LandmarkRule learn_rule(std::span<const LabeledDocument> docs, RuleDirection dir) {
  if (docs.empty()) throw ContractError("learn_rule: no training documents");

  std::vector<std::pair<std::size_t, Landmark>> finals;  // (len, landmark)
  for (std::size_t len = 1; len <= kMaxLandmarkLen; ++len)
    if (auto lm = detail::unified_adjacent(docs, dir, len)) finals.push_back({len, std::move(*lm)});

  for (const auto& [len, lm] : finals) {
    LandmarkRule rule{dir, {lm}};
    if (detail::rule_consistent(rule, docs)) return rule;
  }

  // two-landmark chains, most specific final landmark first
  const LabeledDocument& seed = docs[0];
  const TokenStream& ts = seed.doc.tokens;
  std::size_t budget = 4000;
  for (auto it = finals.rbegin(); it != finals.rend(); ++it) {
    const auto& [len_f, final_lm] = *it;
    for (std::size_t plen = 1; plen <= 3; ++plen) {
      if (dir == RuleDirection::forward) {
        if (seed.target < len_f + plen) continue;
        for (std::size_t s = seed.target - len_f - plen + 1; s-- > 0;) {
          for (bool generalized : {false, true}) {
            Landmark pre;
            for (std::size_t j = 0; j < plen; ++j)
              pre.push_back(generalized ? detail::most_specific_wildcard(ts.tokens[s + j])
                                        : Matcher::lit(ts.tokens[s + j].text));
            LandmarkRule rule{dir, {pre, final_lm}};
            if (detail::rule_consistent(rule, docs)) return rule;
            if (--budget == 0) goto give_up;
          }
        }
      } else {
        for (std::size_t s = seed.target + len_f; s + plen <= ts.size(); ++s) {
          for (bool generalized : {false, true}) {
            Landmark pre;
            for (std::size_t j = 0; j < plen; ++j)
              pre.push_back(generalized ? detail::most_specific_wildcard(ts.tokens[s + j])
                                        : Matcher::lit(ts.tokens[s + j].text));
            LandmarkRule rule{dir, {pre, final_lm}};
            if (detail::rule_consistent(rule, docs)) return rule;
            if (--budget == 0) goto give_up;
          }
        }
      }
    }
  }
give_up:
  throw ContractError(
      "inconsistent training set: no rule in the hypothesis space extracts the labeled index on "
      "every training document (" +
      std::string(dir == RuleDirection::forward ? "forward" : "backward") + " view)");
}

}  // namespace cotest::wrapper
