#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cotest/wrapper/document.hpp"

namespace cotest::wrapper {

// A single token matcher: an exact literal or a token-class wildcard.
struct Matcher {
  bool is_wildcard = false;
  std::string literal;
  TokenClass wildcard = TokenClass::AlphaNum;

  static Matcher lit(std::string text) { return {false, std::move(text), TokenClass::AlphaNum}; }
  static Matcher wild(TokenClass c) { return {true, {}, c}; }

  bool matches(const Token& t) const { return is_wildcard ? t.has(wildcard) : t.text == literal; }

  std::string describe() const { return is_wildcard ? std::string(class_name(wildcard)) : "'" + literal + "'"; }
};

using Landmark = std::vector<Matcher>;

enum class RuleDirection { forward, backward };

// A directional landmark chain. Forward rules scan from the document start;
// each landmark consumes tokens up to and including its first occurrence, and
// the extraction index is the position right after the final landmark.
// Backward rules scan from the document end; each landmark consumes tokens
// back to its nearest occurrence, and the extraction index is the position
// where the final landmark starts.
struct LandmarkRule {
  RuleDirection direction = RuleDirection::forward;
  std::vector<Landmark> landmarks;

  std::string describe() const {
    std::ostringstream out;
    for (const Landmark& lm : landmarks) {
      out << (direction == RuleDirection::forward ? "SkipTo(" : "BackTo(");
      for (std::size_t i = 0; i < lm.size(); ++i) out << (i ? " " : "") << lm[i].describe();
      out << ") ";
    }
    return out.str();
  }
};

// Extraction result; absence of the index means the rule abstained (some
// landmark was not found).
struct ExtractionPrediction {
  std::optional<std::size_t> index;
  std::string extracted;  // item text under the extent convention, "" on abstention
};

namespace detail {

inline bool match_at(const TokenStream& ts, std::size_t pos, const Landmark& lm) {
  if (pos + lm.size() > ts.size()) return false;
  for (std::size_t i = 0; i < lm.size(); ++i)
    if (!lm[i].matches(ts.tokens[pos + i])) return false;
  return true;
}

}  // namespace detail

// Item extent convention: an item runs from its start index up to (excluding)
// the next HtmlTag token, or to the end of the document. Wrapper pages
// delimit items with markup, and the task format only labels starts.
inline std::size_t item_end(const TokenStream& ts, std::size_t start) {
  std::size_t end = start;
  while (end < ts.size() && !ts.tokens[end].has(TokenClass::HtmlTag)) ++end;
  return end;
}

inline std::vector<Token> item_tokens(const TokenStream& ts, std::size_t start) {
  return {ts.tokens.begin() + static_cast<std::ptrdiff_t>(start),
          ts.tokens.begin() + static_cast<std::ptrdiff_t>(item_end(ts, start))};
}

inline std::string item_text(const TokenStream& ts, std::size_t start) {
  std::string out;
  for (std::size_t i = start; i < item_end(ts, start); ++i) {
    if (!out.empty()) out += ' ';
    out += ts.tokens[i].text;
  }
  return out;
}

inline ExtractionPrediction apply_rule(const LandmarkRule& rule, const Document& doc) {
  const TokenStream& ts = doc.tokens;
  if (rule.direction == RuleDirection::forward) {
    std::size_t cursor = 0;
    for (const Landmark& lm : rule.landmarks) {
      bool found = false;
      for (std::size_t p = cursor; p + lm.size() <= ts.size(); ++p)
        if (detail::match_at(ts, p, lm)) {
          cursor = p + lm.size();
          found = true;
          break;
        }
      if (!found) return {};
    }
    return {cursor, item_text(ts, cursor)};
  }
  // backward: the next landmark must end at or before the current cursor
  std::size_t cursor = ts.size();
  std::size_t start = 0;
  for (const Landmark& lm : rule.landmarks) {
    if (lm.size() > cursor) return {};
    bool found = false;
    for (std::size_t p = cursor - lm.size() + 1; p-- > 0;)
      if (detail::match_at(ts, p, lm)) {
        cursor = p;
        start = p;
        found = true;
        break;
      }
    if (!found) return {};
  }
  return {start, item_text(ts, start)};
}

}  // namespace cotest::wrapper
