#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cotest::wrapper {

enum class TokenClass : std::uint8_t {
  Number = 0,
  AllCaps,
  Capitalized,
  AlphaNum,
  HtmlTag,
  Punctuation,
  Whitespace,
};

inline constexpr int kTokenClassCount = 7;

inline std::uint8_t class_bit(TokenClass c) { return static_cast<std::uint8_t>(1u << static_cast<int>(c)); }

inline const char* class_name(TokenClass c) {
  switch (c) {
    case TokenClass::Number: return "Number";
    case TokenClass::AllCaps: return "AllCaps";
    case TokenClass::Capitalized: return "Capitalized";
    case TokenClass::AlphaNum: return "AlphaNum";
    case TokenClass::HtmlTag: return "HtmlTag";
    case TokenClass::Punctuation: return "Punctuation";
    case TokenClass::Whitespace: return "Whitespace";
  }
  return "?";
}

struct Token {
  std::string text;
  std::uint8_t classes = 0;  // bitmask of TokenClass

  bool has(TokenClass c) const { return (classes & class_bit(c)) != 0; }
};

inline std::uint8_t classify(std::string_view text) {
  if (text.empty()) return 0;
  if (text.front() == '<' && text.back() == '>' && text.size() >= 2)
    return class_bit(TokenClass::HtmlTag);

  bool all_digit = true, all_alpha = true, all_alnum = true, all_upper = true, all_space = true;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (!std::isdigit(c)) all_digit = false;
    if (!std::isalpha(c)) all_alpha = false;
    if (!std::isalnum(c)) all_alnum = false;
    if (!std::isupper(c)) all_upper = false;
    if (!std::isspace(c)) all_space = false;
  }
  std::uint8_t bits = 0;
  if (all_space) return class_bit(TokenClass::Whitespace);
  if (all_alnum) bits |= class_bit(TokenClass::AlphaNum);
  if (all_digit) bits |= class_bit(TokenClass::Number);
  if (all_alpha && all_upper) bits |= class_bit(TokenClass::AllCaps);
  if (std::isupper(static_cast<unsigned char>(text.front())) && all_alnum)
    bits |= class_bit(TokenClass::Capitalized);
  if (text.size() == 1 && std::ispunct(static_cast<unsigned char>(text.front())))
    bits |= class_bit(TokenClass::Punctuation);
  if (bits == 0) bits = class_bit(TokenClass::Punctuation);  // multi-char symbol runs
  return bits;
}

// Token sequence plus the whitespace between tokens, so the raw text
// round-trips exactly: gaps[0] + t0 + gaps[1] + t1 + ... + gaps[n].
struct TokenStream {
  std::vector<Token> tokens;
  std::vector<std::string> gaps;  // size tokens.size() + 1

  std::size_t size() const { return tokens.size(); }
};

// Split on whitespace and punctuation boundaries. Alphanumeric runs form one
// token, every other printable character is its own token, and `<...>`
// sequences form single HtmlTag tokens.
inline TokenStream tokenize(std::string_view raw) {
  TokenStream ts;
  std::string gap;
  std::size_t i = 0;
  auto push = [&](std::string text) {
    ts.gaps.push_back(gap);
    gap.clear();
    Token t;
    t.classes = classify(text);
    t.text = std::move(text);
    ts.tokens.push_back(std::move(t));
  };
  while (i < raw.size()) {
    auto c = static_cast<unsigned char>(raw[i]);
    if (std::isspace(c)) {
      gap.push_back(raw[i]);
      ++i;
    } else if (raw[i] == '<') {
      std::size_t close = raw.find('>', i + 1);
      if (close != std::string_view::npos) {
        push(std::string(raw.substr(i, close - i + 1)));
        i = close + 1;
      } else {
        push("<");
        ++i;
      }
    } else if (std::isalnum(c)) {
      std::size_t j = i;
      while (j < raw.size() && std::isalnum(static_cast<unsigned char>(raw[j]))) ++j;
      push(std::string(raw.substr(i, j - i)));
      i = j;
    } else {
      push(std::string(1, raw[i]));
      ++i;
    }
  }
  ts.gaps.push_back(gap);
  return ts;
}

inline std::string reassemble(const TokenStream& ts) {
  std::string out = ts.gaps.empty() ? std::string{} : ts.gaps[0];
  for (std::size_t i = 0; i < ts.tokens.size(); ++i) {
    out += ts.tokens[i].text;
    out += ts.gaps[i + 1];
  }
  return out;
}

}  // namespace cotest::wrapper
