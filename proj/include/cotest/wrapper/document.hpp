#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cotest/errors.hpp"
#include "cotest/wrapper/token.hpp"

namespace cotest::wrapper {

struct Document {
  std::string id;
  std::string raw;
  TokenStream tokens;
};

// A document whose item start is known. `target` is a token position in
// [0, tokens.size()].
struct LabeledDocument {
  Document doc;
  std::size_t target = 0;
};

struct WrapperTask {
  std::string item_name;
  std::vector<LabeledDocument> docs;
};

namespace detail {

inline std::string escape_field(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string unescape_field(const std::string& s, const std::string& file, std::size_t lineno) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 1 == s.size()) throw ParseError(file, lineno, "dangling escape");
    switch (s[++i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: throw ParseError(file, lineno, std::string("bad escape \\") + s[i]);
    }
  }
  return out;
}

}  // namespace detail

// Task file: header `item\t<name>`, then one record per line:
// `<doc-id>\t<escaped raw text>\t<target token index>`.
inline WrapperTask load_wrapper_task(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open wrapper task " + path.string());
  WrapperTask task;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    if (!header_seen) {
      if (line.substr(0, t1) != "item" || t1 == std::string::npos)
        throw ParseError(path.string(), lineno, "expected header 'item\\t<name>'");
      task.item_name = line.substr(t1 + 1);
      header_seen = true;
      continue;
    }
    auto t2 = line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos)
      throw ParseError(path.string(), lineno, "expected <id>\\t<text>\\t<index>");
    LabeledDocument d;
    d.doc.id = line.substr(0, t1);
    d.doc.raw = detail::unescape_field(line.substr(t1 + 1, t2 - t1 - 1), path.string(), lineno);
    d.doc.tokens = tokenize(d.doc.raw);
    try {
      d.target = std::stoul(line.substr(t2 + 1));
    } catch (const std::exception&) {
      throw ParseError(path.string(), lineno, "bad target index");
    }
    if (d.target > d.doc.tokens.size())
      throw ParseError(path.string(), lineno, "target index beyond token count");
    task.docs.push_back(std::move(d));
  }
  if (!header_seen) throw ConfigError("wrapper task " + path.string() + " is missing its header");
  return task;
}

inline void save_wrapper_task(const WrapperTask& task, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "item\t" << task.item_name << '\n';
  for (const LabeledDocument& d : task.docs)
    out << d.doc.id << '\t' << detail::escape_field(d.doc.raw) << '\t' << d.target << '\n';
}

// Detecting where an item ends is the same learning problem with the roles of
// the two context views swapped; this relabels each document's target to the
// item's end position so the ordinary machinery solves it.
template <typename EndOf>
WrapperTask relabel_targets(WrapperTask task, EndOf&& end_of) {
  for (LabeledDocument& d : task.docs) d.target = end_of(d);
  return task;
}

}  // namespace cotest::wrapper
