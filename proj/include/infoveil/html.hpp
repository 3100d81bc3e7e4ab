// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infoveil/error.hpp"
#include "infoveil/unicode.hpp"

// A lenient HTML reader and a small CSS-like selector matcher, enough to
// drive declarative site adapters over scraped page dumps.

namespace infoveil::html {

struct Node {
  std::string tag;  // lower case; empty for text nodes
  std::vector<std::pair<std::string, std::string>> attrs;
  std::string text;  // text nodes only, entities decoded
  std::size_t parent = 0;
  std::vector<std::size_t> children;

  bool is_text() const { return tag.empty(); }

  const std::string* attr(std::string_view name) const {
    for (const auto& [k, v] : attrs)
      if (k == name) return &v;
    return nullptr;
  }

  bool has_class(std::string_view cls) const {
    auto value = attr("class");
    if (!value) return false;
    std::string_view rest = *value;
    while (!rest.empty()) {
      auto start = rest.find_first_not_of(" \t\n\r");
      if (start == std::string_view::npos) break;
      rest.remove_prefix(start);
      auto end = rest.find_first_of(" \t\n\r");
      if (rest.substr(0, end) == cls) return true;
      if (end == std::string_view::npos) break;
      rest.remove_prefix(end);
    }
    return false;
  }
};

/// Node 0 is a synthetic document root.
struct Document {
  std::vector<Node> nodes;

  const Node& node(std::size_t i) const { return nodes[i]; }

  /// Whitespace-collapsed text of a node and its descendants.
  std::string text_of(std::size_t i) const {
    std::string raw;
    collect(i, raw);
    std::string out;
    bool space = false;
    for (char c : raw) {
      if (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
        space = !out.empty();
      } else {
        if (space) out.push_back(' ');
        space = false;
        out.push_back(c);
      }
    }
    return out;
  }

private:
  void collect(std::size_t i, std::string& out) const {
    const auto& n = nodes[i];
    if (n.is_text()) {
      out += n.text;
      return;
    }
    if (n.tag == "br" || n.tag == "p" || n.tag == "div" || n.tag == "li") out.push_back(' ');
    for (auto c : n.children) collect(c, out);
    if (n.tag == "p" || n.tag == "div" || n.tag == "li") out.push_back(' ');
  }
};

namespace detail {

inline bool is_void(std::string_view tag) {
  static constexpr std::string_view voids[] = {"area", "base", "br", "col", "embed", "hr", "img",
                                               "input", "link", "meta", "param", "source", "track", "wbr"};
  return std::find(std::begin(voids), std::end(voids), tag) != std::end(voids);
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  return out;
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

}  // namespace detail

/// Decodes the common named entities and numeric character references.
inline std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    auto name = s.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    static constexpr std::pair<std::string_view, char32_t> named[] = {
        {"amp", U'&'},     {"lt", U'<'},       {"gt", U'>'},      {"quot", U'"'},    {"apos", U'\''},
        {"nbsp", U' '},    {"pound", 0xA3},    {"euro", 0x20AC},  {"yen", 0xA5},     {"cent", 0xA2},
        {"copy", 0xA9},    {"reg", 0xAE},      {"trade", 0x2122}, {"deg", 0xB0},     {"micro", 0xB5},
        {"middot", 0xB7},  {"times", 0xD7},    {"hellip", 0x2026}, {"mdash", 0x2014}, {"ndash", 0x2013},
        {"lsquo", 0x2018}, {"rsquo", 0x2019},  {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"laquo", 0xAB},
        {"raquo", 0xBB},   {"bull", 0x2022},   {"alpha", 0x3B1},  {"beta", 0x3B2},   {"mu", 0x3BC}};
    for (const auto& [n, c] : named)
      if (name == n) cp = c;
    if (!cp && name.size() > 1 && name[0] == '#') {
      std::uint32_t v = 0;
      bool ok = true;
      bool hex = name[1] == 'x' || name[1] == 'X';
      for (std::size_t k = hex ? 2 : 1; k < name.size(); ++k) {
        char c = name[k];
        int d = -1;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        if (d < 0 || v > 0x10FFFF) {
          ok = false;
          break;
        }
        v = v * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
      }
      if (ok && v > 0 && v <= 0x10FFFF) cp = static_cast<char32_t>(v);
    }
    if (!cp) {
      out.push_back(s[i++]);
      continue;
    }
    unicode::append_utf8(out, *cp);
    i = semi + 1;
  }
  return out;
}

/// Parses markup into a tree. Mismatched end tags are tolerated; an
/// unterminated tag or comment at end of input raises MalformedPage.
inline Document parse(std::string_view src) {
  Document doc;
  doc.nodes.push_back(Node{"#document", {}, {}, 0, {}});
  std::vector<std::size_t> open{0};
  auto add = [&](Node n) {
    n.parent = open.back();
    doc.nodes.push_back(std::move(n));
    auto idx = doc.nodes.size() - 1;
    doc.nodes[open.back()].children.push_back(idx);
    return idx;
  };
  auto add_text = [&](std::string_view raw) {
    if (raw.empty()) return;
    Node t;
    t.text = decode_entities(raw);
    add(std::move(t));
  };

  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    auto lt = src.find('<', i);
    if (lt == std::string_view::npos) {
      add_text(src.substr(i));
      break;
    }
    add_text(src.substr(i, lt - i));
    i = lt;
    if (src.compare(i, 4, "<!--") == 0) {
      auto end = src.find("-->", i + 4);
      if (end == std::string_view::npos) throw Error(ErrorCode::malformed_page, "unterminated comment");
      i = end + 3;
      continue;
    }
    if (i + 1 < n && (src[i + 1] == '!' || src[i + 1] == '?')) {
      auto end = src.find('>', i);
      if (end == std::string_view::npos) throw Error(ErrorCode::malformed_page, "unterminated declaration");
      i = end + 1;
      continue;
    }
    bool closing = i + 1 < n && src[i + 1] == '/';
    std::size_t p = i + (closing ? 2 : 1);
    std::size_t name_start = p;
    while (p < n && (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '-' || src[p] == ':')) ++p;
    if (p == name_start) {
      // A bare '<' in text.
      add_text(src.substr(i, 1));
      ++i;
      continue;
    }
    std::string tag = detail::lower(src.substr(name_start, p - name_start));
    Node el;
    el.tag = tag;
    bool self_closing = false;
    // Attributes.
    while (true) {
      while (p < n && detail::is_space(src[p])) ++p;
      if (p >= n) throw Error(ErrorCode::malformed_page, "unterminated <" + tag + "> tag");
      if (src[p] == '>') {
        ++p;
        break;
      }
      if (src[p] == '/' && p + 1 < n && src[p + 1] == '>') {
        self_closing = true;
        p += 2;
        break;
      }
      std::size_t an = p;
      while (p < n && !detail::is_space(src[p]) && src[p] != '=' && src[p] != '>' && src[p] != '/') ++p;
      if (p == an) {
        ++p;
        continue;
      }
      std::string name = detail::lower(src.substr(an, p - an));
      std::string value;
      while (p < n && detail::is_space(src[p])) ++p;
      if (p < n && src[p] == '=') {
        ++p;
        while (p < n && detail::is_space(src[p])) ++p;
        if (p < n && (src[p] == '"' || src[p] == '\'')) {
          char q = src[p++];
          auto end = src.find(q, p);
          if (end == std::string_view::npos) throw Error(ErrorCode::malformed_page, "unterminated attribute value");
          value = decode_entities(src.substr(p, end - p));
          p = end + 1;
        } else {
          std::size_t vs = p;
          while (p < n && !detail::is_space(src[p]) && src[p] != '>') ++p;
          value = decode_entities(src.substr(vs, p - vs));
        }
      }
      el.attrs.emplace_back(std::move(name), std::move(value));
    }
    i = p;
    if (closing) {
      auto it = std::find_if(open.rbegin(), open.rend(), [&](auto idx) { return doc.nodes[idx].tag == tag; });
      if (it != open.rend() && *it != 0) open.erase(std::next(it).base(), open.end());
      continue;
    }
    auto idx = add(std::move(el));
    if (tag == "script" || tag == "style") {
      auto end = src.find("</" + tag, i);
      if (end == std::string_view::npos) throw Error(ErrorCode::malformed_page, "unterminated <" + tag + ">");
      auto gt = src.find('>', end);
      i = gt == std::string_view::npos ? n : gt + 1;
      continue;
    }
    if (!self_closing && !detail::is_void(tag)) open.push_back(idx);
  }
  return doc;
}

/// One compound selector: tag, #id, .class and [attr] / [attr=value] parts.
struct Compound {
  std::string tag;
  std::string id;
  std::vector<std::string> classes;
  std::vector<std::pair<std::string, std::optional<std::string>>> attrs;

  bool matches(const Node& n) const {
    if (n.is_text() || n.tag == "#document") return false;
    if (!tag.empty() && tag != "*" && n.tag != tag) return false;
    if (!id.empty()) {
      auto v = n.attr("id");
      if (!v || *v != id) return false;
    }
    for (const auto& c : classes)
      if (!n.has_class(c)) return false;
    for (const auto& [name, value] : attrs) {
      auto v = n.attr(name);
      if (!v || (value && *v != *value)) return false;
    }
    return true;
  }
};

/// Descendant-combinator chain of compounds, e.g. "div.post span[data-t]".
class Selector {
public:
  Selector() = default;
  explicit Selector(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && detail::is_space(text[i])) ++i;
      if (i >= text.size()) break;
      Compound c;
      auto read_ident = [&] {
        std::size_t s = i;
        while (i < text.size() && !detail::is_space(text[i]) && text[i] != '.' && text[i] != '#' && text[i] != '[')
          ++i;
        return std::string(text.substr(s, i - s));
      };
      if (text[i] != '.' && text[i] != '#' && text[i] != '[') c.tag = detail::lower(read_ident());
      while (i < text.size() && !detail::is_space(text[i])) {
        char k = text[i++];
        if (k == '.') {
          c.classes.push_back(read_ident());
        } else if (k == '#') {
          c.id = read_ident();
        } else if (k == '[') {
          auto close = text.find(']', i);
          if (close == std::string_view::npos) throw Error(ErrorCode::validation, "bad selector '" + std::string(text) + "'");
          auto body = text.substr(i, close - i);
          auto eq = body.find('=');
          if (eq == std::string_view::npos) {
            c.attrs.emplace_back(detail::lower(body), std::nullopt);
          } else {
            auto v = body.substr(eq + 1);
            if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
              v = v.substr(1, v.size() - 2);
            c.attrs.emplace_back(detail::lower(body.substr(0, eq)), std::string(v));
          }
          i = close + 1;
        } else {
          throw Error(ErrorCode::validation, "bad selector '" + std::string(text) + "'");
        }
      }
      parts_.push_back(std::move(c));
    }
    if (parts_.empty()) throw Error(ErrorCode::validation, "empty selector");
  }

  bool empty() const { return parts_.empty(); }

  /// Elements under `scope` (exclusive) matching the whole chain, in
  /// document order.
  std::vector<std::size_t> select(const Document& doc, std::size_t scope = 0) const {
    std::vector<std::size_t> out;
    walk(doc, scope, out);
    return out;
  }

  std::optional<std::size_t> first(const Document& doc, std::size_t scope = 0) const {
    auto all = select(doc, scope);
    if (all.empty()) return std::nullopt;
    return all.front();
  }

private:
  void walk(const Document& doc, std::size_t at, std::vector<std::size_t>& out) const {
    for (auto c : doc.node(at).children) {
      if (matches_chain(doc, c)) out.push_back(c);
      walk(doc, c, out);
    }
  }

  bool matches_chain(const Document& doc, std::size_t idx) const {
    if (!parts_.back().matches(doc.node(idx))) return false;
    std::size_t cur = idx;
    for (std::size_t k = parts_.size() - 1; k-- > 0;) {
      bool found = false;
      while (cur != 0) {
        cur = doc.node(cur).parent;
        if (parts_[k].matches(doc.node(cur))) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  std::vector<Compound> parts_;
};

}  // namespace infoveil::html
