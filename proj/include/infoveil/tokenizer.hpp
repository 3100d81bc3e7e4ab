// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "infoveil/unicode.hpp"

namespace infoveil {

namespace detail {
inline constexpr bool is_hyphen(char32_t c) { return c == U'-' || c == 0x2010 || c == 0x2011; }
}  // namespace detail

/// Splits text into case-folded tokens.
///
/// A token is a maximal run of Unicode letters and digits, where runs may be
/// joined by a single hyphen that has an alphanumeric on both sides
/// ("1P-LSD", "α-PVP"). Tokens shorter than two code points and tokens made
/// only of digits and hyphens are dropped.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::u32string cps = unicode::decode(text);
  std::size_t i = 0;
  const std::size_t n = cps.size();
  std::u32string current;
  while (i < n) {
    if (!unicode::is_alnum(cps[i])) {
      ++i;
      continue;
    }
    current.clear();
    bool has_letter = false;
    while (i < n) {
      char32_t c = cps[i];
      if (unicode::is_alnum(c)) {
        has_letter = has_letter || unicode::is_letter(c);
        current.push_back(unicode::fold(c));
        ++i;
      } else if (detail::is_hyphen(c) && i + 1 < n && unicode::is_alnum(cps[i + 1])) {
        current.push_back(U'-');
        ++i;
      } else {
        break;
      }
    }
    if (current.size() >= 2 && has_letter) tokens.push_back(unicode::encode(current));
  }
  return tokens;
}

/// Distinct tokens of `text`, sorted.
inline std::vector<std::string> token_set(std::string_view text) {
  auto tokens = tokenize(text);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

/// Normalises a single user-supplied term to its token form, or returns an
/// empty string if the term does not form exactly one token.
inline std::string normalize_term(std::string_view term) {
  auto tokens = tokenize(term);
  return tokens.size() == 1 ? tokens.front() : std::string{};
}

}  // namespace infoveil
