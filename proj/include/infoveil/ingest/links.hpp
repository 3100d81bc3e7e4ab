// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace infoveil::ingest {

struct Link {
  std::string url;
  std::string domain;

  bool operator==(const Link&) const = default;
};

/// Host of a URL or bare domain with scheme, credentials, port, path and a
/// leading "www." removed, lower-cased. Empty when the host is not a valid
/// dotted name.
inline std::string registrable_domain(std::string_view url) {
  std::string_view rest = url;
  if (auto scheme = rest.find("://"); scheme != std::string_view::npos) rest.remove_prefix(scheme + 3);
  auto end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, end);
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
  if (auto colon = authority.find(':'); colon != std::string_view::npos) authority = authority.substr(0, colon);
  std::string host(authority);
  for (auto& c : host)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.rfind("www.", 0) == 0) host.erase(0, 4);
  if (host.empty() || host.find('.') == std::string::npos || host.front() == '.' || host.front() == '-') return {};
  for (char c : host)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '-')) return {};
  if (host.find("..") != std::string::npos) return {};
  return host;
}

/// Absolute http(s) URLs found in free text, in order of appearance.
inline std::vector<Link> extract_links(std::string_view text) {
  static const std::regex url_re(R"(https?://[^\s<>"'\]\[{}|\\^`]+)", std::regex::icase);
  std::vector<Link> out;
  std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), url_re); it != std::sregex_iterator(); ++it) {
    std::string url = it->str();
    while (!url.empty() && std::string_view(".,;:!?)'\"").find(url.back()) != std::string_view::npos) url.pop_back();
    auto domain = registrable_domain(url);
    if (domain.empty()) continue;
    out.push_back(Link{std::move(url), std::move(domain)});
  }
  return out;
}

}  // namespace infoveil::ingest
