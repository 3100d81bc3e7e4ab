// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <httplib.h>

#include "infoveil/ingest/fetch.hpp"

namespace infoveil::service {

/// Network fetcher for opt-in live runs. HTTPS needs a build with
/// CPPHTTPLIB_OPENSSL_SUPPORT.
inline ingest::Fetcher http_fetcher(std::string user_agent = "infoveil/1.0 (research monitoring)") {
  return [user_agent](const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return ingest::FetchResult{false, {}, "not an absolute url"};
    auto path_start = url.find('/', scheme_end + 3);
    std::string origin = url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    try {
      httplib::Client client(origin);
      client.set_follow_location(true);
      client.set_connection_timeout(10);
      client.set_read_timeout(30);
      auto res = client.Get(path, httplib::Headers{{"User-Agent", user_agent}});
      if (!res) return ingest::FetchResult{false, {}, httplib::to_string(res.error())};
      if (res->status != 200) return ingest::FetchResult{false, {}, "HTTP " + std::to_string(res->status)};
      return ingest::FetchResult{true, res->body, {}};
    } catch (const std::exception& e) {
      return ingest::FetchResult{false, {}, e.what()};
    }
  };
}

}  // namespace infoveil::service
