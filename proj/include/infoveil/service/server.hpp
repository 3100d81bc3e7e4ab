// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <csignal>
#include <functional>
#include <iostream>
#include <thread>

#include <httplib.h>

#include "infoveil/service/api.hpp"

namespace infoveil::service {

inline std::atomic<bool>& reload_requested() {
  static std::atomic<bool> flag{false};
  return flag;
}

/// Serves the API over HTTP until stopped. SIGHUP rebuilds the generation
/// from `reload` and swaps it in; requests in flight keep the old one.
class Server {
public:
  Server(Api& api, std::function<std::shared_ptr<const Generation>()> reload)
      : api_(api), reload_(std::move(reload)) {
    http_.Get(R"(/api/v1/.*)", [this](const httplib::Request& req, httplib::Response& res) {
      Params params(req.params.begin(), req.params.end());
      auto r = api_.handle(req.path, params);
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    });
    http_.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        auto r = error_response(res.status, res.status == 404 ? "NotFound" : "HttpError", "request not served");
        res.set_content(r.body.dump(), "application/json");
      }
    });
  }

  bool listen(const std::string& host, int port) {
    std::signal(SIGHUP, [](int) { reload_requested() = true; });
    watcher_ = std::thread([this] {
      while (!stopping_) {
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
        if (reload_requested().exchange(false)) reload_now();
      }
    });
    bool ok = http_.listen(host, port);
    stopping_ = true;
    watcher_.join();
    return ok;
  }

  int bind_any_port(const std::string& host) { return http_.bind_to_any_port(host); }
  bool listen_after_bind() { return http_.listen_after_bind(); }
  void stop() { http_.stop(); }

  /// Loads a fresh generation; on failure the current one stays in service.
  bool reload_now() {
    try {
      api_.swap(reload_());
      return true;
    } catch (const std::exception& e) {
      std::cerr << "reload failed, keeping current index: " << e.what() << "\n";
      return false;
    }
  }

private:
  Api& api_;
  std::function<std::shared_ptr<const Generation>()> reload_;
  httplib::Server http_;
  std::thread watcher_;
  std::atomic<bool> stopping_{false};
};

}  // namespace infoveil::service
