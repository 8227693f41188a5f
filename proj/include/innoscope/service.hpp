#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "innoscope/pipeline.hpp"
#include "innoscope/serialize.hpp"
#include "innoscope/whatif.hpp"

namespace httplib {
class Server;
}

namespace innoscope {

// Result of one request: HTTP status plus JSON body.
struct Reply {
  int status = 200;
  Json body;
};

using Query = std::map<std::string, std::string>;

// Read-only view over a bundle plus per-session what-if logs persisted as JSON files.
class WhatIfService {
 public:
  WhatIfService(RunArtifacts run, std::filesystem::path sessions_dir);
  static WhatIfService from_bundle(const std::filesystem::path& bundle,
                                   std::optional<std::filesystem::path> sessions_dir = std::nullopt);

  // Routes a request; never throws. Errors become {code, stage, message} with a 4xx/5xx status.
  Reply handle(const std::string& method, const std::string& path, const Query& query,
               const std::string& body) const;

  const RunArtifacts& artifacts() const { return run_; }
  const std::filesystem::path& sessions_dir() const { return sessions_dir_; }

  static bool valid_session_id(const std::string& id);

 private:
  struct Session {
    std::mutex mutex;
    std::optional<TrialLog> log;
  };

  Json health() const;
  Json regions(const Query& q) const;
  Json clusters() const;
  Json pca() const;
  Json shift() const;
  Json donors(const Query& q) const;
  Json trial(const std::string& session, const std::string& body) const;
  Json session_log(const std::string& session) const;
  Json sweep(const Query& q) const;

  std::shared_ptr<Session> session(const std::string& id) const;
  void persist(const TrialLog& log) const;
  const MembershipClassifier& classifier() const;

  RunArtifacts run_;
  std::filesystem::path sessions_dir_;
  mutable std::mutex registry_mutex_;
  mutable std::map<std::string, std::shared_ptr<Session>> sessions_;
};

// HTTP front end. bind() with port 0 picks a free port.
class HttpServer {
 public:
  explicit HttpServer(const WhatIfService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  int bind(const std::string& host, int port);
  // Serves until stop(); blocks.
  void listen();
  // Serves on a background thread.
  void start();
  void stop();
  int port() const { return port_; }

 private:
  const WhatIfService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
};

// Parses "host:port"; a bare port binds 127.0.0.1.
std::pair<std::string, int> parse_bind(const std::string& text);

}  // namespace innoscope
