#include "innoscope/service.hpp"

#include <unistd.h>

#include <fstream>
#include <regex>
#include <sstream>

#include <httplib.h>

#include "innoscope/error.hpp"

namespace innoscope {

namespace fs = std::filesystem;

namespace {

class Unavailable : public Error {
 public:
  explicit Unavailable(const std::string& message) : Error("unavailable", message) {}
};

int status_for(const std::string& code) {
  if (code == "lookup_error") return 404;
  if (code == "unavailable") return 503;
  if (code == "argument_error" || code == "range_error" || code == "parse_error" ||
      code == "classification_error" || code == "data_error") {
    return 400;
  }
  return 500;
}

Json error_body(const std::string& code, const std::string& stage, const std::string& message) {
  return Json{{"code", code}, {"stage", stage}, {"message", message}};
}

const std::string& need(const Query& q, const std::string& key) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) throw ArgumentError("missing query parameter '" + key + "'");
  return it->second;
}

std::optional<std::string> opt(const Query& q, const std::string& key) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("parameter '" + key + "' must be a finite number, got '" + text + "'");
  }
}

long long parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("parameter '" + key + "' must be an integer, got '" + text + "'");
  }
}

}  // namespace

WhatIfService::WhatIfService(RunArtifacts run, fs::path sessions_dir)
    : run_(std::move(run)), sessions_dir_(std::move(sessions_dir)) {
  for (const char* doc : {"panel", "standardization", "jdrc", "labeling"}) {
    if (!run_.has(doc)) throw ArgumentError(std::string("bundle lacks the '") + doc + "' document");
  }
}

WhatIfService WhatIfService::from_bundle(const fs::path& bundle, std::optional<fs::path> sessions_dir) {
  fs::path dir = sessions_dir ? *sessions_dir
                              : fs::absolute(bundle).lexically_normal().parent_path() /
                                    (fs::absolute(bundle).lexically_normal().filename().string() + ".sessions");
  return WhatIfService(read_bundle(bundle, true), dir);
}

bool WhatIfService::valid_session_id(const std::string& id) {
  static const std::regex pattern("[A-Za-z0-9_-]{1,64}");
  return std::regex_match(id, pattern);
}

Reply WhatIfService::handle(const std::string& method, const std::string& path, const Query& query,
                            const std::string& body) const {
  std::string stage = "request";
  try {
    static const std::regex whatif_re("/whatif/([^/]+)/(trial|log)");
    std::smatch m;
    if (std::regex_match(path, m, whatif_re)) {
      const std::string id = m[1];
      const bool is_trial = m[2] == "trial";
      stage = "whatif";
      if (!valid_session_id(id)) throw ArgumentError("invalid session id '" + id + "'");
      if (is_trial && method == "POST") return {200, trial(id, body)};
      if (!is_trial && method == "GET") return {200, session_log(id)};
      return {405, error_body("method_not_allowed", stage, method + " not allowed on " + path)};
    }
    if (method != "GET") {
      return {405, error_body("method_not_allowed", stage, method + " not allowed on " + path)};
    }
    if (path == "/health") return {200, health()};
    if (path == "/regions") return {200, regions(query)};
    if (path == "/clusters") return {200, clusters()};
    if (path == "/pca") return {200, pca()};
    if (path == "/shift") return {200, shift()};
    if (path == "/donors") {
      stage = "donors";
      return {200, donors(query)};
    }
    if (path == "/sweep") {
      stage = "sweep";
      return {200, sweep(query)};
    }
    return {404, error_body("not_found", stage, "no endpoint " + path)};
  } catch (const StageError& e) {
    return {status_for(e.cause_code()), error_body(e.cause_code(), e.stage(), e.what())};
  } catch (const Error& e) {
    return {status_for(e.code()), error_body(e.code(), stage, e.what())};
  } catch (const Json::exception& e) {
    return {400, error_body("parse_error", stage, e.what())};
  } catch (const std::exception& e) {
    return {500, error_body("internal_error", stage, e.what())};
  }
}

Json WhatIfService::health() const {
  Json docs = Json::array();
  for (const auto& d : run_.present) docs.push_back(d);
  return Json{{"status", "ok"},
              {"version", kDocumentVersion},
              {"fingerprint", run_.fingerprint},
              {"rows", run_.panel.n_rows()},
              {"documents", docs},
              {"classifier", run_.has("classifier")}};
}

Json WhatIfService::regions(const Query& q) const {
  std::optional<int> year;
  if (auto y = opt(q, "year")) year = static_cast<int>(parse_int("year", *y));
  const Eigen::MatrixXd coords = run_.coordinates();
  Json out = Json::array();
  for (std::size_t i = 0; i < run_.panel.n_rows(); ++i) {
    const auto& row = run_.panel.rows[i];
    if (year && row.year != *year) continue;
    const int c = run_.fkm.labels[i];
    const auto ii = static_cast<Eigen::Index>(i);
    out.push_back(Json{{"region_id", row.region_id},
                       {"year", row.year},
                       {"key", row.key()},
                       {"fkm_cluster", c + 1},
                       {"fkm_label", tier_name(run_.labeling.tier_of(c))},
                       {"euris_label", row.euris_label},
                       {"euris_name", label_name(row.euris_label)},
                       {"pivot", static_cast<bool>(run_.pivots.is_pivot[i])},
                       {"distance", run_.pivots.dist[i]},
                       {"coords", vector_to_json(coords.row(ii).transpose())}});
  }
  return out;
}

Json WhatIfService::clusters() const {
  const auto& m = run_.fkm;
  const auto sizes = m.sizes();
  Json cl = Json::array();
  for (int c = 0; c < m.k(); ++c) {
    const int tier = run_.labeling.tier_of(c);
    cl.push_back(Json{{"cluster", c + 1},
                      {"tier", tier},
                      {"label", tier_name(tier)},
                      {"size", sizes[static_cast<std::size_t>(c)]},
                      {"centroid", vector_to_json(m.Y.row(c).transpose())},
                      {"pivot_share", run_.pivots.share(c)}});
  }
  Json scores = Json::array();
  for (int i = 0; i < m.p(); ++i) {
    scores.push_back(Json{{"indicator", run_.panel.indicator_names[static_cast<std::size_t>(i)]},
                          {"scores", vector_to_json(m.A.row(i).transpose())}});
  }
  return Json{{"k", m.k()},
              {"q", m.q()},
              {"orientation", run_.axes.orientation},
              {"leader_cluster", run_.labeling.leader_cluster + 1},
              {"objective", m.objective},
              {"clusters", cl},
              {"variable_scores", scores}};
}

Json WhatIfService::pca() const {
  if (!run_.has("pca")) throw Unavailable("bundle has no PCA document");
  return Json{{"q", run_.q},
              {"policy", run_.config.q_policy.to_string()},
              {"eigenvalues", vector_to_json(run_.pca.eigenvalues)},
              {"variance_table", variance_table(run_.pca)}};
}

Json WhatIfService::shift() const {
  if (!run_.has("shift")) throw Unavailable("bundle has no shift document");
  return Json{{"significance", run_.config.significance},
              {"method", to_string(run_.config.ks_method)},
              {"rows", run_.shift}};
}

Json WhatIfService::donors(const Query& q) const {
  int tier = 1;
  if (auto label = opt(q, "label")) {
    try {
      tier = encode_label(*label);
    } catch (const ClassificationError& e) {
      throw ArgumentError(e.what());
    }
  }
  const std::string& indicator = need(q, "indicator");
  std::optional<int> year;
  if (auto y = opt(q, "year")) year = static_cast<int>(parse_int("year", *y));
  std::size_t limit = 10;
  if (auto l = opt(q, "limit")) {
    const long long v = parse_int("limit", *l);
    if (v < 0) throw ArgumentError("limit must be nonnegative");
    limit = static_cast<std::size_t>(v);
  }
  Json out = donor_lookup(run_.panel, run_.members_of_tier(tier), indicator, year, limit);
  out["label"] = tier_name(tier);
  return out;
}

const MembershipClassifier& WhatIfService::classifier() const {
  if (!run_.has("classifier")) throw Unavailable("bundle has no classifier document");
  return run_.leader_classifier;
}

std::shared_ptr<WhatIfService::Session> WhatIfService::session(const std::string& id) const {
  std::lock_guard<std::mutex> lock(registry_mutex_);
  auto& slot = sessions_[id];
  if (!slot) {
    slot = std::make_shared<Session>();
    const fs::path file = sessions_dir_ / (id + ".json");
    if (fs::exists(file)) {
      std::ifstream in(file);
      TrialLog log;
      Json::parse(in).get_to(log);
      slot->log = std::move(log);
    }
  }
  return slot;
}

void WhatIfService::persist(const TrialLog& log) const {
  fs::create_directories(sessions_dir_);
  const fs::path file = sessions_dir_ / (log.session_id + ".json");
  const fs::path tmp = file.string() + ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << Json(log).dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write session file " + tmp.string());
  }
  fs::rename(tmp, file);
}

Json WhatIfService::trial(const std::string& id, const std::string& body) const {
  const Json req = body.empty() ? Json::object() : Json::parse(body);
  if (!req.is_object()) throw ArgumentError("request body must be a JSON object");
  if (!req.contains("base_region") || !req.at("base_region").is_string()) {
    throw ArgumentError("'base_region' (string) is required");
  }
  if (!req.contains("base_year") || !req.at("base_year").is_number_integer()) {
    throw ArgumentError("'base_year' (integer) is required");
  }
  const std::string region = req.at("base_region").get<std::string>();
  const int year = req.at("base_year").get<int>();
  const Overrides overrides = req.contains("overrides") ? overrides_from_json(req.at("overrides")) : Overrides{};
  const bool cumulative = req.value("cumulative", true);
  const MembershipClassifier& model = classifier();

  auto s = session(id);
  std::lock_guard<std::mutex> lock(s->mutex);
  TrialLog log = s->log.value_or(TrialLog{});
  log.session_id = id;
  const Trial t = run_trial(log, run_.panel, region, year, overrides, cumulative, model);
  persist(log);
  s->log = std::move(log);
  Json out = t;
  out["session_id"] = id;
  return out;
}

Json WhatIfService::session_log(const std::string& id) const {
  auto s = session(id);
  std::lock_guard<std::mutex> lock(s->mutex);
  if (!s->log) throw LookupError("unknown session '" + id + "'");
  return *s->log;
}

Json WhatIfService::sweep(const Query& q) const {
  const std::string& base = need(q, "base");
  const std::string& indicator = need(q, "indicator");
  const double from = parse_double("from", need(q, "from"));
  const double to = parse_double("to", need(q, "to"));
  const long long steps = parse_int("steps", need(q, "steps"));
  if (steps < 1 || steps > 10000) throw RangeError("steps must lie in [1, 10000]");
  const MembershipClassifier& model = classifier();

  const auto row = run_.panel.find_key(base);
  if (!row) throw LookupError("unknown base '" + base + "'");
  std::vector<double> vector(run_.panel.rows[*row].values.begin(), run_.panel.rows[*row].values.end());
  if (auto id = opt(q, "session")) {
    if (!valid_session_id(*id)) throw ArgumentError("invalid session id '" + *id + "'");
    auto s = session(*id);
    std::lock_guard<std::mutex> lock(s->mutex);
    if (s->log && !s->log->trials.empty()) {
      if (run_.panel.rows[*row].key() != s->log->base_region + "_" + std::to_string(s->log->base_year)) {
        throw ArgumentError("session '" + *id + "' is bound to a different base");
      }
      vector = s->log->trials.back().vector;
    }
  }
  const auto grid = linear_grid(from, to, static_cast<int>(steps));
  const auto points = sensitivity_sweep(vector, indicator, grid, model, run_.panel.indicator_names);
  return Json{{"base", base}, {"indicator", indicator}, {"steps", steps}, {"points", points}};
}

HttpServer::HttpServer(const WhatIfService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    Query query;
    for (const auto& [k, v] : req.params) query[k] = v;
    const Reply reply = service_.handle(req.method, req.path, query, req.body);
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };
  server_->Get(".*", handler);
  server_->Post(".*", handler);
  server_->Put(".*", handler);
  server_->Delete(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) throw ArgumentError("cannot bind " + host + ":" + std::to_string(port));
  return port_;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::pair<std::string, int> parse_bind(const std::string& text) {
  std::string host = "127.0.0.1";
  std::string port = text;
  const auto colon = text.rfind(':');
  if (colon != std::string::npos) {
    host = text.substr(0, colon);
    port = text.substr(colon + 1);
    if (host.empty()) host = "127.0.0.1";
  }
  const long long p = parse_int("bind", port);
  if (p < 0 || p > 65535) throw ArgumentError("port out of range: " + port);
  return {host, static_cast<int>(p)};
}

}  // namespace innoscope
