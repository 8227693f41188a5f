#include <chrono>
#include <csignal>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "innoscope/error.hpp"
#include "innoscope/pipeline.hpp"
#include "innoscope/service.hpp"
#include "innoscope/whatif.hpp"

namespace fs = std::filesystem;
using namespace innoscope;

namespace {

struct Flags {
  std::string input;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> k;
  std::string q_policy;
  std::optional<int> restarts;
  std::string bind = "127.0.0.1:8080";
};

PipelineConfig compose_config(const Flags& f, std::optional<PipelineConfig> base = std::nullopt) {
  PipelineConfig c = base ? *base : PipelineConfig{};
  if (!f.config.empty()) c = load_config(f.config);
  apply_env_overrides(c);
  if (!f.input.empty()) c.input = f.input;
  if (!f.out.empty()) c.output = f.out;
  if (f.seed) c.fit.seed = *f.seed;
  if (f.k) c.k = *f.k;
  if (!f.q_policy.empty()) c.q_policy = SelectionPolicy::parse(f.q_policy);
  if (f.restarts) c.fit.restarts = *f.restarts;
  return c;
}

fs::path bundle_dir(const Flags& f) {
  if (!f.out.empty()) return f.out;
  PipelineConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  apply_env_overrides(c);
  return c.output;
}

// Loads the bundle, applies flag overrides to its config, and drops documents the change invalidates.
RunArtifacts open_bundle(const Flags& f) {
  RunArtifacts run = read_bundle(bundle_dir(f));
  PipelineConfig updated = compose_config(f, run.config);
  updated.input = run.config.input;
  updated.output = run.config.output;
  const bool clustering_changed = updated.k != run.config.k || updated.fit.seed != run.config.fit.seed ||
                                  updated.fit.restarts != run.config.fit.restarts ||
                                  updated.q_policy.to_string() != run.config.q_policy.to_string();
  run.config = updated;
  run.fingerprint = config_fingerprint(run.config, run.input_sha256);
  if (clustering_changed) {
    for (const char* doc : {"pca", "jdrc", "labeling", "classifier", "evaluation"}) run.present.erase(doc);
  }
  return run;
}

void drop(RunArtifacts& run, std::initializer_list<const char*> docs) {
  for (const char* d : docs) run.present.erase(d);
}

template <class F>
void stage(const std::string& name, F&& body) {
  try {
    body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.code(), e.what());
  }
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

void print_pca(const RunArtifacts& run) {
  std::cout << "Importance of components:\n";
  std::cout << std::setw(26) << "";
  for (const auto& r : variance_table(run.pca)) std::cout << std::setw(10) << ("Comp." + std::to_string(r.component));
  std::cout << "\n" << std::setw(26) << std::left << "Standard deviation" << std::right;
  for (const auto& r : variance_table(run.pca)) std::cout << std::setw(10) << fmt(r.std_dev);
  std::cout << "\n" << std::setw(26) << std::left << "Proportion of Variance" << std::right;
  for (const auto& r : variance_table(run.pca)) std::cout << std::setw(10) << fmt(r.proportion);
  std::cout << "\n" << std::setw(26) << std::left << "Cumulative Proportion" << std::right;
  for (const auto& r : variance_table(run.pca)) std::cout << std::setw(10) << fmt(r.cumulative);
  std::cout << "\nretained components: q = " << run.q << " (" << run.config.q_policy.to_string() << ")\n";
}

void print_labeling(const RunArtifacts& run) {
  std::cout << "cluster  size   label                 pivots  share\n";
  const auto sizes = run.fkm.sizes();
  for (int c = 0; c < run.fkm.k(); ++c) {
    std::cout << std::setw(7) << c + 1 << std::setw(6) << sizes[static_cast<std::size_t>(c)] << "   "
              << std::setw(22) << std::left << tier_name(run.labeling.tier_of(c)) << std::right << std::setw(6)
              << run.pivots.pivots[static_cast<std::size_t>(c)] << "  " << fmt(100.0 * run.pivots.share(c), 1)
              << "%\n";
  }
  std::cout << "within-SS  fkm " << fmt(run.fkm_within.total) << "  euris " << fmt(run.euris_within.total)
            << "  fine-tuned " << fmt(run.fine_within.total) << "\n";
  for (const auto& w : run.labeling.warnings) std::cout << "warning: " << w << "\n";
}

void print_evaluation(const RunArtifacts& run) {
  const auto& r = run.leader_evaluation;
  std::cout << "leader classifier (" << run.leader_classifier.target << "), test n = " << r.n_test << "\n";
  std::cout << "              precision  recall  f1-score  support\n";
  for (int c : {0, 1}) {
    std::cout << std::setw(12) << c << std::setw(11) << fmt(r.precision[c], 2) << std::setw(8)
              << fmt(r.recall[c], 2) << std::setw(10) << fmt(r.f1[c], 2) << std::setw(9) << r.support[c] << "\n";
  }
  std::cout << std::setw(12) << "accuracy" << std::setw(29) << fmt(r.accuracy, 3) << std::setw(9) << r.n_test
            << "\n\nlabeling comparison (median over " << run.config.comparison_seeds.size() << " seeds)\n";
  for (const auto& c : run.comparison) {
    std::cout << "  " << std::setw(13) << std::left << c.name << std::right << " accuracy "
              << fmt(c.median_accuracy, 3) << "  precision(1) " << fmt(c.median_precision, 3) << "\n";
  }
}

void print_shift(const RunArtifacts& run) {
  std::size_t shifted = 0;
  for (const auto& r : run.shift) shifted += r.verdict == "shifted";
  std::cout << run.shift.size() << " comparisons, " << shifted << " shifted at alpha = " << run.config.significance
            << " (" << to_string(run.config.ks_method) << ")\n";
  for (const auto& r : run.shift) {
    std::cout << "  " << std::setw(6) << std::left << r.indicator << std::right << "  " << r.pair << "  D = "
              << (r.d_stat ? fmt(*r.d_stat, 5) : "    -  ") << "  p = " << (r.p_value ? fmt(*r.p_value, 6) : "    -   ")
              << "  " << r.verdict << "\n";
  }
}

Overrides parse_sets(const std::vector<std::string>& sets) {
  Overrides out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ArgumentError("--set expects code=value, got '" + s + "'");
    const std::string value = s.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw ArgumentError("--set value is not a number: '" + s + "'");
    out.emplace_back(s.substr(0, eq), v);
  }
  return out;
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"innoscope: regional innovation analysis with factorial k-means"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--input", f.input, "Scoreboard CSV");
  app.add_option("--config", f.config, "JSON config file");
  app.add_option("--seed", f.seed, "FKM seed");
  app.add_option("--out", f.out, "Bundle directory");
  app.add_option("--k", f.k, "Number of clusters");
  app.add_option("--q-policy", f.q_policy, "eigenvalue_gt_one | elbow_on_gt_one | manual:<q>");
  app.add_option("--restarts", f.restarts, "FKM restarts");
  app.add_option("--bind", f.bind, "host:port for serve");

  auto* ingest = app.add_subcommand("ingest", "Load the scoreboard and start a bundle")->fallthrough();
  auto* correlate = app.add_subcommand("correlate", "Pearson correlations with Holm adjustment")->fallthrough();
  auto* pca = app.add_subcommand("pca", "PCA on the correlation matrix")->fallthrough();
  auto* cluster = app.add_subcommand("cluster", "Factorial k-means")->fallthrough();
  auto* label = app.add_subcommand("label", "Rank clusters, flag pivots")->fallthrough();
  auto* train = app.add_subcommand("train", "Train the leader membership classifier")->fallthrough();
  auto* shift = app.add_subcommand("shift", "Two-sample KS dataset-shift report")->fallthrough();
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write the bundle")->fallthrough();
  auto* serve = app.add_subcommand("serve", "Serve a bundle over HTTP")->fallthrough();
  auto* whatif = app.add_subcommand("whatif", "Evaluate one what-if trial")->fallthrough();

  std::string sessions;
  serve->add_option("--sessions", sessions, "Session log directory");

  std::string base, session;
  std::vector<std::string> sets;
  bool fresh = false;
  bool show_log = false;
  whatif->add_option("--base", base, "Base row as <region>_<year>")->required();
  whatif->add_option("--set", sets, "Override code=value (repeatable)");
  whatif->add_option("--session", session, "Persist the trial in this session");
  whatif->add_option("--sessions", sessions, "Session log directory");
  whatif->add_flag("--fresh", fresh, "Apply overrides to the base row instead of the previous trial");
  whatif->add_flag("--log", show_log, "Print the session log after the trial");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pipeline) {
      const PipelineConfig config = compose_config(f);
      const auto t0 = std::chrono::steady_clock::now();
      const RunArtifacts run = run_pipeline(config);
      write_bundle(run, config.output);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      print_pca(run);
      std::cout << "\n" << cluster_summary(run) << "\n";
      print_labeling(run);
      std::cout << "\n";
      print_evaluation(run);
      std::cout << "\n";
      print_shift(run);
      std::cout << "\nbundle written to " << config.output.string() << " in " << fmt(secs, 1) << " s (fingerprint "
                << run.fingerprint.substr(0, 12) << ")\n";
      return 0;
    }
    if (*ingest) {
      RunArtifacts run;
      run.config = compose_config(f);
      stage("ingest", [&] { stage_ingest(run); });
      write_bundle(run, run.config.output);
      std::cout << "ingested " << run.panel.n_rows() << " rows x " << run.panel.indicator_names.size()
                << " indicators into " << run.config.output.string() << "\n";
      return 0;
    }
    if (*serve) {
      const fs::path dir = bundle_dir(f);
      const WhatIfService service = sessions.empty() ? WhatIfService::from_bundle(dir)
                                                     : WhatIfService::from_bundle(dir, fs::path(sessions));
      HttpServer server(service);
      const auto [host, port] = parse_bind(f.bind);
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving " << dir.string() << " on http://" << host << ":" << bound << " (sessions in "
                << service.sessions_dir().string() << ")" << std::endl;
      server.listen();
      g_server = nullptr;
      return 0;
    }
    if (*whatif) {
      const fs::path dir = bundle_dir(f);
      if (session.empty()) {
        RunArtifacts run = read_bundle(dir);
        if (!run.has("classifier")) throw ArgumentError("bundle has no classifier; run 'train' first");
        const auto row = run.panel.find_key(base);
        if (!row) throw LookupError("unknown base '" + base + "'");
        const auto& r = run.panel.rows[*row];
        TrialLog log;
        const Trial& t = run_trial(log, run.panel, r.region_id, r.year, parse_sets(sets), !fresh,
                                   run.leader_classifier);
        std::cout << "P(" << run.leader_classifier.target << " | " << base << ") = " << fmt(100.0 * t.probability, 6)
                  << "%\n";
        for (const auto& o : t.out_of_range) std::cout << "note: " << o << " is outside the training range\n";
        return 0;
      }
      const WhatIfService service = sessions.empty() ? WhatIfService::from_bundle(dir)
                                                     : WhatIfService::from_bundle(dir, fs::path(sessions));
      const auto row = service.artifacts().panel.find_key(base);
      if (!row) throw LookupError("unknown base '" + base + "'");
      const auto& r = service.artifacts().panel.rows[*row];
      Json body{{"base_region", r.region_id}, {"base_year", r.year}, {"overrides", overrides_to_json(parse_sets(sets))},
                {"cumulative", !fresh}};
      Reply reply = service.handle("POST", "/whatif/" + session + "/trial", {}, body.dump());
      if (reply.status != 200) {
        std::cerr << "error in stage '" << reply.body.value("stage", "whatif") << "' [" << reply.body.value("code", "")
                  << "]: " << reply.body.value("message", "") << "\n";
        return 1;
      }
      std::cout << "session " << session << ", trial " << reply.body.at("number").get<int>() << ": P("
                << service.artifacts().leader_classifier.target << " | " << base << ") = "
                << fmt(100.0 * reply.body.at("probability").get<double>(), 6) << "%\n";
      for (const auto& o : reply.body.value("out_of_range", Json::array())) {
        std::cout << "note: " << o.get<std::string>() << " is outside the training range\n";
      }
      if (show_log) {
        Reply log = service.handle("GET", "/whatif/" + session + "/log", {}, "");
        TrialLog tl;
        log.body.get_to(tl);
        write_trial_table(std::cout, tl);
      }
      return 0;
    }

    RunArtifacts run = open_bundle(f);
    if (*correlate) {
      stage("correlate", [&] { stage_correlate(run); });
      const auto& c = run.correlation;
      std::cout << "correlations over n = " << c.n_obs << " rows; report in reports/correlation.csv\n";
    } else if (*pca) {
      drop(run, {"jdrc", "labeling", "classifier", "evaluation"});
      const auto t0 = std::chrono::steady_clock::now();
      stage("pca", [&] { stage_pca(run); });
      print_pca(run);
      std::cout << "elapsed " << fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 3)
                << " s\n";
    } else if (*cluster) {
      drop(run, {"labeling", "classifier", "evaluation"});
      stage("cluster", [&] { stage_cluster(run); });
      std::cout << cluster_summary(run);
    } else if (*label) {
      drop(run, {"classifier", "evaluation"});
      stage("label", [&] { stage_label(run); });
      print_labeling(run);
    } else if (*train) {
      stage("train", [&] { stage_train(run); });
      print_evaluation(run);
    } else if (*shift) {
      stage("shift", [&] { stage_shift(run); });
      print_shift(run);
    }
    write_bundle(run, bundle_dir(f));
    return 0;
  } catch (const StageError& e) {
    std::cerr << "error in stage '" << e.stage() << "' [" << e.cause_code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
