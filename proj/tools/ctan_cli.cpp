// ctan: command-line front end for dataset generation, training,
// evaluation, spectral verification, and dataset statistics.
//
// Exit codes: 0 ok, 1 I/O failure, 2 usage/validation error,
// 3 training divergence, 4 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctan/datagen/path_graph.hpp"
#include "ctan/datagen/periodic.hpp"
#include "ctan/harness/edgebank.hpp"
#include "ctan/harness/linkpred.hpp"
#include "ctan/harness/sequence.hpp"
#include "ctan/model/checkpoint.hpp"
#include "ctan/spectral/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ctan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTraining = 3;
constexpr int kExitVerification = 4;

/// Relative paths that do not exist locally are retried under
/// $CTDG_DATA_DIR.
std::string resolve_data_path(const std::string& path) {
  if (path.empty() || fs::exists(path) || fs::path(path).is_absolute())
    return path;
  const char* root = std::getenv("CTDG_DATA_DIR");
  if (root == nullptr) return path;
  fs::path candidate = fs::path(root) / path;
  return fs::exists(candidate) ? candidate.string() : path;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open for writing: " + path);
  f << text;
  if (!f) throw Error("write failed: " + path);
}

struct DataSpec {
  std::string kind = "path";  // path | event_csv | jodie
  std::string path;
  bool sort = false;
  std::size_t limit_events = 0;

  static DataSpec from_json(const json& j) {
    reject_unknown_keys(j, {"kind", "path", "sort", "limit_events"}, "data");
    DataSpec d;
    d.kind = json_get_or<std::string>(j, "kind", d.kind);
    d.path = j.at("path").get<std::string>();
    d.sort = json_get_or<bool>(j, "sort", d.sort);
    d.limit_events = json_get_or<std::size_t>(j, "limit_events", 0);
    if (d.kind != "path" && d.kind != "event_csv" && d.kind != "jodie")
      throw ParseError("data: unknown kind '" + d.kind + "'");
    return d;
  }

  json to_json() const {
    return {{"kind", kind},
            {"path", path},
            {"sort", sort},
            {"limit_events", limit_events}};
  }

  ctdg::EventStream load_stream() const {
    const std::string p = resolve_data_path(path);
    ctdg::EventStream s = kind == "jodie" ? ctdg::read_jodie_csv(p)
                                          : ctdg::read_event_csv(p, sort);
    if (limit_events > 0 && s.events.size() > limit_events)
      s.events.resize(limit_events);
    return s;
  }
};

struct RunConfig {
  model::CtanConfig model_cfg;
  harness::TrainConfig train_cfg;
  DataSpec data;
  std::vector<json> grid;  // per-entry model-config overrides

  static RunConfig load(const std::string& path) {
    json j = num::read_json_file(resolve_data_path(path));
    reject_unknown_keys(j, {"model", "train", "data", "grid"}, "run config");
    RunConfig rc;
    rc.model_cfg = model::config_from_json(j.at("model"));
    rc.train_cfg = harness::train_config_from_json(
        j.contains("train") ? j.at("train") : json::object());
    rc.data = DataSpec::from_json(j.at("data"));
    if (j.contains("grid"))
      for (const json& entry : j.at("grid")) rc.grid.push_back(entry);
    return rc;
  }

  json resolved(const json& overrides) const {
    json m = model::to_json(apply_overrides(overrides));
    return {{"model", m},
            {"train", harness::to_json(train_cfg)},
            {"data", data.to_json()},
            {"grid_entry", overrides}};
  }

  model::CtanConfig apply_overrides(const json& overrides) const {
    json merged = model::to_json(model_cfg);
    for (auto it = overrides.begin(); it != overrides.end(); ++it)
      merged[it.key()] = it.value();
    return model::config_from_json(merged);
  }
};

void write_metrics_jsonl(const std::string& path,
                         const std::vector<json>& lines) {
  std::string text;
  for (const json& l : lines) text += l.dump() + "\n";
  write_text(path, text);
}

struct SeedOutcome {
  double val_metric = 0.0;
  double test_metric = 0.0;
  model::Checkpoint checkpoint;
  std::vector<json> metrics;
  int epochs_run = 0;
};

SeedOutcome run_one(const RunConfig& rc, const model::CtanConfig& cfg,
                    std::uint64_t seed,
                    const datagen::PathGraphDataset* path_ds,
                    const ctdg::EventStream* stream,
                    const ctdg::SplitSpec* split) {
  SeedOutcome out;
  if (rc.train_cfg.task == harness::Task::SequenceCls) {
    harness::SequenceResult r =
        harness::train_sequence(*path_ds, cfg, rc.train_cfg, seed);
    out.val_metric = -r.best_val_loss;  // larger is better
    out.test_metric = r.test_accuracy;
    out.checkpoint = std::move(r.best);
    out.metrics = std::move(r.metrics);
    out.epochs_run = rc.train_cfg.epochs;
  } else {
    harness::LinkPredResult r =
        harness::train_linkpred(*stream, *split, cfg, rc.train_cfg, seed);
    out.val_metric = r.best_val_auc;
    out.test_metric = r.test_auc;
    out.checkpoint = std::move(r.best);
    out.metrics = std::move(r.metrics);
    out.epochs_run = r.epochs_run;
  }
  return out;
}

int cmd_train(const std::string& config_path, const std::string& out_dir,
              const std::vector<std::uint64_t>& seed_override, bool parallel) {
  RunConfig rc = RunConfig::load(config_path);
  if (!seed_override.empty()) rc.train_cfg.seeds = seed_override;
  rc.train_cfg.validate();

  std::optional<datagen::PathGraphDataset> path_ds;
  std::optional<ctdg::EventStream> stream;
  std::optional<ctdg::SplitSpec> split;
  if (rc.train_cfg.task == harness::Task::SequenceCls) {
    if (rc.data.kind != "path")
      throw ParseError("sequence task needs data.kind == 'path'");
    path_ds = datagen::load_path_dataset(resolve_data_path(rc.data.path));
  } else {
    stream = rc.data.load_stream();
    split = ctdg::chronological_split(*stream);
  }

  std::vector<json> grid = rc.grid.empty()
                               ? std::vector<json>{json::object()}
                               : rc.grid;
  fs::create_directories(out_dir);

  const std::string metric_name =
      rc.train_cfg.task == harness::Task::SequenceCls ? "acc" : "auc";
  json summary;
  summary["task"] = harness::to_string(rc.train_cfg.task);
  summary["metric"] = metric_name;
  summary["runs"] = json::array();
  std::string results_csv = "grid,seed,val_metric,test_" + metric_name + "\n";

  double best_val = -1e300;
  std::size_t best_grid = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const model::CtanConfig cfg = rc.apply_overrides(grid[g]);
    const std::string run_dir = out_dir + "/run_" + std::to_string(g);
    fs::create_directories(run_dir);
    write_text(run_dir + "/resolved_config.json",
               rc.resolved(grid[g]).dump(2) + "\n");

    std::vector<SeedOutcome> outcomes(rc.train_cfg.seeds.size());
    auto work = [&](std::size_t i) {
      outcomes[i] = run_one(rc, cfg, rc.train_cfg.seeds[i],
                            path_ds ? &*path_ds : nullptr,
                            stream ? &*stream : nullptr,
                            split ? &*split : nullptr);
    };
    if (parallel && rc.train_cfg.seeds.size() > 1) {
      std::vector<std::thread> pool;
      for (std::size_t i = 0; i < rc.train_cfg.seeds.size(); ++i)
        pool.emplace_back(work, i);
      for (auto& t : pool) t.join();
    } else {
      for (std::size_t i = 0; i < rc.train_cfg.seeds.size(); ++i) work(i);
    }

    std::vector<double> vals, tests;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const std::uint64_t seed = rc.train_cfg.seeds[i];
      const std::string seed_dir = run_dir + "/seed_" + std::to_string(seed);
      fs::create_directories(seed_dir);
      write_metrics_jsonl(seed_dir + "/metrics.jsonl", outcomes[i].metrics);
      model::save_checkpoint(seed_dir + "/checkpoint.json",
                             outcomes[i].checkpoint);
      vals.push_back(outcomes[i].val_metric);
      tests.push_back(outcomes[i].test_metric);
      results_csv += std::to_string(g) + "," + std::to_string(seed) + "," +
                     num::f64_to_string(outcomes[i].val_metric) + "," +
                     num::f64_to_string(outcomes[i].test_metric) + "\n";
    }
    const double val_mean = harness::mean(vals);
    summary["runs"].push_back({{"grid", g},
                               {"overrides", grid[g]},
                               {"seeds", rc.train_cfg.seeds},
                               {"val_mean", val_mean},
                               {"test_mean", harness::mean(tests)},
                               {"test_std", harness::sample_std(tests)},
                               {"per_seed_test", tests}});
    if (val_mean > best_val) {
      best_val = val_mean;
      best_grid = g;
    }
  }
  summary["best_run"] = best_grid;
  summary["mean"] = summary["runs"][best_grid]["test_mean"];
  summary["std"] = summary["runs"][best_grid]["test_std"];
  write_text(out_dir + "/summary.json", summary.dump(2) + "\n");
  write_text(out_dir + "/results.csv", results_csv);
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& data_path,
             const std::string& data_kind, bool sort, std::size_t limit,
             const std::string& out_dir, std::uint64_t seed) {
  model::Checkpoint ck =
      model::load_checkpoint(resolve_data_path(checkpoint_path));
  json report;
  report["checkpoint"] = checkpoint_path;
  if (ck.params.readout == model::ReadoutKind::Sequence) {
    if (data_kind != "path")
      throw ParseError(
          "checkpoint carries a sequence readout; pass --kind path with a "
          "path dataset directory");
    datagen::PathGraphDataset ds =
        datagen::load_path_dataset(resolve_data_path(data_path));
    if (ck.params.cfg.node_feat_dim != 1 || ck.params.cfg.edge_feat_dim != 1)
      throw DimensionError(
          "checkpoint feature dims do not match the path dataset (want 1/1, "
          "checkpoint has " +
          std::to_string(ck.params.cfg.node_feat_dim) + "/" +
          std::to_string(ck.params.cfg.edge_feat_dim) + ")");
    report["test_acc"] = harness::evaluate_sequence(ds, std::move(ck));
  } else {
    if (data_kind == "path")
      throw ParseError(
          "checkpoint carries a link readout; pass an event CSV via --kind "
          "event_csv or --kind jodie");
    DataSpec spec;
    spec.kind = data_kind;
    spec.path = data_path;
    spec.sort = sort;
    spec.limit_events = limit;
    ctdg::EventStream s = spec.load_stream();
    if (s.edge_feat_dim != ck.params.cfg.edge_feat_dim ||
        s.node_feat_dim != ck.params.cfg.node_feat_dim)
      throw DimensionError(
          "checkpoint feature dims (" +
          std::to_string(ck.params.cfg.node_feat_dim) + "/" +
          std::to_string(ck.params.cfg.edge_feat_dim) +
          ") do not match the stream (" + std::to_string(s.node_feat_dim) +
          "/" + std::to_string(s.edge_feat_dim) + ")");
    ctdg::SplitSpec split = ctdg::chronological_split(s);
    report["test_auc"] =
        harness::evaluate_linkpred(s, split, std::move(ck), seed);
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(out_dir + "/eval.json", report.dump(2) + "\n");
  }
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(std::vector<double> gammas, std::int64_t dim,
               std::size_t ensembles, bool inject_symmetric,
               const std::string& out_path) {
  spectral::VerifyOptions opt;
  if (!gammas.empty()) opt.gammas = std::move(gammas);
  opt.dim = dim;
  opt.ensembles = ensembles;
  opt.inject_symmetric = inject_symmetric;
  spectral::VerifyReport report = spectral::run_verification(opt);
  const std::string text = report.to_json().dump(2) + "\n";
  if (!out_path.empty()) write_text(out_path, text);
  std::cout << text;
  return report.all_pass() ? kExitOk : kExitVerification;
}

int cmd_stats(const std::string& events_path, const std::string& kind,
              bool sort, const std::string& out_path) {
  DataSpec spec;
  spec.kind = kind;
  spec.path = events_path;
  spec.sort = sort;
  ctdg::EventStream s = spec.load_stream();
  ctdg::StreamStats st = ctdg::stream_stats(s);
  json j = {{"nodes", st.nodes},
            {"edges", st.edges},
            {"events", st.events},
            {"node_feat_dim", st.node_feat_dim},
            {"edge_feat_dim", st.edge_feat_dim},
            {"train_events", st.train_events},
            {"val_events", st.val_events},
            {"test_events", st.test_events}};
  if (st.surprise_defined)
    j["surprise_index"] = st.surprise;
  else
    j["surprise_index"] = nullptr;
  const std::string text = j.dump(2) + "\n";
  if (!out_path.empty()) write_text(out_path, text);
  std::cout << text;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CTAN: non-dissipative deep graph network for continuous-time "
               "dynamic graphs"};
  app.require_subcommand(1);

  // ---- generate ----
  CLI::App* generate = app.add_subcommand("generate", "emit synthetic datasets");
  generate->require_subcommand(1);

  CLI::App* gen_path =
      generate->add_subcommand("path", "temporal path-graph classification set");
  std::int64_t pg_n = 9;
  std::size_t pg_count = 1000;
  std::uint64_t pg_seed = 7;
  std::string pg_out = "path_dataset";
  gen_path->add_option("--n", pg_n, "path length (nodes per graph)");
  gen_path->add_option("--count", pg_count, "number of graphs");
  gen_path->add_option("--seed", pg_seed, "generation seed");
  gen_path->add_option("--out", pg_out, "output directory")->required();

  CLI::App* gen_bip =
      generate->add_subcommand("bipartite", "periodic bipartite link stream");
  std::int64_t bp_users = 10, bp_items = 10, bp_period = 5, bp_events = 5000;
  std::uint64_t bp_seed = 7;
  std::string bp_out = "bipartite_dataset";
  gen_bip->add_option("--users", bp_users, "user count");
  gen_bip->add_option("--items", bp_items, "item count");
  gen_bip->add_option("--period", bp_period, "steps per partner shift (0 = never)");
  gen_bip->add_option("--events", bp_events, "number of interactions");
  gen_bip->add_option("--seed", bp_seed, "generation seed");
  gen_bip->add_option("--out", bp_out, "output directory")->required();

  // ---- train ----
  CLI::App* train = app.add_subcommand("train", "train a model from a config");
  std::string tr_config, tr_out = "train_out";
  std::vector<std::uint64_t> tr_seeds;
  bool tr_parallel = false;
  train->add_option("--config", tr_config, "run config JSON")->required();
  train->add_option("--out", tr_out, "output directory");
  train->add_option("--seeds", tr_seeds, "override the config seed list");
  train->add_flag("--parallel", tr_parallel, "run seeds in parallel threads");

  // ---- eval ----
  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  std::string ev_ck, ev_data, ev_kind = "event_csv", ev_out;
  bool ev_sort = false;
  std::size_t ev_limit = 0;
  std::uint64_t ev_seed = 1;
  eval->add_option("--checkpoint", ev_ck, "checkpoint JSON")->required();
  eval->add_option("--data", ev_data, "dataset directory or event CSV")->required();
  eval->add_option("--kind", ev_kind, "data kind: path | event_csv | jodie");
  eval->add_flag("--sort", ev_sort, "stable-sort events by time on load");
  eval->add_option("--limit-events", ev_limit, "truncate the stream");
  eval->add_option("--out", ev_out, "output directory");
  eval->add_option("--seed", ev_seed, "negative-sampling seed");

  // ---- verify ----
  CLI::App* verify =
      app.add_subcommand("verify", "run the spectral certification checks");
  std::vector<double> vf_gammas;
  std::int64_t vf_dim = 16;
  std::size_t vf_ensembles = 100;
  bool vf_inject = false;
  std::string vf_out;
  verify->add_option("--gamma", vf_gammas, "shift values to test");
  verify->add_option("--dim", vf_dim, "matrix dimension");
  verify->add_option("--ensembles", vf_ensembles, "random matrices per check");
  verify->add_flag("--inject-symmetric", vf_inject,
                   "negative control: use the symmetric part instead");
  verify->add_option("--out", vf_out, "write the JSON report here");

  // ---- stats ----
  CLI::App* stats = app.add_subcommand("stats", "dataset statistics");
  std::string st_events, st_kind = "event_csv", st_out;
  bool st_sort = false;
  stats->add_option("--events", st_events, "event CSV path")->required();
  stats->add_option("--kind", st_kind, "data kind: event_csv | jodie");
  stats->add_flag("--sort", st_sort, "stable-sort events by time on load");
  stats->add_option("--out", st_out, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_path->parsed()) {
      datagen::PathGraphDataset ds =
          datagen::gen_path_dataset(pg_n, pg_count, pg_seed);
      datagen::write_path_dataset(pg_out, ds);
      std::cout << "wrote " << pg_out << " (n=" << pg_n
                << ", count=" << pg_count << ")\n";
      return kExitOk;
    }
    if (gen_bip->parsed()) {
      ctdg::EventStream s = datagen::gen_periodic_bipartite(
          bp_users, bp_items, bp_period, bp_events, bp_seed);
      fs::create_directories(bp_out);
      ctdg::write_event_csv(bp_out + "/events.csv", s);
      json manifest = {{"kind", "periodic_bipartite"}, {"users", bp_users},
                       {"items", bp_items},           {"period", bp_period},
                       {"events", bp_events},         {"seed", bp_seed}};
      num::write_json_file(bp_out + "/manifest.json", manifest);
      std::cout << "wrote " << bp_out << " (" << bp_events << " events)\n";
      return kExitOk;
    }
    if (train->parsed()) return cmd_train(tr_config, tr_out, tr_seeds, tr_parallel);
    if (eval->parsed())
      return cmd_eval(ev_ck, ev_data, ev_kind, ev_sort, ev_limit, ev_out,
                      ev_seed);
    if (verify->parsed())
      return cmd_verify(vf_gammas, vf_dim, vf_ensembles, vf_inject, vf_out);
    if (stats->parsed()) return cmd_stats(st_events, st_kind, st_sort, st_out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTraining;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
