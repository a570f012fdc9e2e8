#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ctan/ctdg/event_csv.hpp"
#include "ctan/jsonutil.hpp"
#include "ctan/num/serialize.hpp"
#include "ctan/rng.hpp"

namespace ctan::datagen {

/// One temporal path graph: nodes appear in order 0..n-1, event j connects
/// u_j -> u_{j+1} at integer time j. The class signal lives only in the
/// first source node's feature; everything else is uniform noise.
struct PathGraphInstance {
  std::int64_t n = 0;
  int label = 0;  // +1 or -1
  std::vector<ctdg::Event> events;  // local node ids 0..n-1
};

inline PathGraphInstance gen_path_graph(std::int64_t n, Rng rng) {
  if (n < 2) throw ContractError("gen_path_graph: n must be >= 2");
  PathGraphInstance inst;
  inst.n = n;
  inst.label = rng.bernoulli(0.5) ? 1 : -1;
  std::vector<double> node_feat(static_cast<std::size_t>(n));
  node_feat[0] = static_cast<double>(inst.label);
  for (std::int64_t j = 1; j < n; ++j)
    node_feat[static_cast<std::size_t>(j)] = rng.uniform(-1.0, 1.0);
  for (std::int64_t j = 0; j + 1 < n; ++j) {
    ctdg::Event e;
    e.time = static_cast<double>(j);
    e.kind = ctdg::EventKind::EdgeAdd;
    e.src = static_cast<NodeId>(j);
    e.dst = static_cast<NodeId>(j + 1);
    e.src_features = {node_feat[static_cast<std::size_t>(j)]};
    e.dst_features = {node_feat[static_cast<std::size_t>(j + 1)]};
    e.edge_features = {rng.uniform(-1.0, 1.0)};
    inst.events.push_back(std::move(e));
  }
  return inst;
}

struct PathGraphDataset {
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::vector<PathGraphInstance> instances;
  std::size_t train_end = 0, val_end = 0;  // instance-level split

  std::size_t count() const { return instances.size(); }
};

inline PathGraphDataset gen_path_dataset(std::int64_t n, std::size_t count,
                                         std::uint64_t seed) {
  if (count < 10) throw ContractError("gen_path_dataset: count must be >= 10");
  PathGraphDataset ds;
  ds.n = n;
  ds.seed = seed;
  Rng root(seed);
  ds.instances.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    ds.instances.push_back(gen_path_graph(n, root.derive(i)));
  ds.train_end = static_cast<std::size_t>(0.70 * static_cast<double>(count));
  ds.val_end = static_cast<std::size_t>(0.85 * static_cast<double>(count));
  return ds;
}

/// Merges all instances into one validated stream; instance i's node j gets
/// external id i*n + j. Events are ordered by time with ties in instance
/// order, so the stream stays non-decreasing.
inline ctdg::EventStream to_stream(const PathGraphDataset& ds) {
  ctdg::EventStream s;
  s.node_feat_dim = 1;
  s.edge_feat_dim = 1;
  for (std::int64_t step = 0; step + 1 < ds.n; ++step) {
    for (std::size_t i = 0; i < ds.instances.size(); ++i) {
      const ctdg::Event& local =
          ds.instances[i].events[static_cast<std::size_t>(step)];
      ctdg::Event e = local;
      const std::int64_t base = static_cast<std::int64_t>(i) * ds.n;
      e.src = s.intern(base + static_cast<std::int64_t>(local.src));
      e.dst = s.intern(base + static_cast<std::int64_t>(local.dst));
      s.events.push_back(std::move(e));
    }
  }
  s.validate();
  return s;
}

/// Writes events.csv, labels.json ({instance -> +-1}) and manifest.json.
inline void write_path_dataset(const std::string& dir,
                               const PathGraphDataset& ds) {
  std::filesystem::create_directories(dir);
  ctdg::write_event_csv(dir + "/events.csv", to_stream(ds));
  nlohmann::json labels = nlohmann::json::object();
  for (std::size_t i = 0; i < ds.instances.size(); ++i)
    labels[std::to_string(i)] = ds.instances[i].label;
  num::write_json_file(dir + "/labels.json", labels);
  nlohmann::json manifest = {{"kind", "path_graph"},
                             {"n", ds.n},
                             {"count", ds.instances.size()},
                             {"seed", ds.seed},
                             {"node_feat_dim", 1},
                             {"edge_feat_dim", 1},
                             {"train_end", ds.train_end},
                             {"val_end", ds.val_end}};
  num::write_json_file(dir + "/manifest.json", manifest);
}

/// Reloads a written dataset back into per-instance event lists (local node
/// ids), using the manifest's n to regroup the merged stream.
inline PathGraphDataset load_path_dataset(const std::string& dir) {
  nlohmann::json manifest = num::read_json_file(dir + "/manifest.json");
  reject_unknown_keys(manifest,
                      {"kind", "n", "count", "seed", "node_feat_dim",
                       "edge_feat_dim", "train_end", "val_end"},
                      "manifest");
  PathGraphDataset ds;
  ds.n = manifest.at("n").get<std::int64_t>();
  ds.seed = manifest.at("seed").get<std::uint64_t>();
  const std::size_t count = manifest.at("count").get<std::size_t>();
  ds.train_end = manifest.at("train_end").get<std::size_t>();
  ds.val_end = manifest.at("val_end").get<std::size_t>();
  ds.instances.assign(count, PathGraphInstance{});

  nlohmann::json labels = num::read_json_file(dir + "/labels.json");
  ctdg::EventStream s = ctdg::read_event_csv(dir + "/events.csv");
  for (const ctdg::Event& e : s.events) {
    const std::int64_t ext = s.external_id(e.src);
    const std::size_t inst = static_cast<std::size_t>(ext / ds.n);
    if (inst >= count) throw ParseError("path dataset: node id out of range");
    ctdg::Event local = e;
    local.src = static_cast<NodeId>(ext % ds.n);
    local.dst = static_cast<NodeId>(s.external_id(e.dst) % ds.n);
    ds.instances[inst].events.push_back(std::move(local));
  }
  for (std::size_t i = 0; i < count; ++i) {
    ds.instances[i].n = ds.n;
    ds.instances[i].label = labels.at(std::to_string(i)).get<int>();
    if (ds.instances[i].events.size() !=
        static_cast<std::size_t>(ds.n - 1))
      throw ParseError("path dataset: instance " + std::to_string(i) +
                       " has wrong event count");
  }
  return ds;
}

}  // namespace ctan::datagen
