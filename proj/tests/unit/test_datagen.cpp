#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "ctan/datagen/path_graph.hpp"
#include "ctan/datagen/periodic.hpp"

using namespace ctan;
using namespace ctan::datagen;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}
}  // namespace

TEST_CASE("gen_path_graph: smallest cases and construction", "[datagen]") {
  PathGraphInstance two = gen_path_graph(2, Rng(1));
  REQUIRE(two.events.size() == 1);
  CHECK(two.events[0].time == 0.0);
  CHECK(two.events[0].src == 0);
  CHECK(two.events[0].dst == 1);

  PathGraphInstance three = gen_path_graph(3, Rng(2));
  REQUIRE(three.events.size() == 2);
  CHECK(std::abs(three.events[0].src_features[0]) == 1.0);  // the signal
  // every other feature is interior noise in [-1, 1]
  CHECK(std::abs(three.events[1].src_features[0]) <= 1.0);
  CHECK(std::abs(three.events[0].edge_features[0]) <= 1.0);

  CHECK_THROWS_AS(gen_path_graph(1, Rng(3)), ContractError);
}

TEST_CASE("gen_path_graph: times strictly increase, label is +-1",
          "[datagen]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PathGraphInstance inst = gen_path_graph(9, Rng(seed));
    CHECK((inst.label == 1 || inst.label == -1));
    CHECK(inst.events[0].src_features[0] == double(inst.label));
    for (std::size_t i = 0; i < inst.events.size(); ++i) {
      CHECK(inst.events[i].time == double(i));
      if (i > 0) CHECK(inst.events[i].time > inst.events[i - 1].time);
    }
  }
}

TEST_CASE("gen_path_graph: same seed is bitwise identical", "[datagen]") {
  PathGraphInstance a = gen_path_graph(5, Rng(99));
  PathGraphInstance b = gen_path_graph(5, Rng(99));
  CHECK(a.label == b.label);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].src_features == b.events[i].src_features);
    CHECK(a.events[i].dst_features == b.events[i].dst_features);
    CHECK(a.events[i].edge_features == b.events[i].edge_features);
  }
}

TEST_CASE("gen_path_dataset: split sizes and label balance", "[datagen]") {
  PathGraphDataset small = gen_path_dataset(3, 10, 7);
  CHECK(small.train_end == 7);
  CHECK(small.val_end == 8);  // sizes (7, 1, 2)
  CHECK_THROWS_AS(gen_path_dataset(3, 9, 7), ContractError);

  PathGraphDataset ds = gen_path_dataset(5, 1000, 7);
  int positives = 0;
  for (const auto& inst : ds.instances)
    if (inst.label == 1) ++positives;
  CHECK(positives >= 440);  // binomial(1000, 0.5) three-sigma band
  CHECK(positives <= 560);
  CHECK(ds.train_end == 700);
  CHECK(ds.val_end == 850);
}

TEST_CASE("path dataset: write, reload, and byte-exact regeneration",
          "[datagen]") {
  namespace fs = std::filesystem;
  const std::string dir =
      (fs::temp_directory_path() / "ctan_pathds_test").string();
  fs::remove_all(dir);
  PathGraphDataset ds = gen_path_dataset(4, 12, 123);
  write_path_dataset(dir, ds);

  PathGraphDataset back = load_path_dataset(dir);
  REQUIRE(back.count() == 12);
  CHECK(back.n == 4);
  CHECK(back.train_end == ds.train_end);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(back.instances[i].label == ds.instances[i].label);
    REQUIRE(back.instances[i].events.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(back.instances[i].events[j].src == ds.instances[i].events[j].src);
      CHECK(back.instances[i].events[j].src_features ==
            ds.instances[i].events[j].src_features);
      CHECK(back.instances[i].events[j].edge_features ==
            ds.instances[i].events[j].edge_features);
    }
  }

  // regenerating with the same seed produces byte-identical files
  const std::string dir2 =
      (fs::temp_directory_path() / "ctan_pathds_test2").string();
  fs::remove_all(dir2);
  write_path_dataset(dir2, gen_path_dataset(4, 12, 123));
  for (const char* f : {"events.csv", "labels.json", "manifest.json"})
    CHECK(slurp(dir + "/" + f) == slurp(dir2 + "/" + f));
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("periodic bipartite follows the partner rule", "[datagen]") {
  const std::int64_t users = 10, items = 10, period = 5, n = 5000;
  ctdg::EventStream s = gen_periodic_bipartite(users, items, period, n, 9);
  REQUIRE(s.events.size() == static_cast<std::size_t>(n));
  CHECK(s.node_count() == 20);
  for (std::int64_t t = 0; t < n; ++t) {
    const ctdg::Event& e = s.events[static_cast<std::size_t>(t)];
    CHECK(e.time == double(t));
    CHECK(s.external_id(e.src) == t % users);
    CHECK(s.external_id(e.dst) ==
          users + periodic_partner(t, users, items, period));
  }
}

TEST_CASE("periodic bipartite: infinite period keeps a constant partner",
          "[datagen]") {
  ctdg::EventStream s = gen_periodic_bipartite(2, 2, 0, 20, 1);
  for (const auto& e : s.events)
    CHECK(s.external_id(e.dst) - 2 == s.external_id(e.src));

  // period 1 with 2x2 alternates the partner each step
  ctdg::EventStream alt = gen_periodic_bipartite(2, 2, 1, 8, 1);
  for (std::int64_t t = 0; t < 8; ++t)
    CHECK(alt.external_id(alt.events[static_cast<std::size_t>(t)].dst) - 2 ==
          (t % 2 + t) % 2);
  CHECK_THROWS_AS(gen_periodic_bipartite(1, 2, 1, 5, 1), ContractError);
}
