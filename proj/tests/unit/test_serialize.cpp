#include <catch_amalgamated.hpp>

#include <cstdio>

#include "ctan/num/serialize.hpp"
#include "ctan/rng.hpp"

using namespace ctan::num;
using ctan::Rng;

TEST_CASE("parameter checkpoints round-trip bit-exactly", "[numkernel]") {
  Rng rng(101);
  Tensor w({4, 3});
  for (std::int64_t i = 0; i < w.numel(); ++i)
    w[i] = rng.uniform(-10, 10) * std::pow(10.0, rng.uniform(-8, 8));
  Tensor b({3}, {0.1, -0.0, 1e-300});

  nlohmann::json j = params_to_json({{"w", &w}, {"b", &b}});
  // force a full text round trip, not just an in-memory one
  nlohmann::json back = nlohmann::json::parse(j.dump());

  Tensor w2 = tensor_from_json(back.at("w"));
  Tensor b2 = tensor_from_json(back.at("b"));
  REQUIRE(w2.shape() == w.shape());
  for (std::int64_t i = 0; i < w.numel(); ++i) CHECK(w2[i] == w[i]);
  for (std::int64_t i = 0; i < b.numel(); ++i) CHECK(b2[i] == b[i]);
}

TEST_CASE("f64_to_string round-trips through strtod", "[numkernel]") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    double v = rng.uniform(-1, 1) * std::pow(10.0, rng.uniform(-30, 30));
    std::string s = f64_to_string(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}
