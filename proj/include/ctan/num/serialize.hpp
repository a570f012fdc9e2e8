#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ctan/num/tensor.hpp"

namespace ctan::num {

/// Shortest decimal form that parses back to the identical f64.
inline std::string f64_to_string(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Named parameter set <-> JSON object {name: {shape: [...], data: [...]}}.
/// Finite doubles round-trip bit-exactly.
inline nlohmann::json params_to_json(
    const std::vector<std::pair<std::string, const Tensor*>>& params) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, t] : params) {
    nlohmann::json entry;
    entry["shape"] = t->shape();
    entry["data"] = t->vec();
    out[name] = std::move(entry);
  }
  return out;
}

inline Tensor tensor_from_json(const nlohmann::json& entry) {
  std::vector<std::int64_t> shape = entry.at("shape").get<std::vector<std::int64_t>>();
  std::vector<double> data = entry.at("data").get<std::vector<double>>();
  return Tensor(std::move(shape), std::move(data));
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open for writing: " + path);
  f << j.dump(2) << "\n";
  if (!f) throw Error("write failed: " + path);
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open for reading: " + path);
  return nlohmann::json::parse(f);
}

}  // namespace ctan::num
