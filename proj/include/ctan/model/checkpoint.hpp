#pragma once

#include <string>

#include "ctan/model/params.hpp"
#include "ctan/num/serialize.hpp"

namespace ctan::model {

inline constexpr const char* kCheckpointFormat = "ctan-checkpoint-v1";

struct Checkpoint {
  CtanParams params;
  double dt_scale = 1.0;
};

inline nlohmann::json checkpoint_to_json(const Checkpoint& ck) {
  nlohmann::json j;
  j["format"] = kCheckpointFormat;
  j["config"] = to_json(ck.params.cfg);
  j["readout"] = to_string(ck.params.readout);
  j["dt_scale"] = ck.dt_scale;
  j["params"] = num::params_to_json(ck.params.named());
  return j;
}

inline void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  num::write_json_file(path, checkpoint_to_json(ck));
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  if (!j.contains("format") || j.at("format") != kCheckpointFormat)
    throw ParseError("checkpoint: missing or unsupported format tag");
  Checkpoint ck;
  ck.params.cfg = config_from_json(j.at("config"));
  ck.params.readout = readout_from_string(j.at("readout").get<std::string>());
  ck.dt_scale = j.at("dt_scale").get<double>();
  const nlohmann::json& p = j.at("params");
  for (auto& [name, tensor] : ck.params.named()) {
    if (!p.contains(name))
      throw ParseError("checkpoint: missing parameter '" + name + "'");
    *tensor = num::tensor_from_json(p.at(name));
  }
  // shape audit against the config block
  Rng probe(0);
  CtanParams fresh = CtanParams::init(ck.params.cfg, ck.params.readout, probe);
  auto want = fresh.named();
  auto have = ck.params.named();
  for (std::size_t i = 0; i < want.size(); ++i)
    if (want[i].second->shape() != have[i].second->shape())
      throw DimensionError("checkpoint: parameter '" + want[i].first +
                           "' has shape " +
                           num::Tensor::shape_str(have[i].second->shape()) +
                           ", config implies " +
                           num::Tensor::shape_str(want[i].second->shape()));
  return ck;
}

inline Checkpoint load_checkpoint(const std::string& path) {
  return checkpoint_from_json(num::read_json_file(path));
}

}  // namespace ctan::model
