#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "ctan/common.hpp"

namespace ctan {

/// Strict config parsing: every key present must be known.
inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<const char*> allowed,
                                const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known)
      throw ParseError(where + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
T json_get_or(const nlohmann::json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

}  // namespace ctan
