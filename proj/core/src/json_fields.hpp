// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>
#include <string_view>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "wavesep/error.hpp"

namespace wavesep::detail {

inline std::string join_path(std::string_view path, std::string_view key) {
  if (path.empty()) return std::string(key);
  return std::string(path) + "." + std::string(key);
}

template <class T>
T convert_field(const nlohmann::json& value, const std::string& where) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!value.is_boolean()) throw ConfigError(where + ": expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!value.is_number_integer()) throw ConfigError(where + ": expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (value.is_number_integer() && !value.is_number_unsigned() && value.get<long long>() < 0) {
        throw ConfigError(where + ": expected a non-negative integer");
      }
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!value.is_number()) throw ConfigError(where + ": expected a number");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!value.is_string()) throw ConfigError(where + ": expected a string");
  }
  return value.get<T>();
}

template <class T>
T required(const nlohmann::json& j, std::string_view path, std::string_view key) {
  const std::string where = join_path(path, key);
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing required field");
  return convert_field<T>(j.at(std::string(key)), where);
}

template <class T>
T optional(const nlohmann::json& j, std::string_view path, std::string_view key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(std::string(key)).is_null()) return fallback;
  return convert_field<T>(j.at(std::string(key)), join_path(path, key));
}

inline const nlohmann::json& required_object(const nlohmann::json& j, std::string_view path,
                                             std::string_view key) {
  const std::string where = join_path(path, key);
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing required field");
  const auto& v = j.at(std::string(key));
  if (!v.is_object()) throw ConfigError(where + ": expected an object");
  return v;
}

}  // namespace wavesep::detail
