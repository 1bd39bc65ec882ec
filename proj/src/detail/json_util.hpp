#pragma once

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tdenv/errors.hpp"
#include "tdenv/geometry.hpp"

namespace tdenv::detail {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ojson parse_document(const std::string& text, const std::string& what) {
  try {
    return ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw ConfigError(what + ": parse error: " + e.what());
  }
}

template <typename J>
const J& require(const J& obj, const char* key, const std::string& what) {
  if (!obj.is_object() || !obj.contains(key))
    throw ConfigError(what + ": missing field '" + key + "'");
  return obj.at(key);
}

template <typename T, typename J>
T get(const J& obj, const char* key, const std::string& what) {
  const auto& v = require(obj, key, what);
  try {
    return v.template get<T>();
  } catch (const nlohmann::detail::exception&) {
    throw ConfigError(what + ": field '" + key + "' has the wrong type");
  }
}

template <typename T, typename J>
T get_or(const J& obj, const char* key, T fallback, const std::string& what) {
  if (!obj.contains(key)) return fallback;
  return get<T>(obj, key, what);
}

/// Points are serialised as {"X": x, "Y": y} throughout.
template <typename J>
Vec2 get_point(const J& v, const std::string& what) {
  if (!v.is_object() || !v.contains("X") || !v.contains("Y") || !v.at("X").is_number() ||
      !v.at("Y").is_number())
    throw ConfigError(what + ": expected a point {\"X\": .., \"Y\": ..}");
  return {v.at("X").template get<double>(), v.at("Y").template get<double>()};
}

/// Rounds for presentation so that dumps use short decimal forms.
inline double round_to(double v, double quantum) {
  // Divide by the integer scale so the result is the double nearest the decimal.
  const double scale = std::round(1.0 / quantum);
  const double r = std::round(v * scale) / scale;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

inline ojson point_json(const Vec2& p, double quantum = 1e-3) {
  ojson j = ojson::object();
  j["X"] = round_to(p.x(), quantum);
  j["Y"] = round_to(p.y(), quantum);
  return j;
}

template <typename Bytes>
std::string base64_encode(const Bytes& bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const unsigned v = (unsigned(bytes[i]) << 16) | (unsigned(bytes[i + 1]) << 8) | unsigned(bytes[i + 2]);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    unsigned v = unsigned(bytes[i]) << 16;
    if (i + 1 < bytes.size()) v |= unsigned(bytes[i + 1]) << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

template <typename J>
void check_schema_version(const J& doc, const std::string& what) {
  if (!doc.contains("schema_version")) throw ConfigError(what + ": missing schema_version");
  if (doc.at("schema_version") != 1)
    throw ConfigError(what + ": unsupported schema_version " + doc.at("schema_version").dump());
}

}  // namespace tdenv::detail
