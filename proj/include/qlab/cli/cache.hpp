#pragma once

// Content-addressed cache for expensive deterministic artifacts (dictionaries,
// sequence tables). Entries live in memory and, when a writable directory is
// configured, on disk as JSON with a checksum. A damaged or mismatched entry
// is treated as a miss and rebuilt.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "qlab/core/errors.hpp"

namespace qlab {

inline constexpr const char* kToolVersion = "1.0.0";

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct CacheKey {
  std::string object;
  std::uint64_t prime = 0;
  std::string backend;
  long precision = 0;
};

struct CacheStats {
  long memory_hits = 0, disk_hits = 0, misses = 0, rejected = 0, writes = 0;
};

class ArtifactCache {
 public:
  /// No directory: memory only. An unusable directory also degrades to
  /// memory only; `persistent()` reports which mode is active.
  explicit ArtifactCache(std::optional<std::filesystem::path> dir = std::nullopt, std::string tool_version = kToolVersion)
      : tool_version_(std::move(tool_version)) {
    if (!dir) return;
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    const auto probe = *dir / ".qlab-write-probe";
    std::ofstream(probe) << "ok";
    if (!ec && std::filesystem::exists(probe)) {
      std::filesystem::remove(probe, ec);
      dir_ = std::move(dir);
    } else {
      degraded_ = true;
    }
  }

  bool persistent() const { return dir_.has_value(); }
  bool degraded() const { return degraded_; }
  const std::string& tool_version() const { return tool_version_; }
  CacheStats stats() const {
    std::lock_guard lock(mu_);
    return stats_;
  }

  std::string address(const CacheKey& k) const {
    nlohmann::ordered_json j{{"object", k.object}, {"prime", k.prime}, {"backend", k.backend}, {"precision", k.precision},
                             {"tool_version", tool_version_}};
    return k.object + "-p" + std::to_string(k.prime) + "-" + k.backend + "-N" + std::to_string(k.precision) + "-" + hex64(fnv1a64(j.dump()));
  }

  /// Payload stored under `key`, or under the same key at the smallest
  /// larger precision when `allow_larger` is set. Returns the payload and
  /// the precision it was stored at.
  std::optional<std::pair<nlohmann::ordered_json, long>> find(const CacheKey& key, bool allow_larger) {
    std::lock_guard lock(mu_);
    if (auto hit = find_exact(key)) return std::make_pair(std::move(*hit), key.precision);
    if (allow_larger) {
      for (long n : larger_precisions(key)) {
        CacheKey k = key;
        k.precision = n;
        if (auto hit = find_exact(k)) return std::make_pair(std::move(*hit), n);
      }
    }
    ++stats_.misses;
    return std::nullopt;
  }

  void put(const CacheKey& key, const nlohmann::ordered_json& payload) {
    std::lock_guard lock(mu_);
    const auto addr = address(key);
    memory_[addr] = payload;
    ++stats_.writes;
    if (!dir_) return;
    nlohmann::ordered_json doc{{"format", "qlab.cache"},
                               {"version", 1},
                               {"tool_version", tool_version_},
                               {"key", {{"object", key.object}, {"prime", key.prime}, {"backend", key.backend}, {"precision", key.precision}}},
                               {"checksum", hex64(fnv1a64(payload.dump()))},
                               {"payload", payload}};
    const auto path = *dir_ / (addr + ".json");
    const auto tmp = *dir_ / (addr + ".json.tmp");
    {
      std::ofstream out(tmp, std::ios::binary);
      out << doc.dump();
      if (!out) {
        degraded_ = true;
        return;
      }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) degraded_ = true;
  }

  /// Look up `key` (or a larger-precision entry when `decode` accepts a
  /// stored precision above the request), otherwise build and store. A
  /// payload that fails to decode is discarded and rebuilt.
  template <class Build, class Encode, class Decode>
  auto get_or_build(const CacheKey& key, bool allow_larger, Build build, Encode encode, Decode decode) -> decltype(build()) {
    if (auto hit = find(key, allow_larger)) {
      try {
        return decode(hit->first, hit->second);
      } catch (const std::exception&) {
        std::lock_guard lock(mu_);
        ++stats_.rejected;
      }
    }
    auto value = build();
    put(key, encode(value));
    return value;
  }

 private:
  std::optional<nlohmann::ordered_json> find_exact(const CacheKey& key) {
    const auto addr = address(key);
    if (auto it = memory_.find(addr); it != memory_.end()) {
      ++stats_.memory_hits;
      return it->second;
    }
    if (!dir_) return std::nullopt;
    const auto path = *dir_ / (addr + ".json");
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      auto doc = nlohmann::ordered_json::parse(ss.str());
      const auto& k = doc.at("key");
      const bool ok = doc.at("format") == "qlab.cache" && doc.at("version") == 1 && doc.at("tool_version") == tool_version_ &&
                      k.at("object") == key.object && k.at("prime") == key.prime && k.at("backend") == key.backend &&
                      k.at("precision") == key.precision && doc.at("checksum") == hex64(fnv1a64(doc.at("payload").dump()));
      if (!ok) {
        ++stats_.rejected;
        return std::nullopt;
      }
      ++stats_.disk_hits;
      memory_[addr] = doc.at("payload");
      return doc.at("payload");
    } catch (const nlohmann::json::exception&) {
      ++stats_.rejected;
      return std::nullopt;
    }
  }

  // Precisions above key.precision with an entry for the same object, prime
  // and backend, ascending.
  std::vector<long> larger_precisions(const CacheKey& key) const {
    std::vector<long> found;
    const std::string prefix = key.object + "-p" + std::to_string(key.prime) + "-" + key.backend + "-N";
    auto consider = [&](const std::string& name) {
      if (name.rfind(prefix, 0) != 0) return;
      const auto rest = name.substr(prefix.size());
      const auto dash = rest.find('-');
      if (dash == std::string::npos) return;
      try {
        const long n = std::stol(rest.substr(0, dash));
        if (n > key.precision) found.push_back(n);
      } catch (const std::exception&) {
      }
    };
    for (const auto& [addr, _] : memory_) consider(addr);
    if (dir_) {
      std::error_code ec;
      for (const auto& entry : std::filesystem::directory_iterator(*dir_, ec)) {
        const auto name = entry.path().filename().string();
        if (name.size() > 5 && name.ends_with(".json")) consider(name.substr(0, name.size() - 5));
      }
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
  }

  std::string tool_version_;
  std::optional<std::filesystem::path> dir_;
  bool degraded_ = false;
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::ordered_json> memory_;
  CacheStats stats_;
};

}  // namespace qlab
