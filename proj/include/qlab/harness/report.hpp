#pragma once

// Check identifiers, specs and the structured outcome of one check.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlab/core/errors.hpp"

namespace qlab {

enum class CheckId {
  MainSupercongruence,
  ScalarKatzDwork,
  MixedCartierCancellation,
  ClosureScalars,
  BridgeCancellation,
  LayerDivisibility,
  NumeratorSaturation,
  LayerDefectEquivalence,
  SplitTower,
  InertObstruction,
  InertParity,
  InertAp72,
  MumSignature,
  TransportDiagnostic,
  IdentitySuite,
  ModuleWideWitness,
};

inline constexpr CheckId kAllChecks[] = {
    CheckId::MainSupercongruence,    CheckId::ScalarKatzDwork,   CheckId::MixedCartierCancellation,
    CheckId::ClosureScalars,         CheckId::BridgeCancellation, CheckId::LayerDivisibility,
    CheckId::NumeratorSaturation,    CheckId::LayerDefectEquivalence, CheckId::SplitTower,
    CheckId::InertObstruction,       CheckId::InertParity,       CheckId::InertAp72,
    CheckId::MumSignature,           CheckId::TransportDiagnostic, CheckId::IdentitySuite,
    CheckId::ModuleWideWitness,
};

inline const char* to_string(CheckId id) {
  switch (id) {
    case CheckId::MainSupercongruence: return "MainSupercongruence";
    case CheckId::ScalarKatzDwork: return "ScalarKatzDwork";
    case CheckId::MixedCartierCancellation: return "MixedCartierCancellation";
    case CheckId::ClosureScalars: return "ClosureScalars";
    case CheckId::BridgeCancellation: return "BridgeCancellation";
    case CheckId::LayerDivisibility: return "LayerDivisibility";
    case CheckId::NumeratorSaturation: return "NumeratorSaturation";
    case CheckId::LayerDefectEquivalence: return "LayerDefectEquivalence";
    case CheckId::SplitTower: return "SplitTower";
    case CheckId::InertObstruction: return "InertObstruction";
    case CheckId::InertParity: return "InertParity";
    case CheckId::InertAp72: return "InertAp72";
    case CheckId::MumSignature: return "MumSignature";
    case CheckId::TransportDiagnostic: return "TransportDiagnostic";
    case CheckId::IdentitySuite: return "IdentitySuite";
    case CheckId::ModuleWideWitness: return "ModuleWideWitness";
  }
  return "?";
}

inline std::optional<CheckId> parse_check_id(const std::string& s) {
  for (CheckId id : kAllChecks)
    if (s == to_string(id)) return id;
  return std::nullopt;
}

/// Report-only checks never affect the aggregate status.
inline bool is_diagnostic(CheckId id) { return id == CheckId::TransportDiagnostic || id == CheckId::ModuleWideWitness; }

enum class Status { Pass, Fail, Skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "Pass";
    case Status::Fail: return "Fail";
    case Status::Skipped: return "Skipped";
  }
  return "?";
}

inline Status parse_status(const std::string& s) {
  for (Status x : {Status::Pass, Status::Fail, Status::Skipped})
    if (s == to_string(x)) return x;
  throw DomainError("unknown status '" + s + "'");
}

struct CheckSpec {
  CheckId id = CheckId::ClosureScalars;
  std::uint64_t prime = 0;        // 0 for sweeps over many primes
  std::vector<int> ells{1, 2, 3};
  long m_max = 0;
  long r_max = 0;
  long split_max = 97;            // MumSignature sweep bounds
  long inert_max = 83;
  long n_max = 1;                 // TransportDiagnostic
  std::optional<long> precision_override;
};

inline CheckSpec make_spec(CheckId id, std::uint64_t prime = 0) {
  CheckSpec s;
  s.id = id;
  s.prime = prime;
  return s;
}

/// Witnesses keep insertion order; values are decimal strings or short
/// tokens so every report is exactly reproducible.
using Witnesses = std::vector<std::pair<std::string, std::string>>;

struct VerificationReport {
  CheckSpec spec;
  Status status = Status::Skipped;
  std::string modulus;            // e.g. "7^4"; empty when not applicable
  Witnesses witnesses;
  long max_index_tested = -1;
  double elapsed_ms = 0;
  std::optional<std::string> failure_detail;
  std::optional<std::string> note;

  void witness(std::string key, std::string value) { witnesses.emplace_back(std::move(key), std::move(value)); }
  const std::string* find_witness(const std::string& key) const {
    for (const auto& [k, v] : witnesses)
      if (k == key) return &v;
    return nullptr;
  }
  void fail(std::string detail) {
    status = Status::Fail;
    if (!failure_detail) failure_detail = std::move(detail);
  }
};

}  // namespace qlab
