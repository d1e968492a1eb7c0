#pragma once

// Suite assembly and execution: default check lists per prime, a small job
// runner, and the implication chain between the split-prime checks.

#include <algorithm>
#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qlab/harness/checks.hpp"

namespace qlab {

struct SuiteOptions {
  std::vector<std::uint64_t> primes{5, 7, 11, 13, 19, 31};
  std::vector<int> ells{1, 2, 3};
  std::optional<long> m_max, r_max;
  std::optional<long> precision_override;
  bool h0 = false;
};

/// Fills in the per-check defaults for a spec whose id and prime are set.
inline CheckSpec with_defaults(CheckSpec s, const SuiteOptions& o) {
  s.ells = o.ells;
  s.precision_override = o.precision_override;
  switch (s.id) {
    case CheckId::ScalarKatzDwork: s.m_max = o.m_max.value_or(3); break;
    case CheckId::MainSupercongruence: s.m_max = o.m_max.value_or(20); break;
    case CheckId::SplitTower:
      s.m_max = o.m_max.value_or(20);
      s.r_max = o.r_max.value_or(2);
      break;
    case CheckId::InertObstruction: s.m_max = o.m_max.value_or(20); break;
    case CheckId::InertParity:
      s.m_max = o.m_max.value_or(3);
      s.r_max = o.r_max.value_or(2);
      break;
    case CheckId::TransportDiagnostic:
      s.ells = {o.ells.empty() ? 1 : o.ells.front()};
      s.n_max = 1;
      break;
    default: break;
  }
  return s;
}

inline std::vector<CheckSpec> default_suite_specs(const SuiteOptions& o) {
  static constexpr CheckId split_checks[] = {
      CheckId::ClosureScalars,     CheckId::BridgeCancellation, CheckId::MixedCartierCancellation, CheckId::LayerDefectEquivalence,
      CheckId::ScalarKatzDwork,    CheckId::MainSupercongruence, CheckId::SplitTower,             CheckId::LayerDivisibility,
      CheckId::NumeratorSaturation, CheckId::TransportDiagnostic};
  static constexpr CheckId inert_checks[] = {CheckId::InertObstruction, CheckId::InertParity, CheckId::InertAp72};
  std::vector<CheckSpec> specs;
  std::optional<std::uint64_t> identity_prime;
  for (std::uint64_t p : o.primes) {
    const PrimeContext ctx(p);
    if (ctx.is_split()) {
      if (!identity_prime) identity_prime = p;
      for (CheckId id : split_checks) specs.push_back(with_defaults(make_spec(id, p), o));
    } else {
      for (CheckId id : inert_checks) specs.push_back(with_defaults(make_spec(id, p), o));
    }
  }
  if (!o.primes.empty()) {
    specs.push_back(with_defaults(make_spec(CheckId::MumSignature), o));
    specs.push_back(with_defaults(make_spec(CheckId::IdentitySuite, identity_prime.value_or(7)), o));
  }
  if (o.h0) specs.push_back(with_defaults(make_spec(CheckId::ModuleWideWitness, 7), o));
  return specs;
}

inline bool report_order(const VerificationReport& a, const VerificationReport& b) {
  const int ea = a.spec.ells.empty() ? 0 : a.spec.ells.front();
  const int eb = b.spec.ells.empty() ? 0 : b.spec.ells.front();
  return std::tie(a.spec.id, a.spec.prime, ea) < std::tie(b.spec.id, b.spec.prime, eb);
}

/// Runs every spec on up to `jobs` threads; the result is sorted by
/// (check id, prime, first l) regardless of scheduling.
inline std::vector<VerificationReport> run_specs(ArtifactPool& pool, Backend backend, const std::vector<CheckSpec>& specs, unsigned jobs,
                                                 std::uint64_t seed) {
  std::vector<VerificationReport> out(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) out[i] = run_check(pool, backend, specs[i], seed);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(specs.size(), 1))));
  std::vector<std::thread> threads;
  for (unsigned j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  std::stable_sort(out.begin(), out.end(), report_order);
  return out;
}

/// Broken links in the split-prime chain
///   ClosureScalars + BridgeCancellation => MixedCartierCancellation
///   => LayerDefectEquivalence => ScalarKatzDwork => MainSupercongruence.
/// A link is broken when its premise passed and its conclusion failed.
inline std::vector<std::string> implication_violations(const std::vector<VerificationReport>& reports) {
  std::map<std::uint64_t, std::map<CheckId, Status>> by_prime;
  for (const auto& r : reports) {
    if (r.spec.prime == 0) continue;
    auto& slot = by_prime[r.spec.prime];
    auto [it, fresh] = slot.emplace(r.spec.id, r.status);
    if (!fresh && r.status == Status::Fail) it->second = Status::Fail;
  }
  std::vector<std::string> out;
  for (const auto& [p, st] : by_prime) {
    if (!PrimeContext(p).is_split()) continue;
    auto status = [&](CheckId id) -> std::optional<Status> {
      auto it = st.find(id);
      if (it == st.end() || it->second == Status::Skipped) return std::nullopt;
      return it->second;
    };
    std::vector<std::pair<std::string, std::optional<bool>>> levels;
    const auto c = status(CheckId::ClosureScalars), b = status(CheckId::BridgeCancellation);
    levels.emplace_back("ClosureScalars+BridgeCancellation", c && b ? std::optional<bool>(*c == Status::Pass && *b == Status::Pass) : std::nullopt);
    for (CheckId id : {CheckId::MixedCartierCancellation, CheckId::LayerDefectEquivalence, CheckId::ScalarKatzDwork, CheckId::MainSupercongruence}) {
      const auto s = status(id);
      levels.emplace_back(to_string(id), s ? std::optional<bool>(*s == Status::Pass) : std::nullopt);
    }
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      if (levels[i].second == true && levels[i + 1].second == false) {
        out.push_back("p=" + std::to_string(p) + ": " + levels[i].first + " passed but " + levels[i + 1].first + " failed");
      }
    }
  }
  return out;
}

/// Fail if any non-diagnostic check failed or the chain is broken; Pass if
/// every non-diagnostic check passed (and there is at least one); Skipped
/// otherwise, which includes the empty suite.
inline Status aggregate_status(const std::vector<VerificationReport>& reports, const std::vector<std::string>& inconsistencies) {
  bool any = false, all_pass = true;
  for (const auto& r : reports) {
    if (is_diagnostic(r.spec.id)) continue;
    any = true;
    if (r.status == Status::Fail) return Status::Fail;
    if (r.status != Status::Pass) all_pass = false;
  }
  if (!inconsistencies.empty()) return Status::Fail;
  return any && all_pass ? Status::Pass : Status::Skipped;
}

}  // namespace qlab
