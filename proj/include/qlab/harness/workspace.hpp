#pragma once

// Per-prime artifacts shared by the checks: the dictionary and Frobenius
// defects in the chosen backend, the powers of U_p, and the integer sequence
// tables. Everything is built at most once and optionally persisted through
// an ArtifactCache.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <type_traits>

#include "qlab/cli/cache.hpp"
#include "qlab/core/prime_context.hpp"
#include "qlab/core/series_json.hpp"
#include "qlab/frobenius/defects.hpp"
#include "qlab/modular/dictionary.hpp"
#include "qlab/sequence/cache.hpp"

namespace qlab {

/// 5p^2 + p + 1: one more than needed for U_p through q^(5p^2) and for
/// Lambda_p outputs through q^(5p).
inline long working_precision(std::uint64_t p) { return static_cast<long>(5 * p * p + p + 1); }

enum class Backend { Exact, Residue };

inline const char* to_string(Backend b) { return b == Backend::Exact ? "exact" : "residue"; }

inline Backend parse_backend(const std::string& s) {
  if (s == "exact") return Backend::Exact;
  if (s == "residue") return Backend::Residue;
  throw DomainError("unknown backend '" + s + "' (expected exact or residue)");
}

template <class Ring>
ordered_json dictionary_to_json(const ModularDictionary<Ring>& d) {
  ordered_json j;
  j["precision"] = d.precision();
  auto& objs = j["objects"];
  objs = ordered_json::object();
  for (const auto& [name, obj] : d.objects()) {
    objs[to_string(name)] = {{"construction", to_string(obj.construction)}, {"series", series_to_json(obj.series)}};
  }
  return j;
}

/// Reads a stored dictionary and truncates every object to `precision`
/// (which must not exceed the stored precision).
template <class Ring>
ModularDictionary<Ring> dictionary_from_json(const ordered_json& j, const Ring& R, long precision) {
  const long stored = j.at("precision").get<long>();
  if (precision > stored) throw PrecisionError("cached dictionary is shallower than requested");
  ModularDictionary<Ring> d(R, precision);
  for (const auto& [key, value] : j.at("objects").items()) {
    const auto name = parse_object_name(key);
    if (!name) throw Error("unknown dictionary object '" + key + "'");
    std::optional<Construction> c;
    for (int i = 0; i <= static_cast<int>(Construction::ThetaProduct); ++i) {
      if (value.at("construction") == to_string(static_cast<Construction>(i))) c = static_cast<Construction>(i);
    }
    if (!c) throw Error("unknown construction for '" + key + "'");
    d.insert(*name, series_from_json(value.at("series"), R).truncated(precision), *c);
  }
  for (ObjectName required : {ObjectName::u, ObjectName::g, ObjectName::t, ObjectName::H_mix, ObjectName::C0, ObjectName::uC0, ObjectName::C_mix}) {
    if (!d.contains(required)) throw Error(std::string("cached dictionary lacks ") + to_string(required));
  }
  return d;
}

template <class Ring>
class PrimeWorkspace {
 public:
  PrimeWorkspace(PrimeContext ctx, Ring ring, long precision, ArtifactCache* cache)
      : ctx_(ctx), ring_(std::move(ring)), precision_(precision), cache_(cache) {
    if (precision_ < static_cast<long>(ctx_.p()) + 1) {
      throw DomainError("precision " + std::to_string(precision_) + " is below p+1 = " + std::to_string(ctx_.p() + 1));
    }
  }

  const PrimeContext& ctx() const { return ctx_; }
  const Ring& ring() const { return ring_; }
  long precision() const { return precision_; }
  static constexpr Backend backend() { return is_residue_ring_v<Ring> ? Backend::Residue : Backend::Exact; }

  const ModularDictionary<Ring>& dict() {
    std::call_once(dict_once_, [this] {
      auto build = [this] { return build_dictionary(ring_, precision_); };
      if (!cache_) {
        dict_.emplace(build());
        return;
      }
      const CacheKey key{"dictionary", ctx_.p(), to_string(backend()), precision_};
      dict_.emplace(cache_->get_or_build(
          key, true, build, [](const auto& d) { return dictionary_to_json(d); },
          [this](const ordered_json& j, long) { return dictionary_from_json(j, ring_, precision_); }));
    });
    return *dict_;
  }

  const FrobeniusDefects<Ring>& defects() {
    std::call_once(defects_once_, [this] { defects_.emplace(build_defects(dict(), ctx_)); });
    return *defects_;
  }

  /// U_p^l for l = 1, 2, 3.
  const TruncatedSeries<Ring>& U_power(int ell) {
    if (ell < 1 || ell > 3) throw DomainError("U_p power must be 1..3");
    std::call_once(powers_once_, [this] {
      const auto& U = defects().U;
      auto U2 = mul(U, U);
      auto U3 = mul(U2, U);
      powers_.emplace(std::array<TruncatedSeries<Ring>, 3>{U, std::move(U2), std::move(U3)});
    });
    return (*powers_)[static_cast<std::size_t>(ell - 1)];
  }

 private:
  PrimeContext ctx_;
  Ring ring_;
  long precision_;
  ArtifactCache* cache_;
  std::once_flag dict_once_, defects_once_, powers_once_;
  std::optional<ModularDictionary<Ring>> dict_;
  std::optional<FrobeniusDefects<Ring>> defects_;
  std::optional<std::array<TruncatedSeries<Ring>, 3>> powers_;
};

/// Z/p^(K+guard) for the residue backend; fails when the modulus does not
/// fit the 64-bit representation.
inline ResidueRing residue_ring_for(const PrimeContext& ctx) {
  if (!checked_pow(ctx.p(), static_cast<unsigned>(ctx.working_exponent()))) {
    throw DomainError("p^" + std::to_string(ctx.working_exponent()) + " does not fit the 64-bit residue backend at p=" +
                      std::to_string(ctx.p()) + "; use the exact backend");
  }
  return ResidueRing(ctx.p(), ctx.working_exponent());
}

/// Shared, lazily built artifacts for a whole run.
class ArtifactPool {
 public:
  explicit ArtifactPool(ArtifactCache* cache = nullptr, std::optional<long> precision_override = std::nullopt)
      : cache_(cache), precision_override_(precision_override) {}

  long precision_for(std::uint64_t p) const { return precision_override_.value_or(working_precision(p)); }
  std::optional<long> precision_override() const { return precision_override_; }
  ArtifactCache* cache() const { return cache_; }

  PrimeWorkspace<ResidueRing>& residue(std::uint64_t p) { return get(residue_, p, [&](const PrimeContext& c) { return residue_ring_for(c); }); }
  PrimeWorkspace<LocalRationalRing>& exact(std::uint64_t p) { return get(exact_, p, [&](const PrimeContext& c) { return LocalRationalRing(c.p()); }); }

  /// The integer dictionary used for branch coefficients, at precision at
  /// least n.
  std::shared_ptr<const ModularDictionary<IntegerRing>> integer_dictionary(long n) {
    std::lock_guard lock(mu_);
    if (!integer_dict_ || integer_dict_->precision() < n) {
      integer_dict_ = std::make_shared<const ModularDictionary<IntegerRing>>(build_dictionary(IntegerRing{}, std::max(n, 4L)));
    }
    return integer_dict_;
  }

  /// Sequence tables through at least A_N.
  std::shared_ptr<const SequenceCache> sequence(long N) {
    std::lock_guard lock(mu_);
    N = std::max(N, 2L);
    if (sequence_ && sequence_->N >= N) return sequence_;
    auto build = [N] { return build_sequence_cache(N); };
    SequenceCache s = cache_ ? cache_->get_or_build(
                                   CacheKey{"sequence", 0, "exact", N}, true, build, [](const SequenceCache& c) { return sequence_cache_to_json(c); },
                                   [](const ordered_json& j, long) { return sequence_cache_from_json(j); })
                             : build();
    sequence_ = std::make_shared<const SequenceCache>(std::move(s));
    return sequence_;
  }

 private:
  template <class Ring, class MakeRing>
  PrimeWorkspace<Ring>& get(std::map<std::uint64_t, std::unique_ptr<PrimeWorkspace<Ring>>>& m, std::uint64_t p, MakeRing make) {
    std::lock_guard lock(mu_);
    auto& slot = m[p];
    if (!slot) {
      PrimeContext ctx(p);
      slot = std::make_unique<PrimeWorkspace<Ring>>(ctx, make(ctx), precision_for(p), cache_);
    }
    return *slot;
  }

  ArtifactCache* cache_;
  std::optional<long> precision_override_;
  std::mutex mu_;
  std::map<std::uint64_t, std::unique_ptr<PrimeWorkspace<ResidueRing>>> residue_;
  std::map<std::uint64_t, std::unique_ptr<PrimeWorkspace<LocalRationalRing>>> exact_;
  std::shared_ptr<const ModularDictionary<IntegerRing>> integer_dict_;
  std::shared_ptr<const SequenceCache> sequence_;
};

}  // namespace qlab
