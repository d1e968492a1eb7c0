#pragma once

// SequenceCache: the integer tables the congruence checks read, plus their
// versioned JSON form.

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "qlab/core/errors.hpp"
#include "qlab/sequence/divisor_sums.hpp"
#include "qlab/sequence/recurrence.hpp"

namespace qlab {

enum class SequenceProvenance { Recurrence, DirectHypergeometric, DivisorSums };

inline std::string to_string(SequenceProvenance p) {
  switch (p) {
    case SequenceProvenance::Recurrence: return "recurrence";
    case SequenceProvenance::DirectHypergeometric: return "direct_hypergeometric";
    case SequenceProvenance::DivisorSums: return "divisor_sums";
  }
  return "?";
}

inline SequenceProvenance parse_provenance(const std::string& s) {
  for (auto p : {SequenceProvenance::Recurrence, SequenceProvenance::DirectHypergeometric, SequenceProvenance::DivisorSums})
    if (to_string(p) == s) return p;
  throw DomainError("unknown sequence provenance '" + s + "'");
}

inline constexpr int kSequenceFormatVersion = 1;

/// a_mix[n] = A_n for 0 <= n <= N. s, beta and c_mix are indexed by n for
/// 1 <= n <= N; slot 0 holds 0, 0 and the constant term 1.
struct SequenceCache {
  long N = 0;
  SequenceProvenance provenance = SequenceProvenance::Recurrence;
  std::vector<mpz_class> a_mix, s_vals, beta_vals, c_mix;

  const mpz_class& A(long n) const {
    if (n < 0 || n > N) throw PrecisionError("A_" + std::to_string(n) + " is beyond the cached range 0.." + std::to_string(N));
    return a_mix[static_cast<std::size_t>(n)];
  }
  const mpz_class& c(long n) const {
    if (n < 0 || n > N) throw PrecisionError("c_" + std::to_string(n) + " is beyond the cached range 0.." + std::to_string(N));
    return c_mix[static_cast<std::size_t>(n)];
  }
  std::string key() const { return "sequence-N" + std::to_string(N) + "-" + to_string(provenance); }
};

/// First broken cache invariant, if any. The recurrence is rechecked on every
/// term; multiplicativity is spot-checked on `samples` random coprime pairs.
inline std::optional<std::string> sequence_cache_violation(const SequenceCache& c, int samples = 64, std::uint64_t seed = 1) {
  const auto len = static_cast<std::size_t>(c.N + 1);
  if (c.a_mix.size() != len || c.s_vals.size() != len || c.beta_vals.size() != len || c.c_mix.size() != len) {
    return std::string("table lengths do not match N");
  }
  const long seeds[] = {1, 18, 864};
  for (long n = 0; n <= std::min(c.N, 2L); ++n) {
    if (c.a_mix[static_cast<std::size_t>(n)] != seeds[n]) return "seed A_" + std::to_string(n) + " is wrong";
  }
  for (long n = 0; n + 2 <= c.N; ++n) {
    if (recurrence_residual(c.a_mix, n) != 0) return "A_" + std::to_string(n + 2) + " breaks the recurrence";
  }
  for (std::size_t n = 1; n < len; ++n) {
    if (c.c_mix[n] != 3 * c.s_vals[n] - 27 * c.beta_vals[n]) return "c_" + std::to_string(n) + " != 3 s - 27 beta";
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples && c.N >= 6; ++i) {
    std::uniform_int_distribution<long> pick(2, c.N);
    const long a = pick(rng), b = pick(rng);
    if (a * b > c.N || std::gcd(a, b) != 1) continue;
    const auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b), iab = static_cast<std::size_t>(a * b);
    if (c.s_vals[iab] != c.s_vals[ia] * c.s_vals[ib]) return "s is not multiplicative at " + std::to_string(a) + "*" + std::to_string(b);
    if (c.beta_vals[iab] != c.beta_vals[ia] * c.beta_vals[ib]) return "beta is not multiplicative at " + std::to_string(a) + "*" + std::to_string(b);
  }
  return std::nullopt;
}

/// Builds A_0..A_N by the requested generator plus the divisor-sum tables,
/// and validates the result.
inline SequenceCache build_sequence_cache(long N, SequenceProvenance provenance = SequenceProvenance::Recurrence) {
  if (N < 2) throw DomainError("sequence cache needs N >= 2");
  SequenceCache c;
  c.N = N;
  c.provenance = provenance;
  c.a_mix = provenance == SequenceProvenance::DirectHypergeometric ? a_mix_direct(N) : a_mix_recurrence(N);
  auto t = divisor_sums(N);
  c.c_mix = c_mix_table(t);
  c.s_vals = std::move(t.s);
  c.beta_vals = std::move(t.beta);
  if (auto why = sequence_cache_violation(c)) throw IdentityMismatch("sequence cache: " + *why);
  return c;
}

namespace detail {

inline nlohmann::ordered_json mpz_array(const std::vector<mpz_class>& v, std::size_t from) {
  auto a = nlohmann::ordered_json::array();
  for (std::size_t i = from; i < v.size(); ++i) a.push_back(v[i].get_str());
  return a;
}

inline std::vector<mpz_class> parse_mpz_array(const nlohmann::ordered_json& a, std::size_t expected, std::size_t offset) {
  if (!a.is_array() || a.size() != expected) throw Error("sequence array has the wrong length");
  std::vector<mpz_class> v(offset);
  for (const auto& x : a) {
    mpz_class z;
    if (z.set_str(x.get<std::string>(), 10) != 0) throw Error("bad integer '" + x.get<std::string>() + "' in sequence cache");
    v.push_back(z);
  }
  return v;
}

}  // namespace detail

inline nlohmann::ordered_json sequence_cache_to_json(const SequenceCache& c) {
  nlohmann::ordered_json j;
  j["format"] = "qlab.sequence";
  j["version"] = kSequenceFormatVersion;
  j["N"] = c.N;
  j["provenance"] = to_string(c.provenance);
  j["a_mix"] = detail::mpz_array(c.a_mix, 0);
  j["s"] = detail::mpz_array(c.s_vals, 1);
  j["beta"] = detail::mpz_array(c.beta_vals, 1);
  j["c_mix"] = detail::mpz_array(c.c_mix, 1);
  return j;
}

/// Parses and re-validates; any malformed or inconsistent document throws.
inline SequenceCache sequence_cache_from_json(const nlohmann::ordered_json& j) {
  try {
    if (j.at("format") != "qlab.sequence") throw Error("not a sequence cache document");
    if (j.at("version") != kSequenceFormatVersion) throw Error("unsupported sequence cache version");
    SequenceCache c;
    c.N = j.at("N").get<long>();
    if (c.N < 2) throw Error("sequence cache N out of range");
    c.provenance = parse_provenance(j.at("provenance").get<std::string>());
    const auto n = static_cast<std::size_t>(c.N);
    c.a_mix = detail::parse_mpz_array(j.at("a_mix"), n + 1, 0);
    c.s_vals = detail::parse_mpz_array(j.at("s"), n, 1);
    c.beta_vals = detail::parse_mpz_array(j.at("beta"), n, 1);
    c.c_mix = detail::parse_mpz_array(j.at("c_mix"), n, 1);
    c.c_mix[0] = 1;
    if (auto why = sequence_cache_violation(c)) throw IdentityMismatch("sequence cache: " + *why);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed sequence cache: ") + e.what());
  }
}

}  // namespace qlab
