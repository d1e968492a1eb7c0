#pragma once

// Versioned JSON form of a truncated series, used by the cache layer.
//
//   {"format": "qlab.series", "version": 1,
//    "ring": {"kind": "residue", "prime": 7, "exponent": 6},
//    "lowest_exponent": 1, "precision": 246, "coefficients": ["1", ...]}

#include <string>

#include <json.hpp>

#include "qlab/core/errors.hpp"
#include "qlab/core/rings.hpp"
#include "qlab/core/series.hpp"

namespace qlab {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kSeriesFormatVersion = 1;

inline const char* ring_kind_name(RingKind k) {
  switch (k) {
    case RingKind::ExactInteger:
      return "integer";
    case RingKind::ExactRationalLocalized:
      return "rational_localized";
    case RingKind::Residue:
      return "residue";
  }
  return "?";
}

inline RingKind parse_ring_kind(const std::string& s) {
  if (s == "integer") return RingKind::ExactInteger;
  if (s == "rational_localized") return RingKind::ExactRationalLocalized;
  if (s == "residue") return RingKind::Residue;
  throw Error("unknown ring kind '" + s + "'");
}

inline ordered_json ring_to_json(const CoefficientRing& r) {
  ordered_json j;
  j["kind"] = ring_kind_name(r.kind);
  j["prime"] = r.prime;
  j["exponent"] = r.exponent;
  return j;
}

inline CoefficientRing ring_from_json(const ordered_json& j) {
  CoefficientRing r;
  r.kind = parse_ring_kind(j.at("kind").get<std::string>());
  r.prime = j.at("prime").get<std::uint64_t>();
  r.exponent = j.at("exponent").get<int>();
  return r;
}

template <class Ring>
ordered_json series_to_json(const TruncatedSeries<Ring>& a) {
  ordered_json j;
  j["format"] = "qlab.series";
  j["version"] = kSeriesFormatVersion;
  j["ring"] = ring_to_json(a.ring().descriptor());
  j["lowest_exponent"] = a.lowest_exponent();
  j["precision"] = a.precision();
  ordered_json coeffs = ordered_json::array();
  for (const auto& c : a.coefficients()) coeffs.push_back(a.ring().to_string(c));
  j["coefficients"] = std::move(coeffs);
  return j;
}

/// Parses a series and checks it was written for `ring`. Any structural
/// problem raises Error, so callers can treat a bad cache entry as a miss.
template <class Ring>
TruncatedSeries<Ring> series_from_json(const ordered_json& j, const Ring& ring) {
  try {
    if (j.at("format").get<std::string>() != "qlab.series") throw Error("not a series document");
    if (j.at("version").get<int>() != kSeriesFormatVersion) throw Error("unsupported series format version");
    if (!(ring_from_json(j.at("ring")) == ring.descriptor())) {
      throw RingMismatch("stored series is over " + to_string(ring_from_json(j.at("ring"))) + ", expected " +
                         to_string(ring.descriptor()));
    }
    const long low = j.at("lowest_exponent").get<long>();
    const long prec = j.at("precision").get<long>();
    const auto& arr = j.at("coefficients");
    if (low > prec || arr.size() != static_cast<std::size_t>(prec - low)) throw Error("coefficient count does not match range");
    std::vector<typename Ring::value_type> v;
    v.reserve(arr.size());
    for (const auto& c : arr) v.push_back(ring.parse(c.get<std::string>()));
    return TruncatedSeries<Ring>(ring, low, prec, std::move(v));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed series document: ") + e.what());
  }
}

}  // namespace qlab
