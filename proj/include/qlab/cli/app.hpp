#pragma once

// Command-line front end. Option values are resolved as
// flag > QLAB_* environment variable > built-in default.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlab/cli/report.hpp"
#include "qlab/harness/suite.hpp"

namespace qlab {

enum class Command { Dict, Sequence, Check, Suite, Bench };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::Dict: return "dict";
    case Command::Sequence: return "sequence";
    case Command::Check: return "check";
    case Command::Suite: return "suite";
    case Command::Bench: return "bench";
  }
  return "?";
}

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct RunConfig {
  Command command = Command::Suite;
  std::vector<std::uint64_t> primes{5, 7, 11, 13, 19, 31};
  std::optional<std::uint64_t> prime;
  std::optional<std::string> id;
  std::vector<int> ells{1, 2, 3};
  std::optional<long> m_max, r_max, precision;
  Backend backend = Backend::Residue;
  std::optional<std::string> cache_dir;
  ReportFormat format = ReportFormat::Json;
  std::optional<std::string> out;
  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 1;
  bool timing = false;
  bool h0 = false;
  long n = 100;      // sequence: last index
  long terms = 8;    // dict: coefficients shown per object
};

/// Primes the command will touch, after defaults.
inline std::vector<std::uint64_t> config_primes(const RunConfig& c) {
  if (c.command == Command::Check || c.command == Command::Dict) return {c.prime.value_or(7)};
  if (c.command == Command::Sequence) return {};
  return c.primes;
}

/// Throws DomainError for any configuration the tool refuses to run.
inline void validate_config(const RunConfig& c) {
  if (c.command == Command::Check && !c.prime) throw DomainError("check requires --prime");
  for (std::uint64_t p : config_primes(c)) {
    PrimeContext::validate_prime(p);
    if (c.precision && *c.precision < static_cast<long>(p) + 1) {
      throw DomainError("precision " + std::to_string(*c.precision) + " is below p+1 = " + std::to_string(p + 1));
    }
    if (c.backend == Backend::Residue) residue_ring_for(PrimeContext(p));
  }
  if (c.ells.empty()) throw DomainError("--ell must name at least one of 1,2,3");
  for (int e : c.ells)
    if (e < 1 || e > 3) throw DomainError("--ell values must be in {1,2,3}");
  if (c.m_max && *c.m_max < 0) throw DomainError("--m-max must be >= 0");
  if (c.r_max && *c.r_max < 1) throw DomainError("--r-max must be >= 1");
  if (c.jobs < 1) throw DomainError("--jobs must be >= 1");
  if (c.n < 2) throw DomainError("--n must be >= 2");
  if (c.terms < 1) throw DomainError("--terms must be >= 1");
  if (c.id && !parse_check_id(*c.id)) throw DomainError("unknown check id '" + *c.id + "'");
}

/// Configuration echo stored in reports. Paths are left out so a run with
/// and without a cache produces the same bytes.
inline nlohmann::ordered_json config_echo(const RunConfig& c) {
  nlohmann::ordered_json j;
  auto opt = [](const auto& o) { return o ? nlohmann::ordered_json(*o) : nlohmann::ordered_json(nullptr); };
  j["command"] = to_string(c.command);
  j["primes"] = config_primes(c);
  j["id"] = opt(c.id);
  j["ell"] = c.ells;
  j["m_max"] = opt(c.m_max);
  j["r_max"] = opt(c.r_max);
  j["precision"] = opt(c.precision);
  j["backend"] = to_string(c.backend);
  j["format"] = to_string(c.format);
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["h0"] = c.h0;
  j["timing"] = c.timing;
  return j;
}

inline SuiteOptions suite_options(const RunConfig& c) {
  SuiteOptions o;
  o.primes = config_primes(c);
  o.ells = c.ells;
  o.m_max = c.m_max;
  o.r_max = c.r_max;
  o.precision_override = c.precision;
  o.h0 = c.h0;
  return o;
}

inline std::vector<CheckSpec> config_specs(const RunConfig& c) {
  const SuiteOptions o = suite_options(c);
  if (c.command == Command::Suite) return default_suite_specs(o);
  if (c.id) {
    const CheckId id = *parse_check_id(*c.id);
    const bool sweep = id == CheckId::MumSignature;
    return {with_defaults(make_spec(id, sweep ? 0 : *c.prime), o)};
  }
  std::vector<CheckSpec> specs;
  for (const auto& s : default_suite_specs(o))
    if (s.prime == *c.prime && s.id != CheckId::IdentitySuite) specs.push_back(s);
  return specs;
}

inline SuiteReport run_suite_command(const RunConfig& c, ArtifactCache* cache) {
  const auto start = std::chrono::steady_clock::now();
  ArtifactPool pool(cache, c.precision);
  SuiteReport s;
  s.config = config_echo(c);
  s.reports = run_specs(pool, c.backend, config_specs(c), c.jobs, c.seed);
  s.inconsistencies = implication_violations(s.reports);
  s.aggregate = aggregate_status(s.reports, s.inconsistencies);
  if (c.timing) {
    s.total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  } else {
    for (auto& r : s.reports) r.elapsed_ms = 0;
  }
  return s;
}

namespace detail {

template <class Ring>
std::string render_dictionary(const ModularDictionary<Ring>& d, const RunConfig& c) {
  const std::uint64_t p = *config_primes(c).begin();
  std::ostringstream os;
  auto coeffs = [&](const TruncatedSeries<Ring>& s) {
    std::vector<std::string> v;
    const long lo = s.lowest_exponent();
    for (long n = lo; n < std::min(s.precision(), lo + c.terms); ++n) v.push_back(s.ring().to_string(s[n]));
    return v;
  };
  if (c.format == ReportFormat::Json) {
    nlohmann::ordered_json j;
    j["schema"] = "qlab.dictionary_summary";
    j["schema_version"] = kReportSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["config"] = config_echo(c);
    j["prime"] = p;
    j["ring"] = to_string(d.ring().descriptor());
    j["precision"] = d.precision();
    auto& objs = j["objects"];
    objs = nlohmann::ordered_json::array();
    for (const auto& [name, obj] : d.objects()) {
      objs.push_back({{"name", to_string(name)},
                      {"construction", to_string(obj.construction)},
                      {"lowest_exponent", obj.series.lowest_exponent()},
                      {"coefficients", coeffs(obj.series)}});
    }
    os << j.dump(2) << '\n';
  } else {
    const char sep = c.format == ReportFormat::Tsv ? '\t' : ' ';
    if (c.format == ReportFormat::Tsv) os << "object\tconstruction\tlowest_exponent\tcoefficients\n";
    else os << "dictionary over " << to_string(d.ring().descriptor()) << " through q^" << d.precision() - 1 << "\n\n";
    for (const auto& [name, obj] : d.objects()) {
      std::string list;
      for (const auto& x : coeffs(obj.series)) list += (list.empty() ? "" : ",") + x;
      if (c.format == ReportFormat::Tsv) {
        os << to_string(name) << sep << to_string(obj.construction) << sep << obj.series.lowest_exponent() << sep << list << '\n';
      } else {
        os << std::left << std::setw(14) << to_string(name) << std::setw(17) << to_string(obj.construction) << "q^" << obj.series.lowest_exponent()
           << ": " << list << '\n';
      }
    }
  }
  return os.str();
}

inline std::string run_dict(const RunConfig& c, ArtifactCache* cache) {
  ArtifactPool pool(cache, c.precision);
  const std::uint64_t p = c.prime.value_or(7);
  return with_workspace(pool, c.backend, p, [&](auto& ws) { return render_dictionary(ws.dict(), c); });
}

inline std::string run_sequence(const RunConfig& c, ArtifactCache* cache) {
  ArtifactPool pool(cache);
  auto seq = pool.sequence(c.n);
  std::ostringstream os;
  if (c.format == ReportFormat::Json) {
    // A cached table may run past N; the JSON must describe exactly 0..N.
    if (seq->N != c.n) seq = std::make_shared<const SequenceCache>(build_sequence_cache(c.n));
    os << sequence_cache_to_json(*seq).dump(2) << '\n';
    return os.str();
  }
  if (c.format == ReportFormat::Tsv) os << "n\tA_n\tc_n\n";
  for (long n = 0; n <= c.n; ++n) {
    const std::string cn = seq->c(n).get_str();
    if (c.format == ReportFormat::Tsv) os << n << '\t' << seq->A(n).get_str() << '\t' << cn << '\n';
    else os << std::setw(5) << n << "  " << seq->A(n).get_str() << "  c=" << cn << '\n';
  }
  return os.str();
}

inline std::string run_bench(const RunConfig& c) {
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::time_point a, clock::time_point b) { return std::chrono::duration<double, std::milli>(b - a).count(); };
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::uint64_t p : c.primes) {
    ArtifactPool pool(nullptr, c.precision);
    const auto t0 = clock::now();
    const long precision = with_workspace(pool, c.backend, p, [](auto& ws) {
      ws.dict();
      return ws.precision();
    });
    const auto t1 = clock::now();
    with_workspace(pool, c.backend, p, [](auto& ws) { return ws.defects().U.precision(); });
    const auto t2 = clock::now();
    rows.push_back({{"prime", p}, {"backend", to_string(c.backend)}, {"precision", precision}, {"dictionary_ms", std::llround(ms(t0, t1))},
                    {"defects_ms", std::llround(ms(t1, t2))}});
  }
  std::ostringstream os;
  if (c.format == ReportFormat::Json) {
    nlohmann::ordered_json j{{"schema", "qlab.bench"}, {"schema_version", kReportSchemaVersion}, {"tool_version", kToolVersion}, {"rows", rows}};
    os << j.dump(2) << '\n';
  } else {
    os << "p\tbackend\tprecision\tdictionary_ms\tdefects_ms\n";
    for (const auto& r : rows) {
      os << r["prime"] << '\t' << r["backend"].get<std::string>() << '\t' << r["precision"] << '\t' << r["dictionary_ms"] << '\t' << r["defects_ms"]
         << '\n';
    }
  }
  return os.str();
}

}  // namespace detail

/// Runs the tool. Exit codes: 0 aggregate Pass or Skipped, 1 any Fail,
/// 2 usage or configuration error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"qlab: q-series verification harness", "qlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string backend = to_string(cfg.backend), format = to_string(cfg.format);
  std::string id;
  std::optional<std::string> cache_dir, out_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--backend", backend, "exact or residue")->envname("QLAB_BACKEND")->check(CLI::IsMember({"exact", "residue"}));
    sub->add_option("--precision", cfg.precision, "series precision override (>= p+1)")->envname("QLAB_PRECISION");
    sub->add_option("--cache-dir", cache_dir, "artifact cache directory")->envname("QLAB_CACHE_DIR");
    sub->add_option("--format", format, "human, json or tsv")->envname("QLAB_FORMAT")->check(CLI::IsMember({"human", "json", "tsv"}));
    sub->add_option("--out", out_path, "write the report here instead of stdout");
  };
  auto add_check_opts = [&](CLI::App* sub) {
    sub->add_option("--ell", cfg.ells, "layers to test, subset of 1,2,3")->delimiter(',')->envname("QLAB_ELL");
    sub->add_option("--m-max", cfg.m_max, "largest m for sequence congruences")->envname("QLAB_M_MAX");
    sub->add_option("--r-max", cfg.r_max, "largest tower exponent r")->envname("QLAB_R_MAX");
    sub->add_option("--seed", cfg.seed, "seed for randomized property checks")->envname("QLAB_SEED");
    sub->add_option("--jobs", cfg.jobs, "worker threads")->envname("QLAB_JOBS");
    sub->add_flag("--timing", cfg.timing, "record wall-clock times in the report");
    sub->add_flag("--h0", cfg.h0, "add the module-wide witness with H0 = q/u");
  };

  auto* dict = app.add_subcommand("dict", "print the modular dictionary at one prime");
  dict->add_option("--prime", cfg.prime, "prime (default 7)");
  dict->add_option("--terms", cfg.terms, "coefficients shown per object");
  add_common(dict);

  auto* seq = app.add_subcommand("sequence", "print A_n and c_n");
  seq->add_option("--n", cfg.n, "last index (default 100)");
  seq->add_option("--format", format, "human, json or tsv")->envname("QLAB_FORMAT")->check(CLI::IsMember({"human", "json", "tsv"}));
  seq->add_option("--cache-dir", cache_dir, "artifact cache directory")->envname("QLAB_CACHE_DIR");
  seq->add_option("--out", out_path, "write the output here instead of stdout");

  auto* check = app.add_subcommand("check", "run checks at one prime");
  check->add_option("--prime", cfg.prime, "prime")->required();
  check->add_option("--id", id, "check id (default: every check for this prime)");
  add_common(check);
  add_check_opts(check);

  auto* suite = app.add_subcommand("suite", "run the default suite");
  suite->add_option("--primes", cfg.primes, "comma-separated primes")->delimiter(',')->envname("QLAB_PRIMES");
  add_common(suite);
  add_check_opts(suite);

  auto* bench = app.add_subcommand("bench", "time dictionary and U_p construction");
  bench->add_option("--primes", cfg.primes, "comma-separated primes")->delimiter(',')->envname("QLAB_PRIMES");
  bench->add_option("--backend", backend, "exact or residue")->envname("QLAB_BACKEND")->check(CLI::IsMember({"exact", "residue"}));
  bench->add_option("--precision", cfg.precision, "series precision override (>= p+1)")->envname("QLAB_PRECISION");
  bench->add_option("--format", format, "human, json or tsv")->envname("QLAB_FORMAT")->check(CLI::IsMember({"human", "json", "tsv"}));
  bench->add_option("--out", out_path, "write the output here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  if (*dict) cfg.command = Command::Dict;
  else if (*seq) cfg.command = Command::Sequence;
  else if (*check) cfg.command = Command::Check;
  else if (*suite) cfg.command = Command::Suite;
  else cfg.command = Command::Bench;
  if (!id.empty()) cfg.id = id;
  cfg.cache_dir = cache_dir;
  cfg.out = out_path;

  std::optional<ArtifactCache> cache;
  std::string text;
  int code = 0;
  try {
    cfg.backend = parse_backend(backend);
    cfg.format = parse_report_format(format);
    validate_config(cfg);
    if (cfg.cache_dir) {
      cache.emplace(std::filesystem::path(*cfg.cache_dir));
      if (cache->degraded()) err << "warning: cache directory " << *cfg.cache_dir << " is not writable; caching in memory only\n";
    }
    ArtifactCache* cp = cache ? &*cache : nullptr;
    switch (cfg.command) {
      case Command::Dict: text = detail::run_dict(cfg, cp); break;
      case Command::Sequence: text = detail::run_sequence(cfg, cp); break;
      case Command::Bench: text = detail::run_bench(cfg); break;
      case Command::Check:
      case Command::Suite: {
        const SuiteReport s = run_suite_command(cfg, cp);
        text = emit_report(s, cfg.format);
        code = s.aggregate == Status::Fail ? 1 : 0;
        break;
      }
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (cfg.out) {
    std::ofstream f(*cfg.out, std::ios::binary);
    f << text;
    if (!f) {
      err << "error: cannot write " << *cfg.out << '\n';
      return 2;
    }
  } else {
    out << text;
  }
  return code;
}

}  // namespace qlab
