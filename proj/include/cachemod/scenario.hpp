#pragma once

// Scenario configuration, SNR sweeps over both delivery schemes and CSV
// output. Backs the `cachemod` command line tool.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cachemod/analysis.hpp"
#include "cachemod/caching.hpp"
#include "cachemod/modem.hpp"
#include "cachemod/simulation.hpp"

namespace cachemod {

/// Invalid scenario configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Failure while running or writing results (CLI exit code 3).
class RuntimeFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct UserConfig {
  double mu = 0.0;
  std::optional<double> snr_db;  // fixed SNR; otherwise follows the sweep
};

struct SweepConfig {
  double start_db = 0.0;
  double stop_db = 20.0;
  double step_db = 2.0;

  /// Inclusive grid start, start + step, ..., stop.
  std::vector<double> grid() const {
    const auto n = static_cast<std::size_t>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = start_db + static_cast<double>(i) * step_db;
    return out;
  }
};

struct ScenarioConfig {
  std::vector<UserConfig> users;
  std::vector<double> files;
  std::uint64_t total_bits = 0;
  Family family = Family::psk;
  unsigned bits_per_symbol = 3;
  std::vector<Scheme> schemes{Scheme::proposed, Scheme::zero_padding};
  bool worst_case_demands = true;
  std::vector<std::size_t> demands;  // 0-based, resolved
  SweepConfig sweep;
  std::uint64_t trials_per_cell = 100'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<std::string> output;
  std::vector<std::string> notices;

  std::vector<double> mus() const {
    std::vector<double> out;
    for (const auto& u : users) out.push_back(u.mu);
    return out;
  }
};

/// Distinct files, largest first, handed to users in increasing cache
/// order. Equal sizes keep file order.
inline std::vector<std::size_t> worst_case_demands(const std::vector<double>& files, std::size_t users) {
  if (users > files.size())
    throw std::invalid_argument("worst_case demands need at least as many files as users");
  std::vector<std::size_t> order(files.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return files[a] > files[b]; });
  order.resize(users);
  return order;
}

namespace detail {

using nlohmann::json;

inline std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void reject_unknown(const json& obj, std::string_view where,
                           std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(std::string(where) + ": unknown field \"" + key + "\"");
}

/// A number, or a string holding a decimal or a ratio "a/b".
inline double real_field(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    try {
      std::size_t used = 0;
      const auto slash = s.find('/');
      if (slash == std::string::npos) {
        const double x = std::stod(s, &used);
        if (used == s.size()) return x;
      } else {
        const double num = std::stod(s.substr(0, slash), &used);
        if (used == slash) {
          const auto rest = s.substr(slash + 1);
          const double den = std::stod(rest, &used);
          if (used == rest.size() && den != 0.0) return num / den;
        }
      }
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(field + ": expected a number or a ratio string like \"1/3\"");
}

inline std::uint64_t uint_field(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(field + ": expected a non-negative integer");
}

} // namespace detail

/// Parses and validates a JSON scenario document. Unknown fields are errors.
inline ScenarioConfig parse_config(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  detail::reject_unknown(doc, "config",
                         {"users", "files", "total_bits", "modulation", "schemes", "demands", "sweep",
                          "trials_per_cell", "seed", "threads", "output"});

  ScenarioConfig cfg;
  if (!doc.contains("users") || !doc["users"].is_array() || doc["users"].empty())
    throw ConfigError("users: expected a non-empty array");
  for (std::size_t k = 0; k < doc["users"].size(); ++k) {
    const auto& u = doc["users"][k];
    const std::string where = "users[" + std::to_string(k) + "]";
    detail::reject_unknown(u, where, {"mu", "snr_db"});
    if (!u.contains("mu")) throw ConfigError(where + ".mu: missing");
    UserConfig uc;
    uc.mu = detail::real_field(u["mu"], where + ".mu");
    if (!(uc.mu >= 0.0 && uc.mu <= 1.0))
      throw ConfigError(where + ".mu: " + detail::fmt_number(uc.mu) + " is outside [0, 1]");
    if (u.contains("snr_db")) uc.snr_db = detail::real_field(u["snr_db"], where + ".snr_db");
    cfg.users.push_back(uc);
  }
  for (std::size_t k = 1; k < cfg.users.size(); ++k)
    if (cfg.users[k].mu < cfg.users[k - 1].mu)
      throw ConfigError("users: must be listed in non-decreasing mu order");
  if (cfg.users.size() > kMaxUsers)
    throw ConfigError("users: at most " + std::to_string(kMaxUsers) + " users supported");

  if (!doc.contains("files") || !doc["files"].is_array() || doc["files"].empty())
    throw ConfigError("files: expected a non-empty array of size fractions");
  double sum = 0.0;
  for (std::size_t i = 0; i < doc["files"].size(); ++i) {
    const double f = detail::real_field(doc["files"][i], "files[" + std::to_string(i) + "]");
    if (!(f > 0.0)) throw ConfigError("files[" + std::to_string(i) + "]: fractions must be positive");
    cfg.files.push_back(f);
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ConfigError("files: file fractions sum to " + detail::fmt_number(sum));

  if (!doc.contains("total_bits")) throw ConfigError("total_bits: missing");
  cfg.total_bits = detail::uint_field(doc["total_bits"], "total_bits");
  if (cfg.total_bits < 1) throw ConfigError("total_bits: must be >= 1");

  if (doc.contains("modulation")) {
    const auto& mod = doc["modulation"];
    detail::reject_unknown(mod, "modulation", {"family", "m"});
    if (mod.contains("family")) {
      const auto fam = mod["family"].is_string() ? mod["family"].get<std::string>() : "";
      if (fam == "psk") cfg.family = Family::psk;
      else if (fam == "qam") cfg.family = Family::qam;
      else throw ConfigError("modulation.family: expected \"psk\" or \"qam\"");
    }
    if (mod.contains("m")) {
      const auto m = detail::uint_field(mod["m"], "modulation.m");
      if (m > 8) throw ConfigError("modulation.m: must be at most 8");
      cfg.bits_per_symbol = static_cast<unsigned>(m);
    }
  }
  if (cfg.family == Family::qam && cfg.bits_per_symbol % 2 != 0)
    throw ConfigError("modulation.m: QAM needs an even number of bits per symbol");
  if (cfg.bits_per_symbol < (cfg.family == Family::qam ? 2u : 1u))
    throw ConfigError("modulation.m: too few bits per symbol");

  if (doc.contains("schemes")) {
    const auto& s = doc["schemes"];
    if (!s.is_array() || s.empty()) throw ConfigError("schemes: expected a non-empty array");
    cfg.schemes.clear();
    for (const auto& name : s) {
      const auto v = name.is_string() ? name.get<std::string>() : "";
      Scheme scheme;
      if (v == "proposed") scheme = Scheme::proposed;
      else if (v == "zero_padding") scheme = Scheme::zero_padding;
      else throw ConfigError("schemes: unknown scheme \"" + v + "\"");
      if (std::find(cfg.schemes.begin(), cfg.schemes.end(), scheme) != cfg.schemes.end())
        throw ConfigError("schemes: \"" + v + "\" listed twice");
      cfg.schemes.push_back(scheme);
    }
  }

  if (doc.contains("demands") && doc["demands"].is_array()) {
    cfg.worst_case_demands = false;
    std::set<std::size_t> seen;
    for (const auto& d : doc["demands"]) {
      const auto file = detail::uint_field(d, "demands");
      if (file < 1 || file > cfg.files.size())
        throw ConfigError("demands: file index " + std::to_string(file) + " outside [1, " +
                          std::to_string(cfg.files.size()) + "]");
      if (!seen.insert(file).second)
        throw ConfigError("demands: duplicate demand for file " + std::to_string(file));
      cfg.demands.push_back(static_cast<std::size_t>(file - 1));
    }
    if (cfg.demands.size() != cfg.users.size())
      throw ConfigError("demands: need exactly one demand per user");
  } else if (doc.contains("demands") && doc["demands"] != "worst_case") {
    throw ConfigError("demands: expected an array of file indices or \"worst_case\"");
  } else {
    if (cfg.users.size() > cfg.files.size())
      throw ConfigError("demands: worst_case needs at least as many files as users");
    cfg.demands = worst_case_demands(cfg.files, cfg.users.size());
  }

  if (doc.contains("sweep")) {
    const auto& sw = doc["sweep"];
    detail::reject_unknown(sw, "sweep", {"start_db", "stop_db", "step_db"});
    if (sw.contains("start_db")) cfg.sweep.start_db = detail::real_field(sw["start_db"], "sweep.start_db");
    if (sw.contains("stop_db")) cfg.sweep.stop_db = detail::real_field(sw["stop_db"], "sweep.stop_db");
    if (sw.contains("step_db")) cfg.sweep.step_db = detail::real_field(sw["step_db"], "sweep.step_db");
  }
  if (!(cfg.sweep.step_db > 0.0)) throw ConfigError("sweep.step_db: must be positive");
  if (cfg.sweep.stop_db < cfg.sweep.start_db) throw ConfigError("sweep.stop_db: below start_db");

  if (doc.contains("trials_per_cell"))
    cfg.trials_per_cell = detail::uint_field(doc["trials_per_cell"], "trials_per_cell");
  if (doc.contains("seed")) {
    cfg.seed = detail::uint_field(doc["seed"], "seed");
  } else {
    cfg.notices.push_back("seed not given, using 0");
  }
  if (doc.contains("threads"))
    cfg.threads = static_cast<unsigned>(detail::uint_field(doc["threads"], "threads"));
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("output: expected a path string");
    cfg.output = doc["output"].get<std::string>();
  }

  // Remaining cross-field checks go through the library types.
  try {
    Library lib(cfg.files, cfg.total_bits);
    CacheProfile caches(cfg.mus());
    DemandVector demands(cfg.demands, cfg.files.size());
    (void)build_constellation(cfg.family, cfg.bits_per_symbol);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

struct ResultRow {
  double snr_db = 0.0;
  Scheme scheme = Scheme::proposed;
  std::optional<std::size_t> user;  // 0-based; empty for the average row
  std::uint64_t useful_symbols = 0;
  double analytic = 0.0;
  std::optional<double> mc;
  std::optional<double> mc_std_error;
  double load = 0.0;
};

struct ScenarioResult {
  std::vector<ResultRow> rows;
};

/// Analytic (and, when trials_per_cell > 0, Monte Carlo) reports for every
/// scheme and grid point. Rows are sorted by (snr_db, scheme, user) with
/// the average row last.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  const Library library(cfg.files, cfg.total_bits);
  const CacheProfile caches(cfg.mus());
  const DemandVector demands(cfg.demands, library.file_count());
  const Constellation constellation = build_constellation(cfg.family, cfg.bits_per_symbol);
  const SubfileMap map = quantize(expected_subfile_lengths(library, caches), library);

  CampaignConfig campaign;
  campaign.trials_per_cell = cfg.trials_per_cell;
  campaign.master_seed = cfg.seed;
  campaign.threads = cfg.threads;

  ScenarioResult result;
  for (Scheme scheme : cfg.schemes) {
    const DeliveryPlan plan = build_delivery_plan(map, demands, scheme, cfg.bits_per_symbol);
    for (double db : cfg.sweep.grid()) {
      std::vector<double> gammas;
      for (const auto& u : cfg.users) gammas.push_back(db_to_linear(u.snr_db.value_or(db)));
      const SnrProfile snr(gammas);
      const SerReport analytic = analytic_report(plan, constellation, snr);
      std::optional<SerReport> empirical;
      if (cfg.trials_per_cell > 0) empirical = run_campaign(plan, constellation, snr, campaign);

      for (std::size_t k = 0; k <= cfg.users.size(); ++k) {
        ResultRow row;
        row.snr_db = db;
        row.scheme = scheme;
        row.load = analytic.load;
        if (k < cfg.users.size()) {
          row.user = k;
          row.useful_symbols = analytic.users[k].useful_symbols;
          row.analytic = analytic.users[k].ser;
          if (empirical) {
            row.mc = empirical->users[k].ser;
            row.mc_std_error = empirical->users[k].std_error;
          }
        } else {
          row.analytic = analytic.average_ser;
          if (empirical) {
            row.mc = empirical->average_ser;
            row.mc_std_error = empirical->average_std_error;
          }
        }
        result.rows.push_back(row);
      }
    }
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
    const std::string_view sa = to_string(a.scheme), sb = to_string(b.scheme);
    if (sa != sb) return sa < sb;
    const std::size_t ua = a.user.value_or(kMaxUsers), ub = b.user.value_or(kMaxUsers);
    return ua < ub;
  });
  return result;
}

inline constexpr std::string_view kCsvHeader = "snr_db,scheme,user,L_k,analytic_T,mc_T,mc_stderr,load_R";

/// 8 significant digits.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

inline std::string format_csv(const ScenarioResult& result) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << format_real(r.snr_db) << ',' << to_string(r.scheme) << ','
        << (r.user ? std::to_string(*r.user + 1) : std::string("avg")) << ','
        << (r.user ? std::to_string(r.useful_symbols) : std::string()) << ',' << format_real(r.analytic)
        << ',' << (r.mc ? format_real(*r.mc) : std::string()) << ','
        << (r.mc_std_error ? format_real(*r.mc_std_error) : std::string()) << ','
        << format_real(r.load) << '\n';
  }
  return out.str();
}

inline void emit_csv(const ScenarioResult& result, const std::string& path) {
  if (result.rows.empty()) throw RuntimeFailure("no result rows to write");
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw RuntimeFailure("cannot open " + path + " for writing");
  file << format_csv(result);
  file.close();
  if (!file) throw RuntimeFailure("failed writing " + path);
}

} // namespace cachemod
