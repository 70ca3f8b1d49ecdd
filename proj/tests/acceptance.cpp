// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cachemod/cachemod.hpp"
#include "fixtures.hpp"

using namespace cachemod;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> check;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig three_user_config() { return parse_config(read_file(std::string(CACHEMOD_SCENARIO_DIR) + "/three_user_psk8.json")); }

Outcome distance_laws() {
  Outcome o;
  int checked = 0;
  for (unsigned m = 1; m <= 8; ++m) {
    auto c = build_psk(m);
    for (unsigned n = 0; n < m; ++n, ++checked) {
      const double law = 2 * std::sin(std::numbers::pi / std::pow(2.0, m - n));
      if (std::abs(min_distance(c, {n, 0}) - law) > 1e-9 * law) {
        o.pass = false;
        o.detail += fmt("PSK m=%g n=%g off; ", m, n);
      }
    }
  }
  for (unsigned m = 2; m <= 8; m += 2) {
    auto c = build_qam(m);
    for (unsigned n = 0; n < m; ++n, ++checked) {
      const double law = std::pow(std::sqrt(2.0), n) * c.spacing();
      if (std::abs(min_distance(c, {n, 0}) - law) > 1e-9 * law) {
        o.pass = false;
        o.detail += fmt("QAM m=%g n=%g off; ", m, n);
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " (family, m, n) cases";
  return o;
}

Outcome analytic_dominance() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const Constellation cs[] = {build_psk(3), build_qam(4)};
  double worst = -1.0;
  int comparisons = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = fixtures::random_instance(rng, 4, 3, 100'000, 2);
    auto map = quantize(expected_subfile_lengths(inst.library, inst.caches), inst.library);
    for (const auto& c : cs) {
      for (double gamma : {1.0, 10.0}) {
        auto cmp = compare_schemes(map, inst.demands, c, SnrProfile::uniform(inst.caches.user_count(), gamma));
        for (std::size_t k = 0; k < cmp.users.size(); ++k, ++comparisons) {
          const double excess = cmp.users[k].proposed - cmp.users[k].zero_padding;
          worst = std::max(worst, excess);
          if (excess > 1e-12) {
            o.pass = false;
            o.detail += fmt("instance %g user %g excess %.3g; ", trial, k + 1, excess);
          }
        }
      }
    }
  }
  if (o.pass) o.detail = fmt("%g user comparisons, max(T_prop - T_zp) = %.3g", comparisons, worst);
  return o;
}

// Rows of the three-user scenario run, shared by criteria 3 and 5.
struct ThreeUserRun {
  ScenarioResult result;
  std::map<std::tuple<double, Scheme, int>, ResultRow> rows;  // user -1 is the average

  const ResultRow& at(double db, Scheme s, int user) const { return rows.at({db, s, user}); }
};

const ThreeUserRun& three_user_run() {
  static const ThreeUserRun run = [] {
    ThreeUserRun r;
    auto cfg = three_user_config();
    cfg.threads = 0;
    r.result = run_scenario(cfg);
    for (const auto& row : r.result.rows)
      r.rows[{row.snr_db, row.scheme, row.user ? static_cast<int>(*row.user) : -1}] = row;
    return r;
  }();
  return run;
}

double combined_sigma(const ResultRow& a, const ResultRow& b) {
  return std::hypot(a.mc_std_error.value_or(0.0), b.mc_std_error.value_or(0.0));
}

Outcome three_user_trends() {
  Outcome o;
  const auto& run = three_user_run();
  auto fail = [&](const std::string& why) {
    o.pass = false;
    o.detail += why + "; ";
  };
  for (double db : three_user_config().sweep.grid()) {
    const auto& p1 = run.at(db, Scheme::proposed, 0);
    const auto& z1 = run.at(db, Scheme::zero_padding, 0);
    const auto& p2 = run.at(db, Scheme::proposed, 1);
    const auto& z2 = run.at(db, Scheme::zero_padding, 1);
    const auto& p3 = run.at(db, Scheme::proposed, 2);
    const auto& z3 = run.at(db, Scheme::zero_padding, 2);
    const auto& pa = run.at(db, Scheme::proposed, -1);
    const auto& za = run.at(db, Scheme::zero_padding, -1);

    // Analytic.
    const double g1 = z1.analytic - p1.analytic, g2 = z2.analytic - p2.analytic, g3 = z3.analytic - p3.analytic;
    if (g1 != 0.0) fail(fmt("%g dB: analytic user-1 difference %.3g", db, g1));
    if (!(g2 >= 0.0)) fail(fmt("%g dB: analytic user-2 gain %.3g < 0", db, g2));
    if (!(g3 >= g2)) fail(fmt("%g dB: analytic user-3 gain %.3g < user-2 gain %.3g", db, g3, g2));
    if (!(pa.analytic <= za.analytic)) fail(fmt("%g dB: analytic average %.4g > %.4g", db, pa.analytic, za.analytic));

    // Empirical, each relation within 3 combined standard errors.
    const double e1 = *z1.mc - *p1.mc, e2 = *z2.mc - *p2.mc, e3 = *z3.mc - *p3.mc;
    const double s1 = combined_sigma(p1, z1), s2 = combined_sigma(p2, z2), s3 = combined_sigma(p3, z3);
    if (std::abs(e1) > 3 * s1) fail(fmt("%g dB: empirical user-1 difference %.3g beyond 3 sigma %.3g", db, e1, 3 * s1));
    if (e2 < -3 * s2) fail(fmt("%g dB: empirical user-2 gain %.3g < -3 sigma", db, e2));
    if (e3 - e2 < -3 * std::hypot(s2, s3))
      fail(fmt("%g dB: empirical user-3 gain %.3g below user-2 gain %.3g", db, e3, e2));
    if (*pa.mc - *za.mc > 3 * combined_sigma(pa, za))
      fail(fmt("%g dB: empirical average %.4g > %.4g", db, *pa.mc, *za.mc));
  }
  if (o.pass) {
    const auto& p3 = run.at(0.0, Scheme::proposed, 2);
    const auto& z3 = run.at(0.0, Scheme::zero_padding, 2);
    o.detail = fmt("11 grid points; user-3 analytic T at 0 dB %.4f vs %.4f", p3.analytic, z3.analytic);
  }
  return o;
}

// Expected SER of the ML decision between the two points of a 2-point
// subconstellation, averaged over the values of the known bits.
double two_point_oracle(const Constellation& c, MaskShape shape, double gamma) {
  double sum = 0.0;
  int count = 0;
  for (std::uint32_t pv = 0; pv < (1u << shape.prefix); ++pv)
    for (std::uint32_t sv = 0; sv < (1u << shape.suffix); ++sv) {
      std::vector<Complex> pts;
      c.for_each_compatible(KnownMask{shape, pv, sv}, [&](std::uint32_t l) { pts.push_back(c.point_for_label(l)); });
      sum += q_function(std::sqrt(gamma / 2.0) * std::abs(pts[0] - pts[1]));
      ++count;
    }
  return sum / count;
}

Outcome two_point_oracle_check() {
  Outcome o;
  struct Cell {
    const Constellation* c;
    MaskShape shape;
    double gamma;
  };
  std::vector<Constellation> cs;
  for (unsigned m = 1; m <= 8; ++m) cs.push_back(build_psk(m));
  for (unsigned m = 2; m <= 8; m += 2) cs.push_back(build_qam(m));
  std::vector<Cell> cells;
  for (const auto& c : cs)
    for (unsigned p = 0; p < c.bits(); ++p)
      for (double gamma : {1.0, 4.0, 10.0}) cells.push_back({&c, {p, c.bits() - 1 - p}, gamma});

  CampaignConfig cfg;
  cfg.trials_per_cell = 1'000'000;
  std::vector<CellEstimate> est(cells.size());
  detail::parallel_for(cells.size(), 0, [&](std::size_t i) {
    est[i] = estimate_cell_ser(*cells[i].c, cells[i].shape, cells[i].gamma, cfg, cell_key(*cells[i].c, cells[i].shape, cells[i].gamma));
  });
  double worst_z = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    const double exact = two_point_oracle(*cell.c, cell.shape, cell.gamma);
    const double dev = std::abs(est[i].ser - exact);
    if (est[i].std_error > 0) worst_z = std::max(worst_z, dev / est[i].std_error);
    if (dev > 3 * est[i].std_error) {
      o.pass = false;
      char buf[200];
      std::snprintf(buf, sizeof buf, "%s m=%u mask=(%u,%u) gamma=%g: %.5g vs %.5g (se %.2g); ",
                    to_string(cell.c->family()), cell.c->bits(), cell.shape.prefix, cell.shape.suffix, cell.gamma,
                    est[i].ser, exact, est[i].std_error);
      o.detail += buf;
    }
  }
  if (o.pass) o.detail = fmt("%g cells x 1e6 trials, max |dev|/se = %.2f", static_cast<double>(cells.size()), worst_z);
  return o;
}

Outcome union_bound_validity() {
  Outcome o;
  int checked = 0;
  for (const auto& row : three_user_run().result.rows) {
    if (!row.user) continue;
    ++checked;
    if (*row.mc > row.analytic + 3 * *row.mc_std_error) {
      o.pass = false;
      o.detail += fmt("%g dB user %g: %.4g", row.snr_db, static_cast<double>(*row.user + 1), *row.mc) +
                  fmt(" > bound %.4g; ", row.analytic);
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " (user, scheme, SNR) points";
  return o;
}

Outcome end_to_end() {
  Outcome o;
  std::mt19937_64 rng(77);
  int decoded = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = fixtures::random_instance(rng, 5, 2, 10'000);
    auto placement = sample_placement(inst.library, inst.caches, rng());
    auto map = realized_subfile_map(placement);
    const bool qam = trial % 3 == 2;
    const unsigned m = qam ? 2 * (1 + static_cast<unsigned>(rng() % 4)) : 1 + static_cast<unsigned>(rng() % 8);
    const auto c = build_constellation(qam ? Family::qam : Family::psk, m);
    for (Scheme scheme : {Scheme::proposed, Scheme::zero_padding}) {
      auto plan = build_delivery_plan(map, inst.demands, scheme, m);
      for (const auto& r : end_to_end_noiseless(placement, plan, c)) {
        ++decoded;
        if (!r.ok) {
          o.pass = false;
          o.detail += fmt("instance %g, file %g, ", trial, static_cast<double>(r.file)) + to_string(scheme) + "; ";
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(decoded) + " user decodes bit-exact";
  return o;
}

Outcome placement_concentration() {
  Outcome o;
  const Library lib({1.0}, 100'000);
  const CacheProfile caches({1.0 / 3, 1.0 / 3});
  const auto expected = expected_subfile_lengths(lib, caches);
  int within = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto realized = realized_subfile_map(sample_placement(lib, caches, seed));
    for (UserSet s = 0; s < 4; ++s) {
      const double n = static_cast<double>(lib.file_size(0));
      const double p = expected.length(0, s) / n;
      const double sd = std::sqrt(n * p * (1 - p));
      ++total;
      if (std::abs(realized.length(0, s) - expected.length(0, s)) <= 3 * sd) ++within;
    }
  }
  const double share = static_cast<double>(within) / total;
  o.pass = share >= 0.99;
  o.detail = fmt("%g of %g subfile lengths within 3 sd (%.2f%%)", within, total, 100 * share);
  return o;
}

Outcome determinism() {
  Outcome o;
  auto cfg = three_user_config();
  std::vector<std::string> outputs;
  const std::string base = std::string(CACHEMOD_WORK_DIR) + "/determinism_";
  for (unsigned threads : {1u, 1u, 4u, 0u}) {
    cfg.threads = threads;
    const std::string path = base + std::to_string(outputs.size()) + ".csv";
    emit_csv(run_scenario(cfg), path);
    outputs.push_back(read_file(path));
  }
  for (std::size_t i = 1; i < outputs.size(); ++i)
    if (outputs[i] != outputs[0]) {
      o.pass = false;
      o.detail += "run " + std::to_string(i) + " differs; ";
    }
  if (o.pass) o.detail = "4 runs (threads 1, 1, 4, all), " + std::to_string(outputs[0].size()) + " identical bytes";
  return o;
}

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "distance laws", 1.0, distance_laws},
      {2, "analytic dominance of the proposed scheme", 10.0, analytic_dominance},
      {3, "three-user trends (analytic and 1e5-trial empirical)", 120.0, three_user_trends},
      {4, "Monte Carlo vs exact two-point error", 60.0, two_point_oracle_check},
      {5, "union bound validity", 120.0, union_bound_validity},
      {6, "noiseless end-to-end decoding", 30.0, end_to_end},
      {7, "placement concentration", 600.0, placement_concentration},
      {8, "byte-identical CSV across runs and threads", 600.0, determinism},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.budget_s) {
      o.pass = false;
      o.detail += fmt(" (over the %g s budget)", cr.budget_s);
    }
    if (!o.pass) ++failures;
    std::printf("[%s] AC%d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", cr.id, cr.name.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
