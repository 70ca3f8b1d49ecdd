#pragma once

// Closed-form symbol error bounds and per-user / average symbol error rates
// of a delivery plan.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cachemod/caching.hpp"
#include "cachemod/modem.hpp"

namespace cachemod {

/// Linear per-user SNRs gamma_k (unit-power noise).
class SnrProfile {
public:
  explicit SnrProfile(std::vector<double> gammas) : gammas_(std::move(gammas)) {
    for (double g : gammas_)
      if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("SNR must be positive and finite");
  }

  static SnrProfile uniform(std::size_t users, double gamma) {
    return SnrProfile(std::vector<double>(users, gamma));
  }

  std::size_t user_count() const noexcept { return gammas_.size(); }
  double gamma(std::size_t user) const { return gammas_.at(user); }
  const std::vector<double>& gammas() const noexcept { return gammas_; }

private:
  std::vector<double> gammas_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Gaussian tail probability Q(x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Nearest-neighbour union bound with N0 = 1: 2Q for PSK, 4Q for QAM,
/// argument sqrt(gamma / 2) * dmin, clamped to 1.
inline double symbol_error_bound(Family family, double gamma, double dmin) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(dmin > 0.0)) throw std::invalid_argument("dmin must be positive");
  const double factor = family == Family::psk ? 2.0 : 4.0;
  return std::min(1.0, factor * q_function(std::sqrt(gamma / 2.0) * dmin));
}

/// Error probability of one useful (subset, block, user) cell.
struct BlockError {
  UserSet subset = 0;
  std::size_t block_index = 0;
  std::size_t user = 0;
  MaskShape shape;
  double probability = 0.0;
};

using BlockErrorTable = std::vector<BlockError>;

inline void check_dimensions(const DeliveryPlan& plan, const Constellation& c, const SnrProfile& snr) {
  if (plan.label_len() != c.bits())
    throw std::invalid_argument("plan label width differs from the constellation's bits per symbol");
  if (snr.user_count() != plan.user_count())
    throw std::invalid_argument("SNR profile and plan disagree on user count");
}

/// Per useful block and user, the bound evaluated at the masked d_min.
/// Blocks that carry no bits for a user are left out.
inline BlockErrorTable block_error_table(const DeliveryPlan& plan, const Constellation& c,
                                         const SnrProfile& snr) {
  check_dimensions(plan, c, snr);
  std::map<MaskShape, double> dmin_cache;
  auto dmin = [&](MaskShape shape) {
    auto it = dmin_cache.find(shape);
    if (it == dmin_cache.end()) it = dmin_cache.emplace(shape, min_distance(c, shape)).first;
    return it->second;
  };

  BlockErrorTable table;
  for (const auto& block : plan.blocks()) {
    for (std::size_t k = 0; k < plan.user_count(); ++k) {
      if (!contains(block.subset, k) || block.piece_len[k] == 0) continue;
      BlockError e;
      e.subset = block.subset;
      e.block_index = block.block_index;
      e.user = k;
      e.shape = known_bit_mask(block, k);
      e.probability = e.shape.known() >= c.bits()
                          ? 0.0
                          : symbol_error_bound(c.family(), snr.gamma(k), dmin(e.shape));
      table.push_back(e);
    }
  }
  return table;
}

enum class ReportKind { analytic, empirical };

struct UserMetrics {
  std::uint64_t useful_symbols = 0;  // L_k
  double errored_symbols = 0.0;      // S_k
  double ser = 0.0;                  // T_k = S_k / L_k
  double std_error = 0.0;            // empirical only
  bool defined = true;               // false when L_k == 0 (ser reported as 0)
};

struct SerReport {
  ReportKind kind = ReportKind::analytic;
  std::vector<UserMetrics> users;
  double average_ser = 0.0;
  double average_std_error = 0.0;
  double load = 0.0;
};

namespace detail {

inline void finish_report(SerReport& report) {
  double sum = 0.0, se = 0.0;
  for (auto& u : report.users) {
    u.defined = u.useful_symbols > 0;
    u.ser = u.defined ? u.errored_symbols / static_cast<double>(u.useful_symbols) : 0.0;
    sum += u.ser;
    se += u.std_error;
  }
  const double k = static_cast<double>(report.users.size());
  report.average_ser = sum / k;
  // Users can share Monte Carlo cells, so the per-user errors are added
  // linearly (an upper bound on the standard error of the mean).
  report.average_std_error = se / k;
}

} // namespace detail

inline SerReport user_metrics(const DeliveryPlan& plan, const BlockErrorTable& table) {
  SerReport report;
  report.kind = ReportKind::analytic;
  report.load = plan.load();
  report.users.resize(plan.user_count());
  for (std::size_t k = 0; k < plan.user_count(); ++k)
    report.users[k].useful_symbols = plan.useful_symbols(k);

  std::vector<std::uint64_t> covered(plan.user_count(), 0);
  for (const auto& e : table) {
    if (e.user >= plan.user_count()) throw std::invalid_argument("table names an unknown user");
    report.users[e.user].errored_symbols += e.probability;
    ++covered[e.user];
  }
  for (std::size_t k = 0; k < plan.user_count(); ++k)
    if (covered[k] != report.users[k].useful_symbols)
      throw std::invalid_argument("error table does not cover every useful block");
  detail::finish_report(report);
  return report;
}

inline SerReport analytic_report(const DeliveryPlan& plan, const Constellation& c,
                                 const SnrProfile& snr) {
  return user_metrics(plan, block_error_table(plan, c, snr));
}

/// Per user: how many useful blocks fall under each mask shape.
inline std::vector<std::map<MaskShape, std::uint64_t>> useful_shape_counts(const DeliveryPlan& plan) {
  std::vector<std::map<MaskShape, std::uint64_t>> counts(plan.user_count());
  for (const auto& block : plan.blocks())
    for (std::size_t k = 0; k < plan.user_count(); ++k)
      if (contains(block.subset, k) && block.piece_len[k] > 0) ++counts[k][known_bit_mask(block, k)];
  return counts;
}

struct UserComparison {
  double proposed = 0.0;
  double zero_padding = 0.0;
  double delta = 0.0;  // zero_padding - proposed
};

struct SchemeComparison {
  std::vector<UserComparison> users;
  double load_proposed = 0.0;
  double load_zero_padding = 0.0;
};

/// Analytic T_k under both schemes for the same (integral) subfile map.
inline SchemeComparison compare_schemes(const SubfileMap& map, const DemandVector& demands,
                                        const Constellation& c, const SnrProfile& snr) {
  const auto prop = build_delivery_plan(map, demands, Scheme::proposed, c.bits());
  const auto zp = build_delivery_plan(map, demands, Scheme::zero_padding, c.bits());
  const auto rp = analytic_report(prop, c, snr);
  const auto rz = analytic_report(zp, c, snr);
  SchemeComparison out;
  out.load_proposed = rp.load;
  out.load_zero_padding = rz.load;
  out.users.resize(rp.users.size());
  for (std::size_t k = 0; k < out.users.size(); ++k) {
    out.users[k].proposed = rp.users[k].ser;
    out.users[k].zero_padding = rz.users[k].ser;
    out.users[k].delta = rz.users[k].ser - rp.users[k].ser;
  }
  return out;
}

} // namespace cachemod
