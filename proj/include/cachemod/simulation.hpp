#pragma once

// Seeded Monte Carlo symbol error rates over the complex AWGN broadcast
// channel, and noiseless end-to-end delivery checks.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cachemod/analysis.hpp"
#include "cachemod/caching.hpp"
#include "cachemod/modem.hpp"
#include "cachemod/rng.hpp"

namespace cachemod {

struct CampaignConfig {
  std::uint64_t trials_per_cell = 100'000;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;  // 0 = hardware concurrency
};

struct CellEstimate {
  double ser = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
};

/// y = sqrt(gamma) x + noise. `noise` has variance 1/2 per real dimension.
inline Complex awgn_channel(Complex x, double gamma, Complex noise) {
  return std::sqrt(gamma) * x + noise;
}

/// Circular complex Gaussian with unit total power.
class NoiseSource {
public:
  explicit NoiseSource(Rng& rng) : rng_(rng), normal_(0.0, std::sqrt(0.5)) {}

  Complex operator()() {
    const double re = normal_(rng_);
    const double im = normal_(rng_);
    return {re, im};
  }

private:
  Rng& rng_;
  std::normal_distribution<double> normal_;
};

/// Substream key for a (constellation, mask shape, SNR) cell.
inline std::uint64_t cell_key(const Constellation& c, MaskShape shape, double gamma) {
  std::uint64_t h = hash_combine(static_cast<std::uint64_t>(c.family()), c.bits());
  h = hash_combine(h, shape.prefix);
  h = hash_combine(h, shape.suffix);
  return hash_double(h, gamma);
}

/// Uniform labels, the mask positions revealed to the receiver, one AWGN
/// pass and a masked ML decision per trial. Deterministic in
/// (cfg.master_seed, cell_id).
inline CellEstimate estimate_cell_ser(const Constellation& c, MaskShape shape, double gamma,
                                      const CampaignConfig& cfg, std::uint64_t cell_id) {
  if (cfg.trials_per_cell < 1) throw std::invalid_argument("trials_per_cell must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  check_shape(c, shape);
  const unsigned m = c.bits();
  const double sqrt_snr = std::sqrt(gamma);

  Rng rng = make_rng(cfg.master_seed, cell_id);
  NoiseSource noise(rng);
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < cfg.trials_per_cell; ++t) {
    const auto label = static_cast<std::uint32_t>(rng() >> (64 - m));
    const KnownMask mask = KnownMask::from_label(shape, label, m);
    const Complex y = awgn_channel(c.point_for_label(label), gamma, noise());
    if (demodulate(c, y, sqrt_snr, mask) != label) ++errors;
  }
  CellEstimate est;
  est.trials = cfg.trials_per_cell;
  est.errors = errors;
  est.ser = static_cast<double>(errors) / static_cast<double>(est.trials);
  est.std_error = std::sqrt(est.ser * (1.0 - est.ser) / static_cast<double>(est.trials));
  return est;
}

namespace detail {

template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

} // namespace detail

/// Empirical SerReport: one Monte Carlo cell per distinct (mask shape,
/// gamma_k) among the useful blocks; each user's S_k weights the cell SERs
/// by its block counts.
inline SerReport run_campaign(const DeliveryPlan& plan, const Constellation& c,
                              const SnrProfile& snr, const CampaignConfig& cfg) {
  check_dimensions(plan, c, snr);
  const auto counts = useful_shape_counts(plan);

  using Key = std::pair<MaskShape, double>;
  std::map<Key, std::size_t> cell_index;
  for (std::size_t k = 0; k < plan.user_count(); ++k)
    for (const auto& [shape, n] : counts[k]) cell_index.emplace(Key{shape, snr.gamma(k)}, 0);
  std::vector<Key> cells;
  for (auto& [key, idx] : cell_index) {
    idx = cells.size();
    cells.push_back(key);
  }

  std::vector<CellEstimate> estimates(cells.size());
  detail::parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
    const auto& [shape, gamma] = cells[i];
    estimates[i] = shape.known() >= c.bits()
                       ? CellEstimate{0.0, 0.0, cfg.trials_per_cell, 0}
                       : estimate_cell_ser(c, shape, gamma, cfg, cell_key(c, shape, gamma));
  });

  SerReport report;
  report.kind = ReportKind::empirical;
  report.load = plan.load();
  report.users.resize(plan.user_count());
  for (std::size_t k = 0; k < plan.user_count(); ++k) {
    auto& u = report.users[k];
    double var = 0.0;
    for (const auto& [shape, n] : counts[k]) {
      const auto& est = estimates[cell_index.at(Key{shape, snr.gamma(k)})];
      const double weight = static_cast<double>(n);
      u.useful_symbols += n;
      u.errored_symbols += weight * est.ser;
      var += weight * weight * est.std_error * est.std_error;
    }
    u.std_error = u.useful_symbols > 0 ? std::sqrt(var) / static_cast<double>(u.useful_symbols) : 0.0;
  }
  detail::finish_report(report);
  return report;
}

struct UserDecode {
  bool ok = false;
  std::size_t file = 0;
  std::optional<std::size_t> first_mismatch;  // bit position within the file
};

/// Runs every block through modulate -> identity channel -> masked
/// demodulate -> decode_block and reassembles each user's demand from its
/// cache plus the decoded pieces.
inline std::vector<UserDecode> end_to_end_noiseless(const PlacementRealization& placement,
                                                    const DeliveryPlan& plan,
                                                    const Constellation& c) {
  if (plan.label_len() != c.bits())
    throw std::invalid_argument("plan label width differs from the constellation's bits per symbol");
  if (plan.user_count() != placement.user_count())
    throw std::invalid_argument("plan and placement disagree on user count");
  const unsigned m = c.bits();

  std::map<std::pair<std::size_t, UserSet>, Bits> subfiles;
  auto subfile = [&](std::size_t file, UserSet s) -> const Bits& {
    auto it = subfiles.find({file, s});
    if (it == subfiles.end()) it = subfiles.emplace(std::pair{file, s}, placement.subfile_bits(file, s)).first;
    return it->second;
  };
  auto slice = [](const Bits& bits, std::uint64_t offset, std::uint32_t len) {
    return Bits(bits.begin() + static_cast<std::ptrdiff_t>(offset),
                bits.begin() + static_cast<std::ptrdiff_t>(offset + len));
  };

  for (const auto& sched : plan.subsets())
    for (const auto& share : sched.shares)
      if (subfile(share.file, sched.subset & ~user_bit(share.user)).size() != share.subfile_len)
        throw std::invalid_argument("plan does not match the placement's subfile lengths");

  const std::size_t users = plan.user_count();
  std::vector<Bits> rebuilt(users);
  std::vector<std::vector<std::uint8_t>> filled(users);
  for (std::size_t k = 0; k < users; ++k) {
    const std::size_t file = plan.demands().at(k);
    const Bits& truth = placement.content(file);
    rebuilt[k].assign(truth.size(), 0);
    filled[k].assign(truth.size(), 0);
    for (std::size_t pos = 0; pos < truth.size(); ++pos)
      if (placement.cached(k, file, pos)) {
        rebuilt[k][pos] = truth[pos];
        filled[k][pos] = 1;
      }
  }

  for (const auto& block : plan.blocks()) {
    // Transmitter.
    std::map<std::size_t, Bits> pieces;
    for (std::size_t j = 0; j < users; ++j)
      if (contains(block.subset, j))
        pieces[j] = slice(subfile(plan.demands()[j], block.subset & ~user_bit(j)),
                          block.piece_offset[j], block.piece_len[j]);
    const std::uint32_t label = encode_block(block, pieces);
    const Complex y = awgn_channel(modulate(c, label), 1.0, Complex{});

    // Receivers.
    for (std::size_t k = 0; k < users; ++k) {
      if (!contains(block.subset, k) || block.piece_len[k] == 0) continue;
      std::map<std::size_t, Bits> cached;
      std::uint32_t side = 0;
      for (std::size_t j = 0; j < users; ++j) {
        if (j == k || !contains(block.subset, j)) continue;
        const UserSet s = block.subset & ~user_bit(j);
        const auto& pos = placement.subfile_positions(plan.demands()[j], s);
        Bits piece(block.piece_len[j]);
        for (std::uint32_t b = 0; b < block.piece_len[j]; ++b) {
          const std::size_t p = pos[block.piece_offset[j] + b];
          if (!placement.cached(k, plan.demands()[j], p))
            throw std::logic_error("side information missing from the receiver's cache");
          piece[b] = placement.content(plan.demands()[j])[p];
        }
        side ^= detail::place_piece(block, j, piece);
        cached.emplace(j, std::move(piece));
      }
      const KnownMask mask = KnownMask::from_label(known_bit_mask(block, k), side, m);
      const std::uint32_t decided = demodulate(c, y, 1.0, mask);
      const Bits mine = decode_block(decided, block, k, cached);

      const std::size_t file = plan.demands()[k];
      const auto& positions = placement.subfile_positions(file, block.subset & ~user_bit(k));
      for (std::size_t b = 0; b < mine.size(); ++b) {
        const std::size_t p = positions[block.piece_offset[k] + b];
        rebuilt[k][p] = mine[b];
        filled[k][p] = 1;
      }
    }
  }

  std::vector<UserDecode> out(users);
  for (std::size_t k = 0; k < users; ++k) {
    out[k].file = plan.demands()[k];
    const Bits& truth = placement.content(out[k].file);
    for (std::size_t pos = 0; pos < truth.size(); ++pos)
      if (!filled[k][pos] || rebuilt[k][pos] != truth[pos]) {
        out[k].first_mismatch = pos;
        break;
      }
    out[k].ok = !out[k].first_mismatch.has_value();
  }
  return out;
}

} // namespace cachemod
