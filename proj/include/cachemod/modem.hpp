#pragma once

// Set-partition-labeled PSK/QAM constellations and side-information ML
// demodulation. Labels are m-bit integers; label bit position 0 is the MSB.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cachemod/mask.hpp"

namespace cachemod {

using Complex = std::complex<double>;

enum class Family { psk, qam };

inline const char* to_string(Family f) noexcept { return f == Family::psk ? "psk" : "qam"; }

/// Known label bits: `shape` counts plus their values. `prefix_value` holds
/// the top shape.prefix bits, `suffix_value` the bottom shape.suffix bits.
struct KnownMask {
  MaskShape shape;
  std::uint32_t prefix_value = 0;
  std::uint32_t suffix_value = 0;

  /// The mask a receiver holds when `label` was sent and `shape` is known.
  static KnownMask from_label(MaskShape shape, std::uint32_t label, unsigned m) {
    KnownMask k;
    k.shape = shape;
    k.prefix_value = shape.prefix == 0 ? 0 : label >> (m - shape.prefix);
    k.suffix_value = label & ((std::uint32_t{1} << shape.suffix) - 1);
    return k;
  }
};

class Constellation {
public:
  Constellation(Family family, unsigned m, std::vector<Complex> points,
                std::vector<std::uint32_t> labels, double spacing)
      : family_(family), m_(m), points_(std::move(points)), labels_(std::move(labels)),
        spacing_(spacing) {
    if (points_.size() != (std::size_t{1} << m_) || labels_.size() != points_.size())
      throw std::invalid_argument("constellation must have 2^m labeled points");
    by_label_.assign(points_.size(), points_.size());
    for (std::size_t idx = 0; idx < labels_.size(); ++idx) {
      if (labels_[idx] >= points_.size() || by_label_[labels_[idx]] != points_.size())
        throw std::invalid_argument("labels must be a bijection onto [0, 2^m)");
      by_label_[labels_[idx]] = idx;
    }
  }

  Family family() const noexcept { return family_; }
  unsigned bits() const noexcept { return m_; }
  std::size_t size() const noexcept { return points_.size(); }

  /// Points in index order (PSK: counterclockwise from angle 0).
  std::span<const Complex> points() const noexcept { return points_; }
  std::uint32_t label_of(std::size_t index) const { return labels_.at(index); }
  std::size_t index_of(std::uint32_t label) const { return by_label_.at(label); }
  const Complex& point_for_label(std::uint32_t label) const { return points_[by_label_.at(label)]; }

  /// Native minimum spacing d after normalization (1 for PSK: unit radius).
  double spacing() const noexcept { return spacing_; }

  bool compatible(std::uint32_t label, const KnownMask& mask) const noexcept {
    const unsigned p = mask.shape.prefix, s = mask.shape.suffix;
    if (p > 0 && (label >> (m_ - p)) != mask.prefix_value) return false;
    if (s > 0 && (label & ((std::uint32_t{1} << s) - 1)) != mask.suffix_value) return false;
    return true;
  }

  /// Labels compatible with `mask`, ascending. Visits 2^(m - known) labels.
  template <typename F>
  void for_each_compatible(const KnownMask& mask, F&& f) const {
    const unsigned p = mask.shape.prefix, s = mask.shape.suffix;
    const unsigned free = m_ - p - s;
    const std::uint32_t base = (p > 0 ? mask.prefix_value << (m_ - p) : 0) | mask.suffix_value;
    for (std::uint32_t v = 0; v < (std::uint32_t{1} << free); ++v) f(base | (v << s));
  }

private:
  Family family_;
  unsigned m_;
  std::vector<Complex> points_;
  std::vector<std::uint32_t> labels_;
  std::vector<std::size_t> by_label_;
  double spacing_;
};

inline std::uint32_t reverse_bits(std::uint32_t v, unsigned width) noexcept {
  std::uint32_t r = 0;
  for (unsigned b = 0; b < width; ++b) r |= ((v >> b) & 1u) << (width - 1 - b);
  return r;
}

/// 2^m-PSK on the unit circle. Point k sits at angle 2 pi k / 2^m and carries
/// the bit-reversed index as label, so fixing n label MSBs keeps every
/// 2^n-th point.
inline Constellation build_psk(unsigned m) {
  if (m < 1 || m > 8) throw std::invalid_argument("PSK needs 1 <= m <= 8");
  const std::size_t n = std::size_t{1} << m;
  std::vector<Complex> points(n);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    points[k] = {std::cos(angle), std::sin(angle)};
    labels[k] = reverse_bits(static_cast<std::uint32_t>(k), m);
  }
  // Exact values on the axes keep BPSK/QPSK symmetric ties exact.
  for (auto& p : points) {
    if (std::abs(p.real()) < 1e-15) p.real(0.0);
    if (std::abs(p.imag()) < 1e-15) p.imag(0.0);
  }
  return Constellation(Family::psk, m, std::move(points), std::move(labels), 1.0);
}

/// Square 2^m-QAM, unit average energy, labeled along the lattice chain
/// Z^2 / RZ^2 / 2Z^2 / 2RZ^2 / ... : label bit 2j (from the MSB) is the
/// checkerboard parity of (x >> j) + (y >> j), bit 2j+1 is (x >> j) & 1.
inline Constellation build_qam(unsigned m) {
  if (m < 2 || m > 8 || m % 2 != 0) throw std::invalid_argument("QAM needs even m in [2, 8]");
  const unsigned side_bits = m / 2;
  const std::size_t side = std::size_t{1} << side_bits;
  const std::size_t n = side * side;
  const double center = (static_cast<double>(side) - 1.0) / 2.0;

  double energy = 0.0;
  for (std::size_t x = 0; x < side; ++x)
    for (std::size_t y = 0; y < side; ++y) {
      const double dx = static_cast<double>(x) - center, dy = static_cast<double>(y) - center;
      energy += dx * dx + dy * dy;
    }
  energy /= static_cast<double>(n);
  const double d = 1.0 / std::sqrt(energy);

  std::vector<Complex> points(n);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t x = 0; x < side; ++x) {
    for (std::size_t y = 0; y < side; ++y) {
      const std::size_t idx = x * side + y;
      points[idx] = {(static_cast<double>(x) - center) * d, (static_cast<double>(y) - center) * d};
      std::uint32_t label = 0;
      for (unsigned j = 0; j < side_bits; ++j) {
        const std::uint32_t parity = static_cast<std::uint32_t>(((x >> j) + (y >> j)) & 1u);
        const std::uint32_t xbit = static_cast<std::uint32_t>((x >> j) & 1u);
        label |= parity << (m - 1 - 2 * j);
        label |= xbit << (m - 2 - 2 * j);
      }
      labels[idx] = label;
    }
  }
  return Constellation(Family::qam, m, std::move(points), std::move(labels), d);
}

inline Constellation build_constellation(Family family, unsigned m) {
  return family == Family::psk ? build_psk(m) : build_qam(m);
}

inline void check_shape(const Constellation& c, MaskShape shape) {
  if (shape.known() > c.bits()) throw std::invalid_argument("mask knows more bits than the label has");
}

/// Point indices whose labels agree with the known bits, ascending.
inline std::vector<std::size_t> subconstellation(const Constellation& c, const KnownMask& mask) {
  check_shape(c, mask.shape);
  std::vector<std::size_t> out;
  c.for_each_compatible(mask, [&](std::uint32_t label) { out.push_back(c.index_of(label)); });
  std::sort(out.begin(), out.end());
  return out;
}

/// Minimum pairwise distance inside the subconstellation selected by a mask
/// of this shape, minimized over every value the known bits can take.
inline double min_distance(const Constellation& c, MaskShape shape) {
  check_shape(c, shape);
  if (shape.known() + 1 > c.bits())
    throw std::invalid_argument("subconstellation has fewer than two points");
  double best = std::numeric_limits<double>::infinity();
  std::vector<Complex> members;
  for (std::uint32_t pv = 0; pv < (std::uint32_t{1} << shape.prefix); ++pv) {
    for (std::uint32_t sv = 0; sv < (std::uint32_t{1} << shape.suffix); ++sv) {
      members.clear();
      c.for_each_compatible(KnownMask{shape, pv, sv},
                            [&](std::uint32_t label) { members.push_back(c.point_for_label(label)); });
      for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b)
          best = std::min(best, std::abs(members[a] - members[b]));
    }
  }
  return best;
}

inline Complex modulate(const Constellation& c, std::uint32_t label) {
  if (label >= c.size()) throw std::out_of_range("label out of range");
  return c.point_for_label(label);
}

/// ML decision restricted to the labels compatible with `mask`. Exact ties
/// resolve to the smallest label.
inline std::uint32_t demodulate(const Constellation& c, Complex y, double sqrt_snr,
                                const KnownMask& mask) {
  if (!(sqrt_snr > 0.0)) throw std::invalid_argument("sqrt_snr must be positive");
  check_shape(c, mask.shape);
  std::uint32_t best_label = 0;
  double best = std::numeric_limits<double>::infinity();
  c.for_each_compatible(mask, [&](std::uint32_t label) {
    const double dist = std::norm(y - sqrt_snr * c.point_for_label(label));
    if (dist < best) {
      best = dist;
      best_label = label;
    }
  });
  return best_label;
}

} // namespace cachemod
