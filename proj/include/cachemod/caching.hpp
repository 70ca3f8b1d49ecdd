#pragma once

// Decentralized heterogeneous coded caching: placement, subfile maps and
// the two delivery plans (symbol-level padding and subfile-level zero
// padding) that turn clique-cover multicast messages into m-bit labels.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cachemod/mask.hpp"
#include "cachemod/rng.hpp"

namespace cachemod {

/// One bit per element, values 0 or 1, MSB-first order.
using Bits = std::vector<std::uint8_t>;

/// Bitmask over users; bit k set means user k (0-based) is in the set.
using UserSet = std::uint32_t;

inline constexpr std::size_t kMaxUsers = 16;
inline constexpr unsigned kMaxLabelBits = 30;
inline constexpr std::uint64_t kMaxEnumeratedBits = 10'000'000;

constexpr bool contains(UserSet set, std::size_t user) noexcept {
  return ((set >> user) & 1u) != 0;
}

constexpr UserSet user_bit(std::size_t user) noexcept {
  return UserSet{1} << user;
}

constexpr std::size_t subset_count(std::size_t users) noexcept {
  return std::size_t{1} << users;
}

namespace detail {

/// Largest-remainder rounding of `values` to non-negative integers summing
/// to `target`. Ties go to the lower index.
inline std::vector<std::uint64_t> largest_remainder(std::span<const double> values,
                                                    std::uint64_t target) {
  std::vector<std::uint64_t> out(values.size());
  std::vector<std::pair<double, std::size_t>> rem(values.size());
  std::uint64_t floor_sum = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    double v = std::max(0.0, values[j]);
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) v = r;
    const double f = std::floor(v);
    out[j] = static_cast<std::uint64_t>(f);
    floor_sum += out[j];
    rem[j] = {v - f, j};
  }
  if (floor_sum > target)
    throw std::logic_error("largest_remainder: floors exceed target");
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::uint64_t missing = target - floor_sum;
  for (std::size_t j = 0; missing > 0; j = (j + 1) % rem.size(), --missing)
    ++out[rem[j].second];
  return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Instance description
// ---------------------------------------------------------------------------

/// File-size fractions F_i and total library size B in bits.
class Library {
public:
  Library(std::vector<double> fractions, std::uint64_t total_bits)
      : fractions_(std::move(fractions)), total_bits_(total_bits) {
    if (fractions_.empty()) throw std::invalid_argument("library needs at least one file");
    if (total_bits_ < 1) throw std::invalid_argument("library size B must be >= 1");
    double sum = 0.0;
    for (double f : fractions_) {
      if (!(f > 0.0)) throw std::invalid_argument("file fractions must be positive");
      sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("file fractions must sum to 1");
    std::vector<double> sizes(fractions_.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) sizes[i] = file_size(i);
    file_bits_ = detail::largest_remainder(sizes, total_bits_);
  }

  std::size_t file_count() const noexcept { return fractions_.size(); }
  std::uint64_t total_bits() const noexcept { return total_bits_; }
  double fraction(std::size_t file) const { return fractions_.at(file); }
  const std::vector<double>& fractions() const noexcept { return fractions_; }

  /// F_i * B, possibly fractional.
  double file_size(std::size_t file) const {
    return fractions_.at(file) * static_cast<double>(total_bits_);
  }

  /// Integer file length: F_i * B rounded so that all files sum to B.
  std::uint64_t file_bits(std::size_t file) const { return file_bits_.at(file); }

private:
  std::vector<double> fractions_;
  std::uint64_t total_bits_;
  std::vector<std::uint64_t> file_bits_;
};

/// Normalized cache sizes mu_k, sorted non-decreasing.
class CacheProfile {
public:
  explicit CacheProfile(std::vector<double> mus) : mus_(std::move(mus)) {
    if (mus_.empty()) throw std::invalid_argument("cache profile needs at least one user");
    if (mus_.size() > kMaxUsers)
      throw std::invalid_argument("at most " + std::to_string(kMaxUsers) + " users supported");
    for (std::size_t k = 0; k < mus_.size(); ++k) {
      if (!(mus_[k] >= 0.0 && mus_[k] <= 1.0))
        throw std::invalid_argument("cache fraction mu must lie in [0, 1]");
      if (k > 0 && mus_[k] < mus_[k - 1])
        throw std::invalid_argument("cache fractions must be sorted non-decreasing");
    }
  }

  std::size_t user_count() const noexcept { return mus_.size(); }
  double mu(std::size_t user) const { return mus_.at(user); }
  const std::vector<double>& mus() const noexcept { return mus_; }

private:
  std::vector<double> mus_;
};

/// Demanded file per user (0-based file indices), pairwise distinct.
class DemandVector {
public:
  DemandVector(std::vector<std::size_t> files, std::size_t file_count) : files_(std::move(files)) {
    std::vector<bool> seen(file_count, false);
    for (std::size_t d : files_) {
      if (d >= file_count) throw std::invalid_argument("demand refers to a file outside the library");
      if (seen[d]) throw std::invalid_argument("duplicate demands are not supported");
      seen[d] = true;
    }
  }

  std::size_t user_count() const noexcept { return files_.size(); }
  std::size_t file(std::size_t user) const { return files_.at(user); }
  const std::vector<std::size_t>& files() const noexcept { return files_; }

private:
  std::vector<std::size_t> files_;
};

// ---------------------------------------------------------------------------
// Subfile maps
// ---------------------------------------------------------------------------

enum class SubfileKind { expected, quantized, realized };

/// |W_{i,S}| for every file i and user subset S. Expected maps hold reals,
/// quantized and realized maps hold integers.
class SubfileMap {
public:
  SubfileMap(SubfileKind kind, std::size_t users, std::uint64_t total_bits,
             std::vector<std::vector<double>> lengths)
      : kind_(kind), users_(users), total_bits_(total_bits), lengths_(std::move(lengths)) {
    if (users_ == 0 || users_ > kMaxUsers) throw std::invalid_argument("bad user count");
    for (const auto& row : lengths_) {
      if (row.size() != subset_count(users_))
        throw std::invalid_argument("subfile map row must cover all 2^K subsets");
      for (double v : row) {
        if (!(v >= 0.0)) throw std::invalid_argument("subfile lengths must be non-negative");
        if (kind_ != SubfileKind::expected && v != std::floor(v))
          throw std::invalid_argument("integer subfile map holds a fractional length");
      }
    }
  }

  SubfileKind kind() const noexcept { return kind_; }
  std::size_t user_count() const noexcept { return users_; }
  std::size_t file_count() const noexcept { return lengths_.size(); }
  std::uint64_t total_bits() const noexcept { return total_bits_; }
  bool integral() const noexcept { return kind_ != SubfileKind::expected; }

  double length(std::size_t file, UserSet subset) const { return lengths_.at(file).at(subset); }

  std::uint64_t bits(std::size_t file, UserSet subset) const {
    if (!integral()) throw std::logic_error("expected subfile map must be quantized first");
    return static_cast<std::uint64_t>(length(file, subset));
  }

  double file_total(std::size_t file) const {
    const auto& row = lengths_.at(file);
    return std::accumulate(row.begin(), row.end(), 0.0);
  }

private:
  SubfileKind kind_;
  std::size_t users_;
  std::uint64_t total_bits_;
  std::vector<std::vector<double>> lengths_;
};

/// Law-of-large-numbers subfile lengths F_i B prod_{j in S} mu_j prod_{k notin S} (1 - mu_k).
inline SubfileMap expected_subfile_lengths(const Library& library, const CacheProfile& caches) {
  const std::size_t users = caches.user_count();
  std::vector<std::vector<double>> lengths(library.file_count(),
                                           std::vector<double>(subset_count(users)));
  for (UserSet s = 0; s < subset_count(users); ++s) {
    double p = 1.0;
    for (std::size_t k = 0; k < users; ++k) p *= contains(s, k) ? caches.mu(k) : 1.0 - caches.mu(k);
    for (std::size_t i = 0; i < library.file_count(); ++i)
      lengths[i][s] = library.file_size(i) * p;
  }
  return SubfileMap(SubfileKind::expected, users, library.total_bits(), std::move(lengths));
}

/// Rounds an expected map to integers per file by largest remainder, so each
/// file's subfiles sum to library.file_bits(i).
inline SubfileMap quantize(const SubfileMap& map, const Library& library) {
  if (map.integral()) return map;
  if (map.file_count() != library.file_count())
    throw std::invalid_argument("subfile map and library disagree on file count");
  std::vector<std::vector<double>> lengths(map.file_count());
  for (std::size_t i = 0; i < map.file_count(); ++i) {
    std::vector<double> row(subset_count(map.user_count()));
    for (UserSet s = 0; s < row.size(); ++s) row[s] = map.length(i, s);
    const auto rounded = detail::largest_remainder(row, library.file_bits(i));
    lengths[i].assign(rounded.begin(), rounded.end());
  }
  return SubfileMap(SubfileKind::quantized, map.user_count(), map.total_bits(), std::move(lengths));
}

// ---------------------------------------------------------------------------
// Placement
// ---------------------------------------------------------------------------

/// Library bit values plus, for every bit, the exact set of users caching it.
class PlacementRealization {
public:
  PlacementRealization(Library library, CacheProfile caches, std::vector<Bits> content,
                       std::vector<std::vector<UserSet>> cached_by)
      : library_(std::move(library)), caches_(std::move(caches)),
        content_(std::move(content)), cached_by_(std::move(cached_by)) {
    if (content_.size() != library_.file_count() || cached_by_.size() != library_.file_count())
      throw std::invalid_argument("placement must describe every file");
    const UserSet all = static_cast<UserSet>(subset_count(caches_.user_count()) - 1);
    index_.resize(library_.file_count());
    for (std::size_t i = 0; i < library_.file_count(); ++i) {
      if (content_[i].size() != library_.file_bits(i) || cached_by_[i].size() != content_[i].size())
        throw std::invalid_argument("placement file length mismatch");
      index_[i].resize(subset_count(caches_.user_count()));
      for (std::size_t pos = 0; pos < content_[i].size(); ++pos) {
        if ((cached_by_[i][pos] & ~all) != 0) throw std::invalid_argument("placement names unknown user");
        if (content_[i][pos] > 1) throw std::invalid_argument("bit values must be 0 or 1");
        index_[i][cached_by_[i][pos]].push_back(pos);
      }
    }
  }

  const Library& library() const noexcept { return library_; }
  const CacheProfile& caches() const noexcept { return caches_; }
  std::size_t user_count() const noexcept { return caches_.user_count(); }

  const Bits& content(std::size_t file) const { return content_.at(file); }
  std::span<const UserSet> cached_by(std::size_t file) const { return cached_by_.at(file); }

  /// True if bit `pos` of `file` is in Z_user.
  bool cached(std::size_t user, std::size_t file, std::size_t pos) const {
    return contains(cached_by_.at(file).at(pos), user);
  }

  std::uint64_t cached_bit_count(std::size_t user, std::size_t file) const {
    const auto& row = cached_by_.at(file);
    return static_cast<std::uint64_t>(
        std::count_if(row.begin(), row.end(), [user](UserSet s) { return contains(s, user); }));
  }

  /// Positions of W_{file,subset} within the file, ascending.
  const std::vector<std::size_t>& subfile_positions(std::size_t file, UserSet subset) const {
    return index_.at(file).at(subset);
  }

  Bits subfile_bits(std::size_t file, UserSet subset) const {
    const auto& pos = subfile_positions(file, subset);
    Bits out(pos.size());
    for (std::size_t j = 0; j < pos.size(); ++j) out[j] = content_[file][pos[j]];
    return out;
  }

private:
  Library library_;
  CacheProfile caches_;
  std::vector<Bits> content_;
  std::vector<std::vector<UserSet>> cached_by_;
  std::vector<std::vector<std::vector<std::size_t>>> index_;
};

/// Every bit of every file is cached by user k independently with
/// probability mu_k. Deterministic in `seed`.
inline PlacementRealization sample_placement(const Library& library, const CacheProfile& caches,
                                             std::uint64_t seed) {
  if (library.total_bits() > kMaxEnumeratedBits)
    throw std::invalid_argument("library too large to enumerate bit by bit");
  const std::size_t users = caches.user_count();
  std::vector<Bits> content(library.file_count());
  std::vector<std::vector<UserSet>> cached_by(library.file_count());
  for (std::size_t i = 0; i < library.file_count(); ++i) {
    const std::size_t len = library.file_bits(i);
    Rng values = make_rng(seed, 2 * i);
    Rng caching = make_rng(seed, 2 * i + 1);
    content[i].resize(len);
    cached_by[i].resize(len);
    std::uint64_t word = 0;
    for (std::size_t pos = 0; pos < len; ++pos) {
      if (pos % 64 == 0) word = values();
      content[i][pos] = static_cast<std::uint8_t>((word >> (pos % 64)) & 1u);
      UserSet s = 0;
      for (std::size_t k = 0; k < users; ++k)
        if (uniform01(caching) < caches.mu(k)) s |= user_bit(k);
      cached_by[i][pos] = s;
    }
  }
  return PlacementRealization(library, caches, std::move(content), std::move(cached_by));
}

inline SubfileMap realized_subfile_map(const PlacementRealization& placement) {
  const std::size_t users = placement.user_count();
  std::vector<std::vector<double>> lengths(placement.library().file_count(),
                                           std::vector<double>(subset_count(users), 0.0));
  for (std::size_t i = 0; i < lengths.size(); ++i)
    for (UserSet s = 0; s < subset_count(users); ++s)
      lengths[i][s] = static_cast<double>(placement.subfile_positions(i, s).size());
  return SubfileMap(SubfileKind::realized, users, placement.library().total_bits(),
                    std::move(lengths));
}

// ---------------------------------------------------------------------------
// Delivery plans
// ---------------------------------------------------------------------------

enum class Scheme { proposed, zero_padding };

inline const char* to_string(Scheme s) noexcept {
  return s == Scheme::proposed ? "proposed" : "zero_padding";
}

/// Where a short piece sits inside the m-bit label. Right-aligned pieces
/// leave the known bits at the MSB end, left-aligned pieces at the LSB end.
enum class PieceAlignment { right, left };

/// One m-bit block P_S^i. Per-user vectors are indexed by user and are zero
/// for users outside the subset.
struct MulticastBlockSpec {
  UserSet subset = 0;
  std::size_t block_index = 0;
  unsigned label_len = 0;
  PieceAlignment alignment = PieceAlignment::right;
  std::vector<std::uint32_t> piece_len;
  std::vector<std::uint64_t> piece_offset;

  unsigned occupancy() const noexcept {
    std::uint32_t best = 0;
    for (auto p : piece_len) best = std::max(best, p);
    return best;
  }

  /// Label bit positions (0 = MSB) holding `user`'s piece.
  std::pair<unsigned, unsigned> piece_span(std::size_t user) const {
    const unsigned len = piece_len.at(user);
    const unsigned first = alignment == PieceAlignment::right ? label_len - len : 0;
    return {first, first + len};
  }
};

struct UserShare {
  std::size_t user = 0;
  std::size_t file = 0;
  std::uint64_t subfile_len = 0;  // |W_{d_k, S \ {k}}|
  std::uint64_t useful_blocks = 0;  // n_{S,k}
};

struct SubsetSchedule {
  UserSet subset = 0;
  std::uint64_t max_len = 0;  // l_S
  std::uint64_t symbols = 0;  // n_S
  std::size_t first_block = 0;
  std::vector<UserShare> shares;  // members in ascending user order

  const UserShare& share(std::size_t user) const {
    for (const auto& s : shares)
      if (s.user == user) return s;
    throw std::out_of_range("user is not a member of this subset");
  }
};

class DeliveryPlan {
public:
  DeliveryPlan(Scheme scheme, unsigned label_len, std::size_t users, std::uint64_t total_bits,
               std::vector<std::size_t> demands, std::vector<SubsetSchedule> subsets,
               std::vector<MulticastBlockSpec> blocks)
      : scheme_(scheme), label_len_(label_len), users_(users), total_bits_(total_bits),
        demands_(std::move(demands)), subsets_(std::move(subsets)), blocks_(std::move(blocks)) {}

  Scheme scheme() const noexcept { return scheme_; }
  unsigned label_len() const noexcept { return label_len_; }
  std::size_t user_count() const noexcept { return users_; }
  std::uint64_t total_bits() const noexcept { return total_bits_; }
  const std::vector<std::size_t>& demands() const noexcept { return demands_; }
  const std::vector<SubsetSchedule>& subsets() const noexcept { return subsets_; }
  const std::vector<MulticastBlockSpec>& blocks() const noexcept { return blocks_; }
  bool empty() const noexcept { return subsets_.empty(); }

  const SubsetSchedule* find(UserSet subset) const {
    auto it = std::lower_bound(subsets_.begin(), subsets_.end(), subset,
                               [](const SubsetSchedule& s, UserSet v) { return s.subset < v; });
    return it != subsets_.end() && it->subset == subset ? &*it : nullptr;
  }

  const MulticastBlockSpec& block(UserSet subset, std::size_t block_index) const {
    const SubsetSchedule* s = find(subset);
    if (s == nullptr) throw std::out_of_range("subset carries no multicast message");
    if (block_index >= s->symbols) throw std::out_of_range("block index out of range");
    return blocks_[s->first_block + block_index];
  }

  /// Total transmitted payload bits sum_S l_S divided by B.
  double load() const noexcept {
    std::uint64_t bits = 0;
    for (const auto& s : subsets_) bits += s.max_len;
    return static_cast<double>(bits) / static_cast<double>(total_bits_);
  }

  /// L: total number of constellation symbols sent.
  std::uint64_t total_symbols() const noexcept {
    std::uint64_t n = 0;
    for (const auto& s : subsets_) n += s.symbols;
    return n;
  }

  /// L_k = sum_{S containing k} n_{S,k}.
  std::uint64_t useful_symbols(std::size_t user) const {
    std::uint64_t n = 0;
    for (const auto& s : subsets_)
      if (contains(s.subset, user)) n += s.share(user).useful_blocks;
    return n;
  }

private:
  Scheme scheme_;
  unsigned label_len_;
  std::size_t users_;
  std::uint64_t total_bits_;
  std::vector<std::size_t> demands_;
  std::vector<SubsetSchedule> subsets_;
  std::vector<MulticastBlockSpec> blocks_;
};

/// Compiles the clique-cover messages P_S = XOR_{k in S} W_{d_k, S\{k}} into
/// m-bit blocks. The map must be integral; run quantize() on expected maps.
inline DeliveryPlan build_delivery_plan(const SubfileMap& map, const DemandVector& demands,
                                        Scheme scheme, unsigned m) {
  if (m < 1 || m > kMaxLabelBits) throw std::invalid_argument("bits per symbol out of range");
  if (!map.integral())
    throw std::invalid_argument("expected subfile map must be quantized before plan building");
  const std::size_t users = map.user_count();
  if (demands.user_count() != users)
    throw std::invalid_argument("demand vector and subfile map disagree on user count");
  for (std::size_t d : demands.files())
    if (d >= map.file_count()) throw std::invalid_argument("demand outside subfile map");

  std::vector<SubsetSchedule> subsets;
  std::vector<MulticastBlockSpec> blocks;
  for (UserSet s = 1; s < subset_count(users); ++s) {
    SubsetSchedule sched;
    sched.subset = s;
    for (std::size_t k = 0; k < users; ++k) {
      if (!contains(s, k)) continue;
      UserShare share;
      share.user = k;
      share.file = demands.file(k);
      share.subfile_len = map.bits(share.file, s & ~user_bit(k));
      sched.max_len = std::max(sched.max_len, share.subfile_len);
      sched.shares.push_back(share);
    }
    if (sched.max_len == 0) continue;
    sched.symbols = (sched.max_len + m - 1) / m;
    sched.first_block = blocks.size();

    const std::size_t base = blocks.size();
    for (std::size_t b = 0; b < sched.symbols; ++b) {
      MulticastBlockSpec spec;
      spec.subset = s;
      spec.block_index = b;
      spec.label_len = m;
      spec.alignment = scheme == Scheme::proposed ? PieceAlignment::right : PieceAlignment::left;
      spec.piece_len.assign(users, 0);
      spec.piece_offset.assign(users, 0);
      blocks.push_back(std::move(spec));
    }
    for (auto& share : sched.shares) {
      const std::uint64_t len = share.subfile_len;
      std::uint64_t offset = 0;
      for (std::size_t b = 0; b < sched.symbols; ++b) {
        std::uint64_t piece = 0;
        if (scheme == Scheme::proposed) {
          // Even split; the first len % n_S blocks get one extra bit.
          piece = len / sched.symbols + (b < len % sched.symbols ? 1 : 0);
        } else {
          piece = offset < len ? std::min<std::uint64_t>(m, len - offset) : 0;
        }
        auto& spec = blocks[base + b];
        spec.piece_len[share.user] = static_cast<std::uint32_t>(piece);
        spec.piece_offset[share.user] = offset;
        offset += piece;
        if (piece > 0) ++share.useful_blocks;
      }
    }
    subsets.push_back(std::move(sched));
  }
  return DeliveryPlan(scheme, m, users, map.total_bits(), demands.files(), std::move(subsets),
                      std::move(blocks));
}

// ---------------------------------------------------------------------------
// Block coding
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint32_t place_piece(const MulticastBlockSpec& block, std::size_t user,
                                 const Bits& piece) {
  if (piece.size() > block.label_len) throw std::invalid_argument("piece longer than the label");
  if (piece.size() != block.piece_len.at(user))
    throw std::invalid_argument("piece length does not match the block layout");
  const auto [first, last] = block.piece_span(user);
  std::uint32_t word = 0;
  for (unsigned pos = first; pos < last; ++pos)
    if (piece[pos - first] != 0) word |= std::uint32_t{1} << (block.label_len - 1 - pos);
  return word;
}

} // namespace detail

/// Label of one block: XOR of every member's zero-extended, aligned piece.
inline std::uint32_t encode_block(const MulticastBlockSpec& block,
                                  const std::map<std::size_t, Bits>& pieces) {
  std::uint32_t label = 0;
  for (std::size_t k = 0; k < block.piece_len.size(); ++k) {
    if (!contains(block.subset, k)) continue;
    auto it = pieces.find(k);
    if (it == pieces.end()) {
      if (block.piece_len[k] == 0) continue;
      throw std::invalid_argument("missing piece for user " + std::to_string(k));
    }
    label ^= detail::place_piece(block, k, it->second);
  }
  return label;
}

/// Recovers `user`'s piece from a label given every other member's piece.
inline Bits decode_block(std::uint32_t label, const MulticastBlockSpec& block, std::size_t user,
                         const std::map<std::size_t, Bits>& cached_pieces) {
  if (!contains(block.subset, user)) throw std::invalid_argument("user is not served by this block");
  for (std::size_t j = 0; j < block.piece_len.size(); ++j) {
    if (j == user || !contains(block.subset, j)) continue;
    auto it = cached_pieces.find(j);
    if (it == cached_pieces.end()) {
      if (block.piece_len[j] == 0) continue;
      throw std::invalid_argument("missing cached piece of user " + std::to_string(j));
    }
    label ^= detail::place_piece(block, j, it->second);
  }
  const auto [first, last] = block.piece_span(user);
  Bits out;
  out.reserve(last - first);
  for (unsigned pos = first; pos < last; ++pos)
    out.push_back(static_cast<std::uint8_t>((label >> (block.label_len - 1 - pos)) & 1u));
  return out;
}

/// Raised when a zero-padding block carries nothing for the queried user.
class UselessBlockError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Label positions `user` can compute from its cache in this block.
inline MaskShape known_bit_mask(const MulticastBlockSpec& block, std::size_t user) {
  if (!contains(block.subset, user)) throw std::invalid_argument("user is not served by this block");
  const unsigned piece = block.piece_len.at(user);
  const unsigned known = block.label_len - piece;
  if (block.alignment == PieceAlignment::right) return {known, 0};
  if (piece == 0) throw UselessBlockError("zero-padding block carries no bits for this user");
  return {0, known};
}

inline MaskShape known_bit_mask(const DeliveryPlan& plan, UserSet subset, std::size_t block_index,
                                std::size_t user) {
  return known_bit_mask(plan.block(subset, block_index), user);
}

} // namespace cachemod
