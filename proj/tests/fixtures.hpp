#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "cachemod/caching.hpp"

namespace fixtures {

struct Instance {
  cachemod::Library library;
  cachemod::CacheProfile caches;
  cachemod::DemandVector demands;
};

/// Random heterogeneous instance: K in [min_users, max_users], N in
/// [K, K + extra_files], random sorted mu (occasionally 0 or 1), random
/// positive fractions, B in [100, max_bits].
inline Instance random_instance(std::mt19937_64& rng, std::size_t max_users, std::size_t extra_files,
                                std::uint64_t max_bits = 20'000, std::size_t min_users = 1) {
  std::uniform_int_distribution<std::size_t> users_dist(min_users, max_users);
  const std::size_t users = users_dist(rng);
  const std::size_t files = users + std::uniform_int_distribution<std::size_t>(0, extra_files)(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> weights(files);
  for (auto& w : weights) w = 0.05 + unit(rng);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> fractions(files);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < files; ++i) {
    fractions[i] = weights[i] / total;
    sum += fractions[i];
  }
  fractions[files - 1] = 1.0 - sum;

  std::vector<double> mus(users);
  for (auto& mu : mus) {
    const double r = unit(rng);
    mu = r < 0.05 ? 0.0 : (r > 0.97 ? 1.0 : unit(rng));
  }
  std::sort(mus.begin(), mus.end());

  std::vector<std::size_t> order(files);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(users);

  const std::uint64_t bits = std::uniform_int_distribution<std::uint64_t>(100, max_bits)(rng);
  return Instance{cachemod::Library(fractions, bits), cachemod::CacheProfile(mus),
                  cachemod::DemandVector(order, files)};
}

/// Two files A = 101001010, B = 111001, two users with mu = 1/3 each and
/// subfile division A = (101, 001, 010, -), B = (11, 10, 01, -).
inline cachemod::PlacementRealization two_user_placement() {
  using cachemod::Bits;
  using cachemod::UserSet;
  auto bits = [](const std::string& s) {
    Bits b;
    for (char c : s) b.push_back(c == '1' ? 1 : 0);
    return b;
  };
  std::vector<Bits> content{bits("101001010"), bits("111001")};
  std::vector<std::vector<UserSet>> cached_by{{0, 0, 0, 1, 1, 1, 2, 2, 2}, {0, 0, 1, 1, 2, 2}};
  return cachemod::PlacementRealization(cachemod::Library({0.6, 0.4}, 15),
                                        cachemod::CacheProfile({1.0 / 3, 1.0 / 3}), content,
                                        cached_by);
}

} // namespace fixtures
