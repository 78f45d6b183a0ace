#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace macsim {

using Index = Eigen::Index;

// Seedable generator with a fully specified output mapping, so that a run
// can be reproduced by any implementation:
//
//   engine   : std::mt19937_64 seeded with splitmix64(seed)
//   uniform  : (next() >> 11) * 2^-53, in [0, 1)
//   bernoulli: uniform() < p
//   index(n) : rejection sampling, draws r until r >= (2^64 - n) mod n,
//              then returns r mod n
//
// Child generators are derived with derive_seed(parent_seed, key), which is
// splitmix64(parent_seed ^ fnv1a64(key)).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next() { return engine_(); }
  std::uint64_t operator()() { return engine_(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  Index index(Index n);

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t derive_seed(std::uint64_t parent, std::string_view key);

// In-place Fisher-Yates, last index first.
template <typename T>
void shuffle(std::span<T> values, Rng& rng) {
  for (Index k = static_cast<Index>(values.size()) - 1; k > 0; --k) {
    Index r = rng.index(k + 1);
    std::swap(values[k], values[r]);
  }
}

// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
std::vector<Index> sample_indices(Index n, Index k, Rng& rng);

}  // namespace macsim
