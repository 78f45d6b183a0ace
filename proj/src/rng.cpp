#include "macsim/rng.hpp"

#include <numeric>

#include "macsim/errors.hpp"

namespace macsim {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view key) {
  return splitmix64(parent ^ fnv1a64(key));
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Index Rng::index(Index n) {
  if (n <= 0) throw DomainError("Rng::index: empty range");
  const auto bound = static_cast<std::uint64_t>(n);
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = next();
    if (r >= threshold) return static_cast<Index>(r % bound);
  }
}

std::vector<Index> sample_indices(Index n, Index k, Rng& rng) {
  if (k < 0 || k > n) throw DomainError("sample_indices: k outside [0, n]");
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index t = 0; t < k; ++t) {
    Index r = t + rng.index(n - t);
    std::swap(pool[t], pool[r]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

}  // namespace macsim
