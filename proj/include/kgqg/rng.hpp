#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace kgqg {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seeded generator with fully pinned integer draws. All randomness in the
// harness flows through this type so equal seeds give byte-identical
// outputs on any platform (std::uniform_int_distribution is
// implementation-defined; our bounded draw is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Unbiased draw in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = gen_();
    while (v >= limit) v = gen_();
    return v % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Per-scope RNG streams: one global seed, independent streams keyed by a
// purpose label plus an id (dialog id, instance id). Parallel workers get
// identical draws regardless of scheduling.
inline Rng derive_rng(std::uint64_t seed, std::string_view purpose, std::string_view id) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(fnv1a64(purpose)));
  h = splitmix64(h ^ fnv1a64(id));
  return Rng(h);
}

}  // namespace kgqg
