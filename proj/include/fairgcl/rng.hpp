#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>

namespace fairgcl::rng {

// Counter-based generator: every draw is a pure function of the words that
// key it (seed, view id, element kind, element index, ...). Draws are
// reproducible and order-independent, so sampling can be parallelized or
// re-run per element without shared state.

enum class Kind : std::uint64_t {
  feature_mask = 1,
  edge_deletion = 2,
  sbm_edge = 3,
  sbm_feature = 4,
  sbm_label = 5,
  glorot = 6,
  node_split = 7,
  mc_trial = 8,
  epoch = 9,
  generic = 10,
};

// splitmix64 finalizer
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;  // arbitrary nonzero start
  for (std::uint64_t w : words) h = mix(h ^ w);
  return h;
}

// uniform in [0, 1)
inline double uniform(std::initializer_list<std::uint64_t> words) {
  return static_cast<double>(hash_words(words) >> 11) * 0x1.0p-53;
}

inline bool bernoulli(double p, std::initializer_list<std::uint64_t> words) {
  return uniform(words) < p;
}

// standard normal via Box-Muller; the two uniforms come from sub-draws 0/1
inline double normal(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = hash_words(words);
  double u1 = static_cast<double>(mix(h ^ 0x1ULL) >> 11) * 0x1.0p-53;
  double u2 = static_cast<double>(mix(h ^ 0x2ULL) >> 11) * 0x1.0p-53;
  if (u1 <= 0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline std::uint64_t kind_word(Kind k) { return static_cast<std::uint64_t>(k); }

}  // namespace fairgcl::rng
