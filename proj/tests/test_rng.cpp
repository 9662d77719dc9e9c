#include <doctest.h>

#include <cmath>
#include <set>

#include "fairgcl/rng.hpp"

using namespace fairgcl;

TEST_CASE("hashed draws are deterministic and key-sensitive") {
  CHECK(rng::hash_words({1, 2, 3}) == rng::hash_words({1, 2, 3}));
  CHECK(rng::hash_words({1, 2, 3}) != rng::hash_words({1, 2, 4}));
  CHECK(rng::hash_words({1, 2, 3}) != rng::hash_words({3, 2, 1}));
  CHECK(rng::uniform({5, 6}) == rng::uniform({5, 6}));
}

TEST_CASE("uniform draws live in [0,1) with the right mean") {
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng::uniform({42, static_cast<std::uint64_t>(i)});
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  // stderr of the mean is 1/sqrt(12 n) ~ 9e-4
  CHECK(std::fabs(sum / n - 0.5) < 4e-3);
}

TEST_CASE("bernoulli hits its rate and the endpoints exactly") {
  int heads = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    auto key = {std::uint64_t{7}, static_cast<std::uint64_t>(i)};
    if (rng::bernoulli(0.3, key)) ++heads;
    CHECK(rng::bernoulli(1.0, key));
    CHECK_FALSE(rng::bernoulli(0.0, key));
  }
  CHECK(std::fabs(heads / static_cast<double>(n) - 0.3) < 4.0 * std::sqrt(0.3 * 0.7 / n));
}

TEST_CASE("normal draws have standard moments") {
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double x = rng::normal({9, static_cast<std::uint64_t>(i)});
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(var - 1.0) < 0.02);
}

TEST_CASE("kind words separate the randomness streams") {
  std::set<std::uint64_t> draws;
  for (int k = 1; k <= 10; ++k)
    draws.insert(rng::hash_words({3, rng::kind_word(static_cast<rng::Kind>(k)), 0}));
  CHECK(draws.size() == 10);
}
