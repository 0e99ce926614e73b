#include <doctest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "fsep/rng.hpp"
#include "fsep/stats.hpp"

using namespace fsep;

TEST_SUITE("rng") {
  TEST_CASE("coins are pure functions of seed, step and site") {
    const RngContext a{42, 7};
    const RngContext b{42, 7};
    for (std::uint64_t s = 0; s < 500; ++s) CHECK(a.bit(Stream::conflict, s) == b.bit(Stream::conflict, s));
    CHECK(a.word(Stream::bond, 3) == b.word(Stream::bond, 3));
    CHECK(a.word(Stream::bond, 3) != a.word(Stream::conflict, 3));
    CHECK(a.word(Stream::bond, 3) != RngContext{42, 8}.word(Stream::bond, 3));
    CHECK(a.word(Stream::bond, 3) != RngContext{43, 7}.word(Stream::bond, 3));
  }

  TEST_CASE("site coin is the matching bit of its word") {
    const RngContext ctx{9, 1};
    for (std::uint64_t s = 0; s < 300; ++s) {
      CHECK(ctx.bit(Stream::conflict, s) == (((ctx.word(Stream::conflict, s / 64) >> (s % 64)) & 1ULL) != 0));
    }
  }

  TEST_CASE("coins are fair") {
    std::uint64_t ones = 0;
    const std::uint64_t n = 1 << 20;
    for (std::uint64_t t = 0; t < 64; ++t) {
      const RngContext ctx{2024, t};
      for (std::uint64_t w = 0; w < n / 64 / 64; ++w) ones += std::popcount(ctx.word(Stream::bond, w));
    }
    const double total = static_cast<double>(n);
    CHECK(std::abs(static_cast<double>(ones) - total / 2.0) < 4.0 * std::sqrt(total / 4.0));
  }

  TEST_CASE("sequential generator is reproducible and forks are distinct") {
    CounterRng a(5, 3), b(5, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    CounterRng c(5, 3);
    auto f1 = c.fork(1), f2 = c.fork(2);
    CHECK(f1.next() != f2.next());
    CounterRng d(5, 3);
    CHECK(d.next() == CounterRng(5, 3).next());  // fork does not advance the parent
  }

  TEST_CASE("uniform integers are in range and evenly spread") {
    CounterRng rng(11, 0);
    const std::uint64_t k = 7;
    std::vector<std::uint64_t> counts(k, 0);
    const std::uint64_t n = 700000;
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto x = rng.below(k);
      REQUIRE(x < k);
      ++counts[x];
    }
    double stat = 0.0;
    const double e = static_cast<double>(n) / static_cast<double>(k);
    for (auto c : counts) stat += (static_cast<double>(c) - e) * (static_cast<double>(c) - e) / e;
    CHECK(chi_square_sf(stat, static_cast<double>(k - 1)) > 0.001);
  }

  TEST_CASE("uniform doubles lie in [0,1) and bernoulli matches its rate") {
    CounterRng rng(12, 0);
    double hits = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      hits += rng.bernoulli(0.3);
    }
    CHECK(std::abs(hits / n - 0.3) < 4.0 * std::sqrt(0.21 / n));
  }
}
