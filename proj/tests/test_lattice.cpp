#include <doctest.h>

#include <bit>
#include <string>
#include <vector>

#include "fsep/error.hpp"
#include "fsep/lattice.hpp"
#include "fsep/rng.hpp"
#include "fsep/substitution.hpp"

using namespace fsep;

namespace {

std::vector<long long> profile(const std::string& bits) {
  return height_profile(ExclusionConfig::from_bits(bits)).values;
}

// True when s is a concatenation of copies of a and b.
bool tiles(const std::string& s, const std::string& a, const std::string& b) {
  std::vector<bool> ok(s.size() + 1, false);
  ok[0] = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!ok[i]) continue;
    if (s.compare(i, a.size(), a) == 0 && i + a.size() <= s.size()) ok[i + a.size()] = true;
    if (s.compare(i, b.size(), b) == 0 && i + b.size() <= s.size()) ok[i + b.size()] = true;
  }
  return ok[s.size()];
}

Drift brute_drift(const std::string& s) {
  bool left = false, right = false;
  for (std::size_t r = 0; r < s.size(); ++r) {
    const std::string rot = s.substr(r) + s.substr(0, r);
    left = left || tiles(rot, "1100", "10");
    right = right || tiles(rot, "0011", "01");
  }
  if (left && right) return Drift::both;
  if (left) return Drift::left;
  if (right) return Drift::right;
  return Drift::neither;
}

std::string bits_of(std::uint64_t mask, std::size_t m) {
  std::string s(m, '0');
  for (std::size_t i = 0; i < m; ++i) s[i] = ((mask >> i) & 1ULL) ? '1' : '0';
  return s;
}

// Stack-ring condition checked directly on a letter sequence, any length.
bool no_adjacent_short(const Sequence& src) {
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] <= 1 && src[(i + 1) % src.size()] <= 1) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("height profile examples") {
    CHECK(profile("01101") == std::vector<long long>{0, 1, 0, -1, 0, -1});
    CHECK(profile("0000") == std::vector<long long>{0, 1, 2, 3, 4});
    CHECK(profile("101010") == std::vector<long long>{0, -1, 0, -1, 0, -1, 0});
    const auto cfg = ExclusionConfig::from_bits("0110");
    CHECK(height_profile(cfg, 1).values == std::vector<long long>{0, -1, -2, -1, 0});
  }

  TEST_CASE("profile round trip on closed profiles") {
    CounterRng rng(3, 0);
    for (int t = 0; t < 200; ++t) {
      const std::size_t m = 4 + 2 * rng.below(40);
      ExclusionConfig cfg(m);
      std::size_t placed = 0;
      while (placed < m / 2) {
        const auto i = rng.below(m);
        if (!cfg[i]) {
          cfg.set(i, true);
          ++placed;
        }
      }
      CHECK(config_from_profile(height_profile(cfg)) == cfg);
    }
  }

  TEST_CASE("delta examples") {
    CHECK(delta(ExclusionConfig::from_bits("11001100")) == 2);
    CHECK(delta(ExclusionConfig::from_bits("10101010")) == 1);
    CHECK(delta(ExclusionConfig::from_bits("11110000")) == 4);
    CHECK_THROWS_AS(delta(ExclusionConfig::from_bits("1110000")), UndefinedDelta);
  }

  TEST_CASE("frozen configurations") {
    CHECK(is_frozen(ExclusionConfig::from_bits("101010")));
    CHECK(is_frozen(ExclusionConfig::from_bits("000000")));
    CHECK(is_frozen(ExclusionConfig::from_bits("1111")));
    CHECK_FALSE(is_frozen(ExclusionConfig::from_bits("110100")));
    CHECK_FALSE(is_frozen(ExclusionConfig::from_bits("10101")));
    CHECK(is_frozen(StackConfig::from_string("1,0,1,1")));
    CHECK_FALSE(is_frozen(StackConfig::from_string("1,0,2")));
  }

  TEST_CASE("parity map") {
    CHECK(parity_map(StackConfig::from_string("2,3,0,1")).str() == "0101");
  }

  TEST_CASE("set membership examples") {
    CHECK(in_frozen_set(ExclusionConfig::from_bits("101000")));
    CHECK_FALSE(in_frozen_set(ExclusionConfig::from_bits("110000")));
    CHECK(in_x_star(StackConfig::from_string("2,0,2,1")));
    CHECK_FALSE(in_x_star(StackConfig::from_string("2,0,1,2")));
    CHECK(in_x_star_sigma(StackConfig::from_string("2,1,3,0"), ParitySequence::from_bits("0110")));
    CHECK_FALSE(in_x_star_sigma(StackConfig::from_string("2,1,3,0"), ParitySequence::from_bits("0100")));
    CHECK(in_h(ExclusionConfig::from_bits("0110")));
    CHECK(in_h(ExclusionConfig::from_bits("01101")));
    CHECK_FALSE(in_h(ExclusionConfig::from_bits("101010")));
    CHECK_FALSE(in_h(ExclusionConfig::from_bits("0101011")));
    CHECK_FALSE(in_h(ExclusionConfig::from_bits("1111")));
  }

  TEST_CASE("membership dispatch rejects type mismatches") {
    const AnyConfig ex = ExclusionConfig::from_bits("0110");
    const AnyConfig st = StackConfig::from_string("2,0");
    CHECK(is_member(ex, SetClass::h));
    CHECK(is_member(st, SetClass::x_star));
    CHECK_THROWS_AS(is_member(ex, SetClass::x_star), InvalidArgument);
    CHECK_THROWS_AS(is_member(st, SetClass::h), InvalidArgument);
    CHECK_THROWS_AS(is_member(st, SetClass::x_star_sigma), InvalidArgument);
    const auto sigma = ParitySequence::from_bits("00");
    CHECK(is_member(st, SetClass::x_star_sigma, &sigma));
  }

  TEST_CASE("pattern membership agrees with the substitution image of the stack set") {
    const auto rule = SubstitutionRule::phi();
    for (std::size_t m = 3; m <= 14; ++m) {
      for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        const auto cfg = ExclusionConfig::from_bits(bits_of(mask, m));
        bool image = false;
        if (cfg.particles() < m) {
          const auto seq = to_sequence(cfg);
          const auto parsed = parse_image(rule, seq);
          image = no_adjacent_short(parsed.source);
        }
        REQUIRE_MESSAGE(in_h(cfg) == image, cfg.bits());
      }
    }
  }

  TEST_CASE("region decomposition") {
    const auto d = decompose_regions(ExclusionConfig::from_bits("110010110010"));
    REQUIRE(d.regions.size() == 4);
    CHECK_FALSE(d.degenerate);
    CHECK(d.regions[0].kind == RegionKind::transition);
    CHECK(d.regions[0].start == 0);
    CHECK(d.regions[0].length == 4);
    CHECK(d.regions[1].kind == RegionKind::left);
    CHECK(d.regions[1].start == 4);
    CHECK(d.regions[1].length == 2);
    CHECK(d.regions[2].kind == RegionKind::transition);
    CHECK(d.regions[3].kind == RegionKind::left);

    const auto t = decompose_regions(ExclusionConfig::from_bits("11001100"));
    REQUIRE(t.regions.size() == 1);
    CHECK(t.regions[0].kind == RegionKind::transition);
    CHECK(t.regions[0].length == 8);

    const auto alt = decompose_regions(ExclusionConfig::from_bits("01010101"));
    CHECK(alt.degenerate);
    REQUIRE(alt.regions.size() == 1);
    CHECK(alt.regions[0].start == 1);

    const auto r = decompose_regions(ExclusionConfig::from_bits("001101"));
    REQUIRE(r.regions.size() == 2);
    CHECK(r.regions[1].kind == RegionKind::right);

    CHECK_THROWS_AS(decompose_regions(ExclusionConfig::from_bits("11100010")), InvalidArgument);
  }

  TEST_CASE("regions cover the ring once") {
    for (std::size_t m = 4; m <= 16; m += 2) {
      for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != m / 2) continue;
        const auto cfg = ExclusionConfig::from_bits(bits_of(mask, m));
        if (delta(cfg) > 2) continue;
        const auto d = decompose_regions(cfg);
        std::vector<int> cover(m, 0);
        for (const auto& reg : d.regions) {
          for (std::size_t j = 0; j < reg.length; ++j) ++cover[(reg.start + j) % m];
        }
        for (int c : cover) REQUIRE(c == 1);
      }
    }
  }

  TEST_CASE("drift classes") {
    CHECK(member_left_right(ExclusionConfig::from_bits("11001100")) == Drift::both);
    CHECK(member_left_right(ExclusionConfig::from_bits("10101010")) == Drift::both);
    CHECK(member_left_right(ExclusionConfig::from_bits("110010")) == Drift::left);
    CHECK(member_left_right(ExclusionConfig::from_bits("001101")) == Drift::right);
    CHECK(member_left_right(ExclusionConfig::from_bits("11100010")) == Drift::neither);
  }

  TEST_CASE("drift classes agree with brute-force tiling") {
    for (std::size_t m = 3; m <= 16; ++m) {
      for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        const auto s = bits_of(mask, m);
        REQUIRE_MESSAGE(member_left_right(ExclusionConfig::from_bits(s)) == brute_drift(s), s);
      }
    }
  }

  TEST_CASE("rotation convention") {
    const auto cfg = ExclusionConfig::from_bits("1100000");
    CHECK(rotate(cfg, 1).bits() == "0110000");
    CHECK(rotate(cfg, -1).bits() == "1000001");
    CHECK(rotate(StackConfig::from_string("1,2,3"), 1).str() == "3,1,2");
    const auto big = rotate(ExclusionConfig::from_bits(std::string(130, '0').replace(0, 1, "1")), 129);
    CHECK(big[129]);
    CHECK(big.particles() == 1);
  }

  TEST_CASE("ring text round trip") {
    const auto e = ExclusionConfig::from_bits("0110100");
    CHECK(to_ring_string(e) == "ring:7:0110100");
    CHECK(parse_exclusion_ring(to_ring_string(e)) == e);
    const auto s = StackConfig::from_string("2,0,11");
    CHECK(parse_stack_ring(to_ring_string(s)) == s);
    CHECK_THROWS_AS(parse_exclusion_ring("ring:5:0110"), InvalidArgument);
    CHECK_THROWS_AS(parse_exclusion_ring("ring:3:0a1"), InvalidArgument);
    CHECK_THROWS_AS(ExclusionConfig::from_bits("01"), InvalidArgument);
  }
}
