#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fsep/dynamics.hpp"
#include "fsep/gibbs.hpp"
#include "fsep/lattice.hpp"
#include "fsep/stats.hpp"
#include "fsep/substitution.hpp"
#include "oracles.hpp"

using namespace fsep;

namespace {

ExclusionConfig step(const std::string& bits, std::uint64_t seed = 1, std::uint64_t t = 0) {
  return step_fssep(ExclusionConfig::from_bits(bits), RngContext{seed, t});
}

StackConfig step_stacks(const std::string& h, std::uint64_t seed = 1, std::uint64_t t = 0) {
  return step_ssm(StackConfig::from_string(h), RngContext{seed, t});
}

ExclusionConfig random_ring(std::size_t m, double p, CounterRng& rng) {
  ExclusionConfig cfg(m);
  for (std::size_t i = 0; i < m; ++i) cfg.set(i, rng.bernoulli(p));
  return cfg;
}

// Empirical law over `n` independent steps compared against an exact law:
// same support, and every frequency within 5 binomial standard errors.
template <class Key, class Draw>
void check_against_law(const std::map<Key, double>& law, Draw&& draw, int n) {
  std::map<Key, int> seen;
  for (int s = 0; s < n; ++s) ++seen[draw(static_cast<std::uint64_t>(s))];
  for (const auto& [k, c] : seen) REQUIRE(law.count(k) == 1);
  for (const auto& [k, p] : law) {
    const double f = static_cast<double>(seen[k]) / n;
    CHECK(std::abs(f - p) <= 5.0 * std::sqrt(p * (1.0 - p) / n) + 1e-12);
  }
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("exclusion step examples") {
    CHECK(step("10101010") == ExclusionConfig::from_bits("10101010"));
    CHECK(step("11001100").bits() == "00110011");
    CHECK(step("00110011").bits() == "11001100");
    CHECK(step("110010").bits() == "001011");
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto b = step("11011", s).bits();
      CHECK((b == "10111" || b == "11101"));
    }
  }

  TEST_CASE("exclusion step law matches the enumerated law") {
    for (const std::string ring : {"11011", "0110110", "1101101100", "110110110110", "111010110"}) {
      const auto law = oracle::fssep_step_law(ring);
      const auto cfg = ExclusionConfig::from_bits(ring);
      check_against_law(law, [&](std::uint64_t s) { return step_fssep(cfg, RngContext{s, 3}).bits(); }, 20000);
    }
  }

  TEST_CASE("exclusion step law on random small rings") {
    CounterRng rng(17, 0);
    for (int t = 0; t < 40; ++t) {
      const std::size_t m = 3 + rng.below(10);
      const auto cfg = random_ring(m, 0.6, rng);
      const auto law = oracle::fssep_step_law(cfg.bits());
      check_against_law(law, [&](std::uint64_t s) { return step_fssep(cfg, RngContext{s, 0}).bits(); }, 4000);
    }
  }

  TEST_CASE("packed kernel equals the reference kernel") {
    CounterRng rng(5, 0);
    for (int t = 0; t < 400; ++t) {
      const std::size_t m = 3 + rng.below(300);
      const auto cfg = random_ring(m, rng.uniform(), rng);
      const RngContext ctx{rng.next(), rng.next()};
      REQUIRE_MESSAGE(step_fssep(cfg, ctx) == step_fssep_reference(cfg, ctx), cfg.bits());
    }
  }

  TEST_CASE("result does not depend on the thread count") {
    CounterRng rng(6, 0);
    const auto cfg = random_ring(100003, 0.55, rng);
    for (std::uint64_t t = 0; t < 5; ++t) {
      const RngContext ctx{99, t};
      const auto one = step_fssep(cfg, ctx, 1);
      CHECK(step_fssep(cfg, ctx, 3) == one);
      CHECK(step_fssep(cfg, ctx, 8) == one);
    }
    StackConfig st = sample_even_gibbs(0.5, 20000, rng);
    const RngContext ctx{4, 4};
    CHECK(step_ssm(st, ctx, 1) == step_ssm(st, ctx, 6));
  }

  TEST_CASE("particle number is conserved") {
    CounterRng rng(7, 0);
    auto cfg = random_ring(777, 0.4, rng);
    const auto n = cfg.particles();
    for (std::uint64_t t = 0; t < 2000; ++t) {
      cfg = step_fssep(cfg, RngContext{1, t});
      REQUIRE(cfg.particles() == n);
    }
    auto st = sample_even_gibbs(0.7, 101 + 1, rng);
    const auto total = st.total();
    for (std::uint64_t t = 0; t < 2000; ++t) {
      st = step_ssm(st, RngContext{1, t});
      REQUIRE(st.total() == total);
    }
  }

  TEST_CASE("an empty triple is never created") {
    CounterRng rng(8, 0);
    auto cfg = random_ring(64, 0.35, rng);
    const std::size_t m = cfg.size();
    for (std::uint64_t t = 0; t < 100000; ++t) {
      const auto next = step_fssep(cfg, RngContext{2, t});
      for (std::size_t i = 0; i < m; ++i) {
        const bool was = !cfg[(i + m - 2) % m] && !cfg[(i + m - 1) % m] && !cfg[i];
        const bool is = !next[(i + m - 2) % m] && !next[(i + m - 1) % m] && !next[i];
        if (is) REQUIRE(was);
      }
      cfg = next;
    }
  }

  TEST_CASE("above half density no empty triple appears") {
    CounterRng rng(9, 0);
    ExclusionConfig cfg(128);
    for (std::size_t i = 0; i < 128; ++i) cfg.set(i, i % 3 != 2 || i % 2 == 0);
    REQUIRE(cfg.particles() > 64);
    REQUIRE_FALSE(contains_cyclic(cfg, "000"));
    for (std::uint64_t t = 0; t < 1000000; ++t) {
      cfg = step_fssep(cfg, RngContext{3, t});
      if (t % 16 == 0) REQUIRE_FALSE(contains_cyclic(cfg, "000"));
    }
    CHECK_FALSE(contains_cyclic(cfg, "000"));
  }

  TEST_CASE("left and right classes translate by two sites") {
    const auto left = ExclusionConfig::from_bits("110010101100");
    REQUIRE(member_left_right(left) == Drift::left);
    CHECK(step_fssep(left, RngContext{1, 0}) == rotate(left, -2));
    const auto right = ExclusionConfig::from_bits("001101010011");
    REQUIRE(member_left_right(right) == Drift::right);
    CHECK(step_fssep(right, RngContext{1, 0}) == rotate(right, 2));
  }

  TEST_CASE("stack step examples") {
    CHECK(step_stacks("1,1,1").str() == "1,1,1");
    CHECK(step_stacks("2,0,2,0").str() == "0,2,0,2");
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto r = step_stacks("2,2,1,1", s).str();
      CHECK((r == "0,2,2,2" || r == "2,0,2,2"));
    }
  }

  TEST_CASE("stack step law matches the enumerated law") {
    for (const std::vector<unsigned> h : {std::vector<unsigned>{2, 2, 1, 1}, {3, 2, 0, 4}, {2, 2, 2, 2, 2}, {5, 0, 3, 3, 1, 2}}) {
      const auto law = oracle::ssm_step_law(h);
      const StackConfig cfg(std::vector<Height>(h.begin(), h.end()));
      check_against_law(
          law,
          [&](std::uint64_t s) {
            const auto next = step_ssm(cfg, RngContext{s, 1});
            return std::vector<unsigned>(next.heights().begin(), next.heights().end());
          },
          20000);
    }
  }

  TEST_CASE("stack rings without adjacent short stacks keep that property and their parities") {
    CounterRng rng(10, 0);
    for (int r = 0; r < 20; ++r) {
      auto st = sample_etis(1.5, ParitySource::bernoulli(0.4), 60, rng);
      REQUIRE(in_x_star(st));
      const auto sigma = parity_map(st);
      for (std::uint64_t t = 0; t < 1000; ++t) {
        st = step_ssm(st, RngContext{static_cast<std::uint64_t>(r), t});
        REQUIRE(in_x_star(st));
        REQUIRE(parity_map(st) == sigma);
      }
    }
  }

  TEST_CASE("bond flow table") {
    CHECK(bond_flow(0, 1, true) == 0);
    CHECK(bond_flow(2, 1, false) == 1);
    CHECK(bond_flow(1, 5, true) == -1);
    CHECK(bond_flow(3, 3, true) == 1);
    CHECK(bond_flow(3, 3, false) == -1);
  }

  TEST_CASE("evolve runs observers on schedule") {
    std::vector<std::unique_ptr<Observer>> obs;
    obs.push_back(make_observer("frozen"));
    obs.push_back(make_observer("cylinder:2"));
    const auto out = evolve(AnyConfig(ExclusionConfig::from_bits("11001100")), 4, 1, obs, 2);
    CHECK(std::get<ExclusionConfig>(out.final_config).bits() == "11001100");
    CHECK(out.steps == 4);
    std::size_t cylinder = 0, frozen = 0;
    for (const auto& r : out.records) {
      cylinder += r.observable == "cylinder_2";
      frozen += r.observable == "frozen";
    }
    CHECK(cylinder == 3);
    CHECK(frozen == 0);

    std::vector<std::unique_ptr<Observer>> f;
    f.push_back(make_observer("frozen"));
    const auto still = evolve(AnyConfig(ExclusionConfig::from_bits("101000")), 3, 1, f);
    REQUIRE(still.records.size() == 1);
    CHECK(still.records[0].step == 0);
    CHECK_THROWS_AS(make_observer("nonsense"), InvalidArgument);
  }

  TEST_CASE("coupled step example") {
    const auto s = CoupledState::from_stack(StackConfig::from_string("2,0"));
    CHECK(s.exclusion().bits() == "0110");
    CHECK(s.offset() == 0);
    const auto n = coupled_step(s, RngContext{1, 0});
    CHECK(n.stack().str() == "0,2");
    CHECK(n.exclusion().bits() == "1001");
    CHECK(n.offset() == 1);
    CHECK(n.invariant_holds());
  }

  TEST_CASE("coupled invariant holds along a trajectory") {
    CounterRng rng(11, 0);
    CoupledState s = CoupledState::from_stack(sample_even_gibbs(0.5, 64, rng));
    for (std::uint64_t t = 0; t < 10000; ++t) {
      s = coupled_step(s, RngContext{12, t});
      REQUIRE(s.invariant_holds());
    }
  }

  TEST_CASE("coupled exclusion component follows the exclusion law") {
    const auto start = CoupledState::from_stack(StackConfig::from_string("2,3,0,2"));
    const auto law = oracle::fssep_step_law(start.exclusion().bits());
    check_against_law(law, [&](std::uint64_t s) { return coupled_step(start, RngContext{s, 0}).exclusion().bits(); },
                      20000);
  }

  TEST_CASE("minimal period") {
    CHECK(minimal_period(ExclusionConfig::from_bits("0110")) == 4);
    CHECK(minimal_period(ExclusionConfig::from_bits("01100110")) == 4);
    CHECK(minimal_period(ExclusionConfig::from_bits("000")) == 1);
  }
}
