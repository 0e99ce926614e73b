#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fsep/error.hpp"
#include "fsep/exact.hpp"
#include "oracles.hpp"

using namespace fsep;

TEST_SUITE("exact") {
  TEST_CASE("enumeration of small rings") {
    const auto four = enumerate_even_ring(3, 4);
    CHECK(four.size() == 3);
    CHECK(four.front().str() == "2,2,0");
    const auto six = enumerate_even_ring(3, 6);
    CHECK(six.size() == 7);
    CHECK_THROWS_AS(enumerate_even_ring(3, 5), InvalidArgument);
    CHECK_THROWS_AS(enumerate_even_ring(2, 4), InvalidArgument);
    CHECK_THROWS_AS(enumerate_even_ring(7, 40, 100), CapExceeded);
    for (const auto& s : enumerate_even_ring(5, 10)) {
      CHECK(s.total() == 10);
      for (std::size_t i = 0; i < 5; ++i) {
        CHECK(s[i] % 2 == 0);
        CHECK((s[i] != 0 || s[(i + 1) % 5] != 0));
      }
    }
  }

  TEST_CASE("transition probabilities") {
    const auto model = transition_matrix(enumerate_even_ring(3, 6));
    const auto it = std::find(model.states.begin(), model.states.end(), StackConfig::from_string("2,2,2"));
    REQUIRE(it != model.states.end());
    const auto a = static_cast<std::size_t>(it - model.states.begin());
    CHECK(model.at(a, a) == doctest::Approx(0.25));
    for (std::size_t i = 0; i < model.size(); ++i) {
      double sum = 0.0;
      for (const auto& e : model.rows[i]) sum += e.p;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  TEST_CASE("kernel support is symmetric and the chain is irreducible") {
    for (std::size_t m = 3; m <= 7; ++m) {
      for (std::size_t n = m + 1 + (m + 1) % 2; n <= 14; n += 2) {
        const auto model = transition_matrix(enumerate_even_ring(m, n));
        for (std::size_t a = 0; a < model.size(); ++a) {
          for (const auto& e : model.rows[a]) REQUIRE(model.at(e.to, a) > 0.0);
        }
        CHECK_MESSAGE(is_irreducible(model), "m=" << m << " n=" << n);
      }
    }
  }

  TEST_CASE("stationary law") {
    const auto small = stationary_and_detailed_balance(transition_matrix(enumerate_even_ring(3, 4)));
    REQUIRE(small.irreducible);
    for (double p : small.pi) CHECK(p == doctest::Approx(1.0 / 3.0));

    const auto model = transition_matrix(enumerate_even_ring(5, 10));
    const auto lu = stationary_and_detailed_balance(model, 4096, "lu");
    const auto pw = stationary_and_detailed_balance(model, 4096, "power");
    CHECK(lu.method == "lu");
    CHECK(pw.method == "power");
    for (std::size_t i = 0; i < lu.pi.size(); ++i) CHECK(std::abs(lu.pi[i] - pw.pi[i]) < 1e-10);
    CHECK(lu.max_solve_deviation < 1e-12);
    CHECK(lu.max_balance_residual < 1e-14);
    CHECK(lu.max_stationarity_residual < 1e-14);
  }

  TEST_CASE("transfer eigenvalues") {
    const auto spec = transfer_spec(0.5, 64);
    CHECK(spec.lambda1 == doctest::Approx(0.5));
    CHECK(spec.lambda2 == doctest::Approx(-1.0 / 6.0));
    const auto ev = numeric_eigenvalues(spec);
    CHECK(std::abs(ev[0] - spec.lambda1) < 1e-12);
    CHECK(std::abs(ev[1] - spec.lambda2) < 1e-12);
    for (std::size_t i = 0; i < spec.dim(); ++i) {
      double tw = 0.0;
      for (std::size_t j = 0; j < spec.dim(); ++j) tw += spec.t(i, j) * spec.w[j];
      CHECK(std::abs(tw - spec.lambda1 * spec.w[i]) < 1e-12);
    }
    const auto t = oracle::transfer_matrix(0.5, static_cast<int>(spec.dim()));
    for (std::size_t i = 0; i < spec.dim(); ++i) {
      for (std::size_t j = 0; j < spec.dim(); ++j) {
        CHECK(spec.t(i, j) == doctest::Approx(t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
      }
    }
  }

  TEST_CASE("truncation level") {
    CHECK_THROWS_AS(transfer_spec(0.9, 10), InvalidArgument);
    CHECK_THROWS_AS(transfer_spec(0.5, 11), InvalidArgument);
    CHECK_THROWS_AS(transfer_spec(1.0), InvalidArgument);
    for (double z : {0.1, 0.5, 0.8, 0.95}) {
      const auto spec = transfer_spec(z);
      CHECK(spec.tail_mass < kTransferTailTolerance);
      double mass = 0.0, mean = 0.0;
      const auto p = site_marginal(spec);
      for (std::size_t i = 0; i < p.size(); ++i) {
        mass += p[i];
        mean += 2.0 * static_cast<double>(i) * p[i];
      }
      CHECK(std::abs(mass - 1.0) < 1e-11);
      CHECK(std::abs(mean - mean_height(z)) < 1e-10);
    }
  }

  TEST_CASE("single site law at zeta 1/2") {
    const auto p = site_marginal(transfer_spec(0.5, 64));
    CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.5625).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.140625).epsilon(1e-12));
  }

  TEST_CASE("fugacity and density") {
    CHECK(mean_height(0.5) == doctest::Approx(2.0));
    CHECK(fugacity_of_density(2.0) == doctest::Approx(0.5));
    CHECK(fugacity_of_density(1.0) == 0.0);
    for (double z : {0.0, 0.3, 0.77}) CHECK(fugacity_of_density(mean_height(z)) == doctest::Approx(z));
    CHECK_THROWS_AS(fugacity_of_density(0.5), InvalidArgument);
  }

  TEST_CASE("cylinder probabilities") {
    const auto spec = transfer_spec(0.5);
    const std::vector<Height> zz{0, 0};
    CHECK(cylinder_prob(spec, zz) == 0.0);
    const std::vector<Height> odd{1};
    CHECK_THROWS_AS(cylinder_prob(spec, odd), InvalidArgument);

    const std::vector<std::vector<Height>> words{{0}, {2}, {2, 0, 4}, {4, 2}, {0, 6, 0, 2}};
    for (const auto& w : words) {
      std::vector<int> half;
      for (auto h : w) half.push_back(static_cast<int>(h / 2));
      const double big_ring = oracle::ring_trace_cylinder(0.5, 60, 400, half);
      CHECK(std::abs(cylinder_prob(spec, w) - big_ring) < 1e-12);
    }
  }

  TEST_CASE("finite ring cylinders match the trace formula") {
    for (const auto& w : std::vector<std::vector<Height>>{{0}, {2, 0}, {2, 0, 4}, {4, 4}}) {
      std::vector<int> half;
      for (auto h : w) half.push_back(static_cast<int>(h / 2));
      const double exact = grand_canonical_ring_cylinder(5, 0.5, w, 60);
      const double trace = oracle::ring_trace_cylinder(0.5, 40, 5, half);
      CHECK(std::abs(exact - trace) < 1e-12);
    }
  }
}
