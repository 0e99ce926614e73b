#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsep/lattice.hpp"

namespace fsep {

// ---------------------------------------------------------------------------
// Finite rings in the even sector

/// All stack rings on m sites with even heights summing to n and no two
/// cyclically adjacent empty sites, in decreasing lexicographic order.
std::vector<StackConfig> enumerate_even_ring(std::size_t m, std::size_t n, std::size_t cap = 200000);

struct MarkovEntry {
  std::size_t to;
  double p;
};

/// Sparse transition kernel over an enumerated state list.
struct FiniteMarkovModel {
  std::vector<StackConfig> states;
  std::vector<std::vector<MarkovEntry>> rows;  ///< sorted by target, duplicates merged

  std::size_t size() const noexcept { return states.size(); }
  double at(std::size_t from, std::size_t to) const;
};

/// Builds the one-step kernel by visiting every orientation of the bonds
/// joining two tall stacks. At most `max_free_bonds` such bonds per state.
FiniteMarkovModel transition_matrix(std::vector<StackConfig> states, unsigned threads = 1,
                                    std::size_t max_free_bonds = 24);

/// Number of empty sites.
std::size_t zero_count(const StackConfig& cfg);

struct StationaryResult {
  bool irreducible = false;
  std::string method;                  ///< "lu" or "power"
  std::vector<double> pi;              ///< solved stationary law
  std::vector<double> pi_closed_form;  ///< proportional to 2^(-2 * zero_count)
  double max_solve_deviation = 0.0;    ///< max |pi - pi_closed_form|
  double max_balance_residual = 0.0;   ///< max |pi(a)P(a,b) - pi(b)P(b,a)| under the closed form
  double max_stationarity_residual = 0.0;  ///< max |(pi P)(b) - pi(b)| under the closed form
};

/// Solves the stationary law (dense LU up to `lu_limit` states, power
/// iteration on the lazy chain above) and checks detailed balance.
/// A reducible chain is reported with irreducible = false and no solve.
StationaryResult stationary_and_detailed_balance(const FiniteMarkovModel& model, std::size_t lu_limit = 4096,
                                                 const std::string& force_method = "");

bool is_irreducible(const FiniteMarkovModel& model);

/// Probability of `word` at sites 0.. under the grand-canonical ring law with
/// weight zeta^N 2^(-2 * zero_count), summing particle numbers up to n_max.
double grand_canonical_ring_cylinder(std::size_t m, double zeta, std::span<const Height> word, std::size_t n_max);

// ---------------------------------------------------------------------------
// Transfer operator at fugacity zeta, indexed by half heights

struct TransferSpec {
  double zeta = 0.0;
  std::size_t hmax = 0;    ///< largest height kept (even)
  std::vector<double> u;   ///< indicator of height 0
  std::vector<double> v;   ///< v_i = zeta^i, v_0 = 0
  std::vector<double> w;   ///< leading eigenvector, truncated
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double w_norm2 = 0.0;    ///< squared norm of the untruncated eigenvector
  double tail_mass = 0.0;  ///< relative weight of the eigenvector beyond hmax

  std::size_t dim() const noexcept { return hmax / 2 + 1; }
  double t(std::size_t i, std::size_t j) const noexcept;
  /// Normalizer of a window of 2K+1 sites.
  double normalizer(std::size_t k) const;
};

inline constexpr double kTransferTailTolerance = 1e-12;

/// Smallest even hmax >= 10 whose truncated mass and truncated share of the
/// mean height are both below the tolerance.
std::size_t recommended_hmax(double zeta);

/// Throws if zeta is outside (0,1), hmax is odd or below 10, or the tail
/// beyond hmax exceeds kTransferTailTolerance.
TransferSpec transfer_spec(double zeta, std::size_t hmax);
TransferSpec transfer_spec(double zeta);

/// Eigenvalues of the truncated matrix, sorted by decreasing magnitude.
std::vector<double> numeric_eigenvalues(const TransferSpec& spec);

/// Single-site law: entry i is the probability of height 2i.
std::vector<double> site_marginal(const TransferSpec& spec);
double mean_height(double zeta);
double fugacity_of_density(double rho_e);

/// Probability that consecutive sites carry `word` (even heights) under the
/// infinite-volume law.
double cylinder_prob(const TransferSpec& spec, std::span<const Height> word);

}  // namespace fsep
