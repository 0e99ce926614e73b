#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsep/lattice.hpp"
#include "fsep/rng.hpp"

namespace fsep {

// ---------------------------------------------------------------------------
// Cylinder tables

using Pattern = std::vector<std::uint32_t>;

struct CylinderTable {
  std::size_t k = 0;
  std::map<Pattern, std::uint64_t> counts;
  std::uint64_t total = 0;

  double freq(const Pattern& p) const;
  nlohmann::json to_json() const;
};

/// Adds the cyclic windows of length k starting at sites 0, stride, 2*stride, ...
void add_windows(CylinderTable& table, const AnyConfig& cfg, std::size_t stride = 1);

/// Table of all cyclic windows (k <= 12) over a set of rings.
CylinderTable cylinder_table(const std::vector<AnyConfig>& samples, std::size_t k, std::size_t stride = 1);

double total_variation(const CylinderTable& a, const CylinderTable& b);

// ---------------------------------------------------------------------------
// Tests

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double dof);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

/// Two-sample homogeneity test. Cells with expected count below `min_expected`
/// in either sample are pooled into one cell.
ChiSquareResult chi_square_homogeneity(const CylinderTable& a, const CylinderTable& b, double min_expected = 5.0);

/// Independence test on a contingency table; empty rows and columns are dropped.
ChiSquareResult chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table);

struct TestOutcome {
  std::string test;
  double statistic = 0.0;
  double p_value = 1.0;
  double threshold = 0.0;
  bool pass = false;
};

nlohmann::json to_json(const TestOutcome& t);

using ConfigSampler = std::function<AnyConfig(CounterRng&)>;

struct StationarityOptions {
  std::size_t k = 3;
  std::uint64_t samples = 1000000;  ///< windows per table
  std::size_t stride = 0;           ///< 0 selects k + 8
  std::uint64_t steps = 1;
  std::uint64_t seed = 1;
};

struct StationarityResult {
  CylinderTable before;
  CylinderTable after;
  ChiSquareResult chi2;
  double tv = 0.0;
  std::uint64_t rings = 0;
};

/**
 * Compares window statistics of fresh samples against independent samples
 * advanced by `steps` steps of their dynamics. Tables with a single common
 * pattern compare equal exactly.
 */
StationarityResult stationarity_test(const ConfigSampler& sampler, const StationarityOptions& opt);

// ---------------------------------------------------------------------------
// Correlations

struct DecayFit {
  std::vector<double> covariance;  ///< covariance of empty-site indicators, distance 0..D
  std::vector<double> std_error;
  double ratio = 0.0;              ///< per-site decay factor of |covariance|
  bool ok = false;
  std::string reason;
};

DecayFit two_point_correlation(const std::vector<StackConfig>& samples, std::size_t max_distance);

// ---------------------------------------------------------------------------
// Renewal structure of frozen low-density states

/// Sites i with empty sites at i-2, i-1, i, their cyclic gaps, and the ring size.
struct RenewalRecord {
  std::size_t ring_size = 0;
  std::vector<std::size_t> markers;
  std::vector<std::size_t> gaps;  ///< gaps[j] = markers[j+1] - markers[j], cyclic
};

RenewalRecord renewal_record(const ExclusionConfig& cfg);

/// Rotates the marker list so that a uniformly chosen marker comes first.
RenewalRecord reroot(const RenewalRecord& r, CounterRng& rng);

/// Occupations strictly between the two blocks of empty sites ending at
/// markers j and j+1 (empty for gap 1).
std::string gap_interior(const ExclusionConfig& cfg, const RenewalRecord& r, std::size_t j);

/// Bins 1, 2-5, 6-7, 8-11, 12+.
std::size_t gap_bin(std::size_t gap);
inline constexpr std::size_t kGapBins = 5;

/// Independence of consecutive gaps, using disjoint pairs (g0,g1), (g2,g3), ...
ChiSquareResult renewal_independence_test(const std::vector<RenewalRecord>& records);

struct QuenchResult {
  ExclusionConfig final_config;
  bool frozen = false;
  std::uint64_t steps = 0;
  bool markers_monotone = true;  ///< no marker ever appeared after the start
  RenewalRecord record;
  std::uint64_t count_101000 = 0;  ///< markers i with sites i+1..i+6 reading 101000
  std::uint64_t count_gap1 = 0;
};

/**
 * Runs the exclusion dynamics from round(rho * m) particles placed uniformly
 * until no particle can move or `max_steps` is reached.
 */
QuenchResult quench_lowdensity(double rho, std::size_t m, std::uint64_t seed, std::uint64_t max_steps = 1000000,
                               unsigned threads = 1);

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

struct QuenchSummary {
  double rho = 0.0;
  std::size_t runs = 0;
  std::size_t frozen_runs = 0;
  bool markers_monotone = true;
  std::uint64_t markers = 0;
  Estimate p_101000;    ///< fraction of markers followed by 101000
  Estimate p_gap1;      ///< fraction of gaps equal to 1
  Estimate marker_density;
  Estimate q;           ///< sqrt(marker density / (1 - rho)^3)
  std::optional<ChiSquareResult> independence;
};

/// Ratio estimates with standard errors from the spread across runs. The gap
/// independence test needs 10^4 pooled gaps and can be skipped.
QuenchSummary summarize_quench(const std::vector<QuenchResult>& runs, double rho, bool test_independence = true);

// ---------------------------------------------------------------------------
// Half density

struct ConvergenceResult {
  bool absorbed = false;
  std::uint64_t absorption_step = 0;
  Drift drift = Drift::neither;
  bool translation_verified = false;  ///< exact shift by two sites for the verification window
  ExclusionConfig initial;
};

/// Uniform half-filled start, run until the ring enters a left or right class,
/// then check `verify_steps` further steps are exact translations.
ConvergenceResult halfdensity_convergence(std::size_t m, std::uint64_t seed, std::uint64_t max_steps,
                                          std::uint64_t verify_steps = 100);
ConvergenceResult halfdensity_convergence(const ExclusionConfig& start, std::uint64_t seed, std::uint64_t max_steps,
                                          std::uint64_t verify_steps = 100);

/// `particles` particles on uniformly chosen distinct sites.
ExclusionConfig random_exclusion(std::size_t m, std::size_t particles, CounterRng& rng);

}  // namespace fsep
