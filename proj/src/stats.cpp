#include "fsep/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "fsep/dynamics.hpp"
#include "fsep/error.hpp"

namespace fsep {

// ---------------------------------------------------------------------------
// Cylinder tables

double CylinderTable::freq(const Pattern& p) const {
  if (total == 0) return 0.0;
  const auto it = counts.find(p);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

nlohmann::json CylinderTable::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [p, c] : counts) {
    std::string key;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) key += ',';
      key += std::to_string(p[i]);
    }
    j[key] = c;
  }
  return j;
}

void add_windows(CylinderTable& table, const AnyConfig& cfg, std::size_t stride) {
  if (table.k == 0 || table.k > 12) throw InvalidArgument("cylinder length must be in 1..12");
  if (stride == 0) throw InvalidArgument("window stride must be positive");
  Pattern p(table.k);
  std::visit(
      [&](const auto& c) {
        const std::size_t m = c.size();
        for (std::size_t i = 0; i < m; i += stride) {
          for (std::size_t j = 0; j < table.k; ++j) p[j] = static_cast<std::uint32_t>(c[(i + j) % m]);
          ++table.counts[p];
          ++table.total;
        }
      },
      cfg);
}

CylinderTable cylinder_table(const std::vector<AnyConfig>& samples, std::size_t k, std::size_t stride) {
  CylinderTable t;
  t.k = k;
  for (const auto& s : samples) add_windows(t, s, stride);
  return t;
}

double total_variation(const CylinderTable& a, const CylinderTable& b) {
  double tv = 0.0;
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  while (ia != a.counts.end() || ib != b.counts.end()) {
    if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
      tv += a.freq(ia->first);
      ++ia;
    } else if (ia == a.counts.end() || ib->first < ia->first) {
      tv += b.freq(ib->first);
      ++ib;
    } else {
      tv += std::abs(a.freq(ia->first) - b.freq(ib->first));
      ++ia;
      ++ib;
    }
  }
  return 0.5 * tv;
}

// ---------------------------------------------------------------------------
// Chi-square tests

double chi_square_sf(double x, double dof) {
  if (dof <= 0.0) return 1.0;
  if (x <= 0.0) return 1.0;
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, x));
}

ChiSquareResult chi_square_homogeneity(const CylinderTable& a, const CylinderTable& b, double min_expected) {
  if (a.total == 0 || b.total == 0) throw InsufficientData("empty cylinder table");
  const double na = static_cast<double>(a.total);
  const double nb = static_cast<double>(b.total);
  const double n = na + nb;

  std::map<Pattern, std::pair<double, double>> cells;
  for (const auto& [p, c] : a.counts) cells[p].first = static_cast<double>(c);
  for (const auto& [p, c] : b.counts) cells[p].second = static_cast<double>(c);

  std::vector<std::pair<double, double>> kept;
  std::pair<double, double> pooled{0.0, 0.0};
  for (const auto& [p, c] : cells) {
    const double tot = c.first + c.second;
    if (std::min(tot * na / n, tot * nb / n) < min_expected) {
      pooled.first += c.first;
      pooled.second += c.second;
    } else {
      kept.push_back(c);
    }
  }
  if (pooled.first + pooled.second > 0.0) kept.push_back(pooled);

  ChiSquareResult r;
  for (const auto& [oa, ob] : kept) {
    const double tot = oa + ob;
    const double ea = tot * na / n;
    const double eb = tot * nb / n;
    r.statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  r.dof = static_cast<double>(kept.size()) - 1.0;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table) {
  const std::size_t rows = table.size();
  const std::size_t cols = rows ? table[0].size() : 0;
  std::vector<double> rs(rows, 0.0), cs(cols, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (table[i].size() != cols) throw InvalidArgument("contingency table is not rectangular");
    for (std::size_t j = 0; j < cols; ++j) {
      rs[i] += static_cast<double>(table[i][j]);
      cs[j] += static_cast<double>(table[i][j]);
      n += static_cast<double>(table[i][j]);
    }
  }
  if (n == 0.0) throw InsufficientData("empty contingency table");
  ChiSquareResult r;
  std::size_t used_r = 0, used_c = 0;
  for (auto x : rs) used_r += x > 0.0;
  for (auto x : cs) used_c += x > 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (rs[i] == 0.0 || cs[j] == 0.0) continue;
      const double e = rs[i] * cs[j] / n;
      const double d = static_cast<double>(table[i][j]) - e;
      r.statistic += d * d / e;
    }
  }
  r.dof = static_cast<double>((used_r > 0 ? used_r - 1 : 0) * (used_c > 0 ? used_c - 1 : 0));
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

nlohmann::json to_json(const TestOutcome& t) {
  return {{"test", t.test}, {"statistic", t.statistic}, {"p_value", t.p_value}, {"threshold", t.threshold},
          {"pass", t.pass}};
}

// ---------------------------------------------------------------------------
// Stationarity

StationarityResult stationarity_test(const ConfigSampler& sampler, const StationarityOptions& opt) {
  if (opt.samples == 0) throw InvalidArgument("sample count must be positive");
  const std::size_t stride = opt.stride ? opt.stride : opt.k + 8;
  StationarityResult r;
  r.before.k = opt.k;
  r.after.k = opt.k;
  CounterRng rng_a(opt.seed, 0xa11ceULL);
  CounterRng rng_b(opt.seed, 0xb0bULL);

  while (r.before.total < opt.samples) {
    add_windows(r.before, sampler(rng_a), stride);
    ++r.rings;
  }
  for (std::uint64_t ring = 0; r.after.total < opt.samples; ++ring) {
    AnyConfig cfg = sampler(rng_b);
    const std::uint64_t dyn_seed = hash_key(opt.seed, 0xd1ceULL, ring, 0);
    for (std::uint64_t t = 0; t < opt.steps; ++t) cfg = step_any(cfg, RngContext{dyn_seed, t});
    add_windows(r.after, cfg, stride);
  }

  r.tv = total_variation(r.before, r.after);
  if (r.before.counts.size() == 1 && r.after.counts.size() == 1 &&
      r.before.counts.begin()->first == r.after.counts.begin()->first) {
    r.chi2 = ChiSquareResult{0.0, 0.0, 1.0};
    return r;
  }
  r.chi2 = chi_square_homogeneity(r.before, r.after);
  return r;
}

// ---------------------------------------------------------------------------
// Correlations

DecayFit two_point_correlation(const std::vector<StackConfig>& samples, std::size_t max_distance) {
  if (samples.size() < 2) throw InsufficientData("correlation needs at least two rings");
  const std::size_t dmax = max_distance;
  const std::size_t rings = samples.size();
  std::vector<std::vector<double>> per_ring(rings, std::vector<double>(dmax + 1, 0.0));
  std::vector<double> sum_xx(dmax + 1, 0.0);
  double sum_x = 0.0, sites = 0.0;
  for (std::size_t r = 0; r < rings; ++r) {
    const auto& s = samples[r];
    const std::size_t m = s.size();
    if (m <= dmax) throw InvalidArgument("ring shorter than the largest distance");
    double mx = 0.0;
    for (std::size_t i = 0; i < m; ++i) mx += s[i] == 0;
    sum_x += mx;
    sites += static_cast<double>(m);
    mx /= static_cast<double>(m);
    for (std::size_t d = 0; d <= dmax; ++d) {
      double xx = 0.0;
      for (std::size_t i = 0; i < m; ++i) xx += (s[i] == 0) && (s[(i + d) % m] == 0);
      sum_xx[d] += xx;
      per_ring[r][d] = xx / static_cast<double>(m) - mx * mx;
    }
  }
  DecayFit fit;
  const double mean = sum_x / sites;
  fit.covariance.resize(dmax + 1);
  fit.std_error.resize(dmax + 1);
  for (std::size_t d = 0; d <= dmax; ++d) {
    fit.covariance[d] = sum_xx[d] / sites - mean * mean;
    double mu = 0.0, var = 0.0;
    for (std::size_t r = 0; r < rings; ++r) mu += per_ring[r][d];
    mu /= static_cast<double>(rings);
    for (std::size_t r = 0; r < rings; ++r) var += (per_ring[r][d] - mu) * (per_ring[r][d] - mu);
    fit.std_error[d] = std::sqrt(var / static_cast<double>(rings - 1) / static_cast<double>(rings));
  }

  if (fit.covariance[0] <= 0.0) {
    fit.reason = "indicator has zero variance";
    return fit;
  }
  const auto significant = [&](std::size_t d) { return std::abs(fit.covariance[d]) > 3.0 * fit.std_error[d]; };
  double log_sum = 0.0;
  std::size_t terms = 0;
  for (std::size_t d = 0; d < dmax && significant(d) && significant(d + 1); ++d) {
    log_sum += std::log(std::abs(fit.covariance[d + 1] / fit.covariance[d]));
    ++terms;
  }
  if (terms == 0) {
    fit.ratio = dmax >= 1 ? std::abs(fit.covariance[1]) / fit.covariance[0] : 0.0;
    fit.ok = true;
    fit.reason = "no significant correlation beyond distance 0";
    return fit;
  }
  fit.ratio = std::exp(log_sum / static_cast<double>(terms));
  if (fit.ratio > 0.95) {
    fit.reason = "covariance does not decay";
    return fit;
  }
  fit.ok = true;
  return fit;
}

}  // namespace fsep
