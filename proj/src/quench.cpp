#include <algorithm>
#include <cmath>
#include <numeric>

#include "fsep/dynamics.hpp"
#include "fsep/error.hpp"
#include "fsep/stats.hpp"

namespace fsep {

ExclusionConfig random_exclusion(std::size_t m, std::size_t particles, CounterRng& rng) {
  if (particles > m) throw InvalidArgument("more particles than sites");
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  ExclusionConfig cfg(m);
  for (std::size_t i = 0; i < particles; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
    std::swap(idx[i], idx[j]);
    cfg.set(idx[i], true);
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Renewal records

namespace {

// Bit i set when sites i-2, i-1, i are all empty.
ExclusionConfig triple_empty_mask(const ExclusionConfig& cfg) {
  ExclusionConfig empty(cfg.size());
  auto e = empty.words();
  const auto o = cfg.words();
  for (std::size_t w = 0; w < e.size(); ++w) e[w] = ~o[w];
  e.back() &= empty.tail_mask();
  const auto e1 = rotate(empty, 1);
  const auto e2 = rotate(empty, 2);
  for (std::size_t w = 0; w < e.size(); ++w) e[w] &= e1.words()[w] & e2.words()[w];
  return empty;
}

}  // namespace

RenewalRecord renewal_record(const ExclusionConfig& cfg) {
  RenewalRecord r;
  r.ring_size = cfg.size();
  const auto mask = triple_empty_mask(cfg);
  const auto words = mask.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t x = words[w];
    while (x) {
      const int b = std::countr_zero(x);
      r.markers.push_back(64 * w + static_cast<std::size_t>(b));
      x &= x - 1;
    }
  }
  const std::size_t n = r.markers.size();
  r.gaps.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t a = r.markers[j];
    const std::size_t b = r.markers[(j + 1) % n];
    r.gaps[j] = (b + r.ring_size - a) % r.ring_size;
    if (r.gaps[j] == 0) r.gaps[j] = r.ring_size;
  }
  return r;
}

RenewalRecord reroot(const RenewalRecord& r, CounterRng& rng) {
  if (r.markers.empty()) throw InsufficientData("no markers to re-root at");
  const auto j = static_cast<long long>(rng.below(r.markers.size()));
  RenewalRecord out = r;
  out.markers = rotate_seq<std::size_t>(r.markers, -j);
  out.gaps = rotate_seq<std::size_t>(r.gaps, -j);
  return out;
}

std::string gap_interior(const ExclusionConfig& cfg, const RenewalRecord& r, std::size_t j) {
  const std::size_t g = r.gaps.at(j);
  std::string s;
  if (g < 4) return s;
  const std::size_t m = cfg.size();
  for (std::size_t k = 1; k + 3 <= g; ++k) s += cfg[(r.markers[j] + k) % m] ? '1' : '0';
  return s;
}

std::size_t gap_bin(std::size_t gap) {
  if (gap == 0) throw InvalidArgument("gap must be positive");
  if (gap == 1) return 0;
  if (gap <= 5) return 1;
  if (gap <= 7) return 2;
  if (gap <= 11) return 3;
  return 4;
}

ChiSquareResult renewal_independence_test(const std::vector<RenewalRecord>& records) {
  std::vector<std::vector<std::uint64_t>> table(kGapBins, std::vector<std::uint64_t>(kGapBins, 0));
  std::uint64_t pairs = 0, gaps = 0;
  for (const auto& r : records) {
    gaps += r.gaps.size();
    for (std::size_t j = 0; j + 1 < r.gaps.size(); j += 2) {
      ++table[gap_bin(r.gaps[j])][gap_bin(r.gaps[j + 1])];
      ++pairs;
    }
  }
  if (gaps < 10000 || pairs == 0) throw InsufficientData("fewer than 10^4 gaps pooled");
  return chi_square_independence(table);
}

// ---------------------------------------------------------------------------
// Quench

QuenchResult quench_lowdensity(double rho, std::size_t m, std::uint64_t seed, std::uint64_t max_steps,
                               unsigned threads) {
  if (!(rho >= 0.0 && rho < 0.5)) throw InvalidArgument("low-density quench needs density in [0, 1/2)");
  CounterRng rng(seed, static_cast<std::uint64_t>(Stream::placement));
  const auto particles = static_cast<std::size_t>(std::llround(rho * static_cast<double>(m)));

  QuenchResult out;
  ExclusionConfig cur = random_exclusion(m, particles, rng);
  ExclusionConfig markers = triple_empty_mask(cur);
  for (std::uint64_t t = 0; t < max_steps; ++t) {
    ExclusionConfig next = step_fssep(cur, RngContext{seed, t}, threads);
    if (next == cur) {
      out.frozen = true;
      break;
    }
    const auto nm = triple_empty_mask(next);
    for (std::size_t w = 0; w < nm.word_count(); ++w) {
      if (nm.words()[w] & ~markers.words()[w]) out.markers_monotone = false;
    }
    markers = nm;
    cur = std::move(next);
    ++out.steps;
  }
  if (!out.frozen) out.frozen = is_frozen(cur);

  out.record = renewal_record(cur);
  static constexpr bool tail[6] = {true, false, true, false, false, false};
  for (auto s : out.record.markers) {
    bool match = true;
    for (std::size_t k = 0; k < 6 && match; ++k) match = cur[(s + 1 + k) % m] == tail[k];
    out.count_101000 += match;
  }
  for (auto g : out.record.gaps) out.count_gap1 += g == 1;
  out.final_config = std::move(cur);
  return out;
}

namespace {

// Ratio estimator sum(x)/sum(y) with its delta-method standard error.
Estimate ratio_estimate(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double sx = std::accumulate(x.begin(), x.end(), 0.0);
  const double sy = std::accumulate(y.begin(), y.end(), 0.0);
  Estimate e;
  if (sy == 0.0) return e;
  e.value = sx / sy;
  if (x.size() < 2) return e;
  double ss = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double r = x[j] - e.value * y[j];
    ss += r * r;
  }
  const double ybar = sy / n;
  e.se = std::sqrt(ss / (n * (n - 1.0))) / ybar;
  return e;
}

Estimate mean_estimate(const std::vector<double>& x) {
  Estimate e;
  const double n = static_cast<double>(x.size());
  if (x.empty()) return e;
  e.value = std::accumulate(x.begin(), x.end(), 0.0) / n;
  if (x.size() < 2) return e;
  double ss = 0.0;
  for (auto v : x) ss += (v - e.value) * (v - e.value);
  e.se = std::sqrt(ss / (n - 1.0) / n);
  return e;
}

}  // namespace

QuenchSummary summarize_quench(const std::vector<QuenchResult>& runs, double rho, bool test_independence) {
  QuenchSummary s;
  s.rho = rho;
  s.runs = runs.size();
  std::vector<double> hits, gap1, markers, density;
  std::vector<RenewalRecord> records;
  for (const auto& r : runs) {
    s.frozen_runs += r.frozen;
    s.markers_monotone = s.markers_monotone && r.markers_monotone;
    s.markers += r.record.markers.size();
    hits.push_back(static_cast<double>(r.count_101000));
    gap1.push_back(static_cast<double>(r.count_gap1));
    markers.push_back(static_cast<double>(r.record.markers.size()));
    density.push_back(static_cast<double>(r.record.markers.size()) / static_cast<double>(r.record.ring_size));
    records.push_back(r.record);
  }
  s.p_101000 = ratio_estimate(hits, markers);
  s.p_gap1 = ratio_estimate(gap1, markers);
  s.marker_density = mean_estimate(density);
  const double c = std::pow(1.0 - rho, 3.0);
  s.q.value = std::sqrt(s.marker_density.value / c);
  s.q.se = s.q.value > 0.0 ? s.marker_density.se / (2.0 * s.q.value * c) : 0.0;
  if (test_independence) s.independence = renewal_independence_test(records);
  return s;
}

// ---------------------------------------------------------------------------
// Half density

ConvergenceResult halfdensity_convergence(std::size_t m, std::uint64_t seed, std::uint64_t max_steps,
                                          std::uint64_t verify_steps) {
  if (m % 2 != 0) throw InvalidArgument("half-filled rings need an even number of sites");
  CounterRng rng(seed, static_cast<std::uint64_t>(Stream::placement));
  return halfdensity_convergence(random_exclusion(m, m / 2, rng), seed, max_steps, verify_steps);
}

ConvergenceResult halfdensity_convergence(const ExclusionConfig& start, std::uint64_t seed, std::uint64_t max_steps,
                                          std::uint64_t verify_steps) {
  if (2 * start.particles() != start.size()) throw InvalidArgument("start must be half filled");
  ConvergenceResult res;
  res.initial = start;
  ExclusionConfig cur = start;
  std::uint64_t t = 0;
  for (;; ++t) {
    ExclusionConfig next = step_fssep(cur, RngContext{seed, t});
    // Membership in either class forces an exact shift by two sites, so the
    // full parse is needed only when the step is such a shift.
    if (next == rotate(cur, -2) || next == rotate(cur, 2)) {
      const Drift d = member_left_right(cur);
      if (d != Drift::neither) {
        res.absorbed = true;
        res.absorption_step = t;
        res.drift = d;
        break;
      }
    }
    if (t == max_steps) return res;
    cur = std::move(next);
  }

  res.translation_verified = true;
  for (std::uint64_t j = 0; j < verify_steps; ++j) {
    const ExclusionConfig next = step_fssep(cur, RngContext{seed, t + j});
    const bool left_ok = next == rotate(cur, -2);
    const bool right_ok = next == rotate(cur, 2);
    const bool ok = res.drift == Drift::left ? left_ok : res.drift == Drift::right ? right_ok : (left_ok || right_ok);
    if (!ok) {
      res.translation_verified = false;
      break;
    }
    cur = next;
  }
  return res;
}

}  // namespace fsep
