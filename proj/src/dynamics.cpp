#include "fsep/dynamics.hpp"

#include <algorithm>
#include <thread>

namespace fsep {

namespace {

// Copy of a ring bitset with one word of wrapped sites on each side:
// bit k of the result holds site (k - 64) mod m.
std::vector<std::uint64_t> padded(std::span<const std::uint64_t> words, std::size_t m) {
  const std::size_t w = words.size();
  std::vector<std::uint64_t> p(w + 3, 0);
  const auto site = [&](long long s) {
    const auto ms = static_cast<long long>(m);
    s = ((s % ms) + ms) % ms;
    return (words[static_cast<std::size_t>(s) >> 6] >> (s & 63)) & 1ULL;
  };
  if (m < 128) {
    for (std::size_t j = 0; j < w + 2; ++j) {
      std::uint64_t v = 0;
      for (int b = 0; b < 64; ++b) {
        v |= site(64 * (static_cast<long long>(j) - 1) + b) << b;
      }
      p[j] = v;
    }
    return p;
  }
  const auto window = [&](std::size_t pos) {  // requires pos + 64 <= m
    const std::size_t i = pos >> 6;
    const std::size_t sh = pos & 63;
    if (sh == 0) return words[i];
    return (words[i] >> sh) | (words[i + 1] << (64 - sh));
  };
  const std::size_t r = m - 64 * (w - 1);  // valid bits in the last word, 1..64
  p[0] = window(m - 64);
  for (std::size_t j = 1; j < w; ++j) p[j] = words[j - 1];
  p[w] = r == 64 ? words[w - 1] : (words[w - 1] | (words[0] << r));
  p[w + 1] = window(64 - (r & 63 ? r : 64));
  return p;
}

// 64 sites starting at `pos` (pos >= -64) read from a padded array.
inline std::uint64_t extract(const std::vector<std::uint64_t>& p, long long pos) {
  const auto b = static_cast<std::size_t>(pos + 64);
  const std::size_t i = b >> 6;
  const std::size_t sh = b & 63;
  if (sh == 0) return p[i];
  return (p[i] >> sh) | (p[i + 1] << (64 - sh));
}

template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(threads, n / 64));
  if (t <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + t - 1) / t;
  for (std::size_t c = 0; c < t; ++c) {
    const std::size_t lo = c * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

ExclusionConfig step_fssep(const ExclusionConfig& cfg, const RngContext& ctx, unsigned threads) {
  const std::size_t m = cfg.size();
  const std::size_t nw = cfg.word_count();
  const auto occ = padded(cfg.words(), m);

  std::vector<std::uint64_t> coin_words(nw);
  for (std::size_t i = 0; i < nw; ++i) coin_words[i] = ctx.word(Stream::conflict, i);
  const std::size_t r = m & 63;
  if (r) coin_words[nw - 1] &= (1ULL << r) - 1;
  const auto coin = padded(coin_words, m);

  ExclusionConfig out(m);
  auto dst = out.words();
  parallel_chunks(nw, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t w = lo; w < hi; ++w) {
      const auto base = static_cast<long long>(64 * w);
      const std::uint64_t o = extract(occ, base);
      const std::uint64_t om1 = extract(occ, base - 1);
      const std::uint64_t om2 = extract(occ, base - 2);
      const std::uint64_t om3 = extract(occ, base - 3);
      const std::uint64_t op1 = extract(occ, base + 1);
      const std::uint64_t op2 = extract(occ, base + 2);
      const std::uint64_t op3 = extract(occ, base + 3);

      const std::uint64_t right_mover = o & om1 & ~op1;
      const std::uint64_t left_mover = o & op1 & ~om1;
      // Empty site with a right mover on its left and a left mover on its right.
      const std::uint64_t clash_here = ~o & om1 & om2 & op1 & op2;
      const std::uint64_t clash_next = ~op1 & o & om1 & op2 & op3;
      const std::uint64_t clash_prev = ~om1 & om2 & om3 & o & op1;

      const std::uint64_t c0 = extract(coin, base);
      const std::uint64_t cm1 = extract(coin, base - 1);
      const std::uint64_t cp1 = extract(coin, base + 1);

      const std::uint64_t leave = (right_mover & ~(clash_next & ~cp1)) | (left_mover & ~(clash_prev & cm1));
      const std::uint64_t from_left = om1 & om2 & ~o & ~(clash_here & ~c0);
      const std::uint64_t from_right = op1 & op2 & ~o & ~(clash_here & c0);
      dst[w] = (o & ~leave) | from_left | from_right;
    }
  });
  dst[nw - 1] &= out.tail_mask();
  return out;
}

ExclusionConfig step_fssep_reference(const ExclusionConfig& cfg, const RngContext& ctx) {
  const std::size_t m = cfg.size();
  std::vector<int> from(m, -1);  // source site of the particle arriving at each empty site
  std::vector<std::size_t> movers;
  for (std::size_t i = 0; i < m; ++i) {
    if (!cfg[i]) continue;
    const std::size_t l = (i + m - 1) % m;
    const std::size_t r = (i + 1) % m;
    if (cfg[l] == cfg[r]) continue;
    const std::size_t target = cfg[l] ? r : l;
    if (from[target] < 0) {
      from[target] = static_cast<int>(i);
    } else {
      // Two candidates: keep the one arriving from the left when the coin is 1.
      const std::size_t left_src = (target + m - 1) % m;
      from[target] = static_cast<int>(ctx.bit(Stream::conflict, target) ? left_src : (target + 1) % m);
    }
  }
  ExclusionConfig out = cfg;
  for (std::size_t t = 0; t < m; ++t) {
    if (from[t] < 0) continue;
    out.set(static_cast<std::size_t>(from[t]), false);
  }
  for (std::size_t t = 0; t < m; ++t) {
    if (from[t] >= 0) out.set(t, true);
  }
  return out;
}

StackConfig step_ssm(const StackConfig& cfg, const RngContext& ctx, unsigned threads) {
  const std::size_t m = cfg.size();
  std::vector<Height> next(m);
  bool overflow = false;
  parallel_chunks(m, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const std::size_t l = (i + m - 1) % m;
      const std::size_t r = (i + 1) % m;
      const int in = bond_flow(cfg[l], cfg[i], ctx.bit(Stream::bond, l));
      const int out = bond_flow(cfg[i], cfg[r], ctx.bit(Stream::bond, i));
      const long long h = static_cast<long long>(cfg[i]) + in - out;
      if (h > static_cast<long long>(kMaxHeight)) overflow = true;
      next[i] = static_cast<Height>(h);
    }
  });
  if (overflow) throw Overflow("stack height exceeds 2^31-1");
  return StackConfig(std::move(next));
}

AnyConfig step_any(const AnyConfig& cfg, const RngContext& ctx, unsigned threads) {
  if (const auto* e = std::get_if<ExclusionConfig>(&cfg)) return step_fssep(*e, ctx, threads);
  return step_ssm(std::get<StackConfig>(cfg), ctx, threads);
}

}  // namespace fsep
