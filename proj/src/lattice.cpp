#include "fsep/lattice.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <string>

#include "fsep/error.hpp"

namespace fsep {

// ---------------------------------------------------------------------------
// ExclusionConfig

ExclusionConfig::ExclusionConfig(std::size_t sites) : sites_(sites), words_((sites + 63) / 64, 0) {
  if (sites < kMinSites) throw InvalidArgument("exclusion ring needs at least 3 sites");
}

ExclusionConfig ExclusionConfig::from_bits(std::string_view bits) {
  ExclusionConfig cfg(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      cfg.set(i, true);
    } else if (bits[i] != '0') {
      throw InvalidArgument("exclusion configuration must consist of 0 and 1");
    }
  }
  return cfg;
}

void ExclusionConfig::set(std::size_t i, bool occupied) noexcept {
  const std::uint64_t m = 1ULL << (i & 63);
  if (occupied) {
    words_[i >> 6] |= m;
  } else {
    words_[i >> 6] &= ~m;
  }
}

std::size_t ExclusionConfig::particles() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::uint64_t ExclusionConfig::tail_mask() const noexcept {
  const std::size_t r = sites_ & 63;
  return r == 0 ? ~0ULL : ((1ULL << r) - 1);
}

std::string ExclusionConfig::bits() const {
  std::string s(sites_, '0');
  for (std::size_t i = 0; i < sites_; ++i) {
    if ((*this)[i]) s[i] = '1';
  }
  return s;
}

// ---------------------------------------------------------------------------
// StackConfig, ParitySequence

StackConfig::StackConfig(std::vector<Height> heights) : h_(std::move(heights)) {
  if (h_.size() < kMinSites) throw InvalidArgument("stack ring needs at least 2 sites");
  for (auto h : h_) {
    if (h > kMaxHeight) throw Overflow("stack height exceeds 2^31-1");
  }
}

namespace {

Height parse_height(std::string_view tok) {
  if (tok.empty()) throw InvalidArgument("empty stack height");
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec == std::errc::result_out_of_range) throw Overflow("stack height exceeds 2^31-1");
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw InvalidArgument("stack height is not a decimal integer: " + std::string(tok));
  }
  if (v > kMaxHeight) throw Overflow("stack height exceeds 2^31-1");
  return static_cast<Height>(v);
}

}  // namespace

StackConfig StackConfig::from_string(std::string_view text) {
  std::vector<Height> h;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    h.push_back(parse_height(text.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return StackConfig(std::move(h));
}

std::uint64_t StackConfig::total() const noexcept {
  std::uint64_t t = 0;
  for (auto h : h_) t += h;
  return t;
}

std::string StackConfig::str() const {
  std::string s;
  for (std::size_t i = 0; i < h_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(h_[i]);
  }
  return s;
}

ParitySequence::ParitySequence(std::vector<std::uint8_t> bits) : b_(std::move(bits)) {
  for (auto b : b_) {
    if (b > 1) throw InvalidArgument("parity entries must be 0 or 1");
  }
}

ParitySequence ParitySequence::from_bits(std::string_view bits) {
  std::vector<std::uint8_t> b;
  b.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidArgument("parity sequence must consist of 0 and 1");
    b.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return ParitySequence(std::move(b));
}

double ParitySequence::density() const noexcept {
  if (b_.empty()) return 0.0;
  std::size_t n = 0;
  for (auto b : b_) n += b;
  return static_cast<double>(n) / static_cast<double>(b_.size());
}

std::string ParitySequence::str() const {
  std::string s;
  s.reserve(b_.size());
  for (auto b : b_) s += static_cast<char>('0' + b);
  return s;
}

// ---------------------------------------------------------------------------
// Text format

std::string to_ring_string(const ExclusionConfig& cfg) {
  return "ring:" + std::to_string(cfg.size()) + ":" + cfg.bits();
}

std::string to_ring_string(const StackConfig& cfg) {
  return "ring:" + std::to_string(cfg.size()) + ":" + cfg.str();
}

std::string to_ring_string(const AnyConfig& cfg) {
  return std::visit([](const auto& c) { return to_ring_string(c); }, cfg);
}

namespace {

std::pair<std::size_t, std::string_view> split_ring(std::string_view text) {
  constexpr std::string_view prefix = "ring:";
  if (text.substr(0, prefix.size()) != prefix) throw InvalidArgument("ring text must start with 'ring:'");
  text.remove_prefix(prefix.size());
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("ring text must be ring:<length>:<payload>");
  std::size_t len = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + colon, len);
  if (ec != std::errc() || p != text.data() + colon) throw InvalidArgument("ring length is not an integer");
  return {len, text.substr(colon + 1)};
}

}  // namespace

ExclusionConfig parse_exclusion_ring(std::string_view text) {
  auto [len, payload] = split_ring(text);
  if (payload.size() != len) throw InvalidArgument("ring length does not match payload");
  return ExclusionConfig::from_bits(payload);
}

StackConfig parse_stack_ring(std::string_view text) {
  auto [len, payload] = split_ring(text);
  auto cfg = StackConfig::from_string(payload);
  if (cfg.size() != len) throw InvalidArgument("ring length does not match payload");
  return cfg;
}

AnyConfig parse_ring(std::string_view text, bool stacks) {
  if (stacks) return parse_stack_ring(text);
  return parse_exclusion_ring(text);
}

// ---------------------------------------------------------------------------
// Rotations and height profiles

ExclusionConfig rotate(const ExclusionConfig& cfg, long long k) {
  const std::size_t m = cfg.size();
  const auto ms = static_cast<long long>(m);
  const auto shift = static_cast<std::size_t>(((k % ms) + ms) % ms);
  const auto src = cfg.words();
  const auto bit = [&](std::size_t s) { return (src[s >> 6] >> (s & 63)) & 1ULL; };
  ExclusionConfig out(m);
  auto dst = out.words();
  for (std::size_t w = 0; w < dst.size(); ++w) {
    // out(64w + j) = cfg(64w + j - shift)
    const std::size_t s0 = (64 * w + m - shift) % m;
    if (s0 + 64 <= m) {
      const std::size_t i = s0 >> 6;
      const std::size_t sh = s0 & 63;
      dst[w] = sh == 0 ? src[i] : ((src[i] >> sh) | (src[i + 1] << (64 - sh)));
    } else {
      std::uint64_t v = 0;
      for (std::size_t j = 0; j < 64 && 64 * w + j < m; ++j) v |= bit((s0 + j) % m) << j;
      dst[w] = v;
    }
  }
  dst.back() &= out.tail_mask();
  return out;
}

StackConfig rotate(const StackConfig& cfg, long long k) {
  return StackConfig(rotate_seq<Height>(cfg.heights(), k));
}

HeightProfile height_profile(const ExclusionConfig& cfg, std::size_t start) {
  const std::size_t m = cfg.size();
  if (start >= m) throw InvalidArgument("profile start must be a site of the ring");
  HeightProfile p;
  p.values.resize(m + 1);
  p.values[0] = 0;
  for (std::size_t k = 0; k < m; ++k) {
    p.values[k + 1] = p.values[k] + (cfg[(start + k) % m] ? -1 : 1);
  }
  return p;
}

ExclusionConfig config_from_profile(const HeightProfile& profile) {
  const auto& v = profile.values;
  if (v.size() < ExclusionConfig::kMinSites + 1) throw InvalidArgument("profile too short");
  if (v.front() != v.back()) throw InvalidArgument("profile of a ring must close");
  ExclusionConfig cfg(v.size() - 1);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const long long d = v[k + 1] - v[k];
    if (d == -1) {
      cfg.set(k, true);
    } else if (d != 1) {
      throw InvalidArgument("profile increments must be +1 or -1");
    }
  }
  return cfg;
}

long long delta(const ExclusionConfig& cfg) {
  if (2 * cfg.particles() != cfg.size()) {
    throw UndefinedDelta("height span is defined only for half-filled rings");
  }
  const auto p = height_profile(cfg);
  const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
  return *hi - *lo;
}

// ---------------------------------------------------------------------------
// Frozen states and set membership

bool is_frozen(const ExclusionConfig& cfg) {
  const std::size_t m = cfg.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!cfg[i]) continue;
    const bool l = cfg[(i + m - 1) % m];
    const bool r = cfg[(i + 1) % m];
    if (l != r) return false;
  }
  return true;
}

bool is_frozen(const StackConfig& cfg) {
  return std::all_of(cfg.heights().begin(), cfg.heights().end(), is_short);
}

ParitySequence parity_map(const StackConfig& cfg) {
  std::vector<std::uint8_t> b(cfg.size());
  for (std::size_t i = 0; i < cfg.size(); ++i) b[i] = static_cast<std::uint8_t>(cfg[i] & 1U);
  return ParitySequence(std::move(b));
}

bool in_frozen_set(const ExclusionConfig& cfg) {
  const std::size_t m = cfg.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (cfg[i] && cfg[(i + 1) % m]) return false;
  }
  return true;
}

bool in_x_star(const StackConfig& cfg) {
  const std::size_t m = cfg.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (is_short(cfg[i]) && is_short(cfg[(i + 1) % m])) return false;
  }
  return true;
}

bool in_x_star_sigma(const StackConfig& cfg, const ParitySequence& sigma) {
  if (sigma.size() != cfg.size()) throw InvalidArgument("parity sequence length differs from ring");
  return in_x_star(cfg) && parity_map(cfg) == sigma;
}

bool contains_cyclic(const ExclusionConfig& cfg, std::string_view pattern) {
  const std::size_t m = cfg.size();
  for (std::size_t i = 0; i < m; ++i) {
    bool match = true;
    for (std::size_t j = 0; j < pattern.size() && match; ++j) {
      match = cfg[(i + j) % m] == (pattern[j] == '1');
    }
    if (match) return true;
  }
  return false;
}

bool in_h(const ExclusionConfig& cfg) {
  if (cfg.particles() == cfg.size()) return false;
  for (std::string_view pat : {"000", "0100", "0010", "01010"}) {
    if (contains_cyclic(cfg, pat)) return false;
  }
  return true;
}

bool is_member(const AnyConfig& cfg, SetClass cls, const ParitySequence* sigma) {
  if (const auto* e = std::get_if<ExclusionConfig>(&cfg)) {
    switch (cls) {
      case SetClass::frozen: return in_frozen_set(*e);
      case SetClass::h: return in_h(*e);
      default: throw InvalidArgument("set class applies to stack configurations only");
    }
  }
  const auto& s = std::get<StackConfig>(cfg);
  switch (cls) {
    case SetClass::frozen: return is_frozen(s);
    case SetClass::x_star: return in_x_star(s);
    case SetClass::x_star_sigma:
      if (sigma == nullptr) throw InvalidArgument("x_star_sigma membership needs a parity sequence");
      return in_x_star_sigma(s, *sigma);
    case SetClass::h: break;
  }
  throw InvalidArgument("set class applies to exclusion configurations only");
}

// ---------------------------------------------------------------------------
// Region decomposition

namespace {

struct Run {
  std::size_t start;
  std::size_t length;
  bool symbol;
};

std::vector<Run> cyclic_runs(const ExclusionConfig& cfg) {
  const std::size_t m = cfg.size();
  std::size_t b = m;
  for (std::size_t i = 0; i < m; ++i) {
    if (cfg[i] != cfg[(i + m - 1) % m]) {
      b = i;
      break;
    }
  }
  std::vector<Run> runs;
  if (b == m) {
    runs.push_back({0, m, cfg[0]});
    return runs;
  }
  std::size_t i = 0;
  while (i < m) {
    const std::size_t s = (b + i) % m;
    const bool sym = cfg[s];
    std::size_t len = 0;
    while (i < m && cfg[(b + i) % m] == sym) {
      ++len;
      ++i;
    }
    runs.push_back({s, len, sym});
  }
  return runs;
}

}  // namespace

RegionDecomposition decompose_regions(const ExclusionConfig& cfg) {
  const long long d = delta(cfg);
  if (d > 2) throw InvalidArgument("region decomposition needs height span at most 2");
  const std::size_t m = cfg.size();
  const auto runs = cyclic_runs(cfg);

  RegionDecomposition out;
  const bool alternating =
      std::all_of(runs.begin(), runs.end(), [](const Run& r) { return r.length == 1; });
  if (alternating) {
    out.degenerate = true;
    const std::size_t start = cfg[0] ? 0 : 1;
    out.regions.push_back({RegionKind::left, start, m});
    return out;
  }
  for (const auto& r : runs) {
    if (r.length > 2) throw InvalidArgument("run longer than two in a ring with span at most 2");
  }

  const std::size_t nr = runs.size();
  const auto is_pair = [&](std::size_t k) { return runs[k % nr].length == 2; };
  std::size_t r0 = 0;
  bool all_pairs = true;
  for (std::size_t k = 0; k < nr; ++k) {
    if (is_pair(k) != is_pair(k + nr - 1)) {
      r0 = k;
      all_pairs = false;
      break;
    }
  }
  if (all_pairs) {
    out.regions.push_back({RegionKind::transition, runs[0].start, m});
    return out;
  }

  std::size_t k = 0;
  while (k < nr) {
    const bool pair = is_pair(r0 + k);
    const std::size_t start = runs[(r0 + k) % nr].start;
    std::size_t len = 0;
    while (k < nr && is_pair(r0 + k) == pair) {
      len += runs[(r0 + k) % nr].length;
      ++k;
    }
    if (pair) {
      out.regions.push_back({RegionKind::transition, start, len});
      continue;
    }
    if (len % 2 != 0) throw InvalidArgument("alternating block of odd length between transition regions");
    out.regions.push_back({cfg[start] ? RegionKind::left : RegionKind::right, start, len});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Left/right drift classes

namespace {

// Parses the rotation starting at `p` into words `long_word` (length 4) and
// `short_word` (length 2). Both words share their first symbol.
bool parses_from(const ExclusionConfig& cfg, std::size_t p, const bool (&long_word)[4],
                 const bool (&short_word)[2]) {
  const std::size_t m = cfg.size();
  std::size_t i = 0;
  while (i < m) {
    const auto at = [&](std::size_t j) { return cfg[(p + i + j) % m]; };
    if (i + 2 <= m && at(0) == short_word[0] && at(1) == short_word[1]) {
      i += 2;
    } else if (i + 4 <= m && at(0) == long_word[0] && at(1) == long_word[1] && at(2) == long_word[2] &&
               at(3) == long_word[3]) {
      i += 4;
    } else {
      return false;
    }
  }
  return true;
}

bool parses_somewhere(const ExclusionConfig& cfg, const bool (&long_word)[4], const bool (&short_word)[2]) {
  for (std::size_t p = 0; p < cfg.size(); ++p) {
    if (cfg[p] == long_word[0] && parses_from(cfg, p, long_word, short_word)) return true;
  }
  return false;
}

}  // namespace

Drift member_left_right(const ExclusionConfig& cfg) {
  static constexpr bool left_long[4] = {true, true, false, false};
  static constexpr bool left_short[2] = {true, false};
  static constexpr bool right_long[4] = {false, false, true, true};
  static constexpr bool right_short[2] = {false, true};
  const bool l = parses_somewhere(cfg, left_long, left_short);
  const bool r = parses_somewhere(cfg, right_long, right_short);
  if (l && r) return Drift::both;
  if (l) return Drift::left;
  if (r) return Drift::right;
  return Drift::neither;
}

const char* to_string(Drift d) noexcept {
  switch (d) {
    case Drift::left: return "left";
    case Drift::right: return "right";
    case Drift::both: return "both";
    case Drift::neither: return "neither";
  }
  return "?";
}

const char* to_string(RegionKind k) noexcept {
  switch (k) {
    case RegionKind::left: return "L";
    case RegionKind::right: return "R";
    case RegionKind::transition: return "T";
  }
  return "?";
}

}  // namespace fsep
