#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fsep {

/**
 * Occupation bits of an exclusion ring, packed 64 sites per word.
 *
 * Sites are numbered 0..size()-1 and neighbours wrap around. Bits past the
 * last site are always zero.
 */
class ExclusionConfig {
 public:
  static constexpr std::size_t kMinSites = 3;

  ExclusionConfig() = default;
  explicit ExclusionConfig(std::size_t sites);

  /// Parses a plain string of '0'/'1' characters.
  static ExclusionConfig from_bits(std::string_view bits);

  std::size_t size() const noexcept { return sites_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
  void set(std::size_t i, bool occupied) noexcept;
  std::size_t particles() const noexcept;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }
  /// Mask of the valid bits in the last word.
  std::uint64_t tail_mask() const noexcept;

  std::string bits() const;

  friend bool operator==(const ExclusionConfig&, const ExclusionConfig&) = default;

 private:
  std::size_t sites_ = 0;
  std::vector<std::uint64_t> words_;
};

using Height = std::uint32_t;
inline constexpr Height kMaxHeight = 0x7fffffffU;

/// Stack heights on a ring. A stack is short when its height is at most 1.
class StackConfig {
 public:
  static constexpr std::size_t kMinSites = 2;

  StackConfig() = default;
  explicit StackConfig(std::vector<Height> heights);

  /// Parses comma separated heights, e.g. "2,3,0,1".
  static StackConfig from_string(std::string_view text);

  std::size_t size() const noexcept { return h_.size(); }
  Height operator[](std::size_t i) const noexcept { return h_[i]; }
  std::span<const Height> heights() const noexcept { return h_; }
  std::uint64_t total() const noexcept;
  std::string str() const;

  friend bool operator==(const StackConfig&, const StackConfig&) = default;

 private:
  std::vector<Height> h_;
};

inline bool is_short(Height h) noexcept { return h <= 1; }

/// Bit sequence on a ring, one entry per stack site.
class ParitySequence {
 public:
  ParitySequence() = default;
  explicit ParitySequence(std::vector<std::uint8_t> bits);
  static ParitySequence from_bits(std::string_view bits);

  std::size_t size() const noexcept { return b_.size(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return b_[i]; }
  std::span<const std::uint8_t> bits() const noexcept { return b_; }
  double density() const noexcept;
  std::string str() const;

  friend bool operator==(const ParitySequence&, const ParitySequence&) = default;

 private:
  std::vector<std::uint8_t> b_;
};

using AnyConfig = std::variant<ExclusionConfig, StackConfig>;

// Ring text format: "ring:<length>:<payload>".
std::string to_ring_string(const ExclusionConfig& cfg);
std::string to_ring_string(const StackConfig& cfg);
std::string to_ring_string(const AnyConfig& cfg);
ExclusionConfig parse_exclusion_ring(std::string_view text);
StackConfig parse_stack_ring(std::string_view text);
/// `stacks` selects the payload format.
AnyConfig parse_ring(std::string_view text, bool stacks);

/// result(i) = cfg(i - k), indices mod size.
ExclusionConfig rotate(const ExclusionConfig& cfg, long long k);
StackConfig rotate(const StackConfig& cfg, long long k);

template <class T>
std::vector<T> rotate_seq(std::span<const T> seq, long long k) {
  const auto n = static_cast<long long>(seq.size());
  std::vector<T> out(seq.size());
  if (n == 0) return out;
  const long long s = ((k % n) + n) % n;
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>((i + s) % n)] = seq[static_cast<std::size_t>(i)];
  return out;
}

struct HeightProfile {
  std::vector<long long> values;  ///< values[0] = 0, one entry per prefix length 0..M
};

/// h(0) = 0, then +1 over each empty site and -1 over each occupied site,
/// reading sites start, start+1, ... around the ring.
HeightProfile height_profile(const ExclusionConfig& cfg, std::size_t start = 0);

/// Inverse of height_profile for a closed profile (last value equal to the first).
ExclusionConfig config_from_profile(const HeightProfile& profile);

/// max h - min h; defined only when exactly half the sites are occupied.
long long delta(const ExclusionConfig& cfg);

/// No particle can move: no particle has exactly one occupied neighbour.
bool is_frozen(const ExclusionConfig& cfg);
/// No bond can move: all stacks are short.
bool is_frozen(const StackConfig& cfg);

ParitySequence parity_map(const StackConfig& cfg);

enum class SetClass {
  frozen,        ///< exclusion: no two adjacent particles; stacks: all short
  x_star,        ///< stacks: no two adjacent short stacks
  x_star_sigma,  ///< x_star with prescribed parities
  h,             ///< exclusion: rotation of a substitution image of an x_star ring
};

bool in_frozen_set(const ExclusionConfig& cfg);
bool in_x_star(const StackConfig& cfg);
bool in_x_star_sigma(const StackConfig& cfg, const ParitySequence& sigma);
/// No cyclic occurrence of 000, 0100, 0010, 01010 and at least one empty site.
bool in_h(const ExclusionConfig& cfg);

/// Dispatching membership; type mismatches and a missing sigma are errors.
bool is_member(const AnyConfig& cfg, SetClass cls, const ParitySequence* sigma = nullptr);

/// True when the cyclic sequence contains `pattern` starting at some site.
bool contains_cyclic(const ExclusionConfig& cfg, std::string_view pattern);

enum class RegionKind { left, right, transition };

struct Region {
  RegionKind kind;
  std::size_t start;
  std::size_t length;
};

struct RegionDecomposition {
  std::vector<Region> regions;  ///< in ring order, covering every site once
  bool degenerate = false;      ///< fully alternating ring, reported as one left region
};

/**
 * Splits a half-filled ring with delta <= 2 into transition regions (maximal
 * runs built from pairs 11 and 00) and the alternating blocks between them.
 * Blocks starting with 10 are left regions and blocks starting with 01 right
 * regions.
 */
RegionDecomposition decompose_regions(const ExclusionConfig& cfg);

enum class Drift { left, right, both, neither };

/// left: some rotation is a concatenation of 1100 and 10.
/// right: some rotation is a concatenation of 0011 and 01.
Drift member_left_right(const ExclusionConfig& cfg);

const char* to_string(Drift d) noexcept;
const char* to_string(RegionKind k) noexcept;

}  // namespace fsep
