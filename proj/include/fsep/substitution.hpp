#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsep/lattice.hpp"
#include "fsep/rng.hpp"

namespace fsep {

using Letter = std::uint32_t;
using Sequence = std::vector<Letter>;

/**
 * Letter-to-word substitution on rings.
 *
 * Only finitely many source letters are instantiated. The image of a letter is
 * a nonempty word; distinct letters must give uniquely decodable images for
 * parse_image to be well defined, and ambiguous parses are reported as errors.
 */
class SubstitutionRule {
 public:
  explicit SubstitutionRule(std::map<Letter, Sequence> words, std::string name = "custom");

  /// Stack height n maps to 0 followed by n ones.
  static SubstitutionRule phi(Letter max_height = 256);
  /// 1 -> 20, 0 -> 1.
  static SubstitutionRule phi_left();
  /// 1 -> 02, 0 -> 1.
  static SubstitutionRule phi_right();
  /// 1 -> 1100, 0 -> 10.
  static SubstitutionRule exclusion_left();
  /// 1 -> 0011, 0 -> 01.
  static SubstitutionRule exclusion_right();

  bool has(Letter a) const noexcept { return words_.count(a) != 0; }
  const Sequence& word(Letter a) const;
  const std::map<Letter, Sequence>& words() const noexcept { return words_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t max_word_length() const noexcept { return max_len_; }

  /// {"letter": "word", ...} with single-digit target letters.
  nlohmann::json to_json() const;
  static SubstitutionRule from_json(const nlohmann::json& j);

  /// Prefix tree of the words, built once and shared by copies.
  struct Trie;
  const Trie& trie() const noexcept { return *trie_; }

 private:
  std::map<Letter, Sequence> words_;
  std::string name_;
  std::size_t max_len_ = 0;
  std::shared_ptr<const Trie> trie_;
};

Sequence apply(const SubstitutionRule& rule, std::span<const Letter> src);

struct ParseResult {
  Sequence source;
  std::size_t offset = 0;            ///< target(i) = apply(source)(i - offset)
  std::vector<std::size_t> starts;   ///< target positions where source words begin, ascending
};

/// Finds the source and the smallest nonnegative offset whose rotated image
/// equals `target`. Throws NotInImage when no such pair exists.
ParseResult parse_image(const SubstitutionRule& rule, std::span<const Letter> target);

using SequenceSampler = std::function<Sequence(CounterRng&)>;

/// Image of a source sample, rotated uniformly over the image ring.
Sequence push_forward_sample(const SubstitutionRule& rule, const SequenceSampler& source, CounterRng& rng);

/// Draws target samples and a uniform site until the site begins a word, then
/// returns the source rotated so that this word comes first.
Sequence pull_back_sample(const SubstitutionRule& rule, const SequenceSampler& target, CounterRng& rng,
                          std::size_t max_attempts = 1000000);

// Conversions between configurations and letter sequences.
Sequence to_sequence(const StackConfig& cfg);
Sequence to_sequence(const ExclusionConfig& cfg);
StackConfig to_stacks(std::span<const Letter> seq);
ExclusionConfig to_exclusion(std::span<const Letter> seq);

/// Exclusion image of a stack ring, first word at site 0.
ExclusionConfig phi_image(const StackConfig& stacks);

}  // namespace fsep
