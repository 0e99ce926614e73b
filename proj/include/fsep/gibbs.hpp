#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsep/lattice.hpp"
#include "fsep/rng.hpp"

namespace fsep {

/// Probability that an occupied site is followed by an empty one.
double occupied_to_empty(double zeta);
/// Probability of height 2i (i >= 1) given that the site is occupied.
double occupied_height_prob(double zeta, std::size_t i);

/**
 * Exact sample of the even-height stack law at fugacity zeta on an m-site ring.
 *
 * The empty/occupied pattern is drawn as a stationary two-state chain around
 * the ring and accepted against the weight of the closing bond, which makes the
 * pattern exactly distributed as the ring law. Occupied sites then receive
 * independent heights 2i with probability (1 - zeta^2) zeta^(2i-2).
 * zeta = 0 gives the alternating 2,0 ring in a uniform phase and needs even m.
 */
StackConfig sample_even_gibbs(double zeta, std::size_t m, CounterRng& rng);

/// Source of parity sequences.
class ParitySource {
 public:
  enum class Kind { empty, bernoulli, periodic, samples };

  static ParitySource empty();
  static ParitySource bernoulli(double kappa);
  /// The word repeats around the ring, in a uniformly chosen phase.
  static ParitySource periodic(std::string word);
  /// A uniformly chosen ring from the list, uniformly rotated.
  static ParitySource samples(std::vector<ParitySequence> rings);

  /// {"kind":"empty"}, {"kind":"bernoulli","kappa":..}, {"kind":"periodic","word":".."},
  /// {"kind":"samples","rings":[".."]}
  static ParitySource from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  ParitySequence draw(std::size_t m, CounterRng& rng) const;
  double density() const;
  Kind kind() const noexcept { return kind_; }
  const std::string& word() const noexcept { return word_; }

 private:
  Kind kind_ = Kind::empty;
  double kappa_ = 0.0;
  std::string word_;
  std::vector<ParitySequence> rings_;
};

/// Even-height sample at density rho_e plus an independent parity sequence.
StackConfig sample_etis(double rho_e, const ParitySource& parity, std::size_t m, CounterRng& rng);

/**
 * Sample at even density 1 whose alternating background is locked to the phase
 * class of a periodic parity word.
 *
 * The word is placed at a uniform translate k; the background is 2,0,2,0...
 * when k + label is even and 0,2,0,2... otherwise. A constant word has no phase
 * structure and gets a uniform background. A non-constant word with odd
 * minimal period has no two-class phase partition and is rejected.
 */
StackConfig basic_state_sample(const std::string& word, int label, std::size_t m, CounterRng& rng);

}  // namespace fsep
