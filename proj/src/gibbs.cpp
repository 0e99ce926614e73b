#include "fsep/gibbs.hpp"

#include <cmath>

#include "fsep/error.hpp"
#include "fsep/exact.hpp"

namespace fsep {

double occupied_to_empty(double zeta) { return (1.0 - zeta) / (1.0 + zeta); }

double occupied_height_prob(double zeta, std::size_t i) {
  if (i == 0) return 0.0;
  return (1.0 - zeta * zeta) * std::pow(zeta, 2.0 * static_cast<double>(i - 1));
}

StackConfig sample_even_gibbs(double zeta, std::size_t m, CounterRng& rng) {
  if (m < StackConfig::kMinSites) throw InvalidArgument("stack ring needs at least 2 sites");
  if (zeta == 0.0) {
    if (m % 2 != 0) throw InvalidArgument("the alternating ring needs an even number of sites");
    const std::size_t phase = rng.below(2);
    std::vector<Height> h(m);
    for (std::size_t i = 0; i < m; ++i) h[i] = (i + phase) % 2 == 0 ? 2 : 0;
    return StackConfig(std::move(h));
  }
  if (!(zeta > 0.0 && zeta < 1.0)) throw InvalidArgument("fugacity must lie in [0,1)");

  const double p_empty = (1.0 - zeta) / 2.0;
  const double p_oe = occupied_to_empty(zeta);
  const double accept_oo = 2.0 * zeta / (1.0 + zeta);

  std::vector<char> occupied(m);
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt == 1000000) throw CapExceeded("ring closure rejected too often");
    occupied[0] = !rng.bernoulli(p_empty);
    for (std::size_t i = 1; i < m; ++i) occupied[i] = occupied[i - 1] ? !rng.bernoulli(p_oe) : 1;
    const bool first = occupied[0];
    const bool last = occupied[m - 1];
    if (!first && !last) continue;
    if (first && last && !rng.bernoulli(accept_oo)) continue;
    break;
  }

  const double log_z2 = std::log(zeta * zeta);
  std::vector<Height> h(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!occupied[i]) continue;
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double g = std::floor(std::log(u) / log_z2);
    if (g > static_cast<double>(kMaxHeight / 2 - 1)) throw Overflow("sampled height exceeds 2^31-1");
    h[i] = static_cast<Height>(2 * (1 + static_cast<Height>(g)));
  }
  return StackConfig(std::move(h));
}

// ---------------------------------------------------------------------------
// Parity sources

ParitySource ParitySource::empty() { return ParitySource(); }

ParitySource ParitySource::bernoulli(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw InvalidArgument("parity density must lie in [0,1]");
  ParitySource s;
  s.kind_ = Kind::bernoulli;
  s.kappa_ = kappa;
  return s;
}

ParitySource ParitySource::periodic(std::string word) {
  if (word.empty()) throw InvalidArgument("periodic parity word is empty");
  ParitySequence::from_bits(word);  // validates characters
  ParitySource s;
  s.kind_ = Kind::periodic;
  s.word_ = std::move(word);
  return s;
}

ParitySource ParitySource::samples(std::vector<ParitySequence> rings) {
  if (rings.empty()) throw InvalidArgument("parity sample set is empty");
  ParitySource s;
  s.kind_ = Kind::samples;
  s.rings_ = std::move(rings);
  return s;
}

ParitySource ParitySource::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "empty") return empty();
  if (kind == "bernoulli") return bernoulli(j.at("kappa").get<double>());
  if (kind == "periodic") return periodic(j.at("word").get<std::string>());
  if (kind == "samples") {
    std::vector<ParitySequence> rings;
    for (const auto& r : j.at("rings")) rings.push_back(ParitySequence::from_bits(r.get<std::string>()));
    return samples(std::move(rings));
  }
  throw InvalidArgument("unknown parity source kind: " + kind);
}

nlohmann::json ParitySource::to_json() const {
  switch (kind_) {
    case Kind::empty: return {{"kind", "empty"}};
    case Kind::bernoulli: return {{"kind", "bernoulli"}, {"kappa", kappa_}};
    case Kind::periodic: return {{"kind", "periodic"}, {"word", word_}};
    case Kind::samples: {
      nlohmann::json rings = nlohmann::json::array();
      for (const auto& r : rings_) rings.push_back(r.str());
      return {{"kind", "samples"}, {"rings", rings}};
    }
  }
  return {};
}

ParitySequence ParitySource::draw(std::size_t m, CounterRng& rng) const {
  std::vector<std::uint8_t> b(m, 0);
  switch (kind_) {
    case Kind::empty: break;
    case Kind::bernoulli:
      for (auto& x : b) x = rng.bernoulli(kappa_) ? 1 : 0;
      break;
    case Kind::periodic: {
      const std::size_t len = word_.size();
      if (m % len != 0) throw InvalidArgument("ring length must be a multiple of the parity word length");
      const std::size_t k = rng.below(len);
      for (std::size_t i = 0; i < m; ++i) b[i] = static_cast<std::uint8_t>(word_[(i + len - k) % len] - '0');
      break;
    }
    case Kind::samples: {
      const auto& ring = rings_[rng.below(rings_.size())];
      if (ring.size() != m) throw InvalidArgument("parity sample ring has the wrong length");
      const auto r = rotate_seq<std::uint8_t>(ring.bits(), static_cast<long long>(rng.below(m)));
      return ParitySequence(r);
    }
  }
  return ParitySequence(std::move(b));
}

double ParitySource::density() const {
  switch (kind_) {
    case Kind::empty: return 0.0;
    case Kind::bernoulli: return kappa_;
    case Kind::periodic: return ParitySequence::from_bits(word_).density();
    case Kind::samples: {
      double d = 0.0;
      for (const auto& r : rings_) d += r.density();
      return d / static_cast<double>(rings_.size());
    }
  }
  return 0.0;
}

StackConfig sample_etis(double rho_e, const ParitySource& parity, std::size_t m, CounterRng& rng) {
  const double zeta = fugacity_of_density(rho_e);
  const auto even = sample_even_gibbs(zeta, m, rng);
  const auto sigma = parity.draw(m, rng);
  std::vector<Height> h(m);
  for (std::size_t i = 0; i < m; ++i) h[i] = even[i] + sigma[i];
  return StackConfig(std::move(h));
}

StackConfig basic_state_sample(const std::string& word, int label, std::size_t m, CounterRng& rng) {
  if (label != 0 && label != 1) throw InvalidArgument("phase label must be 0 or 1");
  if (word.empty()) throw InvalidArgument("parity word is empty");
  if (m % 2 != 0) throw InvalidArgument("the alternating background needs an even ring");
  if (m % word.size() != 0) throw InvalidArgument("ring length must be a multiple of the parity word length");
  const auto sigma0 = ParitySequence::from_bits(word);

  // Minimal period of the word as a cyclic sequence.
  std::size_t period = word.size();
  for (std::size_t p = 1; p < word.size(); ++p) {
    if (word.size() % p != 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < word.size() && ok; ++i) ok = word[i] == word[(i + p) % word.size()];
    if (ok) {
      period = p;
      break;
    }
  }
  const bool constant = period == 1;
  if (!constant && period % 2 != 0) {
    throw InvalidArgument("parity word with odd minimal period has no phase partition");
  }

  const std::size_t k = rng.below(word.size());
  const std::size_t background_phase = constant ? rng.below(2) : (k + static_cast<std::size_t>(label)) % 2;
  std::vector<Height> h(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Height even = (i + background_phase) % 2 == 0 ? 2 : 0;
    h[i] = even + sigma0[(i + word.size() - k) % word.size()];
  }
  return StackConfig(std::move(h));
}

}  // namespace fsep
