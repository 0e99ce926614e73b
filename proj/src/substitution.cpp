#include "fsep/substitution.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "fsep/error.hpp"

namespace fsep {

struct SubstitutionRule::Trie {
  struct Node {
    std::vector<std::pair<Letter, std::size_t>> next;
    std::optional<Letter> source;
  };
  std::vector<Node> nodes{1};

  explicit Trie(const std::map<Letter, Sequence>& words) {
    for (const auto& [a, w] : words) {
      std::size_t cur = 0;
      for (auto b : w) {
        auto& nx = nodes[cur].next;
        auto it = std::find_if(nx.begin(), nx.end(), [b](const auto& e) { return e.first == b; });
        if (it == nx.end()) {
          nodes.emplace_back();
          nodes[cur].next.emplace_back(b, nodes.size() - 1);
          cur = nodes.size() - 1;
        } else {
          cur = it->second;
        }
      }
      nodes[cur].source = a;
    }
  }

  std::optional<std::size_t> step(std::size_t node, Letter b) const {
    for (const auto& [l, n] : nodes[node].next) {
      if (l == b) return n;
    }
    return std::nullopt;
  }
};

SubstitutionRule::SubstitutionRule(std::map<Letter, Sequence> words, std::string name)
    : words_(std::move(words)), name_(std::move(name)) {
  if (words_.empty()) throw InvalidArgument("substitution rule has no letters");
  std::map<Sequence, Letter> seen;
  for (const auto& [a, w] : words_) {
    if (w.empty()) throw InvalidArgument("substitution word for letter " + std::to_string(a) + " is empty");
    if (!seen.emplace(w, a).second) throw InvalidArgument("two letters share the same substitution word");
    max_len_ = std::max(max_len_, w.size());
  }
  trie_ = std::make_shared<const Trie>(words_);
}

SubstitutionRule SubstitutionRule::phi(Letter max_height) {
  std::map<Letter, Sequence> w;
  for (Letter n = 0; n <= max_height; ++n) {
    Sequence s(n + 1, 1);
    s[0] = 0;
    w.emplace(n, std::move(s));
  }
  return SubstitutionRule(std::move(w), "phi");
}

SubstitutionRule SubstitutionRule::phi_left() {
  return SubstitutionRule({{1, {2, 0}}, {0, {1}}}, "phi_left");
}

SubstitutionRule SubstitutionRule::phi_right() {
  return SubstitutionRule({{1, {0, 2}}, {0, {1}}}, "phi_right");
}

SubstitutionRule SubstitutionRule::exclusion_left() {
  return SubstitutionRule({{1, {1, 1, 0, 0}}, {0, {1, 0}}}, "exclusion_left");
}

SubstitutionRule SubstitutionRule::exclusion_right() {
  return SubstitutionRule({{1, {0, 0, 1, 1}}, {0, {0, 1}}}, "exclusion_right");
}

const Sequence& SubstitutionRule::word(Letter a) const {
  const auto it = words_.find(a);
  if (it == words_.end()) throw InvalidArgument("letter " + std::to_string(a) + " is outside the rule's alphabet");
  return it->second;
}

nlohmann::json SubstitutionRule::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [a, w] : words_) {
    std::string s;
    for (auto b : w) {
      if (b > 9) throw InvalidArgument("target letters above 9 have no single-character form");
      s += static_cast<char>('0' + b);
    }
    j[std::to_string(a)] = s;
  }
  return j;
}

SubstitutionRule SubstitutionRule::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("substitution rule must be a JSON object");
  std::map<Letter, Sequence> w;
  for (const auto& [key, val] : j.items()) {
    Letter a = 0;
    auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), a);
    if (ec != std::errc() || p != key.data() + key.size()) throw InvalidArgument("rule key is not a letter: " + key);
    if (!val.is_string()) throw InvalidArgument("rule word must be a string");
    Sequence s;
    for (char c : val.get<std::string>()) {
      if (c < '0' || c > '9') throw InvalidArgument("rule word must consist of digits");
      s.push_back(static_cast<Letter>(c - '0'));
    }
    w.emplace(a, std::move(s));
  }
  return SubstitutionRule(std::move(w));
}

Sequence apply(const SubstitutionRule& rule, std::span<const Letter> src) {
  Sequence out;
  for (auto a : src) {
    const auto& w = rule.word(a);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Back {
  std::size_t prev = 0;
  Letter letter = 0;
};

// Segments target[o], target[o+1], ... (cyclically, length L) into words.
// Returns the number of segmentations capped at 2, with one of them in `back`.
int segment(const SubstitutionRule::Trie& trie, std::span<const Letter> target, std::size_t o, std::vector<int>& ways,
            std::vector<Back>& back) {
  const std::size_t n = target.size();
  std::fill(ways.begin(), ways.end(), 0);
  ways[0] = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (ways[j] == 0) continue;
    std::size_t node = 0;
    for (std::size_t d = 1; j + d <= n; ++d) {
      const auto nx = trie.step(node, target[(o + j + d - 1) % n]);
      if (!nx) break;
      node = *nx;
      if (const auto& src = trie.nodes[node].source) {
        const int before = ways[j + d];
        ways[j + d] = std::min(2, ways[j + d] + ways[j]);
        if (before == 0) back[j + d] = {j, *src};
      }
    }
  }
  return ways[n];
}

}  // namespace

ParseResult parse_image(const SubstitutionRule& rule, std::span<const Letter> target) {
  const std::size_t n = target.size();
  if (n == 0) throw NotInImage("empty target sequence");
  const auto& trie = rule.trie();
  std::vector<int> ways(n + 1);
  std::vector<Back> back(n + 1);
  for (std::size_t o = 0; o < n; ++o) {
    const int c = segment(trie, target, o, ways, back);
    if (c == 0) continue;
    if (c > 1) throw InvalidArgument("target has more than one parse under rule " + rule.name());
    ParseResult r;
    r.offset = o;
    std::vector<std::size_t> cuts;
    for (std::size_t j = n; j > 0; j = back[j].prev) {
      r.source.push_back(back[j].letter);
      cuts.push_back(back[j].prev);
    }
    std::reverse(r.source.begin(), r.source.end());
    for (auto c0 : cuts) r.starts.push_back((c0 + o) % n);
    std::sort(r.starts.begin(), r.starts.end());
    return r;
  }
  throw NotInImage("target is not a rotation of an image under rule " + rule.name());
}

Sequence push_forward_sample(const SubstitutionRule& rule, const SequenceSampler& source, CounterRng& rng) {
  const Sequence src = source(rng);
  const Sequence img = fsep::apply(rule, src);
  const auto k = static_cast<long long>(rng.below(img.size()));
  return rotate_seq<Letter>(img, k);
}

Sequence pull_back_sample(const SubstitutionRule& rule, const SequenceSampler& target, CounterRng& rng,
                          std::size_t max_attempts) {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    const Sequence tgt = target(rng);
    const ParseResult parse = parse_image(rule, tgt);
    const std::size_t p = rng.below(tgt.size());
    const auto it = std::lower_bound(parse.starts.begin(), parse.starts.end(), p);
    if (it == parse.starts.end() || *it != p) continue;
    // Source index of the word that begins at p.
    std::size_t pos = parse.offset;
    for (std::size_t j = 0; j < parse.source.size(); ++j) {
      if (pos % tgt.size() == p) return rotate_seq<Letter>(parse.source, -static_cast<long long>(j));
      pos += rule.word(parse.source[j]).size();
    }
  }
  throw CapExceeded("pull-back sampling made no progress within the attempt cap");
}

// ---------------------------------------------------------------------------
// Conversions

Sequence to_sequence(const StackConfig& cfg) {
  return Sequence(cfg.heights().begin(), cfg.heights().end());
}

Sequence to_sequence(const ExclusionConfig& cfg) {
  Sequence s(cfg.size());
  for (std::size_t i = 0; i < cfg.size(); ++i) s[i] = cfg[i] ? 1 : 0;
  return s;
}

StackConfig to_stacks(std::span<const Letter> seq) {
  return StackConfig(std::vector<Height>(seq.begin(), seq.end()));
}

ExclusionConfig to_exclusion(std::span<const Letter> seq) {
  ExclusionConfig cfg(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] > 1) throw InvalidArgument("exclusion sequence letters must be 0 or 1");
    if (seq[i]) cfg.set(i, true);
  }
  return cfg;
}

ExclusionConfig phi_image(const StackConfig& stacks) {
  const std::uint64_t len = stacks.size() + stacks.total();
  ExclusionConfig out(static_cast<std::size_t>(len));
  std::size_t pos = 0;
  for (auto h : stacks.heights()) {
    ++pos;
    for (Height k = 0; k < h; ++k) out.set(pos++, true);
  }
  return out;
}

}  // namespace fsep
