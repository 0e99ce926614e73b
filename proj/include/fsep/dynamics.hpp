#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsep/error.hpp"
#include "fsep/lattice.hpp"
#include "fsep/rng.hpp"

namespace fsep {

// ---------------------------------------------------------------------------
// Exclusion dynamics

/**
 * One synchronous step of the facilitated exclusion process on a ring.
 *
 * A particle with exactly one occupied neighbour jumps to its empty neighbour.
 * When two particles target the same empty site, the coin of that site decides:
 * 1 lets the particle arriving from the left move. The packed kernel may split
 * the ring over `threads`; the result is identical for every thread count.
 */
ExclusionConfig step_fssep(const ExclusionConfig& cfg, const RngContext& ctx, unsigned threads = 1);

/// Site-by-site version of step_fssep, kept as a reference for the packed kernel.
ExclusionConfig step_fssep_reference(const ExclusionConfig& cfg, const RngContext& ctx);

// ---------------------------------------------------------------------------
// Stack dynamics

/// Net flow over the bond (left, right): +1 moves one particle to the right,
/// -1 to the left, 0 for two short stacks. `coin` is used only for two tall stacks.
inline int bond_flow(Height left, Height right, bool coin) noexcept {
  const bool tl = !is_short(left);
  const bool tr = !is_short(right);
  if (tl && tr) return coin ? 1 : -1;
  if (tl) return 1;
  if (tr) return -1;
  return 0;
}

/// Applies one step with bond b (sites b, b+1) oriented by `coin(b)`.
template <class Coin>
StackConfig step_ssm_with(const StackConfig& cfg, Coin&& coin) {
  const std::size_t m = cfg.size();
  std::vector<int> flow(m);
  for (std::size_t b = 0; b < m; ++b) flow[b] = bond_flow(cfg[b], cfg[(b + 1) % m], coin(b));
  std::vector<Height> next(m);
  for (std::size_t i = 0; i < m; ++i) {
    const long long h = static_cast<long long>(cfg[i]) - flow[i] + flow[(i + m - 1) % m];
    if (h > static_cast<long long>(kMaxHeight)) throw Overflow("stack height exceeds 2^31-1");
    next[i] = static_cast<Height>(h);
  }
  return StackConfig(std::move(next));
}

/// One synchronous step of the stack model; coins keyed by (seed, step, bond).
StackConfig step_ssm(const StackConfig& cfg, const RngContext& ctx, unsigned threads = 1);

/// Dispatches on the configuration type.
AnyConfig step_any(const AnyConfig& cfg, const RngContext& ctx, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Trajectories and observers

struct ObserverRecord {
  std::uint64_t step = 0;
  std::string observable;
  nlohmann::json value;
};

nlohmann::json to_json(const ObserverRecord& r);

class Observer {
 public:
  virtual ~Observer() = default;
  virtual std::string name() const = 0;
  /// Called on the schedule; a returned value becomes a record.
  virtual std::optional<nlohmann::json> observe(std::uint64_t step, const AnyConfig& cfg) = 0;
};

/// Accumulates cyclic windows of length k and reports the running table.
class CylinderObserver : public Observer {
 public:
  explicit CylinderObserver(std::size_t k);
  std::string name() const override { return "cylinder_" + std::to_string(k_); }
  std::optional<nlohmann::json> observe(std::uint64_t step, const AnyConfig& cfg) override;

 private:
  std::size_t k_;
  std::map<std::string, std::uint64_t> counts_;
};

/// Reports the first scheduled step at which no move is possible.
class FrozenObserver : public Observer {
 public:
  std::string name() const override { return "frozen"; }
  std::optional<nlohmann::json> observe(std::uint64_t step, const AnyConfig& cfg) override;

 private:
  bool fired_ = false;
};

/// Counts L, R and T regions of a half-filled exclusion ring; null when the
/// decomposition is undefined.
class RegionObserver : public Observer {
 public:
  std::string name() const override { return "regions"; }
  std::optional<nlohmann::json> observe(std::uint64_t step, const AnyConfig& cfg) override;
};

/// Counts sites whose parity differs from the first observed stack ring.
class ParityObserver : public Observer {
 public:
  std::string name() const override { return "parity_changes"; }
  std::optional<nlohmann::json> observe(std::uint64_t step, const AnyConfig& cfg) override;

 private:
  std::optional<ParitySequence> reference_;
};

/// Builds an observer from its name: "cylinder:<k>", "frozen", "regions", "parity".
std::unique_ptr<Observer> make_observer(const std::string& spec);

struct TrajectorySummary {
  AnyConfig final_config;
  std::uint64_t steps = 0;
  std::vector<ObserverRecord> records;
};

/// Runs `steps` steps from `initial`; observers run at step 0 and every `every` steps.
/// Step t uses RngContext{seed, t}.
TrajectorySummary evolve(const AnyConfig& initial, std::uint64_t steps, std::uint64_t seed,
                         const std::vector<std::unique_ptr<Observer>>& observers, std::uint64_t every = 1,
                         unsigned threads = 1);

// ---------------------------------------------------------------------------
// Coupled stack/exclusion evolution

/**
 * A stack ring together with an exclusion ring satisfying
 * exclusion = rotate(phi_image(stack), offset).
 *
 * offset is the smallest nonnegative rotation with this property.
 */
class CoupledState {
 public:
  CoupledState(StackConfig stack, ExclusionConfig exclusion, std::size_t offset);
  static CoupledState from_stack(StackConfig stack);

  const StackConfig& stack() const noexcept { return stack_; }
  const ExclusionConfig& exclusion() const noexcept { return exclusion_; }
  std::size_t offset() const noexcept { return offset_; }

  /// Recomputes the invariant from scratch.
  bool invariant_holds() const;

 private:
  StackConfig stack_;
  ExclusionConfig exclusion_;
  std::size_t offset_;
};

/// Smallest p > 0 with rotate(cfg, p) == cfg.
std::size_t minimal_period(const ExclusionConfig& cfg);

/**
 * Advances both components with the same randomness. The stack takes one
 * step of step_ssm; each stack move over bond (i-1, i) induces one exclusion
 * jump at the word boundary of site i, so the exclusion component follows
 * the exclusion dynamics.
 */
CoupledState coupled_step(const CoupledState& state, const RngContext& ctx);

}  // namespace fsep
