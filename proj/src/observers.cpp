#include <charconv>

#include "fsep/dynamics.hpp"

namespace fsep {

nlohmann::json to_json(const ObserverRecord& r) {
  return {{"step", r.step}, {"observable", r.observable}, {"value", r.value}};
}

namespace {

std::string window_key(const AnyConfig& cfg, std::size_t start, std::size_t k) {
  std::string key;
  if (const auto* e = std::get_if<ExclusionConfig>(&cfg)) {
    for (std::size_t j = 0; j < k; ++j) key += (*e)[(start + j) % e->size()] ? '1' : '0';
    return key;
  }
  const auto& s = std::get<StackConfig>(cfg);
  for (std::size_t j = 0; j < k; ++j) {
    if (j) key += ',';
    key += std::to_string(s[(start + j) % s.size()]);
  }
  return key;
}

std::size_t ring_size(const AnyConfig& cfg) {
  return std::visit([](const auto& c) { return c.size(); }, cfg);
}

}  // namespace

CylinderObserver::CylinderObserver(std::size_t k) : k_(k) {
  if (k == 0 || k > 12) throw InvalidArgument("cylinder length must be in 1..12");
}

std::optional<nlohmann::json> CylinderObserver::observe(std::uint64_t, const AnyConfig& cfg) {
  const std::size_t m = ring_size(cfg);
  for (std::size_t i = 0; i < m; ++i) {
    auto& c = counts_[window_key(cfg, i, k_)];
    if (c == UINT64_MAX) throw Overflow("cylinder counter overflow");
    ++c;
  }
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, c] : counts_) j[key] = c;
  return j;
}

std::optional<nlohmann::json> FrozenObserver::observe(std::uint64_t, const AnyConfig& cfg) {
  if (fired_) return std::nullopt;
  const bool frozen = std::visit([](const auto& c) { return is_frozen(c); }, cfg);
  if (!frozen) return std::nullopt;
  fired_ = true;
  return true;
}

std::optional<nlohmann::json> RegionObserver::observe(std::uint64_t, const AnyConfig& cfg) {
  const auto* e = std::get_if<ExclusionConfig>(&cfg);
  if (e == nullptr) throw InvalidArgument("region observer applies to exclusion rings");
  try {
    const auto d = decompose_regions(*e);
    std::uint64_t l = 0, r = 0, t = 0;
    for (const auto& reg : d.regions) {
      if (reg.kind == RegionKind::left) ++l;
      if (reg.kind == RegionKind::right) ++r;
      if (reg.kind == RegionKind::transition) ++t;
    }
    return nlohmann::json{{"L", l}, {"R", r}, {"T", t}, {"degenerate", d.degenerate}};
  } catch (const Error&) {
    return nlohmann::json(nullptr);
  }
}

std::optional<nlohmann::json> ParityObserver::observe(std::uint64_t, const AnyConfig& cfg) {
  const auto* s = std::get_if<StackConfig>(&cfg);
  if (s == nullptr) throw InvalidArgument("parity observer applies to stack rings");
  const auto p = parity_map(*s);
  if (!reference_) reference_ = p;
  std::uint64_t changed = 0;
  for (std::size_t i = 0; i < p.size(); ++i) changed += p[i] != (*reference_)[i];
  return changed;
}

std::unique_ptr<Observer> make_observer(const std::string& spec) {
  if (spec == "frozen") return std::make_unique<FrozenObserver>();
  if (spec == "regions") return std::make_unique<RegionObserver>();
  if (spec == "parity") return std::make_unique<ParityObserver>();
  if (spec.rfind("cylinder:", 0) == 0) {
    std::size_t k = 0;
    const char* b = spec.data() + 9;
    const char* e = spec.data() + spec.size();
    auto [p, ec] = std::from_chars(b, e, k);
    if (ec != std::errc() || p != e) throw InvalidArgument("bad cylinder observer: " + spec);
    return std::make_unique<CylinderObserver>(k);
  }
  throw InvalidArgument("unknown observer: " + spec);
}

TrajectorySummary evolve(const AnyConfig& initial, std::uint64_t steps, std::uint64_t seed,
                         const std::vector<std::unique_ptr<Observer>>& observers, std::uint64_t every,
                         unsigned threads) {
  if (every == 0) throw InvalidArgument("observer interval must be positive");
  TrajectorySummary out{initial, steps, {}};
  const auto run_observers = [&](std::uint64_t t) {
    for (const auto& ob : observers) {
      if (auto v = ob->observe(t, out.final_config)) out.records.push_back({t, ob->name(), std::move(*v)});
    }
  };
  bool frozen = std::visit([](const auto& c) { return is_frozen(c); }, out.final_config);
  run_observers(0);
  for (std::uint64_t t = 0; t < steps; ++t) {
    // A frozen ring is a fixed point, so further steps would not change it.
    if (!frozen) {
      out.final_config = step_any(out.final_config, RngContext{seed, t}, threads);
      frozen = std::visit([](const auto& c) { return is_frozen(c); }, out.final_config);
    }
    if ((t + 1) % every == 0) run_observers(t + 1);
  }
  return out;
}

}  // namespace fsep
