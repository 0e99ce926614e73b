#include "fsep/dynamics.hpp"
#include "fsep/substitution.hpp"

namespace fsep {

std::size_t minimal_period(const ExclusionConfig& cfg) {
  const std::size_t n = cfg.size();
  std::vector<std::size_t> fail(n + 1, 0);
  for (std::size_t i = 1, k = 0; i < n; ++i) {
    while (k > 0 && cfg[i] != cfg[k]) k = fail[k];
    if (cfg[i] == cfg[k]) ++k;
    fail[i + 1] = k;
  }
  const std::size_t p = n - fail[n];
  return n % p == 0 ? p : n;
}

CoupledState::CoupledState(StackConfig stack, ExclusionConfig exclusion, std::size_t offset)
    : stack_(std::move(stack)), exclusion_(std::move(exclusion)), offset_(offset) {
  const auto image = phi_image(stack_);
  if (image.size() != exclusion_.size()) throw InvalidArgument("exclusion ring length must be M plus particle count");
  offset_ %= image.size();
  if (rotate(image, static_cast<long long>(offset_)) != exclusion_) {
    throw InvalidArgument("exclusion ring is not the rotated image of the stack ring");
  }
  offset_ %= minimal_period(image);
}

CoupledState CoupledState::from_stack(StackConfig stack) {
  auto image = phi_image(stack);
  return CoupledState(std::move(stack), std::move(image), 0);
}

bool CoupledState::invariant_holds() const {
  const auto image = phi_image(stack_);
  return image.size() == exclusion_.size() && rotate(image, static_cast<long long>(offset_)) == exclusion_;
}

CoupledState coupled_step(const CoupledState& state, const RngContext& ctx) {
  const auto& n0 = state.stack();
  const std::size_t m = n0.size();
  const std::size_t len = state.exclusion().size();
  const auto at = [&](long long pos) {
    const auto l = static_cast<long long>(len);
    return static_cast<std::size_t>(((pos + static_cast<long long>(state.offset())) % l + l) % l);
  };

  std::vector<int> flow(m);
  for (std::size_t b = 0; b < m; ++b) flow[b] = bond_flow(n0[b], n0[(b + 1) % m], ctx.bit(Stream::bond, b));

  // boundary[i] is the position of the empty site opening the word of stack site i.
  std::vector<long long> boundary(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) boundary[i + 1] = boundary[i] + n0[i] + 1;

  ExclusionConfig next = state.exclusion();
  std::vector<std::pair<std::size_t, std::size_t>> jumps;
  for (std::size_t b = 0; b < m; ++b) {
    if (flow[b] == 0) continue;
    const long long k = boundary[b + 1];
    const long long from = flow[b] > 0 ? k - 1 : k + 1;
    jumps.emplace_back(at(from), at(k));
  }
  for (const auto& [from, to] : jumps) {
    if (!state.exclusion()[from] || state.exclusion()[to]) {
      throw Error("coupled step produced a jump that is not an exclusion move");
    }
    next.set(from, false);
  }
  for (const auto& [from, to] : jumps) next.set(to, true);

  // Word 0 opens at boundary m (mod len); it shifts with the flow over bond m-1.
  const int shift = flow[m - 1] > 0 ? -1 : (flow[m - 1] < 0 ? 1 : 0);
  const auto l = static_cast<long long>(len);
  const auto offset = static_cast<std::size_t>(((static_cast<long long>(state.offset()) + shift) % l + l) % l);

  auto stack = step_ssm_with(n0, [&](std::size_t b) { return ctx.bit(Stream::bond, b); });
  return CoupledState(std::move(stack), std::move(next), offset);
}

}  // namespace fsep
