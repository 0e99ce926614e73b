#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsep/stats.hpp"

namespace fsep {

/**
 * Builds a ring sampler from a short description:
 *   gibbs:zeta=Z              even-height stack law
 *   etis:rho=R,kappa=K        even law at density R plus Bernoulli(K) parity
 *   etis:rho=R,word=W         same with a periodic parity word
 *   phi:zeta=Z                exclusion image of the even law
 *   bernoulli:p=P             i.i.d. exclusion occupations
 *   exclusion:BITS, stacks:H  fixed ring, bare ("1100", "2,0,1") or ring:<M>:<payload>
 * Sizes default to `m`; a fixed ring ignores it.
 */
ConfigSampler make_state_sampler(const std::string& spec, std::size_t m);

/// Runs fn(i) for i in [0, n) on `threads` workers. Results must be written by index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

struct CheckOptions {
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  nlohmann::json details;
};

CheckResult check_detailed_balance(const CheckOptions& opt);
CheckResult check_transfer_identities(const CheckOptions& opt);
CheckResult check_sampler_fidelity(const CheckOptions& opt);
CheckResult check_quench_renewal(const CheckOptions& opt);
CheckResult check_halfdensity_absorption(const CheckOptions& opt);
CheckResult check_high_density_support(const CheckOptions& opt);
CheckResult check_equivariance(const CheckOptions& opt);
CheckResult check_correlation_decay(const CheckOptions& opt);

struct NamedCheck {
  std::string name;
  std::function<CheckResult(const CheckOptions&)> run;
};

/// The full battery in a fixed order.
const std::vector<NamedCheck>& acceptance_checks();

}  // namespace fsep
