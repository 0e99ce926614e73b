#include "fsep/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <thread>

#include <Eigen/Dense>

#include "fsep/dynamics.hpp"
#include "fsep/error.hpp"

namespace fsep {

namespace {

// Visits half-height vectors a (sum n/2, no two cyclically adjacent zeros)
// in decreasing lexicographic order.
template <class Fn>
void for_each_even_ring(std::size_t m, std::size_t n, Fn&& fn) {
  if (m < 3) throw InvalidArgument("even-sector rings need at least 3 sites");
  if (n % 2 != 0) throw InvalidArgument("particle number must be even in the even sector");
  std::vector<Height> a(m, 0);
  const auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i == m - 1) {
      a[i] = static_cast<Height>(left);
      if (left == 0 && (a[i - 1] == 0 || a[0] == 0)) return;
      fn(a);
      return;
    }
    for (std::size_t v = left + 1; v-- > 0;) {
      if (v == 0 && i > 0 && a[i - 1] == 0) continue;
      a[i] = static_cast<Height>(v);
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, n / 2);
}

}  // namespace

std::vector<StackConfig> enumerate_even_ring(std::size_t m, std::size_t n, std::size_t cap) {
  std::vector<StackConfig> out;
  for_each_even_ring(m, n, [&](const std::vector<Height>& a) {
    if (out.size() >= cap) throw CapExceeded("even-sector state count exceeds the configured cap");
    std::vector<Height> h(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) h[i] = 2 * a[i];
    out.emplace_back(std::move(h));
  });
  if (out.empty()) throw InvalidArgument("no even-sector states for this ring size and particle number");
  return out;
}

std::size_t zero_count(const StackConfig& cfg) {
  return static_cast<std::size_t>(std::count(cfg.heights().begin(), cfg.heights().end(), 0U));
}

double FiniteMarkovModel::at(std::size_t from, std::size_t to) const {
  const auto& row = rows[from];
  const auto it = std::lower_bound(row.begin(), row.end(), to, [](const MarkovEntry& e, std::size_t t) { return e.to < t; });
  return (it != row.end() && it->to == to) ? it->p : 0.0;
}

FiniteMarkovModel transition_matrix(std::vector<StackConfig> states, unsigned threads, std::size_t max_free_bonds) {
  FiniteMarkovModel model;
  model.states = std::move(states);
  const std::size_t ns = model.states.size();
  std::map<std::vector<Height>, std::size_t> index;
  for (std::size_t s = 0; s < ns; ++s) {
    const auto h = model.states[s].heights();
    index.emplace(std::vector<Height>(h.begin(), h.end()), s);
  }
  model.rows.resize(ns);

  const auto build_row = [&](std::size_t s) {
    const auto& cfg = model.states[s];
    const std::size_t m = cfg.size();
    std::vector<std::size_t> free_bonds;
    for (std::size_t b = 0; b < m; ++b) {
      if (!is_short(cfg[b]) && !is_short(cfg[(b + 1) % m])) free_bonds.push_back(b);
    }
    if (free_bonds.size() > max_free_bonds) throw CapExceeded("too many free bonds to enumerate");
    std::vector<int> slot(m, -1);
    for (std::size_t k = 0; k < free_bonds.size(); ++k) slot[free_bonds[k]] = static_cast<int>(k);

    const std::uint64_t choices = 1ULL << free_bonds.size();
    const double weight = 1.0 / static_cast<double>(choices);
    std::map<std::size_t, double> acc;
    for (std::uint64_t mask = 0; mask < choices; ++mask) {
      const auto next = step_ssm_with(cfg, [&](std::size_t b) { return slot[b] >= 0 && ((mask >> slot[b]) & 1ULL); });
      const auto h = next.heights();
      const auto it = index.find(std::vector<Height>(h.begin(), h.end()));
      if (it == index.end()) throw Error("transition leaves the enumerated state space");
      acc[it->second] += weight;
    }
    auto& row = model.rows[s];
    for (const auto& [to, p] : acc) row.push_back({to, p});
  };

  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(threads, ns));
  if (t == 1) {
    for (std::size_t s = 0; s < ns; ++s) build_row(s);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(t);
    for (std::size_t c = 0; c < t; ++c) {
      pool.emplace_back([&, c] {
        try {
          for (std::size_t s = c; s < ns; s += t) build_row(s);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return model;
}

bool is_irreducible(const FiniteMarkovModel& model) {
  const std::size_t n = model.size();
  if (n == 0) return false;
  std::vector<std::vector<std::size_t>> reverse(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (const auto& e : model.rows[a]) reverse[e.to].push_back(a);
  }
  const auto reach_all = [n](const auto& neighbours) {
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!queue.empty()) {
      const std::size_t a = queue.front();
      queue.pop_front();
      neighbours(a, [&](std::size_t b) {
        if (!seen[b]) {
          seen[b] = 1;
          ++count;
          queue.push_back(b);
        }
      });
    }
    return count == n;
  };
  const bool fwd = reach_all([&](std::size_t a, auto&& visit) {
    for (const auto& e : model.rows[a]) visit(e.to);
  });
  const bool bwd = reach_all([&](std::size_t a, auto&& visit) {
    for (auto b : reverse[a]) visit(b);
  });
  return fwd && bwd;
}

StationaryResult stationary_and_detailed_balance(const FiniteMarkovModel& model, std::size_t lu_limit,
                                                 const std::string& force_method) {
  StationaryResult r;
  const std::size_t n = model.size();
  r.irreducible = is_irreducible(model);

  r.pi_closed_form.resize(n);
  double z = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    r.pi_closed_form[s] = std::ldexp(1.0, -2 * static_cast<int>(zero_count(model.states[s])));
    z += r.pi_closed_form[s];
  }
  for (auto& p : r.pi_closed_form) p /= z;

  const auto& pc = r.pi_closed_form;
  std::vector<double> flow(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (const auto& e : model.rows[a]) {
      const double res = std::abs(pc[a] * e.p - pc[e.to] * model.at(e.to, a));
      r.max_balance_residual = std::max(r.max_balance_residual, res);
      flow[e.to] += pc[a] * e.p;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    r.max_stationarity_residual = std::max(r.max_stationarity_residual, std::abs(flow[b] - pc[b]));
  }
  if (!r.irreducible) return r;

  const bool use_lu = force_method.empty() ? n <= lu_limit : force_method == "lu";
  if (use_lu) {
    r.method = "lu";
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t s = 0; s < n; ++s) {
      for (const auto& e : model.rows[s]) a(static_cast<Eigen::Index>(e.to), static_cast<Eigen::Index>(s)) += e.p;
    }
    a -= Eigen::MatrixXd::Identity(a.rows(), a.cols());
    a.row(a.rows() - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
    rhs(rhs.size() - 1) = 1.0;
    const Eigen::VectorXd pi = a.partialPivLu().solve(rhs);
    r.pi.assign(pi.data(), pi.data() + pi.size());
  } else {
    r.method = "power";
    // Lazy chain: same stationary law, no periodicity.
    std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
    bool converged = false;
    for (std::size_t it = 0; it < 10000000 && !converged; ++it) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        next[s] += 0.5 * pi[s];
        for (const auto& e : model.rows[s]) next[e.to] += 0.5 * pi[s] * e.p;
      }
      double diff = 0.0;
      for (std::size_t s = 0; s < n; ++s) diff += std::abs(next[s] - pi[s]);
      pi.swap(next);
      converged = diff < 1e-13;
    }
    if (!converged) throw CapExceeded("power iteration did not converge");
    r.pi = std::move(pi);
  }
  for (std::size_t s = 0; s < n; ++s) {
    r.max_solve_deviation = std::max(r.max_solve_deviation, std::abs(r.pi[s] - pc[s]));
  }
  return r;
}

double grand_canonical_ring_cylinder(std::size_t m, double zeta, std::span<const Height> word, std::size_t n_max) {
  if (word.size() > m) throw InvalidArgument("cylinder word longer than the ring");
  if (zeta <= 0.0 || zeta >= 1.0) throw InvalidArgument("fugacity must lie in (0,1)");
  double num = 0.0, den = 0.0;
  for (std::size_t n = 2; n <= n_max; n += 2) {
    const double zn = std::pow(zeta, static_cast<double>(n));
    for_each_even_ring(m, n, [&](const std::vector<Height>& a) {
      int zeros = 0;
      for (auto x : a) zeros += x == 0;
      const double wgt = zn * std::ldexp(1.0, -2 * zeros);
      den += wgt;
      bool match = true;
      for (std::size_t j = 0; j < word.size() && match; ++j) match = 2 * a[j] == word[j];
      if (match) num += wgt;
    });
  }
  if (den == 0.0) throw InvalidArgument("no states up to the particle cap");
  return num / den;
}

}  // namespace fsep
