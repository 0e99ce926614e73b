#include "fsep/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsep/dynamics.hpp"
#include "fsep/error.hpp"
#include "fsep/exact.hpp"
#include "fsep/experiments.hpp"
#include "fsep/gibbs.hpp"
#include "fsep/stats.hpp"

#ifndef FSEP_VERSION
#define FSEP_VERSION "unknown"
#endif

namespace fsep::cli {

namespace {

using nlohmann::json;

struct Common {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
};

struct SimulateArgs {
  std::string init = "bernoulli:p=0.5";
  std::string model;
  std::size_t sites = 1000;
  std::uint64_t steps = 1000;
  std::uint64_t every = 1;
  std::vector<std::string> observe;
};

struct ExactArgs {
  std::string mode;
  std::size_t sites = 3;
  std::size_t particles = 6;
  std::size_t lu_limit = 4096;
  std::string method;
  bool emit_states = true;
  double zeta = 0.5;
  std::size_t hmax = 0;
};

struct GibbsArgs {
  std::optional<double> zeta;
  std::optional<double> rho;
  std::string parity = R"({"kind":"empty"})";
  std::size_t sites = 1000;
  std::size_t samples = 1;
  bool emit = false;
};

struct QuenchArgs {
  double rho = 0.3;
  std::size_t sites = 100000;
  std::size_t runs = 1;
  std::uint64_t max_steps = 10000000;
};

struct VerifyArgs {
  std::string check;
  std::string state = "gibbs:zeta=0.5";
  std::size_t k = 3;
  std::uint64_t samples = 1000000;
  std::uint64_t steps = 1;
  std::size_t sites = 1024;
  std::size_t stride = 0;
};

class Emitter {
 public:
  explicit Emitter(std::ostream& os) : os_(os) {}
  void line(const json& j) { os_ << j.dump() << '\n'; }

 private:
  std::ostream& os_;
};

json manifest(const std::string& command, const json& spec, const Common& c) {
  json s = spec;
  s["command"] = command;
  s["threads"] = c.threads;
  return {{"manifest", {{"spec", s}, {"version", FSEP_VERSION}, {"seed", c.seed}}}};
}

// ---------------------------------------------------------------------------
// Subcommands

int run_simulate(const SimulateArgs& a, const Common& c, Emitter& em) {
  if (a.steps > 0 && a.every == 0) throw InvalidArgument("--every must be positive");
  const auto sampler = make_state_sampler(a.init, a.sites);
  CounterRng rng(c.seed, static_cast<std::uint64_t>(Stream::placement));
  const AnyConfig initial = sampler(rng);
  const bool stacks = std::holds_alternative<StackConfig>(initial);
  if (!a.model.empty() && a.model != (stacks ? "ssm" : "fssep")) {
    throw InvalidArgument("model " + a.model + " does not match the initial state");
  }
  std::vector<std::unique_ptr<Observer>> observers;
  for (const auto& o : a.observe) observers.push_back(make_observer(o));

  em.line(manifest("simulate",
                   {{"init", a.init}, {"model", stacks ? "ssm" : "fssep"}, {"sites", a.sites}, {"steps", a.steps},
                    {"every", a.every}, {"observe", a.observe}},
                   c));
  em.line({{"initial", to_ring_string(initial)}});
  const auto traj = evolve(initial, a.steps, c.seed, observers, a.every, c.threads);
  for (const auto& r : traj.records) em.line(to_json(r));
  em.line({{"final", {{"config", to_ring_string(traj.final_config)}, {"steps", traj.steps}}}});
  return kExitOk;
}

int run_exact(const ExactArgs& a, const Common& c, Emitter& em) {
  if (a.mode == "ring") {
    em.line(manifest("exact ring",
                     {{"sites", a.sites}, {"particles", a.particles}, {"lu_limit", a.lu_limit}, {"method", a.method}},
                     c));
    const auto model = transition_matrix(enumerate_even_ring(a.sites, a.particles), c.threads);
    const auto st = stationary_and_detailed_balance(model, a.lu_limit, a.method);
    if (a.emit_states && st.irreducible) {
      for (std::size_t i = 0; i < model.size(); ++i) {
        em.line({{"state", model.states[i].str()},
                  {"zeros", zero_count(model.states[i])},
                  {"pi", st.pi[i]},
                  {"pi_closed_form", st.pi_closed_form[i]}});
      }
    }
    const bool ok = st.irreducible && st.max_solve_deviation < 1e-10 && st.max_balance_residual < 1e-10;
    em.line({{"summary",
              {{"states", model.size()},
               {"irreducible", st.irreducible},
               {"method", st.method},
               {"max_solve_deviation", st.max_solve_deviation},
               {"max_balance_residual", st.max_balance_residual},
               {"max_stationarity_residual", st.max_stationarity_residual},
               {"pass", ok}}}});
    return ok ? kExitOk : kExitFailure;
  }
  if (a.mode == "transfer") {
    em.line(manifest("exact transfer", {{"zeta", a.zeta}, {"hmax", a.hmax}}, c));
    const auto spec = a.hmax ? transfer_spec(a.zeta, a.hmax) : transfer_spec(a.zeta);
    const auto ev = numeric_eigenvalues(spec);
    em.line({{"transfer",
              {{"zeta", spec.zeta},
               {"hmax", spec.hmax},
               {"lambda1", spec.lambda1},
               {"lambda2", spec.lambda2},
               {"numeric_lambda1", ev.at(0)},
               {"numeric_lambda2", ev.at(1)},
               {"tail_mass", spec.tail_mass},
               {"density", mean_height(spec.zeta)},
               {"site_marginal", site_marginal(spec)}}}});
    return kExitOk;
  }
  throw InvalidArgument("exact needs a mode: ring or transfer");
}

int run_gibbs(const GibbsArgs& a, const Common& c, Emitter& em) {
  if (a.zeta.has_value() == a.rho.has_value()) throw InvalidArgument("give exactly one of --zeta and --rho");
  const auto parity = ParitySource::from_json(json::parse(a.parity));
  json spec = {{"sites", a.sites}, {"samples", a.samples}, {"parity", parity.to_json()}, {"emit", a.emit}};
  if (a.zeta) spec["zeta"] = *a.zeta;
  if (a.rho) spec["rho"] = *a.rho;
  em.line(manifest("gibbs", spec, c));

  const double rho_e = a.rho ? *a.rho : mean_height(*a.zeta);
  std::map<Height, std::uint64_t> heights;
  double total = 0.0;
  CounterRng rng(c.seed, static_cast<std::uint64_t>(Stream::sampler));
  for (std::size_t s = 0; s < a.samples; ++s) {
    const StackConfig cfg = sample_etis(rho_e, parity, a.sites, rng);
    for (std::size_t i = 0; i < cfg.size(); ++i) ++heights[cfg[i]];
    total += static_cast<double>(cfg.total());
    if (a.emit) em.line({{"sample", s}, {"config", cfg.str()}});
  }
  json counts = json::object();
  for (const auto& [h, n] : heights) counts[std::to_string(h)] = n;
  const double sites = static_cast<double>(a.samples * a.sites);
  em.line({{"summary",
            {{"rings", a.samples},
             {"sites", a.samples * a.sites},
             {"zeta", fugacity_of_density(rho_e)},
             {"expected_density", rho_e + parity.density()},
             {"density", sites > 0 ? total / sites : 0.0},
             {"height_counts", counts}}}});
  return kExitOk;
}

int run_quench(const QuenchArgs& a, const Common& c, Emitter& em) {
  if (a.runs == 0) throw InvalidArgument("--runs must be positive");
  if (!(a.rho > 0.0 && a.rho < 0.5)) throw InvalidArgument("--rho must lie in (0, 1/2)");
  em.line(manifest("quench", {{"rho", a.rho}, {"sites", a.sites}, {"runs", a.runs}, {"max_steps", a.max_steps}}, c));
  std::vector<QuenchResult> runs(a.runs);
  // A single run keeps the given seed; batches derive one seed per run.
  const auto run_seed = [&](std::size_t i) { return a.runs == 1 ? c.seed : hash_key(c.seed, 0x71, i, 0); };
  const unsigned step_threads = a.runs == 1 ? c.threads : 1;
  parallel_for(a.runs, a.runs == 1 ? 1 : c.threads, [&](std::size_t i) {
    runs[i] = quench_lowdensity(a.rho, a.sites, run_seed(i), a.max_steps, step_threads);
  });
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    em.line({{"run", i},
             {"seed", run_seed(i)},
             {"frozen", r.frozen},
             {"steps", r.steps},
             {"markers", r.record.markers.size()},
             {"markers_monotone", r.markers_monotone},
             {"count_101000", r.count_101000},
             {"count_gap1", r.count_gap1}});
  }

  std::size_t gaps = 0;
  for (const auto& r : runs) gaps += r.record.gaps.size();
  const auto s = summarize_quench(runs, a.rho, gaps >= 10000);
  json independence = nullptr;
  if (s.independence) {
    independence = {{"statistic", s.independence->statistic},
                    {"dof", s.independence->dof},
                    {"p_value", s.independence->p_value}};
  }
  const double rho = a.rho;
  em.line({{"summary",
            {{"rho", rho},
             {"runs", s.runs},
             {"frozen_runs", s.frozen_runs},
             {"markers", s.markers},
             {"markers_monotone", s.markers_monotone},
             {"p_101000", s.p_101000.value},
             {"p_101000_se", s.p_101000.se},
             {"p_101000_predicted", rho * rho * std::pow(1.0 - rho, 4.0)},
             {"p_gap1", s.p_gap1.value},
             {"p_gap1_se", s.p_gap1.se},
             {"marker_density", s.marker_density.value},
             {"q", s.q.value},
             {"q_se", s.q.se},
             {"q_lower_bound", (1.0 - 2.0 * rho) / (1.0 - rho)},
             {"gap_independence", independence}}}});
  return s.frozen_runs == s.runs ? kExitOk : kExitFailure;
}

int run_verify(const VerifyArgs& a, const Common& c, Emitter& em) {
  if (a.check == "stationarity") {
    em.line(manifest("verify stationarity",
                     {{"state", a.state}, {"k", a.k}, {"samples", a.samples}, {"steps", a.steps}, {"sites", a.sites},
                      {"stride", a.stride}},
                     c));
    if (a.samples < 10000) throw InvalidArgument("stationarity needs at least 10^4 samples");
    StationarityOptions so;
    so.k = a.k;
    so.samples = a.samples;
    so.steps = a.steps;
    so.stride = a.stride;
    so.seed = c.seed;
    const auto r = stationarity_test(make_state_sampler(a.state, a.sites), so);
    const bool pass = r.chi2.p_value > 0.01;
    json j = to_json(TestOutcome{"stationarity", r.chi2.statistic, r.chi2.p_value, 0.01, pass});
    j["tv"] = r.tv;
    j["dof"] = r.chi2.dof;
    j["windows"] = r.before.total;
    em.line(j);
    return pass ? kExitOk : kExitFailure;
  }

  std::vector<const NamedCheck*> selected;
  for (const auto& nc : acceptance_checks()) {
    if (a.check == "all" || a.check == nc.name) selected.push_back(&nc);
  }
  if (selected.empty()) throw InvalidArgument("unknown check: " + a.check);
  em.line(manifest("verify " + a.check, json::object(), c));
  bool all = true;
  for (const auto* nc : selected) {
    const auto r = nc->run(CheckOptions{c.seed, c.threads});
    all = all && r.pass;
    em.line({{"check", r.name}, {"pass", r.pass}, {"details", r.details}});
  }
  return all ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// Spec files

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

// {"command": "quench", "rho": 0.3, ...} becomes {"fsep", "quench", "--rho", "0.3", ...}.
// "command" may hold several words ("exact ring"); array values repeat the flag.
std::vector<std::string> argv_from_spec(const json& spec) {
  if (!spec.is_object() || !spec.contains("command")) throw InvalidArgument("spec entries need a \"command\"");
  std::vector<std::string> args{"fsep"};
  std::istringstream words(spec.at("command").get<std::string>());
  for (std::string w; words >> w;) args.push_back(w);
  for (const auto& [key, value] : spec.items()) {
    if (key == "command") continue;
    if (value.is_array()) {
      for (const auto& v : value) {
        args.push_back("--" + key);
        args.push_back(scalar_text(v));
      }
    } else if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
    } else {
      args.push_back("--" + key);
      args.push_back(scalar_text(value));
    }
  }
  return args;
}

int run_argv(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_spec_file(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open spec file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("spec file is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) j = json::array({j});
  int worst = kExitOk;
  for (const auto& entry : j) worst = std::max(worst, run_argv(argv_from_spec(entry), out, err));
  return worst;
}

int run_argv(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  return main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Facilitated exclusion and stack model toolkit"};
  app.set_version_flag("--version", FSEP_VERSION);
  app.require_subcommand(0, 1);

  Common common;
  std::string spec_path;
  app.add_option("--spec", spec_path, "JSON spec file: one object or an array of objects");

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Base seed (FSEP_SEED overrides)");
    sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", common.out, "Output file (default stdout)");
  };

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Evolve one ring and record observables");
  simulate->add_option("--init", sim.init, "Initial state, e.g. bernoulli:p=0.3, gibbs:zeta=0.5, exclusion:1100");
  simulate->add_option("--model", sim.model, "fssep or ssm; must match the initial state")
      ->check(CLI::IsMember({"fssep", "ssm"}));
  simulate->add_option("--sites", sim.sites, "Ring size for sampled initial states");
  simulate->add_option("--steps", sim.steps, "Number of steps");
  simulate->add_option("--every", sim.every, "Observation interval");
  simulate->add_option("--observe", sim.observe, "cylinder:<k>, frozen, regions, parity (repeatable)");
  add_common(simulate);

  ExactArgs ex;
  auto* exact = app.add_subcommand("exact", "Exact stationary law or transfer operator");
  exact->add_option("mode", ex.mode, "ring or transfer")->required()->check(CLI::IsMember({"ring", "transfer"}));
  exact->add_option("--sites", ex.sites, "Ring size");
  exact->add_option("--particles", ex.particles, "Particle number (even)");
  exact->add_option("--lu-limit", ex.lu_limit, "Largest state count solved by dense LU");
  exact->add_option("--method", ex.method, "Force lu or power")->check(CLI::IsMember({"", "lu", "power"}));
  exact->add_flag("!--no-states", ex.emit_states, "Omit the per-state table");
  exact->add_option("--zeta", ex.zeta, "Fugacity for the transfer operator");
  exact->add_option("--hmax", ex.hmax, "Truncation height (0 picks one)");
  add_common(exact);

  GibbsArgs gb;
  auto* gibbs = app.add_subcommand("gibbs", "Sample the even-height law with an optional parity sequence");
  gibbs->add_option("--zeta", gb.zeta, "Fugacity");
  gibbs->add_option("--rho", gb.rho, "Even-sector density (>= 1)");
  gibbs->add_option("--parity", gb.parity, "Parity source as inline JSON");
  gibbs->add_option("--sites", gb.sites, "Ring size");
  gibbs->add_option("--samples", gb.samples, "Number of rings");
  gibbs->add_flag("--emit", gb.emit, "Write every sampled ring");
  add_common(gibbs);

  QuenchArgs qa;
  auto* quench = app.add_subcommand("quench", "Low-density runs until frozen, with renewal statistics");
  quench->add_option("--rho", qa.rho, "Particle density in (0, 1/2)");
  quench->add_option("--sites", qa.sites, "Ring size");
  quench->add_option("--runs", qa.runs, "Independent runs");
  quench->add_option("--max-steps", qa.max_steps, "Step cap per run");
  add_common(quench);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Statistical and exact checks");
  verify->add_option("check", va.check, "stationarity, all, or one of the named checks")->required();
  verify->add_option("--state", va.state, "Sampler for stationarity");
  verify->add_option("--k", va.k, "Window length");
  verify->add_option("--samples", va.samples, "Windows per table");
  verify->add_option("--steps", va.steps, "Steps between the two tables");
  verify->add_option("--sites", va.sites, "Ring size");
  verify->add_option("--stride", va.stride, "Window stride (0 picks k + 8)");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (const char* env = std::getenv("FSEP_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      common.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      err << "error: FSEP_SEED is not an unsigned integer: " << env << '\n';
      return kExitUsage;
    }
  }

  try {
    if (!spec_path.empty()) {
      if (app.get_subcommands().size() != 0) throw InvalidArgument("--spec cannot be combined with a subcommand");
      return run_spec_file(spec_path, out, err);
    }
    if (app.get_subcommands().empty()) {
      err << app.help();
      return kExitUsage;
    }

    std::ofstream file;
    if (!common.out.empty()) {
      file.open(common.out, std::ios::out | std::ios::trunc);
      if (!file) throw InvalidArgument("cannot open output file " + common.out);
    }
    Emitter em(common.out.empty() ? out : file);

    if (simulate->parsed()) return run_simulate(sim, common, em);
    if (exact->parsed()) return run_exact(ex, common, em);
    if (gibbs->parsed()) return run_gibbs(gb, common, em);
    if (quench->parsed()) return run_quench(qa, common, em);
    if (verify->parsed()) return run_verify(va, common, em);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace fsep::cli
