#include "dce3/runner.hpp"

#include "dce3/error.hpp"
#include "dce3/kernels.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

namespace dce3 {

namespace {

void add_unique(std::vector<std::string>& out, const std::string& w) {
  if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
}

QuantumState initial_ground(const HilbertSpec& spec) { return QuantumState::pure(spec, basis_ket(spec, 1, 0)); }

std::vector<ObservableSample> observe(const EvolutionResult& ev) {
  std::vector<ObservableSample> out;
  out.reserve(ev.samples.size());
  for (const auto& s : ev.samples) out.push_back(compute_observables(s.state, s.t, s.eps_t));
  return out;
}

ObservableSample observe_closed_form(const ClosedForm& cf, double t, double eps_t) {
  ObservableSample s;
  s.t = t;
  s.eps_t = eps_t;
  int top = 0;
  for (const auto& [k, v] : cf.probs) top = std::max(top, k.photons);
  s.photon_dist.assign(static_cast<std::size_t>(top + 1), 0.0);
  for (const auto& [k, v] : cf.probs) {
    s.photon_dist[static_cast<std::size_t>(k.photons)] += v;
    s.pop[static_cast<std::size_t>(k.atom - 1)] += v;
    if (v > kAmpProbThreshold) s.amp_probs[k] = v;
  }
  for (std::size_t n = 0; n < s.photon_dist.size(); ++n) {
    const double dn = static_cast<double>(n);
    s.mean_n += dn * s.photon_dist[n];
    s.mean_n2 += dn * dn * s.photon_dist[n];
  }
  s.mandel_q = mandel_q(s.mean_n, s.mean_n2);
  return s;
}

void regime_warnings(const Scenario& sc, std::vector<std::string>& w) {
  for (const auto& d : sc.drive().warnings()) add_unique(w, d);
  if (sc.method == Method::Chain) {
    if (sc.atom.g == 0.0 || std::abs(sc.epsilon / sc.atom.g) > kWeakModulationRatio) {
      add_unique(w, fmt::format("chain reduction needs |eps|/|g| <= {}", kWeakModulationRatio));
    }
    if (sc.atom.partner_coupling() != 0.0 &&
        std::abs(sc.epsilon / sc.atom.partner_coupling()) > kWeakModulationRatio) {
      add_unique(w, fmt::format("third-level recovery needs |eps|/|g2| <= {}", kWeakModulationRatio));
    }
  }
}

}  // namespace

RunResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  RunResult r;
  r.scenario = scenario;
  regime_warnings(scenario, r.warnings);
  const IntegratorConfig cfg = scenario.integrator_config();

  switch (scenario.method) {
    case Method::FullRwa:
    case Method::FullLab: {
      const HamiltonianModel model = scenario.model();
      const auto ev = evolve_schrodinger(model, initial_ground(model.spec), cfg);
      r.samples = observe(ev);
      r.diagnostics = ev.diagnostics;
      break;
    }
    case Method::Lindblad: {
      const HamiltonianModel model = scenario.model();
      const auto ev = evolve_lindblad(model, initial_ground(model.spec), cfg);
      r.samples = observe(ev);
      r.diagnostics = ev.diagnostics;
      break;
    }
    case Method::Chain: {
      const ChainModel chain = scenario.chain_model();
      std::vector<cplx> p0(chain.size(), cplx{});
      p0[0] = 1.0;
      const auto ev = evolve_amplitude_chain(chain, p0, cfg);
      const HilbertSpec spec = scenario.spec();
      for (const auto& s : ev.samples) {
        const QuantumState st = QuantumState::snapshot(spec, chain_to_ket(chain, s.p1));
        r.diagnostics.max_norm_deviation = std::max(r.diagnostics.max_norm_deviation, st.norm_deviation());
        r.samples.push_back(compute_observables(st, s.t, s.eps_t));
      }
      const double norm_dev = r.diagnostics.max_norm_deviation;
      r.diagnostics = ev.diagnostics;
      r.diagnostics.max_norm_deviation = norm_dev;
      r.diagnostics.norm_ok = norm_dev <= kPureNormTolerance;
      break;
    }
    case Method::Analytic: {
      const DriveParams drive = scenario.drive();
      for (double t : cfg.grid.times()) {
        const ClosedForm cf = analytic_probs(scenario.atom, drive, *scenario.branch, t);
        for (const auto& w : cf.warnings) add_unique(r.warnings, w);
        r.samples.push_back(observe_closed_form(cf, t, std::abs(scenario.epsilon) * t));
      }
      r.diagnostics.kernels = kernels::active().name;
      r.diagnostics.tableau = "none";
      break;
    }
  }
  if (r.diagnostics.truncation_warning) {
    add_unique(r.warnings, fmt::format("Fock leakage {:.3e} exceeds {:.0e}; raise the cutoff",
                                       r.diagnostics.max_leakage, kLeakageThreshold));
  }
  return r;
}

bool quality_ok(const RunResult& result) { return result.diagnostics.norm_ok; }

std::vector<std::string> csv_columns(const RunResult& result) {
  std::vector<std::string> cols = {"t", "eps_t", "mean_n", "mandel_q", "s11", "s22", "s33", "leakage"};
  std::set<BasisIndex> keys;
  for (const auto& s : result.samples) {
    for (const auto& [k, v] : s.amp_probs) keys.insert(k);
  }
  for (const auto& k : keys) cols.push_back(fmt::format("p_{}_{}", k.atom, k.photons));
  return cols;
}

std::string format_csv(const RunResult& result) {
  std::set<BasisIndex> keys;
  for (const auto& s : result.samples) {
    for (const auto& [k, v] : s.amp_probs) keys.insert(k);
  }
  const auto cols = csv_columns(result);
  std::string out;
  for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + cols[c];
  out += '\n';
  for (const auto& s : result.samples) {
    out += fmt::format("{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}", s.t, s.eps_t, s.mean_n,
                       s.mandel_q, s.pop[0], s.pop[1], s.pop[2], s.leakage);
    for (const auto& k : keys) {
      auto it = s.amp_probs.find(k);
      out += fmt::format(",{:.17e}", it == s.amp_probs.end() ? 0.0 : it->second);
    }
    out += '\n';
  }
  return out;
}

std::string format_photon_dist_csv(const RunResult& result) {
  std::size_t width = 0;
  for (const auto& s : result.samples) width = std::max(width, s.photon_dist.size());
  std::string out = "t,eps_t";
  for (std::size_t n = 0; n < width; ++n) out += fmt::format(",P{}", n);
  out += '\n';
  for (const auto& s : result.samples) {
    out += fmt::format("{:.17e},{:.17e}", s.t, s.eps_t);
    for (std::size_t n = 0; n < width; ++n) {
      out += fmt::format(",{:.17e}", n < s.photon_dist.size() ? s.photon_dist[n] : 0.0);
    }
    out += '\n';
  }
  return out;
}

std::string format_sidecar(const RunResult& result) {
  using nlohmann::ordered_json;
  const Scenario& sc = result.scenario;
  const AtomParams& a = sc.atom;
  const DriveParams drive = sc.drive();

  ordered_json atom;
  atom["config"] = std::string(to_string(a.config));
  atom["g"] = a.g;
  if (a.config == AtomConfig::Ladder) {
    atom["g2"] = a.partner_coupling();
    atom["delta2"] = a.delta2;
    atom["lambda"] = a.lambda;
    atom["lambda2"] = a.lambda2;
  } else {
    atom["g3"] = a.partner_coupling();
    atom["delta3"] = a.delta3;
    atom["lambda"] = a.lambda;
    atom["lambda3"] = a.lambda3;
  }
  atom["e1"] = a.e1;
  atom["e2"] = a.e2();
  atom["e3"] = a.e3();

  ordered_json j;
  j["name"] = sc.name;
  j["method"] = std::string(to_string(sc.method));
  j["frame"] = std::string(to_string(sc.frame()));
  if (sc.branch) j["branch"] = std::string(to_string(*sc.branch));
  j["fock_cutoff"] = sc.method == Method::Chain ? sc.chain_cutoff : sc.fock_cutoff;
  j["dimension"] = sc.spec().dimension();
  j["atom"] = atom;
  j["drive"] = {{"epsilon", drive.epsilon},
                {"x", drive.x},
                {"resonance", sc.resonance ? std::string(to_string(*sc.resonance)) : std::string("none")},
                {"eta", drive.eta()},
                {"q", drive.q()}};
  j["integrator"] = {{"tableau", sc.method == Method::Analytic ? std::string("none") : sc.tableau},
                     {"rel_tol", sc.rel_tol},
                     {"abs_tol", sc.abs_tol},
                     {"max_step", sc.max_step}};
  j["grid"] = {{"eps_t_end", sc.eps_t_end}, {"samples", sc.samples}};

  const Diagnostics& d = result.diagnostics;
  j["diagnostics"] = {{"max_norm_deviation", d.max_norm_deviation},
                      {"max_trace_deviation", d.max_trace_deviation},
                      {"max_hermiticity_deviation", d.max_hermiticity_deviation},
                      {"min_eigenvalue", d.min_eigenvalue},
                      {"max_leakage", d.max_leakage},
                      {"truncation_warning", d.truncation_warning},
                      {"norm_ok", d.norm_ok},
                      {"accepted_steps", d.steps.accepted},
                      {"rejected_steps", d.steps.rejected},
                      {"rhs_evaluations", d.steps.rhs_evaluations},
                      {"smallest_step", d.steps.smallest_step},
                      {"largest_step", d.steps.largest_step},
                      {"kernels", d.kernels}};
  j["warnings"] = result.warnings;
  j["columns"] = csv_columns(result);
  if (!result.samples.empty()) {
    const auto& last = result.samples.back();
    j["final"] = {{"eps_t", last.eps_t}, {"mean_n", last.mean_n}, {"mandel_q", last.mandel_q}};
  }
  return j.dump(2) + "\n";
}

OutputFiles write_outputs(const RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError(fmt::format("cannot write '{}'", p.string()));
    out << text;
  };
  OutputFiles files;
  const std::string& name = result.scenario.name;
  files.csv = dir / (name + ".csv");
  files.json = dir / (name + ".json");
  write(files.csv, format_csv(result));
  write(files.json, format_sidecar(result));
  if (result.scenario.photon_dist) {
    files.photon_dist = dir / (name + ".photon_dist.csv");
    write(files.photon_dist, format_photon_dist_csv(result));
  }
  return files;
}

std::vector<JobOutcome> run_parallel(const std::vector<Scenario>& scenarios, int jobs,
                                     const std::function<void(const JobOutcome&)>& done) {
  std::vector<JobOutcome> outcomes(scenarios.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      JobOutcome& o = outcomes[i];
      o.index = i;
      try {
        o.result = run_scenario(scenarios[i]);
      } catch (...) {
        o.error = std::current_exception();
      }
      if (done) {
        std::lock_guard lock(report);
        done(o);
      }
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(scenarios.size(), static_cast<std::size_t>(std::max(1, jobs)));
  if (n_threads <= 1) {
    worker();
    return outcomes;
  }
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return outcomes;
}

}  // namespace dce3
