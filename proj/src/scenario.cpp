#include "dce3/scenario.hpp"

#include "dce3/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace dce3 {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::FullRwa: return "full-rwa";
    case Method::FullLab: return "full-lab";
    case Method::Lindblad: return "lindblad";
    case Method::Chain: return "chain";
    case Method::Analytic: return "analytic";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::FullRwa, Method::FullLab, Method::Lindblad, Method::Chain, Method::Analytic}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError(fmt::format("unknown method '{}'", text));
}

double Scenario::resolved_x() const { return resonance ? resonance_shift(atom, *resonance) : x; }

DriveParams Scenario::drive() const { return DriveParams{epsilon, resolved_x()}; }

HilbertSpec Scenario::spec() const {
  if (method == Method::Chain) return HilbertSpec(AtomConfig::Ladder, chain_cutoff);
  return HilbertSpec(atom.config, fock_cutoff);
}

Frame Scenario::frame() const { return method == Method::FullLab ? Frame::Lab : rwa_frame(atom.config); }

HamiltonianModel Scenario::model() const { return HamiltonianModel{frame(), spec(), atom, drive()}; }

IntegratorConfig Scenario::integrator_config() const {
  IntegratorConfig c;
  c.rel_tol = rel_tol;
  c.abs_tol = abs_tol;
  c.max_step = max_step;
  c.tableau = tableau;
  c.grid = SampleGrid::uniform_scaled(epsilon, eps_t_end, samples);
  return c;
}

ChainModel Scenario::chain_model() const {
  return ChainModel{atom.g, atom.partner_coupling(), epsilon, chain_cutoff};
}

void Scenario::validate() const {
  if (name.empty()) throw ConfigError("scenario name is empty");
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
      throw ConfigError(fmt::format("scenario name '{}' may only use letters, digits, '-', '_' and '.'", name));
    }
  }
  atom.validate();
  if (epsilon == 0.0) throw ParameterError("epsilon must be nonzero: the sample grid is in eps*t");
  drive().validate();
  if (fock_cutoff < 1) throw ConfigError("fock_cutoff must be >= 1");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (!(eps_t_end > 0.0)) throw ConfigError("eps_t_end must be positive");
  integrator_config().validate();
  switch (method) {
    case Method::FullRwa: break;
    case Method::FullLab:
      if (eps_t_end > kLabFrameMaxEpsT) {
        throw ConfigError(fmt::format("lab-frame runs are limited to eps*t <= {}", kLabFrameMaxEpsT));
      }
      break;
    case Method::Lindblad:
      if (!atom.has_damping()) throw ConfigError("lindblad method needs a nonzero damping rate");
      if (fock_cutoff > 24) throw ConfigError("lindblad method needs a small Fock cutoff (<= 24)");
      break;
    case Method::Chain:
      if (atom.config != AtomConfig::Ladder) throw ConfigError("chain method is for the ladder atom");
      if (resolved_x() != 0.0 || atom.delta2 != 0.0) throw ConfigError("chain method needs x = 0 and delta2 = 0");
      chain_model().validate();
      break;
    case Method::Analytic:
      if (!branch) throw ConfigError("analytic method needs a branch");
      ResonanceSpec::from_atom(atom, *branch);
      break;
  }
  if (method != Method::Analytic && branch) throw ConfigError("branch is only meaningful for the analytic method");
}

namespace {

AtomParams ladder(double g, double g2, double delta2 = 0.0, double lambda = 0.0) {
  return ladder_atom(g, g2, delta2, lambda, lambda * (g2 / g) * (g2 / g));
}

AtomParams vee(double g, double g3, double delta3 = 0.0, double lambda = 0.0) {
  return v_atom(g, g3, delta3, lambda, lambda * (g3 / g) * (g3 / g));
}

Scenario weak_resonance(std::string name, AtomParams atom, Branch resonance) {
  Scenario s;
  s.name = std::move(name);
  s.method = Method::Lindblad;
  s.resonance = resonance;
  s.fock_cutoff = 7;
  s.atom = atom;
  s.epsilon = 1e-3;
  s.eps_t_end = 10.0;
  s.samples = 201;
  return s;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig4c", "empty-cavity", "two-level-blockade"};
}

Scenario preset(std::string_view name) {
  constexpr double g = 3e-2;
  constexpr double partner = 4e-2;
  constexpr double lambda = 5e-4;
  Scenario s;
  s.name = std::string(name);
  if (name == "fig2a" || name == "fig2b") {
    s.atom = ladder(g, name == "fig2a" ? partner : 1e-2);
    s.epsilon = 1e-3;
    s.fock_cutoff = 196;
    s.eps_t_end = 3.0;
    s.samples = 301;
    return s;
  }
  if (name == "fig3a") return weak_resonance(s.name, ladder(g, partner, 0.0, lambda), Branch::TwoPhotonPlus);
  if (name == "fig3b") {
    return weak_resonance(s.name, ladder(g, partner, 10.0 * partner, lambda), Branch::DispersivePlus);
  }
  if (name == "fig4a") return weak_resonance(s.name, vee(g, partner, 0.0, lambda), Branch::TwoPhotonPlus);
  if (name == "fig4b") {
    return weak_resonance(s.name, vee(g, partner, -12.0 * partner, lambda), Branch::DispersivePlus);
  }
  if (name == "fig4c") {
    s.atom = vee(5e-4, 8e-4, -4.0 * 8e-4);
    s.epsilon = 1e-2;
    s.fock_cutoff = 256;
    s.eps_t_end = 3.5;
    s.samples = 351;
    s.photon_dist = true;
    return s;
  }
  if (name == "empty-cavity") {
    s.atom = ladder_atom(0.0, 0.0);
    s.epsilon = 1e-2;
    s.fock_cutoff = 196;
    s.eps_t_end = 3.0;
    s.samples = 301;
    return s;
  }
  if (name == "two-level-blockade") {
    s.atom = ladder_atom(g, 0.0);
    s.epsilon = 1e-3;
    s.fock_cutoff = 40;
    s.eps_t_end = 10.0;
    s.samples = 501;
    return s;
  }
  throw ConfigError(fmt::format("unknown preset '{}'", name));
}

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"name", "method", "branch"}},
      {"hilbert", {"config", "fock_cutoff"}},
      {"atom", {"g", "g2", "g3", "delta2", "delta3", "lambda", "lambda2", "lambda3", "e1"}},
      {"drive", {"epsilon", "x", "resonance"}},
      {"integrator", {"rel_tol", "abs_tol", "max_step", "tableau"}},
      {"output", {"eps_t_end", "samples", "photon_dist", "chain_cutoff"}},
  };
  return keys;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, text));
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(fmt::format("{}: '{}' is not an integer", key, text));
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> text(const std::string& path) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  }
  std::optional<double> number(const std::string& path) const {
    auto t = text(path);
    return t ? std::optional<double>(to_double(path, *t)) : std::nullopt;
  }
  std::optional<int> integer(const std::string& path) const {
    auto t = text(path);
    return t ? std::optional<int>(to_int(path, *t)) : std::nullopt;
  }
  std::optional<bool> boolean(const std::string& path) const {
    auto t = text(path);
    return t ? std::optional<bool>(to_bool(path, *t)) : std::nullopt;
  }

 private:
  const pt::ptree& tree_;
};

}  // namespace

Scenario parse_scenario(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("malformed config: {}", e.message()));
  }
  for (const auto& [section, body] : tree) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (body.empty()) throw ConfigError(fmt::format("key '{}' outside any section", section));
      throw ConfigError(fmt::format("unknown section [{}]", section));
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(fmt::format("unknown key '{}' in [{}]", key, section));
    }
  }

  Reader r(tree);
  Scenario s;
  s.name = r.text("scenario.name").value_or("custom");
  s.method = parse_method(r.text("scenario.method").value_or("full-rwa"));
  if (auto b = r.text("scenario.branch")) s.branch = parse_branch(*b);

  const AtomConfig config = parse_atom_config(r.text("hilbert.config").value_or("ladder"));
  s.fock_cutoff = r.integer("hilbert.fock_cutoff").value_or(s.fock_cutoff);

  AtomParams& a = s.atom;
  a = AtomParams{};
  a.config = config;
  a.g = r.number("atom.g").value_or(0.0);
  a.g2 = r.number("atom.g2");
  a.g3 = r.number("atom.g3");
  a.delta2 = r.number("atom.delta2").value_or(0.0);
  a.delta3 = r.number("atom.delta3").value_or(0.0);
  a.lambda = r.number("atom.lambda").value_or(0.0);
  a.lambda2 = r.number("atom.lambda2").value_or(0.0);
  a.lambda3 = r.number("atom.lambda3").value_or(0.0);
  a.e1 = r.number("atom.e1").value_or(0.0);
  // A missing partner coupling means a decoupled third level.
  if (config == AtomConfig::Ladder && !a.g2 && !a.g3) a.g2 = 0.0;
  if (config == AtomConfig::V && !a.g2 && !a.g3) a.g3 = 0.0;

  auto eps = r.number("drive.epsilon");
  if (!eps) throw ConfigError("[drive] epsilon is required");
  s.epsilon = *eps;
  auto x = r.number("drive.x");
  auto res = r.text("drive.resonance");
  if (x && res) throw ConfigError("[drive] takes either x or resonance, not both");
  if (res) s.resonance = parse_branch(*res);
  s.x = x.value_or(0.0);

  s.rel_tol = r.number("integrator.rel_tol").value_or(s.rel_tol);
  s.abs_tol = r.number("integrator.abs_tol").value_or(s.abs_tol);
  s.max_step = r.number("integrator.max_step").value_or(s.max_step);
  s.tableau = r.text("integrator.tableau").value_or(s.tableau);

  s.eps_t_end = r.number("output.eps_t_end").value_or(s.eps_t_end);
  s.samples = r.integer("output.samples").value_or(s.samples);
  s.photon_dist = r.boolean("output.photon_dist").value_or(false);
  s.chain_cutoff = r.integer("output.chain_cutoff").value_or(s.chain_cutoff);

  s.validate();
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
  return parse_scenario(in);
}

Scenario load_scenario(const std::string& name_or_path) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    Scenario s = preset(name_or_path);
    s.validate();
    return s;
  }
  if (std::filesystem::exists(name_or_path)) return parse_scenario_file(name_or_path);
  throw ConfigError(fmt::format("'{}' is neither a preset nor a config file", name_or_path));
}

std::string serialize_scenario(const Scenario& s) {
  auto num = [](double v) { return fmt::format("{:.17g}", v); };
  std::ostringstream out;
  out << "[scenario]\n";
  out << "name = " << s.name << "\n";
  out << "method = " << to_string(s.method) << "\n";
  if (s.branch) out << "branch = " << to_string(*s.branch) << "\n";
  out << "\n[hilbert]\n";
  out << "config = " << to_string(s.atom.config) << "\n";
  out << "fock_cutoff = " << s.fock_cutoff << "\n";
  out << "\n[atom]\n";
  const AtomParams& a = s.atom;
  out << "g = " << num(a.g) << "\n";
  if (a.config == AtomConfig::Ladder) {
    out << "g2 = " << num(a.g2.value_or(0.0)) << "\n";
    out << "delta2 = " << num(a.delta2) << "\n";
    out << "lambda = " << num(a.lambda) << "\n";
    out << "lambda2 = " << num(a.lambda2) << "\n";
  } else {
    out << "g3 = " << num(a.g3.value_or(0.0)) << "\n";
    out << "delta3 = " << num(a.delta3) << "\n";
    out << "lambda = " << num(a.lambda) << "\n";
    out << "lambda3 = " << num(a.lambda3) << "\n";
  }
  out << "e1 = " << num(a.e1) << "\n";
  out << "\n[drive]\n";
  out << "epsilon = " << num(s.epsilon) << "\n";
  if (s.resonance) {
    out << "resonance = " << to_string(*s.resonance) << "\n";
  } else {
    out << "x = " << num(s.x) << "\n";
  }
  out << "\n[integrator]\n";
  out << "rel_tol = " << num(s.rel_tol) << "\n";
  out << "abs_tol = " << num(s.abs_tol) << "\n";
  out << "max_step = " << num(s.max_step) << "\n";
  out << "tableau = " << s.tableau << "\n";
  out << "\n[output]\n";
  out << "eps_t_end = " << num(s.eps_t_end) << "\n";
  out << "samples = " << s.samples << "\n";
  out << "photon_dist = " << (s.photon_dist ? "true" : "false") << "\n";
  out << "chain_cutoff = " << s.chain_cutoff << "\n";
  return out.str();
}

}  // namespace dce3
