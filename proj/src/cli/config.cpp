#include "dwym/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <toml.hpp>

namespace dwym::cli {

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"model", {"kind", "n", "q", "m"}},
    {"lattice", {"dim", "sites", "length"}},
    {"initial", {"kind", "amplitude", "mode", "random_potential", "path"}},
    {"evolution", {"dt", "courant", "steps", "cadence", "form_check"}},
    {"output", {"csv", "snapshot"}},
    {"checks", {"draws", "gauge", "gauge_amplitude", "defect_budget", "dispersion_steps"}},
};

class Reader {
 public:
  Reader(const toml::table& root, std::string source) : root_(root), source_(std::move(source)) {}

  void check_keys() const {
    for (const auto& [key, node] : root_) {
      const std::string k(key.str());
      if (k == "seed") continue;
      const auto it = kSchema.find(k);
      if (it == kSchema.end()) fail("unknown key '" + k + "'");
      const toml::table* t = node.as_table();
      if (!t) fail("'" + k + "' must be a table");
      for (const auto& [sub, unused] : *t)
        if (!it->second.count(std::string(sub.str())))
          fail("unknown key '" + k + "." + std::string(sub.str()) + "'");
    }
  }

  const toml::node* find(const std::string& table, const std::string& key) const {
    if (table.empty()) return root_.get(key);
    const toml::table* t = root_[table].as_table();
    return t ? t->get(key) : nullptr;
  }

  template <class T>
  void read(const std::string& table, const std::string& key, T& out) const {
    const toml::node* n = find(table, key);
    if (!n) return;
    const std::string name = table.empty() ? key : table + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!n->is_boolean()) fail("'" + name + "' must be true or false");
      out = n->as_boolean()->get();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!n->is_string()) fail("'" + name + "' must be a string");
      out = n->as_string()->get();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!n->is_number()) fail("'" + name + "' must be a number");
      out = n->value<double>().value();
    } else {
      if (!n->is_integer()) fail("'" + name + "' must be an integer");
      const std::int64_t v = n->as_integer()->get();
      if constexpr (std::is_unsigned_v<T>) {
        if (v < 0) fail("'" + name + "' must be non-negative");
      }
      out = static_cast<T>(v);
    }
  }

  template <class E>
  void read_enum(const std::string& table, const std::string& key, E& out,
                 const std::vector<std::pair<std::string, E>>& names) const {
    std::string s;
    if (!find(table, key)) return;
    read(table, key, s);
    std::string allowed;
    for (const auto& [name, value] : names) {
      if (name == s) {
        out = value;
        return;
      }
      allowed += (allowed.empty() ? "" : ", ") + name;
    }
    fail("'" + table + "." + key + "' must be one of " + allowed + ", got '" + s + "'");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(source_ + ": " + what); }

 private:
  const toml::table& root_;
  std::string source_;
};

const std::vector<std::pair<std::string, ModelKind>> kModels = {{"u1", ModelKind::u1}, {"sun", ModelKind::sun}};
const std::vector<std::pair<std::string, InitialKind>> kInitial = {{"zero", InitialKind::zero},
                                                                    {"coupled", InitialKind::coupled},
                                                                    {"plane_wave", InitialKind::plane_wave},
                                                                    {"snapshot", InitialKind::snapshot}};
const std::vector<std::pair<std::string, GaugeKind>> kGauges = {{"smooth", GaugeKind::smooth},
                                                                 {"constant", GaugeKind::constant}};

template <class E>
std::string name_of(E v, const std::vector<std::pair<std::string, E>>& names) {
  for (const auto& [name, value] : names)
    if (value == v) return name;
  return "?";
}

std::string quoted(const std::string& s) {
  std::ostringstream os;
  os << toml::value<std::string>(s);
  return os.str();
}

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

LatticeSpec RunConfig::slice() const { return LatticeSpec::slice(dim, sites, spacing(), time_step()); }

LatticeSpec RunConfig::spacetime() const { return LatticeSpec::spacetime(dim, sites, spacing()); }

EvolutionConfig RunConfig::evolution() const {
  EvolutionConfig cfg;
  cfg.dt = time_step();
  cfg.n_steps = steps;
  cfg.cadence = cadence;
  return cfg;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (model == ModelKind::u1 && n != 1) fail("model.n must be 1 for the u1 model, got " + std::to_string(n));
  if (n < 1 || n > kMaxOrder) fail("model.n must be between 1 and 4, got " + std::to_string(n));
  if (!std::isfinite(q) || !std::isfinite(m)) fail("model.q and model.m must be finite");
  if (m < 0.0) fail("model.m must be non-negative");
  if (dim < 2 || dim > kMaxDim) fail("lattice.dim must be between 2 and 4, got " + std::to_string(dim));
  if (sites < 4) fail("lattice.sites must be at least 4, got " + std::to_string(sites));
  if (!(length > 0.0) || !std::isfinite(length)) fail("lattice.length must be positive");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) fail("initial.amplitude must be non-negative");
  if (2 * std::abs(mode) > sites) fail("initial.mode exceeds the Nyquist mode sites/2");
  if (initial == InitialKind::snapshot && snapshot_in.empty())
    fail("initial.path is required when initial.kind = \"snapshot\"");
  if (!(courant > 0.0)) fail("evolution.courant must be positive");
  if (steps < 0) fail("evolution.steps must be non-negative");
  if (cadence < 1) fail("evolution.cadence must be at least 1");
  if (form_check && q == 0.0) fail("evolution.form_check needs q != 0");
  if (csv.empty()) fail("output.csv must not be empty");
  if (draws < 1) fail("checks.draws must be at least 1");
  if (!(gauge_amplitude >= 0.0)) fail("checks.gauge_amplitude must be non-negative");
  if (!(defect_budget > 0.0)) fail("checks.defect_budget must be positive");
  if (dispersion_steps < 3) fail("checks.dispersion_steps must be at least 3");
  try {
    evolution().validate(slice());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

std::string RunConfig::to_toml() const {
  std::ostringstream os;
  os << "seed = " << seed << "\n\n";
  os << "[model]\nkind = " << quoted(name_of(model, kModels)) << "\nn = " << n << "\nq = " << num(q)
     << "\nm = " << num(m) << "\n\n";
  os << "[lattice]\ndim = " << dim << "\nsites = " << sites << "\nlength = " << num(length) << "\n\n";
  os << "[initial]\nkind = " << quoted(name_of(initial, kInitial)) << "\namplitude = " << num(amplitude)
     << "\nmode = " << mode << "\nrandom_potential = " << (random_potential ? "true" : "false") << "\n";
  if (!snapshot_in.empty()) os << "path = " << quoted(snapshot_in) << "\n";
  os << "\n[evolution]\n";
  if (dt) os << "dt = " << num(*dt) << "\n";
  os << "courant = " << num(courant) << "\nsteps = " << steps << "\ncadence = " << cadence
     << "\nform_check = " << (form_check ? "true" : "false") << "\n\n";
  os << "[output]\ncsv = " << quoted(csv) << "\n";
  if (!snapshot_out.empty()) os << "snapshot = " << quoted(snapshot_out) << "\n";
  os << "\n[checks]\ndraws = " << draws << "\ngauge = " << quoted(name_of(gauge, kGauges))
     << "\ngauge_amplitude = " << num(gauge_amplitude) << "\ndefect_budget = " << num(defect_budget)
     << "\ndispersion_steps = " << dispersion_steps << "\n";
  return os.str();
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
       << e.description();
    throw ConfigError(os.str());
  }
  const Reader r(root, source);
  r.check_keys();

  RunConfig c;
  r.read("", "seed", c.seed);
  r.read_enum("model", "kind", c.model, kModels);
  if (c.model == ModelKind::sun) c.n = 2;
  r.read("model", "n", c.n);
  r.read("model", "q", c.q);
  r.read("model", "m", c.m);
  r.read("lattice", "dim", c.dim);
  r.read("lattice", "sites", c.sites);
  r.read("lattice", "length", c.length);
  r.read_enum("initial", "kind", c.initial, kInitial);
  r.read("initial", "amplitude", c.amplitude);
  r.read("initial", "mode", c.mode);
  r.read("initial", "random_potential", c.random_potential);
  r.read("initial", "path", c.snapshot_in);
  if (r.find("evolution", "dt")) {
    double dt = 0.0;
    r.read("evolution", "dt", dt);
    c.dt = dt;
  }
  r.read("evolution", "courant", c.courant);
  r.read("evolution", "steps", c.steps);
  r.read("evolution", "cadence", c.cadence);
  r.read("evolution", "form_check", c.form_check);
  r.read("output", "csv", c.csv);
  r.read("output", "snapshot", c.snapshot_out);
  r.read("checks", "draws", c.draws);
  r.read_enum("checks", "gauge", c.gauge, kGauges);
  r.read("checks", "gauge_amplitude", c.gauge_amplitude);
  r.read("checks", "defect_budget", c.defect_budget);
  r.read("checks", "dispersion_steps", c.dispersion_steps);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path.string());
}

}  // namespace dwym::cli
