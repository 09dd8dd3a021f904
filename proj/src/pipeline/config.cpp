#include "qlrsim/pipeline/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "toml.hpp"

namespace qlrsim::pipeline {

namespace fs = std::filesystem;

namespace {

// One TOML table; every key read is marked, the rest are rejected at the end.
class Section {
 public:
  Section(const toml::table* t, std::string path) : t_(t), path_(std::move(path)) {}

  bool has(const std::string& key) {
    if (!t_ || !t_->contains(key)) return false;
    seen_.insert(key);
    return true;
  }
  const toml::node* node(const std::string& key) {
    if (!has(key)) return nullptr;
    return t_->get(key);
  }
  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    const auto* n = node(key);
    if (!n) return fallback;
    return as_number(*n, where(key));
  }
  int integer(const std::string& key, int fallback) {
    const auto* n = node(key);
    if (!n) return fallback;
    if (!n->is_integer()) throw ConfigError(where(key) + " must be an integer");
    return static_cast<int>(n->as_integer()->get());
  }
  bool boolean(const std::string& key, bool fallback) {
    const auto* n = node(key);
    if (!n) return fallback;
    if (!n->is_boolean()) throw ConfigError(where(key) + " must be true or false");
    return n->as_boolean()->get();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    const auto* n = node(key);
    if (!n) return fallback;
    if (!n->is_string()) throw ConfigError(where(key) + " must be a string");
    return n->as_string()->get();
  }
  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    const auto* n = node(key);
    if (!n) return out;
    const auto* a = n->as_array();
    if (!a) throw ConfigError(where(key) + " must be an array of numbers");
    for (const auto& e : *a) out.push_back(as_number(e, where(key)));
    return out;
  }
  std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback) {
    const auto* n = node(key);
    if (!n) return fallback;
    if (n->is_string()) return {n->as_string()->get()};
    const auto* a = n->as_array();
    if (!a) throw ConfigError(where(key) + " must be a string or an array of strings");
    std::vector<std::string> out;
    for (const auto& e : *a) {
      if (!e.is_string()) throw ConfigError(where(key) + " must contain strings");
      out.push_back(e.as_string()->get());
    }
    return out;
  }
  Section sub(const std::string& key) {
    const auto* n = node(key);
    if (n && !n->is_table()) throw ConfigError(where(key) + " must be a table");
    return Section(n ? n->as_table() : nullptr, where(key));
  }
  const toml::table* table() const { return t_; }

  void reject_unknown() const {
    if (!t_) return;
    for (const auto& [k, v] : *t_) {
      const std::string key(k.str());
      if (!seen_.count(key)) throw ConfigError("unknown key " + where(key));
    }
  }

 private:
  static double as_number(const toml::node& n, const std::string& where) {
    if (n.is_floating_point()) return n.as_floating_point()->get();
    if (n.is_integer()) return static_cast<double>(n.as_integer()->get());
    throw ConfigError(where + " must be a number");
  }

  const toml::table* t_;
  std::string path_;
  std::set<std::string> seen_;
};

eom::Method parse_eom_method(const std::string& s) {
  if (s == "qeom") return eom::Method::Qeom;
  if (s == "sc") return eom::Method::ScEom;
  if (s == "proj") return eom::Method::ProjEom;
  if (s == "qse") return eom::Method::Qse;
  throw ConfigError("methods.eom: unknown method '" + s + "' (qeom, sc, proj, qse)");
}

eom::Variant parse_qlr_variant(const std::string& s) {
  if (s == "sc") return eom::Variant::SelfConsistent;
  if (s == "proj") return eom::Variant::Projected;
  throw ConfigError("methods.qlr: unknown variant '" + s + "' (sc, proj)");
}

std::string resolve_path(const std::string& p, const std::string& base) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

std::vector<double> grid(Section& s, const std::string& what) {
  if (s.has("values")) {
    if (s.has("start") || s.has("stop") || s.has("points"))
      throw ConfigError(what + ": give either values or start/stop/points");
    return s.numbers("values");
  }
  if (!s.has("start") && !s.has("stop") && !s.has("points")) return {};
  const double a = s.number("start", 0.0), b = s.number("stop", 0.0);
  const int n = s.integer("points", 0);
  if (n < 1) throw ConfigError(what + ".points must be at least 1");
  if (n == 1) return {a};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
  return v;
}

}  // namespace

std::vector<std::string> molecule_builders() { return {"h2", "lih", "h2o", "h4-square", "h-chain", "h2-dimer"}; }

std::map<std::string, double> builder_defaults(const std::string& b) {
  if (b == "h2") return {{"bond", 0.7}};
  if (b == "lih") return {{"bond", 1.6}};
  if (b == "h2o") return {{"oh_bond", 0.958}, {"angle", 104.5}};
  if (b == "h4-square") return {{"side", 1.5}};
  if (b == "h-chain") return {{"atoms", 6}, {"spacing", 4.0}};
  if (b == "h2-dimer") return {{"bond", 0.75}, {"separation", 1.5}, {"dihedral", 60.0}};
  throw ConfigError("unknown molecule builder '" + b + "'");
}

integrals::Geometry build_molecule(const std::string& b, const std::map<std::string, double>& given) {
  auto p = builder_defaults(b);
  for (const auto& [k, v] : given) {
    if (!p.count(k)) throw ConfigError("molecule builder '" + b + "' has no parameter '" + k + "'");
    p[k] = v;
  }
  namespace m = integrals::molecules;
  if (b == "h2") return m::h2(p["bond"]);
  if (b == "lih") return m::lih(p["bond"]);
  if (b == "h2o") return m::h2o(p["oh_bond"], p["angle"]);
  if (b == "h4-square") return m::h4_square(p["side"]);
  if (b == "h-chain") {
    const double n = p["atoms"];
    if (n != std::floor(n) || n < 2) throw ConfigError("h-chain atoms must be an integer >= 2");
    return m::h_chain(static_cast<int>(n), p["spacing"]);
  }
  return m::h2_dimer_helical(p["bond"], p["separation"], p["dihedral"]);
}

std::string parameter_column(const std::string& parameter) {
  if (parameter == "atoms") return parameter;
  if (parameter == "angle" || parameter == "dihedral") return parameter + "_deg";
  return parameter + "_angstrom";
}

integrals::Geometry resolve_geometry(const MoleculeSpec& m) {
  if (!m.builder.empty()) return build_molecule(m.builder, m.params);
  if (!m.geometry.empty()) return integrals::Geometry::parse(m.geometry, m.units);
  throw ConfigError("molecule has no geometry");
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "config syntax error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(os.str());
  }
  Section top(&root, "");
  RunConfig c;
  c.name = top.string("name", c.name);
  c.output_dir = top.string("output_dir", c.output_dir);
  if (top.has("seed")) {
    const int64_t s = top.node("seed")->value<int64_t>().value_or(-1);
    if (s < 0) throw ConfigError("seed must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(s);
  }

  // molecule
  {
    Section s = top.sub("molecule");
    if (!s.table()) throw ConfigError("missing [molecule] table");
    auto& m = c.molecule;
    m.builder = s.string("builder", "");
    Section params = s.sub("params");
    if (params.table())
      for (const auto& [k, v] : *params.table()) m.params[std::string(k.str())] = params.number(std::string(k.str()), 0.0);
    m.geometry = s.string("geometry", "");
    m.geometry_file = resolve_path(s.string("geometry_file", ""), base_dir);
    m.fcidump = resolve_path(s.string("fcidump", ""), base_dir);
    m.property_sidecar = resolve_path(s.string("property_sidecar", ""), base_dir);
    try {
      m.units = integrals::parse_length_unit(s.string("units", "angstrom"));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("molecule.units: ") + e.what());
    }
    m.charge = s.integer("charge", 0);
    m.multiplicity = s.integer("multiplicity", 1);
    m.basis = s.string("basis", "sto-3g");
    if (const auto* g = s.node("gauge_origin")) {
      if (g->is_string()) {
        const std::string v = g->as_string()->get();
        if (v == "center-of-charge") m.gauge = GaugePolicy::CenterOfCharge;
        else if (v == "origin") m.gauge = GaugePolicy::CoordinateOrigin;
        else throw ConfigError("molecule.gauge_origin: expected center-of-charge, origin or [x, y, z]");
      } else {
        const auto v = s.numbers("gauge_origin");
        if (v.size() != 3) throw ConfigError("molecule.gauge_origin needs three coordinates (bohr)");
        m.gauge = GaugePolicy::Explicit;
        m.gauge_origin = Eigen::Vector3d(v[0], v[1], v[2]);
      }
    }
    s.reject_unknown();

    const int sources = !m.builder.empty() + !m.geometry.empty() + !m.geometry_file.empty() + !m.fcidump.empty();
    if (sources != 1) throw ConfigError("molecule: give exactly one of builder, geometry, geometry_file, fcidump");
    if (!m.builder.empty()) {
      builder_defaults(m.builder);
      build_molecule(m.builder, m.params);  // rejects unknown parameters
    } else if (!m.params.empty()) {
      throw ConfigError("molecule.params needs a builder");
    }
    if (!m.geometry_file.empty()) {
      std::ifstream f(m.geometry_file);
      if (!f) throw ConfigError("cannot read geometry file " + m.geometry_file);
      std::stringstream ss;
      ss << f.rdbuf();
      m.geometry = ss.str();
    }
    if (!m.geometry.empty()) {
      try {
        integrals::Geometry::parse(m.geometry, m.units);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("molecule.geometry: ") + e.what());
      }
    }
    if (!m.property_sidecar.empty() && m.fcidump.empty())
      throw ConfigError("molecule.property_sidecar only applies to fcidump input");
    std::string basis = m.basis;
    for (auto& ch : basis) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (basis != "sto-3g") throw ConfigError("molecule.basis: only sto-3g is available");
    if (m.multiplicity != 1) throw ConfigError("molecule.multiplicity: only closed-shell singlets (1) are supported");
  }

  // adapt
  {
    Section s = top.sub("adapt");
    c.adapt.gradient_tolerance = s.number("gradient_tolerance", c.adapt.gradient_tolerance);
    c.adapt.max_iterations = s.integer("max_iterations", c.adapt.max_iterations);
    c.adapt.inner_gradient_tolerance = s.number("inner_gradient_tolerance", c.adapt.inner_gradient_tolerance);
    c.adapt.final_gradient_tolerance = s.number("final_gradient_tolerance", c.adapt.final_gradient_tolerance);
    s.reject_unknown();
    if (!(c.adapt.gradient_tolerance > 0.0)) throw ConfigError("adapt.gradient_tolerance must be positive");
    if (c.adapt.max_iterations < 1) throw ConfigError("adapt.max_iterations must be at least 1");
  }

  // methods
  {
    Section s = top.sub("methods");
    auto& m = c.methods;
    m.adapt = s.boolean("adapt", true);
    m.fci = s.boolean("fci", true);
    for (const auto& e : s.strings("eom", {"sc", "proj"})) m.eom.push_back(parse_eom_method(e));
    for (const auto& e : s.strings("qlr", {})) m.qlr.push_back(parse_qlr_variant(e));
    const auto norm = s.string("qeom_normalization", "state");
    if (norm == "state") m.qeom_normalization = eom::QeomNormalization::State;
    else if (norm == "eigenvector") m.qeom_normalization = eom::QeomNormalization::Eigenvector;
    else throw ConfigError("methods.qeom_normalization: expected state or eigenvector");
    const auto path = s.string("matrix_path", "direct");
    if (path == "direct") m.path = eom::MatrixPath::Direct;
    else if (path == "measurement") m.path = eom::MatrixPath::Measurement;
    else throw ConfigError("methods.matrix_path: expected direct or measurement");
    m.states = s.integer("states", 0);
    if (m.states < 0) throw ConfigError("methods.states must be non-negative");
    m.max_rank = s.integer("max_rank", 2);
    if (m.max_rank < 1) throw ConfigError("methods.max_rank must be at least 1");
    s.reject_unknown();
  }

  // response
  {
    Section s = top.sub("response");
    for (double nm : s.numbers("wavelengths_nm")) {
      if (!(nm > 0.0)) throw ConfigError("response.wavelengths_nm must be positive");
      c.response.omegas.push_back(units::nm_to_hartree(nm));
      c.response.from_wavelength.push_back(true);
    }
    for (double w : s.numbers("frequencies_hartree")) {
      if (!(w >= 0.0)) throw ConfigError("response.frequencies_hartree must be non-negative");
      c.response.omegas.push_back(w);
      c.response.from_wavelength.push_back(false);
    }
    c.response.rotation = s.boolean("rotation", false);
    const auto form = s.string("form", "separated");
    if (form == "separated") c.response.form = qlr::SolveForm::Separated;
    else if (form == "combined") c.response.form = qlr::SolveForm::Combined;
    else throw ConfigError("response.form: expected separated or combined");
    s.reject_unknown();
    if (!c.methods.qlr.empty() && c.response.omegas.empty())
      throw ConfigError("methods.qlr needs response.wavelengths_nm or response.frequencies_hartree");
  }

  // spectrum
  {
    Section s = top.sub("spectrum");
    auto& sp = c.spectrum;
    sp.enabled = s.table() != nullptr;
    try {
      sp.lineshape = eom::parse_lineshape(s.string("lineshape", "lorentzian"));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("spectrum.lineshape: ") + e.what());
    }
    sp.fwhm = s.number("fwhm_hartree", sp.fwhm);
    sp.points = s.integer("points", sp.points);
    const auto r = s.numbers("range_hartree");
    s.reject_unknown();
    if (!r.empty()) {
      if (r.size() != 2 || !(r[0] < r[1])) throw ConfigError("spectrum.range_hartree must be [lo, hi] with lo < hi");
      sp.range = std::make_pair(r[0], r[1]);
    }
    if (!(sp.fwhm > 0.0)) throw ConfigError("spectrum.fwhm_hartree must be positive");
    if (sp.points < 2) throw ConfigError("spectrum.points must be at least 2");
    if (sp.enabled && c.methods.eom.empty() && !c.methods.fci)
      throw ConfigError("spectrum needs methods.eom or methods.fci");
  }

  // scan
  {
    Section s = top.sub("scan");
    if (s.table()) {
      ScanSpec scan;
      scan.parameter = s.string("parameter", "");
      scan.values = grid(s, "scan");
      s.reject_unknown();
      if (c.molecule.builder.empty()) throw ConfigError("scan needs molecule.builder");
      if (!builder_defaults(c.molecule.builder).count(scan.parameter))
        throw ConfigError("scan.parameter '" + scan.parameter + "' is not a parameter of builder " +
                          c.molecule.builder);
      if (scan.values.empty()) throw ConfigError("scan grid is empty");
      c.scan = scan;
    }
  }

  // noise
  {
    Section s = top.sub("noise");
    auto& n = c.noise;
    n.enabled = s.table() != nullptr;
    n.kind = s.string("kind", n.kind);
    n.magnitudes = s.numbers("magnitudes");
    n.trials = s.integer("trials", n.trials);
    n.hermitize = s.boolean("hermitize", n.hermitize);
    if (s.has("metric")) {
      n.noisy_metric.clear();
      for (const auto& v : s.strings("metric", {})) {
        if (v == "noisy") n.noisy_metric.push_back(true);
        else if (v == "exact") n.noisy_metric.push_back(false);
        else throw ConfigError("noise.metric entries must be noisy or exact");
      }
    }
    n.noisy_z = s.boolean("noisy_z", n.noisy_z);
    n.states = s.integer("states", n.states);
    n.raw = s.boolean("raw", n.raw);
    s.reject_unknown();
    if (n.enabled) {
      if (n.kind != "parameter" && n.kind != "matrix-element")
        throw ConfigError("noise.kind: expected parameter or matrix-element");
      if (n.magnitudes.empty()) throw ConfigError("noise.magnitudes is empty");
      for (double x : n.magnitudes)
        if (!(x >= 0.0)) throw ConfigError("noise.magnitudes must be non-negative");
      if (n.trials < 1) throw ConfigError("noise.trials must be at least 1");
      if (n.noisy_metric.empty()) throw ConfigError("noise.metric is empty");
      if (n.states < 1) throw ConfigError("noise.states must be at least 1");
      if (n.kind == "parameter" && (c.methods.qlr.empty() || c.response.omegas.empty()))
        throw ConfigError("parameter noise perturbs qLR polarizabilities: set methods.qlr and a frequency");
      if (n.kind == "parameter" && !c.methods.adapt) throw ConfigError("parameter noise needs methods.adapt");
      if (n.kind == "matrix-element" && c.methods.eom.empty() && c.methods.qlr.empty())
        throw ConfigError("matrix-element noise needs methods.eom or methods.qlr");
    }
  }

  // report
  {
    Section s = top.sub("report");
    c.table1 = s.boolean("table1", false);
    s.reject_unknown();
    if (c.table1) {
      const auto& e = c.methods.eom;
      auto has = [&](eom::Method m) { return std::find(e.begin(), e.end(), m) != e.end(); };
      if (!c.methods.fci || !has(eom::Method::ScEom) || !has(eom::Method::ProjEom) || !has(eom::Method::Qeom))
        throw ConfigError("report.table1 needs methods.fci and eom = [\"qeom\", \"sc\", \"proj\"]");
    }
  }
  top.reject_unknown();

  if (!c.molecule.fcidump.empty()) {
    if (c.scan) throw ConfigError("scans need a molecule builder, not fcidump input");
    if (c.response.rotation && c.molecule.property_sidecar.empty())
      throw ConfigError("optical rotation from fcidump input needs a property sidecar");
  }
  if (c.response.rotation && c.methods.qlr.empty()) throw ConfigError("response.rotation needs methods.qlr");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto dir = fs::path(path).parent_path();
  return parse_config(ss.str(), dir.empty() ? "." : dir.string());
}

nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  json j;
  j["name"] = c.name;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  const auto& m = c.molecule;
  json mol;
  if (!m.builder.empty()) {
    auto p = builder_defaults(m.builder);
    for (const auto& [k, v] : m.params) p[k] = v;
    mol["builder"] = m.builder;
    mol["params"] = p;
  }
  if (!m.geometry.empty()) mol["geometry"] = m.geometry;
  if (!m.geometry_file.empty()) mol["geometry_file"] = m.geometry_file;
  if (!m.fcidump.empty()) mol["fcidump"] = m.fcidump;
  if (!m.property_sidecar.empty()) mol["property_sidecar"] = m.property_sidecar;
  mol["units"] = m.units == integrals::LengthUnit::Angstrom ? "angstrom" : "bohr";
  mol["charge"] = m.charge;
  mol["multiplicity"] = m.multiplicity;
  mol["basis"] = "sto-3g";
  switch (m.gauge) {
    case GaugePolicy::CenterOfCharge: mol["gauge_origin"] = "center-of-charge"; break;
    case GaugePolicy::CoordinateOrigin: mol["gauge_origin"] = "origin"; break;
    case GaugePolicy::Explicit: mol["gauge_origin"] = {m.gauge_origin.x(), m.gauge_origin.y(), m.gauge_origin.z()};
  }
  j["molecule"] = mol;
  j["adapt"] = {{"gradient_tolerance", c.adapt.gradient_tolerance},
                {"max_iterations", c.adapt.max_iterations},
                {"inner_gradient_tolerance", c.adapt.inner_gradient_tolerance},
                {"final_gradient_tolerance", c.adapt.final_gradient_tolerance}};
  json eoms = json::array(), qlrs = json::array();
  for (auto e : c.methods.eom) eoms.push_back(eom::to_string(e));
  for (auto v : c.methods.qlr) qlrs.push_back(eom::to_string(v));
  j["methods"] = {{"adapt", c.methods.adapt},
                  {"fci", c.methods.fci},
                  {"eom", eoms},
                  {"qlr", qlrs},
                  {"qeom_normalization",
                   c.methods.qeom_normalization == eom::QeomNormalization::State ? "state" : "eigenvector"},
                  {"matrix_path", c.methods.path == eom::MatrixPath::Direct ? "direct" : "measurement"},
                  {"states", c.methods.states},
                  {"max_rank", c.methods.max_rank}};
  j["response"] = {{"frequencies_hartree", c.response.omegas},
                   {"rotation", c.response.rotation},
                   {"form", c.response.form == qlr::SolveForm::Separated ? "separated" : "combined"}};
  if (c.spectrum.enabled) {
    j["spectrum"] = {{"lineshape", c.spectrum.lineshape == eom::Lineshape::Lorentzian ? "lorentzian" : "gaussian"},
                     {"fwhm_hartree", c.spectrum.fwhm},
                     {"points", c.spectrum.points}};
    if (c.spectrum.range) j["spectrum"]["range_hartree"] = {c.spectrum.range->first, c.spectrum.range->second};
  }
  if (c.scan) j["scan"] = {{"parameter", c.scan->parameter}, {"values", c.scan->values}};
  if (c.noise.enabled) {
    json metric = json::array();
    for (bool b : c.noise.noisy_metric) metric.push_back(b ? "noisy" : "exact");
    j["noise"] = {{"kind", c.noise.kind},       {"magnitudes", c.noise.magnitudes}, {"trials", c.noise.trials},
                  {"hermitize", c.noise.hermitize}, {"metric", metric},             {"noisy_z", c.noise.noisy_z},
                  {"states", c.noise.states},   {"raw", c.noise.raw}};
  }
  j["report"] = {{"table1", c.table1}};
  return j;
}

}  // namespace qlrsim::pipeline
