#include "qlrsim/pipeline/run.hpp"

#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "qlrsim/adapt/prepared.hpp"
#include "qlrsim/eom/properties.hpp"
#include "qlrsim/integrals/basis.hpp"
#include "qlrsim/noise/noise.hpp"
#include "qlrsim/oracle/sos.hpp"
#include "qlrsim/scf/fcidump.hpp"

namespace qlrsim::pipeline {

namespace fs = std::filesystem;
using cplx = std::complex<double>;

std::pair<int, std::string> classify(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError&) {
    return {kExitConfig, "config"};
  } catch (const integrals::GeometryError&) {
    return {kExitConfig, "config"};
  } catch (const integrals::BasisError&) {
    return {kExitConfig, "config"};
  } catch (const scf::FcidumpError&) {
    return {kExitConfig, "config"};
  } catch (const scf::ScfError&) {
    return {kExitConvergence, "convergence"};
  } catch (const adapt::OptimizerError&) {
    return {kExitConvergence, "convergence"};
  } catch (const ConvergenceError&) {
    return {kExitConvergence, "convergence"};
  } catch (const ResonanceError&) {
    return {kExitResonance, "resonance"};
  } catch (...) {
    return {kExitError, "error"};
  }
}

Table& Artifacts::table(const std::string& name) {
  auto it = tables.find(name);
  if (it == tables.end()) throw std::out_of_range("no table " + name);
  return it->second;
}

void Artifacts::merge(Artifacts&& other) {
  for (auto& [name, t] : other.tables) {
    auto it = tables.find(name);
    if (it == tables.end()) tables.emplace(name, std::move(t));
    else it->second.append(t);
  }
  for (auto& j : other.json_files) json_files.push_back(std::move(j));
  for (auto& w : other.warnings) warnings.push_back(std::move(w));
  for (const auto& [k, v] : other.timings) timings[k] += v;
}

std::vector<std::string> ground_columns() {
  return {"method", "energy_hartree", "error_vs_fci_hartree", "adapt_steps", "adapt_gradient_norm_hartree",
          "converged"};
}

std::vector<std::string> excitation_columns() {
  return {"method",
          "state",
          "label",
          "multiplicity",
          "s2",
          "excitation_energy_hartree",
          "fci_excitation_energy_hartree",
          "abs_error_hartree",
          "overlap",
          "transition_dipole_x_e_a0",
          "transition_dipole_y_e_a0",
          "transition_dipole_z_e_a0",
          "transition_dipole_norm_e_a0",
          "oscillator_strength",
          "rotatory_strength_au"};
}

std::vector<std::string> response_columns() {
  return {"method",
          "wavelength_nm",
          "omega_hartree",
          "alpha_iso_bohr3",
          "alpha_xx_bohr3",
          "alpha_yy_bohr3",
          "alpha_zz_bohr3",
          "alpha_xy_bohr3",
          "alpha_xz_bohr3",
          "alpha_yz_bohr3",
          "specific_rotation_deg_dm_g_ml",
          "sos_alpha_iso_bohr3",
          "alpha_rel_error_percent",
          "sos_specific_rotation_deg_dm_g_ml",
          "rotation_rel_error_percent",
          "condition",
          "nearest_pole_hartree",
          "flag"};
}

std::vector<std::string> spectrum_stick_columns() {
  return {"method", "state", "label", "excitation_energy_hartree", "wavelength_nm", "oscillator_strength",
          "rotatory_strength_au"};
}

std::vector<std::string> spectrum_columns() {
  return {"method", "energy_hartree", "wavelength_nm", "absorption_per_hartree", "ecd_au_per_hartree"};
}

std::vector<std::string> table1_columns() {
  return {"state", "method", "excitation_energy_hartree", "overlap", "transition_dipole_z_e_a0"};
}

std::vector<std::string> noise_columns() {
  return {"recipe",           "parameter",       "parameter_value",      "kind",
          "method",           "observable",      "magnitude",            "trials",
          "seed",             "hermitize",       "metric",               "baseline",
          "mean_percent_error", "stddev_percent_error", "mean_abs_error", "failures"};
}

std::vector<std::string> noise_trial_columns() {
  return {"recipe", "parameter", "parameter_value", "kind",   "method",       "observable",
          "magnitude", "metric", "sample",          "value", "percent_error"};
}

nlohmann::json tolerances(const RunConfig& c) {
  const scf::ScfOptions scf;
  return {{"scf", {{"gradient_tolerance", scf.gradient_tolerance},
                   {"max_iterations", scf.max_iterations},
                   {"diis_size", scf.diis_size},
                   {"auto_level_shift", scf.auto_level_shift}}},
          {"adapt", {{"gradient_tolerance", c.adapt.gradient_tolerance},
                     {"max_iterations", c.adapt.max_iterations},
                     {"inner_gradient_tolerance", c.adapt.inner_gradient_tolerance},
                     {"inner_max_iterations", c.adapt.inner_max_iterations},
                     {"final_gradient_tolerance", c.adapt.final_gradient_tolerance}}},
          {"metric_threshold", eom::kMetricThreshold},
          {"response_condition_limit", qlr::kConditionLimit},
          {"sos_resonance_guard_hartree", oracle::kResonanceGuard}};
}

namespace {

std::string noise_method(const std::string& name) { return name.substr(0, name.find('/')); }
std::string noise_observable(const std::string& name) {
  const auto k = name.find('/');
  return k == std::string::npos ? "alpha" : name.substr(k + 1);
}

void noise_report_rows(const std::string& recipe, const std::string& parameter, Cell value,
                       const noise::NoiseReport& r, Table& summary, Table* trials) {
  const bool matrix = r.kind == "matrix-element";
  const Cell metric = matrix ? Cell(std::string(r.noisy_metric ? "noisy" : "exact")) : Cell();
  const Cell herm = matrix ? Cell(r.hermitize) : Cell();
  for (const auto& o : r.observables) {
    summary.add({recipe, parameter, value, r.kind, noise_method(o.name), noise_observable(o.name), r.magnitude,
                 std::int64_t{r.trials}, std::to_string(r.seed), herm, metric, o.baseline, o.mean_percent_error,
                 o.stddev_percent_error, o.mean_abs_error, std::int64_t{o.failures}});
    if (!trials) continue;
    for (std::size_t k = 0; k < o.values.size(); ++k)
      trials->add({recipe, parameter, value, r.kind, noise_method(o.name), noise_observable(o.name), r.magnitude,
                   metric, static_cast<std::int64_t>(k), o.values[k], o.percent_errors[k]});
  }
}

// letter + running index per multiplicity: S1, S2, T1, ...
class StateLabeler {
 public:
  std::pair<std::string, std::string> operator()(double s2) {
    const std::string m = eom::multiplicity_label(s2);
    const char c = m == "singlet" ? 'S' : m == "doublet" ? 'D' : m == "triplet" ? 'T' : m == "quartet" ? 'R'
                   : m == "quintet" ? 'Q' : 'X';
    return {m, std::string(1, c) + std::to_string(++count_[c])};
  }

 private:
  std::map<char, int> count_;
};

struct StateInfo {
  double energy = 0.0;
  double s2 = 0.0;
  cplx overlap{};
  bool has_props = false;
  eom::TransitionProperties t;
};

struct Point {
  std::vector<std::string> prefix_cols;
  std::vector<Cell> prefix;
  std::string parameter;  // column name, empty for single points
  Cell value;
  int index = 0;
  bool scan = false;
};

class PointRun {
 public:
  PointRun(const RunConfig& c, const Point& pt, Artifacts& a) : c_(c), pt_(pt), a_(a) {}

  void run() {
    prepare();
    if (c_.methods.eom.size()) excitations();
    if (c_.spectrum.enabled) spectrum();
    if (c_.table1) table1();
    if (!c_.methods.qlr.empty()) response();
    if (c_.noise.enabled) noise_study();
  }

 private:
  template <class F>
  void timed(const std::string& stage, F f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    a_.timings[stage] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  Table& tab(const std::string& name, const std::vector<std::string>& body) {
    auto it = a_.tables.find(name);
    if (it != a_.tables.end()) return it->second;
    auto cols = pt_.prefix_cols;
    cols.insert(cols.end(), body.begin(), body.end());
    return a_.tables.emplace(name, Table(name, cols)).first->second;
  }
  void add(Table& t, std::vector<Cell> body) {
    auto r = pt_.prefix;
    r.insert(r.end(), body.begin(), body.end());
    t.add(std::move(r));
  }
  void warn(const std::string& w) {
    a_.warnings.push_back(pt_.scan ? pt_.parameter + "=" + format_cell(pt_.value) + ": " + w : w);
  }

  void prepare() {
    adapt::PrepareOptions po;
    po.adapt = c_.adapt;
    po.charge = c_.molecule.charge;
    po.run_adapt = false;
    const auto& m = c_.molecule;
    timed("scf", [&] {
      if (!m.fcidump.empty()) {
        const auto mo = scf::read_fcidump_file(m.fcidump);
        if (mo.ms2 != 0) throw ConfigError("fcidump: only MS2 = 0 closed-shell input is supported");
        scf::MOHamiltonian mh{scf::SpinOrbitalHamiltonian(mo), {}};
        if (!m.property_sidecar.empty()) {
          std::ifstream f(m.property_sidecar);
          if (!f) throw ConfigError("cannot read property sidecar " + m.property_sidecar);
          mh.properties = scf::read_property_sidecar(f);
          if (mh.properties.n_orbitals() != mo.n_orbitals())
            throw ConfigError("property sidecar and fcidump disagree on the orbital count");
        }
        has_props_ = !m.property_sidecar.empty();
        p_ = std::make_unique<adapt::PreparedSystem>(mh, po);
      } else {
        const auto g = resolve_geometry(m);
        if (m.gauge == GaugePolicy::CoordinateOrigin) po.gauge_origin = Eigen::Vector3d::Zero();
        if (m.gauge == GaugePolicy::Explicit) po.gauge_origin = m.gauge_origin;
        p_ = std::make_unique<adapt::PreparedSystem>(g, po);
        has_props_ = true;
      }
    });
    if ((c_.spectrum.enabled || !c_.methods.qlr.empty()) && !has_props_)
      throw ConfigError("spectra and responses need property integrals (fcidump input without a sidecar)");

    if (c_.methods.adapt) {
      timed("adapt", [&] { p_->optimize(c_.adapt); });
      if (!p_->ansatz.warning.empty()) warn(p_->ansatz.warning);
      a_.json_files.emplace_back(pt_.scan ? "ansatz/point_" + pad(pt_.index) + ".json" : "ansatz.json",
                                 adapt::to_json(p_->ansatz));
    }
    if (c_.methods.fci) timed("fci", [&] { fci_ = oracle::fci_solve(p_->sys.h, p_->sys.n_electrons); });

    auto& t = tab("ground", ground_columns());
    const Cell e_fci = fci_ ? Cell(fci_->ground_energy()) : Cell();
    auto err = [&](double e) { return fci_ ? Cell(e - fci_->ground_energy()) : Cell(); };
    add(t, {"rhf", p_->e_rhf, err(p_->e_rhf), Cell(), Cell(), Cell()});
    if (c_.methods.adapt) {
      const auto& an = p_->ansatz;
      add(t, {"adapt-vqe", an.energy, err(an.energy), static_cast<std::int64_t>(an.steps.size()),
              an.gradient_norm_history.empty() ? Cell() : Cell(an.gradient_norm_history.back()), an.converged});
      if (!an.converged) throw ConvergenceError("ADAPT-VQE did not converge: " + an.warning);
    }
    if (fci_) add(t, {"fci", fci_->ground_energy(), 0.0, Cell(), Cell(), Cell()});

    ground_ = eom::make_ground_state(p_->sys.h, p_->sys.hf_occupation, p_->circuit());
  }

  static std::string pad(int k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", k);
    return buf;
  }

  const eom::ExcitationManifold& manifold(eom::Variant v) {
    auto it = manifolds_.find(v);
    if (it == manifolds_.end())
      timed("manifold", [&] {
        it = manifolds_.emplace(v, eom::build_manifold(ground_, v, c_.methods.max_rank)).first;
      });
    return it->second;
  }

  const eom::SubspaceMatrices& matrices(eom::Method m) {
    auto it = mats_.find(m);
    if (it != mats_.end()) return it->second;
    eom::SubspaceMatrices s;
    timed("matrices", [&] {
      switch (m) {
        case eom::Method::Qeom: s = eom::build_qeom_matrices(manifold(eom::Variant::Bare), ground_); break;
        case eom::Method::ScEom:
          s = eom::build_sc_matrix(manifold(eom::Variant::SelfConsistent), ground_, c_.methods.path);
          break;
        case eom::Method::ProjEom: s = eom::build_proj_matrices(manifold(eom::Variant::Projected), ground_); break;
        case eom::Method::Qse: s = eom::build_qse_matrices(manifold(eom::Variant::Bare), ground_); break;
      }
    });
    return mats_.emplace(m, std::move(s)).first->second;
  }

  std::size_t limit(std::size_t n) const {
    return c_.methods.states > 0 ? std::min(n, static_cast<std::size_t>(c_.methods.states)) : n;
  }

  void excitations() {
    std::size_t most = 0;
    for (auto m : c_.methods.eom) {
      const auto& mats = matrices(m);
      eom::ExcitedStateSet set;
      timed("eom", [&] {
        switch (m) {
          case eom::Method::Qeom:
            set = eom::solve_qeom(mats, &manifold(eom::Variant::Bare), &ground_, c_.methods.qeom_normalization);
            break;
          case eom::Method::ScEom: set = eom::solve_sc(mats, &manifold(eom::Variant::SelfConsistent), &ground_); break;
          case eom::Method::ProjEom: set = eom::solve_proj(mats, &manifold(eom::Variant::Projected), &ground_); break;
          case eom::Method::Qse: set = eom::solve_qse(mats, &manifold(eom::Variant::Bare), &ground_); break;
        }
      });
      for (const auto& w : set.warnings) warn(eom::to_string(m) + ": " + w);
      if (set.dropped_directions)
        warn(eom::to_string(m) + ": " + std::to_string(set.dropped_directions) + " metric directions dropped");
      std::vector<StateInfo> states;
      const std::size_t n = limit(set.states.size());
      set.states.resize(n);
      std::vector<eom::TransitionProperties> props;
      if (has_props_)
        timed("properties", [&] { props = eom::transition_properties(set, ground_, p_->sys.dipole, &p_->sys.magnetic); });
      for (std::size_t k = 0; k < n; ++k) {
        StateInfo s;
        s.energy = set.states[k].energy;
        s.s2 = set.states[k].s2;
        s.overlap = set.states[k].overlap;
        if (has_props_) {
          s.has_props = true;
          s.t = props[k];
        }
        states.push_back(s);
      }
      most = std::max(most, n);
      sets_.emplace_back(eom::to_string(m), std::move(states));
    }
    if (fci_) {
      std::vector<StateInfo> states;
      const std::size_t n = std::min(fci_->states.size() - 1, most);
      timed("properties", [&] {
        for (std::size_t k = 1; k <= n; ++k) {
          StateInfo s;
          const auto& st = fci_->states[k];
          s.energy = st.energy - fci_->ground_energy();
          s.s2 = st.s2;
          s.overlap = fci_->states[0].vector.dot(st.vector);
          if (has_props_) {
            s.has_props = true;
            s.t = eom::transition_properties(s.energy, fci_->states[0].vector, st.vector, p_->sys.dipole,
                                             &p_->sys.magnetic);
          }
          states.push_back(s);
        }
      });
      sets_.insert(sets_.begin(), {"FCI", std::move(states)});
    }

    auto& t = tab("excitations", excitation_columns());
    const std::vector<StateInfo>* ref = fci_ ? &sets_.front().second : nullptr;
    for (const auto& [method, states] : sets_) {
      StateLabeler label;
      for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& s = states[k];
        const auto [mult, lab] = label(s.s2);
        const bool has_ref = ref && k < ref->size();
        std::vector<Cell> r{method, static_cast<std::int64_t>(k + 1), lab, mult, s.s2, s.energy,
                            has_ref ? Cell((*ref)[k].energy) : Cell(),
                            has_ref ? Cell(std::abs(s.energy - (*ref)[k].energy)) : Cell(), s.overlap.real()};
        if (s.has_props) {
          for (int i = 0; i < 3; ++i) r.push_back(s.t.dipole[i].real());
          r.push_back(s.t.dipole.norm());
          r.push_back(s.t.oscillator_strength);
          r.push_back(s.t.rotatory_strength);
        } else {
          r.insert(r.end(), 6, Cell());
        }
        add(t, std::move(r));
      }
    }
  }

  void spectrum() {
    if (sets_.empty()) excitations_for_spectrum();
    auto& sticks = tab("spectrum_sticks", spectrum_stick_columns());
    double lo = 1e300, hi = -1e300;
    for (const auto& [method, states] : sets_) {
      StateLabeler label;
      for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& s = states[k];
        add(sticks, {method, static_cast<std::int64_t>(k + 1), label(s.s2).second, s.energy,
                     s.energy > 0 ? Cell(units::hartree_to_nm(s.energy)) : Cell(), s.t.oscillator_strength,
                     s.t.rotatory_strength});
        lo = std::min(lo, s.energy);
        hi = std::max(hi, s.energy);
      }
    }
    if (sets_.empty() || lo > hi) return;
    const double w = c_.spectrum.fwhm;
    const auto range = c_.spectrum.range.value_or(std::make_pair(std::max(lo - 10 * w, 0.5 * w), hi + 10 * w));
    const auto grid = eom::uniform_grid(range.first, range.second, static_cast<std::size_t>(c_.spectrum.points));
    auto& t = tab("spectrum", spectrum_columns());
    for (const auto& [method, states] : sets_) {
      std::vector<eom::Stick> os, rs;
      for (const auto& s : states) {
        os.push_back({s.energy, s.t.oscillator_strength});
        rs.push_back({s.energy, s.t.rotatory_strength});
      }
      const auto ab = eom::broaden_spectrum(os, c_.spectrum.lineshape, w, grid);
      const auto cd = eom::broaden_spectrum(rs, c_.spectrum.lineshape, w, grid);
      for (std::size_t k = 0; k < grid.size(); ++k)
        add(t, {method, grid[k], grid[k] > 0 ? Cell(units::hartree_to_nm(grid[k])) : Cell(), ab[k], cd[k]});
    }
  }

  // spectrum requested without eom methods: FCI sticks only
  void excitations_for_spectrum() {
    if (!fci_) return;
    std::vector<StateInfo> states;
    for (std::size_t k = 1; k < fci_->states.size(); ++k) {
      StateInfo s;
      s.energy = fci_->states[k].energy - fci_->ground_energy();
      s.s2 = fci_->states[k].s2;
      s.has_props = true;
      s.t = eom::transition_properties(s.energy, fci_->states[0].vector, fci_->states[k].vector, p_->sys.dipole,
                                       &p_->sys.magnetic);
      states.push_back(s);
    }
    sets_.emplace_back("FCI", std::move(states));
  }

  void table1() {
    auto& t = tab("table1", table1_columns());
    const std::vector<std::string> order{"FCI", "q-sc-EOM", "q-proj-EOM", "qEOM"};
    const std::vector<StateInfo>* ref = nullptr;
    for (const auto& [m, s] : sets_)
      if (m == "FCI") ref = &s;
    if (!ref) throw ConfigError("report.table1 needs methods.fci");
    StateLabeler label;
    for (std::size_t k = 0; k < std::min<std::size_t>(3, ref->size()); ++k) {
      const auto lab = label((*ref)[k].s2).second;
      for (const auto& name : order)
        for (const auto& [m, states] : sets_)
          if (m == name && k < states.size())
            add(t, {lab, m, states[k].energy, states[k].overlap.real(),
                    states[k].has_props ? Cell(states[k].t.dipole[2].real()) : Cell()});
    }
  }

  void response() {
    const bool rot = c_.response.rotation;
    auto& t = tab("response", response_columns());
    const double mass = p_->molar_mass;
    if (rot && mass <= 0.0) warn("no molar mass (fcidump input): specific rotation not reported");
    for (auto v : c_.methods.qlr) {
      const auto& m = manifold(v);
      qlr::ResponseSetup setup;
      timed("response-setup", [&] {
        setup = qlr::build_response_setup(m, ground_, p_->sys.dipole, rot ? &p_->sys.magnetic : nullptr,
                                          c_.methods.path);
      });
      setups_.emplace(v, setup);
      const qlr::ResponseSolver solver(setup.matrices);
      if (solver.dropped_directions())
        warn("qlr-" + eom::to_string(v) + ": " + std::to_string(solver.dropped_directions()) +
             " metric directions dropped");
      for (double w : c_.response.omegas) {
        const std::string method = "qlr-" + eom::to_string(v);
        try {
          qlr::ResponseResult r;
          timed("response", [&] { r = qlr::compute_response(solver, setup, w, c_.response.form, mass); });
          for (const auto& n : r.diagnostics.notices) warn(method + ": " + n);
          response_row(t, method, w, &r.tensors, r.specific_rotation, r.diagnostics.condition, Cell(),
                       r.diagnostics.fallback ? "fallback" : "ok");
        } catch (const ResonanceError& e) {
          if (!pt_.scan) throw;
          response_row(t, method, w, nullptr, std::nullopt, Cell(), e.pole(), "resonance");
        }
      }
    }
    if (!fci_) return;
    for (double w : c_.response.omegas) {
      try {
        ResponseTensors tens;
        timed("sos", [&] { tens = oracle::sos_tensors(*fci_, p_->sys.dipole, rot ? &p_->sys.magnetic : nullptr, w); });
        std::optional<double> rotation;
        if (rot && w > 0.0 && mass > 0.0) rotation = tens.specific_rotation(mass);
        response_row(t, "sos-fci", w, &tens, rotation, Cell(), Cell(), "ok");
      } catch (const ResonanceError& e) {
        if (!pt_.scan) throw;
        response_row(t, "sos-fci", w, nullptr, std::nullopt, Cell(), e.pole(), "resonance");
      }
    }
    fill_reference_columns(t);
  }

  void response_row(Table& t, const std::string& method, double w, const ResponseTensors* tens,
                    std::optional<double> rotation, Cell condition, Cell pole, const std::string& flag) {
    std::vector<Cell> r{method, w > 0 ? Cell(units::hartree_to_nm(w)) : Cell(), w};
    if (tens) {
      const auto a = tens->polarizability();
      r.insert(r.end(), {tens->isotropic_polarizability(), a(0, 0), a(1, 1), a(2, 2), a(0, 1), a(0, 2), a(1, 2)});
    } else {
      r.insert(r.end(), 7, Cell());
    }
    r.push_back(rotation ? Cell(*rotation) : Cell());
    r.insert(r.end(), 4, Cell());  // reference columns, filled once SoS is known
    r.push_back(condition);
    r.push_back(pole);
    r.push_back(flag);
    add(t, std::move(r));
    response_rows_.push_back(t.size() - 1);
  }

  // qLR rows get the SoS value and signed relative error at the same frequency
  void fill_reference_columns(Table& t) {
    const auto col = [&](const char* name) { return t.column(name); };
    const std::size_t c_method = col("method"), c_w = col("omega_hartree"), c_a = col("alpha_iso_bohr3"),
                      c_rot = col("specific_rotation_deg_dm_g_ml"), c_sa = col("sos_alpha_iso_bohr3"),
                      c_ae = col("alpha_rel_error_percent"), c_sr = col("sos_specific_rotation_deg_dm_g_ml"),
                      c_re = col("rotation_rel_error_percent");
    auto& rows = const_cast<std::vector<std::vector<Cell>>&>(t.rows());
    for (std::size_t i : response_rows_) {
      auto& r = rows[i];
      if (std::get<std::string>(r[c_method]) == "sos-fci") continue;
      for (std::size_t j : response_rows_) {
        const auto& s = rows[j];
        if (std::get<std::string>(s[c_method]) != "sos-fci" ||
            std::get<double>(s[c_w]) != std::get<double>(r[c_w]))
          continue;
        r[c_sa] = s[c_a];
        r[c_sr] = s[c_rot];
        if (std::holds_alternative<double>(r[c_a]) && std::holds_alternative<double>(s[c_a]))
          r[c_ae] = 100.0 * (std::get<double>(r[c_a]) - std::get<double>(s[c_a])) / std::get<double>(s[c_a]);
        if (std::holds_alternative<double>(r[c_rot]) && std::holds_alternative<double>(s[c_rot]) &&
            std::get<double>(s[c_rot]) != 0.0)
          r[c_re] = 100.0 * (std::get<double>(r[c_rot]) - std::get<double>(s[c_rot])) / std::get<double>(s[c_rot]);
      }
    }
  }

  void noise_study() {
    const auto& n = c_.noise;
    auto& summary = tab_plain("noise", noise_columns());
    Table* trials = n.raw ? &tab_plain("noise_trials", noise_trial_columns()) : nullptr;
    const Cell value = pt_.scan ? pt_.value : Cell();
    timed("noise", [&] {
      if (n.kind == "parameter") {
        const auto obs = noise::polarizability_observables(*p_, c_.response.omegas.front());
        for (double eps : n.magnitudes)
          noise_report_rows(c_.name, pt_.parameter, value,
                            noise::perturb_ground_parameters(*p_, obs, eps, n.trials, c_.seed), summary, trials);
        return;
      }
      std::vector<noise::SubspaceProblem> problems;
      for (auto m : c_.methods.eom) {
        if (m == eom::Method::Qeom) warn("matrix-element noise on qEOM perturbs M and V only, not Q and W");
        problems.push_back(noise::excitation_problem(m, matrices(m), n.states));
      }
      for (auto v : c_.methods.qlr) {
        auto it = setups_.find(v);
        if (it == setups_.end())
          it = setups_.emplace(v, qlr::build_response_setup(manifold(v), ground_, p_->sys.dipole, nullptr)).first;
        problems.push_back(noise::polarizability_problem(it->second, c_.response.omegas.front()));
      }
      for (bool metric : n.noisy_metric)
        for (double b : n.magnitudes) {
          noise::MatrixNoiseSpec spec;
          spec.bound = b;
          spec.trials = n.trials;
          spec.seed = c_.seed;
          spec.hermitize = n.hermitize;
          spec.noisy_metric = metric;
          spec.noisy_z = n.noisy_z;
          noise_report_rows(c_.name, pt_.parameter, value, noise::perturb_subspace_matrices(problems, spec), summary,
                            trials);
        }
    });
  }

  // noise tables carry the point in their own parameter columns
  Table& tab_plain(const std::string& name, const std::vector<std::string>& cols) {
    auto it = a_.tables.find(name);
    if (it != a_.tables.end()) return it->second;
    return a_.tables.emplace(name, Table(name, cols)).first->second;
  }

  const RunConfig& c_;
  const Point& pt_;
  Artifacts& a_;
  std::unique_ptr<adapt::PreparedSystem> p_;
  bool has_props_ = false;
  std::optional<oracle::FciSpectrum> fci_;
  eom::GroundState ground_;
  std::map<eom::Variant, eom::ExcitationManifold> manifolds_;
  std::map<eom::Method, eom::SubspaceMatrices> mats_;
  std::map<eom::Variant, qlr::ResponseSetup> setups_;
  std::vector<std::pair<std::string, std::vector<StateInfo>>> sets_;
  std::vector<std::size_t> response_rows_;
};

}  // namespace

void compute(const RunConfig& c, Artifacts& out) {
  if (!c.scan) {
    Point pt;
    PointRun(c, pt, out).run();
    return;
  }
  const auto& s = *c.scan;
  const int n = static_cast<int>(s.values.size());
  std::vector<Artifacts> parts(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::vector<Point> points(static_cast<std::size_t>(n));
  std::vector<RunConfig> configs(static_cast<std::size_t>(n), c);
  const std::string col = parameter_column(s.parameter);
  for (int k = 0; k < n; ++k) {
    auto& pt = points[static_cast<std::size_t>(k)];
    pt.prefix_cols = {col};
    pt.prefix = {s.values[static_cast<std::size_t>(k)]};
    pt.parameter = col;
    pt.value = s.values[static_cast<std::size_t>(k)];
    pt.index = k;
    pt.scan = true;
    configs[static_cast<std::size_t>(k)].molecule.params[s.parameter] = s.values[static_cast<std::size_t>(k)];
  }
  tbb::global_control limit(tbb::global_control::max_allowed_parallelism,
                            static_cast<std::size_t>(noise::worker_count()));
  tbb::parallel_for(0, n, [&](int k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      PointRun(configs[i], points[i], parts[i]).run();
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  // grid order regardless of completion order; the first failure (in grid
  // order) is reported after everything computed has been gathered
  std::exception_ptr first;
  for (int k = 0; k < n; ++k) {
    out.merge(std::move(parts[static_cast<std::size_t>(k)]));
    if (!first && errors[static_cast<std::size_t>(k)]) first = errors[static_cast<std::size_t>(k)];
  }
  if (first) std::rethrow_exception(first);
}

void add_noise_rows(const noise::NoiseStudy& study, Table& summary, Table* trials) {
  for (const auto& p : study.points)
    noise_report_rows(study.recipe, p.parameter, p.parameter.empty() ? Cell() : Cell(p.value), p.report, summary,
                      trials);
}

void write_artifacts(const Artifacts& a, const std::string& dir, Manifest& manifest) {
  for (const auto& [name, t] : a.tables) {
    t.write_file((fs::path(dir) / (name + ".csv")).string());
    manifest.add_file(name + ".csv");
  }
  for (const auto& [path, j] : a.json_files) {
    const auto full = fs::path(dir) / path;
    fs::create_directories(full.parent_path());
    std::ofstream f(full);
    f << j.dump(2) << '\n';
    manifest.add_file(path);
  }
  for (const auto& w : a.warnings) manifest.add_warning(w);
  for (const auto& [k, v] : a.timings) manifest.add_timing(k, v);
}

int run(const RunConfig& c, const std::string& dir, Manifest& manifest) {
  manifest.set_config(to_json(c));
  manifest.set_tolerances(tolerances(c));
  try {
    fs::create_directories(dir);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot create output directory " << dir << ": " << e.what() << '\n';
    return kExitConfig;
  }
  Artifacts a;
  int code = kExitOk;
  try {
    compute(c, a);
  } catch (...) {
    const auto [k, kind] = classify(std::current_exception());
    std::string msg;
    try {
      throw;
    } catch (const std::exception& e) {
      msg = e.what();
    } catch (...) {
      msg = "unknown error";
    }
    code = k;
    manifest.fail(code, kind, msg);
    std::cerr << kind << " error: " << msg << '\n';
  }
  write_artifacts(a, dir, manifest);
  if (code == kExitOk) manifest.succeed();
  manifest.write(dir);
  return code;
}

}  // namespace qlrsim::pipeline
