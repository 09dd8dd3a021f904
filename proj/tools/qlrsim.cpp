// qlrsim command-line driver.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qlrsim/integrals/basis.hpp"
#include "qlrsim/integrals/integrals.hpp"
#include "qlrsim/noise/recipes.hpp"
#include "qlrsim/pipeline/recipes.hpp"
#include "qlrsim/pipeline/run.hpp"
#include "qlrsim/scf/fcidump.hpp"
#include "toml.hpp"

namespace fs = std::filesystem;
using namespace qlrsim;
using namespace qlrsim::pipeline;

namespace {

std::vector<std::string> g_argv;

std::string toml_quote(const std::string& s) {
  std::ostringstream o;
  o << toml::value<std::string>(s);
  return o.str();
}

// recipe name or path to a config file
RunConfig load_any(const std::string& what) {
  if (is_recipe(what)) return recipe_config(what);
  if (!fs::exists(what)) throw ConfigError("'" + what + "' is neither a recipe nor a config file");
  return load_config(what);
}

int report(const std::string& command, const std::string& dir, std::exception_ptr e) {
  const auto [code, kind] = classify(e);
  std::string msg;
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& x) {
    msg = x.what();
  } catch (...) {
    msg = "unknown error";
  }
  std::cerr << kind << " error: " << msg << '\n';
  // config failures still leave a manifest when the caller named a directory
  if (!dir.empty()) {
    try {
      fs::create_directories(dir);
      Manifest m(command, g_argv);
      m.fail(code, kind, msg);
      m.write(dir);
    } catch (const std::exception&) {
    }
  }
  return code;
}

int run_config(const std::string& command, const std::string& what, const std::string& out,
               void (*check)(const RunConfig&)) {
  RunConfig c;
  try {
    c = load_any(what);
    if (check) check(c);
  } catch (...) {
    return report(command, out, std::current_exception());
  }
  const std::string dir = out.empty() ? c.output_dir : out;
  Manifest m(command, g_argv);
  const int code = run(c, dir, m);
  if (code == kExitOk) std::cout << "wrote " << dir << '\n';
  return code;
}

int noise_recipe(const std::string& recipe, const std::string& out, std::optional<int> trials,
                 std::optional<std::uint64_t> seed, const std::vector<double>& magnitudes, bool raw) {
  const std::string dir = out.empty() ? recipe : out;
  Manifest m("noise", g_argv);
  noise::StudyOptions o;
  o.trials = trials;
  if (seed) o.seed = *seed;
  if (!magnitudes.empty()) o.magnitudes = magnitudes;
  m.set_config({{"recipe", recipe},
                {"trials", trials.value_or(1000)},
                {"seed", o.seed},
                {"magnitudes", magnitudes},
                {"raw", raw}});
  Artifacts a;
  int code = kExitOk;
  try {
    fs::create_directories(dir);
    const auto t0 = std::chrono::steady_clock::now();
    const auto study = noise::run_noise_study(recipe, o);
    a.timings["noise"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Table summary("noise", noise_columns());
    Table samples("noise_trials", noise_trial_columns());
    add_noise_rows(study, summary, raw ? &samples : nullptr);
    a.tables.emplace("noise", std::move(summary));
    if (raw) a.tables.emplace("noise_trials", std::move(samples));
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    code = kExitConfig;
    m.fail(code, "config", e.what());
  } catch (...) {
    const auto [k, kind] = classify(std::current_exception());
    code = k;
    try {
      throw;
    } catch (const std::exception& e) {
      std::cerr << kind << " error: " << e.what() << '\n';
      m.fail(code, kind, e.what());
    }
  }
  if (!fs::exists(dir)) return code;
  write_artifacts(a, dir, m);
  if (code == kExitOk) m.succeed();
  m.write(dir);
  if (code == kExitOk) std::cout << "wrote " << dir << '\n';
  return code;
}

bool is_noise_recipe(const std::string& name) {
  for (const auto& r : noise::noise_recipes())
    if (r == name) return true;
  return name == "fig7b";
}

scf::MOHamiltonian mo_integrals(const MoleculeSpec& m) {
  const auto g = resolve_geometry(m);
  Eigen::Vector3d origin = g.center_of_charge();
  if (m.gauge == GaugePolicy::CoordinateOrigin) origin.setZero();
  if (m.gauge == GaugePolicy::Explicit) origin = m.gauge_origin;
  const auto ints = integrals::compute_all_integrals(integrals::build_sto3g(g), g, origin);
  return scf::transform_to_mo(ints, scf::run_rhf(ints, g.total_nuclear_charge() - m.charge));
}

}  // namespace

int main(int argc, char** argv) {
  g_argv.assign(argv, argv + argc);
  CLI::App app{"qlrsim: quantum linear response and equation-of-motion simulations"};
  app.require_subcommand(1);
  app.footer("Threads: set QLRSIM_THREADS (default: all cores).");

  std::string target, out;
  int code = kExitOk;

  auto* run_cmd = app.add_subcommand("run", "Run a config file or recipe");
  run_cmd->add_option("config", target, "Config file or recipe name")->required();
  run_cmd->add_option("-o,--output", out, "Output directory (default: output_dir from the config)");
  run_cmd->callback([&] { code = run_config("run", target, out, nullptr); });

  auto* scan_cmd = app.add_subcommand("scan", "Run a scan recipe or a config with a [scan] table");
  scan_cmd->add_option("recipe", target, "Recipe name or config file")->required();
  scan_cmd->add_option("-o,--output", out, "Output directory");
  scan_cmd->callback([&] {
    code = run_config("scan", target, out, [](const RunConfig& c) {
      if (!c.scan) throw ConfigError("scan: the config has no [scan] table");
    });
  });

  auto* spec_cmd = app.add_subcommand("spectrum", "Run a spectrum recipe or a config with a [spectrum] table");
  spec_cmd->add_option("recipe", target, "Recipe name or config file")->required();
  spec_cmd->add_option("-o,--output", out, "Output directory");
  spec_cmd->callback([&] {
    code = run_config("spectrum", target, out, [](const RunConfig& c) {
      if (!c.spectrum.enabled) throw ConfigError("spectrum: the config has no [spectrum] table");
    });
  });

  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::vector<double> magnitudes;
  bool raw = false;
  auto* noise_cmd = app.add_subcommand("noise", "Noise study: fig5, fig5-shot, fig7a, fig7b-exact-overlap, "
                                                "or a config with a [noise] table");
  noise_cmd->add_option("recipe", target, "Noise recipe, run recipe or config file")->required();
  noise_cmd->add_option("-o,--output", out, "Output directory");
  noise_cmd->add_option("--trials", trials, "Trials per noise magnitude (noise recipes; default 1000)");
  noise_cmd->add_option("--seed", seed, "Base seed (noise recipes)");
  noise_cmd->add_option("--magnitudes", magnitudes, "Override the noise grid (noise recipes)");
  noise_cmd->add_flag("--raw", raw, "Also write per-trial samples (noise recipes)");
  noise_cmd->callback([&] {
    if (is_noise_recipe(target)) {
      code = noise_recipe(target, out, trials, seed, magnitudes, raw);
      return;
    }
    code = run_config("noise", target, out, [](const RunConfig& c) {
      if (!c.noise.enabled) throw ConfigError("noise: the config has no [noise] table");
    });
  });

  auto* fd = app.add_subcommand("fcidump", "Export or import FCIDUMP integrals");
  fd->require_subcommand(1);
  std::string fd_file, sidecar;
  auto* fd_export = fd->add_subcommand("export", "Write the MO integrals of a config's molecule");
  fd_export->add_option("config", target, "Config file or recipe name (its [molecule] is used)")->required();
  fd_export->add_option("-o,--output", fd_file, "FCIDUMP file")->required();
  fd_export->add_option("--sidecar", sidecar, "Also write dipole and angular-momentum integrals here");
  fd_export->callback([&] {
    try {
      const auto c = load_any(target);
      if (!c.molecule.fcidump.empty()) throw ConfigError("fcidump export needs a geometry, not fcidump input");
      const auto mo = mo_integrals(c.molecule);
      scf::write_fcidump_file(fd_file, mo.hamiltonian.spatial());
      if (!sidecar.empty()) {
        std::ofstream f(sidecar);
        if (!f) throw ConfigError("cannot write " + sidecar);
        scf::write_property_sidecar(f, mo.properties);
      }
      std::cout << "wrote " << fd_file << (sidecar.empty() ? "" : " and " + sidecar) << '\n';
    } catch (...) {
      code = report("fcidump export", "", std::current_exception());
    }
  });
  std::vector<std::string> import_eom{"sc", "proj"};
  auto* fd_import = fd->add_subcommand("import", "ADAPT-VQE, FCI and excitation energies from an FCIDUMP file");
  fd_import->add_option("fcidump", fd_file, "FCIDUMP file")->required()->check(CLI::ExistingFile);
  fd_import->add_option("--sidecar", sidecar, "Property sidecar (enables transition moments)")
      ->check(CLI::ExistingFile);
  fd_import->add_option("--eom", import_eom, "Excitation methods (qeom, sc, proj, qse)");
  fd_import->add_option("-o,--output", out, "Output directory")->required();
  fd_import->callback([&] {
    RunConfig c;
    try {
      std::string text = "name = \"fcidump-import\"\n[molecule]\nfcidump = " + toml_quote(fd_file) + "\n";
      if (!sidecar.empty()) text += "property_sidecar = " + toml_quote(sidecar) + "\n";
      text += "[methods]\neom = [";
      for (std::size_t k = 0; k < import_eom.size(); ++k) text += (k ? ", " : "") + toml_quote(import_eom[k]);
      text += "]\n";
      c = parse_config(text, fs::current_path().string());
    } catch (...) {
      code = report("fcidump import", out, std::current_exception());
      return;
    }
    Manifest m("fcidump import", g_argv);
    code = run(c, out, m);
    if (code == kExitOk) std::cout << "wrote " << out << '\n';
  });

  auto* rec = app.add_subcommand("recipes", "List or show the built-in recipes");
  rec->require_subcommand(1);
  rec->add_subcommand("list", "List recipe names")->callback([] {
    for (const auto& r : recipes()) std::cout << r.name << "\t" << r.description << '\n';
    for (const auto& r : noise::noise_recipes()) std::cout << r << "\tnoise study (qlrsim noise " << r << ")\n";
  });
  std::string show;
  auto* rec_show = rec->add_subcommand("show", "Print a recipe's config");
  rec_show->add_option("name", show)->required();
  rec_show->callback([&] {
    try {
      std::cout << find_recipe(show).toml;
    } catch (...) {
      code = report("recipes show", "", std::current_exception());
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : kExitConfig;
  }
  return code;
}
