#include "qlrsim/noise/recipes.hpp"

#include <stdexcept>

namespace qlrsim::noise {

namespace {

constexpr int kDefaultTrials = 1000;

std::vector<double> h2_bonds() {
  std::vector<double> b;
  for (int k = 0; k <= 20; ++k) b.push_back(0.5 + 0.1 * k);
  return b;
}

NoiseStudy fig5(const StudyOptions& o) {
  NoiseStudy s;
  s.description = "H2 STO-3G, uniform noise on every ADAPT angle, isotropic alpha at 589 nm";
  const auto eps = o.magnitudes.value_or(std::vector<double>{1e-5, 1e-4, 1e-3, 1e-2, 1e-1});
  const double w = units::nm_to_hartree(589.0);
  for (double r : o.bonds.value_or(h2_bonds())) {
    adapt::PreparedSystem p(integrals::molecules::h2(r));
    const auto obs = polarizability_observables(p, w);
    for (double e : eps)
      s.points.push_back({"bond_angstrom", r, perturb_ground_parameters(p, obs, e, o.trials.value_or(kDefaultTrials),
                                                                         o.seed)});
  }
  return s;
}

NoiseStudy fig5_shot(const StudyOptions& o) {
  NoiseStudy s;
  s.description = "square H4 (1.5 A) STO-3G, uniform noise on M, V and Z, isotropic alpha at 589 nm";
  adapt::PreparedSystem p(integrals::molecules::h4_square(1.5));
  const auto g = eom::make_ground_state(p.sys.h, p.sys.hf_occupation, p.circuit());
  const double w = units::nm_to_hartree(589.0);
  std::vector<SubspaceProblem> probs;
  for (auto v : {eom::Variant::SelfConsistent, eom::Variant::Projected}) {
    const auto m = eom::build_manifold(g, v);
    probs.push_back(polarizability_problem(qlr::build_response_setup(m, g, p.sys.dipole, nullptr), w));
  }
  for (double b : o.magnitudes.value_or(std::vector<double>{1e-6, 1e-5, 1e-4, 1e-3, 1e-2})) {
    MatrixNoiseSpec spec;
    spec.bound = b;
    spec.trials = o.trials.value_or(kDefaultTrials);
    spec.seed = o.seed;
    s.points.push_back({"", 0.0, perturb_subspace_matrices(probs, spec)});
  }
  return s;
}

NoiseStudy fig7(const StudyOptions& o, bool noisy_metric) {
  NoiseStudy s;
  s.description = noisy_metric ? "linear H6 (4 A) STO-3G, uniform noise on every measured matrix, three lowest EEs"
                               : "linear H6 (4 A) STO-3G, noise on M only (exact overlap matrices), three lowest EEs";
  adapt::PreparedSystem p(integrals::molecules::h_chain(6, 4.0));
  const auto g = eom::make_ground_state(p.sys.h, p.sys.hf_occupation, p.circuit());
  const auto sc = eom::build_manifold(g, eom::Variant::SelfConsistent);
  const auto pr = eom::build_manifold(g, eom::Variant::Projected);
  const auto bare = eom::build_manifold(g, eom::Variant::Bare);
  const std::vector<SubspaceProblem> probs{excitation_problem(eom::Method::ScEom, eom::build_sc_matrix(sc, g), 3),
                                           excitation_problem(eom::Method::ProjEom, eom::build_proj_matrices(pr, g), 3),
                                           excitation_problem(eom::Method::Qse, eom::build_qse_matrices(bare, g), 3)};
  for (double b : o.magnitudes.value_or(std::vector<double>{1e-6, 1e-5, 1e-4, 1e-3})) {
    MatrixNoiseSpec spec;
    spec.bound = b;
    spec.trials = o.trials.value_or(kDefaultTrials);
    spec.seed = o.seed;
    spec.noisy_metric = noisy_metric;
    s.points.push_back({"", 0.0, perturb_subspace_matrices(probs, spec)});
  }
  return s;
}

}  // namespace

std::vector<std::string> noise_recipes() { return {"fig5", "fig5-shot", "fig7a", "fig7b-exact-overlap"}; }

NoiseStudy run_noise_study(const std::string& recipe, const StudyOptions& options) {
  if (options.trials && *options.trials < 1) throw std::invalid_argument("noise study needs at least one trial");
  NoiseStudy s;
  if (recipe == "fig5")
    s = fig5(options);
  else if (recipe == "fig5-shot")
    s = fig5_shot(options);
  else if (recipe == "fig7a")
    s = fig7(options, true);
  else if (recipe == "fig7b-exact-overlap" || recipe == "fig7b")
    s = fig7(options, false);
  else
    throw std::invalid_argument("unknown noise recipe '" + recipe + "'");
  s.recipe = recipe;
  return s;
}

}  // namespace qlrsim::noise
