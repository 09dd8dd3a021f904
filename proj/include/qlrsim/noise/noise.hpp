#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qlrsim/adapt/prepared.hpp"
#include "qlrsim/qlr/response.hpp"

namespace qlrsim::noise {

/// Independent stream per (seed, trial), so results do not depend on how
/// trials are scheduled over threads.
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial);
/// Uniform in [-bound, bound] from the top 53 bits of one draw (the standard
/// distributions are not specified bit-for-bit across library vendors).
double uniform(std::mt19937_64& rng, double bound);

/// Trials run on a TBB pool; QLRSIM_THREADS caps the worker count.
int worker_count();

struct ObservableStats {
  std::string name;
  double baseline = 0.0;
  double mean_percent_error = 0.0;
  double stddev_percent_error = 0.0;  // sample standard deviation
  double mean_abs_error = 0.0;
  int failures = 0;                   // trials whose solve threw
  std::vector<double> values;         // per successful trial, in trial order
  std::vector<double> percent_errors;
};

struct NoiseReport {
  std::string kind;  // "parameter" or "matrix-element"
  double magnitude = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  bool hermitize = true;
  bool noisy_metric = true;
  std::vector<ObservableStats> observables;

  const ObservableStats& find(const std::string& name) const;
};

/// 100 |noisy - baseline| / |baseline|
double percent_error(double noisy, double baseline);

/// Mean and sample standard deviation of the percent errors and the mean
/// absolute error, with compensated summation in trial order.
void summarize(ObservableStats& s);

// ---------------------------------------------------------------- parameters

/// Observables of one ground-state circuit (e.g. isotropic alpha for each
/// qLR variant). Called concurrently; must not mutate shared state.
struct CircuitObservables {
  std::vector<std::string> names;
  std::function<std::vector<double>(const adapt::AnsatzCircuit&)> evaluate;
};

/// Each trial adds independent U(-eps, eps) noise to every ADAPT angle and
/// re-evaluates the observables; percent errors are against eps = 0.
NoiseReport perturb_ground_parameters(const adapt::PreparedSystem& system, const CircuitObservables& observables,
                                      double eps, int trials, std::uint64_t seed);

/// Isotropic alpha at `omega` from qLR(sc) and qLR(proj): names "qlr-sc",
/// "qlr-proj".
CircuitObservables polarizability_observables(const adapt::PreparedSystem& system, double omega);

// ------------------------------------------------------------ matrix elements

struct MatrixNoiseSpec {
  double bound = 0.0;
  int trials = 1000;
  std::uint64_t seed = 0;
  bool hermitize = true;      // noise on the upper triangle, mirrored
  bool noisy_metric = true;   // false: overlap/metric matrices stay exact
  bool noisy_z = true;
};

/// Uniform noise on every independent element of m (and v unless the metric
/// is exact). Real matrices receive real noise, imaginary ones imaginary
/// noise, general complex ones both.
eom::SubspaceMatrices perturb_matrices(const eom::SubspaceMatrices& mats, const MatrixNoiseSpec& spec,
                                       std::mt19937_64& rng);
Eigen::MatrixXcd perturb(const Eigen::MatrixXcd& m, double bound, bool hermitize, std::mt19937_64& rng);
Eigen::VectorXcd perturb(const Eigen::VectorXcd& v, double bound, std::mt19937_64& rng);

/// One noisy problem: baseline matrices and Z vectors plus the function that
/// turns (possibly noisy) inputs into observables.
struct SubspaceProblem {
  std::string method;  // prefix of the observable names
  eom::SubspaceMatrices matrices;
  std::vector<qlr::ZVector> z;
  std::vector<std::string> names;
  std::function<std::vector<double>(const eom::SubspaceMatrices&, const std::vector<qlr::ZVector>&)> evaluate;
};

/// Lowest `n_states` excitation energies: names "<method>/EE1", ...
SubspaceProblem excitation_problem(eom::Method method, eom::SubspaceMatrices mats, int n_states);
/// Isotropic alpha from qLR: names "<method>/alpha"; setup.matrices must be
/// sc or proj.
SubspaceProblem polarizability_problem(const qlr::ResponseSetup& setup, double omega);

NoiseReport perturb_subspace_matrices(const std::vector<SubspaceProblem>& problems, const MatrixNoiseSpec& spec);

}  // namespace qlrsim::noise
