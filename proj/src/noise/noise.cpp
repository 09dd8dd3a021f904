#include "qlrsim/noise/noise.hpp"

#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <thread>

namespace qlrsim::noise {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cplx = std::complex<double>;

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double bound) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  return bound * (2.0 * u - 1.0);
}

int worker_count() {
  if (const char* env = std::getenv("QLRSIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

const ObservableStats& NoiseReport::find(const std::string& name) const {
  for (const auto& o : observables)
    if (o.name == name) return o;
  throw std::out_of_range("no observable named " + name);
}

double percent_error(double noisy, double baseline) { return 100.0 * std::abs(noisy - baseline) / std::abs(baseline); }

void summarize(ObservableStats& s) {
  // Neumaier summation, in trial order
  auto sum = [](const std::vector<double>& v, auto f) {
    double total = 0.0, comp = 0.0;
    for (double x : v) {
      const double y = f(x), t = total + y;
      comp += std::abs(total) >= std::abs(y) ? (total - t) + y : (y - t) + total;
      total = t;
    }
    return total + comp;
  };
  const auto n = s.percent_errors.size();
  s.mean_percent_error = n ? sum(s.percent_errors, [](double x) { return x; }) / static_cast<double>(n) : 0.0;
  const double base = s.baseline;
  s.mean_abs_error = n ? sum(s.values, [base](double x) { return std::abs(x - base); }) / static_cast<double>(n) : 0.0;
  const double mean = s.mean_percent_error;
  s.stddev_percent_error =
      n > 1 ? std::sqrt(sum(s.percent_errors, [mean](double x) { return (x - mean) * (x - mean); }) /
                        static_cast<double>(n - 1))
            : 0.0;
}

namespace {

// Per-trial outputs gathered into stats in trial order.
void collect(NoiseReport& report, const std::vector<std::string>& names, const std::vector<double>& baseline,
             const std::vector<std::optional<std::vector<double>>>& trials) {
  for (std::size_t k = 0; k < names.size(); ++k) {
    ObservableStats s;
    s.name = names[k];
    s.baseline = baseline[k];
    for (const auto& t : trials) {
      if (!t) {
        ++s.failures;
        continue;
      }
      s.values.push_back((*t)[k]);
      s.percent_errors.push_back(percent_error((*t)[k], baseline[k]));
    }
    summarize(s);
    report.observables.push_back(std::move(s));
  }
}

template <class F>
void for_each_trial(int trials, F f) {
  tbb::global_control limit(tbb::global_control::max_allowed_parallelism, static_cast<std::size_t>(worker_count()));
  tbb::parallel_for(0, trials, [&](int t) { f(t); });
}

}  // namespace

NoiseReport perturb_ground_parameters(const adapt::PreparedSystem& system, const CircuitObservables& observables,
                                      double eps, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("noise study needs at least one trial");
  if (!(eps >= 0.0)) throw std::invalid_argument("noise magnitude must be non-negative");
  const auto base = system.circuit();
  const std::vector<double> theta0 = base.angles();
  const std::vector<double> baseline = observables.evaluate(base);

  std::vector<std::optional<std::vector<double>>> out(static_cast<std::size_t>(trials));
  for_each_trial(trials, [&](int t) {
    auto rng = trial_engine(seed, static_cast<std::uint64_t>(t));
    auto theta = theta0;
    for (double& x : theta) x += uniform(rng, eps);
    try {
      out[static_cast<std::size_t>(t)] = observables.evaluate(adapt::AnsatzCircuit(base.ops(), theta));
    } catch (const std::exception&) {
    }
  });

  NoiseReport r;
  r.kind = "parameter";
  r.magnitude = eps;
  r.trials = trials;
  r.seed = seed;
  collect(r, observables.names, baseline, out);
  return r;
}

CircuitObservables polarizability_observables(const adapt::PreparedSystem& system, double omega) {
  CircuitObservables o;
  o.names = {"qlr-sc", "qlr-proj"};
  o.evaluate = [&system, omega](const adapt::AnsatzCircuit& circuit) {
    const auto ground = eom::make_ground_state(system.sys.h, system.sys.hf_occupation, circuit);
    std::vector<double> v;
    for (auto variant : {eom::Variant::SelfConsistent, eom::Variant::Projected}) {
      const auto manifold = eom::build_manifold(ground, variant);
      const auto setup = qlr::build_response_setup(manifold, ground, system.sys.dipole, nullptr);
      v.push_back(qlr::compute_response(qlr::ResponseSolver(setup.matrices), setup, omega).isotropic_polarizability);
    }
    return v;
  };
  return o;
}

MatrixXcd perturb(const MatrixXcd& m, double bound, bool hermitize, std::mt19937_64& rng) {
  const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
  const bool has_re = m.real().cwiseAbs().maxCoeff() > 1e-14 * scale;
  const bool has_im = m.imag().cwiseAbs().maxCoeff() > 1e-14 * scale;
  const bool re = has_re || !has_im, im = has_im;
  auto draw = [&](bool diagonal) {
    const double a = re ? uniform(rng, bound) : 0.0;
    // Hermitian diagonals stay real
    const double b = im && !diagonal ? uniform(rng, bound) : 0.0;
    return cplx(a, b);
  };
  MatrixXcd out = m;
  if (hermitize) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = i; j < m.cols(); ++j) {
        const cplx n = draw(i == j);
        out(i, j) += n;
        if (i != j) out(j, i) += std::conj(n);
      }
  } else {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) += draw(false);
  }
  return out;
}

VectorXcd perturb(const VectorXcd& v, double bound, std::mt19937_64& rng) {
  const double scale = std::max(1e-300, v.cwiseAbs().maxCoeff());
  const bool has_re = v.real().cwiseAbs().maxCoeff() > 1e-14 * scale;
  const bool has_im = v.imag().cwiseAbs().maxCoeff() > 1e-14 * scale;
  VectorXcd out = v;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double a = has_re || !has_im ? uniform(rng, bound) : 0.0;
    const double b = has_im ? uniform(rng, bound) : 0.0;
    out[k] += cplx(a, b);
  }
  return out;
}

eom::SubspaceMatrices perturb_matrices(const eom::SubspaceMatrices& mats, const MatrixNoiseSpec& spec,
                                       std::mt19937_64& rng) {
  eom::SubspaceMatrices out = mats;
  out.m = perturb(mats.m, spec.bound, spec.hermitize, rng);
  if (spec.noisy_metric && mats.v.size()) out.v = perturb(mats.v, spec.bound, spec.hermitize, rng);
  return out;
}

SubspaceProblem excitation_problem(eom::Method method, eom::SubspaceMatrices mats, int n_states) {
  SubspaceProblem p;
  p.method = eom::to_string(method);
  p.matrices = std::move(mats);
  for (int k = 1; k <= n_states; ++k) p.names.push_back(p.method + "/EE" + std::to_string(k));
  p.evaluate = [method, n_states](const eom::SubspaceMatrices& m, const std::vector<qlr::ZVector>&) {
    eom::ExcitedStateSet set;
    switch (method) {
      case eom::Method::ScEom: set = eom::solve_sc(m); break;
      case eom::Method::ProjEom: set = eom::solve_proj(m); break;
      case eom::Method::Qse: set = eom::solve_qse(m); break;
      case eom::Method::Qeom: set = eom::solve_qeom(m); break;
    }
    auto e = set.energies();
    if (static_cast<int>(e.size()) < n_states) throw std::runtime_error("too few excited states");
    e.resize(static_cast<std::size_t>(n_states));
    return e;
  };
  return p;
}

SubspaceProblem polarizability_problem(const qlr::ResponseSetup& setup, double omega) {
  SubspaceProblem p;
  p.method = setup.variant == eom::Variant::SelfConsistent ? "qlr-sc" : "qlr-proj";
  p.matrices = setup.matrices;
  p.z.assign(setup.dipole.begin(), setup.dipole.end());
  p.names = {p.method + "/alpha"};
  p.evaluate = [omega](const eom::SubspaceMatrices& m, const std::vector<qlr::ZVector>& z) {
    qlr::ResponseSetup s;
    s.matrices = m;
    for (int i = 0; i < 3; ++i) s.dipole[i] = z[static_cast<std::size_t>(i)];
    return std::vector<double>{
        qlr::compute_response(qlr::ResponseSolver(m), s, omega).isotropic_polarizability};
  };
  return p;
}

NoiseReport perturb_subspace_matrices(const std::vector<SubspaceProblem>& problems, const MatrixNoiseSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("noise study needs at least one trial");
  if (!(spec.bound >= 0.0)) throw std::invalid_argument("noise bound must be non-negative");
  NoiseReport r;
  r.kind = "matrix-element";
  r.magnitude = spec.bound;
  r.trials = spec.trials;
  r.seed = spec.seed;
  r.hermitize = spec.hermitize;
  r.noisy_metric = spec.noisy_metric;
  for (std::size_t p = 0; p < problems.size(); ++p) {
    const auto& prob = problems[p];
    const auto baseline = prob.evaluate(prob.matrices, prob.z);
    std::vector<std::optional<std::vector<double>>> out(static_cast<std::size_t>(spec.trials));
    for_each_trial(spec.trials, [&](int t) {
      // streams differ per problem so adding a method leaves the others' draws alone
      auto rng = trial_engine(spec.seed + 0x9e3779b97f4a7c15ULL * (p + 1), static_cast<std::uint64_t>(t));
      try {
        const auto m = perturb_matrices(prob.matrices, spec, rng);
        auto z = prob.z;
        if (spec.noisy_z)
          for (auto& zv : z) zv.values = perturb(zv.values, spec.bound, rng);
        out[static_cast<std::size_t>(t)] = prob.evaluate(m, z);
      } catch (const std::exception&) {
      }
    });
    collect(r, prob.names, baseline, out);
  }
  return r;
}

}  // namespace qlrsim::noise
