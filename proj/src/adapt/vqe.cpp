#include "qlrsim/adapt/vqe.hpp"

#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

namespace qlrsim::adapt {

namespace {

struct Problem {
  const qops::SectorOperator* h;
  const std::vector<const qops::SectorExponential*>* ops;
  const Eigen::VectorXcd* reference;
  std::vector<double> theta, grad;

  double eval(const gsl_vector* x, gsl_vector* g) {
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] = gsl_vector_get(x, k);
    const double e = ansatz_energy_gradient(*h, AnsatzCircuit(*ops, theta), *reference, g ? &grad : nullptr);
    if (g)
      for (std::size_t k = 0; k < theta.size(); ++k) gsl_vector_set(g, k, grad[k]);
    return e;
  }
};

double f_cb(const gsl_vector* x, void* p) { return static_cast<Problem*>(p)->eval(x, nullptr); }
void df_cb(const gsl_vector* x, void* p, gsl_vector* g) { static_cast<Problem*>(p)->eval(x, g); }
void fdf_cb(const gsl_vector* x, void* p, double* f, gsl_vector* g) { *f = static_cast<Problem*>(p)->eval(x, g); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct GslFree {
  void operator()(gsl_multimin_fdfminimizer* m) const { gsl_multimin_fdfminimizer_free(m); }
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

// Near the minimum the energy stops resolving progress long before a 1e-8
// gradient does, so the line search stalls. Newton steps driven purely by
// the analytic gradient (Hessian from its finite differences) finish the job;
// a step is kept only if it shrinks the gradient.
double newton_polish(Problem& prob, std::vector<double>& theta, double& energy, double gtol) {
  const auto n = static_cast<Eigen::Index>(theta.size());
  auto grad_at = [&](const std::vector<double>& t, double* e) {
    std::vector<double> g;
    const double en = ansatz_energy_gradient(*prob.h, AnsatzCircuit(*prob.ops, t), *prob.reference, &g);
    if (e) *e = en;
    return Eigen::Map<Eigen::VectorXd>(g.data(), n).eval();
  };
  Eigen::VectorXd g = grad_at(theta, &energy);
  for (int it = 0; it < 20 && !(g.norm() < gtol); ++it) {
    const double step = 1e-5;
    Eigen::MatrixXd hess(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      auto tp = theta, tm = theta;
      tp[k] += step;
      tm[k] -= step;
      hess.col(k) = (grad_at(tp, nullptr) - grad_at(tm, nullptr)) / (2 * step);
    }
    hess = 0.5 * (hess + hess.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseAbs().cwiseMax(1e-8);
    const Eigen::VectorXd dx = -es.eigenvectors() * ((es.eigenvectors().transpose() * g).array() / lam.array()).matrix();
    auto trial = theta;
    for (Eigen::Index k = 0; k < n; ++k) trial[k] += dx[k];
    double e_trial;
    const Eigen::VectorXd g_trial = grad_at(trial, &e_trial);
    if (!(g_trial.norm() < g.norm())) break;
    theta = trial;
    g = g_trial;
    energy = e_trial;
  }
  return g.norm();
}

struct Minimum {
  double energy;
  double gnorm;
};

Minimum minimize(const qops::SectorOperator& h, const std::vector<const qops::SectorExponential*>& ops,
                 const Eigen::VectorXcd& reference, std::vector<double>& theta, double gtol, int max_iter) {
  const std::size_t n = theta.size();
  Problem prob{&h, &ops, &reference, theta, std::vector<double>(n)};
  if (n == 0) return {prob.eval(nullptr, nullptr), 0.0};

  gsl_set_error_handler_off();
  gsl_multimin_function_fdf fn{&f_cb, &df_cb, &fdf_cb, n, &prob};
  std::unique_ptr<gsl_vector, GslFree> x(gsl_vector_alloc(n));
  for (std::size_t k = 0; k < n; ++k) gsl_vector_set(x.get(), k, theta[k]);
  std::unique_ptr<gsl_multimin_fdfminimizer, GslFree> m(
      gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n));
  gsl_multimin_fdfminimizer_set(m.get(), &fn, x.get(), 0.05, 0.1);

  int restarts = 0;
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_blas_dnrm2(m->gradient) < gtol) break;
    const int status = gsl_multimin_fdfminimizer_iterate(m.get());
    if (status == GSL_ENOPROG || status == GSL_ENOPROGJ) {
      // Line search stalled: usually the energy change has hit roundoff
      // while the gradient is still just above tolerance. Restarting drops
      // the curvature history and retries along the steepest descent.
      if (gsl_blas_dnrm2(m->gradient) < gtol) break;
      if (++restarts > 20) break;
      gsl_multimin_fdfminimizer_restart(m.get());
      continue;
    }
    if (status != GSL_SUCCESS) break;
  }
  double gnorm = gsl_blas_dnrm2(m->gradient);
  double energy = m->f;
  for (std::size_t k = 0; k < n; ++k) theta[k] = gsl_vector_get(m->x, k);
  if (!(gnorm < gtol)) gnorm = newton_polish(prob, theta, energy, gtol);
  return {energy, gnorm};
}

}  // namespace

double optimize_angles(const qops::SectorOperator& h, const std::vector<const qops::SectorExponential*>& ops,
                       const Eigen::VectorXcd& reference, std::vector<double>& theta, double gtol, int max_iter) {
  const auto m = minimize(h, ops, reference, theta, gtol, max_iter);
  if (!(m.gnorm < gtol))
    throw OptimizerError("angle optimization stopped at gradient norm " + format_double(m.gnorm));
  return m.energy;
}

GroundStateAnsatz run_adapt_vqe(const qops::SectorOperator& hamiltonian, const OperatorPool& pool,
                                const CompiledPool& compiled, const std::vector<int>& reference_occupation,
                                const AdaptOptions& options) {
  const auto& sector = compiled.sector();
  if (hamiltonian.basis() != sector) throw std::invalid_argument("Hamiltonian and pool use different sectors");
  if ((hamiltonian - hamiltonian.adjoint()).matrix().norm() > 1e-10)
    throw std::invalid_argument("Hamiltonian is not Hermitian");
  std::uint64_t bits = 0;
  for (int p : reference_occupation) bits |= std::uint64_t{1} << p;
  const Eigen::VectorXcd ref = sector->basis_vector(bits);

  GroundStateAnsatz a;
  a.n_qubits = pool.n_qubits();
  a.n_electrons = static_cast<int>(reference_occupation.size());
  a.reference_occupation = reference_occupation;
  a.reference_energy = hamiltonian.expect(ref, ref).real();
  a.energy = a.reference_energy;
  a.state = ref;

  std::vector<const qops::SectorExponential*> ops;
  std::vector<double> theta;
  double stalled_gnorm = 0.0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const auto g = pool_gradients(a.state, hamiltonian.apply(a.state), compiled);
    double norm2 = 0.0;
    std::size_t best = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      norm2 += g[k] * g[k];
      if (std::abs(g[k]) > std::abs(g[best])) best = k;  // strict: lowest index wins ties
    }
    a.gradient_norm_history.push_back(std::sqrt(norm2));
    if (std::sqrt(norm2) < options.gradient_tolerance) {
      a.converged = true;
      if (stalled_gnorm > 0.0)
        a.warning = "final angle optimization stopped at gradient norm " + format_double(stalled_gnorm);
      if (!theta.empty() && options.final_gradient_tolerance > 0.0) {
        // best effort: a few more digits on the stationarity of the final
        // ansatz, which methods relying on <[H, X]> = 0 are sensitive to
        Problem prob{&hamiltonian, &ops, &ref, theta, std::vector<double>(theta.size())};
        newton_polish(prob, theta, a.energy, options.final_gradient_tolerance);
        for (std::size_t k = 0; k < theta.size(); ++k) a.steps[k].theta = theta[k];
        a.state = AnsatzCircuit(ops, theta).apply(ref);
      }
      return a;
    }
    ops.push_back(&compiled[best]);
    theta.push_back(0.0);
    // A stalled inner solve is not fatal: the next macro-iteration starts
    // from these angles and re-optimizes all of them.
    const auto m = minimize(hamiltonian, ops, ref, theta, options.inner_gradient_tolerance,
                            options.inner_max_iterations);
    a.energy = m.energy;
    stalled_gnorm = m.gnorm < options.inner_gradient_tolerance ? 0.0 : m.gnorm;
    a.steps.push_back({static_cast<int>(best), 0.0});
    a.labels.push_back(pool[best].label());
    for (std::size_t k = 0; k < theta.size(); ++k) a.steps[k].theta = theta[k];
    a.state = AnsatzCircuit(ops, theta).apply(ref);
    a.energy_history.push_back(a.energy);
  }
  a.warning = "ADAPT-VQE reached the iteration limit before the pool gradient converged";
  return a;
}

void rebuild_state(GroundStateAnsatz& a, const CompiledPool& compiled, const qops::SectorOperator& h) {
  std::uint64_t bits = 0;
  for (int p : a.reference_occupation) bits |= std::uint64_t{1} << p;
  const Eigen::VectorXcd ref = compiled.sector()->basis_vector(bits);
  a.state = AnsatzCircuit(a, compiled).apply(ref);
  a.energy = h.expect(a.state, a.state).real();
}

}  // namespace qlrsim::adapt
