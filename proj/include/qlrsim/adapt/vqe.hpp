#pragma once

#include <stdexcept>

#include "qlrsim/adapt/ansatz.hpp"

namespace qlrsim::adapt {

class OptimizerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdaptOptions {
  double gradient_tolerance = 1e-3;  // pool gradient norm, hartree
  int max_iterations = 200;
  double inner_gradient_tolerance = 1e-8;
  int inner_max_iterations = 2000;
  double final_gradient_tolerance = 1e-12;  // Newton polish once converged; 0 disables
};

/// Minimizes <ref|U^+ H U|ref> over all angles starting from `theta` with
/// GSL's BFGS2; returns the energy and overwrites theta. Throws
/// OptimizerError if the gradient norm cannot be brought below `gtol`.
double optimize_angles(const qops::SectorOperator& h, const std::vector<const qops::SectorExponential*>& ops,
                       const Eigen::VectorXcd& reference, std::vector<double>& theta, double gtol, int max_iter);

/// Fermionic ADAPT-VQE in the sector of `reference`.
GroundStateAnsatz run_adapt_vqe(const qops::SectorOperator& hamiltonian, const OperatorPool& pool,
                                const CompiledPool& compiled, const std::vector<int>& reference_occupation,
                                const AdaptOptions& options = {});

/// Recomputes the state of a deserialized ansatz.
void rebuild_state(GroundStateAnsatz& ansatz, const CompiledPool& compiled, const qops::SectorOperator& h);

}  // namespace qlrsim::adapt
