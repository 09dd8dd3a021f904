#pragma once

#include "json.hpp"

#include "qlrsim/adapt/pool.hpp"

namespace qlrsim::adapt {

struct AnsatzStep {
  int pool_index = 0;
  double theta = 0.0;
};

/// U(theta) = exp(theta_n tau_n) ... exp(theta_1 tau_1); the first selected
/// operator acts first on the reference.
struct GroundStateAnsatz {
  int n_qubits = 0;
  int n_electrons = 0;
  std::vector<int> reference_occupation;
  std::vector<AnsatzStep> steps;
  std::vector<std::string> labels;  // pool label per step

  double energy = 0.0;
  double reference_energy = 0.0;
  std::vector<double> energy_history;         // after each macro-iteration
  std::vector<double> gradient_norm_history;  // pool gradient norm before each selection
  bool converged = false;
  std::string warning;

  Eigen::VectorXcd state;  // sector amplitudes of U|ref>

  std::vector<double> angles() const;
};

/// U and U^+ on sector vectors, compiled from an ansatz and its pool.
class AnsatzCircuit {
 public:
  AnsatzCircuit() = default;  // identity
  AnsatzCircuit(const GroundStateAnsatz& ansatz, const CompiledPool& pool);
  AnsatzCircuit(std::vector<const qops::SectorExponential*> ops, std::vector<double> angles);

  std::size_t size() const { return ops_.size(); }
  Eigen::VectorXcd apply(Eigen::VectorXcd v) const;
  Eigen::VectorXcd apply_adjoint(Eigen::VectorXcd v) const;
  /// U O U^+ applied to v.
  Eigen::VectorXcd conjugate(const qops::SectorOperator& o, const Eigen::VectorXcd& v) const {
    return apply(o.apply(apply_adjoint(v)));
  }
  const std::vector<double>& angles() const { return angles_; }
  const std::vector<const qops::SectorExponential*>& ops() const { return ops_; }

 private:
  std::vector<const qops::SectorExponential*> ops_;
  std::vector<double> angles_;
};

/// Energy and analytic gradient of <ref|U^+ H U|ref> by one forward and
/// one reverse sweep.
double ansatz_energy_gradient(const qops::SectorOperator& h, const AnsatzCircuit& circuit,
                              const Eigen::VectorXcd& reference, std::vector<double>* gradient);

nlohmann::json to_json(const GroundStateAnsatz& a);
/// Rebuilds the ansatz (steps, energies, metadata). The state is recomputed
/// by the caller from the pool; `pool` maps labels back to indices.
GroundStateAnsatz ansatz_from_json(const nlohmann::json& j, const OperatorPool& pool);

}  // namespace qlrsim::adapt
