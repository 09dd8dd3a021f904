#include "qlrsim/adapt/ansatz.hpp"

namespace qlrsim::adapt {

std::vector<double> GroundStateAnsatz::angles() const {
  std::vector<double> t;
  for (const auto& s : steps) t.push_back(s.theta);
  return t;
}

AnsatzCircuit::AnsatzCircuit(const GroundStateAnsatz& ansatz, const CompiledPool& pool) {
  for (const auto& s : ansatz.steps) {
    ops_.push_back(&pool[static_cast<std::size_t>(s.pool_index)]);
    angles_.push_back(s.theta);
  }
}

AnsatzCircuit::AnsatzCircuit(std::vector<const qops::SectorExponential*> ops, std::vector<double> angles)
    : ops_(std::move(ops)), angles_(std::move(angles)) {
  if (ops_.size() != angles_.size()) throw std::invalid_argument("one angle per ansatz operator");
}

Eigen::VectorXcd AnsatzCircuit::apply(Eigen::VectorXcd v) const {
  for (std::size_t k = 0; k < ops_.size(); ++k) v = ops_[k]->apply(v, angles_[k]);
  return v;
}

Eigen::VectorXcd AnsatzCircuit::apply_adjoint(Eigen::VectorXcd v) const {
  for (std::size_t k = ops_.size(); k-- > 0;) v = ops_[k]->apply(v, -angles_[k]);
  return v;
}

double ansatz_energy_gradient(const qops::SectorOperator& h, const AnsatzCircuit& circuit,
                              const Eigen::VectorXcd& reference, std::vector<double>* gradient) {
  Eigen::VectorXcd psi = circuit.apply(reference);
  Eigen::VectorXcd sigma = h.apply(psi);
  const double e = psi.dot(sigma).real();
  if (!gradient) return e;
  const auto& ops = circuit.ops();
  const auto& theta = circuit.angles();
  gradient->assign(ops.size(), 0.0);
  // dE/dtheta_k = 2 Re <sigma_k|tau_k psi_k> with psi_k the state right after
  // step k and sigma_k = U_{k+1}^+ ... U_n^+ H psi.
  for (std::size_t k = ops.size(); k-- > 0;) {
    (*gradient)[k] = 2.0 * sigma.dot(ops[k]->generator().apply(psi)).real();
    psi = ops[k]->apply(psi, -theta[k]);
    sigma = ops[k]->apply(sigma, -theta[k]);
  }
  return e;
}

nlohmann::json to_json(const GroundStateAnsatz& a) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t k = 0; k < a.steps.size(); ++k)
    steps.push_back({{"pool_index", a.steps[k].pool_index}, {"generator", a.labels[k]}, {"theta", a.steps[k].theta}});
  return {{"n_qubits", a.n_qubits},
          {"n_electrons", a.n_electrons},
          {"reference_occupation", a.reference_occupation},
          {"steps", steps},
          {"energy", a.energy},
          {"reference_energy", a.reference_energy},
          {"energy_history", a.energy_history},
          {"gradient_norm_history", a.gradient_norm_history},
          {"converged", a.converged},
          {"warning", a.warning}};
}

GroundStateAnsatz ansatz_from_json(const nlohmann::json& j, const OperatorPool& pool) {
  GroundStateAnsatz a;
  a.n_qubits = j.at("n_qubits").get<int>();
  a.n_electrons = j.at("n_electrons").get<int>();
  a.reference_occupation = j.at("reference_occupation").get<std::vector<int>>();
  if (a.n_qubits != pool.n_qubits()) throw std::runtime_error("ansatz and pool disagree on the qubit count");
  for (const auto& s : j.at("steps")) {
    const std::string label = s.at("generator").get<std::string>();
    const int idx = pool.find(label);
    if (idx < 0) throw std::runtime_error("ansatz generator '" + label + "' is not in the pool");
    a.steps.push_back({idx, s.at("theta").get<double>()});
    a.labels.push_back(label);
  }
  a.energy = j.at("energy").get<double>();
  a.reference_energy = j.value("reference_energy", 0.0);
  a.energy_history = j.value("energy_history", std::vector<double>{});
  a.gradient_norm_history = j.value("gradient_norm_history", std::vector<double>{});
  a.converged = j.value("converged", false);
  a.warning = j.value("warning", std::string{});
  return a;
}

}  // namespace qlrsim::adapt
