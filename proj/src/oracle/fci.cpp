#include "qlrsim/oracle/fci.hpp"

namespace qlrsim::oracle {

std::vector<double> FciSpectrum::excitation_energies() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < states.size(); ++k) out.push_back(states[k].energy - states[0].energy);
  return out;
}

FciSpectrum fci_solve(const qops::PauliSum& hamiltonian, int n_electrons, int two_sz) {
  const auto sector = qops::SectorBasis::make(hamiltonian.n_qubits(), n_electrons, two_sz);
  return fci_solve(qops::SectorOperator::from_pauli(hamiltonian, sector), n_electrons, two_sz);
}

FciSpectrum fci_solve(const qops::SectorOperator& hamiltonian, int n_electrons, int two_sz) {
  const auto& sector = hamiltonian.basis();
  if (!sector || sector->size() == 0) throw OracleError("empty FCI sector");
  if (sector->n_alpha() + sector->n_beta() != n_electrons || sector->n_alpha() - sector->n_beta() != two_sz)
    throw OracleError("Hamiltonian was compiled for a different sector");
  const int n = sector->n_qubits();
  const Eigen::MatrixXcd h = hamiltonian.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw OracleError("FCI diagonalization failed");
  const auto s2 = qops::SectorOperator::from_pauli(qops::s_squared_operator(n), sector);
  const auto num = qops::SectorOperator::from_pauli(qops::number_operator(n), sector);
  const auto sz = qops::SectorOperator::from_pauli(qops::sz_operator(n), sector);

  FciSpectrum spec;
  spec.sector = sector;
  spec.n_electrons = n_electrons;
  spec.two_sz = two_sz;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    Eigen::VectorXcd v = es.eigenvectors().col(k);
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[imax]) + 1e-12) imax = i;
    v *= std::conj(v[imax]) / std::abs(v[imax]);
    spec.states.push_back({es.eigenvalues()[k], v, s2.expect(v, v).real(), num.expect(v, v).real(),
                           sz.expect(v, v).real()});
  }
  return spec;
}

}  // namespace qlrsim::oracle
