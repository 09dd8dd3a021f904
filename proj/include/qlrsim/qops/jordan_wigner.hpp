#pragma once

#include "qlrsim/qops/fermion.hpp"
#include "qlrsim/qops/pauli.hpp"
#include "qlrsim/scf/mo_transform.hpp"

namespace qlrsim::qops {

/// a+_p = Z_0 ... Z_{p-1} (X_p - i Y_p) / 2; qubit p is spin orbital p and
/// |1> means occupied.
PauliSum jw_ladder(int index, bool creation, int n_qubits);
PauliSum jordan_wigner(const FermionOperator& op, int n_qubits);

/// sum_pq M_pq a+_p a_q for a spin-orbital matrix M.
PauliSum one_body_operator(const Eigen::MatrixXcd& m);
/// Qubit image of the electronic Hamiltonian (including E_nuc). Built from
/// the unique p<q, r<s two-electron terms.
PauliSum qubit_hamiltonian(const scf::SpinOrbitalHamiltonian& h);

PauliSum number_operator(int n_qubits);
/// S_z with alpha on even and beta on odd qubits.
PauliSum sz_operator(int n_qubits);
PauliSum s_squared_operator(int n_qubits);

/// The six property operators in qubit form: mu_x, mu_y, mu_z, m_x, m_y, m_z.
struct QubitProperties {
  std::array<PauliSum, 3> dipole;
  std::array<PauliSum, 3> magnetic;
};
QubitProperties qubit_properties(const scf::PropertyOperatorSet& props);

}  // namespace qlrsim::qops
