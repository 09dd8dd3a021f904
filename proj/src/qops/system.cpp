#include "qlrsim/qops/system.hpp"

namespace qlrsim::qops {

QubitSystem build_qubit_system(const scf::SpinOrbitalHamiltonian& h, const scf::PropertyOperatorSet* props) {
  QubitSystem s;
  s.n_qubits = h.n_spin_orbitals();
  s.n_electrons = h.n_electrons();
  s.hamiltonian = qubit_hamiltonian(h);
  s.sector = SectorBasis::make(s.n_qubits, s.n_electrons, 0);
  s.h = SectorOperator::from_pauli(s.hamiltonian, s.sector);
  s.hf_occupation = h.hf_occupation();
  std::uint64_t bits = 0;
  for (int p : s.hf_occupation) bits |= std::uint64_t{1} << p;
  s.hf = s.sector->basis_vector(bits);
  if (props) {
    s.properties = qubit_properties(*props);
    s.gauge_origin = props->gauge_origin;
    for (int k = 0; k < 3; ++k) {
      s.dipole[k] = SectorOperator::from_pauli(s.properties.dipole[k], s.sector);
      s.magnetic[k] = SectorOperator::from_pauli(s.properties.magnetic[k], s.sector);
    }
  }
  return s;
}

}  // namespace qlrsim::qops
