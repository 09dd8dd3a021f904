#pragma once

#include <array>

#include "qlrsim/qops/jordan_wigner.hpp"
#include "qlrsim/qops/sector.hpp"

namespace qlrsim::qops {

/// Everything downstream solvers need about one molecule in qubit form:
/// Pauli sums for the Hamiltonian and property operators, and their sector
/// compilations for the (N, S_z = 0) sector of the reference determinant.
struct QubitSystem {
  int n_qubits = 0;
  int n_electrons = 0;
  PauliSum hamiltonian;
  QubitProperties properties;
  SectorPtr sector;
  SectorOperator h;
  std::array<SectorOperator, 3> dipole;
  std::array<SectorOperator, 3> magnetic;
  std::vector<int> hf_occupation;
  Eigen::VectorXcd hf;  // sector vector of the HF determinant
  Eigen::Vector3d gauge_origin = Eigen::Vector3d::Zero();

  StateVector hf_state() const { return sector->embed(hf); }
};

/// Builds the qubit system. `props` may be null (no property operators).
QubitSystem build_qubit_system(const scf::SpinOrbitalHamiltonian& h, const scf::PropertyOperatorSet* props);

}  // namespace qlrsim::qops
