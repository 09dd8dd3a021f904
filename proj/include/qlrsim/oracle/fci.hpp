#pragma once

#include <stdexcept>
#include <vector>

#include "qlrsim/qops/system.hpp"

namespace qlrsim::oracle {

struct FciState {
  double energy;
  Eigen::VectorXcd vector;  // sector amplitudes
  double s2;
  double n;
  double sz;
};

struct FciSpectrum {
  qops::SectorPtr sector;
  int n_electrons = 0;
  int two_sz = 0;
  std::vector<FciState> states;  // ascending energy

  double ground_energy() const { return states.front().energy; }
  /// E_k - E_0 for k >= 1.
  std::vector<double> excitation_energies() const;
  qops::StateVector full_state(std::size_t k) const { return sector->embed(states[k].vector); }
};

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense diagonalization of `hamiltonian` in the (N, S_z) sector. Each
/// eigenvector is phased so its largest amplitude is real and positive.
FciSpectrum fci_solve(const qops::PauliSum& hamiltonian, int n_electrons, int two_sz = 0);
/// Same, from an already compiled sector Hamiltonian.
FciSpectrum fci_solve(const qops::SectorOperator& hamiltonian, int n_electrons, int two_sz = 0);

}  // namespace qlrsim::oracle
