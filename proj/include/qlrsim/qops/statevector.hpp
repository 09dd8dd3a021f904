#pragma once

#include <vector>

#include "qlrsim/qops/pauli.hpp"

namespace qlrsim::qops {

/// 2^n amplitudes. Basis index bit q is the occupation of qubit (spin
/// orbital) q; labels print qubit 0 leftmost, so occupied {0,1} on four
/// qubits is index 3 and label "1100".
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int n_qubits);
  StateVector(int n_qubits, Eigen::VectorXcd amplitudes);
  static StateVector basis_state(int n_qubits, std::uint64_t index);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  double norm() const { return amps_.norm(); }
  /// Throws if the norm is below 1e-14.
  StateVector& normalize();
  /// <this|other>
  cplx inner(const StateVector& other) const;

  static std::string label(int n_qubits, std::uint64_t index);

 private:
  int n_ = 0;
  Eigen::VectorXcd amps_;
};

/// Single determinant with the listed spin orbitals occupied.
StateVector prepare_reference(int n_qubits, const std::vector<int>& occupied);

StateVector apply(const PauliSum& op, const StateVector& ket);
/// <bra|op|ket>
cplx apply_and_expect(const PauliSum& op, const StateVector& bra, const StateVector& ket);
/// <psi|op|psi> for Hermitian op; throws if the imaginary part exceeds 1e-10.
double expectation(const PauliSum& op, const StateVector& psi);

/// exp(theta * generator)|state> for anti-Hermitian `generator`. Uses
///   exp(theta t) = 1 + sin(theta) t + (1 - cos(theta)) t^2
/// when t^3 = -t holds as an operator identity, otherwise a scaled Taylor
/// series truncated at 1e-13.
StateVector apply_exp_generator(const StateVector& state, const PauliSum& generator, double theta);
/// True when t^3 + t vanishes (to 1e-12) as a Pauli sum.
bool satisfies_cubic_identity(const PauliSum& generator);

/// Normalized sum_k w_k O_k |reference>; a component without an operator is
/// the identity. Throws when the result vanishes.
struct SuperpositionComponent {
  const PauliSum* op = nullptr;
  cplx weight{1.0, 0.0};
};
StateVector prepare_superposition(const std::vector<SuperpositionComponent>& components,
                                  const StateVector& reference);

}  // namespace qlrsim::qops
