#include "qlrsim/qops/statevector.hpp"

#include <cmath>

namespace qlrsim::qops {

namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_dims(const PauliSum& op, const StateVector& v) {
  if (op.n_qubits() != v.n_qubits())
    throw OperatorError("operator on " + std::to_string(op.n_qubits()) + " qubits applied to a " +
                        std::to_string(v.n_qubits()) + "-qubit state");
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > 30) throw OperatorError("statevector register out of range");
  amps_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
}

StateVector::StateVector(int n_qubits, Eigen::VectorXcd amplitudes) : n_(n_qubits), amps_(std::move(amplitudes)) {
  if (amps_.size() != (Eigen::Index{1} << n_qubits)) throw OperatorError("amplitude count does not match 2^n");
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw OperatorError("basis index out of range");
  s.amps_[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

StateVector& StateVector::normalize() {
  const double nrm = norm();
  if (nrm < 1e-14) throw OperatorError("cannot normalize a null state");
  amps_ /= nrm;
  return *this;
}

cplx StateVector::inner(const StateVector& other) const {
  if (other.n_ != n_) throw OperatorError("inner product between registers of different size");
  return amps_.dot(other.amps_);
}

std::string StateVector::label(int n_qubits, std::uint64_t index) {
  std::string s(n_qubits, '0');
  for (int q = 0; q < n_qubits; ++q)
    if ((index >> q) & 1) s[q] = '1';
  return s;
}

StateVector prepare_reference(int n_qubits, const std::vector<int>& occupied) {
  std::uint64_t index = 0;
  for (int p : occupied) {
    if (p < 0 || p >= n_qubits) throw OperatorError("occupied index outside the register");
    const std::uint64_t bit = std::uint64_t{1} << p;
    if (index & bit) throw OperatorError("duplicate occupied index " + std::to_string(p));
    index |= bit;
  }
  return StateVector::basis_state(n_qubits, index);
}

StateVector apply(const PauliSum& op, const StateVector& ket) {
  check_dims(op, ket);
  StateVector out(ket.n_qubits());
  auto& o = out.amplitudes();
  const auto& a = ket.amplitudes();
  const std::uint64_t dim = ket.dim();
  for (const auto& [p, c] : op.terms()) {
    const cplx phase = kIPow[p.n_y() % 4] * c;
    for (std::uint64_t b = 0; b < dim; ++b) {
      const cplx v = a[static_cast<Eigen::Index>(b)];
      if (v == cplx{}) continue;
      const bool odd = __builtin_popcountll(b & p.z) & 1;
      o[static_cast<Eigen::Index>(b ^ p.x)] += odd ? -phase * v : phase * v;
    }
  }
  return out;
}

cplx apply_and_expect(const PauliSum& op, const StateVector& bra, const StateVector& ket) {
  check_dims(op, bra);
  return bra.inner(apply(op, ket));
}

double expectation(const PauliSum& op, const StateVector& psi) {
  const cplx v = apply_and_expect(op, psi, psi);
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
    throw OperatorError("expectation value has a significant imaginary part; operator not Hermitian?");
  return v.real();
}

bool satisfies_cubic_identity(const PauliSum& generator) {
  const PauliSum cube = generator * generator * generator;
  return max_difference(cube, generator * cplx(-1.0)) < 1e-12;
}

StateVector apply_exp_generator(const StateVector& state, const PauliSum& generator, double theta) {
  check_dims(generator, state);
  if (!generator.is_anti_hermitian(1e-10)) throw OperatorError("generator is not anti-Hermitian");
  if (theta == 0.0) return state;
  if (satisfies_cubic_identity(generator)) {
    const StateVector t1 = apply(generator, state);
    const StateVector t2 = apply(generator, t1);
    return StateVector(state.n_qubits(), state.amplitudes() + std::sin(theta) * t1.amplitudes() +
                                             (1.0 - std::cos(theta)) * t2.amplitudes());
  }
  // Scaled Taylor series: split theta so each sub-step has |theta| ||t|| <= 1/2.
  const double scale = std::abs(theta) * generator.one_norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * scale)));
  const double h = theta / steps;
  StateVector current = state;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd sum = current.amplitudes();
    StateVector term = current;
    for (int k = 1; k < 60; ++k) {
      term = apply(generator, term);
      term.amplitudes() *= h / k;
      sum += term.amplitudes();
      if (term.norm() < 1e-13 * std::max(1.0, current.norm()) / steps) break;
    }
    current = StateVector(state.n_qubits(), sum);
  }
  return current;
}

StateVector prepare_superposition(const std::vector<SuperpositionComponent>& components,
                                  const StateVector& reference) {
  if (components.empty()) throw OperatorError("empty superposition");
  StateVector out(reference.n_qubits());
  for (const auto& c : components) {
    if (c.op) out.amplitudes() += c.weight * apply(*c.op, reference).amplitudes();
    else out.amplitudes() += c.weight * reference.amplitudes();
  }
  if (out.norm() < 1e-12) throw OperatorError("superposition vanishes: every component annihilates the reference");
  return out.normalize();
}

}  // namespace qlrsim::qops
