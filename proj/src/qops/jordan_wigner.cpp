#include "qlrsim/qops/jordan_wigner.hpp"

namespace qlrsim::qops {

PauliSum jw_ladder(int index, bool creation, int n_qubits) {
  if (index < 0 || index >= n_qubits) throw OperatorError("spin-orbital index " + std::to_string(index) +
                                                           " outside a register of " + std::to_string(n_qubits));
  const std::uint64_t parity = (std::uint64_t{1} << index) - 1;
  const std::uint64_t bit = std::uint64_t{1} << index;
  PauliSum s(n_qubits);
  s.add_term({bit, parity}, 0.5);
  // Y_p carries the factor i already: (X -+ iY)/2.
  s.add_term({bit, parity | bit}, creation ? cplx(0.0, -0.5) : cplx(0.0, 0.5));
  return s;
}

PauliSum jordan_wigner(const FermionOperator& op, int n_qubits) {
  if (op.max_index() >= n_qubits) throw OperatorError("fermion operator index exceeds the qubit register");
  PauliSum out(n_qubits);
  for (const auto& term : op.terms()) {
    PauliSum prod = PauliSum::identity(n_qubits, term.coeff);
    for (const auto& ladder : term.ops) prod = prod * jw_ladder(ladder.index, ladder.creation, n_qubits);
    out += prod;
  }
  return out.simplify();
}

PauliSum one_body_operator(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  PauliSum out(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (std::abs(m(p, q)) < kPruneThreshold) continue;
      out += m(p, q) * (jw_ladder(p, true, n) * jw_ladder(q, false, n));
    }
  return out.simplify();
}

PauliSum qubit_hamiltonian(const scf::SpinOrbitalHamiltonian& h) {
  const int n = h.n_spin_orbitals();
  std::vector<PauliSum> cre, ann;
  for (int p = 0; p < n; ++p) {
    cre.push_back(jw_ladder(p, true, n));
    ann.push_back(jw_ladder(p, false, n));
  }
  PauliSum out = one_body_operator(h.h().cast<cplx>());
  out += PauliSum::identity(n, h.e_nuc());
  // 1/4 sum <pq||rs> a+p a+q a_s a_r = sum_{p<q, r<s} <pq||rs> a+p a+q a_s a_r
  PauliSum::TermMap acc;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const PauliSum pq = cre[p] * cre[q];
      for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s) {
          const double g = h.g(p, q, r, s);
          if (std::abs(g) < kPruneThreshold) continue;
          const PauliSum term = pq * (ann[s] * ann[r]);
          for (const auto& [ps, c] : term.terms()) acc[ps] += g * c;
        }
    }
  PauliSum two(n);
  for (const auto& [ps, c] : acc) two.add_term(ps, c);
  out += two;
  return out.simplify();
}

PauliSum number_operator(int n_qubits) {
  PauliSum s(n_qubits);
  for (int p = 0; p < n_qubits; ++p) {
    s.add_term({}, 0.5);
    s.add_term(PauliString::single(p, 'Z'), -0.5);
  }
  return s.simplify();
}

PauliSum sz_operator(int n_qubits) {
  PauliSum s(n_qubits);
  for (int p = 0; p < n_qubits; ++p) {
    const double spin = p % 2 == 0 ? 0.5 : -0.5;
    s.add_term({}, 0.5 * spin);
    s.add_term(PauliString::single(p, 'Z'), -0.5 * spin);
  }
  return s.simplify();
}

PauliSum s_squared_operator(int n_qubits) {
  // S^2 = S- S+ + S_z + S_z^2
  PauliSum splus(n_qubits), sminus(n_qubits);
  for (int p = 0; p + 1 < n_qubits; p += 2) {
    splus += jw_ladder(p, true, n_qubits) * jw_ladder(p + 1, false, n_qubits);
    sminus += jw_ladder(p + 1, true, n_qubits) * jw_ladder(p, false, n_qubits);
  }
  const PauliSum sz = sz_operator(n_qubits);
  return (sminus * splus + sz + sz * sz).simplify();
}

QubitProperties qubit_properties(const scf::PropertyOperatorSet& props) {
  QubitProperties q;
  for (int k = 0; k < 3; ++k) {
    q.dipole[k] = one_body_operator(props.dipole_spin(k));
    q.magnetic[k] = one_body_operator(props.magnetic_spin(k));
  }
  return q;
}

}  // namespace qlrsim::qops
