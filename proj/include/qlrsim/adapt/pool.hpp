#pragma once

#include <string>
#include <vector>

#include "qlrsim/qops/jordan_wigner.hpp"
#include "qlrsim/qops/sector.hpp"

namespace qlrsim::adapt {

/// tau = G - G^+ with G = a+_{create...} a_{annihilate...}. Annihilators are
/// listed in the order they act, so a double a+_p a+_q a_s a_r has
/// create = {p, q}, annihilate = {s, r}.
struct PoolGenerator {
  std::vector<int> create;
  std::vector<int> annihilate;
  qops::FermionOperator tau;
  qops::PauliSum pauli;

  int rank() const { return static_cast<int>(create.size()); }
  std::string label() const;  // e.g. "2^ 3^ 1 0"
};

PoolGenerator make_generator(std::vector<int> create, std::vector<int> annihilate, int n_qubits);

/// Generalized singles a+_p a_q (p > q, same spin) and doubles
/// a+_p a+_q a_s a_r with {p,q} and {r,s} disjoint, p > q, r > s,
/// (p,q) > (r,s) lexicographically and S_z conserved.
class OperatorPool {
 public:
  static OperatorPool build(int n_spin_orbitals);
  OperatorPool(int n_qubits, std::vector<PoolGenerator> generators);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return gens_.size(); }
  const PoolGenerator& operator[](std::size_t i) const { return gens_[i]; }
  const std::vector<PoolGenerator>& generators() const { return gens_; }
  /// Index of the generator with this label, or -1.
  int find(const std::string& label) const;

 private:
  int n_qubits_ = 0;
  std::vector<PoolGenerator> gens_;
};

/// Pool generators compiled into one (N, S_z) sector.
class CompiledPool {
 public:
  CompiledPool(const OperatorPool& pool, qops::SectorPtr sector);
  const qops::SectorPtr& sector() const { return sector_; }
  std::size_t size() const { return exps_.size(); }
  const qops::SectorExponential& operator[](std::size_t i) const { return exps_[i]; }

 private:
  qops::SectorPtr sector_;
  std::vector<qops::SectorExponential> exps_;
};

/// g_k = <psi|[H, tau_k]|psi> for every pool element, full-register form.
std::vector<double> pool_gradients(const qops::StateVector& state, const qops::PauliSum& hamiltonian,
                                   const OperatorPool& pool);
/// Sector form; `h_psi` is H|psi>.
std::vector<double> pool_gradients(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& h_psi,
                                   const CompiledPool& pool);

}  // namespace qlrsim::adapt
