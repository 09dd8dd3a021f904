#pragma once

#include <array>
#include <complex>
#include <vector>

#include "qlrsim/integrals/integrals.hpp"
#include "qlrsim/scf/rhf.hpp"

namespace qlrsim::scf {

/// Spatial-orbital integrals in the MO basis. Two-electron integrals use the
/// chemist convention (pq|rs), the same as FCIDUMP.
struct MOIntegrals {
  Eigen::MatrixXd h;
  integrals::EriTensor eri;
  double e_nuc = 0.0;
  int n_electrons = 0;
  int ms2 = 0;

  int n_orbitals() const { return static_cast<int>(h.rows()); }
};

/// Second-quantized Hamiltonian over spin orbitals, interleaved ordering:
/// spin orbital 2p is alpha, 2p+1 is beta, of spatial orbital p.
///
///   H = sum_pq h_pq a+_p a_q + 1/4 sum_pqrs <pq||rs> a+_p a+_q a_s a_r + E_nuc
///
/// with <pq||rs> = <pq|rs> - <pq|sr> and <pq|rs> = (pr|qs).
class SpinOrbitalHamiltonian {
 public:
  SpinOrbitalHamiltonian() = default;
  explicit SpinOrbitalHamiltonian(const MOIntegrals& mo);

  int n_spin_orbitals() const { return n_; }
  int n_electrons() const { return spatial_.n_electrons; }
  double e_nuc() const { return spatial_.e_nuc; }
  const Eigen::MatrixXd& h() const { return h_; }
  /// Antisymmetrized physicist integral <pq||rs>.
  double g(int p, int q, int r, int s) const { return g_[((p * n_ + q) * n_ + r) * n_ + s]; }
  const MOIntegrals& spatial() const { return spatial_; }

  /// Occupied spin orbitals of the RHF determinant (lowest n_electrons).
  std::vector<int> hf_occupation() const;

 private:
  int n_ = 0;
  Eigen::MatrixXd h_;
  std::vector<double> g_;
  MOIntegrals spatial_;
};

/// Property integrals in the spatial MO basis.
struct PropertyOperatorSet {
  /// -<p|r - O|q>, real symmetric.
  std::array<Eigen::MatrixXd, 3> dipole;
  /// Im<p|(r - O) x p|q>, real antisymmetric; the operator is i times this.
  std::array<Eigen::MatrixXd, 3> angular_momentum;
  Eigen::Vector3d gauge_origin = Eigen::Vector3d::Zero();

  int n_orbitals() const { return static_cast<int>(dipole[0].rows()); }

  /// Spin-orbital (interleaved) matrix of mu_k.
  Eigen::MatrixXcd dipole_spin(int k) const;
  /// Spin-orbital matrix of the magnetic dipole m_k = -1/2 L_k, i.e.
  /// i * (-1/2) * angular_momentum[k]; Hermitian.
  Eigen::MatrixXcd magnetic_spin(int k) const;
};

/// Expands a spatial matrix to interleaved spin orbitals (spin diagonal).
Eigen::MatrixXcd spin_block(const Eigen::MatrixXcd& spatial);

/// Quarter-by-quarter O(N^5) transformation of (pq|rs).
integrals::EriTensor transform_eri(const integrals::EriTensor& ao, const Eigen::MatrixXd& c);

MOIntegrals transform_core(const integrals::AOIntegralSet& ints, const ScfResult& scf);
PropertyOperatorSet transform_properties(const integrals::AOIntegralSet& ints, const ScfResult& scf);

struct MOHamiltonian {
  SpinOrbitalHamiltonian hamiltonian;
  PropertyOperatorSet properties;
};

MOHamiltonian transform_to_mo(const integrals::AOIntegralSet& ints, const ScfResult& scf);

}  // namespace qlrsim::scf
