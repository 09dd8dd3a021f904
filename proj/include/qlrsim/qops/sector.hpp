#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qlrsim/qops/fermion.hpp"
#include "qlrsim/qops/statevector.hpp"

namespace qlrsim::qops {

/// Computational basis states with fixed alpha and beta electron counts
/// (alpha on even qubits, beta on odd). Number- and S_z-conserving operators
/// act inside one sector, so sector vectors carry the same information as the
/// full statevector at a fraction of the size.
class SectorBasis {
 public:
  SectorBasis(int n_qubits, int n_alpha, int n_beta);
  static std::shared_ptr<const SectorBasis> make(int n_qubits, int n_electrons, int two_sz = 0);

  int n_qubits() const { return n_; }
  int n_alpha() const { return na_; }
  int n_beta() const { return nb_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(states_.size()); }
  std::uint64_t state(Eigen::Index i) const { return states_[static_cast<std::size_t>(i)]; }
  /// -1 when the bitstring is outside the sector.
  Eigen::Index index_of(std::uint64_t bits) const;

  /// Sector amplitudes of a full statevector; throws if more than `tol` of
  /// the norm lies outside.
  Eigen::VectorXcd restrict(const StateVector& full, double tol = 1e-12) const;
  StateVector embed(const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd basis_vector(std::uint64_t bits) const;

 private:
  int n_, na_, nb_;
  std::vector<std::uint64_t> states_;
  std::unordered_map<std::uint64_t, Eigen::Index> lookup_;
};

using SectorPtr = std::shared_ptr<const SectorBasis>;
using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

class SectorLeakError : public OperatorError {
 public:
  using OperatorError::OperatorError;
};

/// Sparse matrix of an operator restricted to one sector.
class SectorOperator {
 public:
  SectorOperator() = default;
  SectorOperator(SectorPtr basis, SparseOp matrix);
  /// Compiles a Pauli sum; throws SectorLeakError if the operator couples
  /// the sector to anything outside it.
  static SectorOperator from_pauli(const PauliSum& op, SectorPtr basis);
  /// Direct determinant action of the fermion operator (no qubit mapping).
  static SectorOperator from_fermion(const FermionOperator& op, SectorPtr basis);

  const SectorPtr& basis() const { return basis_; }
  const SparseOp& matrix() const { return m_; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return m_ * v; }
  cplx expect(const Eigen::VectorXcd& bra, const Eigen::VectorXcd& ket) const { return bra.dot(m_ * ket); }
  SectorOperator adjoint() const;
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(m_); }

  friend SectorOperator operator+(const SectorOperator& a, const SectorOperator& b);
  friend SectorOperator operator-(const SectorOperator& a, const SectorOperator& b);
  friend SectorOperator operator*(const SectorOperator& a, const SectorOperator& b);
  friend SectorOperator operator*(cplx s, const SectorOperator& a);

 private:
  SectorPtr basis_;
  SparseOp m_;
};

/// exp(theta t) for an anti-Hermitian sector operator t. The closed form
/// 1 + sin(theta) t + (1 - cos(theta)) t^2 is used when t^3 = -t holds on the
/// sector (checked once at construction); otherwise a scaled Taylor series.
class SectorExponential {
 public:
  SectorExponential() = default;
  explicit SectorExponential(SectorOperator generator);

  const SectorOperator& generator() const { return t_; }
  bool closed_form() const { return closed_; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v, double theta) const;

 private:
  SectorOperator t_;
  bool closed_ = false;
  double one_norm_ = 0.0;
};

/// Sector counterpart of prepare_superposition.
struct SectorComponent {
  const SectorOperator* op = nullptr;
  cplx weight{1.0, 0.0};
};
Eigen::VectorXcd prepare_superposition(const std::vector<SectorComponent>& components,
                                       const Eigen::VectorXcd& reference);

}  // namespace qlrsim::qops
