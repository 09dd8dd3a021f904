#pragma once

#include <array>
#include <vector>

#include "qlrsim/integrals/basis.hpp"

namespace qlrsim::integrals {

/// Dense (pq|rs) tensor in chemist notation. Only canonical quartets are
/// evaluated; the other seven permutations are copies, so 8-fold symmetry is
/// exact as stored.
class EriTensor {
 public:
  EriTensor() = default;
  explicit EriTensor(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  std::size_t dim() const { return n_; }
  double operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  double& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  void set_symmetric(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v);
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct AOIntegralSet {
  Eigen::MatrixXd overlap;
  Eigen::MatrixXd kinetic;
  Eigen::MatrixXd nuclear;
  EriTensor eri;
  double nuclear_repulsion = 0.0;

  /// Electronic dipole -<p| r - origin |q>, one matrix per Cartesian axis.
  std::array<Eigen::MatrixXd, 3> dipole;
  /// Im<p| (r - origin) x p |q>; antisymmetric. The magnetic moment operator
  /// has integrals i * (-1/2) * angular_momentum.
  std::array<Eigen::MatrixXd, 3> angular_momentum;
  Eigen::Vector3d gauge_origin = Eigen::Vector3d::Zero();

  Eigen::MatrixXd core_hamiltonian() const { return kinetic + nuclear; }
};

/// S, T, V_ne, ERI and the nuclear repulsion energy.
AOIntegralSet compute_core_integrals(const BasisSet& basis, const Geometry& geometry);

/// Fills the dipole and angular-momentum blocks of `set` about `origin`.
void compute_property_integrals(const BasisSet& basis, const Eigen::Vector3d& origin, AOIntegralSet& set);

/// Convenience: core + property integrals in one call.
AOIntegralSet compute_all_integrals(const BasisSet& basis, const Geometry& geometry,
                                    const Eigen::Vector3d& origin);

}  // namespace qlrsim::integrals
