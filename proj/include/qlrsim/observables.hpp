#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "qlrsim/units.hpp"

namespace qlrsim {

/// Raised when a frequency sits on (or within the guard band of) a pole.
class ResonanceError : public std::runtime_error {
 public:
  ResonanceError(const std::string& what, double omega, double pole)
      : std::runtime_error(what), omega_(omega), pole_(pole) {}
  double omega() const { return omega_; }
  double pole() const { return pole_; }

 private:
  double omega_, pole_;
};

/// Tensors assembled from electric-electric and electric-magnetic response
/// values <<mu_i; mu_j>> and <<mu_i; m_j>>.
struct ResponseTensors {
  double omega = 0.0;
  Eigen::Matrix3cd mu_mu = Eigen::Matrix3cd::Zero();
  Eigen::Matrix3cd mu_m = Eigen::Matrix3cd::Zero();
  bool has_magnetic = false;

  /// alpha_ij = -Re <<mu_i; mu_j>>
  Eigen::Matrix3d polarizability() const { return -mu_mu.real(); }
  double isotropic_polarizability() const { return polarizability().trace() / 3.0; }
  /// G'_ij = Im <<mu_i; m_j>>
  Eigen::Matrix3d rosenfeld() const { return mu_m.imag(); }
  /// beta = -Tr G' / (3 omega); undefined at omega = 0.
  double beta() const {
    if (omega == 0.0) throw std::domain_error("optical rotation is undefined at zero frequency");
    return -rosenfeld().trace() / (3.0 * omega);
  }
  /// [alpha] in deg dm^-1 (g/mL)^-1.
  double specific_rotation(double molar_mass) const {
    const double nu = units::hartree_to_wavenumber(omega);
    return units::kSpecificRotationPrefactor * nu * nu * beta() / molar_mass;
  }
};

}  // namespace qlrsim
