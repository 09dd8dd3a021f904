#pragma once

#include <array>
#include <functional>

#include "qlrsim/observables.hpp"
#include "qlrsim/oracle/fci.hpp"

namespace qlrsim::oracle {

/// Half-width of the guard band around each excitation energy (hartree).
inline constexpr double kResonanceGuard = 1e-6;

/// <<X;Y>>_w = sum_{k>0} <0|X|k><k|Y|0>/(w - w_k) - <0|Y|k><k|X|0>/(w + w_k)
///
/// Number-conserving X and Y never leave the (N, S_z) sector of the ground
/// state, so the sum over sector eigenstates is the complete sum.
std::complex<double> sos_response(const FciSpectrum& spectrum, const qops::SectorOperator& x,
                                  const qops::SectorOperator& y, double omega);

/// All nine mu-mu (and, if `magnetic` is given, mu-m) responses.
ResponseTensors sos_tensors(const FciSpectrum& spectrum, const std::array<qops::SectorOperator, 3>& dipole,
                            const std::array<qops::SectorOperator, 3>* magnetic, double omega);

struct SosObservables {
  ResponseTensors tensors;
  double isotropic_polarizability = 0.0;
  double specific_rotation = 0.0;  // zero when omega == 0
};
SosObservables sos_observables(const FciSpectrum& spectrum, const std::array<qops::SectorOperator, 3>& dipole,
                               const std::array<qops::SectorOperator, 3>& magnetic, double omega,
                               double molar_mass);

/// alpha_ij = -d2E/dF_i dF_j from ground energies of H - F.mu. Diagonal
/// entries use the 5-point stencil with step h; off-diagonal entries the
/// 4-point mixed stencil at h and 2h combined by Richardson extrapolation.
/// Throws if h <= 0 or if the two mixed estimates disagree beyond what the
/// extrapolation can repair.
Eigen::Matrix3d finite_field_polarizability(const std::function<double(const Eigen::Vector3d&)>& ground_energy,
                                            double h = 1e-3);
/// Convenience: ground energies from dense diagonalization in the sector.
Eigen::Matrix3d finite_field_polarizability(const qops::SectorOperator& hamiltonian,
                                            const std::array<qops::SectorOperator, 3>& dipole, double h = 1e-3);

}  // namespace qlrsim::oracle
