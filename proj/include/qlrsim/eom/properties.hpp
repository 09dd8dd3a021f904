#pragma once

#include <array>

#include "qlrsim/eom/subspace.hpp"

namespace qlrsim::eom {

struct TransitionProperties {
  double energy = 0.0;
  Eigen::Vector3cd dipole = Eigen::Vector3cd::Zero();    // <0|mu_i|k>
  Eigen::Vector3cd magnetic = Eigen::Vector3cd::Zero();  // <k|m_i|0>
  double oscillator_strength = 0.0;
  double rotatory_strength = 0.0;  // zero when no magnetic operators are given
};

/// OS_k = 2/3 E_0k sum_i |<0|mu_i|k>|^2, RS_k = sum_i Im[<0|mu_i|k><k|m_i|0>].
/// Needs reconstructed statevectors.
std::vector<TransitionProperties> transition_properties(const ExcitedStateSet& states, const GroundState& ground,
                                                        const std::array<qops::SectorOperator, 3>& dipole,
                                                        const std::array<qops::SectorOperator, 3>* magnetic);
TransitionProperties transition_properties(double energy, const Eigen::VectorXcd& ground,
                                           const Eigen::VectorXcd& excited,
                                           const std::array<qops::SectorOperator, 3>& dipole,
                                           const std::array<qops::SectorOperator, 3>* magnetic);

/// ||S_mu^+ |Psi0>|| for every manifold operator in its dressed form.
struct KillerReport {
  std::vector<double> norms;
  double worst = 0.0;
};
KillerReport killer_check(const ExcitationManifold& manifold, const GroundState& ground);

enum class Lineshape { Lorentzian, Gaussian };
Lineshape parse_lineshape(const std::string& name);

struct Stick {
  double energy;
  double strength;
};

inline constexpr double kDefaultFwhm = 0.01;

/// Sum of unit-area lineshapes scaled by each stick's strength on `grid`.
std::vector<double> broaden_spectrum(const std::vector<Stick>& sticks, Lineshape shape, double fwhm,
                                     const std::vector<double>& grid);
std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

}  // namespace qlrsim::eom
