#pragma once

#include <stdexcept>
#include <vector>

#include "qlrsim/integrals/integrals.hpp"

namespace qlrsim::scf {

class ScfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScfOptions {
  int max_iterations = 300;
  double gradient_tolerance = 1e-10;
  int diis_size = 8;
  /// Static level shift (hartree) applied to the virtual orbitals during the
  /// DIIS phase. Off by default.
  double level_shift = 0.0;
  /// On oscillation (repeated energy rises) or after `diis_iterations`
  /// Roothaan steps, switch to level-shifted Newton iterations.
  bool auto_level_shift = true;
  int diis_iterations = 60;
  /// Minimum Hessian eigenvalue enforced by the Newton level shift.
  double fallback_shift = 1e-4;
};

struct ScfIteration {
  int iteration;
  double energy;
  double gradient_norm;
  double level_shift;
  int diis_dimension;
};

struct ScfResult {
  double energy = 0.0;
  double electronic_energy = 0.0;
  Eigen::MatrixXd coefficients;      // AO x MO
  Eigen::VectorXd orbital_energies;  // ascending
  Eigen::MatrixXd density;           // total (alpha + beta) density, AO basis
  int n_electrons = 0;
  double gradient_norm = 0.0;
  std::vector<ScfIteration> log;

  int n_occupied() const { return n_electrons / 2; }
};

/// Restricted Hartree-Fock with DIIS. Starts from the core Hamiltonian guess.
/// The orbital gradient is the Frobenius norm of X^T (FPS - SPF) X with X the
/// symmetric orthogonalizer. Throws ScfError on odd electron counts and on
/// non-convergence.
ScfResult run_rhf(const integrals::AOIntegralSet& ints, int n_electrons, const ScfOptions& options = {});

/// Coulomb minus half exchange for a total density P.
Eigen::MatrixXd fock_matrix(const integrals::AOIntegralSet& ints, const Eigen::MatrixXd& density);

}  // namespace qlrsim::scf
