#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qlrsim/eom/subspace.hpp"
#include "qlrsim/observables.hpp"

namespace qlrsim::qlr {

using eom::MatrixPath;
using eom::Variant;

/// Z_Y(mu) = <Psi0|Y|phi_mu> over the dressed manifold states phi_mu:
/// U G_mu|0> (sc) or (G_mu - <G_mu>)|Psi0> (proj).
struct ZVector {
  Variant variant = Variant::SelfConsistent;
  std::string property;  // "mu_x", ..., "m_z"
  Eigen::VectorXcd values;
};

/// Measurement path: Re and Im from expectation values of Y on the prepared
/// states phi_0, phi_mu, (phi_0 + phi_mu)/sqrt2 and (phi_0 + i phi_mu)/sqrt2.
/// For sc these are circuits on superposed determinants; the proj states are
/// not normalized, so their measured norms enter as weights.
ZVector build_z_vector(const eom::ExcitationManifold& manifold, const eom::GroundState& ground,
                       const qops::SectorOperator& y, std::string property,
                       MatrixPath path = MatrixPath::Direct);

/// Matrices and Z vectors for one molecule, one variant.
struct ResponseSetup {
  Variant variant = Variant::SelfConsistent;
  eom::SubspaceMatrices matrices;
  std::array<ZVector, 3> dipole;
  std::array<ZVector, 3> magnetic;
  bool has_magnetic = false;
};

ResponseSetup build_response_setup(const eom::ExcitationManifold& manifold, const eom::GroundState& ground,
                                   const std::array<qops::SectorOperator, 3>& dipole,
                                   const std::array<qops::SectorOperator, 3>* magnetic,
                                   MatrixPath path = MatrixPath::Direct);

/// Systems with condition estimate above this are treated as resonant.
inline constexpr double kConditionLimit = 1e12;

struct SolveDiagnostics {
  double condition = 0.0;  // worst over all solves
  bool fallback = false;   // combined form requested but separated used
  std::vector<std::string> notices;
};

enum class SolveForm { Separated, Combined };

/// Solves (M - w V) A = Z_Y*, (M* + w V*) B = Z_Y and returns
///   <<X;Y>>_w = -(Z_X . A + Z_X* . B),
/// which equals the sum over states exactly for a complete manifold.
/// proj metrics are removed by canonical orthogonalization first.
class ResponseSolver {
 public:
  explicit ResponseSolver(const eom::SubspaceMatrices& mats, double metric_threshold = eom::kMetricThreshold);

  std::complex<double> separated(const ZVector& x, const ZVector& y, double omega,
                                 SolveDiagnostics* diag = nullptr) const;
  /// Single solve (M^2 - w^2) D = 2 M Z_Y (Z_Y real) or 2 w Z_Y (Z_Y
  /// imaginary). Needs a real symmetric M, real Z_X and w != 0; otherwise
  /// falls back to separated() and says so in `diag`.
  std::complex<double> combined(const ZVector& x, const ZVector& y, double omega,
                                SolveDiagnostics* diag = nullptr) const;

  /// r(i, j) = <<X_i; Y_j>>_w, factorizing once per frequency.
  Eigen::MatrixXcd responses(const std::vector<const ZVector*>& xs, const std::vector<const ZVector*>& ys,
                             double omega, SolveForm form, SolveDiagnostics* diag = nullptr) const;

  /// Real parts of the eigenvalues of the orthogonalized M, ascending: the
  /// response poles.
  const std::vector<double>& poles() const { return poles_; }
  int dropped_directions() const { return dropped_; }
  Eigen::Index dimension() const { return m_.rows(); }
  const Eigen::MatrixXcd& reduced_matrix() const { return m_; }

 private:
  Eigen::VectorXcd reduce(const ZVector& z) const;

  Eigen::MatrixXcd m_;  // X^+ M X
  Eigen::MatrixXcd x_;  // canonical basis, empty for sc
  bool hermitian_ = false;
  bool real_symmetric_ = false;
  std::vector<double> poles_;
  int dropped_ = 0;
};

struct ResponseResult {
  ResponseTensors tensors;
  double isotropic_polarizability = 0.0;
  std::optional<double> specific_rotation;  // needs magnetic responses, w != 0 and a molar mass
  SolveDiagnostics diagnostics;
};

/// All nine <<mu_i; mu_j>> and, with magnetic Z vectors, <<mu_i; m_j>>.
ResponseResult compute_response(const ResponseSolver& solver, const ResponseSetup& setup, double omega,
                                SolveForm form = SolveForm::Separated, double molar_mass = 0.0);

}  // namespace qlrsim::qlr
