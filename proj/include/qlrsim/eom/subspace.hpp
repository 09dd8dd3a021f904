#pragma once

#include <string>
#include <vector>

#include "qlrsim/eom/linalg.hpp"
#include "qlrsim/eom/manifold.hpp"

namespace qlrsim::eom {

enum class Method { Qeom, ScEom, ProjEom, Qse };
std::string to_string(Method m);

/// direct: brackets on the statevector. measurement: only expectation values
/// on prepared states (diagonals and normalized superpositions).
enum class MatrixPath { Direct, Measurement };

/// qEOM: m, q, v, w. sc: m. proj: m = <Gbar+ (H - E0) Gbar>, v. QSE: m = H and
/// v = S over {Psi0} U {G_mu Psi0}.
struct SubspaceMatrices {
  Method method = Method::ScEom;
  Eigen::MatrixXcd m, q, v, w;
  double e0 = 0.0;
  Eigen::Index dimension() const { return m.rows(); }
};

SubspaceMatrices build_qeom_matrices(const ExcitationManifold& manifold, const GroundState& ground);
SubspaceMatrices build_sc_matrix(const ExcitationManifold& manifold, const GroundState& ground,
                                 MatrixPath path = MatrixPath::Direct);
SubspaceMatrices build_proj_matrices(const ExcitationManifold& manifold, const GroundState& ground);
SubspaceMatrices build_qse_matrices(const ExcitationManifold& manifold, const GroundState& ground);

struct ExcitedState {
  double energy = 0.0;        // E_0k, hartree
  Eigen::VectorXcd a, b;      // b only for qEOM
  Eigen::VectorXcd vector;    // sector state, normalized except under QeomNormalization::Eigenvector;
                              // empty if not reconstructed
  cplx overlap{};             // <Psi0|k>
  double s2 = 0.0;
  double imag_residual = 0.0;  // |Im E| for the non-Hermitian problems
};

/// "singlet", "doublet", "triplet", ... from <S^2>; "mixed" when <S^2> is
/// more than 0.05 away from any S(S+1).
std::string multiplicity_label(double s2);

struct ExcitedStateSet {
  Method method = Method::ScEom;
  std::vector<ExcitedState> states;  // ascending energy
  int dropped_directions = 0;
  double threshold = kMetricThreshold;
  std::vector<std::string> warnings;

  std::vector<double> energies() const;
};

/// Bare-qEOM excited states |k> = (sum A G + sum B G^+)|Psi0>.
/// State: (A, B) metric-normalized, |k> renormalized to unit length.
/// Eigenvector: (A, B) normalized to unit Euclidean length and |k> left as
/// is, the convention behind published qEOM overlap tables.
/// In both cases a state with a nonzero ground overlap is phased so that
/// <Psi0|k> is real and positive.
enum class QeomNormalization { State, Eigenvector };

/// Solvers take matrices only; with manifold and ground given they also
/// build the excited statevectors, overlaps and <S^2>.
ExcitedStateSet solve_qeom(const SubspaceMatrices& mats, const ExcitationManifold* manifold = nullptr,
                           const GroundState* ground = nullptr,
                           QeomNormalization normalization = QeomNormalization::State);
ExcitedStateSet solve_sc(const SubspaceMatrices& mats, const ExcitationManifold* manifold = nullptr,
                         const GroundState* ground = nullptr);
ExcitedStateSet solve_proj(const SubspaceMatrices& mats, const ExcitationManifold* manifold = nullptr,
                           const GroundState* ground = nullptr);
ExcitedStateSet solve_qse(const SubspaceMatrices& mats, const ExcitationManifold* manifold = nullptr,
                          const GroundState* ground = nullptr);
ExcitedStateSet solve_qse(const ExcitationManifold& manifold, const GroundState& ground);

}  // namespace qlrsim::eom
