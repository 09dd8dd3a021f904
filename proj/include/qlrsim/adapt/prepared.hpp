#pragma once

#include <optional>

#include "qlrsim/adapt/vqe.hpp"
#include "qlrsim/integrals/geometry.hpp"
#include "qlrsim/qops/system.hpp"
#include "qlrsim/scf/mo_transform.hpp"
#include "qlrsim/scf/rhf.hpp"

namespace qlrsim::adapt {

struct PrepareOptions {
  std::optional<Eigen::Vector3d> gauge_origin;  // bohr; default: center of nuclear charge
  int charge = 0;                               // closed shell only
  scf::ScfOptions scf;
  AdaptOptions adapt;
  bool run_adapt = true;
};

/// One molecule carried from geometry to the ADAPT-VQE ground state. Members
/// refer to each other by address, so instances are pinned.
class PreparedSystem {
 public:
  PreparedSystem(const integrals::Geometry& geometry, const PrepareOptions& options = {});
  /// From externally supplied MO integrals (FCIDUMP + optional sidecar).
  /// Property operators are left empty when mo.properties has no orbitals.
  PreparedSystem(const scf::MOHamiltonian& mo, const PrepareOptions& options = {});
  PreparedSystem(const PreparedSystem&) = delete;
  PreparedSystem& operator=(const PreparedSystem&) = delete;

  std::optional<integrals::Geometry> geometry;
  double e_rhf = 0.0;
  double molar_mass = 0.0;  // zero without a geometry
  qops::QubitSystem sys;
  OperatorPool pool;
  CompiledPool compiled;
  GroundStateAnsatz ansatz;

  AnsatzCircuit circuit() const { return AnsatzCircuit(ansatz, compiled); }
  /// Runs (or reruns) ADAPT-VQE with the given options.
  void optimize(const AdaptOptions& options);
};

}  // namespace qlrsim::adapt
