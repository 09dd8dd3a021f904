#include "qlrsim/adapt/prepared.hpp"

#include "qlrsim/integrals/basis.hpp"
#include "qlrsim/integrals/integrals.hpp"

namespace qlrsim::adapt {

namespace {

scf::MOHamiltonian from_geometry(const integrals::Geometry& g, const PrepareOptions& o) {
  const Eigen::Vector3d origin = o.gauge_origin.value_or(g.center_of_charge());
  const auto ints = integrals::compute_all_integrals(integrals::build_sto3g(g), g, origin);
  return scf::transform_to_mo(ints, scf::run_rhf(ints, g.total_nuclear_charge() - o.charge, o.scf));
}

}  // namespace

PreparedSystem::PreparedSystem(const integrals::Geometry& g, const PrepareOptions& options)
    : PreparedSystem(from_geometry(g, options), options) {
  geometry = g;
  molar_mass = g.molar_mass();
}

PreparedSystem::PreparedSystem(const scf::MOHamiltonian& mo, const PrepareOptions& options)
    : sys(qops::build_qubit_system(mo.hamiltonian, mo.properties.n_orbitals() ? &mo.properties : nullptr)),
      pool(OperatorPool::build(sys.n_qubits)),
      compiled(pool, sys.sector) {
  // <HF|H|HF> is the RHF energy for canonical RHF orbitals
  e_rhf = sys.h.expect(sys.hf, sys.hf).real();
  ansatz.n_qubits = sys.n_qubits;
  ansatz.n_electrons = sys.n_electrons;
  ansatz.reference_occupation = sys.hf_occupation;
  ansatz.state = sys.hf;
  ansatz.energy = ansatz.reference_energy = e_rhf;
  if (options.run_adapt) optimize(options.adapt);
}

void PreparedSystem::optimize(const AdaptOptions& options) {
  ansatz = run_adapt_vqe(sys.h, pool, compiled, sys.hf_occupation, options);
}

}  // namespace qlrsim::adapt
