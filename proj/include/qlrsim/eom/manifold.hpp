#pragma once

#include <string>
#include <vector>

#include "qlrsim/adapt/ansatz.hpp"
#include "qlrsim/qops/sector.hpp"

namespace qlrsim::eom {

using qops::cplx;

/// Reference |0>, prepared ground state |Psi0> = U|0> and the Hamiltonian,
/// all in one (N, S_z) sector.
struct GroundState {
  const qops::SectorOperator* hamiltonian = nullptr;
  std::vector<int> occupation;  // reference determinant
  Eigen::VectorXcd reference;
  Eigen::VectorXcd psi;
  double energy = 0.0;  // <Psi0|H|Psi0>
  adapt::AnsatzCircuit circuit;

  const qops::SectorPtr& sector() const { return hamiltonian->basis(); }
};

GroundState make_ground_state(const qops::SectorOperator& h, const std::vector<int>& occupation,
                              adapt::AnsatzCircuit circuit);

enum class Variant { Bare, SelfConsistent, Projected };
std::string to_string(Variant v);

/// a+_{create...} a_{annihilate...}, annihilators in the order they act.
struct Excitation {
  std::vector<int> create;
  std::vector<int> annihilate;
  int rank() const { return static_cast<int>(create.size()); }
  std::string label() const;
};

/// HF-referenced S_z-conserving excitations up to `max_rank`: singles
/// a+_a a_i, then doubles a+_a a+_b a_j a_i (a > b, i > j), then higher
/// ranks in the same pattern; each block in lexicographic (occupied,
/// virtual) order.
std::vector<Excitation> enumerate_excitations(int n_qubits, const std::vector<int>& occupied, int max_rank = 2);

class ManifoldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExcitationManifold {
  Variant variant = Variant::Bare;
  std::vector<Excitation> excitations;
  std::vector<qops::SectorOperator> ops;  // G_mu in the sector
  std::vector<cplx> shifts;               // <Psi0|G_mu|Psi0>, projected variant only
  /// Columns are the dressed states: U G_mu|0> (sc) or Gbar_mu|Psi0> (proj).
  /// Empty for the bare variant.
  Eigen::MatrixXcd basis;

  std::size_t size() const { return excitations.size(); }
};

ExcitationManifold build_manifold(const GroundState& ground, Variant variant, int max_rank = 2);

}  // namespace qlrsim::eom
