#include "qlrsim/eom/manifold.hpp"

#include <sstream>

namespace qlrsim::eom {

GroundState make_ground_state(const qops::SectorOperator& h, const std::vector<int>& occupation,
                              adapt::AnsatzCircuit circuit) {
  GroundState g;
  g.hamiltonian = &h;
  g.occupation = occupation;
  std::uint64_t bits = 0;
  for (int p : occupation) bits |= std::uint64_t{1} << p;
  g.reference = h.basis()->basis_vector(bits);
  g.circuit = std::move(circuit);
  g.psi = g.circuit.apply(g.reference);
  g.energy = h.expect(g.psi, g.psi).real();
  return g;
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Bare: return "bare";
    case Variant::SelfConsistent: return "sc";
    case Variant::Projected: return "proj";
  }
  return "?";
}

std::string Excitation::label() const {
  std::ostringstream s;
  for (int p : create) s << p << "^ ";
  for (std::size_t i = 0; i < annihilate.size(); ++i) s << (i ? " " : "") << annihilate[i];
  return s.str();
}

std::vector<Excitation> enumerate_excitations(int n, const std::vector<int>& occupied, int max_rank) {
  std::vector<bool> occ(static_cast<std::size_t>(n), false);
  for (int p : occupied) occ[static_cast<std::size_t>(p)] = true;
  std::vector<int> o, v;
  for (int p = 0; p < n; ++p) (occ[static_cast<std::size_t>(p)] ? o : v).push_back(p);

  // ascending index combinations of size k, in lexicographic order
  auto combinations = [](const std::vector<int>& from, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> pick;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (static_cast<int>(pick.size()) == k) {
        out.push_back(pick);
        return;
      }
      for (std::size_t t = start; t < from.size(); ++t) {
        pick.push_back(from[t]);
        self(self, t + 1);
        pick.pop_back();
      }
    };
    rec(rec, 0);
    return out;
  };
  auto beta_count = [](const std::vector<int>& c) {
    int b = 0;
    for (int p : c) b += p & 1;
    return b;
  };

  std::vector<Excitation> out;
  for (int k = 1; k <= max_rank; ++k) {
    const auto holes = combinations(o, k), parts = combinations(v, k);
    for (const auto& h : holes)
      for (const auto& pa : parts) {
        if (beta_count(h) != beta_count(pa)) continue;
        out.push_back({std::vector<int>(pa.rbegin(), pa.rend()), h});
      }
  }
  return out;
}

ExcitationManifold build_manifold(const GroundState& ground, Variant variant, int max_rank) {
  ExcitationManifold m;
  m.variant = variant;
  const auto& sector = ground.sector();
  m.excitations = enumerate_excitations(sector->n_qubits(), ground.occupation, max_rank);
  if (m.excitations.empty()) throw ManifoldError("excitation manifold is empty");
  for (const auto& e : m.excitations) {
    std::vector<qops::LadderOp> lad;
    for (int p : e.create) lad.push_back({p, true});
    for (int q : e.annihilate) lad.push_back({q, false});
    m.ops.push_back(qops::SectorOperator::from_fermion(qops::FermionOperator::product(lad), sector));
  }
  const auto n = static_cast<Eigen::Index>(m.size());
  if (variant == Variant::SelfConsistent) {
    m.basis.resize(sector->size(), n);
    for (Eigen::Index k = 0; k < n; ++k)
      m.basis.col(k) = ground.circuit.apply(m.ops[static_cast<std::size_t>(k)].apply(ground.reference));
  } else if (variant == Variant::Projected) {
    m.basis.resize(sector->size(), n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::VectorXcd g = m.ops[static_cast<std::size_t>(k)].apply(ground.psi);
      const cplx shift = ground.psi.dot(g);
      m.shifts.push_back(shift);
      m.basis.col(k) = g - shift * ground.psi;
    }
  }
  return m;
}

}  // namespace qlrsim::eom
