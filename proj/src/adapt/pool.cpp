#include "qlrsim/adapt/pool.hpp"

#include <set>
#include <sstream>

namespace qlrsim::adapt {

using qops::FermionOperator;
using qops::LadderOp;

std::string PoolGenerator::label() const {
  std::ostringstream s;
  for (int p : create) s << p << "^ ";
  for (std::size_t i = 0; i < annihilate.size(); ++i) s << (i ? " " : "") << annihilate[i];
  return s.str();
}

PoolGenerator make_generator(std::vector<int> create, std::vector<int> annihilate, int n_qubits) {
  if (create.size() != annihilate.size() || create.empty())
    throw qops::OperatorError("generator needs matching nonempty creation and annihilation lists");
  std::vector<LadderOp> ops;
  for (int p : create) ops.push_back({p, true});
  for (int q : annihilate) ops.push_back({q, false});
  const FermionOperator g = FermionOperator::product(ops);
  PoolGenerator out;
  out.create = std::move(create);
  out.annihilate = std::move(annihilate);
  out.tau = (g - g.adjoint()).normal_ordered();
  out.pauli = qops::jordan_wigner(out.tau, n_qubits);
  if (out.pauli.terms().empty()) throw qops::OperatorError("generator " + out.label() + " vanishes");
  return out;
}

OperatorPool::OperatorPool(int n_qubits, std::vector<PoolGenerator> generators)
    : n_qubits_(n_qubits), gens_(std::move(generators)) {}

OperatorPool OperatorPool::build(int n) {
  if (n < 2) throw qops::OperatorError("pool needs at least two spin orbitals");
  auto spin = [](int p) { return p & 1; };
  std::vector<PoolGenerator> gens;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < p; ++q)
      if (spin(p) == spin(q)) gens.push_back(make_generator({p}, {q}, n));
  // ordered pairs (p > q)
  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < p; ++q) pairs.push_back({p, q});
  for (const auto& [p, q] : pairs)
    for (const auto& [r, s] : pairs) {
      if (std::make_pair(p, q) <= std::make_pair(r, s)) continue;
      if (p == r || p == s || q == r || q == s) continue;
      if (spin(p) + spin(q) != spin(r) + spin(s)) continue;
      gens.push_back(make_generator({p, q}, {s, r}, n));
    }
  return OperatorPool(n, std::move(gens));
}

int OperatorPool::find(const std::string& label) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].label() == label) return static_cast<int>(i);
  return -1;
}

CompiledPool::CompiledPool(const OperatorPool& pool, qops::SectorPtr sector) : sector_(std::move(sector)) {
  exps_.reserve(pool.size());
  for (const auto& g : pool.generators())
    exps_.emplace_back(qops::SectorOperator::from_fermion(g.tau, sector_));
}

std::vector<double> pool_gradients(const qops::StateVector& state, const qops::PauliSum& hamiltonian,
                                   const OperatorPool& pool) {
  const qops::StateVector h_psi = qops::apply(hamiltonian, state);
  std::vector<double> g;
  g.reserve(pool.size());
  // <psi|[H,tau]|psi> = 2 Re <H psi|tau psi> for anti-Hermitian tau
  for (const auto& gen : pool.generators()) g.push_back(2.0 * h_psi.inner(qops::apply(gen.pauli, state)).real());
  return g;
}

std::vector<double> pool_gradients(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& h_psi,
                                   const CompiledPool& pool) {
  std::vector<double> g(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) g[k] = 2.0 * h_psi.dot(pool[k].generator().apply(psi)).real();
  return g;
}

}  // namespace qlrsim::adapt
