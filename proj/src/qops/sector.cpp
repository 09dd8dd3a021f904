#include "qlrsim/qops/sector.hpp"

#include <cmath>

namespace qlrsim::qops {

namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
constexpr std::uint64_t kEvenMask = 0x5555555555555555ULL;
constexpr double kLeakTolerance = 1e-12;

SparseOp from_triplets(Eigen::Index n, std::vector<Eigen::Triplet<cplx>>& trip) {
  SparseOp m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(cplx(0.0), kPruneThreshold);
  m.makeCompressed();
  return m;
}

}  // namespace

SectorBasis::SectorBasis(int n_qubits, int n_alpha, int n_beta) : n_(n_qubits), na_(n_alpha), nb_(n_beta) {
  if (n_qubits <= 0 || n_qubits > 30 || n_qubits % 2 != 0)
    throw OperatorError("sector basis needs an even qubit count up to 30");
  if (n_alpha < 0 || n_beta < 0 || n_alpha > n_qubits / 2 || n_beta > n_qubits / 2)
    throw OperatorError("electron counts do not fit the register");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const std::uint64_t even = kEvenMask & (dim - 1);
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (__builtin_popcountll(b & even) == n_alpha && __builtin_popcountll(b & ~even) == n_beta) {
      lookup_[b] = static_cast<Eigen::Index>(states_.size());
      states_.push_back(b);
    }
  }
  if (states_.empty()) throw OperatorError("empty sector");
}

SectorPtr SectorBasis::make(int n_qubits, int n_electrons, int two_sz) {
  if ((n_electrons + two_sz) % 2 != 0) throw OperatorError("electron count and 2S_z have different parity");
  return std::make_shared<const SectorBasis>(n_qubits, (n_electrons + two_sz) / 2, (n_electrons - two_sz) / 2);
}

Eigen::Index SectorBasis::index_of(std::uint64_t bits) const {
  const auto it = lookup_.find(bits);
  return it == lookup_.end() ? -1 : it->second;
}

Eigen::VectorXcd SectorBasis::restrict(const StateVector& full, double tol) const {
  if (full.n_qubits() != n_) throw OperatorError("register mismatch in sector restriction");
  Eigen::VectorXcd v(size());
  for (Eigen::Index i = 0; i < size(); ++i) v[i] = full[states_[static_cast<std::size_t>(i)]];
  const double outside = std::sqrt(std::max(0.0, full.amplitudes().squaredNorm() - v.squaredNorm()));
  if (outside > tol) throw SectorLeakError("state has weight " + std::to_string(outside) + " outside the sector");
  return v;
}

StateVector SectorBasis::embed(const Eigen::VectorXcd& v) const {
  if (v.size() != size()) throw OperatorError("sector vector has the wrong length");
  StateVector out(n_);
  for (Eigen::Index i = 0; i < size(); ++i) out.amplitudes()[static_cast<Eigen::Index>(states_[i])] = v[i];
  return out;
}

Eigen::VectorXcd SectorBasis::basis_vector(std::uint64_t bits) const {
  const Eigen::Index i = index_of(bits);
  if (i < 0) throw SectorLeakError("determinant outside the sector");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size());
  v[i] = 1.0;
  return v;
}

SectorOperator::SectorOperator(SectorPtr basis, SparseOp matrix) : basis_(std::move(basis)), m_(std::move(matrix)) {
  if (m_.rows() != basis_->size() || m_.cols() != basis_->size())
    throw OperatorError("sector operator dimension mismatch");
}

SectorOperator SectorOperator::from_pauli(const PauliSum& op, SectorPtr basis) {
  if (op.n_qubits() != basis->n_qubits()) throw OperatorError("register mismatch compiling a sector operator");
  // Group terms by flip mask: every term with the same x maps a column to
  // the same row, so the amplitudes can be summed before the leak test.
  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, cplx>>> by_flip;
  for (const auto& [p, c] : op.terms()) by_flip[p.x].push_back({p.z, kIPow[p.n_y() % 4] * c});
  std::vector<Eigen::Triplet<cplx>> trip;
  for (Eigen::Index col = 0; col < basis->size(); ++col) {
    const std::uint64_t b = basis->state(col);
    for (const auto& [x, zs] : by_flip) {
      cplx v{};
      for (const auto& [z, c] : zs) v += (__builtin_popcountll(b & z) & 1) ? -c : c;
      if (std::abs(v) < kPruneThreshold) continue;
      const Eigen::Index row = basis->index_of(b ^ x);
      if (row < 0) {
        if (std::abs(v) > kLeakTolerance)
          throw SectorLeakError("operator leaves the (N, S_z) sector");
        continue;
      }
      trip.emplace_back(row, col, v);
    }
  }
  return SectorOperator(basis, from_triplets(basis->size(), trip));
}

SectorOperator SectorOperator::from_fermion(const FermionOperator& op, SectorPtr basis) {
  if (op.max_index() >= basis->n_qubits()) throw OperatorError("fermion index exceeds the register");
  std::vector<Eigen::Triplet<cplx>> trip;
  for (Eigen::Index col = 0; col < basis->size(); ++col) {
    const std::uint64_t b = basis->state(col);
    for (const auto& term : op.terms()) {
      const auto r = FermionOperator::apply_term(term, b);
      if (!r) continue;
      const Eigen::Index row = basis->index_of(r->second);
      if (row < 0) throw SectorLeakError("fermion operator leaves the (N, S_z) sector");
      trip.emplace_back(row, col, r->first * term.coeff);
    }
  }
  return SectorOperator(basis, from_triplets(basis->size(), trip));
}

SectorOperator SectorOperator::adjoint() const { return SectorOperator(basis_, SparseOp(m_.adjoint())); }

SectorOperator operator+(const SectorOperator& a, const SectorOperator& b) {
  return SectorOperator(a.basis_, SparseOp(a.m_ + b.m_));
}
SectorOperator operator-(const SectorOperator& a, const SectorOperator& b) {
  return SectorOperator(a.basis_, SparseOp(a.m_ - b.m_));
}
SectorOperator operator*(const SectorOperator& a, const SectorOperator& b) {
  return SectorOperator(a.basis_, SparseOp(a.m_ * b.m_));
}
SectorOperator operator*(cplx s, const SectorOperator& a) { return SectorOperator(a.basis_, SparseOp(s * a.m_)); }

SectorExponential::SectorExponential(SectorOperator generator) : t_(std::move(generator)) {
  const SparseOp& t = t_.matrix();
  const SparseOp herm = t + SparseOp(t.adjoint());
  for (Eigen::Index k = 0; k < herm.outerSize(); ++k)
    for (SparseOp::InnerIterator it(herm, k); it; ++it)
      if (std::abs(it.value()) > 1e-10) throw OperatorError("generator is not anti-Hermitian");
  const SparseOp cube = SparseOp(SparseOp(t * t) * t) + t;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < cube.outerSize(); ++k)
    for (SparseOp::InnerIterator it(cube, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  closed_ = worst < 1e-12;
  // Induced 1-norm bounds the spectral radius for the Taylor step size.
  Eigen::VectorXd col_sums = Eigen::VectorXd::Zero(t.cols());
  for (Eigen::Index k = 0; k < t.outerSize(); ++k)
    for (SparseOp::InnerIterator it(t, k); it; ++it) col_sums[it.col()] += std::abs(it.value());
  one_norm_ = col_sums.size() ? col_sums.maxCoeff() : 0.0;
}

Eigen::VectorXcd SectorExponential::apply(const Eigen::VectorXcd& v, double theta) const {
  if (theta == 0.0) return v;
  const SparseOp& t = t_.matrix();
  if (closed_) {
    const Eigen::VectorXcd t1 = t * v;
    const Eigen::VectorXcd t2 = t * t1;
    return v + std::sin(theta) * t1 + (1.0 - std::cos(theta)) * t2;
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * std::abs(theta) * one_norm_)));
  const double h = theta / steps;
  Eigen::VectorXcd current = v;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd sum = current, term = current;
    for (int k = 1; k < 60; ++k) {
      term = (h / k) * (t * term);
      sum += term;
      if (term.norm() < 1e-13 * std::max(1.0, current.norm()) / steps) break;
    }
    current = sum;
  }
  return current;
}

Eigen::VectorXcd prepare_superposition(const std::vector<SectorComponent>& components,
                                       const Eigen::VectorXcd& reference) {
  if (components.empty()) throw OperatorError("empty superposition");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(reference.size());
  for (const auto& c : components) out += c.op ? Eigen::VectorXcd(c.weight * c.op->apply(reference)) : Eigen::VectorXcd(c.weight * reference);
  const double nrm = out.norm();
  if (nrm < 1e-12) throw OperatorError("superposition vanishes: every component annihilates the reference");
  return out / nrm;
}

}  // namespace qlrsim::qops
