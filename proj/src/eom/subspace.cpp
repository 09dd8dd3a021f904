#include "qlrsim/eom/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "qlrsim/qops/jordan_wigner.hpp"

namespace qlrsim::eom {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

std::string to_string(Method m) {
  switch (m) {
    case Method::Qeom: return "qEOM";
    case Method::ScEom: return "q-sc-EOM";
    case Method::ProjEom: return "q-proj-EOM";
    case Method::Qse: return "QSE";
  }
  return "?";
}

std::string multiplicity_label(double s2) {
  static const char* names[] = {"singlet", "doublet", "triplet", "quartet", "quintet"};
  const double s = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * std::max(s2, 0.0)));
  const double twice = std::round(2.0 * s);
  const double ref = 0.5 * twice * (0.5 * twice + 1.0);
  if (std::abs(s2 - ref) > 0.05 || twice > 4) return "mixed";
  return names[static_cast<int>(twice)];
}

std::vector<double> ExcitedStateSet::energies() const {
  std::vector<double> e;
  for (const auto& s : states) e.push_back(s.energy);
  return e;
}

namespace {

// Columns op_k|v> for every manifold operator (or its adjoint).
MatrixXcd stack(const std::vector<qops::SectorOperator>& ops, const VectorXcd& v, bool adjoint) {
  MatrixXcd out(v.size(), static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto& m = ops[k].matrix();
    out.col(static_cast<Eigen::Index>(k)) = adjoint ? VectorXcd(m.adjoint() * v) : VectorXcd(m * v);
  }
  return out;
}

// <psi|[A_mu,[H,B_nu]]|psi> and <psi|[A_mu,B_nu]|psi> from state stacks:
// ad = A^+ psi, ap = A psi, bp = B psi, bh = B H psi, bdh = B^+ H psi, bd = B^+ psi.
struct Stacks {
  MatrixXcd ad, ap, bp, bh, bdh, bd;
};

MatrixXcd double_commutator(const Stacks& s, const qops::SectorOperator& h) {
  MatrixXcd hbp(s.bp.rows(), s.bp.cols()), hap(s.ap.rows(), s.ap.cols());
  for (Eigen::Index k = 0; k < s.bp.cols(); ++k) hbp.col(k) = h.apply(s.bp.col(k));
  for (Eigen::Index k = 0; k < s.ap.cols(); ++k) hap.col(k) = h.apply(s.ap.col(k));
  return s.ad.adjoint() * hbp - s.ad.adjoint() * s.bh - (s.bdh.adjoint() * s.ap).transpose() +
         (s.bd.adjoint() * hap).transpose();
}

MatrixXcd commutator(const Stacks& s) { return s.ad.adjoint() * s.bp - (s.bd.adjoint() * s.ap).transpose(); }

VectorXcd normalized(const VectorXcd& v) {
  const double n = v.norm();
  return n > 1e-14 ? VectorXcd(v / n) : v;
}

struct StateTools {
  const GroundState* ground;
  qops::SectorOperator s2;
  explicit StateTools(const GroundState& g)
      : ground(&g), s2(qops::SectorOperator::from_pauli(qops::s_squared_operator(g.sector()->n_qubits()),
                                                         g.sector())) {}
  void finish(ExcitedState& st, const VectorXcd& raw) const {
    st.vector = normalized(raw);
    st.overlap = ground->psi.dot(st.vector);
    st.s2 = s2.expect(st.vector, st.vector).real();
  }
};

void sort_states(ExcitedStateSet& set) {
  std::stable_sort(set.states.begin(), set.states.end(),
                   [](const ExcitedState& a, const ExcitedState& b) { return a.energy < b.energy; });
}

// Eigenpairs of a (possibly noisy, non-Hermitian) matrix in an orthonormal
// basis: Hermitian solver when Hermitian to 1e-10, general solver otherwise
// with real parts kept and |Im| recorded.
struct Eig {
  std::vector<double> values;
  std::vector<double> imag;
  MatrixXcd vectors;
};

Eig eigen(const MatrixXcd& m) {
  Eig out;
  if (hermiticity_error(m) < 1e-10) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (m + m.adjoint()));
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
      out.values.push_back(es.eigenvalues()[k]);
      out.imag.push_back(0.0);
    }
    out.vectors = es.eigenvectors();
    return out;
  }
  Eigen::ComplexEigenSolver<MatrixXcd> es(m);
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    out.values.push_back(es.eigenvalues()[k].real());
    out.imag.push_back(std::abs(es.eigenvalues()[k].imag()));
  }
  out.vectors = es.eigenvectors();
  for (Eigen::Index k = 0; k < m.rows(); ++k) out.vectors.col(k).normalize();
  return out;
}

void warn_imaginary(ExcitedStateSet& set) {
  double worst = 0.0;
  for (const auto& s : set.states) worst = std::max(worst, s.imag_residual);
  if (worst > 1e-8) set.warnings.push_back("eigenvalues carry imaginary parts up to " + std::to_string(worst));
}

}  // namespace

SubspaceMatrices build_qeom_matrices(const ExcitationManifold& manifold, const GroundState& ground) {
  const auto& h = *ground.hamiltonian;
  const VectorXcd& psi = ground.psi;
  const VectorXcd hpsi = h.apply(psi);
  const MatrixXcd g = stack(manifold.ops, psi, false), gd = stack(manifold.ops, psi, true);
  const MatrixXcd gh = stack(manifold.ops, hpsi, false), gdh = stack(manifold.ops, hpsi, true);
  SubspaceMatrices out;
  out.method = Method::Qeom;
  out.e0 = ground.energy;
  // A = G_mu^+, B = G_nu
  const Stacks sm{g, gd, g, gh, gdh, gd};
  // A = G_mu^+, B = G_nu^+
  const Stacks sq{g, gd, gd, gdh, gh, g};
  out.m = double_commutator(sm, h);
  out.q = -double_commutator(sq, h);
  out.v = commutator(sm);
  out.w = -commutator(sq);
  return out;
}

SubspaceMatrices build_sc_matrix(const ExcitationManifold& manifold, const GroundState& ground, MatrixPath path) {
  if (manifold.variant != Variant::SelfConsistent) throw ManifoldError("sc matrix needs the sc manifold");
  const auto& h = *ground.hamiltonian;
  const auto n = static_cast<Eigen::Index>(manifold.size());
  SubspaceMatrices out;
  out.method = Method::ScEom;
  out.e0 = ground.energy;
  if (path == MatrixPath::Direct) {
    MatrixXcd hb(manifold.basis.rows(), n);
    for (Eigen::Index k = 0; k < n; ++k) hb.col(k) = h.apply(manifold.basis.col(k));
    out.m = manifold.basis.adjoint() * hb;
    out.m.diagonal().array() -= ground.energy;
    return out;
  }
  // Measurement path: every element from <H> on U(theta) applied to a
  // prepared reference. Off-diagonals use (G_i + G_j)|0>/sqrt2 for the real
  // part and (G_i + i G_j)|0>/sqrt2 for the imaginary part:
  //   <H>_{i+j}  - E0 = (M_ii + M_jj)/2 + Re M_ij
  //   <H>_{i+ij} - E0 = (M_ii + M_jj)/2 - Im M_ij
  auto measure = [&](const std::vector<qops::SectorComponent>& comps) {
    const VectorXcd phi = ground.circuit.apply(qops::prepare_superposition(comps, ground.reference));
    return h.expect(phi, phi).real() - ground.energy;
  };
  out.m = MatrixXcd::Zero(n, n);
  std::vector<double> diag(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    diag[static_cast<std::size_t>(i)] = measure({{&manifold.ops[static_cast<std::size_t>(i)], 1.0}});
    out.m(i, i) = diag[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto* gi = &manifold.ops[static_cast<std::size_t>(i)];
      const auto* gj = &manifold.ops[static_cast<std::size_t>(j)];
      const double avg = 0.5 * (diag[static_cast<std::size_t>(i)] + diag[static_cast<std::size_t>(j)]);
      const double re = measure({{gi, 1.0}, {gj, 1.0}}) - avg;
      const double im = avg - measure({{gi, 1.0}, {gj, cplx(0.0, 1.0)}});
      out.m(i, j) = cplx(re, im);
      out.m(j, i) = cplx(re, -im);
    }
  return out;
}

SubspaceMatrices build_proj_matrices(const ExcitationManifold& manifold, const GroundState& ground) {
  if (manifold.variant != Variant::Projected) throw ManifoldError("proj matrices need the projected manifold");
  const auto& h = *ground.hamiltonian;
  const auto n = static_cast<Eigen::Index>(manifold.size());
  MatrixXcd hb(manifold.basis.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) hb.col(k) = h.apply(manifold.basis.col(k));
  SubspaceMatrices out;
  out.method = Method::ProjEom;
  out.e0 = ground.energy;
  out.v = manifold.basis.adjoint() * manifold.basis;
  // Measured from E0 so that the generalized eigenvalues are excitation
  // energies rather than total energies.
  out.m = manifold.basis.adjoint() * hb - ground.energy * out.v;
  return out;
}

SubspaceMatrices build_qse_matrices(const ExcitationManifold& manifold, const GroundState& ground) {
  const auto& h = *ground.hamiltonian;
  const auto n = static_cast<Eigen::Index>(manifold.size());
  MatrixXcd b(ground.psi.size(), n + 1);
  b.col(0) = ground.psi;
  for (Eigen::Index k = 0; k < n; ++k) b.col(k + 1) = manifold.ops[static_cast<std::size_t>(k)].apply(ground.psi);
  MatrixXcd hb(b.rows(), b.cols());
  for (Eigen::Index k = 0; k <= n; ++k) hb.col(k) = h.apply(b.col(k));
  SubspaceMatrices out;
  out.method = Method::Qse;
  out.e0 = ground.energy;
  out.m = b.adjoint() * hb;
  out.v = b.adjoint() * b;
  return out;
}

ExcitedStateSet solve_qeom(const SubspaceMatrices& mats, const ExcitationManifold* manifold,
                           const GroundState* ground, QeomNormalization normalization) {
  const Eigen::Index n = mats.dimension();
  MatrixXcd lhs(2 * n, 2 * n), metric(2 * n, 2 * n);
  lhs << mats.m, mats.q, mats.q.conjugate(), mats.m.conjugate();
  metric << mats.v, mats.w, -mats.w.conjugate(), -mats.v.conjugate();
  ExcitedStateSet set;
  set.method = Method::Qeom;
  set.threshold = 1e-10;
  Eigen::JacobiSVD<MatrixXcd> svd(metric, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  MatrixXcd inv = MatrixXcd::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > 1e-10)
      inv += svd.matrixV().col(k) * (1.0 / sv[k]) * svd.matrixU().col(k).adjoint();
    else
      ++set.dropped_directions;
  }
  if (set.dropped_directions > 0)
    set.warnings.push_back("qEOM metric is singular; " + std::to_string(set.dropped_directions) +
                           " directions handled by pseudo-inverse");
  Eigen::ComplexEigenSolver<MatrixXcd> es(inv * lhs);
  std::optional<StateTools> tools;
  if (manifold && ground) tools.emplace(*ground);
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    const cplx e = es.eigenvalues()[k];
    VectorXcd x = es.eigenvectors().col(k);
    const double norm = x.dot(metric * x).real();
    if (e.real() <= 0.0 || norm <= 1e-12) continue;
    x /= normalization == QeomNormalization::State ? std::sqrt(norm) : x.norm();
    fix_phase(x);
    ExcitedState st;
    st.energy = e.real();
    st.imag_residual = std::abs(e.imag());
    st.a = x.head(n);
    st.b = x.tail(n);
    if (tools) {
      VectorXcd raw = VectorXcd::Zero(ground->psi.size());
      for (Eigen::Index mu = 0; mu < n; ++mu) {
        const auto& g = manifold->ops[static_cast<std::size_t>(mu)].matrix();
        raw += st.a[mu] * (g * ground->psi) + st.b[mu] * (g.adjoint() * ground->psi);
      }
      // no orthogonalization against Psi0: the overlap is the diagnostic
      tools->finish(st, raw);
      if (std::abs(st.overlap) > 1e-8) {
        const cplx phase = std::conj(st.overlap) / std::abs(st.overlap);
        st.a *= phase;
        st.b *= phase;
        raw *= phase;
        st.vector *= phase;
        st.overlap *= phase;
      }
      if (normalization == QeomNormalization::Eigenvector) {
        st.vector = raw;
        st.overlap = ground->psi.dot(raw);
      }
    }
    set.states.push_back(std::move(st));
  }
  sort_states(set);
  warn_imaginary(set);
  return set;
}

ExcitedStateSet solve_sc(const SubspaceMatrices& mats, const ExcitationManifold* manifold, const GroundState* ground) {
  ExcitedStateSet set;
  set.method = Method::ScEom;
  const Eig eig = eigen(mats.m);
  std::optional<StateTools> tools;
  if (manifold && ground) tools.emplace(*ground);
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    ExcitedState st;
    st.energy = eig.values[k];
    st.imag_residual = eig.imag[k];
    st.a = eig.vectors.col(static_cast<Eigen::Index>(k));
    fix_phase(st.a);
    if (tools) tools->finish(st, manifold->basis * st.a);
    set.states.push_back(std::move(st));
  }
  sort_states(set);
  warn_imaginary(set);
  return set;
}

namespace {

ExcitedStateSet solve_generalized(Method method, const MatrixXcd& m, const MatrixXcd& v, double shift,
                                  const MatrixXcd* basis, const GroundState* ground) {
  ExcitedStateSet set;
  set.method = method;
  const CanonicalBasis cb = canonical_orthogonalize(v);
  set.dropped_directions = cb.dropped;
  const Eig eig = eigen(cb.x.adjoint() * m * cb.x);
  std::optional<StateTools> tools;
  if (basis && ground) tools.emplace(*ground);
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    ExcitedState st;
    st.energy = eig.values[k] - shift;
    st.imag_residual = eig.imag[k];
    st.a = cb.x * eig.vectors.col(static_cast<Eigen::Index>(k));
    fix_phase(st.a);
    if (tools) tools->finish(st, *basis * st.a);
    set.states.push_back(std::move(st));
  }
  sort_states(set);
  warn_imaginary(set);
  return set;
}

}  // namespace

ExcitedStateSet solve_proj(const SubspaceMatrices& mats, const ExcitationManifold* manifold,
                           const GroundState* ground) {
  return solve_generalized(Method::ProjEom, mats.m, mats.v, 0.0, manifold ? &manifold->basis : nullptr, ground);
}

ExcitedStateSet solve_qse(const SubspaceMatrices& mats, const ExcitationManifold* manifold,
                          const GroundState* ground) {
  MatrixXcd basis;
  if (manifold && ground) {
    basis.resize(ground->psi.size(), mats.dimension());
    basis.col(0) = ground->psi;
    for (Eigen::Index k = 1; k < mats.dimension(); ++k)
      basis.col(k) = manifold->ops[static_cast<std::size_t>(k - 1)].apply(ground->psi);
  }
  auto all = solve_generalized(Method::Qse, mats.m, mats.v, 0.0, basis.size() ? &basis : nullptr, ground);
  // lowest QSE root is the ground state; the rest are measured from it
  ExcitedStateSet set = all;
  set.states.erase(set.states.begin());
  const double e_ground = all.states.front().energy;
  for (auto& st : set.states) st.energy -= e_ground;
  return set;
}

ExcitedStateSet solve_qse(const ExcitationManifold& manifold, const GroundState& ground) {
  return solve_qse(build_qse_matrices(manifold, ground), &manifold, &ground);
}

}  // namespace qlrsim::eom
