#include "qlrsim/scf/rhf.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace qlrsim::scf {

Eigen::MatrixXd fock_matrix(const integrals::AOIntegralSet& ints, const Eigen::MatrixXd& density) {
  const Eigen::Index n = ints.overlap.rows();
  Eigen::MatrixXd f = ints.core_hamiltonian();
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q <= p; ++q) {
      double j = 0.0, k = 0.0;
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index s = 0; s < n; ++s) {
          j += density(r, s) * ints.eri(p, q, r, s);
          k += density(r, s) * ints.eri(p, r, q, s);
        }
      f(p, q) += j - 0.5 * k;
      f(q, p) = f(p, q);
    }
  return f;
}

namespace {

// Orders orbitals by energy; inside a degenerate block, by the coefficient
// vectors compared lexicographically. Each column's largest component is
// made positive first so the comparison is well defined.
void canonicalize(Eigen::VectorXd& eps, Eigen::MatrixXd& c) {
  const Eigen::Index n = eps.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < c.rows(); ++i)
      if (std::abs(c(i, k)) > std::abs(c(imax, k)) + 1e-10) imax = i;
    if (c(imax, k) < 0.0) c.col(k) *= -1.0;
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  constexpr double kDegenerate = 1e-8;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(eps(a) - eps(b)) > kDegenerate) return eps(a) < eps(b);
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      if (std::abs(c(i, a) - c(i, b)) > 1e-10) return c(i, a) > c(i, b);
    }
    return false;
  });
  Eigen::VectorXd e2(n);
  Eigen::MatrixXd c2(c.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    e2(k) = eps(order[k]);
    c2.col(k) = c.col(order[k]);
  }
  eps = e2;
  c = c2;
}

}  // namespace

ScfResult run_rhf(const integrals::AOIntegralSet& ints, int n_electrons, const ScfOptions& options) {
  const Eigen::Index n = ints.overlap.rows();
  if (n_electrons <= 0 || n_electrons % 2 != 0)
    throw ScfError("RHF requires a positive even electron count, got " + std::to_string(n_electrons));
  if (n_electrons > 2 * n) throw ScfError("more electrons than the basis can hold");
  const int nocc = n_electrons / 2;
  const Eigen::Index nvirt = n - nocc;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s_eig(ints.overlap);
  if (s_eig.eigenvalues().minCoeff() <= 1e-10) throw ScfError("overlap matrix is numerically singular");
  const Eigen::MatrixXd x = s_eig.eigenvectors() * s_eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                            s_eig.eigenvectors().transpose();
  const Eigen::MatrixXd h = ints.core_hamiltonian();

  auto diagonalize = [&](const Eigen::MatrixXd& f_ortho, Eigen::VectorXd& eps, Eigen::MatrixXd& c) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f_ortho);
    eps = es.eigenvalues();
    c = x * es.eigenvectors();
  };
  auto density_of = [&](const Eigen::MatrixXd& c) {
    const auto occ = c.leftCols(nocc);
    return Eigen::MatrixXd(2.0 * occ * occ.transpose());
  };
  auto energy_of = [&](const Eigen::MatrixXd& p) { return 0.5 * (p.cwiseProduct(h + fock_matrix(ints, p))).sum(); };

  ScfResult result;
  result.n_electrons = n_electrons;
  Eigen::VectorXd eps;
  Eigen::MatrixXd c;
  diagonalize(x.transpose() * h * x, eps, c);
  Eigen::MatrixXd p = density_of(c);

  std::deque<Eigen::MatrixXd> diis_f, diis_e;
  double previous_energy = 0.0, best_energy = 0.0;
  Eigen::MatrixXd best_c = c;
  int rises = 0, iter = 0;
  bool converged = false, second_order = false;

  auto record = [&](double e_elec, double gnorm, double shift, int diis_dim) {
    result.log.push_back({iter, e_elec + ints.nuclear_repulsion, gnorm, shift, diis_dim});
  };

  // Roothaan iterations with DIIS extrapolation.
  while (++iter <= options.max_iterations) {
    const Eigen::MatrixXd f = fock_matrix(ints, p);
    const double e_elec = 0.5 * (p.cwiseProduct(h + f)).sum();
    const Eigen::MatrixXd err = x.transpose() * (f * p * ints.overlap - ints.overlap * p * f) * x;
    const double gnorm = err.norm();
    record(e_elec, gnorm, options.level_shift, static_cast<int>(diis_f.size()));
    if (gnorm < options.gradient_tolerance) {
      converged = true;
      break;
    }
    if (iter == 1 || e_elec < best_energy) {
      best_energy = e_elec;
      best_c = c;
    }
    // Oscillation or stagnation hands over to the shifted Newton solver.
    if (iter > 1 && e_elec > previous_energy + 1e-9) ++rises;
    previous_energy = e_elec;
    if (options.auto_level_shift && (rises >= 4 || iter >= options.diis_iterations)) {
      second_order = true;
      break;
    }

    Eigen::MatrixXd f_ortho = x.transpose() * f * x;
    if (options.diis_size > 1) {
      diis_f.push_back(f_ortho);
      diis_e.push_back(err);
      if (static_cast<int>(diis_f.size()) > options.diis_size) {
        diis_f.pop_front();
        diis_e.pop_front();
      }
      const int m = static_cast<int>(diis_f.size());
      if (m >= 2) {
        Eigen::MatrixXd b = Eigen::MatrixXd::Constant(m + 1, m + 1, -1.0);
        b(m, m) = 0.0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) b(i, j) = diis_e[i].cwiseProduct(diis_e[j]).sum();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
        rhs(m) = -1.0;
        const Eigen::VectorXd w = b.completeOrthogonalDecomposition().solve(rhs);
        f_ortho.setZero();
        for (int i = 0; i < m; ++i) f_ortho += w(i) * diis_f[i];
      }
    }
    if (options.level_shift != 0.0) {
      const Eigen::MatrixXd c_ortho = x.inverse() * c;
      const auto virt = c_ortho.rightCols(nvirt);
      f_ortho += options.level_shift * virt * virt.transpose();
    }
    diagonalize(f_ortho, eps, c);
    p = density_of(c);
  }

  // Level-shifted Newton steps on the occupied-virtual rotations
  // C -> C exp(K), K_ai = kappa_ai. The gradient is 4 F_ai (MO basis); the
  // Hessian comes from central differences of the energy and is shifted to
  // be positive definite, which keeps every step downhill.
  if (second_order) {
    c = best_c;
    const int np = static_cast<int>(nocc * nvirt);
    auto rotated = [&](const Eigen::MatrixXd& c0, const Eigen::VectorXd& kappa) {
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index a = 0; a < nvirt; ++a)
        for (Eigen::Index i = 0; i < nocc; ++i) {
          k(nocc + a, i) = kappa(a * nocc + i);
          k(i, nocc + a) = -kappa(a * nocc + i);
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-(k * k));
      // exp(K) for antisymmetric K via the eigen-decomposition of K^T K.
      Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
      const Eigen::MatrixXd kv = k * es.eigenvectors();
      for (Eigen::Index j = 0; j < n; ++j) {
        const double w = std::sqrt(std::max(es.eigenvalues()(j), 0.0));
        const double cw = std::cos(w), sw = w > 1e-12 ? std::sin(w) / w : 1.0;
        u += (cw * es.eigenvectors().col(j) + sw * kv.col(j)) * es.eigenvectors().col(j).transpose();
      }
      return Eigen::MatrixXd(c0 * u);
    };
    const double fd = 1e-3;
    while (++iter <= options.max_iterations) {
      p = density_of(c);
      const Eigen::MatrixXd f = fock_matrix(ints, p);
      const double e0 = 0.5 * (p.cwiseProduct(h + f)).sum();
      const double gnorm = (x.transpose() * (f * p * ints.overlap - ints.overlap * p * f) * x).norm();
      const Eigen::MatrixXd fmo = c.transpose() * f * c;
      Eigen::VectorXd g(np);
      for (Eigen::Index a = 0; a < nvirt; ++a)
        for (Eigen::Index i = 0; i < nocc; ++i) g(a * nocc + i) = 4.0 * fmo(nocc + a, i);
      if (gnorm < options.gradient_tolerance) {
        record(e0, gnorm, 0.0, 0);
        converged = true;
        break;
      }
      Eigen::MatrixXd hess(np, np);
      auto e_at = [&](const Eigen::VectorXd& kappa) { return energy_of(density_of(rotated(c, kappa))); };
      for (int k = 0; k < np; ++k) {
        Eigen::VectorXd dk = Eigen::VectorXd::Zero(np);
        dk(k) = fd;
        hess(k, k) = (e_at(dk) - 2.0 * e0 + e_at(-dk)) / (fd * fd);
        for (int l = 0; l < k; ++l) {
          Eigen::VectorXd dl = Eigen::VectorXd::Zero(np);
          dl(l) = fd;
          hess(k, l) = hess(l, k) = (e_at(dk + dl) - e_at(dk - dl) - e_at(dl - dk) + e_at(-dk - dl)) / (4.0 * fd * fd);
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(hess);
      const double shift = std::max(0.0, options.fallback_shift - hs.eigenvalues().minCoeff());
      record(e0, gnorm, shift, 0);
      Eigen::VectorXd step = -(hess + shift * Eigen::MatrixXd::Identity(np, np)).ldlt().solve(g);
      // At a saddle point the shifted step along the negative-curvature
      // direction is tiny; follow that direction explicitly.
      if (hs.eigenvalues()(0) < -1e-5) {
        const Eigen::VectorXd v = hs.eigenvectors().col(0);
        step += (g.dot(v) > 0.0 ? -0.2 : 0.2) * v;
      }
      if (step.norm() > 0.5) step *= 0.5 / step.norm();
      // Backtrack until the energy does not rise.
      Eigen::MatrixXd c_new = rotated(c, step);
      // Near the minimum the energy change drops below rounding, so the test
      // is skipped there.
      for (int tries = 0; tries < 30 && gnorm > 1e-6 && energy_of(density_of(c_new)) > e0 + 1e-12; ++tries) {
        step *= 0.5;
        c_new = rotated(c, step);
      }
      c = c_new;
      // Close to the minimum plain Roothaan steps finish faster and
      // canonicalize the orbitals.
      if (gnorm < 1e-5) {
        Eigen::MatrixXd c_try;
        diagonalize(x.transpose() * fock_matrix(ints, density_of(c)) * x, eps, c_try);
        if (energy_of(density_of(c_try)) <= energy_of(density_of(c)) + 1e-12) c = c_try;
      }
    }
    p = density_of(c);
  }

  if (!converged) {
    std::ostringstream msg;
    msg << "RHF did not converge in " << options.max_iterations << " iterations (gradient "
        << result.log.back().gradient_norm << ")";
    throw ScfError(msg.str());
  }

  // Final canonical orbitals from the converged Fock matrix.
  const Eigen::MatrixXd f = fock_matrix(ints, p);
  diagonalize(x.transpose() * f * x, eps, c);
  canonicalize(eps, c);
  result.coefficients = c;
  result.orbital_energies = eps;
  result.density = density_of(c);
  const Eigen::MatrixXd f_final = fock_matrix(ints, result.density);
  result.electronic_energy = 0.5 * (result.density.cwiseProduct(h + f_final)).sum();
  result.energy = result.electronic_energy + ints.nuclear_repulsion;
  result.gradient_norm =
      (x.transpose() * (f_final * result.density * ints.overlap - ints.overlap * result.density * f_final) * x).norm();
  return result;
}

}  // namespace qlrsim::scf
