#include "qlrsim/scf/mo_transform.hpp"

namespace qlrsim::scf {

SpinOrbitalHamiltonian::SpinOrbitalHamiltonian(const MOIntegrals& mo) : spatial_(mo) {
  const int norb = mo.n_orbitals();
  n_ = 2 * norb;
  h_ = Eigen::MatrixXd::Zero(n_, n_);
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      if (p % 2 == q % 2) h_(p, q) = mo.h(p / 2, q / 2);
  g_.assign(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0);
  auto direct = [&](int p, int q, int r, int s) {
    if (p % 2 != r % 2 || q % 2 != s % 2) return 0.0;
    return mo.eri(p / 2, r / 2, q / 2, s / 2);
  };
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s)
          g_[((p * n_ + q) * n_ + r) * n_ + s] = direct(p, q, r, s) - direct(p, q, s, r);
}

std::vector<int> SpinOrbitalHamiltonian::hf_occupation() const {
  std::vector<int> occ(spatial_.n_electrons);
  for (int i = 0; i < spatial_.n_electrons; ++i) occ[i] = i;
  return occ;
}

Eigen::MatrixXcd spin_block(const Eigen::MatrixXcd& spatial) {
  const Eigen::Index n = spatial.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) {
      out(2 * p, 2 * q) = spatial(p, q);
      out(2 * p + 1, 2 * q + 1) = spatial(p, q);
    }
  return out;
}

Eigen::MatrixXcd PropertyOperatorSet::dipole_spin(int k) const {
  return spin_block(dipole[k].cast<std::complex<double>>());
}

Eigen::MatrixXcd PropertyOperatorSet::magnetic_spin(int k) const {
  const std::complex<double> factor(0.0, -0.5);
  return spin_block(factor * angular_momentum[k].cast<std::complex<double>>());
}

integrals::EriTensor transform_eri(const integrals::EriTensor& ao, const Eigen::MatrixXd& c) {
  const std::size_t n = ao.dim();
  const std::size_t m = static_cast<std::size_t>(c.cols());
  // Successive single-index contractions, each O(N^5).
  std::vector<double> a(ao.data()), b(n * n * n * m, 0.0);
  auto idx = [](std::size_t i, std::size_t j, std::size_t k, std::size_t l, std::size_t nj, std::size_t nk,
                std::size_t nl) { return ((i * nj + j) * nk + k) * nl + l; };
  // (pq|rs) -> (pq|r l)
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t l = 0; l < m; ++l) {
          double v = 0.0;
          for (std::size_t s = 0; s < n; ++s) v += a[idx(p, q, r, s, n, n, n)] * c(s, l);
          b[idx(p, q, r, l, n, n, m)] = v;
        }
  std::vector<double> t(n * n * m * m, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          double v = 0.0;
          for (std::size_t r = 0; r < n; ++r) v += b[idx(p, q, r, l, n, n, m)] * c(r, k);
          t[idx(p, q, k, l, n, m, m)] = v;
        }
  std::vector<double> u(n * m * m * m, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          double v = 0.0;
          for (std::size_t q = 0; q < n; ++q) v += t[idx(p, q, k, l, n, m, m)] * c(q, j);
          u[idx(p, j, k, l, m, m, m)] = v;
        }
  integrals::EriTensor out(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          double v = 0.0;
          for (std::size_t p = 0; p < n; ++p) v += u[idx(p, j, k, l, m, m, m)] * c(p, i);
          out.set_symmetric(i, j, k, l, v);
        }
  return out;
}

MOIntegrals transform_core(const integrals::AOIntegralSet& ints, const ScfResult& scf) {
  const Eigen::MatrixXd& c = scf.coefficients;
  MOIntegrals mo;
  mo.h = c.transpose() * ints.core_hamiltonian() * c;
  mo.h = 0.5 * (mo.h + mo.h.transpose()).eval();
  mo.eri = transform_eri(ints.eri, c);
  mo.e_nuc = ints.nuclear_repulsion;
  mo.n_electrons = scf.n_electrons;
  return mo;
}

PropertyOperatorSet transform_properties(const integrals::AOIntegralSet& ints, const ScfResult& scf) {
  const Eigen::MatrixXd& c = scf.coefficients;
  PropertyOperatorSet props;
  props.gauge_origin = ints.gauge_origin;
  for (int k = 0; k < 3; ++k) {
    Eigen::MatrixXd d = c.transpose() * ints.dipole[k] * c;
    props.dipole[k] = 0.5 * (d + d.transpose());
    Eigen::MatrixXd l = c.transpose() * ints.angular_momentum[k] * c;
    props.angular_momentum[k] = 0.5 * (l - l.transpose());
  }
  return props;
}

MOHamiltonian transform_to_mo(const integrals::AOIntegralSet& ints, const ScfResult& scf) {
  return {SpinOrbitalHamiltonian(transform_core(ints, scf)), transform_properties(ints, scf)};
}

}  // namespace qlrsim::scf
