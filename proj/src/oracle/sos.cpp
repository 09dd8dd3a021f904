#include "qlrsim/oracle/sos.hpp"

#include <sstream>

namespace qlrsim::oracle {

using qops::cplx;

std::complex<double> sos_response(const FciSpectrum& spectrum, const qops::SectorOperator& x,
                                  const qops::SectorOperator& y, double omega) {
  const auto& states = spectrum.states;
  const double e0 = states.front().energy;
  for (std::size_t k = 1; k < states.size(); ++k) {
    const double wk = states[k].energy - e0;
    if (std::abs(omega - wk) < kResonanceGuard || std::abs(omega + wk) < kResonanceGuard) {
      std::ostringstream msg;
      msg << "frequency " << omega << " Eh is within " << kResonanceGuard << " Eh of excitation energy " << wk;
      throw ResonanceError(msg.str(), omega, wk);
    }
  }
  const Eigen::VectorXcd& v0 = states.front().vector;
  const Eigen::VectorXcd y0 = y.apply(v0);             // Y|0>
  const Eigen::VectorXcd x0 = x.apply(v0);             // X|0>
  const Eigen::VectorXcd xd0 = x.adjoint().apply(v0);  // X^+|0>, <0|X|k> = <k|X^+|0>*
  const Eigen::VectorXcd yd0 = y.adjoint().apply(v0);
  cplx sum{};
  for (std::size_t k = 1; k < states.size(); ++k) {
    const Eigen::VectorXcd& vk = states[k].vector;
    const double wk = states[k].energy - e0;
    const cplx x_0k = std::conj(vk.dot(xd0));
    const cplx y_k0 = vk.dot(y0);
    const cplx y_0k = std::conj(vk.dot(yd0));
    const cplx x_k0 = vk.dot(x0);
    sum += x_0k * y_k0 / (omega - wk) - y_0k * x_k0 / (omega + wk);
  }
  return sum;
}

ResponseTensors sos_tensors(const FciSpectrum& spectrum, const std::array<qops::SectorOperator, 3>& dipole,
                            const std::array<qops::SectorOperator, 3>* magnetic, double omega) {
  ResponseTensors t;
  t.omega = omega;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      t.mu_mu(i, j) = sos_response(spectrum, dipole[i], dipole[j], omega);
      if (magnetic) t.mu_m(i, j) = sos_response(spectrum, dipole[i], (*magnetic)[j], omega);
    }
  t.has_magnetic = magnetic != nullptr;
  return t;
}

SosObservables sos_observables(const FciSpectrum& spectrum, const std::array<qops::SectorOperator, 3>& dipole,
                               const std::array<qops::SectorOperator, 3>& magnetic, double omega,
                               double molar_mass) {
  SosObservables out;
  out.tensors = sos_tensors(spectrum, dipole, &magnetic, omega);
  out.isotropic_polarizability = out.tensors.isotropic_polarizability();
  out.specific_rotation = omega == 0.0 ? 0.0 : out.tensors.specific_rotation(molar_mass);
  return out;
}

Eigen::Matrix3d finite_field_polarizability(const std::function<double(const Eigen::Vector3d&)>& ground_energy,
                                            double h) {
  if (!(h > 0.0)) throw OracleError("finite-field step must be positive");
  auto e = [&](double fx, double fy, double fz) { return ground_energy(Eigen::Vector3d(fx, fy, fz)); };
  const double e0 = e(0, 0, 0);
  Eigen::Matrix3d alpha;
  auto field = [](int axis, double v) {
    Eigen::Vector3d f = Eigen::Vector3d::Zero();
    f[axis] = v;
    return f;
  };
  for (int i = 0; i < 3; ++i) {
    const double ep1 = ground_energy(field(i, h)), em1 = ground_energy(field(i, -h));
    const double ep2 = ground_energy(field(i, 2 * h)), em2 = ground_energy(field(i, -2 * h));
    alpha(i, i) = -(-ep2 + 16.0 * ep1 - 30.0 * e0 + 16.0 * em1 - em2) / (12.0 * h * h);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) {
      auto mixed = [&](double s) {
        const Eigen::Vector3d fi = field(i, s), fj = field(j, s);
        return (ground_energy(fi + fj) - ground_energy(fi - fj) - ground_energy(fj - fi) + ground_energy(-fi - fj)) /
               (4.0 * s * s);
      };
      const double d1 = mixed(h), d2 = mixed(2.0 * h);
      const double extrapolated = (4.0 * d1 - d2) / 3.0;
      // The O(h^2) error shrinks fourfold from 2h to h; a larger discrepancy
      // means the stencil is dominated by something else (noise, a level
      // crossing) and extrapolation cannot be trusted.
      const double scale = std::max({std::abs(alpha(i, i)), std::abs(alpha(j, j)), 1.0});
      if (std::abs(d1 - d2) > 1e-2 * scale)
        throw OracleError("finite-field Richardson extrapolation is unstable for this step size");
      alpha(i, j) = alpha(j, i) = -extrapolated;
    }
  return alpha;
}

Eigen::Matrix3d finite_field_polarizability(const qops::SectorOperator& hamiltonian,
                                            const std::array<qops::SectorOperator, 3>& dipole, double h) {
  // Shifting by the zero-field energy keeps eigenvalue roundoff relative to
  // the field response rather than to the total energy.
  Eigen::MatrixXcd h0 = hamiltonian.dense();
  const double shift = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h0, Eigen::EigenvaluesOnly).eigenvalues()[0];
  h0.diagonal().array() -= shift;
  std::array<Eigen::MatrixXcd, 3> mu;
  for (int k = 0; k < 3; ++k) mu[k] = dipole[k].dense();
  return finite_field_polarizability(
      [&](const Eigen::Vector3d& f) {
        const Eigen::MatrixXcd hf = h0 - f[0] * mu[0] - f[1] * mu[1] - f[2] * mu[2];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hf, Eigen::EigenvaluesOnly);
        return es.eigenvalues()[0];
      },
      h);
}

}  // namespace qlrsim::oracle
