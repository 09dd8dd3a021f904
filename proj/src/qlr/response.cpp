#include "qlrsim/qlr/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qlrsim/qops/sector.hpp"

namespace qlrsim::qlr {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

namespace {

double expect(const qops::SectorOperator& y, const VectorXcd& v) { return y.expect(v, v).real() / v.squaredNorm(); }

// <a|Y|b> from expectation values only, for normalized a and b-direction of
// squared norm nb2 orthogonal to a: both superpositions (a + b), (a + i b)
// then have squared norm 1 + nb2.
cplx measured_bracket(double ya, double yb, double y_sum, double y_isum, double nb2) {
  const double re = 0.5 * ((1.0 + nb2) * y_sum - nb2 * yb - ya);
  const double im = 0.5 * (ya + nb2 * yb - (1.0 + nb2) * y_isum);
  return {re, im};
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double nearest_pole(const std::vector<double>& poles, double target) {
  double best = std::numeric_limits<double>::quiet_NaN(), dist = std::numeric_limits<double>::infinity();
  for (double p : poles)
    if (std::abs(p - target) < dist) {
      dist = std::abs(p - target);
      best = p;
    }
  return best;
}

// Condition number of the system matrix a, from its eigenvalues f(pole)
// when a is normal and from singular values otherwise. Throws
// ResonanceError naming the pole nearest to `resonant_pole_target`.
template <class F>
double check_condition(const Eigen::MatrixXcd& a, bool normal, const std::vector<double>& poles, F f,
                       double omega, double resonant_pole_target, double scale) {
  double smax = 0.0, smin = std::numeric_limits<double>::infinity();
  if (normal) {
    for (double p : poles) {
      smax = std::max(smax, std::abs(f(p)));
      smin = std::min(smin, std::abs(f(p)));
    }
  } else {
    Eigen::JacobiSVD<MatrixXcd> svd(a);
    smax = svd.singularValues().maxCoeff();
    smin = svd.singularValues().minCoeff();
  }
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  // a 1x1 system has condition 1 even on the pole; compare against the
  // matrix scale as well
  if (!(cond <= kConditionLimit) || smin < scale / kConditionLimit) {
    const double pole = nearest_pole(poles, resonant_pole_target);
    throw ResonanceError("response equations are singular at omega = " + format(omega) +
                             " hartree (excitation energy " + format(pole) + ")",
                         omega, pole);
  }
  return cond;
}

template <class Mat, class Rhs>
Rhs refined_solve(const Mat& a, const Eigen::PartialPivLU<Mat>& lu, const Rhs& b) {
  Rhs x = lu.solve(b);
  x += lu.solve(b - a * x);
  return x;
}

bool is_real(const VectorXcd& v) { return v.imag().cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, v.norm()); }
bool is_imaginary(const VectorXcd& v) {
  return v.real().cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, v.norm());
}

}  // namespace

ZVector build_z_vector(const eom::ExcitationManifold& manifold, const eom::GroundState& ground,
                       const qops::SectorOperator& y, std::string property, MatrixPath path) {
  if (manifold.variant == Variant::Bare) throw eom::ManifoldError("response needs the sc or proj manifold");
  ZVector z;
  z.variant = manifold.variant;
  z.property = std::move(property);
  const auto n = static_cast<Eigen::Index>(manifold.size());
  z.values.resize(n);
  if (path == MatrixPath::Direct) {
    for (Eigen::Index k = 0; k < n; ++k) z.values[k] = ground.psi.dot(y.apply(manifold.basis.col(k)));
    return z;
  }
  const double ya = expect(y, ground.psi);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto* g = &manifold.ops[static_cast<std::size_t>(k)];
    double yb, y_sum, y_isum, nb2;
    if (manifold.variant == Variant::SelfConsistent) {
      // U G|0>, U (1 + G)|0>/sqrt2, U (1 + iG)|0>/sqrt2
      const auto& u = ground.circuit;
      const auto& ref = ground.reference;
      yb = expect(y, u.apply(qops::prepare_superposition({{g, 1.0}}, ref)));
      y_sum = expect(y, u.apply(qops::prepare_superposition({{nullptr, 1.0}, {g, 1.0}}, ref)));
      y_isum = expect(y, u.apply(qops::prepare_superposition({{nullptr, 1.0}, {g, cplx(0.0, 1.0)}}, ref)));
      nb2 = 1.0;
    } else {
      // shifted states are orthogonal to Psi0 but not normalized; their norm
      // <Psi0|Gbar+ Gbar|Psi0> is itself an expectation value
      const VectorXcd b = manifold.basis.col(k);
      nb2 = b.squaredNorm();
      if (nb2 < 1e-24) {
        z.values[k] = 0.0;
        continue;
      }
      yb = expect(y, b);
      y_sum = expect(y, ground.psi + b);
      y_isum = expect(y, ground.psi + cplx(0.0, 1.0) * b);
    }
    z.values[k] = measured_bracket(ya, yb, y_sum, y_isum, nb2);
  }
  return z;
}

ResponseSetup build_response_setup(const eom::ExcitationManifold& manifold, const eom::GroundState& ground,
                                   const std::array<qops::SectorOperator, 3>& dipole,
                                   const std::array<qops::SectorOperator, 3>* magnetic, MatrixPath path) {
  static const char* const mu_names[] = {"mu_x", "mu_y", "mu_z"};
  static const char* const m_names[] = {"m_x", "m_y", "m_z"};
  ResponseSetup s;
  s.variant = manifold.variant;
  if (manifold.variant == Variant::SelfConsistent)
    s.matrices = eom::build_sc_matrix(manifold, ground, path);
  else if (manifold.variant == Variant::Projected)
    s.matrices = eom::build_proj_matrices(manifold, ground);
  else
    throw eom::ManifoldError("response needs the sc or proj manifold");
  for (int i = 0; i < 3; ++i) s.dipole[i] = build_z_vector(manifold, ground, dipole[i], mu_names[i], path);
  if (magnetic) {
    for (int i = 0; i < 3; ++i) s.magnetic[i] = build_z_vector(manifold, ground, (*magnetic)[i], m_names[i], path);
    s.has_magnetic = true;
  }
  return s;
}

ResponseSolver::ResponseSolver(const eom::SubspaceMatrices& mats, double metric_threshold) {
  if (mats.method == eom::Method::ProjEom) {
    if (mats.v.rows() != mats.m.rows()) throw std::invalid_argument("proj response needs the metric V");
    auto cb = eom::canonical_orthogonalize(mats.v, metric_threshold);
    x_ = cb.x;
    dropped_ = cb.dropped;
    m_ = x_.adjoint() * mats.m * x_;
  } else if (mats.method == eom::Method::ScEom) {
    m_ = mats.m;
  } else {
    throw std::invalid_argument("response needs sc or proj matrices");
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  hermitian_ = eom::hermiticity_error(m_) <= 1e-10 * scale;
  real_symmetric_ = hermitian_ && m_.imag().cwiseAbs().maxCoeff() <= 1e-12 * scale;
  if (hermitian_) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (m_ + m_.adjoint()), Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < m_.rows(); ++k) poles_.push_back(es.eigenvalues()[k]);
  } else {
    Eigen::ComplexEigenSolver<MatrixXcd> es(m_, false);
    for (Eigen::Index k = 0; k < m_.rows(); ++k) poles_.push_back(es.eigenvalues()[k].real());
    std::sort(poles_.begin(), poles_.end());
  }
}

VectorXcd ResponseSolver::reduce(const ZVector& z) const {
  if (z.values.size() != (x_.size() ? x_.rows() : m_.rows()))
    throw std::invalid_argument("Z vector " + z.property + " does not match the response matrices");
  return x_.size() ? VectorXcd(x_.transpose() * z.values) : z.values;
}

MatrixXcd ResponseSolver::responses(const std::vector<const ZVector*>& xs, const std::vector<const ZVector*>& ys,
                                    double omega, SolveForm form, SolveDiagnostics* diag) const {
  std::vector<VectorXcd> rx, ry;
  for (const auto* z : xs) rx.push_back(reduce(*z));
  for (const auto* z : ys) ry.push_back(reduce(*z));
  const auto n = m_.rows();
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  MatrixXcd out = MatrixXcd::Zero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  double worst = 0.0;

  // which (i, j) pairs the combined form can take
  std::vector<std::vector<int>> use_combined(xs.size(), std::vector<int>(ys.size(), 0));
  bool any_separated = form == SolveForm::Separated;
  if (form == SolveForm::Combined) {
    std::string why;
    if (omega == 0.0)
      why = "combined form is singular at omega = 0; used the separated equations";
    else if (!real_symmetric_)
      why = "combined form needs a real symmetric M; used the separated equations";
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const bool ok = why.empty() && is_real(rx[i]) && (is_real(ry[j]) || is_imaginary(ry[j]));
        use_combined[i][j] = ok;
        any_separated |= !ok;
      }
    if (why.empty() && any_separated) why = "complex Z vectors: some responses used the separated equations";
    if (!why.empty() && diag) {
      diag->fallback = true;
      diag->notices.push_back(why);
    }
  }

  if (any_separated) {
    // (M - w) A = Z_Y*, (M* + w) B = Z_Y
    const MatrixXcd a1 = m_ - omega * id, a2 = m_.conjugate() + omega * id;
    worst = std::max(worst, check_condition(a1, hermitian_, poles_, [&](double p) { return p - omega; }, omega,
                                            omega, scale));
    worst = std::max(worst, check_condition(a2, hermitian_, poles_, [&](double p) { return p + omega; }, omega,
                                            -omega, scale));
    const Eigen::PartialPivLU<MatrixXcd> lu1(a1), lu2(a2);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      bool needed = false;
      for (std::size_t i = 0; i < xs.size(); ++i) needed |= !use_combined[i][j];
      if (!needed) continue;
      const VectorXcd a = refined_solve<MatrixXcd, VectorXcd>(a1, lu1, ry[j].conjugate());
      const VectorXcd b = refined_solve<MatrixXcd, VectorXcd>(a2, lu2, ry[j]);
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (!use_combined[i][j])
          out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              -(rx[i].transpose() * a)(0) - rx[i].dot(b);
    }
  }

  if (form == SolveForm::Combined && omega != 0.0 && real_symmetric_) {
    // (M^2 - w^2) D = 2 M Z (real Z) or 2 w Z (imaginary Z)
    const MatrixXd m = m_.real();
    const MatrixXd k = m * m - omega * omega * MatrixXd::Identity(n, n);
    const Eigen::PartialPivLU<MatrixXd> lu(k);
    bool checked = false;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      bool needed = false;
      for (std::size_t i = 0; i < xs.size(); ++i) needed |= static_cast<bool>(use_combined[i][j]);
      if (!needed) continue;
      if (!checked) {
        worst = std::max(worst, check_condition(k.cast<cplx>(), true, poles_,
                                                [&](double p) { return p * p - omega * omega; }, omega,
                                                std::abs(omega), scale * scale));
        checked = true;
      }
      const bool electric = is_real(ry[j]);
      const VectorXd rhs = electric ? VectorXd(2.0 * m * ry[j].real()) : VectorXd(2.0 * omega * ry[j].imag());
      const VectorXd d = refined_solve<MatrixXd, VectorXd>(k, lu, rhs);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!use_combined[i][j]) continue;
        const double v = rx[i].real().dot(d);
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = electric ? cplx(-v, 0.0) : cplx(0.0, v);
      }
    }
  }
  if (diag) diag->condition = std::max(diag->condition, worst);
  return out;
}

cplx ResponseSolver::separated(const ZVector& x, const ZVector& y, double omega, SolveDiagnostics* diag) const {
  return responses({&x}, {&y}, omega, SolveForm::Separated, diag)(0, 0);
}

cplx ResponseSolver::combined(const ZVector& x, const ZVector& y, double omega, SolveDiagnostics* diag) const {
  return responses({&x}, {&y}, omega, SolveForm::Combined, diag)(0, 0);
}

ResponseResult compute_response(const ResponseSolver& solver, const ResponseSetup& setup, double omega,
                                SolveForm form, double molar_mass) {
  ResponseResult r;
  r.tensors.omega = omega;
  std::vector<const ZVector*> xs, ys;
  for (const auto& z : setup.dipole) xs.push_back(&z);
  ys = xs;
  if (setup.has_magnetic)
    for (const auto& z : setup.magnetic) ys.push_back(&z);
  const MatrixXcd all = solver.responses(xs, ys, omega, form, &r.diagnostics);
  r.tensors.mu_mu = all.leftCols(3);
  if (setup.has_magnetic) {
    r.tensors.mu_m = all.rightCols(3);
    r.tensors.has_magnetic = true;
  }
  r.isotropic_polarizability = r.tensors.isotropic_polarizability();
  if (setup.has_magnetic && omega != 0.0 && molar_mass > 0.0) r.specific_rotation = r.tensors.specific_rotation(molar_mass);
  return r;
}

}  // namespace qlrsim::qlr
