#include "qlrsim/eom/linalg.hpp"

namespace qlrsim::eom {

CanonicalBasis canonical_orthogonalize(const Eigen::MatrixXcd& s, double threshold) {
  const Eigen::MatrixXcd sh = 0.5 * (s + s.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sh);
  const auto& lam = es.eigenvalues();
  CanonicalBasis out;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (lam[k] > threshold)
      keep.push_back(k);
    else
      ++out.dropped;
  }
  if (keep.empty()) throw MetricError("every metric eigenvalue is below the canonical-orthogonalization threshold");
  out.x.resize(s.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    out.x.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) / std::sqrt(lam[keep[c]]);
  return out;
}

void fix_phase(Eigen::VectorXcd& v) {
  if (v.size() == 0) return;
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > vmax - 1e-8) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      return;
    }
}

double hermiticity_error(const Eigen::MatrixXcd& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace qlrsim::eom
