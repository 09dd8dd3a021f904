#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace qlrsim::eom {

/// Threshold on metric eigenvalues for every generalized solve.
inline constexpr double kMetricThreshold = 1e-8;

class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// X = U_kept diag(s_kept)^(-1/2) for the metric S = U diag(s) U^+, keeping
/// eigenvalues above `threshold`; X^+ S X = I.
struct CanonicalBasis {
  Eigen::MatrixXcd x;
  int dropped = 0;
};
CanonicalBasis canonical_orthogonalize(const Eigen::MatrixXcd& s, double threshold = kMetricThreshold);

/// Largest-magnitude entry (first one within 1e-8 of the maximum) made real
/// and positive.
void fix_phase(Eigen::VectorXcd& v);

double hermiticity_error(const Eigen::MatrixXcd& m);

}  // namespace qlrsim::eom
