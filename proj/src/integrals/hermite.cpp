#include "qlrsim/integrals/hermite.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "qlrsim/units.hpp"

namespace qlrsim::integrals {

void boys(int max_n, double t, double* out) {
  if (t < 1e-13) {
    for (int n = 0; n <= max_n; ++n) out[n] = 1.0 / (2 * n + 1) - t / (2 * n + 3);
    return;
  }
  const double a = max_n + 0.5;
  out[max_n] = boost::math::tgamma_lower(a, t) / (2.0 * std::pow(t, a));
  const double et = std::exp(-t);
  for (int n = max_n - 1; n >= 0; --n) out[n] = (2.0 * t * out[n + 1] + et) / (2 * n + 1);
}

HermiteExpansion1D::HermiteExpansion1D(double a, double b, double ax, double bx)
    : a_(a), b_(b), p_(a + b), px_((a * ax + b * bx) / (a + b)) {
  const double q = a * b / p_;
  const double qx = ax - bx;
  const double xpa = px_ - ax;
  const double xpb = px_ - bx;
  const double inv2p = 0.5 / p_;
  auto get = [&](int i, int j, int t) -> double {
    if (t < 0 || t > i + j) return 0.0;
    return e_[i][j][t];
  };
  e_[0][0][0] = std::exp(-q * qx * qx);
  for (int i = 0; i <= kMaxI; ++i) {
    for (int j = 0; j <= kMaxJ; ++j) {
      if (i == 0 && j == 0) continue;
      for (int t = 0; t <= i + j; ++t) {
        if (j == 0) {
          e_[i][j][t] = inv2p * get(i - 1, j, t - 1) + xpa * get(i - 1, j, t) + (t + 1) * get(i - 1, j, t + 1);
        } else {
          e_[i][j][t] = inv2p * get(i, j - 1, t - 1) + xpb * get(i, j - 1, t) + (t + 1) * get(i, j - 1, t + 1);
        }
      }
    }
  }
}

double HermiteExpansion1D::overlap(int i, int j) const {
  if (i < 0 || j < 0) return 0.0;
  return (*this)(i, j, 0) * std::sqrt(units::kPi / p_);
}

double HermiteExpansion1D::moment(int i, int j, double c) const {
  return ((*this)(i, j, 1) + (px_ - c) * (*this)(i, j, 0)) * std::sqrt(units::kPi / p_);
}

double HermiteExpansion1D::derivative(int i, int j) const {
  double d = -2.0 * b_ * overlap(i, j + 1);
  if (j > 0) d += j * overlap(i, j - 1);
  return d;
}

double HermiteExpansion1D::second_derivative(int i, int j) const {
  double d = -2.0 * b_ * (2 * j + 1) * overlap(i, j) + 4.0 * b_ * b_ * overlap(i, j + 2);
  if (j > 1) d += j * (j - 1) * overlap(i, j - 2);
  return d;
}

HermiteCoulomb::HermiteCoulomb(int max_l, double p, const Eigen::Vector3d& pc) {
  double f[kMaxL + 1];
  boys(max_l, p * pc.squaredNorm(), f);
  double factor = 1.0;
  for (int n = 0; n <= max_l; ++n) {
    r_[n][0][0][0] = factor * f[n];
    factor *= -2.0 * p;
  }
  // r_[n] holds R^n_{tuv}; fill orders t+u+v = 1..max_l - n.
  for (int n = max_l - 1; n >= 0; --n) {
    for (int total = 1; total <= max_l - n; ++total) {
      for (int t = 0; t <= total; ++t) {
        for (int u = 0; u <= total - t; ++u) {
          const int v = total - t - u;
          double val;
          if (t > 0) {
            val = pc.x() * r_[n + 1][t - 1][u][v];
            if (t > 1) val += (t - 1) * r_[n + 1][t - 2][u][v];
          } else if (u > 0) {
            val = pc.y() * r_[n + 1][t][u - 1][v];
            if (u > 1) val += (u - 1) * r_[n + 1][t][u - 2][v];
          } else {
            val = pc.z() * r_[n + 1][t][u][v - 1];
            if (v > 1) val += (v - 1) * r_[n + 1][t][u][v - 2];
          }
          r_[n][t][u][v] = val;
        }
      }
    }
  }
}

double primitive_overlap(double a, const std::array<int, 3>& pa, const Eigen::Vector3d& ra, double b,
                         const std::array<int, 3>& pb, const Eigen::Vector3d& rb) {
  double s = 1.0;
  for (int k = 0; k < 3; ++k) s *= HermiteExpansion1D(a, b, ra[k], rb[k]).overlap(pa[k], pb[k]);
  return s;
}

}  // namespace qlrsim::integrals
