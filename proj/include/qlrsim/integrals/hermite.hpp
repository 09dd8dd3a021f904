#pragma once

// McMurchie-Davidson building blocks for Cartesian Gaussian primitives.

#include <array>
#include <Eigen/Dense>

namespace qlrsim::integrals {

/// Boys function F_n(T) for n = 0..max_n, written into `out`.
void boys(int max_n, double t, double* out);

/// Hermite expansion coefficients E^{ij}_t of the 1D overlap distribution
/// x_A^i x_B^j exp(-a x_A^2 - b x_B^2) for i <= kMaxI, j <= kMaxJ.
class HermiteExpansion1D {
 public:
  static constexpr int kMaxI = 3;
  static constexpr int kMaxJ = 3;

  HermiteExpansion1D(double a, double b, double ax, double bx);

  double operator()(int i, int j, int t) const {
    if (t < 0 || t > i + j) return 0.0;
    return e_[i][j][t];
  }
  double p() const { return p_; }
  double center() const { return px_; }

  /// <i|j> without the sqrt(pi/p) factor folded in.
  double overlap(int i, int j) const;
  /// <i| x - c |j>
  double moment(int i, int j, double c) const;
  /// <i| d/dx |j>
  double derivative(int i, int j) const;
  /// <i| d^2/dx^2 |j>
  double second_derivative(int i, int j) const;

 private:
  double a_, b_, p_, px_;
  std::array<std::array<std::array<double, kMaxI + kMaxJ + 1>, kMaxJ + 1>, kMaxI + 1> e_{};
};

/// Hermite Coulomb integrals R^0_{tuv}(p, PC) for t + u + v <= max_l (<= 4).
class HermiteCoulomb {
 public:
  static constexpr int kMaxL = 4;
  HermiteCoulomb(int max_l, double p, const Eigen::Vector3d& pc);
  double operator()(int t, int u, int v) const { return r_[0][t][u][v]; }

 private:
  std::array<std::array<std::array<std::array<double, kMaxL + 1>, kMaxL + 1>, kMaxL + 1>, kMaxL + 1> r_{};
};

double primitive_overlap(double a, const std::array<int, 3>& pa, const Eigen::Vector3d& ra, double b,
                         const std::array<int, 3>& pb, const Eigen::Vector3d& rb);

}  // namespace qlrsim::integrals
