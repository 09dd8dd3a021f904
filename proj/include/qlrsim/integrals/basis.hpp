#pragma once

#include <array>
#include <vector>

#include "qlrsim/integrals/geometry.hpp"

namespace qlrsim::integrals {

struct Primitive {
  double exponent;
  double coefficient;  // contraction coefficient, without normalization
};

struct Shell {
  std::size_t center;  // atom index
  int l;               // 0 = s, 1 = p
  Eigen::Vector3d origin;
  std::vector<Primitive> primitives;
};

/// One contracted Cartesian function; `coefficients` already carry both the
/// primitive and the contraction normalization.
struct BasisFunction {
  std::size_t shell;
  std::array<int, 3> powers;
  Eigen::Vector3d origin;
  std::vector<double> exponents;
  std::vector<double> coefficients;

  int angular_momentum() const { return powers[0] + powers[1] + powers[2]; }
};

class BasisSet {
 public:
  BasisSet(std::vector<Shell> shells);

  const std::vector<Shell>& shells() const { return shells_; }
  const std::vector<BasisFunction>& functions() const { return functions_; }
  std::size_t size() const { return functions_.size(); }

 private:
  std::vector<Shell> shells_;
  std::vector<BasisFunction> functions_;
};

class BasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// STO-3G for the geometry. AO order: atom-major, s before p, p as x, y, z.
BasisSet build_sto3g(const Geometry& geometry);

}  // namespace qlrsim::integrals
