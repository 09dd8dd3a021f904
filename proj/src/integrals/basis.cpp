#include "qlrsim/integrals/basis.hpp"

#include <cmath>

#include "qlrsim/integrals/hermite.hpp"
#include "qlrsim/units.hpp"

namespace qlrsim::integrals {

namespace {

struct ShellData {
  int l;
  std::array<double, 3> exponents;
  std::array<double, 3> coefficients;
};

// STO-3G contractions (Hehre, Stewart, Pople, J. Chem. Phys. 51, 2657 (1969)),
// as distributed by the EMSL/BSE basis set exchange. The 2sp shells share
// exponents and are split into an s and a p shell here.
constexpr std::array<double, 3> k1s{0.15432897, 0.53532814, 0.44463454};
constexpr std::array<double, 3> k2s{-0.09996723, 0.39951283, 0.70011547};
constexpr std::array<double, 3> k2p{0.15591627, 0.60768372, 0.39195739};

std::vector<ShellData> sto3g_shells(int charge) {
  switch (charge) {
    case 1:
      return {{0, {3.42525091, 0.62391373, 0.16885540}, k1s}};
    case 3:
      return {{0, {16.1195750, 2.9362007, 0.7946505}, k1s},
              {0, {0.6362897, 0.1478601, 0.0480887}, k2s},
              {1, {0.6362897, 0.1478601, 0.0480887}, k2p}};
    case 8:
      return {{0, {130.7093200, 23.8088610, 6.4436083}, k1s},
              {0, {5.0331513, 1.1695961, 0.3803890}, k2s},
              {1, {5.0331513, 1.1695961, 0.3803890}, k2p}};
    default:
      throw BasisError("no embedded STO-3G data for nuclear charge " + std::to_string(charge));
  }
}

double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

double primitive_norm(double a, const std::array<int, 3>& p) {
  const int l = p[0] + p[1] + p[2];
  return std::pow(2.0 * a / units::kPi, 0.75) * std::pow(4.0 * a, 0.5 * l) /
         std::sqrt(double_factorial(2 * p[0] - 1) * double_factorial(2 * p[1] - 1) *
                   double_factorial(2 * p[2] - 1));
}

}  // namespace

BasisSet::BasisSet(std::vector<Shell> shells) : shells_(std::move(shells)) {
  for (std::size_t s = 0; s < shells_.size(); ++s) {
    const auto& sh = shells_[s];
    if (sh.l > 1) throw BasisError("only s and p shells are supported");
    std::vector<std::array<int, 3>> components;
    if (sh.l == 0) components = {{0, 0, 0}};
    else components = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const auto& pw : components) {
      BasisFunction f{s, pw, sh.origin, {}, {}};
      for (const auto& prim : sh.primitives) {
        if (!(prim.exponent > 0.0)) throw BasisError("non-positive exponent");
        f.exponents.push_back(prim.exponent);
        f.coefficients.push_back(prim.coefficient * primitive_norm(prim.exponent, pw));
      }
      double self = 0.0;
      for (std::size_t i = 0; i < f.exponents.size(); ++i)
        for (std::size_t j = 0; j < f.exponents.size(); ++j)
          self += f.coefficients[i] * f.coefficients[j] *
                  primitive_overlap(f.exponents[i], pw, f.origin, f.exponents[j], pw, f.origin);
      const double scale = 1.0 / std::sqrt(self);
      for (auto& c : f.coefficients) c *= scale;
      functions_.push_back(std::move(f));
    }
  }
}

BasisSet build_sto3g(const Geometry& geometry) {
  std::vector<Shell> shells;
  for (std::size_t a = 0; a < geometry.size(); ++a) {
    const auto& atom = geometry.atoms()[a];
    for (const auto& sd : sto3g_shells(atom.charge)) {
      Shell sh{a, sd.l, atom.position, {}};
      for (int k = 0; k < 3; ++k) sh.primitives.push_back({sd.exponents[k], sd.coefficients[k]});
      shells.push_back(std::move(sh));
    }
  }
  return BasisSet(std::move(shells));
}

}  // namespace qlrsim::integrals
