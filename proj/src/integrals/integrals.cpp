#include "qlrsim/integrals/integrals.hpp"

#include <cmath>

#include "qlrsim/integrals/hermite.hpp"
#include "qlrsim/units.hpp"

namespace qlrsim::integrals {

void EriTensor::set_symmetric(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v) {
  (*this)(p, q, r, s) = v;
  (*this)(q, p, r, s) = v;
  (*this)(p, q, s, r) = v;
  (*this)(q, p, s, r) = v;
  (*this)(r, s, p, q) = v;
  (*this)(s, r, p, q) = v;
  (*this)(r, s, q, p) = v;
  (*this)(s, r, q, p) = v;
}

namespace {

using Powers = std::array<int, 3>;

struct PairExpansion {
  std::array<HermiteExpansion1D, 3> axes;
  double p;
  Eigen::Vector3d center;
};

PairExpansion expand(double a, const Eigen::Vector3d& ra, double b, const Eigen::Vector3d& rb) {
  std::array<HermiteExpansion1D, 3> axes{HermiteExpansion1D(a, b, ra.x(), rb.x()),
                                         HermiteExpansion1D(a, b, ra.y(), rb.y()),
                                         HermiteExpansion1D(a, b, ra.z(), rb.z())};
  Eigen::Vector3d c(axes[0].center(), axes[1].center(), axes[2].center());
  return {axes, a + b, c};
}

// Contracted one-electron integral where `prim` evaluates a primitive pair.
template <typename F>
double contract(const BasisFunction& f, const BasisFunction& g, F&& prim) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.exponents.size(); ++i)
    for (std::size_t j = 0; j < g.exponents.size(); ++j)
      sum += f.coefficients[i] * g.coefficients[j] * prim(f.exponents[i], g.exponents[j]);
  return sum;
}

double nuclear_primitive(const PairExpansion& pe, const Powers& pa, const Powers& pb, const Eigen::Vector3d& c) {
  const int lsum = pa[0] + pa[1] + pa[2] + pb[0] + pb[1] + pb[2];
  HermiteCoulomb r(lsum, pe.p, pe.center - c);
  double sum = 0.0;
  for (int t = 0; t <= pa[0] + pb[0]; ++t)
    for (int u = 0; u <= pa[1] + pb[1]; ++u)
      for (int v = 0; v <= pa[2] + pb[2]; ++v)
        sum += pe.axes[0](pa[0], pb[0], t) * pe.axes[1](pa[1], pb[1], u) * pe.axes[2](pa[2], pb[2], v) * r(t, u, v);
  return 2.0 * units::kPi / pe.p * sum;
}

double eri_primitive(const PairExpansion& ab, const Powers& pa, const Powers& pb, const PairExpansion& cd,
                     const Powers& pc, const Powers& pd) {
  const int lab = pa[0] + pa[1] + pa[2] + pb[0] + pb[1] + pb[2];
  const int lcd = pc[0] + pc[1] + pc[2] + pd[0] + pd[1] + pd[2];
  const double alpha = ab.p * cd.p / (ab.p + cd.p);
  HermiteCoulomb r(lab + lcd, alpha, ab.center - cd.center);
  double sum = 0.0;
  for (int t = 0; t <= pa[0] + pb[0]; ++t) {
    const double ex = ab.axes[0](pa[0], pb[0], t);
    if (ex == 0.0) continue;
    for (int u = 0; u <= pa[1] + pb[1]; ++u) {
      const double ey = ab.axes[1](pa[1], pb[1], u);
      if (ey == 0.0) continue;
      for (int v = 0; v <= pa[2] + pb[2]; ++v) {
        const double eab = ex * ey * ab.axes[2](pa[2], pb[2], v);
        if (eab == 0.0) continue;
        for (int tau = 0; tau <= pc[0] + pd[0]; ++tau)
          for (int nu = 0; nu <= pc[1] + pd[1]; ++nu)
            for (int phi = 0; phi <= pc[2] + pd[2]; ++phi) {
              const double sign = ((tau + nu + phi) % 2) ? -1.0 : 1.0;
              sum += eab * sign * cd.axes[0](pc[0], pd[0], tau) * cd.axes[1](pc[1], pd[1], nu) *
                     cd.axes[2](pc[2], pd[2], phi) * r(t + tau, u + nu, v + phi);
            }
      }
    }
  }
  return 2.0 * std::pow(units::kPi, 2.5) / (ab.p * cd.p * std::sqrt(ab.p + cd.p)) * sum;
}

}  // namespace

AOIntegralSet compute_core_integrals(const BasisSet& basis, const Geometry& geometry) {
  const auto& fns = basis.functions();
  const std::size_t n = fns.size();
  AOIntegralSet set;
  set.overlap = Eigen::MatrixXd::Zero(n, n);
  set.kinetic = Eigen::MatrixXd::Zero(n, n);
  set.nuclear = Eigen::MatrixXd::Zero(n, n);
  set.nuclear_repulsion = geometry.nuclear_repulsion();

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      const auto& f = fns[p];
      const auto& g = fns[q];
      double s = 0.0, t = 0.0, v = 0.0;
      for (std::size_t i = 0; i < f.exponents.size(); ++i) {
        for (std::size_t j = 0; j < g.exponents.size(); ++j) {
          const double w = f.coefficients[i] * g.coefficients[j];
          const auto pe = expand(f.exponents[i], f.origin, g.exponents[j], g.origin);
          std::array<double, 3> s1{}, d2{};
          for (int k = 0; k < 3; ++k) {
            s1[k] = pe.axes[k].overlap(f.powers[k], g.powers[k]);
            d2[k] = pe.axes[k].second_derivative(f.powers[k], g.powers[k]);
          }
          s += w * s1[0] * s1[1] * s1[2];
          t += w * -0.5 * (d2[0] * s1[1] * s1[2] + s1[0] * d2[1] * s1[2] + s1[0] * s1[1] * d2[2]);
          for (const auto& atom : geometry.atoms())
            v -= w * atom.charge * nuclear_primitive(pe, f.powers, g.powers, atom.position);
        }
      }
      set.overlap(p, q) = set.overlap(q, p) = s;
      set.kinetic(p, q) = set.kinetic(q, p) = t;
      set.nuclear(p, q) = set.nuclear(q, p) = v;
    }
  }

  // Primitive pair expansions are reused across all quartets.
  struct PairData {
    std::vector<PairExpansion> prims;
    std::vector<double> weights;
  };
  std::vector<PairData> pairs(n * n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      auto& pd = pairs[p * n + q];
      for (std::size_t i = 0; i < fns[p].exponents.size(); ++i)
        for (std::size_t j = 0; j < fns[q].exponents.size(); ++j) {
          pd.prims.push_back(expand(fns[p].exponents[i], fns[p].origin, fns[q].exponents[j], fns[q].origin));
          pd.weights.push_back(fns[p].coefficients[i] * fns[q].coefficients[j]);
        }
    }

  set.eri = EriTensor(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r <= p; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (p * (p + 1) / 2 + q < r * (r + 1) / 2 + s) continue;
          const auto& ab = pairs[p * n + q];
          const auto& cd = pairs[r * n + s];
          double val = 0.0;
          for (std::size_t i = 0; i < ab.prims.size(); ++i)
            for (std::size_t j = 0; j < cd.prims.size(); ++j)
              val += ab.weights[i] * cd.weights[j] *
                     eri_primitive(ab.prims[i], fns[p].powers, fns[q].powers, cd.prims[j], fns[r].powers,
                                   fns[s].powers);
          set.eri.set_symmetric(p, q, r, s, val);
        }
  return set;
}

void compute_property_integrals(const BasisSet& basis, const Eigen::Vector3d& origin, AOIntegralSet& set) {
  if (!origin.allFinite()) throw std::invalid_argument("gauge origin must be finite");
  const auto& fns = basis.functions();
  const std::size_t n = fns.size();
  for (int k = 0; k < 3; ++k) {
    set.dipole[k] = Eigen::MatrixXd::Zero(n, n);
    set.angular_momentum[k] = Eigen::MatrixXd::Zero(n, n);
  }
  set.gauge_origin = origin;

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const auto& f = fns[p];
      const auto& g = fns[q];
      std::array<double, 3> dip{}, rxd{};
      for (std::size_t i = 0; i < f.exponents.size(); ++i) {
        for (std::size_t j = 0; j < g.exponents.size(); ++j) {
          const double w = f.coefficients[i] * g.coefficients[j];
          const auto pe = expand(f.exponents[i], f.origin, g.exponents[j], g.origin);
          std::array<double, 3> s{}, m{}, d{};
          for (int k = 0; k < 3; ++k) {
            s[k] = pe.axes[k].overlap(f.powers[k], g.powers[k]);
            m[k] = pe.axes[k].moment(f.powers[k], g.powers[k], origin[k]);
            d[k] = pe.axes[k].derivative(f.powers[k], g.powers[k]);
          }
          dip[0] += w * m[0] * s[1] * s[2];
          dip[1] += w * s[0] * m[1] * s[2];
          dip[2] += w * s[0] * s[1] * m[2];
          // (r x grad)_x = y d/dz - z d/dy, cyclic.
          rxd[0] += w * s[0] * (m[1] * d[2] - d[1] * m[2]);
          rxd[1] += w * s[1] * (m[2] * d[0] - d[2] * m[0]);
          rxd[2] += w * s[2] * (m[0] * d[1] - d[0] * m[1]);
        }
      }
      for (int k = 0; k < 3; ++k) {
        set.dipole[k](p, q) = -dip[k];
        // L = -i r x grad, so Im<L> = -<r x grad>.
        set.angular_momentum[k](p, q) = -rxd[k];
      }
    }
  }
  for (int k = 0; k < 3; ++k) {
    set.dipole[k] = 0.5 * (set.dipole[k] + set.dipole[k].transpose()).eval();
    set.angular_momentum[k] = 0.5 * (set.angular_momentum[k] - set.angular_momentum[k].transpose()).eval();
  }
}

AOIntegralSet compute_all_integrals(const BasisSet& basis, const Geometry& geometry, const Eigen::Vector3d& origin) {
  auto set = compute_core_integrals(basis, geometry);
  compute_property_integrals(basis, origin, set);
  return set;
}

}  // namespace qlrsim::integrals
