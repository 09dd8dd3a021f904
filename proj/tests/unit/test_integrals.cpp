#include <cmath>
#include <random>

#include "coulomb_quadrature.hpp"
#include "doctest.h"
#include "qlrsim/integrals/hermite.hpp"
#include "qlrsim/integrals/integrals.hpp"
#include "qlrsim/units.hpp"
#include "quadrature.hpp"
#include "reference_integrals.hpp"

using namespace qlrsim::integrals;

namespace {

double max_abs_diff(const Eigen::MatrixXd& m, const std::vector<double>& ref, std::size_t offset = 0) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      d = std::max(d, std::abs(m(i, j) - ref[offset + i * m.cols() + j]));
  return d;
}

AOIntegralSet integrals_for(const std::string& text, const std::vector<double>& origin_ang, BasisSet* out = nullptr) {
  auto geom = Geometry::parse(text, LengthUnit::Angstrom);
  auto basis = build_sto3g(geom);
  Eigen::Vector3d origin = Eigen::Vector3d(origin_ang[0], origin_ang[1], origin_ang[2]) * qlrsim::units::kBohrPerAngstrom;
  auto set = compute_all_integrals(basis, geom, origin);
  if (out) *out = basis;
  return set;
}

// Composite Gauss-Legendre quadrature of one-electron integrands over a box.
struct GridIntegrals {
  Eigen::MatrixXd overlap, kinetic;
  std::array<Eigen::MatrixXd, 3> position, r_cross_grad;
};

GridIntegrals grid_integrals(const BasisSet& basis, const Eigen::Vector3d& origin) {
  const auto& fns = basis.functions();
  const int n = static_cast<int>(fns.size());
  Eigen::Vector3d lo = fns[0].origin, hi = fns[0].origin;
  for (const auto& f : fns) {
    lo = lo.cwiseMin(f.origin);
    hi = hi.cwiseMax(f.origin);
  }
  std::array<quad::Rule, 3> rules;
  for (int k = 0; k < 3; ++k) {
    const double a = lo[k] - 11.0, b = hi[k] + 11.0;
    rules[k] = quad::composite(a, b, static_cast<int>(std::ceil((b - a) / 0.75)), 10);
  }
  GridIntegrals g;
  g.overlap = g.kinetic = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < 3; ++k) g.position[k] = g.r_cross_grad[k] = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd val(n);
  Eigen::MatrixXd grad(3, n);
  for (std::size_t ix = 0; ix < rules[0].nodes.size(); ++ix)
    for (std::size_t iy = 0; iy < rules[1].nodes.size(); ++iy)
      for (std::size_t iz = 0; iz < rules[2].nodes.size(); ++iz) {
        const Eigen::Vector3d r(rules[0].nodes[ix], rules[1].nodes[iy], rules[2].nodes[iz]);
        const double w = rules[0].weights[ix] * rules[1].weights[iy] * rules[2].weights[iz];
        for (int p = 0; p < n; ++p) {
          Eigen::Vector3d gr;
          quad::evaluate(fns[p], r, val(p), gr);
          grad.col(p) = gr;
        }
        if (val.cwiseAbs().maxCoeff() < 1e-17 && grad.cwiseAbs().maxCoeff() < 1e-17) continue;
        const Eigen::Vector3d rc = r - origin;
        g.overlap.noalias() += w * val * val.transpose();
        // T = 1/2 <grad p . grad q> after integration by parts.
        g.kinetic.noalias() += 0.5 * w * grad.transpose() * grad;
        for (int k = 0; k < 3; ++k) g.position[k].noalias() += w * rc[k] * val * val.transpose();
        const Eigen::RowVectorXd lx = rc.y() * grad.row(2) - rc.z() * grad.row(1);
        const Eigen::RowVectorXd ly = rc.z() * grad.row(0) - rc.x() * grad.row(2);
        const Eigen::RowVectorXd lz = rc.x() * grad.row(1) - rc.y() * grad.row(0);
        g.r_cross_grad[0].noalias() += w * val * lx;
        g.r_cross_grad[1].noalias() += w * val * ly;
        g.r_cross_grad[2].noalias() += w * val * lz;
      }
  return g;
}

}  // namespace

TEST_CASE("load_geometry converts angstrom and parses records") {
  auto g = Geometry::parse("H 0 0 0; H 0 0 0.7", LengthUnit::Angstrom);
  REQUIRE(g.size() == 2);
  CHECK((g.atoms()[1].position - g.atoms()[0].position).norm() == doctest::Approx(1.3228081920).epsilon(1e-10));
  CHECK(g.atoms()[0].charge == 1);

  auto bohr = Geometry::parse("units bohr\nLi 0 0 0\nh 0 0 3.0 # comment", LengthUnit::Angstrom);
  CHECK(bohr.atoms()[1].position.z() == doctest::Approx(3.0));
  CHECK(bohr.atoms()[0].charge == 3);
  CHECK(bohr.atoms()[1].symbol == "H");

  CHECK_THROWS_AS(Geometry::parse("Xx 0 0 0", LengthUnit::Bohr), GeometryError);
  CHECK_THROWS_AS(Geometry::parse("H 0 0", LengthUnit::Bohr), GeometryError);
  CHECK_THROWS_AS(Geometry::parse("H 0 0 0 1", LengthUnit::Bohr), GeometryError);
  CHECK_THROWS_AS(Geometry::parse("", LengthUnit::Bohr), GeometryError);
}

TEST_CASE("water internal coordinates reproduce bond length and angle") {
  auto g = molecules::h2o(0.958, 104.5);
  const auto& a = g.atoms();
  const Eigen::Vector3d v1 = a[1].position - a[0].position, v2 = a[2].position - a[0].position;
  CHECK(v1.norm() * qlrsim::units::kAngstromPerBohr == doctest::Approx(0.958).epsilon(1e-12));
  CHECK(v2.norm() * qlrsim::units::kAngstromPerBohr == doctest::Approx(0.958).epsilon(1e-12));
  CHECK(std::acos(v1.dot(v2) / (v1.norm() * v2.norm())) * 180.0 / M_PI == doctest::Approx(104.5).epsilon(1e-12));
}

TEST_CASE("helical H2 dimer mirror flips the dihedral") {
  auto g = molecules::h2_dimer_helical(0.75, 1.5, 100.0);
  auto m = g.mirrored();
  auto ref = molecules::h2_dimer_helical(0.75, 1.5, -100.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK((m.atoms()[i].position - ref.atoms()[i].position).norm() < 1e-12);
  CHECK(g.molar_mass() == doctest::Approx(4 * 1.00794));
}

TEST_CASE("coincident nuclei are rejected") {
  auto g = Geometry::parse("H 0 0 0; H 0 0 0", LengthUnit::Bohr);
  CHECK_THROWS_AS(g.nuclear_repulsion(), GeometryError);
}

TEST_CASE("STO-3G basis construction") {
  auto h = build_sto3g(Geometry::parse("H 0 0 0", LengthUnit::Bohr));
  REQUIRE(h.size() == 1);
  CHECK(h.functions()[0].exponents[0] == doctest::Approx(3.42525091));
  CHECK(h.functions()[0].exponents[1] == doctest::Approx(0.62391373));
  CHECK(h.functions()[0].exponents[2] == doctest::Approx(0.16885540));

  CHECK(build_sto3g(molecules::h2(0.7)).size() == 2);
  auto water = build_sto3g(molecules::h2o(0.958, 104.5));
  REQUIRE(water.size() == 7);
  // O 1s, 2s, 2px, 2py, 2pz, then H, H.
  CHECK(water.functions()[2].powers == std::array<int, 3>{1, 0, 0});
  CHECK(water.functions()[4].powers == std::array<int, 3>{0, 0, 1});
  CHECK(build_sto3g(molecules::lih(1.6)).size() == 6);

  auto s = compute_core_integrals(water, molecules::h2o(0.958, 104.5)).overlap;
  for (Eigen::Index i = 0; i < s.rows(); ++i) CHECK(std::abs(s(i, i) - 1.0) < 1e-12);

  CHECK_THROWS_AS(build_sto3g(Geometry::parse("He 0 0 0", LengthUnit::Bohr)), BasisError);
}

TEST_CASE("Boys function against direct quadrature") {
  const auto rule = quad::composite(0.0, 1.0, 8, 20);
  for (double t : {0.0, 1e-9, 0.3, 2.5, 17.0, 60.0}) {
    double f[5];
    boys(4, t, f);
    for (int n = 0; n <= 4; ++n) {
      double ref = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        ref += rule.weights[k] * std::pow(rule.nodes[k], 2 * n) * std::exp(-t * rule.nodes[k] * rule.nodes[k]);
      CHECK(std::abs(f[n] - ref) < 1e-14);
    }
  }
}

TEST_CASE("H2 at 1.4 bohr core integrals") {
  auto g = Geometry::parse("H 0 0 0; H 0 0 1.4", LengthUnit::Bohr);
  auto set = compute_core_integrals(build_sto3g(g), g);
  CHECK(set.nuclear_repulsion == doctest::Approx(0.714285714285714).epsilon(1e-14));
  CHECK(std::abs(set.overlap(0, 1) - 0.659318206134864) < 1e-9);
  CHECK(std::abs(set.kinetic(0, 0) - 0.760031883566609) < 1e-9);
  CHECK(std::abs(set.nuclear(0, 1) + 1.194834620369291) < 1e-9);
  CHECK(std::abs(set.eri(0, 0, 0, 0) - 0.774605943919898) < 1e-9);
  CHECK(std::abs(set.eri(0, 0, 1, 1) - 0.56967592560375) < 1e-9);
  CHECK(std::abs(set.eri(0, 1, 0, 1) - 0.297028540276931) < 1e-9);
}

TEST_CASE("all integral classes agree with the external reference program") {
  struct Case {
    const std::string& geometry;
    const std::vector<double>& origin;
    const std::vector<double>& s;
    const std::vector<double>& t;
    const std::vector<double>& v;
    const std::vector<double>& eri;
    const std::vector<double>& enuc;
    const std::vector<double>& r;
    const std::vector<double>& irxp;
  };
  using namespace reference;
  std::vector<Case> cases{
      {water_distorted_geometry, water_distorted_origin, water_distorted_overlap, water_distorted_kinetic,
       water_distorted_nuclear, water_distorted_eri, water_distorted_enuc, water_distorted_r, water_distorted_irxp},
      {lih_geometry, lih_origin, lih_overlap, lih_kinetic, lih_nuclear, lih_eri, lih_enuc, lih_r, lih_irxp}};
  for (const auto& c : cases) {
    auto set = integrals_for(c.geometry, c.origin);
    const auto n = set.overlap.rows();
    CHECK(max_abs_diff(set.overlap, c.s) < 1e-9);
    CHECK(max_abs_diff(set.kinetic, c.t) < 1e-9);
    CHECK(max_abs_diff(set.nuclear, c.v) < 1e-9);
    CHECK(std::abs(set.nuclear_repulsion - c.enuc[0]) < 1e-10);
    double eri_diff = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q)
        for (Eigen::Index r = 0; r < n; ++r)
          for (Eigen::Index s = 0; s < n; ++s)
            eri_diff = std::max(eri_diff, std::abs(set.eri(p, q, r, s) - c.eri[((p * n + q) * n + r) * n + s]));
    CHECK(eri_diff < 1e-9);
    for (int k = 0; k < 3; ++k) {
      Eigen::MatrixXd minus_d = -set.dipole[k];
      CHECK(max_abs_diff(minus_d, c.r, k * n * n) < 1e-9);
      // The reference stores <r x grad>; we store Im<L> = -<r x grad>.
      Eigen::MatrixXd minus_l = -set.angular_momentum[k];
      CHECK(max_abs_diff(minus_l, c.irxp, k * n * n) < 1e-9);
    }
  }
}

TEST_CASE("core matrices are symmetric and S is positive definite") {
  auto g = molecules::h2o(1.1, 101.0);
  auto set = compute_core_integrals(build_sto3g(g), g);
  CHECK((set.overlap - set.overlap.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((set.kinetic - set.kinetic.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((set.nuclear - set.nuclear.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(set.overlap);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("ERI permutational symmetry on random quartets") {
  auto g = molecules::h2o(0.958, 104.5);
  auto set = compute_core_integrals(build_sto3g(g), g);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    int p = pick(rng), q = pick(rng), r = pick(rng), s = pick(rng);
    const double v = set.eri(p, q, r, s);
    CHECK(set.eri(q, p, r, s) == v);
    CHECK(set.eri(p, q, s, r) == v);
    CHECK(set.eri(r, s, p, q) == v);
    CHECK(set.eri(s, r, q, p) == v);
  }
}

TEST_CASE("dipole of a single s function is the translation identity") {
  auto g = Geometry::parse("H 0.3 -0.4 1.7", LengthUnit::Bohr);
  auto basis = build_sto3g(g);
  AOIntegralSet set;
  Eigen::Vector3d origin(0.1, 0.2, -0.5);
  compute_property_integrals(basis, origin, set);
  for (int k = 0; k < 3; ++k) CHECK(-set.dipole[k](0, 0) == doctest::Approx(g.atoms()[0].position[k] - origin[k]).epsilon(1e-13));
}

TEST_CASE("L_z vanishes for an s-only linear molecule on the z axis") {
  auto g = molecules::h_chain(4, 0.9);
  AOIntegralSet set;
  compute_property_integrals(build_sto3g(g), Eigen::Vector3d(0.0, 0.0, 0.3), set);
  CHECK(set.angular_momentum[2].cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("rigid translation of geometry and origin leaves all integrals unchanged") {
  auto g = molecules::lih(1.6);
  Eigen::Vector3d shift(0.7, -1.3, 2.1);
  Eigen::Vector3d origin(0.2, 0.1, 0.9);
  auto a = compute_all_integrals(build_sto3g(g), g, origin);
  auto gt = g.translated(shift);
  auto b = compute_all_integrals(build_sto3g(gt), gt, origin + shift);
  CHECK((a.overlap - b.overlap).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.kinetic - b.kinetic).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.nuclear - b.nuclear).cwiseAbs().maxCoeff() < 1e-10);
  for (int k = 0; k < 3; ++k) {
    CHECK((a.dipole[k] - b.dipole[k]).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((a.angular_momentum[k] - b.angular_momentum[k]).cwiseAbs().maxCoeff() < 1e-10);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.eri.data().size(); ++i) d = std::max(d, std::abs(a.eri.data()[i] - b.eri.data()[i]));
  CHECK(d < 1e-10);
}

TEST_CASE("helical (H2)2 one-electron blocks agree with grid quadrature") {
  auto g = molecules::h2_dimer_helical(0.75, 1.5, 100.0);
  auto basis = build_sto3g(g);
  Eigen::Vector3d origin = g.center_of_charge();
  auto set = compute_all_integrals(basis, g, origin);
  auto q = grid_integrals(basis, origin);
  CHECK((set.overlap - q.overlap).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((set.kinetic - q.kinetic).cwiseAbs().maxCoeff() < 1e-7);
  for (int k = 0; k < 3; ++k) {
    CHECK((set.dipole[k] + q.position[k]).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((set.angular_momentum[k] + q.r_cross_grad[k]).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((set.angular_momentum[k] + set.angular_momentum[k].transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("random LiH: nuclear attraction and ERIs agree with quadrature") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  const std::string text = "Li " + std::to_string(u(rng)) + " " + std::to_string(u(rng)) + " " +
                           std::to_string(u(rng)) + "; H " + std::to_string(u(rng)) + " " + std::to_string(u(rng)) +
                           " " + std::to_string(1.5 + u(rng));
  auto g = Geometry::parse(text, LengthUnit::Angstrom);
  auto basis = build_sto3g(g);
  Eigen::Vector3d origin(0.2, -0.1, 0.4);
  auto set = compute_all_integrals(basis, g, origin);
  const auto& fns = basis.functions();
  const int n = static_cast<int>(fns.size());

  double vdiff = 0.0;
  for (int p = 0; p < n; ++p)
    for (int r = 0; r <= p; ++r) {
      double v = 0.0;
      for (const auto& atom : g.atoms()) v -= atom.charge * quad::nuclear_attraction(fns[p], fns[r], atom.position);
      vdiff = std::max(vdiff, std::abs(v - set.nuclear(p, r)));
    }
  CHECK(vdiff < 1e-7);

  std::uniform_int_distribution<int> pick(0, n - 1);
  double ediff = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    int a = pick(rng), b = pick(rng), c = pick(rng), d = pick(rng);
    const double ref = quad::electron_repulsion(fns[a], fns[b], fns[c], fns[d]);
    ediff = std::max(ediff, std::abs(ref - set.eri(a, b, c, d)));
  }
  CHECK(ediff < 1e-7);
}
