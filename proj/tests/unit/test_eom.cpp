#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "qlrsim/adapt/prepared.hpp"
#include "qlrsim/eom/properties.hpp"
#include "qlrsim/oracle/sos.hpp"

using namespace qlrsim;
using namespace qlrsim::eom;
namespace molecules = integrals::molecules;
using adapt::PreparedSystem;

namespace {

integrals::Geometry table1_h2() {
  return integrals::Geometry::parse("H 0 0 0; H 0 0 0.7", integrals::LengthUnit::Angstrom);
}

adapt::PrepareOptions origin_zero() {
  adapt::PrepareOptions o;
  o.gauge_origin = Eigen::Vector3d::Zero();
  return o;
}

GroundState ground_of(const PreparedSystem& p) {
  return make_ground_state(p.sys.h, p.sys.hf_occupation, p.circuit());
}

// HF-referenced determinants of excitation rank 1..2 inside the sector.
std::size_t count_rank12(const qops::SectorBasis& basis, std::uint64_t hf) {
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const int diff = __builtin_popcountll(basis.state(i) ^ hf) / 2;
    n += diff == 1 || diff == 2;
  }
  return n;
}

std::vector<double> fci_gaps(const PreparedSystem& p) {
  return oracle::fci_solve(p.sys.h, p.sys.n_electrons).excitation_energies();
}

}  // namespace

TEST_CASE("manifold enumeration") {
  PreparedSystem h2(molecules::h2(0.7));
  auto g = ground_of(h2);
  auto m = build_manifold(g, Variant::Bare);
  CHECK(m.size() == 3);
  CHECK(m.excitations[0].label() == "2^ 0");
  CHECK(m.excitations[1].label() == "3^ 1");
  CHECK(m.excitations[2].label() == "3^ 2^ 0 1");

  adapt::PrepareOptions no_adapt;
  no_adapt.run_adapt = false;
  PreparedSystem h2o(molecules::h2o(0.958, 104.5), no_adapt);
  std::uint64_t hf = 0;
  for (int p : h2o.sys.hf_occupation) hf |= std::uint64_t{1} << p;
  const auto ex = enumerate_excitations(14, h2o.sys.hf_occupation);
  CHECK(ex.size() == count_rank12(*h2o.sys.sector, hf));
  CHECK(ex.size() == 140);
  CHECK(enumerate_excitations(14, h2o.sys.hf_occupation, 1).size() == 20);
  // all ranks together reach every other determinant of the sector exactly once
  PreparedSystem lih(molecules::lih(1.6), no_adapt);
  const auto all = enumerate_excitations(12, lih.sys.hf_occupation, 4);
  CHECK(all.size() == lih.sys.sector->size() - 1);
  CHECK(enumerate_excitations(12, lih.sys.hf_occupation, 2).size() == 92);
  // every operator maps HF to a distinct determinant
  auto gh = ground_of(h2o);
  auto mh = build_manifold(gh, Variant::SelfConsistent);
  CHECK((mh.basis.adjoint() * mh.basis - Eigen::MatrixXcd::Identity(140, 140)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projected manifold shifts") {
  PreparedSystem lih(molecules::lih(1.6));
  auto g = ground_of(lih);
  auto m = build_manifold(g, Variant::Projected);
  for (Eigen::Index k = 0; k < m.basis.cols(); ++k) CHECK(std::abs(g.psi.dot(m.basis.col(k))) < 1e-12);
  auto mats = build_proj_matrices(m, g);
  CHECK(hermiticity_error(mats.m) < 1e-12);
  CHECK(hermiticity_error(mats.v) < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mats.v);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("bare qEOM block structure") {
  PreparedSystem lih(molecules::lih(1.6));
  auto g = ground_of(lih);
  auto m = build_manifold(g, Variant::Bare);
  auto mats = build_qeom_matrices(m, g);
  // M is Hermitian only up to <[[G_i^+, G_j], H]>, which vanishes on eigenstates
  CHECK(hermiticity_error(mats.m) < 1e-3);
  CHECK(hermiticity_error(mats.v) < 1e-10);
  CHECK((mats.q - mats.q.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  // pure excitations commute with each other
  CHECK(mats.w.cwiseAbs().maxCoeff() < 1e-14);
  {
    GroundState exact = g;
    exact.psi = oracle::fci_solve(lih.sys.h, 4).states[0].vector;
    auto me = build_qeom_matrices(m, exact);
    CHECK(hermiticity_error(me.m) < 1e-10);
  }

  // eigenvalues of the full pencil come in +-omega pairs
  const Eigen::Index n = mats.dimension();
  Eigen::MatrixXcd lhs(2 * n, 2 * n), metric(2 * n, 2 * n);
  lhs << mats.m, mats.q, mats.q.conjugate(), mats.m.conjugate();
  metric << mats.v, mats.w, -mats.w.conjugate(), -mats.v.conjugate();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(metric.inverse() * lhs, false);
  std::vector<double> ev;
  for (Eigen::Index k = 0; k < 2 * n; ++k) ev.push_back(es.eigenvalues()[k].real());
  std::sort(ev.begin(), ev.end());
  for (std::size_t k = 0; k < ev.size(); ++k) CHECK(std::abs(ev[k] + ev[ev.size() - 1 - k]) < 1e-8);
}

TEST_CASE("qEOM on the HF reference with singles reproduces CIS") {
  adapt::PrepareOptions no_adapt;
  no_adapt.run_adapt = false;
  PreparedSystem lih(molecules::lih(1.6), no_adapt);
  auto g = ground_of(lih);  // |Psi0> = |HF>
  auto m = build_manifold(g, Variant::Bare, 1);
  auto mats = build_qeom_matrices(m, g);
  // dense oracle on the full register: <Phi_i^a|H - E_HF|Phi_j^b> with the
  // determinants' signs taken from the JW images of the excitations
  const int n = lih.sys.n_qubits;
  const auto hf = qops::prepare_reference(n, lih.sys.hf_occupation);
  const double e_hf = qops::expectation(lih.sys.hamiltonian, hf);
  std::vector<qops::StateVector> dets;
  for (const auto& e : m.excitations)
    dets.push_back(qops::apply(qops::jordan_wigner(qops::FermionOperator::excitation(e.create, e.annihilate), n), hf));
  const auto k = static_cast<Eigen::Index>(dets.size());
  Eigen::MatrixXcd cis(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      cis(i, j) = qops::apply_and_expect(lih.sys.hamiltonian, dets[static_cast<std::size_t>(i)],
                                         dets[static_cast<std::size_t>(j)]) -
                  (i == j ? e_hf : 0.0);
  CHECK((mats.m - cis).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(mats.w.cwiseAbs().maxCoeff() < 1e-14);
  CHECK((mats.v - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Table I") {
  PreparedSystem h2(table1_h2(), origin_zero());
  auto g = ground_of(h2);
  const std::vector<double> ref{0.6577, 1.0157, 1.7195};
  auto fci = oracle::fci_solve(h2.sys.h, 2);
  const auto gaps = fci.excitation_energies();

  auto sc_m = build_manifold(g, Variant::SelfConsistent);
  auto pr_m = build_manifold(g, Variant::Projected);
  auto bare = build_manifold(g, Variant::Bare);
  auto sc = solve_sc(build_sc_matrix(sc_m, g), &sc_m, &g);
  auto pr = solve_proj(build_proj_matrices(pr_m, g), &pr_m, &g);
  auto qe = solve_qeom(build_qeom_matrices(bare, g), &bare, &g);
  auto qe_paper = solve_qeom(build_qeom_matrices(bare, g), &bare, &g, QeomNormalization::Eigenvector);
  auto qse = solve_qse(bare, g);
  CHECK(pr.dropped_directions == 0);
  CHECK(qe.warnings.empty());
  for (auto* set : {&sc, &pr, &qe, &qe_paper, &qse}) {
    REQUIRE(set->states.size() == 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(set->states[k].energy - ref[k]) < 5e-4);
      CHECK(std::abs(set->states[k].energy - gaps[k]) < 1e-10);
    }
  }
  CHECK(multiplicity_label(sc.states[0].s2) == "triplet");
  CHECK(multiplicity_label(sc.states[1].s2) == "singlet");

  auto tp_sc = transition_properties(sc, g, h2.sys.dipole, &h2.sys.magnetic);
  auto tp_pr = transition_properties(pr, g, h2.sys.dipole, &h2.sys.magnetic);
  auto tp_qe = transition_properties(qe_paper, g, h2.sys.dipole, &h2.sys.magnetic);
  for (int k = 0; k < 3; ++k) {
    const auto t = transition_properties(gaps[k], fci.states[0].vector, fci.states[k + 1].vector, h2.sys.dipole,
                                         &h2.sys.magnetic);
    CHECK(std::abs(sc.states[k].overlap) < 1e-10);
    CHECK(std::abs(pr.states[k].overlap) < 1e-10);
    // transition moments agree with FCI up to the arbitrary state phase
    CHECK(std::abs(std::abs(tp_sc[k].dipole[2]) - std::abs(t.dipole[2])) < 1e-8);
    CHECK(std::abs(std::abs(tp_pr[k].dipole[2]) - std::abs(t.dipole[2])) < 1e-8);
    CHECK(tp_sc[k].oscillator_strength >= 0.0);
    CHECK(std::abs(tp_sc[k].oscillator_strength - t.oscillator_strength) < 1e-8);
  }
  CHECK(std::abs(std::abs(tp_sc[1].dipole[2]) - 1.1441) < 5e-4);
  CHECK(std::abs(tp_sc[1].dipole[2] - 1.1441) < 5e-4);
  CHECK(std::abs(tp_pr[1].dipole[2] - 1.1441) < 5e-4);
  CHECK(std::abs(tp_qe[1].dipole[2] - 1.1441) < 5e-4);

  // the qEOM anomaly: S2 is not orthogonal to the ground state
  CHECK(std::abs(qe_paper.states[2].overlap - 0.1029) < 5e-4);
  CHECK(std::abs(tp_qe[2].dipole[2] - -0.1362) < 5e-4);
  // with the state renormalized the same anomaly is ~0.6% larger
  auto tp_qe_norm = transition_properties(qe, g, h2.sys.dipole, nullptr);
  CHECK(std::abs(qe.states[2].overlap - 0.103515) < 1e-5);
  CHECK(std::abs(tp_qe_norm[2].dipole[2] - -0.136931) < 1e-5);
  CHECK(std::abs(qe.states[0].overlap) < 1e-10);
}

TEST_CASE("H2 excitation energies across the bond scan") {
  for (double r : {0.5, 0.9, 1.5, 2.5}) {
    PreparedSystem h2(molecules::h2(r));
    auto g = ground_of(h2);
    const auto gaps = fci_gaps(h2);
    auto m = build_manifold(g, Variant::SelfConsistent);
    auto e = solve_sc(build_sc_matrix(m, g)).energies();
    auto mp = build_manifold(g, Variant::Projected);
    auto ep = solve_proj(build_proj_matrices(mp, g)).energies();
    auto eq = solve_qse(build_manifold(g, Variant::Bare), g).energies();
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(e[k] - gaps[k]) < 1e-10);
      CHECK(std::abs(ep[k] - gaps[k]) < 1e-10);
      CHECK(std::abs(eq[k] - gaps[k]) < 1e-10);
    }
  }
}

TEST_CASE("measurement path for M^sc") {
  PreparedSystem h2(molecules::h2(1.2));
  PreparedSystem h4(molecules::h2_dimer_helical(0.75, 1.5, 100.0));
  PreparedSystem lih(molecules::lih(1.6));
  for (const PreparedSystem* p : {&h2, &h4, &lih}) {
    auto g = ground_of(*p);
    auto m = build_manifold(g, Variant::SelfConsistent);
    auto direct = build_sc_matrix(m, g, MatrixPath::Direct);
    auto meas = build_sc_matrix(m, g, MatrixPath::Measurement);
    CHECK((direct.m - meas.m).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(hermiticity_error(direct.m) < 1e-12);
  }
}

TEST_CASE("killer condition") {
  PreparedSystem lih(molecules::lih(1.6));
  PreparedSystem h2(molecules::h2(2.0));
  for (const PreparedSystem* p : {&lih, &h2}) {
    auto g = ground_of(*p);
    CHECK(killer_check(build_manifold(g, Variant::SelfConsistent), g).worst < 1e-12);
    CHECK(killer_check(build_manifold(g, Variant::Projected), g).worst < 1e-12);
  }
  auto g = ground_of(h2);
  auto bare = killer_check(build_manifold(g, Variant::Bare), g);
  CHECK(bare.worst > 1e-3);
  CHECK(bare.norms.size() == 3);

  auto gl = ground_of(lih);
  auto msc = build_manifold(gl, Variant::SelfConsistent);
  for (const auto& s : solve_sc(build_sc_matrix(msc, gl), &msc, &gl).states) CHECK(std::abs(s.overlap) < 1e-10);
  auto mpr = build_manifold(gl, Variant::Projected);
  for (const auto& s : solve_proj(build_proj_matrices(mpr, gl), &mpr, &gl).states)
    CHECK(std::abs(s.overlap) < 1e-10);
}

TEST_CASE("proj energies do not depend on manifold order") {
  PreparedSystem lih(molecules::lih(1.6));
  auto g = ground_of(lih);
  auto m = build_manifold(g, Variant::Projected);
  auto e1 = solve_proj(build_proj_matrices(m, g)).energies();
  std::vector<std::size_t> perm(m.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(7);
  std::shuffle(perm.begin(), perm.end(), rng);
  ExcitationManifold p = m;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    p.excitations[k] = m.excitations[perm[k]];
    p.ops[k] = m.ops[perm[k]];
    p.shifts[k] = m.shifts[perm[k]];
    p.basis.col(static_cast<Eigen::Index>(k)) = m.basis.col(static_cast<Eigen::Index>(perm[k]));
  }
  auto e2 = solve_proj(build_proj_matrices(p, g)).energies();
  REQUIRE(e1.size() == e2.size());
  for (std::size_t k = 0; k < e1.size(); ++k) CHECK(std::abs(e1[k] - e2[k]) < 1e-10);
}

TEST_CASE("QSE subspace") {
  PreparedSystem lih(molecules::lih(1.6));
  auto g = ground_of(lih);
  auto m = build_manifold(g, Variant::Bare);
  auto mats = build_qse_matrices(m, g);
  CHECK(mats.dimension() == static_cast<Eigen::Index>(m.size()) + 1);
  auto set = solve_qse(mats, &m, &g);
  CHECK(set.states.front().energy > 0.0);
}

TEST_CASE("size intensivity") {
  PreparedSystem mono(molecules::h2(0.75));
  PreparedSystem far(
      integrals::Geometry::parse("units bohr\nH 0 0 0\nH 0 0 1.4172944914\nH 0 100 0\nH 0 100 1.4172944914",
                                 integrals::LengthUnit::Bohr));
  auto gm = ground_of(mono);
  auto gd = ground_of(far);
  auto mm = build_manifold(gm, Variant::SelfConsistent);
  auto md = build_manifold(gd, Variant::SelfConsistent);
  const double e_mono = solve_sc(build_sc_matrix(mm, gm)).states[0].energy;
  const double e_dimer = solve_sc(build_sc_matrix(md, gd)).states[0].energy;
  CHECK(std::abs(e_mono - e_dimer) < 1e-8);
  const double q_mono = solve_qse(build_manifold(gm, Variant::Bare), gm).states[0].energy;
  const double q_dimer = solve_qse(build_manifold(gd, Variant::Bare), gd).states[0].energy;
  MESSAGE("QSE monomer-dimer lowest EE difference: " << q_dimer - q_mono);
}

TEST_CASE("rotatory strengths follow the Rosenfeld tensor") {
  PreparedSystem h4(molecules::h2_dimer_helical(0.75, 1.5, 100.0));
  auto fci = oracle::fci_solve(h4.sys.h, 4);
  const double w = units::nm_to_hartree(589.0);
  auto t = oracle::sos_tensors(fci, h4.sys.dipole, &h4.sys.magnetic, w);
  // tr G' = sum_k RS_k 2w / (w^2 - w_k^2)
  double sum = 0.0, rs_total = 0.0;
  const auto gaps = fci.excitation_energies();
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    auto tp = transition_properties(gaps[k], fci.states[0].vector, fci.states[k + 1].vector, h4.sys.dipole,
                                    &h4.sys.magnetic);
    sum += tp.rotatory_strength * 2.0 * w / (w * w - gaps[k] * gaps[k]);
    rs_total += std::abs(tp.rotatory_strength);
  }
  CHECK(rs_total > 1e-4);
  CHECK(std::abs(sum - t.rosenfeld().trace()) < 1e-12);
}

TEST_CASE("achiral water has no rotatory strength") {
  PreparedSystem w(molecules::h2o(0.958, 104.5));
  auto g = ground_of(w);
  auto m = build_manifold(g, Variant::SelfConsistent);
  auto set = solve_sc(build_sc_matrix(m, g), &m, &g);
  for (const auto& t : transition_properties(set, g, w.sys.dipole, &w.sys.magnetic)) {
    CHECK(std::abs(t.rotatory_strength) < 1e-10);
    CHECK(t.oscillator_strength >= 0.0);
  }
}

TEST_CASE("spectrum broadening") {
  const std::vector<Stick> sticks{{0.5, 0.3}, {0.8, 1.2}};
  const auto grid = uniform_grid(-2.0, 4.0, 60001);
  const double dx = grid[1] - grid[0];
  for (auto shape : {Lineshape::Gaussian, Lineshape::Lorentzian}) {
    const auto y = broaden_spectrum(sticks, shape, 0.05, grid);
    double area = 0.0;
    for (double v : y) area += v * dx;
    // the Lorentzian tails outside the window are not negligible
    double expected = 1.5;
    if (shape == Lineshape::Lorentzian) {
      expected = 0.0;
      for (const auto& st : sticks)
        expected += st.strength / units::kPi *
                    (std::atan((grid.back() - st.energy) / 0.025) - std::atan((grid.front() - st.energy) / 0.025));
    }
    CHECK(std::abs(area - expected) / expected < 1e-3);
  }
  const auto single = uniform_grid(0.0, 1.0, 1001);
  const auto y = broaden_spectrum({{0.37, 1.0}}, Lineshape::Lorentzian, kDefaultFwhm, single);
  CHECK(single[static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin())] == doctest::Approx(0.37));
  CHECK_THROWS(broaden_spectrum({}, Lineshape::Lorentzian, 0.01, single));
  CHECK_THROWS(broaden_spectrum(sticks, Lineshape::Gaussian, 0.0, single));
  CHECK(parse_lineshape("gaussian") == Lineshape::Gaussian);
}

TEST_CASE("ECD of the mirror image is negated") {
  auto geo = molecules::h2_dimer_helical(0.75, 1.5, 100.0);
  PreparedSystem a(geo), b(geo.mirrored());
  std::vector<std::vector<double>> curves;
  for (const PreparedSystem* p : {&a, &b}) {
    auto g = ground_of(*p);
    auto m = build_manifold(g, Variant::SelfConsistent);
    auto set = solve_sc(build_sc_matrix(m, g), &m, &g);
    std::vector<Stick> sticks;
    for (const auto& t : transition_properties(set, g, p->sys.dipole, &p->sys.magnetic))
      sticks.push_back({t.energy, t.rotatory_strength});
    curves.push_back(broaden_spectrum(sticks, Lineshape::Lorentzian, kDefaultFwhm, uniform_grid(0.0, 2.0, 401)));
  }
  double peak = 0.0;
  for (std::size_t i = 0; i < curves[0].size(); ++i) {
    CHECK(std::abs(curves[0][i] + curves[1][i]) < 1e-8);
    peak = std::max(peak, std::abs(curves[0][i]));
  }
  CHECK(peak > 1e-3);
}
