#include "qlrsim/eom/properties.hpp"

#include "qlrsim/units.hpp"

namespace qlrsim::eom {

TransitionProperties transition_properties(double energy, const Eigen::VectorXcd& ground,
                                           const Eigen::VectorXcd& excited,
                                           const std::array<qops::SectorOperator, 3>& dipole,
                                           const std::array<qops::SectorOperator, 3>* magnetic) {
  TransitionProperties t;
  t.energy = energy;
  for (int i = 0; i < 3; ++i) {
    t.dipole[i] = dipole[i].expect(ground, excited);
    t.oscillator_strength += 2.0 / 3.0 * energy * std::norm(t.dipole[i]);
    if (magnetic) {
      t.magnetic[i] = (*magnetic)[i].expect(excited, ground);
      t.rotatory_strength += (t.dipole[i] * t.magnetic[i]).imag();
    }
  }
  return t;
}

std::vector<TransitionProperties> transition_properties(const ExcitedStateSet& states, const GroundState& ground,
                                                        const std::array<qops::SectorOperator, 3>& dipole,
                                                        const std::array<qops::SectorOperator, 3>* magnetic) {
  std::vector<TransitionProperties> out;
  for (const auto& s : states.states) {
    if (s.vector.size() == 0) throw std::invalid_argument("excited statevectors were not reconstructed");
    out.push_back(transition_properties(s.energy, ground.psi, s.vector, dipole, magnetic));
  }
  return out;
}

KillerReport killer_check(const ExcitationManifold& manifold, const GroundState& ground) {
  KillerReport r;
  for (std::size_t k = 0; k < manifold.size(); ++k) {
    const auto& g = manifold.ops[k].matrix();
    Eigen::VectorXcd v;
    switch (manifold.variant) {
      case Variant::Bare:
        v = g.adjoint() * ground.psi;
        break;
      case Variant::SelfConsistent:
        // S^+ = U G^+ U^+
        v = ground.circuit.apply(g.adjoint() * ground.circuit.apply_adjoint(ground.psi));
        break;
      case Variant::Projected: {
        // S^+ = |Psi0><Psi0| Gbar^+
        const Eigen::VectorXcd gbar = g * ground.psi - manifold.shifts[k] * ground.psi;
        v = ground.psi * gbar.dot(ground.psi);
        break;
      }
    }
    r.norms.push_back(v.norm());
    r.worst = std::max(r.worst, v.norm());
  }
  return r;
}

Lineshape parse_lineshape(const std::string& name) {
  if (name == "lorentzian") return Lineshape::Lorentzian;
  if (name == "gaussian") return Lineshape::Gaussian;
  throw std::invalid_argument("unknown lineshape '" + name + "'");
}

std::vector<double> broaden_spectrum(const std::vector<Stick>& sticks, Lineshape shape, double fwhm,
                                     const std::vector<double>& grid) {
  if (sticks.empty()) throw std::invalid_argument("no sticks to broaden");
  if (!(fwhm > 0.0)) throw std::invalid_argument("broadening width must be positive");
  std::vector<double> out(grid.size(), 0.0);
  const double gamma = 0.5 * fwhm;
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (const auto& s : sticks) {
      const double d = grid[i] - s.energy;
      const double line = shape == Lineshape::Lorentzian
                              ? gamma / (units::kPi * (d * d + gamma * gamma))
                              : std::exp(-0.5 * d * d / (sigma * sigma)) / (sigma * std::sqrt(2.0 * units::kPi));
      out[i] += s.strength * line;
    }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw std::invalid_argument("grid needs two or more points and hi > lo");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return g;
}

}  // namespace qlrsim::eom
