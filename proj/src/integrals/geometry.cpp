#include "qlrsim/integrals/geometry.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "qlrsim/units.hpp"

namespace qlrsim::integrals {

namespace {

struct ElementData {
  const char* symbol;
  int charge;
  double mass;  // standard atomic weight, g/mol
};

// Extend this table together with the embedded basis data.
constexpr ElementData kElements[] = {
    {"H", 1, 1.00794}, {"He", 2, 4.002602}, {"Li", 3, 6.941},
    {"Be", 4, 9.012182}, {"B", 5, 10.811}, {"C", 6, 12.0107},
    {"N", 7, 14.0067}, {"O", 8, 15.9994}, {"F", 9, 18.9984032},
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

LengthUnit parse_length_unit(std::string_view text) {
  auto t = lower(trim(text));
  if (t == "angstrom" || t == "ang" || t == "a") return LengthUnit::Angstrom;
  if (t == "bohr" || t == "au" || t == "b") return LengthUnit::Bohr;
  throw GeometryError("unknown length unit '" + std::string(text) + "'");
}

int element_charge(std::string_view symbol) {
  for (const auto& e : kElements)
    if (symbol == e.symbol) return e.charge;
  throw GeometryError("unknown element '" + std::string(symbol) + "'");
}

double element_mass(int charge) {
  for (const auto& e : kElements)
    if (e.charge == charge) return e.mass;
  throw GeometryError("no mass for nuclear charge " + std::to_string(charge));
}

Geometry::Geometry(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw GeometryError("geometry has no atoms");
  for (const auto& a : atoms_) {
    if (a.charge <= 0) throw GeometryError("non-positive nuclear charge for " + a.symbol);
    if (!a.position.allFinite()) throw GeometryError("non-finite position for " + a.symbol);
  }
}

Geometry Geometry::parse(std::string_view text, LengthUnit unit) {
  std::vector<Atom> atoms;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto next = text.find_first_of(";\n", pos);
    if (next == std::string_view::npos) next = text.size();
    std::string line = trim(text.substr(pos, next - pos));
    pos = next + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    std::istringstream in(line);
    std::string symbol;
    in >> symbol;
    if (lower(symbol) == "units" || lower(symbol) == "unit") {
      std::string u;
      in >> u;
      unit = parse_length_unit(u);
      continue;
    }
    double x, y, z;
    if (!(in >> x >> y >> z)) {
      throw GeometryError("malformed coordinate record " + std::to_string(line_no) + ": '" + line + "'");
    }
    std::string extra;
    if (in >> extra) {
      throw GeometryError("trailing tokens in coordinate record " + std::to_string(line_no) + ": '" + line + "'");
    }
    // Normalize capitalization: "li" -> "Li".
    symbol = lower(symbol);
    symbol[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(symbol[0])));
    Atom atom{symbol, element_charge(symbol), Eigen::Vector3d(x, y, z)};
    atoms.push_back(std::move(atom));
  }
  // Unit directives may appear anywhere, so scaling happens after parsing.
  if (unit == LengthUnit::Angstrom)
    for (auto& a : atoms) a.position *= units::kBohrPerAngstrom;
  return Geometry(std::move(atoms));
}

int Geometry::total_nuclear_charge() const {
  int z = 0;
  for (const auto& a : atoms_) z += a.charge;
  return z;
}

double Geometry::nuclear_repulsion() const {
  double e = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double r = (atoms_[i].position - atoms_[j].position).norm();
      if (r < 1e-8) throw GeometryError("coincident nuclei " + std::to_string(j) + " and " + std::to_string(i));
      e += atoms_[i].charge * atoms_[j].charge / r;
    }
  }
  return e;
}

Eigen::Vector3d Geometry::center_of_charge() const {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& a : atoms_) c += a.charge * a.position;
  return c / total_nuclear_charge();
}

double Geometry::molar_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += element_mass(a.charge);
  return m;
}

Geometry Geometry::translated(const Eigen::Vector3d& shift) const {
  auto atoms = atoms_;
  for (auto& a : atoms) a.position += shift;
  return Geometry(std::move(atoms));
}

Geometry Geometry::transformed(const Eigen::Matrix3d& rotation) const {
  auto atoms = atoms_;
  for (auto& a : atoms) a.position = rotation * a.position;
  return Geometry(std::move(atoms));
}

Geometry Geometry::mirrored() const {
  return transformed(Eigen::Vector3d(1.0, -1.0, 1.0).asDiagonal());
}

std::string Geometry::to_string(LengthUnit unit) const {
  std::ostringstream out;
  out << std::setprecision(12);
  const double scale = unit == LengthUnit::Angstrom ? units::kAngstromPerBohr : 1.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (i) out << "; ";
    out << a.symbol << ' ' << a.position.x() * scale << ' ' << a.position.y() * scale << ' '
        << a.position.z() * scale;
  }
  return out.str();
}

namespace molecules {

namespace {
Atom make(const char* symbol, double x, double y, double z) {
  return Atom{symbol, element_charge(symbol), Eigen::Vector3d(x, y, z) * units::kBohrPerAngstrom};
}
}  // namespace

Geometry h2(double bond) { return Geometry({make("H", 0, 0, 0), make("H", 0, 0, bond)}); }

Geometry lih(double bond) { return Geometry({make("Li", 0, 0, 0), make("H", 0, 0, bond)}); }

Geometry h2o(double oh_bond, double hoh_angle_deg) {
  const double half = 0.5 * hoh_angle_deg * units::kPi / 180.0;
  const double x = oh_bond * std::sin(half);
  const double z = oh_bond * std::cos(half);
  return Geometry({make("O", 0, 0, 0), make("H", x, 0, z), make("H", -x, 0, z)});
}

Geometry h4_square(double side) {
  const double h = 0.5 * side;
  return Geometry({make("H", -h, -h, 0), make("H", h, -h, 0), make("H", h, h, 0), make("H", -h, h, 0)});
}

Geometry h_chain(int n_atoms, double spacing) {
  if (n_atoms < 1) throw GeometryError("hydrogen chain needs at least one atom");
  std::vector<Atom> atoms;
  for (int i = 0; i < n_atoms; ++i) atoms.push_back(make("H", 0, 0, i * spacing));
  return Geometry(std::move(atoms));
}

Geometry h2_dimer_helical(double bond, double separation, double dihedral_deg) {
  const double h = 0.5 * bond;
  const double phi = dihedral_deg * units::kPi / 180.0;
  const double c = std::cos(phi), s = std::sin(phi);
  return Geometry({make("H", -h, 0, 0), make("H", h, 0, 0), make("H", -h * c, -h * s, separation),
                   make("H", h * c, h * s, separation)});
}

}  // namespace molecules

}  // namespace qlrsim::integrals
