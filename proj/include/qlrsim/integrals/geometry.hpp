#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qlrsim::integrals {

enum class LengthUnit { Angstrom, Bohr };

LengthUnit parse_length_unit(std::string_view text);

struct Atom {
  std::string symbol;
  int charge = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // bohr
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nuclear framework. Positions are always stored in bohr.
class Geometry {
 public:
  Geometry() = default;
  explicit Geometry(std::vector<Atom> atoms);

  /// Parses `SYMBOL x y z` records separated by newlines or ';'. A line
  /// `units angstrom|bohr` overrides `unit`. '#' starts a comment.
  static Geometry parse(std::string_view text, LengthUnit unit);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  int total_nuclear_charge() const;
  double nuclear_repulsion() const;
  Eigen::Vector3d center_of_charge() const;
  double molar_mass() const;  // g/mol, standard atomic weights

  Geometry translated(const Eigen::Vector3d& shift) const;
  Geometry transformed(const Eigen::Matrix3d& rotation) const;
  /// Reflection through the xz plane (y -> -y).
  Geometry mirrored() const;

  std::string to_string(LengthUnit unit = LengthUnit::Angstrom) const;

 private:
  std::vector<Atom> atoms_;
};

int element_charge(std::string_view symbol);
double element_mass(int charge);

/// Builders for the molecules used by the scan recipes. Lengths in angstrom,
/// angles in degrees.
namespace molecules {
Geometry h2(double bond);
Geometry lih(double bond);
/// O at the origin, molecule in the xz plane, C2 axis along z.
Geometry h2o(double oh_bond, double hoh_angle_deg);
Geometry h4_square(double side);
Geometry h_chain(int n_atoms, double spacing);
/// Two H2 units with bond length `bond`, centroids separated by `separation`
/// along z; the second unit's bond axis is rotated by `dihedral_deg` about z.
Geometry h2_dimer_helical(double bond, double separation, double dihedral_deg);
}  // namespace molecules

}  // namespace qlrsim::integrals
