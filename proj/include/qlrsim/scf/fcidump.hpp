#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "qlrsim/scf/mo_transform.hpp"

namespace qlrsim::scf {

class FcidumpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// FCIDUMP text: namelist header (NORB, NELEC, MS2, ORBSYM, ISYM) followed by
/// `value i j k l` records, 1-based spatial indices, chemist (ij|kl).
/// One-electron records have k = l = 0, the core energy has all indices 0.
void write_fcidump(std::ostream& out, const MOIntegrals& mo);
MOIntegrals read_fcidump(std::istream& in);

void write_fcidump_file(const std::string& path, const MOIntegrals& mo);
MOIntegrals read_fcidump_file(const std::string& path);

/// Property sidecar with the same 1-based spatial indexing:
///   NORB n
///   ORIGIN x y z           (bohr)
///   DX|DY|DZ value i j     dipole, i <= j, symmetric
///   LX|LY|LZ value i j     stored angular momentum, i < j, antisymmetric
void write_property_sidecar(std::ostream& out, const PropertyOperatorSet& props);
PropertyOperatorSet read_property_sidecar(std::istream& in);

}  // namespace qlrsim::scf
