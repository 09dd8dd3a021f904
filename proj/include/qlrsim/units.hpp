#pragma once

// Physical constants and unit conversions shared by every module.

namespace qlrsim::units {

inline constexpr double kBohrPerAngstrom = 1.8897259886;
inline constexpr double kAngstromPerBohr = 1.0 / kBohrPerAngstrom;

// E[hartree] = kHartreeNanometer / lambda[nm]
inline constexpr double kHartreeNanometer = 45.56335;

// cm^-1 per hartree (CODATA)
inline constexpr double kWavenumberPerHartree = 219474.63;

// [alpha] = kSpecificRotationPrefactor * nu^2[cm^-1] * beta[au] / M[g/mol]
// gives deg dm^-1 (g/mL)^-1.
inline constexpr double kSpecificRotationPrefactor = 1.343e-4;

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double nm_to_hartree(double nm) { return kHartreeNanometer / nm; }
inline constexpr double hartree_to_nm(double eh) { return kHartreeNanometer / eh; }
inline constexpr double hartree_to_wavenumber(double eh) { return eh * kWavenumberPerHartree; }

}  // namespace qlrsim::units
