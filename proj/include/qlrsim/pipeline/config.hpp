#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qlrsim/adapt/vqe.hpp"
#include "qlrsim/eom/properties.hpp"
#include "qlrsim/eom/subspace.hpp"
#include "qlrsim/integrals/geometry.hpp"
#include "qlrsim/qlr/response.hpp"

namespace qlrsim::pipeline {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GaugePolicy { CenterOfCharge, CoordinateOrigin, Explicit };

struct MoleculeSpec {
  // exactly one of builder / geometry / fcidump
  std::string builder;
  std::map<std::string, double> params;  // builder parameters, angstrom and degrees
  std::string geometry;                  // inline records, or read from geometry_file
  std::string geometry_file;
  integrals::LengthUnit units = integrals::LengthUnit::Angstrom;
  std::string fcidump;
  std::string property_sidecar;
  int charge = 0;
  int multiplicity = 1;
  std::string basis = "sto-3g";
  GaugePolicy gauge = GaugePolicy::CenterOfCharge;
  Eigen::Vector3d gauge_origin = Eigen::Vector3d::Zero();  // bohr, explicit policy
};

struct MethodSet {
  bool adapt = true;
  bool fci = true;
  std::vector<eom::Method> eom;
  std::vector<eom::Variant> qlr;  // SelfConsistent and/or Projected
  eom::QeomNormalization qeom_normalization = eom::QeomNormalization::State;
  eom::MatrixPath path = eom::MatrixPath::Direct;
  int states = 0;    // excited states reported per method; 0 = all
  int max_rank = 2;  // excitation rank of the eom/qlr manifolds
};

struct ResponseSpec {
  std::vector<double> omegas;  // hartree, in config order (wavelengths first)
  std::vector<bool> from_wavelength;
  bool rotation = false;
  qlr::SolveForm form = qlr::SolveForm::Separated;
};

struct SpectrumSpec {
  bool enabled = false;
  eom::Lineshape lineshape = eom::Lineshape::Lorentzian;
  double fwhm = eom::kDefaultFwhm;  // hartree
  int points = 2001;
  std::optional<std::pair<double, double>> range;  // hartree; default from the sticks
};

struct ScanSpec {
  std::string parameter;  // a builder parameter
  std::vector<double> values;
};

struct NoiseConfig {
  bool enabled = false;
  std::string kind = "matrix-element";  // or "parameter"
  std::vector<double> magnitudes;
  int trials = 1000;
  bool hermitize = true;
  std::vector<bool> noisy_metric{true};  // one study per entry
  bool noisy_z = true;
  int states = 3;  // excitation energies per eom method
  bool raw = false;
};

struct RunConfig {
  std::string name = "run";
  MoleculeSpec molecule;
  adapt::AdaptOptions adapt;
  MethodSet methods;
  ResponseSpec response;
  SpectrumSpec spectrum;
  std::optional<ScanSpec> scan;
  NoiseConfig noise;
  bool table1 = false;  // 3 lowest states x {FCI, sc, proj, qEOM} table
  std::string output_dir = "qlrsim-out";
  std::uint64_t seed = 20230501;
};

/// Parses and validates a TOML config. Relative file paths are resolved
/// against `base_dir`. Unknown keys, wrong types and inconsistent settings
/// throw ConfigError.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Fully resolved config (defaults filled in) for the manifest.
nlohmann::json to_json(const RunConfig& c);

/// Builder names: h2, lih, h2o, h4-square, h-chain, h2-dimer.
std::vector<std::string> molecule_builders();
/// Default parameters of a builder (throws ConfigError for unknown names).
std::map<std::string, double> builder_defaults(const std::string& builder);
integrals::Geometry build_molecule(const std::string& builder, const std::map<std::string, double>& params);
/// "bond" -> "bond_angstrom", "dihedral" -> "dihedral_deg", "atoms" -> "atoms".
std::string parameter_column(const std::string& parameter);

/// The geometry described by `m` (builder or inline/file records).
integrals::Geometry resolve_geometry(const MoleculeSpec& m);

}  // namespace qlrsim::pipeline
