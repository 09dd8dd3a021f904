#pragma once

#include <optional>

#include "qlrsim/noise/noise.hpp"

namespace qlrsim::noise {

/// One report at one grid point of a study.
struct StudyPoint {
  std::string parameter;  // "bond_angstrom" or empty
  double value = 0.0;
  NoiseReport report;
};

struct NoiseStudy {
  std::string recipe;
  std::string description;
  std::vector<StudyPoint> points;
};

struct StudyOptions {
  std::optional<int> trials;  // default 1,000
  std::uint64_t seed = 20230501;
  std::optional<std::vector<double>> magnitudes;  // override the recipe's noise grid
  std::optional<std::vector<double>> bonds;       // fig5 only
};

/// fig5                 H2 bond scan, ground-parameter noise, alpha(589 nm)
/// fig5-shot            square H4 (1.5 A), matrix-element noise, alpha(589 nm)
/// fig7a                linear H6 (4 A), matrix-element noise, three lowest EEs
/// fig7b-exact-overlap  as fig7a with exact metric/overlap matrices
std::vector<std::string> noise_recipes();
NoiseStudy run_noise_study(const std::string& recipe, const StudyOptions& options = {});

}  // namespace qlrsim::noise
