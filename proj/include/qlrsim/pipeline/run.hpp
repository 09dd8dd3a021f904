#pragma once

#include <exception>
#include <map>
#include <string>
#include <vector>

#include "qlrsim/noise/recipes.hpp"
#include "qlrsim/pipeline/config.hpp"
#include "qlrsim/pipeline/manifest.hpp"
#include "qlrsim/pipeline/table.hpp"

namespace qlrsim::pipeline {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,        // anything not covered below
  kExitConfig = 2,       // invalid config, geometry or input file
  kExitConvergence = 3,  // SCF, ADAPT or optimizer failure
  kExitResonance = 4,    // a single-point response hit a pole
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exit code and a short kind label ("config", "convergence", ...) for an
/// exception thrown by any stage.
std::pair<int, std::string> classify(std::exception_ptr e);

/// Tables of one run keyed by artifact name (file stem), plus extra JSON
/// artifacts (ansatz files) and warnings.
struct Artifacts {
  std::map<std::string, Table> tables;
  std::vector<std::pair<std::string, nlohmann::json>> json_files;  // relative path, content
  std::vector<std::string> warnings;
  std::map<std::string, double> timings;

  Table& table(const std::string& name);
  /// Appends `other` (same table layout) after this one's rows.
  void merge(Artifacts&& other);
};

/// Column layouts, shared by runs, scans and the docs.
std::vector<std::string> ground_columns();
std::vector<std::string> excitation_columns();
std::vector<std::string> response_columns();
std::vector<std::string> spectrum_stick_columns();
std::vector<std::string> spectrum_columns();
std::vector<std::string> table1_columns();
std::vector<std::string> noise_columns();
std::vector<std::string> noise_trial_columns();

/// Computes every requested stage. Scan points run on a worker pool and are
/// gathered in grid order. In a scan, resonant responses become flagged rows;
/// at a single point they throw ResonanceError. On failure the rows computed
/// so far stay in `out` and the exception propagates.
void compute(const RunConfig& config, Artifacts& out);

/// compute() + files + manifest.json in `dir`. Returns the exit code; never
/// throws for pipeline errors (they are reported in the manifest and on
/// stderr).
int run(const RunConfig& config, const std::string& dir, Manifest& manifest);

/// Noise-study rows in the noise CSV layout.
void add_noise_rows(const noise::NoiseStudy& study, Table& summary, Table* trials);

/// Writes the tables (and JSON files) into `dir` and registers them.
void write_artifacts(const Artifacts& a, const std::string& dir, Manifest& manifest);

/// Thresholds in effect, for the manifest.
nlohmann::json tolerances(const RunConfig& config);

}  // namespace qlrsim::pipeline
