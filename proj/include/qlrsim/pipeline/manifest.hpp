#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "json.hpp"

namespace qlrsim::pipeline {

inline constexpr const char* kSoftwareName = "qlrsim";
inline constexpr const char* kSoftwareVersion = "0.1.0";

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

/// run manifest: everything needed to reproduce the artifacts, plus what is
/// not reproducible (timestamps, timings), which stays out of the CSVs.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv);

  void set_config(nlohmann::json config) { j_["config"] = std::move(config); }
  void set_tolerances(nlohmann::json t) { j_["tolerances"] = std::move(t); }
  void add_timing(const std::string& stage, double seconds);
  void add_warning(const std::string& w);
  void add_note(const std::string& key, nlohmann::json value) { j_["notes"][key] = std::move(value); }
  /// Registers an artifact (relative to the output directory).
  void add_file(const std::string& relative_path);

  /// Marks the run failed; artifacts already written are listed as partial.
  void fail(int exit_code, const std::string& kind, const std::string& message);
  void succeed();

  /// Checksums every registered file and writes manifest.json into `dir`.
  void write(const std::string& dir);
  const nlohmann::json& json() const { return j_; }

 private:
  nlohmann::json j_;
  std::vector<std::string> files_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace qlrsim::pipeline
