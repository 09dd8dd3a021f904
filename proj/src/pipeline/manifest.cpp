#include "qlrsim/pipeline/manifest.hpp"

#include <openssl/evp.h>

#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "qlrsim/noise/noise.hpp"

namespace qlrsim::pipeline {

namespace fs = std::filesystem;

std::string sha256_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof buf);
    if (f.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(f.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

namespace {

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Manifest::Manifest(std::string command, std::vector<std::string> argv) : start_(std::chrono::steady_clock::now()) {
  j_["software"] = {{"name", kSoftwareName}, {"version", kSoftwareVersion}};
  j_["command"] = std::move(command);
  j_["argv"] = std::move(argv);
  j_["started_utc"] = utc_now();
  j_["threads"] = noise::worker_count();
  j_["status"] = "running";
  j_["warnings"] = nlohmann::json::array();
  j_["timings_seconds"] = nlohmann::json::object();
}

void Manifest::add_timing(const std::string& stage, double seconds) {
  auto& t = j_["timings_seconds"];
  t[stage] = t.value(stage, 0.0) + seconds;
}

void Manifest::add_warning(const std::string& w) { j_["warnings"].push_back(w); }

void Manifest::add_file(const std::string& relative_path) { files_.push_back(relative_path); }

void Manifest::fail(int exit_code, const std::string& kind, const std::string& message) {
  j_["status"] = "failed";
  j_["exit_code"] = exit_code;
  j_["error"] = {{"kind", kind}, {"message", message}};
}

void Manifest::succeed() {
  j_["status"] = "complete";
  j_["exit_code"] = 0;
}

void Manifest::write(const std::string& dir) {
  j_["finished_utc"] = utc_now();
  if (j_["status"] == "failed" && !files_.empty()) j_["status"] = "partial";
  j_["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  auto inv = nlohmann::json::array();
  for (const auto& f : files_) {
    const auto p = fs::path(dir) / f;
    if (!fs::exists(p)) continue;
    inv.push_back({{"path", f},
                   {"bytes", static_cast<std::uint64_t>(fs::file_size(p))},
                   {"sha256", sha256_file(p.string())},
                   {"partial", j_["status"] != "complete"}});
  }
  j_["files"] = inv;
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << j_.dump(2) << '\n';
}

}  // namespace qlrsim::pipeline
