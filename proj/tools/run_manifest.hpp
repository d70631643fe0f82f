#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace wakegnn::cli {

/// run_manifest.json written next to every command's outputs.
class RunManifest {
 public:
  RunManifest(std::string command, std::optional<std::filesystem::path> config, std::uint64_t seed);

  void input(const std::filesystem::path& p) { inputs_.push_back(p.string()); }
  void output(const std::filesystem::path& p) { outputs_.push_back(p.string()); }
  void timing(const std::string& name, double seconds) { timings_[name] = seconds; }
  void note(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

  /// Writes `dir/run_manifest.json`, stamping total wall time.
  void write(const std::filesystem::path& dir);

 private:
  std::string command_;
  std::optional<std::filesystem::path> config_;
  std::uint64_t seed_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::map<std::string, double> timings_;
  nlohmann::json extra_ = nlohmann::json::object();
  std::string started_utc_;
  std::chrono::steady_clock::time_point start_;
};

/// Wall-clock seconds of a callable.
template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace wakegnn::cli
