#include "run_manifest.hpp"

#include <ctime>
#include <fstream>

#include <Eigen/Core>
#include <fmt/format.h>
#include <spdlog/version.h>

#include "wakegnn/common/error.hpp"

#ifndef WAKEGNN_VERSION
#define WAKEGNN_VERSION "unknown"
#endif

namespace wakegnn::cli {

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

RunManifest::RunManifest(std::string command, std::optional<std::filesystem::path> config, std::uint64_t seed)
    : command_(std::move(command)), config_(std::move(config)), seed_(seed), started_utc_(utc_now()),
      start_(std::chrono::steady_clock::now()) {}

void RunManifest::write(const std::filesystem::path& dir) {
  timings_["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json j;
  j["command"] = command_;
  j["config"] = config_ ? nlohmann::json(config_->string()) : nlohmann::json(nullptr);
  j["seed"] = seed_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["versions"] = {
      {"wakegnn", WAKEGNN_VERSION},
      {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
      {"spdlog", fmt::format("{}.{}.{}", SPDLOG_VER_MAJOR, SPDLOG_VER_MINOR, SPDLOG_VER_PATCH)},
      {"compiler", __VERSION__},
  };
  j["started_utc"] = started_utc_;
  j["timings_s"] = timings_;
  for (auto& [k, v] : extra_.items()) j[k] = v;
  std::filesystem::create_directories(dir);
  const auto path = dir / "run_manifest.json";
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace wakegnn::cli
