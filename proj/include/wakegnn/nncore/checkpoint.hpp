#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace wakegnn::nn {

/// Named f64 tensor as stored in a checkpoint.
struct Blob {
  std::string name;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> data;

  friend bool operator==(const Blob&, const Blob&) = default;
};

/// Contents of a "CKP1" file.
///
/// Layout (little-endian):
///   'C','K','P','1'  u32 version = 1
///   u64 header length, then the header as UTF-8 JSON text. The header carries
///       the caller's metadata under "metadata" plus the blob directory.
///   f64 parameter blobs in declaration order,
///   then (if present) f64 first-moment blobs, then f64 second-moment blobs.
struct Checkpoint {
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<Blob> parameters;
  std::int64_t optimizer_step = 0;
  std::vector<Blob> first_moments;   // empty, or one per parameter
  std::vector<Blob> second_moments;  // empty, or one per parameter

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckp);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace wakegnn::nn
