#include "wakegnn/common/log.hpp"

#include <cstdlib>
#include <string_view>

namespace wakegnn {

void init_logging() {
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("WAKE_GNN_LOG")) {
    const std::string_view v{env};
    if (v == "error") level = spdlog::level::err;
    else if (v == "warn") level = spdlog::level::warn;
    else if (v == "info") level = spdlog::level::info;
    else if (v == "debug") level = spdlog::level::debug;
  }
  spdlog::set_level(level);
  spdlog::set_pattern("[%l] %v");
}

}  // namespace wakegnn
