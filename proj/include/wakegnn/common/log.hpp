#pragma once

#include <spdlog/spdlog.h>

namespace wakegnn {

/// Configures the default spdlog logger from WAKE_GNN_LOG (error|warn|info|debug).
/// Unset or unrecognised values fall back to `warn`.
void init_logging();

}  // namespace wakegnn
