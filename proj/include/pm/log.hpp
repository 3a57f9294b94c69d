#pragma once

#include <memory>

#include <spdlog/spdlog.h>

namespace pm {

// Process-wide logger writing to stderr. The level is taken from PM_LOG
// (error|warn|info|debug) on first use and defaults to warn.
spdlog::logger& log();

void set_log_level(spdlog::level::level_enum level);

}  // namespace pm
