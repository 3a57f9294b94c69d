#include "pm/log.hpp"

#include <cstdlib>
#include <string_view>

#include <spdlog/sinks/stdout_sinks.h>

namespace pm {

namespace {

spdlog::level::level_enum level_from_env() {
    const char* env = std::getenv("PM_LOG");
    if (env == nullptr) return spdlog::level::warn;
    std::string_view v(env);
    if (v == "error") return spdlog::level::err;
    if (v == "warn") return spdlog::level::warn;
    if (v == "info") return spdlog::level::info;
    if (v == "debug") return spdlog::level::debug;
    return spdlog::level::warn;
}

std::shared_ptr<spdlog::logger> make_logger() {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto logger = std::make_shared<spdlog::logger>("pm", sink);
    logger->set_pattern("pm: %l: %v");
    logger->set_level(level_from_env());
    return logger;
}

}  // namespace

spdlog::logger& log() {
    static std::shared_ptr<spdlog::logger> logger = make_logger();
    return *logger;
}

void set_log_level(spdlog::level::level_enum level) { log().set_level(level); }

}  // namespace pm
