#include "selftrig/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace selftrig::log {

static Level parse_env() {
    const char* raw = std::getenv("SELFTRIG_LOG");
    if (!raw) return Level::warn;
    std::string v(raw);
    if (v == "error") return Level::error;
    if (v == "warn") return Level::warn;
    if (v == "info") return Level::info;
    if (v == "debug") return Level::debug;
    return Level::warn;
}

Level threshold() {
    static const Level lvl = parse_env();
    return lvl;
}

bool enabled(Level lvl) {
    return static_cast<int>(lvl) <= static_cast<int>(threshold());
}

void write(Level lvl, const std::string& msg) {
    if (!enabled(lvl)) return;
    static std::mutex mu;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << "[selftrig:" << names[static_cast<int>(lvl)] << "] " << msg << "\n";
}

} // namespace selftrig::log
