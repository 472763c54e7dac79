#pragma once

// Level-gated stderr logging. The level comes from MACROFORGE_LOG
// (error|warn|info|debug); default warn.

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace macroforge::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

inline Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("MACROFORGE_LOG");
    const std::string_view v = env ? env : "";
    if (v == "error") return Level::error;
    if (v == "info") return Level::info;
    if (v == "debug") return Level::debug;
    return Level::warn;
  }();
  return lvl;
}

inline void write(Level l, std::string_view tag, const std::string& msg) {
  if (static_cast<int>(l) <= static_cast<int>(level()))
    std::cerr << "[macroforge " << tag << "] " << msg << '\n';
}

inline void error(const std::string& msg) { write(Level::error, "error", msg); }
inline void warn(const std::string& msg) { write(Level::warn, "warn", msg); }
inline void info(const std::string& msg) { write(Level::info, "info", msg); }
inline void debug(const std::string& msg) { write(Level::debug, "debug", msg); }

}  // namespace macroforge::log
