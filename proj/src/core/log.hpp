#pragma once

#include <functional>
#include <string_view>

namespace rdskit::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3 };

using Sink = std::function<void(Level, std::string_view)>;

/// Replaces the process-wide sink; an empty sink restores the stderr default.
void set_sink(Sink sink);
void set_min_level(Level level);

void write(Level level, std::string_view message);

inline void debug(std::string_view m) { write(Level::Debug, m); }
inline void info(std::string_view m) { write(Level::Info, m); }
inline void warn(std::string_view m) { write(Level::Warn, m); }
inline void error(std::string_view m) { write(Level::Error, m); }

} // namespace rdskit::log
