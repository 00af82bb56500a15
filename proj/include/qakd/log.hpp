#ifndef QAKD_LOG_HPP
#define QAKD_LOG_HPP

#include <functional>
#include <string_view>

#include <nlohmann/json.hpp>

namespace qakd::log {

// Events are JSON objects {"level", "event", ...fields}. The default sink
// writes one object per line to stderr.
using Sink = std::function<void(const nlohmann::json&)>;

/// Replaces the process-wide sink and returns the previous one.
Sink set_sink(Sink sink);

void emit(std::string_view level, std::string_view event, nlohmann::json fields = nlohmann::json::object());

inline void info(std::string_view event, nlohmann::json fields = nlohmann::json::object()) {
  emit("info", event, std::move(fields));
}

inline void warn(std::string_view event, nlohmann::json fields = nlohmann::json::object()) {
  emit("warn", event, std::move(fields));
}

}  // namespace qakd::log

#endif  // QAKD_LOG_HPP
