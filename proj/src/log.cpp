#include "qakd/log.hpp"

#include <iostream>
#include <mutex>

namespace qakd::log {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

Sink& current_sink() {
  static Sink sink = [](const nlohmann::json& event) { std::cerr << event.dump() << '\n'; };
  return sink;
}

}  // namespace

Sink set_sink(Sink sink) {
  std::lock_guard lock(sink_mutex());
  Sink previous = std::move(current_sink());
  current_sink() = std::move(sink);
  return previous;
}

void emit(std::string_view level, std::string_view event, nlohmann::json fields) {
  nlohmann::json record = nlohmann::json::object();
  record["level"] = level;
  record["event"] = event;
  if (fields.is_object()) {
    for (auto& [key, value] : fields.items()) record[key] = std::move(value);
  }
  std::lock_guard lock(sink_mutex());
  if (current_sink()) current_sink()(record);
}

}  // namespace qakd::log
