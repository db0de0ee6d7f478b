#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace agentrag::graph {

enum class EventKind { run_start, node_enter, node_exit, decision, run_end, run_error };

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view name);

/// One step of a run.
///
/// `label` carries the routing label for decision events and the error type
/// for run_error events. `duration_ms` is set on node_exit, decision and
/// run_end.
struct TraceEvent {
  std::string run_id;
  std::int64_t seq = 0;
  EventKind kind = EventKind::run_start;
  std::optional<std::string> node;
  std::optional<std::string> label;
  std::optional<double> duration_ms;
  nlohmann::json state_digest = nlohmann::json::object();

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using TraceSink = std::function<void(const TraceEvent&)>;

nlohmann::json to_json(const TraceEvent& event);
TraceEvent trace_event_from_json(const nlohmann::json& j);

/// Writes events as JSON Lines, one object per event, flushed per line.
class JsonlTraceWriter {
 public:
  explicit JsonlTraceWriter(std::ostream& out) : out_(&out) {}

  void write(const TraceEvent& event);
  TraceSink sink();

 private:
  std::ostream* out_;
};

}  // namespace agentrag::graph
