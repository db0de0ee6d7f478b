#include "agentrag/graph/trace.hpp"

#include <array>
#include <ostream>
#include <stdexcept>

namespace agentrag::graph {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 6> kKindNames{{
    {EventKind::run_start, "run_start"},
    {EventKind::node_enter, "node_enter"},
    {EventKind::node_exit, "node_exit"},
    {EventKind::decision, "decision"},
    {EventKind::run_end, "run_end"},
    {EventKind::run_error, "run_error"},
}};

template <typename T>
nlohmann::json optional_json(const std::optional<T>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

EventKind event_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown trace event kind: " + std::string(name));
}

nlohmann::json to_json(const TraceEvent& event) {
  return {
      {"run_id", event.run_id},
      {"seq", event.seq},
      {"kind", to_string(event.kind)},
      {"node", optional_json(event.node)},
      {"label", optional_json(event.label)},
      {"duration_ms", optional_json(event.duration_ms)},
      {"state_digest", event.state_digest},
  };
}

TraceEvent trace_event_from_json(const nlohmann::json& j) {
  TraceEvent event;
  event.run_id = j.at("run_id").get<std::string>();
  event.seq = j.at("seq").get<std::int64_t>();
  event.kind = event_kind_from_string(j.at("kind").get<std::string>());
  if (!j.at("node").is_null()) event.node = j.at("node").get<std::string>();
  if (!j.at("label").is_null()) event.label = j.at("label").get<std::string>();
  if (!j.at("duration_ms").is_null()) event.duration_ms = j.at("duration_ms").get<double>();
  event.state_digest = j.at("state_digest");
  return event;
}

void JsonlTraceWriter::write(const TraceEvent& event) {
  *out_ << to_json(event).dump() << '\n';
  out_->flush();
}

TraceSink JsonlTraceWriter::sink() {
  return [this](const TraceEvent& event) { write(event); };
}

}  // namespace agentrag::graph
