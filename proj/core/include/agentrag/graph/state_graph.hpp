#pragma once

#include <cstddef>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agentrag/graph/errors.hpp"
#include "agentrag/graph/state.hpp"
#include "agentrag/graph/trace.hpp"

namespace agentrag::graph {

/// Reserved terminal target. Never a valid node name.
inline constexpr std::string_view kEnd = "END";

/// Returns the fields to overwrite in the running state.
using NodeFn = std::function<State(const State&)>;
/// Chooses an outgoing routing label from the current state.
using DecisionFn = std::function<std::string(const State&)>;
/// Routing label -> target node (or kEnd), in declaration order.
using LabelMap = std::vector<std::pair<std::string, std::string>>;

struct RunConfig {
  std::size_t step_limit = 25;
  TraceSink trace_sink;
  // Generated when empty.
  std::string run_id;
};

struct Edge {
  std::string from;
  std::string to;
  std::optional<std::string> label;  // set for conditional edges

  friend bool operator==(const Edge&, const Edge&) = default;
};

namespace detail {

struct ConditionalRoute {
  DecisionFn decide;
  LabelMap label_map;
};

struct NodeSpec {
  std::string name;
  NodeFn fn;
  std::optional<std::string> plain_target;
  std::optional<ConditionalRoute> conditional;

  bool has_route() const { return plain_target.has_value() || conditional.has_value(); }
};

struct Topology {
  std::vector<NodeSpec> nodes;  // insertion order
  std::string entry;

  const NodeSpec* find(std::string_view name) const;
};

}  // namespace detail

class CompiledGraph;

/// Mutable builder for a cyclic state graph. Single-threaded.
class StateGraph {
 public:
  StateGraph& add_node(std::string name, NodeFn fn);
  StateGraph& set_entry_point(const std::string& name);
  StateGraph& add_edge(const std::string& from, const std::string& to);
  StateGraph& add_conditional_edges(const std::string& from, DecisionFn decide, LabelMap label_map);

  std::size_t node_count() const { return topology_.nodes.size(); }
  bool has_node(std::string_view name) const { return topology_.find(name) != nullptr; }
  const std::optional<std::string>& entry() const { return entry_; }

  /// Validates and freezes a copy of the graph. The builder stays usable.
  CompiledGraph compile() const;

 private:
  detail::NodeSpec& require_node(std::string_view name);
  void require_target(std::string_view target) const;

  detail::Topology topology_;
  std::optional<std::string> entry_;
};

struct StreamItem {
  TraceEvent event;
  State state;
};

/// Incremental execution of one run. Each call to next() yields one event
/// together with the state as it stands after that event. After a failure
/// the last yielded event is run_error and error() holds the exception.
class Execution {
 public:
  std::optional<StreamItem> next();

  bool finished() const { return phase_ == Phase::done && pending_.empty(); }
  std::exception_ptr error() const { return error_; }
  void rethrow_if_failed() const {
    if (error_) std::rethrow_exception(error_);
  }
  const State& state() const { return state_; }
  const std::string& run_id() const { return run_id_; }
  const std::vector<TraceEvent>& events() const { return history_; }

 private:
  friend class CompiledGraph;
  enum class Phase { start, enter, execute, route, done };

  Execution(std::shared_ptr<const detail::Topology> topology, State initial, std::size_t step_limit,
            std::string run_id);

  void advance();
  void emit(EventKind kind, std::optional<std::string> node = std::nullopt,
            std::optional<std::string> label = std::nullopt,
            std::optional<double> duration_ms = std::nullopt);
  template <typename Error, typename... Args>
  void fail(std::string_view error_label, Args&&... args);

  std::shared_ptr<const detail::Topology> topology_;
  State state_;
  std::size_t step_limit_;
  std::string run_id_;
  Phase phase_ = Phase::start;
  const detail::NodeSpec* current_ = nullptr;
  std::size_t steps_ = 0;
  std::int64_t seq_ = 0;
  double run_start_ms_ = 0;
  std::deque<StreamItem> pending_;
  std::vector<TraceEvent> history_;
  std::exception_ptr error_;
};

/// Frozen, validated graph. Cheap to copy; safe to share across threads.
class CompiledGraph {
 public:
  /// Runs to END and returns the final state. Events go to cfg.trace_sink
  /// in execution order. Throws StepLimitExceeded, NodeFailed or UnknownLabel.
  State invoke(State initial, const RunConfig& cfg = {}) const;

  /// Same run as invoke, driven by the caller one event at a time.
  /// cfg.trace_sink is not called; the caller consumes the events.
  Execution stream(State initial, const RunConfig& cfg = {}) const;

  std::string export_dot() const;

  const std::string& entry() const { return topology_->entry; }
  std::vector<std::string> node_names() const;
  std::vector<Edge> edges() const;

 private:
  friend class StateGraph;
  explicit CompiledGraph(std::shared_ptr<const detail::Topology> topology)
      : topology_(std::move(topology)) {}

  std::shared_ptr<const detail::Topology> topology_;
};

std::string make_run_id();

}  // namespace agentrag::graph
