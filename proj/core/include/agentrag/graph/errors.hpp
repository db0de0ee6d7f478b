#pragma once

#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "agentrag/graph/trace.hpp"

namespace agentrag::graph {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Construction errors.
class InvalidNodeName : public GraphError {
 public:
  using GraphError::GraphError;
};
class DuplicateNode : public GraphError {
 public:
  using GraphError::GraphError;
};
class UnknownNode : public GraphError {
 public:
  using GraphError::GraphError;
};
class EdgeConflict : public GraphError {
 public:
  using GraphError::GraphError;
};
class InvalidRouting : public GraphError {
 public:
  using GraphError::GraphError;
};

// Compilation errors.
class NoEntryPoint : public GraphError {
 public:
  using GraphError::GraphError;
};
class DeadEnd : public GraphError {
 public:
  using GraphError::GraphError;
};
class NoTerminal : public GraphError {
 public:
  using GraphError::GraphError;
};

/// Base for failures raised while a run is executing; carries the events
/// emitted before the failure (including the terminal run_error event).
class RunError : public GraphError {
 public:
  RunError(const std::string& what, std::vector<TraceEvent> trace)
      : GraphError(what), trace_(std::move(trace)) {}

  const std::vector<TraceEvent>& trace() const noexcept { return trace_; }

 private:
  std::vector<TraceEvent> trace_;
};

class StepLimitExceeded : public RunError {
 public:
  StepLimitExceeded(std::size_t limit, std::vector<TraceEvent> trace)
      : RunError("step limit of " + std::to_string(limit) + " exceeded", std::move(trace)),
        limit_(limit) {}

  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

/// A node or decision function threw. `cause()` holds the original exception.
class NodeFailed : public RunError {
 public:
  NodeFailed(std::string node, std::exception_ptr cause, const std::string& detail,
             std::vector<TraceEvent> trace)
      : RunError("node '" + node + "' failed: " + detail, std::move(trace)),
        node_(std::move(node)),
        cause_(std::move(cause)) {}

  const std::string& node() const noexcept { return node_; }
  std::exception_ptr cause() const noexcept { return cause_; }

 private:
  std::string node_;
  std::exception_ptr cause_;
};

/// A decision function returned a label absent from its label map.
class UnknownLabel : public RunError {
 public:
  UnknownLabel(const std::string& node, const std::string& label, std::vector<TraceEvent> trace)
      : RunError("decision at '" + node + "' returned unmapped label '" + label + "'",
                 std::move(trace)) {}
};

}  // namespace agentrag::graph
