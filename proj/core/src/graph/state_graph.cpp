#include "agentrag/graph/state_graph.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

namespace agentrag::graph {

namespace {

double now_ms() {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

bool is_end(std::string_view name) { return name == kEnd; }

bool is_dot_keyword(std::string_view id) {
  static constexpr std::string_view kKeywords[] = {"node", "edge", "graph", "digraph", "subgraph",
                                                   "strict"};
  for (auto kw : kKeywords) {
    if (kw.size() != id.size()) continue;
    bool same = std::equal(kw.begin(), kw.end(), id.begin(), [](char a, char b) {
      return a == std::tolower(static_cast<unsigned char>(b));
    });
    if (same) return true;
  }
  return false;
}

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string dot_id(std::string_view name) {
  auto plain = [](unsigned char c, bool first) {
    return std::isalpha(c) || c == '_' || c >= 0x80 || (!first && std::isdigit(c));
  };
  bool ok = !name.empty() && !is_dot_keyword(name);
  for (std::size_t i = 0; ok && i < name.size(); ++i)
    ok = plain(static_cast<unsigned char>(name[i]), i == 0);
  return ok ? std::string(name) : dot_quote(name);
}

}  // namespace

// ---------------------------------------------------------------------------
// Topology

const detail::NodeSpec* detail::Topology::find(std::string_view name) const {
  for (const auto& node : nodes)
    if (node.name == name) return &node;
  return nullptr;
}

// ---------------------------------------------------------------------------
// StateGraph

detail::NodeSpec& StateGraph::require_node(std::string_view name) {
  for (auto& node : topology_.nodes)
    if (node.name == name) return node;
  throw UnknownNode("unknown node '" + std::string(name) + "'");
}

void StateGraph::require_target(std::string_view target) const {
  if (is_end(target)) return;
  if (!has_node(target)) throw UnknownNode("unknown edge target '" + std::string(target) + "'");
}

StateGraph& StateGraph::add_node(std::string name, NodeFn fn) {
  if (name.empty()) throw InvalidNodeName("node name must be non-empty");
  if (is_end(name)) throw InvalidNodeName("'" + name + "' is reserved for the terminal sentinel");
  if (!fn) throw std::invalid_argument("node '" + name + "' has no function");
  if (has_node(name)) throw DuplicateNode("node '" + name + "' already registered");
  topology_.nodes.push_back(detail::NodeSpec{std::move(name), std::move(fn), {}, {}});
  return *this;
}

StateGraph& StateGraph::set_entry_point(const std::string& name) {
  if (!has_node(name)) throw UnknownNode("entry point '" + name + "' is not a registered node");
  entry_ = name;
  return *this;
}

StateGraph& StateGraph::add_edge(const std::string& from, const std::string& to) {
  auto& node = require_node(from);
  require_target(to);
  if (node.has_route()) throw EdgeConflict("node '" + from + "' already has an outgoing edge");
  node.plain_target = to;
  return *this;
}

StateGraph& StateGraph::add_conditional_edges(const std::string& from, DecisionFn decide,
                                              LabelMap label_map) {
  auto& node = require_node(from);
  if (!decide) throw InvalidRouting("conditional edges from '" + from + "' need a decision function");
  if (label_map.empty()) throw InvalidRouting("conditional edges from '" + from + "' have no labels");
  std::set<std::string> seen;
  for (const auto& [label, target] : label_map) {
    if (!seen.insert(label).second)
      throw InvalidRouting("duplicate routing label '" + label + "' on '" + from + "'");
    require_target(target);
  }
  if (node.has_route()) throw EdgeConflict("node '" + from + "' already has an outgoing edge");
  node.conditional = detail::ConditionalRoute{std::move(decide), std::move(label_map)};
  return *this;
}

CompiledGraph StateGraph::compile() const {
  if (!entry_) throw NoEntryPoint("graph has no entry point");

  for (const auto& node : topology_.nodes) {
    if (!node.has_route()) throw DeadEnd("node '" + node.name + "' has no outgoing edge");
    if (node.plain_target) require_target(*node.plain_target);
    if (node.conditional)
      for (const auto& [label, target] : node.conditional->label_map) require_target(target);
  }

  // END must be reachable from the entry over the union of all targets.
  std::set<std::string> visited{*entry_};
  std::vector<std::string> frontier{*entry_};
  bool reaches_end = false;
  while (!frontier.empty() && !reaches_end) {
    const auto* node = topology_.find(frontier.back());
    frontier.pop_back();
    std::vector<std::string> targets;
    if (node->plain_target) targets.push_back(*node->plain_target);
    if (node->conditional)
      for (const auto& [label, target] : node->conditional->label_map) targets.push_back(target);
    for (const auto& target : targets) {
      if (is_end(target)) {
        reaches_end = true;
        break;
      }
      if (visited.insert(target).second) frontier.push_back(target);
    }
  }
  if (!reaches_end) throw NoTerminal("END is not reachable from entry '" + *entry_ + "'");

  auto frozen = std::make_shared<detail::Topology>(topology_);
  frozen->entry = *entry_;
  return CompiledGraph(std::move(frozen));
}

// ---------------------------------------------------------------------------
// Execution

Execution::Execution(std::shared_ptr<const detail::Topology> topology, State initial,
                     std::size_t step_limit, std::string run_id)
    : topology_(std::move(topology)),
      state_(std::move(initial)),
      step_limit_(step_limit),
      run_id_(std::move(run_id)) {}

void Execution::emit(EventKind kind, std::optional<std::string> node,
                     std::optional<std::string> label, std::optional<double> duration_ms) {
  TraceEvent event{run_id_, seq_++, kind, std::move(node), std::move(label), duration_ms,
                   state_.digest()};
  history_.push_back(event);
  pending_.push_back(StreamItem{std::move(event), state_});
}

template <typename Error, typename... Args>
void Execution::fail(std::string_view error_label, Args&&... args) {
  std::optional<std::string> node;
  if (current_) node = current_->name;
  emit(EventKind::run_error, node, std::string(error_label));
  error_ = std::make_exception_ptr(Error(std::forward<Args>(args)..., history_));
  phase_ = Phase::done;
}

void Execution::advance() {
  switch (phase_) {
    case Phase::start:
      run_start_ms_ = now_ms();
      current_ = topology_->find(topology_->entry);
      emit(EventKind::run_start);
      phase_ = Phase::enter;
      return;

    case Phase::enter:
      if (steps_ >= step_limit_) {
        fail<StepLimitExceeded>("StepLimitExceeded", step_limit_);
        return;
      }
      ++steps_;
      emit(EventKind::node_enter, current_->name);
      phase_ = Phase::execute;
      return;

    case Phase::execute: {
      const double started = now_ms();
      try {
        state_.merge(current_->fn(state_));
      } catch (const std::exception& e) {
        fail<NodeFailed>("NodeFailed", current_->name, std::current_exception(), e.what());
        return;
      } catch (...) {
        fail<NodeFailed>("NodeFailed", current_->name, std::current_exception(), "unknown error");
        return;
      }
      emit(EventKind::node_exit, current_->name, std::nullopt, now_ms() - started);
      phase_ = Phase::route;
      return;
    }

    case Phase::route: {
      std::string target;
      if (current_->plain_target) {
        target = *current_->plain_target;
      } else {
        const auto& route = *current_->conditional;
        const double started = now_ms();
        std::string label;
        try {
          label = route.decide(state_);
        } catch (const std::exception& e) {
          fail<NodeFailed>("NodeFailed", current_->name, std::current_exception(), e.what());
          return;
        } catch (...) {
          fail<NodeFailed>("NodeFailed", current_->name, std::current_exception(), "unknown error");
          return;
        }
        auto it = std::find_if(route.label_map.begin(), route.label_map.end(),
                               [&](const auto& entry) { return entry.first == label; });
        if (it == route.label_map.end()) {
          fail<UnknownLabel>("UnknownLabel", current_->name, label);
          return;
        }
        emit(EventKind::decision, current_->name, label, now_ms() - started);
        target = it->second;
      }
      if (is_end(target)) {
        current_ = nullptr;
        emit(EventKind::run_end, std::nullopt, std::nullopt, now_ms() - run_start_ms_);
        phase_ = Phase::done;
      } else {
        current_ = topology_->find(target);
        phase_ = Phase::enter;
      }
      return;
    }

    case Phase::done:
      return;
  }
}

std::optional<StreamItem> Execution::next() {
  while (pending_.empty() && phase_ != Phase::done) advance();
  if (pending_.empty()) return std::nullopt;
  StreamItem item = std::move(pending_.front());
  pending_.pop_front();
  return item;
}

// ---------------------------------------------------------------------------
// CompiledGraph

Execution CompiledGraph::stream(State initial, const RunConfig& cfg) const {
  if (cfg.step_limit < 1) throw std::invalid_argument("step_limit must be at least 1");
  std::string run_id = cfg.run_id.empty() ? make_run_id() : cfg.run_id;
  return Execution(topology_, std::move(initial), cfg.step_limit, std::move(run_id));
}

State CompiledGraph::invoke(State initial, const RunConfig& cfg) const {
  Execution run = stream(std::move(initial), cfg);
  while (auto item = run.next())
    if (cfg.trace_sink) cfg.trace_sink(item->event);
  run.rethrow_if_failed();
  return run.state();
}

std::vector<std::string> CompiledGraph::node_names() const {
  std::vector<std::string> names;
  for (const auto& node : topology_->nodes) names.push_back(node.name);
  return names;
}

std::vector<Edge> CompiledGraph::edges() const {
  std::vector<Edge> out;
  for (const auto& node : topology_->nodes) {
    if (node.plain_target) out.push_back(Edge{node.name, *node.plain_target, std::nullopt});
    if (node.conditional)
      for (const auto& [label, target] : node.conditional->label_map)
        out.push_back(Edge{node.name, target, label});
  }
  return out;
}

std::string CompiledGraph::export_dot() const {
  std::ostringstream dot;
  dot << "digraph workflow {\n";
  for (const auto& node : topology_->nodes) {
    dot << "  " << dot_id(node.name);
    if (node.name == topology_->entry) dot << " [style=bold]";
    dot << ";\n";
  }
  dot << "  " << dot_id(kEnd) << " [shape=doublecircle];\n";
  for (const auto& edge : edges()) {
    dot << "  " << dot_id(edge.from) << " -> " << dot_id(edge.to);
    if (edge.label) dot << " [label=" << dot_quote(*edge.label) << ", style=dashed]";
    dot << ";\n";
  }
  dot << "}\n";
  return dot.str();
}

std::string make_run_id() {
  static const std::uint64_t prefix = [] {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }();
  static std::atomic<std::uint64_t> counter{0};
  std::ostringstream id;
  id << std::hex << std::setw(16) << std::setfill('0') << prefix << '-' << std::setw(6)
     << counter.fetch_add(1);
  return id.str();
}

}  // namespace agentrag::graph
