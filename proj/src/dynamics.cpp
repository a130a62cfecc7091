#include "bnctrl/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

namespace bnctrl {

// ---------------------------------------------------------------------------
// StateSet

StateSet::StateSet(int width) : width_(width) {
  if (width < 1 || width > kHardMaxNodes) {
    throw std::invalid_argument("state-set width out of range");
  }
  words_.assign((size_t{1} << width >> 6) + 1, 0);
}

StateSet StateSet::full(int width) {
  StateSet s(width);
  uint32_t total = uint32_t{1} << width;
  for (uint32_t c = 0; c < total; ++c) s.insert(c);
  return s;
}

std::size_t StateSet::size() const {
  std::size_t n = 0;
  for (uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool StateSet::empty() const {
  for (uint64_t w : words_) {
    if (w) return false;
  }
  return true;
}

StateSet& StateSet::operator|=(const StateSet& other) {
  for (size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

StateSet& StateSet::operator&=(const StateSet& other) {
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

StateSet& StateSet::subtract(const StateSet& other) {
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

bool StateSet::is_subset_of(const StateSet& other) const {
  for (size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

bool StateSet::intersects(const StateSet& other) const {
  for (size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & other.words_[i]) return true;
  }
  return false;
}

std::vector<State> StateSet::to_states() const {
  std::vector<State> out;
  for_each([&](uint32_t code) { out.emplace_back(code, width_); });
  return out;
}

std::vector<std::string> StateSet::to_strings() const {
  std::vector<std::string> out;
  for_each([&](uint32_t code) { out.push_back(State(code, width_).to_string()); });
  return out;
}

State Attractor::smallest_state() const {
  State out;
  bool first = true;
  states.for_each([&](uint32_t code) {
    if (first) {
      out = State(code, states.width());
      first = false;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// transitions

static void check_in_space(const ControlledNetwork& network, const State& s) {
  if (s.width != network.node_count()) {
    throw std::invalid_argument("state width does not match the network");
  }
  if (!network.in_space(s.bits)) {
    throw std::invalid_argument("state lies outside the restricted state space");
  }
}

StateSet successors(const ControlledNetwork& network, const State& s) {
  check_in_space(network, s);
  int n = network.node_count();
  StateSet out(n);
  bool any_stable = false;
  for (NodeId i = 0; i < n; ++i) {
    if (network.eval_node(i, s) != s.get(i)) {
      out.insert(s.flipped(i));
    } else {
      any_stable = true;
    }
  }
  if (any_stable) out.insert(s);
  return out;
}

StateSet successors(const BooleanNetwork& network, const State& s) {
  return successors(uncontrolled(network), s);
}

std::vector<State> changing_successors(const ControlledNetwork& network,
                                       const State& s) {
  std::vector<State> out;
  int n = network.node_count();
  for (NodeId i = 0; i < n; ++i) {
    if (network.eval_node(i, s) != s.get(i)) out.push_back(s.flipped(i));
  }
  return out;
}

StateSet reach(const ControlledNetwork& network, const State& s) {
  check_in_space(network, s);
  int n = network.node_count();
  StateSet seen(n);
  seen.insert(s);
  std::deque<uint32_t> queue{s.bits};
  while (!queue.empty()) {
    State cur(queue.front(), n);
    queue.pop_front();
    for (NodeId i = 0; i < n; ++i) {
      if (network.eval_node(i, cur) != cur.get(i)) {
        uint32_t next = cur.flipped(i).bits;
        if (!seen.contains(next)) {
          seen.insert(next);
          queue.push_back(next);
        }
      }
    }
  }
  return seen;
}

StateSet reach(const BooleanNetwork& network, const State& s) {
  return reach(uncontrolled(network), s);
}

// ---------------------------------------------------------------------------
// attractors: iterative Tarjan over the implicit transition graph, keeping
// the SCCs without outgoing edges.

std::vector<Attractor> attractors(const ControlledNetwork& network,
                                  int max_nodes) {
  int n = network.node_count();
  int bound = std::min(max_nodes, kHardMaxNodes);
  if (n > bound) throw BoundError(n, bound);

  uint32_t total = uint32_t{1} << n;
  constexpr int32_t kUnvisited = -1;
  std::vector<int32_t> index(total, kUnvisited);
  std::vector<int32_t> low(total, 0);
  std::vector<int32_t> comp(total, -1);
  std::vector<uint8_t> on_stack(total, 0);
  std::vector<uint32_t> scc_stack;

  struct Frame {
    uint32_t state;
    int next_node;  // next update index to explore
  };
  std::vector<Frame> frames;
  int32_t counter = 0;
  int32_t comp_count = 0;

  auto changing_target = [&](uint32_t code, int node) -> int64_t {
    State s(code, n);
    if (network.eval_node(node, s) != s.get(node)) return s.flipped(node).bits;
    return -1;
  };

  for (uint32_t root = 0; root < total; ++root) {
    if (!network.in_space(root) || index[root] != kUnvisited) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = counter++;
    scc_stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      bool descended = false;
      while (f.next_node < n) {
        int64_t t = changing_target(f.state, f.next_node);
        ++f.next_node;
        if (t < 0) continue;
        uint32_t u = static_cast<uint32_t>(t);
        if (index[u] == kUnvisited) {
          index[u] = low[u] = counter++;
          scc_stack.push_back(u);
          on_stack[u] = 1;
          frames.push_back({u, 0});
          descended = true;
          break;
        }
        if (on_stack[u]) {
          low[f.state] = std::min(low[f.state], index[u]);
        }
      }
      if (descended) continue;
      // frame finished
      uint32_t v = f.state;
      frames.pop_back();
      if (low[v] == index[v]) {
        int32_t id = comp_count++;
        uint32_t w;
        do {
          w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = 0;
          comp[w] = id;
        } while (w != v);
      }
      if (!frames.empty()) {
        uint32_t parent = frames.back().state;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }

  // An SCC is an attractor exactly when no edge leaves it.
  std::vector<uint8_t> bottom(static_cast<size_t>(comp_count), 1);
  for (uint32_t code = 0; code < total; ++code) {
    if (!network.in_space(code)) continue;
    for (int node = 0; node < n; ++node) {
      int64_t t = changing_target(code, node);
      if (t >= 0 && comp[static_cast<uint32_t>(t)] != comp[code]) {
        bottom[static_cast<size_t>(comp[code])] = 0;
      }
    }
  }

  std::vector<int32_t> attractor_of_comp(static_cast<size_t>(comp_count), -1);
  std::vector<Attractor> out;
  // Ascending code order makes attractor numbering follow the smallest
  // member state automatically.
  for (uint32_t code = 0; code < total; ++code) {
    if (!network.in_space(code)) continue;
    int32_t c = comp[code];
    if (!bottom[static_cast<size_t>(c)]) continue;
    if (attractor_of_comp[static_cast<size_t>(c)] < 0) {
      attractor_of_comp[static_cast<size_t>(c)] =
          static_cast<int32_t>(out.size());
      out.push_back(Attractor{static_cast<int>(out.size()), StateSet(n)});
    }
    out[static_cast<size_t>(attractor_of_comp[static_cast<size_t>(c)])]
        .states.insert(code);
  }
  return out;
}

std::vector<Attractor> attractors(const BooleanNetwork& network, int max_nodes) {
  return attractors(uncontrolled(network), max_nodes);
}

// ---------------------------------------------------------------------------
// basins

StateSet weak_basin_of(const ControlledNetwork& network, const StateSet& target) {
  int n = network.node_count();
  StateSet basin(n);
  std::deque<uint32_t> queue;
  target.for_each([&](uint32_t code) {
    if (!network.in_space(code)) {
      throw std::invalid_argument("target leaves the restricted state space");
    }
    basin.insert(code);
    queue.push_back(code);
  });
  while (!queue.empty()) {
    State cur(queue.front(), n);
    queue.pop_front();
    for (NodeId i = 0; i < n; ++i) {
      State pred = cur.flipped(i);
      if (!network.in_space(pred.bits) || basin.contains(pred.bits)) continue;
      // pred -> cur is an edge iff updating node i at pred yields cur's bit.
      if (network.eval_node(i, pred) == cur.get(i)) {
        basin.insert(pred.bits);
        queue.push_back(pred.bits);
      }
    }
  }
  return basin;
}

StateSet strong_basin_of(const ControlledNetwork& network,
                         const StateSet& target) {
  if (target.empty()) {
    throw std::invalid_argument("strong basin of an empty target");
  }
  int n = network.node_count();
  StateSet current = weak_basin_of(network, target);

  // Iteratively peel states that can step outside the candidate set; the
  // fixpoint is the commitment region.
  std::deque<uint32_t> queue;
  StateSet queued(n);
  auto escapes = [&](uint32_t code) {
    State s(code, n);
    for (NodeId i = 0; i < n; ++i) {
      if (network.eval_node(i, s) != s.get(i) &&
          !current.contains(s.flipped(i).bits)) {
        return true;
      }
    }
    return false;
  };
  current.for_each([&](uint32_t code) {
    if (escapes(code)) {
      queue.push_back(code);
      queued.insert(code);
    }
  });
  while (!queue.empty()) {
    uint32_t code = queue.front();
    queue.pop_front();
    queued.erase(code);
    if (!current.contains(code) || !escapes(code)) continue;
    current.erase(code);
    State removed(code, n);
    for (NodeId i = 0; i < n; ++i) {
      State pred = removed.flipped(i);
      if (!network.in_space(pred.bits) || !current.contains(pred.bits)) continue;
      if (network.eval_node(i, pred) == removed.get(i) &&
          !queued.contains(pred.bits)) {
        queue.push_back(pred.bits);
        queued.insert(pred.bits);
      }
    }
  }
  return current;
}

StateSet weak_basin(const ControlledNetwork& network, const Attractor& attractor) {
  return weak_basin_of(network, attractor.states);
}

StateSet strong_basin(const ControlledNetwork& network,
                      const Attractor& attractor) {
  return strong_basin_of(network, attractor.states);
}

StateSet weak_basin(const BooleanNetwork& network, const Attractor& attractor) {
  return weak_basin_of(uncontrolled(network), attractor.states);
}

StateSet strong_basin(const BooleanNetwork& network, const Attractor& attractor) {
  return strong_basin_of(uncontrolled(network), attractor.states);
}

StateSet strong_basin_restricted(const BooleanNetwork& network,
                                 const Control& control, const StateSet& target) {
  if (target.empty()) {
    throw std::invalid_argument("restricted strong basin of an empty target");
  }
  return strong_basin_of(restrict_network(network, control), target);
}

BasinReport basin_report(const BooleanNetwork& network,
                         const Attractor& attractor) {
  ControlledNetwork cn = uncontrolled(network);
  BasinReport report;
  report.attractor_id = attractor.id;
  report.weak = weak_basin_of(cn, attractor.states);
  report.strong = strong_basin_of(cn, attractor.states);
  return report;
}

}  // namespace bnctrl
