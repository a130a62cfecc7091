#include "bnctrl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace bnctrl::oracle {

namespace {

void check_size(const BooleanNetwork& network) {
  if (network.node_count() > kMaxOracleNodes) {
    throw BoundError(network.node_count(), kMaxOracleNodes);
  }
}

// Small fixed-universe bitset over local state indices.
class Bits {
 public:
  explicit Bits(int count) : words_((static_cast<size_t>(count) + 63) / 64, 0) {}
  void set(int i) { words_[static_cast<size_t>(i) >> 6] |= uint64_t{1} << (i & 63); }
  bool test(int i) const {
    return (words_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u;
  }
  bool or_with(const Bits& other) {  // returns true when anything changed
    bool changed = false;
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t merged = words_[w] | other.words_[w];
      changed |= merged != words_[w];
      words_[w] = merged;
    }
    return changed;
  }
  bool intersects(const Bits& other) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] & other.words_[w]) return true;
    }
    return false;
  }

 private:
  std::vector<uint64_t> words_;
};

// Explicit transition graph of a (possibly controlled) network over its
// state space, with saturated reach sets and attractors recovered straight
// from the reach relation: a state belongs to an attractor exactly when
// everything it reaches can reach it back.
struct TsGraph {
  int width = 0;
  std::vector<uint32_t> states;              // in-space codes, ascending
  std::vector<int> local;                    // code -> local index or -1
  std::vector<std::vector<int>> successors;  // value-changing only
  std::vector<Bits> reach;
  std::vector<std::vector<int>> attractors;  // local indices, by smallest member

  int index_of(uint32_t code) const { return local[code]; }
};

TsGraph build_graph(const BooleanNetwork& network, const Control& control) {
  int n = network.node_count();
  uint32_t total = uint32_t{1} << n;
  uint32_t mask = control.node_mask(n);
  uint32_t held = control.held_bits(n);

  std::vector<int8_t> forced(static_cast<size_t>(n), -1);
  for (NodeId i : control.zero_set) forced[static_cast<size_t>(i)] = 0;
  for (NodeId i : control.one_set) forced[static_cast<size_t>(i)] = 1;

  TsGraph g;
  g.width = n;
  g.local.assign(total, -1);
  for (uint32_t code = 0; code < total; ++code) {
    if ((code & mask) == held) {
      g.local[code] = static_cast<int>(g.states.size());
      g.states.push_back(code);
    }
  }
  int count = static_cast<int>(g.states.size());

  g.successors.resize(static_cast<size_t>(count));
  for (int s = 0; s < count; ++s) {
    State state(g.states[static_cast<size_t>(s)], n);
    for (NodeId i = 0; i < n; ++i) {
      bool next = forced[static_cast<size_t>(i)] >= 0
                      ? forced[static_cast<size_t>(i)] == 1
                      : evaluate(*network.functions[static_cast<size_t>(i)], state);
      if (next != state.get(i)) {
        g.successors[static_cast<size_t>(s)].push_back(
            g.local[state.flipped(i).bits]);
      }
    }
  }

  g.reach.assign(static_cast<size_t>(count), Bits(count));
  for (int s = 0; s < count; ++s) g.reach[static_cast<size_t>(s)].set(s);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = count - 1; s >= 0; --s) {
      for (int t : g.successors[static_cast<size_t>(s)]) {
        changed |= g.reach[static_cast<size_t>(s)].or_with(
            g.reach[static_cast<size_t>(t)]);
      }
    }
  }

  std::vector<int8_t> assigned(static_cast<size_t>(count), 0);
  for (int s = 0; s < count; ++s) {
    if (assigned[static_cast<size_t>(s)]) continue;
    bool closed = true;
    for (int t = 0; t < count && closed; ++t) {
      if (g.reach[static_cast<size_t>(s)].test(t) &&
          !g.reach[static_cast<size_t>(t)].test(s)) {
        closed = false;
      }
    }
    if (!closed) continue;
    std::vector<int> members;
    for (int t = 0; t < count; ++t) {
      if (g.reach[static_cast<size_t>(s)].test(t)) {
        members.push_back(t);
        assigned[static_cast<size_t>(t)] = 1;
      }
    }
    g.attractors.push_back(std::move(members));
  }
  return g;
}

std::vector<uint32_t> codes_of(const TsGraph& g, const std::vector<int>& locals) {
  std::vector<uint32_t> out;
  out.reserve(locals.size());
  for (int s : locals) out.push_back(g.states[static_cast<size_t>(s)]);
  return out;
}

// Strong basin of a set of local states, straight from the definition: the
// states that can reach the set and cannot reach any attractor of this
// graph lying entirely outside it.
Bits set_strong_basin(const TsGraph& g, const std::vector<int>& target) {
  int count = static_cast<int>(g.states.size());
  Bits target_bits(count);
  for (int t : target) target_bits.set(t);

  std::vector<Bits> hostile;  // attractors disjoint from the target
  for (const auto& attractor : g.attractors) {
    bool disjoint = true;
    for (int s : attractor) {
      if (target_bits.test(s)) {
        disjoint = false;
        break;
      }
    }
    if (disjoint) {
      Bits b(count);
      for (int s : attractor) b.set(s);
      hostile.push_back(std::move(b));
    }
  }

  Bits basin(count);
  for (int s = 0; s < count; ++s) {
    if (!g.reach[static_cast<size_t>(s)].intersects(target_bits)) continue;
    bool safe = true;
    for (const Bits& h : hostile) {
      if (g.reach[static_cast<size_t>(s)].intersects(h)) {
        safe = false;
        break;
      }
    }
    if (safe) basin.set(s);
  }
  return basin;
}

// Residual-projection chain used when a permanent control is prepended to a
// path: the nodes still held after each later step must agree across the
// attractors that step bridges.
bool projection_chain_holds(const TsGraph& base, const Control& control,
                            int entered, std::vector<int> tail_attractors,
                            std::vector<Control> tail_controls) {
  int width = base.width;
  auto projection = [&](int attractor_id, uint32_t mask) {
    std::set<uint32_t> proj;
    for (uint32_t code :
         codes_of(base, base.attractors[static_cast<size_t>(attractor_id)])) {
      proj.insert(code & mask);
    }
    return proj;
  };
  Control residual = control;
  int current = entered;
  for (size_t i = 0; i < tail_attractors.size(); ++i) {
    residual = control_difference(residual, tail_controls[i]);
    uint32_t mask = residual.node_mask(width);
    if (projection(current, mask) != projection(tail_attractors[i], mask)) {
      return false;
    }
    current = tail_attractors[i];
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

struct Verifier::Impl {
  BooleanNetwork network;
  TsGraph base;
  std::map<std::pair<uint32_t, uint32_t>, TsGraph> controlled;
  std::map<int, std::vector<uint32_t>> strong_cache;
  std::optional<NaiveAnalysis> analysis;

  explicit Impl(const BooleanNetwork& net)
      : network(net), base(build_graph(network, Control{})) {}

  const TsGraph& graph_for(const Control& control) {
    int n = network.node_count();
    auto key = std::make_pair(control.node_mask(n), control.held_bits(n));
    auto it = controlled.find(key);
    if (it == controlled.end()) {
      it = controlled.emplace(key, build_graph(network, control)).first;
    }
    return it->second;
  }

  const std::vector<uint32_t>& strong_basin_codes(int id) {
    auto it = strong_cache.find(id);
    if (it == strong_cache.end()) {
      Bits basin =
          set_strong_basin(base, base.attractors[static_cast<size_t>(id)]);
      std::vector<uint32_t> out;
      for (size_t s = 0; s < base.states.size(); ++s) {
        if (basin.test(static_cast<int>(s))) out.push_back(base.states[s]);
      }
      it = strong_cache.emplace(id, std::move(out)).first;
    }
    return it->second;
  }

  State smallest_member(int attractor_id) const {
    return State(base.states[static_cast<size_t>(
                     base.attractors[static_cast<size_t>(attractor_id)].front())],
                 base.width);
  }

  void check_attractor_id(int id) const {
    if (id < 0 || id >= static_cast<int>(base.attractors.size())) {
      throw std::invalid_argument("attractor id out of range");
    }
  }

  bool step_valid(StepKind kind, const Control& control, const State& from,
                  int target_id) {
    int n = network.node_count();
    State applied = force_control(control, from);
    switch (kind) {
      case StepKind::Instantaneous: {
        const auto& basin = strong_basin_codes(target_id);
        return std::binary_search(basin.begin(), basin.end(), applied.bits);
      }
      case StepKind::Temporary: {
        uint32_t mask = control.node_mask(n);
        uint32_t held = control.held_bits(n);
        const TsGraph& graph = graph_for(control);
        std::vector<int> surviving;  // target strong-basin states in the space
        for (uint32_t code : strong_basin_codes(target_id)) {
          if ((code & mask) == held) surviving.push_back(graph.index_of(code));
        }
        if (surviving.empty()) return false;
        Bits committed = set_strong_basin(graph, surviving);
        return committed.test(graph.index_of(applied.bits));
      }
      case StepKind::Permanent: {
        uint32_t mask = control.node_mask(n);
        uint32_t held = control.held_bits(n);
        const auto& target = base.attractors[static_cast<size_t>(target_id)];
        const TsGraph& graph = graph_for(control);
        std::vector<int> inside;
        for (uint32_t code : codes_of(base, target)) {
          if ((code & mask) != held) return false;  // target cannot survive
          inside.push_back(graph.index_of(code));
        }
        Bits committed = set_strong_basin(graph, inside);
        return committed.test(graph.index_of(applied.bits));
      }
    }
    return false;
  }

  std::vector<std::vector<NodeId>> minimal_controls(
      int source_attractor, int target_attractor, StepKind kind,
      const ControlSearchOptions& options) {
    check_attractor_id(source_attractor);
    check_attractor_id(target_attractor);
    int n = network.node_count();
    int budget = options.budget < 0 ? n : options.budget;

    std::vector<State> sources;
    if (options.strict_all_states) {
      for (uint32_t code : codes_of(
               base, base.attractors[static_cast<size_t>(source_attractor)])) {
        sources.emplace_back(code, n);
      }
    } else {
      sources.push_back(smallest_member(source_attractor));
    }
    State designated = smallest_member(source_attractor);

    uint32_t forbidden_mask = 0;
    for (NodeId i : options.forbidden) forbidden_mask |= 1u << i;

    std::vector<uint32_t> valid;  // node masks (bit i = node i)
    for (uint32_t subset = 0; subset < (uint32_t{1} << n); ++subset) {
      if (subset & forbidden_mask) continue;
      if (std::popcount(subset) > budget) continue;
      std::vector<NodeId> nodes;
      for (NodeId i = 0; i < n; ++i) {
        if (subset & (1u << i)) nodes.push_back(i);
      }
      Control control = flips_for(designated, nodes);
      bool ok = true;
      for (const State& s : sources) {
        if (!step_valid(kind, control, s, target_attractor)) {
          ok = false;
          break;
        }
      }
      if (ok) valid.push_back(subset);
    }

    std::vector<std::vector<NodeId>> out;
    for (uint32_t v : valid) {
      bool minimal = true;
      for (uint32_t w : valid) {
        if (w != v && (w & v) == w) {
          minimal = false;
          break;
        }
      }
      if (!minimal) continue;
      std::vector<NodeId> nodes;
      for (NodeId i = 0; i < n; ++i) {
        if (v & (1u << i)) nodes.push_back(i);
      }
      out.push_back(std::move(nodes));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    return out;
  }

  Verdict verify_path(int source_attractor, int target_attractor,
                      const Schedule& schedule) {
    check_attractor_id(source_attractor);
    check_attractor_id(target_attractor);
    if (schedule.controls.size() != schedule.intermediates.size()) {
      throw std::invalid_argument(
          "schedule controls and intermediates differ in length");
    }
    for (int id : schedule.intermediates) check_attractor_id(id);
    if (schedule.intermediates.empty()) {
      if (source_attractor != target_attractor) {
        throw std::invalid_argument("empty schedule cannot change the attractor");
      }
      return Verdict{true, std::nullopt, std::nullopt};
    }
    if (schedule.intermediates.back() != target_attractor) {
      throw std::invalid_argument("schedule does not end at the target attractor");
    }

    int n = network.node_count();
    int current = source_attractor;
    for (size_t step = 0; step < schedule.controls.size(); ++step) {
      const Control& control = schedule.controls[step];
      int next = schedule.intermediates[step];
      for (uint32_t code :
           codes_of(base, base.attractors[static_cast<size_t>(current)])) {
        State from(code, n);
        if (!step_valid(schedule.kind, control, from, next)) {
          return Verdict{false, static_cast<int>(step),
                         force_control(control, from)};
        }
      }
      if (schedule.kind == StepKind::Permanent &&
          step + 1 < schedule.controls.size()) {
        std::vector<int> tail_attractors(
            schedule.intermediates.begin() + static_cast<long>(step) + 1,
            schedule.intermediates.end());
        std::vector<Control> tail_controls(
            schedule.controls.begin() + static_cast<long>(step) + 1,
            schedule.controls.end());
        if (!projection_chain_holds(base, control, next, tail_attractors,
                                    tail_controls)) {
          return Verdict{false, static_cast<int>(step), std::nullopt};
        }
      }
      current = next;
    }
    return Verdict{true, std::nullopt, std::nullopt};
  }

  std::vector<EnumeratedPath> enumerate_paths(
      int source_attractor, int target_attractor, StepKind kind,
      const PathEnumerationOptions& options) {
    check_attractor_id(source_attractor);
    check_attractor_id(target_attractor);
    int attractor_count = static_cast<int>(base.attractors.size());

    std::vector<bool> allowed(static_cast<size_t>(attractor_count), true);
    if (options.allowed_intermediates) {
      allowed.assign(static_cast<size_t>(attractor_count), false);
      for (int id : *options.allowed_intermediates) {
        if (id >= 0 && id < attractor_count) {
          allowed[static_cast<size_t>(id)] = true;
        }
      }
    }
    allowed[static_cast<size_t>(source_attractor)] = false;
    allowed[static_cast<size_t>(target_attractor)] = false;

    // Minimal step controls per ordered pair, strict over member states.
    std::map<std::pair<int, int>, std::vector<Control>> step_controls;
    auto controls_for = [&](int from, int to) -> const std::vector<Control>& {
      auto key = std::make_pair(from, to);
      auto it = step_controls.find(key);
      if (it == step_controls.end()) {
        ControlSearchOptions search;
        search.budget = options.budget;
        search.forbidden = options.forbidden;
        search.strict_all_states = true;
        std::vector<Control> controls;
        State designated = smallest_member(from);
        for (const auto& nodes : minimal_controls(from, to, kind, search)) {
          controls.push_back(flips_for(designated, nodes));
        }
        it = step_controls.emplace(key, std::move(controls)).first;
      }
      return it->second;
    };

    std::vector<EnumeratedPath> out;

    // Every attractor sequence source -> i1 .. ij -> target with at least
    // one distinct intermediate, then every combination of step controls.
    auto assemble = [&](const std::vector<int>& hops) {
      std::vector<std::vector<Control>> per_step;
      int prev = source_attractor;
      for (int id : hops) {
        per_step.push_back(controls_for(prev, id));
        if (per_step.back().empty()) return;
        prev = id;
      }
      std::vector<Control> combo(per_step.size());
      auto rec = [&](auto&& self, size_t step, int used) -> void {
        if (step == per_step.size()) {
          if (kind == StepKind::Permanent) {
            for (size_t i = 0; i + 1 < combo.size(); ++i) {
              std::vector<int> tail_attractors(
                  hops.begin() + static_cast<long>(i) + 1, hops.end());
              std::vector<Control> tail_controls(
                  combo.begin() + static_cast<long>(i) + 1, combo.end());
              if (!projection_chain_holds(base, combo[i], hops[i],
                                          tail_attractors, tail_controls)) {
                return;
              }
            }
          }
          EnumeratedPath path;
          path.intermediates = hops;
          path.controls = combo;
          path.total = used;
          out.push_back(std::move(path));
          return;
        }
        for (const Control& c : per_step[step]) {
          if (used + c.size() > options.budget) continue;
          combo[step] = c;
          self(self, step + 1, used + c.size());
        }
      };
      rec(rec, 0, 0);
    };

    auto extend = [&](auto&& self, std::vector<int>& prefix) -> void {
      if (!prefix.empty()) {
        std::vector<int> hops = prefix;
        hops.push_back(target_attractor);
        assemble(hops);
      }
      if (static_cast<int>(prefix.size()) + 2 >= attractor_count) return;
      if (static_cast<int>(prefix.size()) + 1 >= options.budget) return;
      for (int id = 0; id < attractor_count; ++id) {
        if (!allowed[static_cast<size_t>(id)]) continue;
        if (std::count(prefix.begin(), prefix.end(), id)) continue;
        prefix.push_back(id);
        self(self, prefix);
        prefix.pop_back();
      }
    };
    std::vector<int> prefix;
    extend(extend, prefix);

    std::sort(out.begin(), out.end(),
              [](const EnumeratedPath& a, const EnumeratedPath& b) {
                if (a.total != b.total) return a.total < b.total;
                if (a.intermediates.size() != b.intermediates.size()) {
                  return a.intermediates.size() < b.intermediates.size();
                }
                if (a.intermediates != b.intermediates) {
                  return a.intermediates < b.intermediates;
                }
                auto key = [](const Control& c) {
                  return std::make_pair(c.zero_set, c.one_set);
                };
                for (size_t i = 0; i < a.controls.size(); ++i) {
                  if (key(a.controls[i]) != key(b.controls[i])) {
                    return key(a.controls[i]) < key(b.controls[i]);
                  }
                }
                return false;
              });
    return out;
  }

  const NaiveAnalysis& get_analysis() {
    if (!analysis) {
      NaiveAnalysis result;
      result.width = base.width;
      for (size_t a = 0; a < base.attractors.size(); ++a) {
        result.attractors.push_back(codes_of(base, base.attractors[a]));

        std::vector<uint32_t> weak, strong;
        for (size_t s = 0; s < base.states.size(); ++s) {
          bool reaches_target = false;
          bool reaches_other = false;
          for (size_t b = 0; b < base.attractors.size(); ++b) {
            bool reaches_b = false;
            for (int member : base.attractors[b]) {
              if (base.reach[s].test(member)) {
                reaches_b = true;
                break;
              }
            }
            if (reaches_b) (b == a ? reaches_target : reaches_other) = true;
          }
          if (reaches_target) weak.push_back(base.states[s]);
          if (reaches_target && !reaches_other) strong.push_back(base.states[s]);
        }
        result.weak_basins.push_back(std::move(weak));
        result.strong_basins.push_back(std::move(strong));
      }
      analysis = std::move(result);
    }
    return *analysis;
  }
};

Verifier::Verifier(const BooleanNetwork& network) {
  check_size(network);
  impl_ = std::make_unique<Impl>(network);
}
Verifier::~Verifier() = default;
Verifier::Verifier(Verifier&&) noexcept = default;
Verifier& Verifier::operator=(Verifier&&) noexcept = default;

const NaiveAnalysis& Verifier::analysis() { return impl_->get_analysis(); }

std::vector<std::vector<NodeId>> Verifier::minimal_controls(
    int source_attractor, int target_attractor, StepKind kind,
    const ControlSearchOptions& options) {
  return impl_->minimal_controls(source_attractor, target_attractor, kind,
                                 options);
}

Verdict Verifier::verify_path(int source_attractor, int target_attractor,
                              const Schedule& schedule) {
  return impl_->verify_path(source_attractor, target_attractor, schedule);
}

std::vector<EnumeratedPath> Verifier::enumerate_paths(
    int source_attractor, int target_attractor, StepKind kind,
    const PathEnumerationOptions& options) {
  return impl_->enumerate_paths(source_attractor, target_attractor, kind,
                                options);
}

// ---------------------------------------------------------------------------
// one-shot wrappers

NaiveAnalysis analyze(const BooleanNetwork& network) {
  Verifier v(network);
  return v.analysis();
}

std::vector<std::vector<NodeId>> brute_force_minimal_controls(
    const BooleanNetwork& network, int source_attractor, int target_attractor,
    StepKind kind, const ControlSearchOptions& options) {
  Verifier v(network);
  return v.minimal_controls(source_attractor, target_attractor, kind, options);
}

Verdict verify_path(const BooleanNetwork& network, int source_attractor,
                    int target_attractor, const Schedule& schedule) {
  Verifier v(network);
  return v.verify_path(source_attractor, target_attractor, schedule);
}

std::vector<EnumeratedPath> enumerate_paths(const BooleanNetwork& network,
                                            int source_attractor,
                                            int target_attractor, StepKind kind,
                                            const PathEnumerationOptions& options) {
  Verifier v(network);
  return v.enumerate_paths(source_attractor, target_attractor, kind, options);
}

std::vector<State> simulate(const BooleanNetwork& network, const State& start,
                            int max_steps, uint64_t seed) {
  check_size(network);
  if (start.width != network.node_count()) {
    throw std::invalid_argument("state width does not match the network");
  }
  std::mt19937_64 rng(seed);
  std::vector<State> trajectory{start};
  State current = start;
  for (int step = 0; step < max_steps; ++step) {
    std::vector<NodeId> movable;
    for (NodeId i = 0; i < network.node_count(); ++i) {
      if (evaluate(*network.functions[static_cast<size_t>(i)], current) !=
          current.get(i)) {
        movable.push_back(i);
      }
    }
    if (movable.empty()) break;  // fixed point
    NodeId chosen = movable[static_cast<size_t>(rng() % movable.size())];
    current = current.flipped(chosen);
    trajectory.push_back(current);
  }
  return trajectory;
}

BooleanNetwork random_network(const RandomNetworkOptions& options) {
  if (options.nodes < 1) throw std::invalid_argument("need at least one node");
  std::mt19937_64 rng(options.seed);
  BooleanNetwork net;
  for (int i = 0; i < options.nodes; ++i) {
    net.names.push_back("x" + std::to_string(i + 1));
  }
  int max_degree = std::min(options.max_in_degree, options.nodes);
  for (int i = 0; i < options.nodes; ++i) {
    int degree = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_degree));
    std::vector<NodeId> pool(static_cast<size_t>(options.nodes));
    for (int j = 0; j < options.nodes; ++j) pool[static_cast<size_t>(j)] = j;
    for (int j = 0; j < degree; ++j) {
      size_t pick = static_cast<size_t>(j) +
                    static_cast<size_t>(
                        rng() % static_cast<uint64_t>(options.nodes - j));
      std::swap(pool[static_cast<size_t>(j)], pool[pick]);
    }
    auto literal = [&](NodeId reg) {
      ExprPtr v = BooleanExpr::variable(reg);
      return (rng() & 1) ? BooleanExpr::negation(v) : v;
    };
    ExprPtr expr = literal(pool[0]);
    for (int j = 1; j < degree; ++j) {
      std::vector<ExprPtr> args{expr, literal(pool[static_cast<size_t>(j)])};
      expr = (rng() & 1) ? BooleanExpr::conjunction(std::move(args))
                         : BooleanExpr::disjunction(std::move(args));
    }
    if (rng() % 4 == 0) expr = BooleanExpr::negation(expr);
    net.functions.push_back(expr);
  }
  return net;
}

}  // namespace bnctrl::oracle
