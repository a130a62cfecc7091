#include "bnctrl/onestep.hpp"

#include <algorithm>
#include <stdexcept>

namespace bnctrl {

const char* to_string(OneStepMode mode) {
  switch (mode) {
    case OneStepMode::OI: return "OI";
    case OneStepMode::OT: return "OT";
    case OneStepMode::OP: return "OP";
  }
  return "?";
}

State designated_source_state(const Attractor& attractor) {
  return attractor.smallest_state();
}

namespace {

// Shared machinery for the three validity conditions. Each check receives
// the candidate control once and is then probed with one or more
// application states.
class ValidityCheck {
 public:
  ValidityCheck(const BooleanNetwork& network, const Attractor& target,
                OneStepMode mode)
      : network_(network),
        target_(target),
        mode_(mode),
        target_strong_basin_(strong_basin(network, target)) {}

  // True when forcing `control` onto every state in `sources` yields a
  // state satisfying the mode's condition.
  bool valid(const Control& control, std::span<const State> sources) const {
    switch (mode_) {
      case OneStepMode::OI: {
        for (const State& s : sources) {
          if (!target_strong_basin_.contains(force_control(control, s))) {
            return false;
          }
        }
        return true;
      }
      case OneStepMode::OT: {
        ControlledNetwork cn = restrict_network(network_, control);
        StateSet surviving = target_strong_basin_;
        filter_to_space(surviving, cn);
        if (surviving.empty()) return false;
        StateSet committed = strong_basin_of(cn, surviving);
        for (const State& s : sources) {
          if (!committed.contains(force_control(control, s))) return false;
        }
        return true;
      }
      case OneStepMode::OP: {
        ControlledNetwork cn = restrict_network(network_, control);
        bool target_survives = true;
        target_.states.for_each([&](uint32_t code) {
          if (!cn.in_space(code)) target_survives = false;
        });
        if (!target_survives) return false;
        StateSet committed = strong_basin_of(cn, target_.states);
        for (const State& s : sources) {
          if (!committed.contains(force_control(control, s))) return false;
        }
        return true;
      }
    }
    return false;
  }

 private:
  static void filter_to_space(StateSet& set, const ControlledNetwork& cn) {
    std::vector<uint32_t> gone;
    set.for_each([&](uint32_t code) {
      if (!cn.in_space(code)) gone.push_back(code);
    });
    for (uint32_t code : gone) set.erase(code);
  }

  const BooleanNetwork& network_;
  const Attractor& target_;
  OneStepMode mode_;
  StateSet target_strong_basin_;
};

}  // namespace

bool is_valid_instantaneous(const BooleanNetwork& network, const Control& control,
                            const State& s, const Attractor& target) {
  apply_control(control, s);  // enforce flip consistency
  ValidityCheck check(network, target, OneStepMode::OI);
  return check.valid(control, {&s, 1});
}

bool is_valid_temporary(const BooleanNetwork& network, const Control& control,
                        const State& s, const Attractor& target) {
  apply_control(control, s);  // enforce flip consistency
  ValidityCheck check(network, target, OneStepMode::OT);
  return check.valid(control, {&s, 1});
}

bool is_valid_permanent(const BooleanNetwork& network, const Control& control,
                        const State& s, const Attractor& target) {
  apply_control(control, s);
  ValidityCheck check(network, target, OneStepMode::OP);
  return check.valid(control, {&s, 1});
}

std::vector<ControlSolution> minimal_controls(
    const BooleanNetwork& network, const std::vector<Attractor>& attractors,
    const ControlQuery& query) {
  int n = network.node_count();
  if (query.source_attractor < 0 ||
      query.source_attractor >= static_cast<int>(attractors.size()) ||
      query.target_attractor < 0 ||
      query.target_attractor >= static_cast<int>(attractors.size())) {
    throw std::invalid_argument("attractor id out of range");
  }
  if (query.source_attractor == query.target_attractor) {
    throw std::invalid_argument("source and target attractors must differ");
  }
  const Attractor& source = attractors[static_cast<size_t>(query.source_attractor)];
  const Attractor& target = attractors[static_cast<size_t>(query.target_attractor)];

  State designated = query.source_state.value_or(designated_source_state(source));
  if (!source.states.contains(designated)) {
    throw std::invalid_argument("source state is not a member of the source attractor");
  }
  std::vector<State> sources;
  if (query.strict_all_states) {
    sources = source.states.to_states();
  } else {
    sources.push_back(designated);
  }

  std::vector<NodeId> allowed;
  for (NodeId i = 0; i < n; ++i) {
    if (!std::count(query.forbidden.begin(), query.forbidden.end(), i)) {
      allowed.push_back(i);
    }
  }

  ValidityCheck check(network, target, query.mode);

  std::vector<ControlSolution> out;
  std::vector<uint32_t> found_masks;  // node masks of accepted sets
  int max_size = std::min<int>(query.budget, static_cast<int>(allowed.size()));

  std::vector<int> pick;  // indices into `allowed`
  std::vector<NodeId> nodes;
  for (int size = 1; size <= max_size; ++size) {
    pick.assign(static_cast<size_t>(size), 0);
    for (int i = 0; i < size; ++i) pick[static_cast<size_t>(i)] = i;
    while (true) {
      nodes.clear();
      uint32_t mask = 0;
      for (int idx : pick) {
        NodeId node = allowed[static_cast<size_t>(idx)];
        nodes.push_back(node);
        mask |= 1u << node;
      }
      // A strict superset of an accepted set has a valid proper subset and
      // can never be minimal.
      bool dominated = false;
      for (uint32_t f : found_masks) {
        if ((f & mask) == f) {
          dominated = true;
          break;
        }
      }
      if (!dominated) {
        Control c = flips_for(designated, nodes);
        if (check.valid(c, sources)) {
          found_masks.push_back(mask);
          out.push_back(ControlSolution{std::move(c), size, query.mode});
        }
      }
      // next combination
      int i = size - 1;
      while (i >= 0 &&
             pick[static_cast<size_t>(i)] ==
                 static_cast<int>(allowed.size()) - size + i) {
        --i;
      }
      if (i < 0) break;
      ++pick[static_cast<size_t>(i)];
      for (int j = i + 1; j < size; ++j) {
        pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
      }
    }
  }
  return out;
}

}  // namespace bnctrl
