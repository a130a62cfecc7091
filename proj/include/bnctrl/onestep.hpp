#pragma once

#include <optional>
#include <vector>

#include "bnctrl/dynamics.hpp"
#include "bnctrl/model.hpp"

namespace bnctrl {

enum class OneStepMode { OI, OT, OP };

struct ControlQuery {
  int source_attractor = 0;
  int target_attractor = 0;
  OneStepMode mode = OneStepMode::OT;
  int budget = 0;                    // maximum control size
  std::vector<NodeId> forbidden;     // nodes that may never be perturbed
  std::optional<State> source_state; // defaults to the smallest member state
  bool strict_all_states = false;    // require validity from every member
};

struct ControlSolution {
  Control control;
  int size = 0;
  OneStepMode mode = OneStepMode::OT;
};

/// Picks the designated application state of an attractor: its smallest
/// member. Single-state attractors leave no choice.
State designated_source_state(const Attractor& attractor);

/// The flipped state must already be committed to the target in the
/// unmodified transition system.
bool is_valid_instantaneous(const BooleanNetwork& network, const Control& control,
                            const State& s, const Attractor& target);

/// The flipped state must commit, inside the controlled system, to the part
/// of the target's strong basin that survives the restriction; releasing the
/// control anywhere in that region then guarantees convergence.
bool is_valid_temporary(const BooleanNetwork& network, const Control& control,
                        const State& s, const Attractor& target);

/// The target must live inside the restricted space and the flipped state
/// must commit to it there.
bool is_valid_permanent(const BooleanNetwork& network, const Control& control,
                        const State& s, const Attractor& target);

/// All subset-minimal node sets within the budget whose flip passes the
/// query's validity predicate, sorted by size then lexicographically.
std::vector<ControlSolution> minimal_controls(
    const BooleanNetwork& network, const std::vector<Attractor>& attractors,
    const ControlQuery& query);

const char* to_string(OneStepMode mode);

}  // namespace bnctrl
