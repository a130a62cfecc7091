#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "bnctrl/dynamics.hpp"
#include "bnctrl/model.hpp"
#include "bnctrl/onestep.hpp"

namespace bnctrl {

enum class PathMode { ASI, AST, ASP };

/// One sequential reprogramming path: the attractors visited after the
/// source (ending at the target) and the control applied to enter each.
struct ControlPath {
  std::vector<int> intermediates;  // attractor ids, last one is the target
  std::vector<Control> controls;   // controls[i] leads into intermediates[i]
  int total_perturbations = 0;
  PathMode mode = PathMode::AST;

  friend bool operator==(const ControlPath&, const ControlPath&) = default;
};

struct SequentialQuery {
  int source_attractor = 0;
  int target_attractor = 0;
  PathMode mode = PathMode::AST;
  std::optional<int> budget;       // defaults per default_budget()
  std::vector<NodeId> forbidden;
  std::optional<std::vector<int>> allowed_intermediates;  // default: all but target
};

/// Paths discovered per attractor during the backward search. Entries at the
/// source respect the full budget, entries elsewhere keep one perturbation in
/// reserve for the step that will eventually leave the source.
struct PathLedger {
  std::map<int, std::vector<ControlPath>> by_attractor;
};

/// The full ledger behind a sequential search; the query's result is the
/// entry at the source attractor.
PathLedger sequential_ledger(const BooleanNetwork& network,
                             const std::vector<Attractor>& attractors,
                             const SequentialQuery& query);

/// Budget rule of the evaluation protocol: the minimal one-step control size
/// of the matching mode (OI for ASI, OT for AST, OP for ASP), falling back
/// to the node count when no one-step control exists.
int default_budget(const BooleanNetwork& network,
                   const std::vector<Attractor>& attractors,
                   const SequentialQuery& query);

/// Temporary-mode sequential paths within the budget. Phase 1 seeds direct
/// controls into the target at every candidate intermediate; phase 2 extends
/// ledger entries backward until no new intermediate appears. A path always
/// passes through at least one intermediate attractor; the degenerate
/// source-to-target route is the one-step problem, not a sequential path.
std::vector<ControlPath> comp_seq_temp(const BooleanNetwork& network,
                                       const std::vector<Attractor>& attractors,
                                       const SequentialQuery& query);

/// Permanent-mode variant: same skeleton with permanent step controls, and
/// every backward extension must pass perm_control_validation.
std::vector<ControlPath> comp_seq_perm(const BooleanNetwork& network,
                                       const std::vector<Attractor>& attractors,
                                       const SequentialQuery& query);

/// Instantaneous-mode variant; no extension-time validation is needed since
/// instantaneous flips leave the transition system unchanged.
std::vector<ControlPath> comp_seq_inst(const BooleanNetwork& network,
                                       const std::vector<Attractor>& attractors,
                                       const SequentialQuery& query);

/// Dispatch on query.mode.
std::vector<ControlPath> sequential_paths(const BooleanNetwork& network,
                                          const std::vector<Attractor>& attractors,
                                          const SequentialQuery& query);

/// Checks that prepending `control` (a permanent control into `next`) to the
/// suffix path (delta, rho) cannot disturb the suffix: at each step the part
/// of the accumulated control not re-perturbed by the next step must project
/// identically on the two attractors it bridges.
bool perm_control_validation(const Control& control, const Attractor& next,
                             std::span<const int> delta,
                             std::span<const Control> rho,
                             const std::vector<Attractor>& attractors);

/// The paths achieving the minimal perturbation total.
std::vector<ControlPath> shortest(const std::vector<ControlPath>& paths);

const char* to_string(PathMode mode);
OneStepMode step_mode(PathMode mode);

}  // namespace bnctrl
