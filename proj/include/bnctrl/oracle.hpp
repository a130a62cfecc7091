#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bnctrl/model.hpp"

// Definition-level verifier and simulator. Everything here recomputes
// reachability and basins from first principles over the explicit graph and
// deliberately shares nothing with the engine beyond the model types, so the
// two sides cannot fail the same way.

namespace bnctrl::oracle {

inline constexpr int kMaxOracleNodes = 12;

enum class StepKind { Instantaneous, Temporary, Permanent };

/// A claimed reprogramming path: one control per step plus the attractor it
/// is expected to settle in. All steps share one perturbation kind.
struct Schedule {
  StepKind kind = StepKind::Temporary;
  std::vector<Control> controls;
  std::vector<int> intermediates;  // attractor ids, ending at the target
};

struct Verdict {
  bool ok = false;
  std::optional<int> failing_step;
  std::optional<State> witness;  // flipped state that breaks the step
};

/// Attractors and basins recomputed literally from reach sets.
struct NaiveAnalysis {
  int width = 0;
  std::vector<std::vector<uint32_t>> attractors;     // sorted member codes
  std::vector<std::vector<uint32_t>> weak_basins;    // per attractor
  std::vector<std::vector<uint32_t>> strong_basins;  // per attractor
};

NaiveAnalysis analyze(const BooleanNetwork& network);

struct ControlSearchOptions {
  int budget = -1;  // -1 means the node count
  std::vector<NodeId> forbidden;
  bool strict_all_states = false;
};

/// Exhaustively enumerates every admissible node subset, checks each one by
/// direct model checking of the step condition, and keeps the subset-minimal
/// hits, sorted by size then lexicographically.
std::vector<std::vector<NodeId>> brute_force_minimal_controls(
    const BooleanNetwork& network, int source_attractor, int target_attractor,
    StepKind kind, const ControlSearchOptions& options = {});

/// Re-derives a schedule step by step, checking every state of the current
/// attractor. Throws std::invalid_argument on malformed schedules.
Verdict verify_path(const BooleanNetwork& network, int source_attractor,
                    int target_attractor, const Schedule& schedule);

struct PathEnumerationOptions {
  int budget = 1;
  std::vector<NodeId> forbidden;
  std::optional<std::vector<int>> allowed_intermediates;
};

struct EnumeratedPath {
  std::vector<int> intermediates;
  std::vector<Control> controls;
  int total = 0;
};

/// Ground truth for the sequential searches: every attractor sequence with
/// at least one intermediate, combined with every valid minimal step
/// control, within the budget (and one perturbation less on suffixes).
std::vector<EnumeratedPath> enumerate_paths(const BooleanNetwork& network,
                                            int source_attractor,
                                            int target_attractor, StepKind kind,
                                            const PathEnumerationOptions& options);

/// Seeded random walk: uniformly picks one value-changing update per step,
/// taking the self-loop only at fixed points (where the walk stops).
std::vector<State> simulate(const BooleanNetwork& network, const State& start,
                            int max_steps, uint64_t seed);

/// Reusable handle over one network: keeps the explicit graphs (base and one
/// per probed control) alive across queries. The free functions above are
/// one-shot wrappers around this.
class Verifier {
 public:
  explicit Verifier(const BooleanNetwork& network);
  ~Verifier();
  Verifier(Verifier&&) noexcept;
  Verifier& operator=(Verifier&&) noexcept;

  const NaiveAnalysis& analysis();
  std::vector<std::vector<NodeId>> minimal_controls(
      int source_attractor, int target_attractor, StepKind kind,
      const ControlSearchOptions& options = {});
  Verdict verify_path(int source_attractor, int target_attractor,
                      const Schedule& schedule);
  std::vector<EnumeratedPath> enumerate_paths(
      int source_attractor, int target_attractor, StepKind kind,
      const PathEnumerationOptions& options);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RandomNetworkOptions {
  int nodes = 4;
  int max_in_degree = 3;
  uint64_t seed = 0;
};

/// Random test networks: each node gets 1..max_in_degree regulators and a
/// random expression tree over them.
BooleanNetwork random_network(const RandomNetworkOptions& options);

}  // namespace bnctrl::oracle
