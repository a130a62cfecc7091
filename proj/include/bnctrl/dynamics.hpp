#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bnctrl/model.hpp"

namespace bnctrl {

/// Guard on the explicit 2^n state space. Larger models are rejected with a
/// BoundError; raising the bound past ~28 is not supported by the encoding.
inline constexpr int kDefaultMaxNodes = 25;
inline constexpr int kHardMaxNodes = 28;

/// Dense membership structure over the 2^width state universe.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(int width);
  static StateSet full(int width);

  int width() const { return width_; }
  bool contains(uint32_t code) const {
    return (words_[code >> 6] >> (code & 63)) & 1u;
  }
  bool contains(const State& s) const { return contains(s.bits); }
  void insert(uint32_t code) { words_[code >> 6] |= uint64_t{1} << (code & 63); }
  void insert(const State& s) { insert(s.bits); }
  void erase(uint32_t code) { words_[code >> 6] &= ~(uint64_t{1} << (code & 63)); }

  std::size_t size() const;
  bool empty() const;

  StateSet& operator|=(const StateSet& other);
  StateSet& operator&=(const StateSet& other);
  StateSet& subtract(const StateSet& other);
  bool is_subset_of(const StateSet& other) const;
  bool intersects(const StateSet& other) const;
  friend bool operator==(const StateSet&, const StateSet&) = default;

  /// Members in ascending code order (= lexicographic bit-string order).
  std::vector<State> to_states() const;
  std::vector<std::string> to_strings() const;

  template <typename F>
  void for_each(F&& f) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t word = words_[w];
      while (word) {
        int bit = std::countr_zero(word);
        f(static_cast<uint32_t>((w << 6) + static_cast<size_t>(bit)));
        word &= word - 1;
      }
    }
  }

 private:
  int width_ = 0;
  std::vector<uint64_t> words_;
};

/// A bottom strongly connected component of the transition system.
struct Attractor {
  int id = 0;
  StateSet states;

  State smallest_state() const;
  bool is_single_state() const { return states.size() == 1; }
};

struct BasinReport {
  int attractor_id = 0;
  StateSet weak;
  StateSet strong;
};

/// All possible next states of `s` under the asynchronous scheme: one flip
/// per node whose function disagrees with the current value, plus `s`
/// itself while any node is stable.
StateSet successors(const ControlledNetwork& network, const State& s);
StateSet successors(const BooleanNetwork& network, const State& s);

/// Value-changing successors only (self-loops never affect reachability).
std::vector<State> changing_successors(const ControlledNetwork& network,
                                       const State& s);

/// Forward reachability closure of `s`, including `s`.
StateSet reach(const ControlledNetwork& network, const State& s);
StateSet reach(const BooleanNetwork& network, const State& s);

/// Bottom SCCs of the transition graph, ordered by their smallest member
/// state and numbered from 0 in that order.
std::vector<Attractor> attractors(const ControlledNetwork& network,
                                  int max_nodes = kDefaultMaxNodes);
std::vector<Attractor> attractors(const BooleanNetwork& network,
                                  int max_nodes = kDefaultMaxNodes);

/// States with at least one path into `target` (backward fixpoint).
StateSet weak_basin_of(const ControlledNetwork& network, const StateSet& target);

/// Largest subset of the weak basin closed under value-changing successors:
/// the states committed to `target`. Throws std::invalid_argument when the
/// target is empty or leaves the network's state space.
StateSet strong_basin_of(const ControlledNetwork& network, const StateSet& target);

StateSet weak_basin(const ControlledNetwork& network, const Attractor& attractor);
StateSet strong_basin(const ControlledNetwork& network, const Attractor& attractor);
StateSet weak_basin(const BooleanNetwork& network, const Attractor& attractor);
StateSet strong_basin(const BooleanNetwork& network, const Attractor& attractor);

/// Strong basin of `target` computed in the transition system restricted by
/// `control` (vertex set = the states agreeing with the held values).
StateSet strong_basin_restricted(const BooleanNetwork& network,
                                 const Control& control, const StateSet& target);

BasinReport basin_report(const BooleanNetwork& network, const Attractor& attractor);

}  // namespace bnctrl
