#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bnctrl {

using NodeId = int;

/// Thrown on malformed model text. Positions are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Thrown when a model exceeds the configured state-space bound.
class BoundError : public std::runtime_error {
 public:
  BoundError(int nodes, int bound)
      : std::runtime_error("model has " + std::to_string(nodes) +
                           " nodes, exceeding the supported bound of " +
                           std::to_string(bound)),
        nodes_(nodes),
        bound_(bound) {}
  int nodes() const { return nodes_; }
  int bound() const { return bound_; }

 private:
  int nodes_;
  int bound_;
};

/// One assignment of a bit to every node. Node 0 occupies the most
/// significant of the low `width` bits, so the integer value of `bits`
/// equals the numeric reading of the printed bit-string ("110" -> 6) and
/// lexicographic order on bit-strings coincides with numeric order.
struct State {
  uint32_t bits = 0;
  int width = 0;

  State() = default;
  State(uint32_t bits_, int width_) : bits(bits_), width(width_) {}

  static State from_string(std::string_view text);
  std::string to_string() const;

  bool get(NodeId node) const { return (bits >> (width - 1 - node)) & 1u; }
  State with_bit(NodeId node, bool value) const;
  State flipped(NodeId node) const {
    return State(bits ^ (1u << (width - 1 - node)), width);
  }
  uint32_t code() const { return bits; }

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State&, const State&) = default;
};

/// Number of positions where two equal-width states differ.
int hamming(const State& a, const State& b);

class BooleanExpr;
using ExprPtr = std::shared_ptr<const BooleanExpr>;

/// Immutable expression tree over node variables, constants, NOT, and
/// n-ary AND/OR. Conjunction/disjunction factories flatten nested
/// same-operator children so parsing and printing agree on structure.
class BooleanExpr {
 public:
  enum class Kind { Constant, Variable, Not, And, Or };

  static ExprPtr constant(bool value);
  static ExprPtr variable(NodeId node);
  static ExprPtr negation(ExprPtr arg);
  static ExprPtr conjunction(std::vector<ExprPtr> args);
  static ExprPtr disjunction(std::vector<ExprPtr> args);

  Kind kind() const { return kind_; }
  bool value() const { return value_; }
  NodeId variable_id() const { return variable_; }
  const std::vector<ExprPtr>& args() const { return args_; }

  void collect_variables(std::vector<bool>& seen) const;

 private:
  BooleanExpr(Kind kind, bool value, NodeId variable, std::vector<ExprPtr> args)
      : kind_(kind), value_(value), variable_(variable), args_(std::move(args)) {}

  Kind kind_;
  bool value_;
  NodeId variable_;
  std::vector<ExprPtr> args_;
};

bool evaluate(const BooleanExpr& expr, const State& state);
std::string to_string(const BooleanExpr& expr, std::span<const std::string> names);
bool structurally_equal(const BooleanExpr& a, const BooleanExpr& b);

/// A Boolean network: one update function per named node, in declaration
/// order. Node order fixes the bit layout of states everywhere.
struct BooleanNetwork {
  std::vector<std::string> names;
  std::vector<ExprPtr> functions;

  int node_count() const { return static_cast<int>(names.size()); }
  std::optional<NodeId> find_node(std::string_view name) const;

  /// Distinct regulators referenced by node `i`'s function.
  std::vector<NodeId> regulators(NodeId node) const;
};

/// Parses either one `name = expr` definition per line or the CSV form
/// with a `targets, factors` header. `#` starts a comment.
BooleanNetwork parse_network(std::string_view text);
std::string print_network(const BooleanNetwork& network);

/// Disjoint node sets forced to 0 and to 1. Applying a control flips the
/// listed nodes relative to the state it is applied to, so a control is
/// only consistent with states that disagree with every held value.
struct Control {
  std::vector<NodeId> zero_set;
  std::vector<NodeId> one_set;

  int size() const {
    return static_cast<int>(zero_set.size() + one_set.size());
  }
  bool empty() const { return zero_set.empty() && one_set.empty(); }
  bool touches(NodeId node) const;
  std::vector<NodeId> nodes() const;  // sorted union of both sets

  /// Bit mask of controlled positions / their held values, in state encoding.
  uint32_t node_mask(int width) const;
  uint32_t held_bits(int width) const;

  friend bool operator==(const Control&, const Control&) = default;
};

/// Flips exactly the controlled bits. Throws std::invalid_argument when a
/// listed node already holds its target value.
State apply_control(const Control& control, const State& state);

/// Overwrites controlled bits with their held values, with no consistency
/// requirement. Coincides with apply_control on consistent states.
State force_control(const Control& control, const State& state);

/// The unique control that flips `nodes` relative to `state`.
Control flips_for(const State& state, std::span<const NodeId> nodes);

/// Node-level set difference: controls of `a` not re-perturbed by `b`.
Control control_difference(const Control& a, const Control& b);

/// A network together with a control: controlled nodes' functions are the
/// held constants, everything else is unchanged. Also carries the
/// restricted state space membership test.
struct ControlledNetwork {
  BooleanNetwork base;
  Control control;

  int node_count() const { return base.node_count(); }
  bool is_forced(NodeId node) const { return forced_[node] >= 0; }
  bool forced_value(NodeId node) const { return forced_[node] == 1; }

  /// Value of the effective function of `node` at `state`.
  bool eval_node(NodeId node, const State& state) const;

  /// The effective function itself (a constant for controlled nodes).
  ExprPtr effective_function(NodeId node) const;

  bool in_space(uint32_t code) const {
    return (code & space_mask_) == space_bits_;
  }
  bool in_space(const State& s) const { return in_space(s.bits); }
  uint32_t space_mask() const { return space_mask_; }
  uint32_t space_bits() const { return space_bits_; }

  friend ControlledNetwork restrict_network(const BooleanNetwork&,
                                             const Control&);

 private:
  std::vector<int8_t> forced_;  // -1 free, 0 held low, 1 held high
  uint32_t space_mask_ = 0;
  uint32_t space_bits_ = 0;
};

ControlledNetwork restrict_network(const BooleanNetwork& network,
                                    const Control& control);
ControlledNetwork uncontrolled(const BooleanNetwork& network);

}  // namespace bnctrl
