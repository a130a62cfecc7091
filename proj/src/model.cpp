#include "bnctrl/model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <set>

namespace bnctrl {

// ---------------------------------------------------------------------------
// states

State State::from_string(std::string_view text) {
  if (text.empty() || text.size() > 31) {
    throw std::invalid_argument("state bit-string must have 1..31 characters");
  }
  State s(0, static_cast<int>(text.size()));
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("state bit-string may contain only 0 and 1");
    }
    s.bits = (s.bits << 1) | static_cast<uint32_t>(c == '1');
  }
  return s;
}

std::string State::to_string() const {
  std::string out(static_cast<size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if (get(i)) out[static_cast<size_t>(i)] = '1';
  }
  return out;
}

State State::with_bit(NodeId node, bool value) const {
  uint32_t mask = 1u << (width - 1 - node);
  return State(value ? (bits | mask) : (bits & ~mask), width);
}

int hamming(const State& a, const State& b) {
  if (a.width != b.width) {
    throw std::invalid_argument("hamming distance requires equal widths");
  }
  return std::popcount(a.bits ^ b.bits);
}

// ---------------------------------------------------------------------------
// expressions

ExprPtr BooleanExpr::constant(bool value) {
  return ExprPtr(new BooleanExpr(Kind::Constant, value, -1, {}));
}

ExprPtr BooleanExpr::variable(NodeId node) {
  return ExprPtr(new BooleanExpr(Kind::Variable, false, node, {}));
}

ExprPtr BooleanExpr::negation(ExprPtr arg) {
  std::vector<ExprPtr> args;
  args.push_back(std::move(arg));
  return ExprPtr(new BooleanExpr(Kind::Not, false, -1, std::move(args)));
}

static std::vector<ExprPtr> flatten(BooleanExpr::Kind kind,
                                    std::vector<ExprPtr> args) {
  std::vector<ExprPtr> flat;
  for (auto& a : args) {
    if (a->kind() == kind) {
      for (const auto& sub : a->args()) flat.push_back(sub);
    } else {
      flat.push_back(std::move(a));
    }
  }
  return flat;
}

ExprPtr BooleanExpr::conjunction(std::vector<ExprPtr> args) {
  if (args.empty()) throw std::invalid_argument("conjunction needs arguments");
  if (args.size() == 1) return args.front();
  return ExprPtr(
      new BooleanExpr(Kind::And, false, -1, flatten(Kind::And, std::move(args))));
}

ExprPtr BooleanExpr::disjunction(std::vector<ExprPtr> args) {
  if (args.empty()) throw std::invalid_argument("disjunction needs arguments");
  if (args.size() == 1) return args.front();
  return ExprPtr(
      new BooleanExpr(Kind::Or, false, -1, flatten(Kind::Or, std::move(args))));
}

void BooleanExpr::collect_variables(std::vector<bool>& seen) const {
  switch (kind_) {
    case Kind::Variable:
      seen[static_cast<size_t>(variable_)] = true;
      break;
    case Kind::Constant:
      break;
    default:
      for (const auto& a : args_) a->collect_variables(seen);
  }
}

bool evaluate(const BooleanExpr& expr, const State& state) {
  switch (expr.kind()) {
    case BooleanExpr::Kind::Constant:
      return expr.value();
    case BooleanExpr::Kind::Variable:
      return state.get(expr.variable_id());
    case BooleanExpr::Kind::Not:
      return !evaluate(*expr.args()[0], state);
    case BooleanExpr::Kind::And:
      for (const auto& a : expr.args()) {
        if (!evaluate(*a, state)) return false;
      }
      return true;
    case BooleanExpr::Kind::Or:
      for (const auto& a : expr.args()) {
        if (evaluate(*a, state)) return true;
      }
      return false;
  }
  return false;
}

static void print_expr(const BooleanExpr& e, std::span<const std::string> names,
                       std::string& out) {
  switch (e.kind()) {
    case BooleanExpr::Kind::Constant:
      out += e.value() ? '1' : '0';
      return;
    case BooleanExpr::Kind::Variable:
      out += names[static_cast<size_t>(e.variable_id())];
      return;
    case BooleanExpr::Kind::Not: {
      out += '!';
      const BooleanExpr& a = *e.args()[0];
      bool atom = a.kind() == BooleanExpr::Kind::Constant ||
                  a.kind() == BooleanExpr::Kind::Variable ||
                  a.kind() == BooleanExpr::Kind::Not;
      if (atom) {
        print_expr(a, names, out);
      } else {
        out += '(';
        print_expr(a, names, out);
        out += ')';
      }
      return;
    }
    case BooleanExpr::Kind::And: {
      bool first = true;
      for (const auto& a : e.args()) {
        if (!first) out += " & ";
        first = false;
        if (a->kind() == BooleanExpr::Kind::Or) {
          out += '(';
          print_expr(*a, names, out);
          out += ')';
        } else {
          print_expr(*a, names, out);
        }
      }
      return;
    }
    case BooleanExpr::Kind::Or: {
      bool first = true;
      for (const auto& a : e.args()) {
        if (!first) out += " | ";
        first = false;
        print_expr(*a, names, out);
      }
      return;
    }
  }
}

std::string to_string(const BooleanExpr& expr,
                      std::span<const std::string> names) {
  std::string out;
  print_expr(expr, names, out);
  return out;
}

bool structurally_equal(const BooleanExpr& a, const BooleanExpr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case BooleanExpr::Kind::Constant:
      return a.value() == b.value();
    case BooleanExpr::Kind::Variable:
      return a.variable_id() == b.variable_id();
    default: {
      if (a.args().size() != b.args().size()) return false;
      for (size_t i = 0; i < a.args().size(); ++i) {
        if (!structurally_equal(*a.args()[i], *b.args()[i])) return false;
      }
      return true;
    }
  }
}

// ---------------------------------------------------------------------------
// network

std::optional<NodeId> BooleanNetwork::find_node(std::string_view name) const {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<NodeId>(i);
  }
  return std::nullopt;
}

std::vector<NodeId> BooleanNetwork::regulators(NodeId node) const {
  std::vector<bool> seen(static_cast<size_t>(node_count()), false);
  functions[static_cast<size_t>(node)]->collect_variables(seen);
  std::vector<NodeId> out;
  for (size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// parser

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Recursive-descent parser for one right-hand side.
class ExprParser {
 public:
  ExprParser(std::string_view text, int line, int column_base,
             const std::map<std::string, NodeId, std::less<>>& nodes)
      : text_(text), line_(line), column_base_(column_base), nodes_(nodes) {}

  ExprPtr parse() {
    ExprPtr e = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  ExprPtr parse_or() {
    std::vector<ExprPtr> args;
    args.push_back(parse_and());
    while (peek() == '|') {
      ++pos_;
      args.push_back(parse_and());
    }
    return BooleanExpr::disjunction(std::move(args));
  }

  ExprPtr parse_and() {
    std::vector<ExprPtr> args;
    args.push_back(parse_unary());
    while (peek() == '&') {
      ++pos_;
      args.push_back(parse_unary());
    }
    return BooleanExpr::conjunction(std::move(args));
  }

  ExprPtr parse_unary() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '!') {
      ++pos_;
      return BooleanExpr::negation(parse_unary());
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_or();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return e;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      return BooleanExpr::constant(c == '1');
    }
    if (is_ident_start(c)) {
      size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      auto it = nodes_.find(name);
      if (it == nodes_.end()) {
        throw ParseError(line_, column_base_ + static_cast<int>(start),
                         "undeclared variable '" + std::string(name) + "'");
      }
      return BooleanExpr::variable(it->second);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& message) {
    throw ParseError(line_, column_base_ + static_cast<int>(pos_), message);
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_;
  int column_base_;
  const std::map<std::string, NodeId, std::less<>>& nodes_;
};

struct RawDefinition {
  std::string name;
  std::string expr_text;
  int line;
  int name_column;
  int expr_column;
};

}  // namespace

BooleanNetwork parse_network(std::string_view text) {
  std::vector<RawDefinition> defs;
  bool csv_mode = false;
  bool saw_content = false;

  int line_no = 0;
  size_t cursor = 0;
  while (cursor <= text.size()) {
    size_t end = text.find('\n', cursor);
    std::string_view raw = (end == std::string_view::npos)
                               ? text.substr(cursor)
                               : text.substr(cursor, end - cursor);
    ++line_no;
    size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view body = trim(raw);
    if (!body.empty()) {
      if (!saw_content) {
        // BoolNet-style header switches the separator to a comma.
        std::string folded;
        for (char c : body) {
          if (c != ' ' && c != '\t') {
            folded += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
          }
        }
        if (folded == "targets,factors") {
          csv_mode = true;
          saw_content = true;
          if (end == std::string_view::npos) break;
          cursor = end + 1;
          continue;
        }
        saw_content = true;
      }
      char sep = csv_mode ? ',' : '=';
      size_t sep_pos = raw.find(sep);
      if (sep_pos == std::string_view::npos) {
        throw ParseError(line_no, static_cast<int>(raw.size()) + 1,
                         csv_mode ? "expected ','" : "expected '='");
      }
      std::string_view lhs = trim(raw.substr(0, sep_pos));
      size_t name_col = raw.find_first_not_of(" \t");
      if (lhs.empty()) {
        throw ParseError(line_no, 1, "missing node name");
      }
      bool ok = is_ident_start(lhs.front());
      for (char c : lhs) ok = ok && is_ident_char(c);
      if (!ok) {
        throw ParseError(line_no, static_cast<int>(name_col) + 1,
                         "invalid node name '" + std::string(lhs) + "'");
      }
      defs.push_back(RawDefinition{std::string(lhs),
                                   std::string(raw.substr(sep_pos + 1)), line_no,
                                   static_cast<int>(name_col) + 1,
                                   static_cast<int>(sep_pos) + 2});
    }
    if (end == std::string_view::npos) break;
    cursor = end + 1;
  }

  if (defs.empty()) {
    throw ParseError(line_no, 1, "model defines no nodes");
  }

  BooleanNetwork net;
  std::map<std::string, NodeId, std::less<>> ids;
  for (const auto& d : defs) {
    if (ids.contains(d.name)) {
      throw ParseError(d.line, d.name_column,
                       "duplicate definition of node '" + d.name + "'");
    }
    ids[d.name] = static_cast<NodeId>(net.names.size());
    net.names.push_back(d.name);
  }
  for (const auto& d : defs) {
    ExprParser parser(d.expr_text, d.line, d.expr_column, ids);
    net.functions.push_back(parser.parse());
  }
  return net;
}

std::string print_network(const BooleanNetwork& network) {
  std::string out;
  for (int i = 0; i < network.node_count(); ++i) {
    out += network.names[static_cast<size_t>(i)];
    out += " = ";
    out += to_string(*network.functions[static_cast<size_t>(i)], network.names);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// controls

bool Control::touches(NodeId node) const {
  return std::binary_search(zero_set.begin(), zero_set.end(), node) ||
         std::binary_search(one_set.begin(), one_set.end(), node);
}

std::vector<NodeId> Control::nodes() const {
  std::vector<NodeId> out(zero_set);
  out.insert(out.end(), one_set.begin(), one_set.end());
  std::sort(out.begin(), out.end());
  return out;
}

uint32_t Control::node_mask(int width) const {
  uint32_t mask = 0;
  for (NodeId i : zero_set) mask |= 1u << (width - 1 - i);
  for (NodeId i : one_set) mask |= 1u << (width - 1 - i);
  return mask;
}

uint32_t Control::held_bits(int width) const {
  uint32_t bits = 0;
  for (NodeId i : one_set) bits |= 1u << (width - 1 - i);
  return bits;
}

State apply_control(const Control& control, const State& state) {
  for (NodeId i : control.zero_set) {
    if (!state.get(i)) {
      throw std::invalid_argument("control is inconsistent with the state: node " +
                                  std::to_string(i + 1) + " already holds 0");
    }
  }
  for (NodeId i : control.one_set) {
    if (state.get(i)) {
      throw std::invalid_argument("control is inconsistent with the state: node " +
                                  std::to_string(i + 1) + " already holds 1");
    }
  }
  return force_control(control, state);
}

State force_control(const Control& control, const State& state) {
  uint32_t mask = control.node_mask(state.width);
  uint32_t held = control.held_bits(state.width);
  return State((state.bits & ~mask) | held, state.width);
}

Control flips_for(const State& state, std::span<const NodeId> nodes) {
  std::vector<NodeId> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Control c;
  for (NodeId i : sorted) {
    if (i < 0 || i >= state.width) {
      throw std::invalid_argument("node index out of range");
    }
    (state.get(i) ? c.zero_set : c.one_set).push_back(i);
  }
  return c;
}

Control control_difference(const Control& a, const Control& b) {
  std::set<NodeId> drop(b.zero_set.begin(), b.zero_set.end());
  drop.insert(b.one_set.begin(), b.one_set.end());
  Control out;
  for (NodeId i : a.zero_set) {
    if (!drop.contains(i)) out.zero_set.push_back(i);
  }
  for (NodeId i : a.one_set) {
    if (!drop.contains(i)) out.one_set.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// controlled networks

bool ControlledNetwork::eval_node(NodeId node, const State& state) const {
  int8_t f = forced_[static_cast<size_t>(node)];
  if (f >= 0) return f == 1;
  return evaluate(*base.functions[static_cast<size_t>(node)], state);
}

ExprPtr ControlledNetwork::effective_function(NodeId node) const {
  int8_t f = forced_[static_cast<size_t>(node)];
  if (f >= 0) return BooleanExpr::constant(f == 1);
  return base.functions[static_cast<size_t>(node)];
}

ControlledNetwork restrict_network(const BooleanNetwork& network,
                                    const Control& control) {
  int n = network.node_count();
  ControlledNetwork cn;
  cn.base = network;
  cn.control = control;
  cn.forced_.assign(static_cast<size_t>(n), -1);
  for (NodeId i : control.zero_set) {
    if (i < 0 || i >= n) throw std::invalid_argument("control node out of range");
    cn.forced_[static_cast<size_t>(i)] = 0;
  }
  for (NodeId i : control.one_set) {
    if (i < 0 || i >= n) throw std::invalid_argument("control node out of range");
    if (cn.forced_[static_cast<size_t>(i)] == 0) {
      throw std::invalid_argument("control holds a node both low and high");
    }
    cn.forced_[static_cast<size_t>(i)] = 1;
  }
  cn.space_mask_ = control.node_mask(n);
  cn.space_bits_ = control.held_bits(n);
  return cn;
}

ControlledNetwork uncontrolled(const BooleanNetwork& network) {
  return restrict_network(network, Control{});
}

}  // namespace bnctrl
