#include "bnctrl/sequential.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bnctrl {

const char* to_string(PathMode mode) {
  switch (mode) {
    case PathMode::ASI: return "ASI";
    case PathMode::AST: return "AST";
    case PathMode::ASP: return "ASP";
  }
  return "?";
}

OneStepMode step_mode(PathMode mode) {
  switch (mode) {
    case PathMode::ASI: return OneStepMode::OI;
    case PathMode::AST: return OneStepMode::OT;
    case PathMode::ASP: return OneStepMode::OP;
  }
  return OneStepMode::OT;
}

int default_budget(const BooleanNetwork& network,
                   const std::vector<Attractor>& attractors,
                   const SequentialQuery& query) {
  ControlQuery one_step;
  one_step.source_attractor = query.source_attractor;
  one_step.target_attractor = query.target_attractor;
  one_step.mode = step_mode(query.mode);
  one_step.budget = network.node_count();
  one_step.forbidden = query.forbidden;
  auto solutions = minimal_controls(network, attractors, one_step);
  if (solutions.empty()) return network.node_count();
  int best = solutions.front().size;
  for (const auto& s : solutions) best = std::min(best, s.size);
  return best;
}

namespace {

// Canonical comparison used for the final ordering and for set-style
// equality in tests: totals, then length, then intermediates, then the
// controls themselves.
std::vector<int> control_key(const Control& c) {
  std::vector<int> key;
  for (NodeId i : c.zero_set) key.push_back(i);
  key.push_back(-1);
  for (NodeId i : c.one_set) key.push_back(i);
  return key;
}

bool path_less(const ControlPath& a, const ControlPath& b) {
  if (a.total_perturbations != b.total_perturbations) {
    return a.total_perturbations < b.total_perturbations;
  }
  if (a.intermediates.size() != b.intermediates.size()) {
    return a.intermediates.size() < b.intermediates.size();
  }
  if (a.intermediates != b.intermediates) {
    return a.intermediates < b.intermediates;
  }
  for (size_t i = 0; i < a.controls.size(); ++i) {
    auto ka = control_key(a.controls[i]);
    auto kb = control_key(b.controls[i]);
    if (ka != kb) return ka < kb;
  }
  return false;
}

class SequentialSearch {
 public:
  SequentialSearch(const BooleanNetwork& network,
                   const std::vector<Attractor>& attractors,
                   const SequentialQuery& query)
      : network_(network), attractors_(attractors), query_(query) {
    if (query.source_attractor < 0 ||
        query.source_attractor >= static_cast<int>(attractors.size()) ||
        query.target_attractor < 0 ||
        query.target_attractor >= static_cast<int>(attractors.size())) {
      throw std::invalid_argument("attractor id out of range");
    }
    if (query.source_attractor == query.target_attractor) {
      throw std::invalid_argument("source and target attractors must differ");
    }
    budget_ = query.budget.value_or(default_budget(network, attractors, query));
    allowed_.assign(attractors.size(), true);
    allowed_[static_cast<size_t>(query.target_attractor)] = false;
    if (query.allowed_intermediates) {
      allowed_.assign(attractors.size(), false);
      for (int id : *query.allowed_intermediates) {
        if (id >= 0 && id < static_cast<int>(attractors.size()) &&
            id != query.target_attractor) {
          allowed_[static_cast<size_t>(id)] = true;
        }
      }
    }
  }

  std::vector<ControlPath> run() {
    return std::move(run_ledger().by_attractor[query_.source_attractor]);
  }

  PathLedger run_ledger() {
    PathLedger out;
    if (budget_ < 1) return out;
    seed_phase();
    extend_phase();
    for (auto& [attractor, paths] : ledger_) {
      std::sort(paths.begin(), paths.end(), path_less);
      out.by_attractor.emplace(attractor, std::move(paths));
    }
    return out;
  }

 private:
  // Minimal step controls between two attractors, cached per ordered pair.
  // Step controls are required to work from every member state of the step
  // source; the network may sit anywhere in an oscillation when the next
  // intervention is applied.
  const std::vector<Control>& step_controls(int from, int to) {
    auto key = std::make_pair(from, to);
    auto it = step_cache_.find(key);
    if (it != step_cache_.end()) return it->second;
    ControlQuery q;
    q.source_attractor = from;
    q.target_attractor = to;
    q.mode = step_mode(query_.mode);
    q.budget = budget_;
    q.forbidden = query_.forbidden;
    q.strict_all_states = true;
    std::vector<Control> controls;
    for (auto& sol : minimal_controls(network_, attractors_, q)) {
      controls.push_back(std::move(sol.control));
    }
    return step_cache_.emplace(key, std::move(controls)).first->second;
  }

  // Direct one-step routes into the target, held back one perturbation so a
  // step out of the source still fits.
  void seed_phase() {
    for (int a = 0; a < static_cast<int>(attractors_.size()); ++a) {
      if (a == query_.target_attractor || a == query_.source_attractor) continue;
      if (!allowed_[static_cast<size_t>(a)]) continue;
      bool any = false;
      for (const Control& c : step_controls(a, query_.target_attractor)) {
        if (c.size() > budget_ - 1) continue;
        ControlPath path;
        path.intermediates = {query_.target_attractor};
        path.controls = {c};
        path.total_perturbations = c.size();
        path.mode = query_.mode;
        ledger_[a].push_back(std::move(path));
        any = true;
      }
      if (any) frontier_.insert(a);
    }
  }

  void extend_phase() {
    while (!frontier_.empty()) {
      // Snapshot the entries added in the previous round; extensions made
      // now only become visible to the next round.
      struct Range {
        int attractor;
        size_t begin, end;
      };
      std::vector<Range> ranges;
      for (int a : frontier_) {
        size_t begin = consumed_.contains(a) ? consumed_[a] : 0;
        size_t end = ledger_[a].size();
        consumed_[a] = end;
        ranges.push_back({a, begin, end});
      }
      frontier_.clear();

      for (const Range& r : ranges) {
        for (int from = 0; from < static_cast<int>(attractors_.size()); ++from) {
          if (from == r.attractor || from == query_.target_attractor) continue;
          bool is_source = from == query_.source_attractor;
          if (!is_source && !allowed_[static_cast<size_t>(from)]) continue;
          int limit = is_source ? budget_ : budget_ - 1;
          for (const Control& c : step_controls(from, r.attractor)) {
            for (size_t e = r.begin; e < r.end; ++e) {
              const ControlPath& suffix = ledger_[r.attractor][e];
              if (std::count(suffix.intermediates.begin(),
                             suffix.intermediates.end(), from)) {
                continue;  // attractors along a path stay distinct
              }
              int total = c.size() + suffix.total_perturbations;
              if (total > limit) continue;
              if (query_.mode == PathMode::ASP &&
                  !perm_control_validation(
                      c, attractors_[static_cast<size_t>(r.attractor)],
                      suffix.intermediates, suffix.controls, attractors_)) {
                continue;
              }
              ControlPath extended;
              extended.intermediates.reserve(suffix.intermediates.size() + 1);
              extended.intermediates.push_back(r.attractor);
              extended.intermediates.insert(extended.intermediates.end(),
                                            suffix.intermediates.begin(),
                                            suffix.intermediates.end());
              extended.controls.reserve(suffix.controls.size() + 1);
              extended.controls.push_back(c);
              extended.controls.insert(extended.controls.end(),
                                       suffix.controls.begin(),
                                       suffix.controls.end());
              extended.total_perturbations = total;
              extended.mode = query_.mode;
              ledger_[from].push_back(std::move(extended));
              if (!is_source) frontier_.insert(from);
            }
          }
        }
      }
    }
  }

  const BooleanNetwork& network_;
  const std::vector<Attractor>& attractors_;
  const SequentialQuery& query_;
  int budget_ = 0;
  std::vector<bool> allowed_;
  std::map<std::pair<int, int>, std::vector<Control>> step_cache_;
  std::map<int, std::vector<ControlPath>> ledger_;
  std::map<int, size_t> consumed_;
  std::set<int> frontier_;
};

std::vector<ControlPath> run_mode(const BooleanNetwork& network,
                                  const std::vector<Attractor>& attractors,
                                  const SequentialQuery& query, PathMode mode) {
  SequentialQuery q = query;
  q.mode = mode;
  return SequentialSearch(network, attractors, q).run();
}

}  // namespace

std::vector<ControlPath> comp_seq_temp(const BooleanNetwork& network,
                                       const std::vector<Attractor>& attractors,
                                       const SequentialQuery& query) {
  return run_mode(network, attractors, query, PathMode::AST);
}

std::vector<ControlPath> comp_seq_perm(const BooleanNetwork& network,
                                       const std::vector<Attractor>& attractors,
                                       const SequentialQuery& query) {
  return run_mode(network, attractors, query, PathMode::ASP);
}

std::vector<ControlPath> comp_seq_inst(const BooleanNetwork& network,
                                       const std::vector<Attractor>& attractors,
                                       const SequentialQuery& query) {
  return run_mode(network, attractors, query, PathMode::ASI);
}

std::vector<ControlPath> sequential_paths(const BooleanNetwork& network,
                                          const std::vector<Attractor>& attractors,
                                          const SequentialQuery& query) {
  return run_mode(network, attractors, query, query.mode);
}

PathLedger sequential_ledger(const BooleanNetwork& network,
                             const std::vector<Attractor>& attractors,
                             const SequentialQuery& query) {
  return SequentialSearch(network, attractors, query).run_ledger();
}

bool perm_control_validation(const Control& control, const Attractor& next,
                             std::span<const int> delta,
                             std::span<const Control> rho,
                             const std::vector<Attractor>& attractors) {
  if (delta.size() != rho.size() || delta.empty()) {
    throw std::invalid_argument("suffix path must pair every attractor with a control");
  }
  int width = next.states.width();
  auto projection = [&](const Attractor& a, uint32_t mask) {
    std::set<uint32_t> proj;
    a.states.for_each([&](uint32_t code) { proj.insert(code & mask); });
    return proj;
  };

  Control residual = control;
  const Attractor* current = &next;
  for (size_t step = 0; step < delta.size(); ++step) {
    residual = control_difference(residual, rho[step]);
    const Attractor& following = attractors[static_cast<size_t>(delta[step])];
    uint32_t mask = residual.node_mask(width);
    if (projection(*current, mask) != projection(following, mask)) return false;
    current = &following;
  }
  return true;
}

std::vector<ControlPath> shortest(const std::vector<ControlPath>& paths) {
  if (paths.empty()) return {};
  int best = paths.front().total_perturbations;
  for (const auto& p : paths) best = std::min(best, p.total_perturbations);
  std::vector<ControlPath> out;
  for (const auto& p : paths) {
    if (p.total_perturbations == best) out.push_back(p);
  }
  return out;
}

}  // namespace bnctrl
