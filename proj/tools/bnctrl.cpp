// bnctrl — attractors, basins, minimal one-step controls and sequential
// control paths for asynchronous Boolean networks, with a brute-force
// verifier. See README.md for the model grammar and output schemas.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bnctrl/dynamics.hpp"
#include "bnctrl/json_io.hpp"
#include "bnctrl/model.hpp"
#include "bnctrl/onestep.hpp"
#include "bnctrl/oracle.hpp"
#include "bnctrl/sequential.hpp"

namespace {

using namespace bnctrl;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceBound = 3;

struct CommonOptions {
  std::string format = "json";
  int max_nodes = kDefaultMaxNodes;
  std::string labels_path;
  uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  cmd->add_option("--max-n", opts.max_nodes,
                  "Override the node-count bound on the explicit state space")
      ->capture_default_str();
  cmd->add_option("--labels", opts.labels_path,
                  "Sidecar file naming attractors: one 'NAME BITSTRING' per line");
  cmd->add_option("--seed", opts.seed, "Seed for seeded operations");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string model_name(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

struct LoadedModel {
  std::string name;
  BooleanNetwork network;
  std::vector<Attractor> attractors;
  AttractorLabels labels;
};

LoadedModel load_model(const std::string& path, const CommonOptions& opts) {
  LoadedModel model;
  model.name = model_name(path);
  model.network = parse_network(read_file(path));
  model.attractors = attractors(model.network, opts.max_nodes);
  if (!opts.labels_path.empty()) {
    model.labels = parse_labels(read_file(opts.labels_path), model.attractors);
  }
  return model;
}

// Attractor selectors: a label from the sidecar file, a member-state
// bit-string, "A<id>", or a bare 1-based id. A full-width 0/1 string is
// always a state: a decimal id that long could never be in range.
int resolve_attractor(const LoadedModel& model, const std::string& selector) {
  for (const auto& [id, name] : model.labels) {
    if (name == selector) return id;
  }
  int n = model.network.node_count();
  if (n >= 2 && static_cast<int>(selector.size()) == n &&
      selector.find_first_not_of("01") == std::string::npos) {
    State state = State::from_string(selector);
    for (const Attractor& a : model.attractors) {
      if (a.states.contains(state)) return a.id;
    }
    throw std::invalid_argument("state " + selector +
                                " is not part of any attractor");
  }
  std::string text = selector;
  if (text.size() > 1 && (text[0] == 'A' || text[0] == 'a') &&
      text.find_first_not_of("0123456789", 1) == std::string::npos) {
    text = text.substr(1);
  }
  if (!text.empty() && text.size() <= 9 &&
      text.find_first_not_of("0123456789") == std::string::npos) {
    int id = std::stoi(text) - 1;
    if (id >= 0 && id < static_cast<int>(model.attractors.size())) return id;
    throw std::invalid_argument("no attractor with id " + selector);
  }
  throw std::invalid_argument("cannot resolve attractor selector '" + selector +
                              "'");
}

std::vector<NodeId> resolve_nodes(const BooleanNetwork& network,
                                  const std::vector<std::string>& names) {
  std::vector<NodeId> out;
  for (const auto& name : names) {
    auto id = network.find_node(name);
    if (!id) throw std::invalid_argument("unknown node '" + name + "'");
    out.push_back(*id);
  }
  return out;
}

void emit(const Json& document, const CommonOptions& opts,
          const std::string& table) {
  if (opts.format == "json") {
    std::cout << document.dump(2) << "\n";
  } else {
    std::cout << table;
  }
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string control_text(const BooleanNetwork& network, const Control& c) {
  std::vector<std::string> parts;
  for (NodeId i : c.zero_set) {
    parts.push_back(network.names[static_cast<size_t>(i)] + ":=0");
  }
  for (NodeId i : c.one_set) {
    parts.push_back(network.names[static_cast<size_t>(i)] + ":=1");
  }
  if (parts.empty()) return "{}";
  return "{" + join(parts, ", ") + "}";
}

// ---------------------------------------------------------------------------

int cmd_attractors(const std::string& model_path, const CommonOptions& opts) {
  LoadedModel model = load_model(model_path, opts);
  Json doc = attractors_to_json(model.name, model.network, model.attractors,
                                model.labels);
  std::ostringstream table;
  table << "attractors of " << model.name << " (n=" << model.network.node_count()
        << ")\n";
  for (const Attractor& a : model.attractors) {
    table << "  A" << a.id + 1;
    auto label = model.labels.find(a.id);
    if (label != model.labels.end()) table << " [" << label->second << "]";
    table << "  size=" << a.states.size() << "  states: "
          << join(a.states.to_strings(), " ") << "\n";
  }
  emit(doc, opts, table.str());
  return kExitOk;
}

int cmd_basins(const std::string& model_path, const std::string& selector,
               const CommonOptions& opts) {
  LoadedModel model = load_model(model_path, opts);
  int id = resolve_attractor(model, selector);
  const Attractor& attractor = model.attractors[static_cast<size_t>(id)];
  BasinReport report = basin_report(model.network, attractor);
  Json doc = basins_to_json(model.name, model.network, attractor, report);
  std::ostringstream table;
  table << "basins of A" << id + 1 << " in " << model.name << "\n"
        << "  states: " << join(attractor.states.to_strings(), " ") << "\n"
        << "  weak:   " << join(report.weak.to_strings(), " ") << "\n"
        << "  strong: " << join(report.strong.to_strings(), " ") << "\n";
  emit(doc, opts, table.str());
  return kExitOk;
}

int cmd_control(const std::string& model_path, const std::string& source_sel,
                const std::string& target_sel, const std::string& mode_name,
                int budget, const std::vector<std::string>& forbid_names,
                bool strict, const CommonOptions& opts) {
  LoadedModel model = load_model(model_path, opts);
  ControlQuery query;
  query.source_attractor = resolve_attractor(model, source_sel);
  query.target_attractor = resolve_attractor(model, target_sel);
  query.mode = mode_name == "OI"   ? OneStepMode::OI
               : mode_name == "OP" ? OneStepMode::OP
                                   : OneStepMode::OT;
  query.budget = budget > 0 ? budget : model.network.node_count();
  query.forbidden = resolve_nodes(model.network, forbid_names);
  query.strict_all_states = strict;

  auto solutions = minimal_controls(model.network, model.attractors, query);
  Json doc = solutions_to_json(model.name, model.network, query.mode,
                               query.source_attractor, query.target_attractor,
                               query.budget, solutions);
  std::ostringstream table;
  table << to_string(query.mode) << " controls A" << query.source_attractor + 1
        << " -> A" << query.target_attractor + 1 << " (k=" << query.budget
        << ")\n";
  for (const auto& s : solutions) {
    table << "  size=" << s.size << "  " << control_text(model.network, s.control)
          << "\n";
  }
  if (solutions.empty()) table << "  none within budget\n";
  emit(doc, opts, table.str());
  return kExitOk;
}

int cmd_paths(const std::string& model_path, const std::string& source_sel,
              const std::string& target_sel, const std::string& mode_name,
              int budget, const std::vector<std::string>& forbid_names,
              const std::vector<std::string>& forbid_intermediates,
              const CommonOptions& opts) {
  LoadedModel model = load_model(model_path, opts);
  SequentialQuery query;
  query.source_attractor = resolve_attractor(model, source_sel);
  query.target_attractor = resolve_attractor(model, target_sel);
  query.mode = mode_name == "ASI"   ? PathMode::ASI
               : mode_name == "ASP" ? PathMode::ASP
                                    : PathMode::AST;
  if (budget > 0) query.budget = budget;
  query.forbidden = resolve_nodes(model.network, forbid_names);
  if (!forbid_intermediates.empty()) {
    std::vector<int> allowed;
    std::vector<bool> banned(model.attractors.size(), false);
    for (const auto& sel : forbid_intermediates) {
      banned[static_cast<size_t>(resolve_attractor(model, sel))] = true;
    }
    for (const Attractor& a : model.attractors) {
      if (!banned[static_cast<size_t>(a.id)]) allowed.push_back(a.id);
    }
    query.allowed_intermediates = std::move(allowed);
  }

  int effective_budget =
      query.budget.value_or(default_budget(model.network, model.attractors, query));
  query.budget = effective_budget;
  auto paths = sequential_paths(model.network, model.attractors, query);
  Json doc = paths_to_json(model.name, model.network, model.attractors,
                           query.mode, query.source_attractor,
                           query.target_attractor, effective_budget, paths);
  std::ostringstream table;
  table << to_string(query.mode) << " paths A" << query.source_attractor + 1
        << " -> A" << query.target_attractor + 1 << " (k=" << effective_budget
        << ")\n";
  for (const ControlPath& p : paths) {
    table << "  A" << query.source_attractor + 1;
    for (size_t i = 0; i < p.intermediates.size(); ++i) {
      table << " -" << control_text(model.network, p.controls[i]) << "-> A"
            << p.intermediates[i] + 1;
    }
    table << "  total=" << p.total_perturbations << "\n";
  }
  if (paths.empty()) table << "  none within budget\n";
  emit(doc, opts, table.str());
  return kExitOk;
}

int cmd_verify(const std::string& model_path, const std::string& path_file,
               const CommonOptions& opts) {
  LoadedModel model = load_model(model_path, opts);
  Json document;
  try {
    document = Json::parse(read_file(path_file));
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed path file: ") + e.what());
  }
  PathFile parsed = parse_path_file(document, model.network);

  // The ids in the file must still describe this model.
  for (const auto& [id, states] : parsed.attractor_states) {
    if (id < 0 || id >= static_cast<int>(model.attractors.size()) ||
        model.attractors[static_cast<size_t>(id)].states.to_strings() != states) {
      throw std::invalid_argument(
          "path file attractors do not match the model (stale file?)");
    }
  }

  Json results = Json::array();
  bool all_ok = true;
  for (size_t i = 0; i < parsed.paths.size(); ++i) {
    const ControlPath& p = parsed.paths[i];
    oracle::Schedule schedule;
    schedule.kind = p.mode == PathMode::ASI ? oracle::StepKind::Instantaneous
                    : p.mode == PathMode::ASP ? oracle::StepKind::Permanent
                                              : oracle::StepKind::Temporary;
    schedule.controls = p.controls;
    schedule.intermediates = p.intermediates;
    oracle::Verdict verdict = oracle::verify_path(model.network, parsed.source,
                                                  parsed.target, schedule);
    Json entry;
    entry["path"] = i;
    entry["ok"] = verdict.ok;
    if (verdict.failing_step) entry["failing_step"] = *verdict.failing_step;
    if (verdict.witness) entry["witness"] = verdict.witness->to_string();
    results.push_back(std::move(entry));
    all_ok = all_ok && verdict.ok;
  }
  Json doc;
  doc["network"] = model.name;
  doc["paths_checked"] = parsed.paths.size();
  doc["ok"] = all_ok;
  doc["results"] = std::move(results);

  std::ostringstream table;
  table << "verify " << path_file << " against " << model.name << ": "
        << (all_ok ? "ok" : "FAILED") << " (" << parsed.paths.size()
        << " paths)\n";
  for (const auto& entry : doc["results"]) {
    table << "  path " << entry["path"] << ": "
          << (entry["ok"].get<bool>() ? "ok" : "failed");
    if (entry.contains("failing_step")) {
      table << " at step " << entry["failing_step"];
      if (entry.contains("witness")) table << ", witness " << entry["witness"];
    }
    table << "\n";
  }
  emit(doc, opts, table.str());
  return all_ok ? kExitOk : kExitVerificationFailed;
}

int cmd_bench(const std::vector<std::string>& model_paths,
              const std::string& source_sel, const std::string& target_sel,
              int budget, const std::vector<std::string>& forbid_names,
              const std::vector<std::string>& forbid_intermediates,
              const CommonOptions& opts) {
  Json rows = Json::array();
  std::ostringstream table;
  table << "network              |V|   |E|   |A| | #perturbations ASI AST ASP |"
           " #paths ASI AST ASP | time ASI AST ASP\n";

  for (const auto& path : model_paths) {
    Json row;
    std::ostringstream line;
    try {
      LoadedModel model = load_model(path, opts);
      int edges = 0;
      for (int i = 0; i < model.network.node_count(); ++i) {
        edges += static_cast<int>(model.network.regulators(i).size());
      }
      row["network"] = model.name;
      row["V"] = model.network.node_count();
      row["E"] = edges;
      row["A"] = model.attractors.size();

      int source = source_sel.empty() ? 0 : resolve_attractor(model, source_sel);
      int target = target_sel.empty()
                       ? static_cast<int>(model.attractors.size()) - 1
                       : resolve_attractor(model, target_sel);
      if (source == target) {
        throw std::invalid_argument(
            "bench needs distinct source and target attractors");
      }

      Json modes;
      char buffer[32];
      std::string perturbations, counts, times;
      for (PathMode mode : {PathMode::ASI, PathMode::AST, PathMode::ASP}) {
        SequentialQuery query;
        query.source_attractor = source;
        query.target_attractor = target;
        query.mode = mode;
        if (budget > 0) query.budget = budget;
        query.forbidden = resolve_nodes(model.network, forbid_names);
        if (!forbid_intermediates.empty()) {
          std::vector<int> allowed;
          std::vector<bool> banned(model.attractors.size(), false);
          for (const auto& sel : forbid_intermediates) {
            banned[static_cast<size_t>(resolve_attractor(model, sel))] = true;
          }
          for (const Attractor& a : model.attractors) {
            if (!banned[static_cast<size_t>(a.id)]) allowed.push_back(a.id);
          }
          query.allowed_intermediates = std::move(allowed);
        }

        auto started = std::chrono::steady_clock::now();
        int effective_budget = query.budget.value_or(
            default_budget(model.network, model.attractors, query));
        query.budget = effective_budget;
        auto paths = sequential_paths(model.network, model.attractors, query);
        auto best = shortest(paths);
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          started)
                .count();

        Json entry;
        entry["k"] = effective_budget;
        if (best.empty()) {
          entry["min_perturbations"] = nullptr;
          perturbations += "   -";
        } else {
          entry["min_perturbations"] = best.front().total_perturbations;
          std::snprintf(buffer, sizeof buffer, " %3d",
                        best.front().total_perturbations);
          perturbations += buffer;
        }
        entry["paths"] = best.size();
        std::snprintf(buffer, sizeof buffer, " %3zu", best.size());
        counts += buffer;
        entry["seconds"] = seconds;
        std::snprintf(buffer, sizeof buffer, " %.3f", seconds);
        times += buffer;
        modes[to_string(mode)] = std::move(entry);
      }
      row["modes"] = std::move(modes);
      line << model.name;
      for (size_t pad = model.name.size(); pad < 20; ++pad) line << ' ';
      char head[48];
      std::snprintf(head, sizeof head, " %4d  %4d  %3zu |",
                    model.network.node_count(), edges,
                    static_cast<size_t>(model.attractors.size()));
      line << head << perturbations << "            |" << counts
           << "             |" << times << "\n";
    } catch (const std::exception& e) {
      row["network"] = model_name(path);
      row["error"] = e.what();
      line << model_name(path) << "  error: " << e.what() << "\n";
    }
    rows.push_back(std::move(row));
    table << line.str();
  }
  Json doc;
  doc["rows"] = std::move(rows);
  emit(doc, opts, table.str());
  return kExitOk;
}

int cmd_gen(int nodes, int max_in_degree, const CommonOptions& opts) {
  oracle::RandomNetworkOptions gen;
  gen.nodes = nodes;
  gen.max_in_degree = max_in_degree;
  gen.seed = opts.seed;
  std::cout << print_network(oracle::random_network(gen));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attractor-based control of asynchronous Boolean networks"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string model_path, path_file, source_sel, target_sel, selector;
  std::string one_step_mode = "OT", path_mode = "AST";
  std::vector<std::string> forbid_names, forbid_intermediates, model_paths;
  int budget = 0, nodes = 4, max_in_degree = 3;
  bool strict = false;

  CLI::App* attractors_cmd =
      app.add_subcommand("attractors", "List attractors with ids and states");
  attractors_cmd->add_option("model", model_path, "Model file")->required();
  add_common(attractors_cmd, opts);

  CLI::App* basins_cmd =
      app.add_subcommand("basins", "Weak and strong basin of one attractor");
  basins_cmd->add_option("model", model_path)->required();
  basins_cmd->add_option("--attractor", selector, "Attractor selector")
      ->required();
  add_common(basins_cmd, opts);

  CLI::App* control_cmd = app.add_subcommand(
      "control", "Minimal one-step controls between two attractors");
  control_cmd->add_option("model", model_path)->required();
  control_cmd->add_option("--source", source_sel)->required();
  control_cmd->add_option("--target", target_sel)->required();
  control_cmd->add_option("--mode", one_step_mode, "OI, OT or OP")
      ->check(CLI::IsMember({"OI", "OT", "OP"}))
      ->capture_default_str();
  control_cmd->add_option("--max-perturbations", budget,
                          "Largest control size to consider (default: n)");
  control_cmd->add_option("--forbid-node", forbid_names,
                          "Node that must not be perturbed (repeatable)");
  control_cmd->add_flag("--strict", strict,
                        "Require validity from every state of a cyclic source");
  add_common(control_cmd, opts);

  CLI::App* paths_cmd = app.add_subcommand(
      "paths", "Sequential control paths through intermediate attractors");
  paths_cmd->add_option("model", model_path)->required();
  paths_cmd->add_option("--source", source_sel)->required();
  paths_cmd->add_option("--target", target_sel)->required();
  paths_cmd->add_option("--mode", path_mode, "ASI, AST or ASP")
      ->check(CLI::IsMember({"ASI", "AST", "ASP"}))
      ->capture_default_str();
  paths_cmd->add_option(
      "--max-perturbations", budget,
      "Perturbation budget (default: the minimal one-step size)");
  paths_cmd->add_option("--forbid-node", forbid_names,
                        "Node that must not be perturbed (repeatable)");
  paths_cmd->add_option("--forbid-intermediate", forbid_intermediates,
                        "Attractor barred from acting as an intermediate");
  add_common(paths_cmd, opts);

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Re-check a paths JSON file with the brute-force verifier");
  verify_cmd->add_option("model", model_path)->required();
  verify_cmd->add_option("pathfile", path_file, "Output of the paths command")
      ->required();
  add_common(verify_cmd, opts);

  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Per-model ASI/AST/ASP report: perturbations, paths, time");
  bench_cmd->add_option("models", model_paths, "Model files");
  bench_cmd->add_option("--source", source_sel, "Selector, default A1");
  bench_cmd->add_option("--target", target_sel, "Selector, default last");
  bench_cmd->add_option("--max-perturbations", budget);
  bench_cmd->add_option("--forbid-node", forbid_names);
  bench_cmd->add_option("--forbid-intermediate", forbid_intermediates);
  add_common(bench_cmd, opts);

  CLI::App* gen_cmd =
      app.add_subcommand("gen", "Emit a random model for testing");
  gen_cmd->add_option("--nodes", nodes)->capture_default_str();
  gen_cmd->add_option("--max-in-degree", max_in_degree)->capture_default_str();
  add_common(gen_cmd, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (attractors_cmd->parsed()) return cmd_attractors(model_path, opts);
    if (basins_cmd->parsed()) return cmd_basins(model_path, selector, opts);
    if (control_cmd->parsed()) {
      return cmd_control(model_path, source_sel, target_sel, one_step_mode,
                         budget, forbid_names, strict, opts);
    }
    if (paths_cmd->parsed()) {
      return cmd_paths(model_path, source_sel, target_sel, path_mode, budget,
                       forbid_names, forbid_intermediates, opts);
    }
    if (verify_cmd->parsed()) return cmd_verify(model_path, path_file, opts);
    if (bench_cmd->parsed()) {
      return cmd_bench(model_paths, source_sel, target_sel, budget, forbid_names,
                       forbid_intermediates, opts);
    }
    if (gen_cmd->parsed()) return cmd_gen(nodes, max_in_degree, opts);
  } catch (const BoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResourceBound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
