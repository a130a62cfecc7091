#include "bnctrl/json_io.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bnctrl {

namespace {

PathMode mode_from_string(const std::string& text) {
  if (text == "ASI") return PathMode::ASI;
  if (text == "AST") return PathMode::AST;
  if (text == "ASP") return PathMode::ASP;
  throw std::invalid_argument("unknown path mode '" + text + "'");
}

std::vector<std::string> node_names(const BooleanNetwork& network,
                                    const std::vector<NodeId>& nodes) {
  std::vector<std::string> out;
  for (NodeId i : nodes) out.push_back(network.names[static_cast<size_t>(i)]);
  return out;
}

std::vector<NodeId> node_ids(const BooleanNetwork& network, const Json& names) {
  std::vector<NodeId> out;
  for (const auto& name : names) {
    auto id = network.find_node(name.get<std::string>());
    if (!id) {
      throw std::invalid_argument("unknown node '" + name.get<std::string>() +
                                  "' in path file");
    }
    out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Json attractors_to_json(const std::string& network_name,
                        const BooleanNetwork& network,
                        const std::vector<Attractor>& attractors,
                        const AttractorLabels& labels) {
  Json list = Json::array();
  for (const Attractor& a : attractors) {
    Json entry;
    entry["id"] = a.id + 1;
    entry["size"] = a.states.size();
    entry["states"] = a.states.to_strings();
    auto label = labels.find(a.id);
    if (label != labels.end()) entry["name"] = label->second;
    list.push_back(std::move(entry));
  }
  Json out;
  out["network"] = network_name;
  out["n"] = network.node_count();
  out["attractors"] = std::move(list);
  return out;
}

Json basins_to_json(const std::string& network_name,
                    const BooleanNetwork& network, const Attractor& attractor,
                    const BasinReport& report) {
  Json out;
  out["network"] = network_name;
  out["n"] = network.node_count();
  out["attractor"] = attractor.id + 1;
  out["states"] = attractor.states.to_strings();
  out["weak"] = report.weak.to_strings();
  out["strong"] = report.strong.to_strings();
  return out;
}

Json control_to_json(const BooleanNetwork& network, const Control& control) {
  Json out;
  out["zero"] = node_names(network, control.zero_set);
  out["one"] = node_names(network, control.one_set);
  return out;
}

Json solutions_to_json(const std::string& network_name,
                       const BooleanNetwork& network, OneStepMode mode,
                       int source, int target, int budget,
                       const std::vector<ControlSolution>& solutions) {
  Json list = Json::array();
  for (const ControlSolution& s : solutions) {
    Json entry = control_to_json(network, s.control);
    entry["size"] = s.size;
    list.push_back(std::move(entry));
  }
  Json out;
  out["network"] = network_name;
  out["mode"] = to_string(mode);
  out["source"] = source + 1;
  out["target"] = target + 1;
  out["k"] = budget;
  out["solutions"] = std::move(list);
  return out;
}

Json paths_to_json(const std::string& network_name,
                   const BooleanNetwork& network,
                   const std::vector<Attractor>& attractors, PathMode mode,
                   int source, int target, int budget,
                   const std::vector<ControlPath>& paths) {
  Json attractor_list = Json::array();
  for (const Attractor& a : attractors) {
    Json entry;
    entry["id"] = a.id + 1;
    entry["states"] = a.states.to_strings();
    attractor_list.push_back(std::move(entry));
  }
  Json path_list = Json::array();
  for (const ControlPath& p : paths) {
    Json entry;
    entry["mode"] = to_string(p.mode);
    Json hops = Json::array();
    for (int id : p.intermediates) hops.push_back(id + 1);
    entry["intermediates"] = std::move(hops);
    Json controls = Json::array();
    for (const Control& c : p.controls) {
      controls.push_back(control_to_json(network, c));
    }
    entry["controls"] = std::move(controls);
    entry["total"] = p.total_perturbations;
    path_list.push_back(std::move(entry));
  }
  Json out;
  out["network"] = network_name;
  out["mode"] = to_string(mode);
  out["source"] = source + 1;
  out["target"] = target + 1;
  out["k"] = budget;
  out["attractors"] = std::move(attractor_list);
  out["paths"] = std::move(path_list);
  return out;
}

PathFile parse_path_file(const Json& document, const BooleanNetwork& network) {
  PathFile out;
  try {
    out.network_name = document.at("network").get<std::string>();
    out.mode = mode_from_string(document.at("mode").get<std::string>());
    out.source = document.at("source").get<int>() - 1;
    out.target = document.at("target").get<int>() - 1;
    for (const auto& entry : document.at("attractors")) {
      int id = entry.at("id").get<int>() - 1;
      out.attractor_states[id] =
          entry.at("states").get<std::vector<std::string>>();
    }
    for (const auto& entry : document.at("paths")) {
      ControlPath path;
      path.mode = mode_from_string(entry.at("mode").get<std::string>());
      for (const auto& id : entry.at("intermediates")) {
        path.intermediates.push_back(id.get<int>() - 1);
      }
      for (const auto& control : entry.at("controls")) {
        Control c;
        c.zero_set = node_ids(network, control.at("zero"));
        c.one_set = node_ids(network, control.at("one"));
        path.controls.push_back(std::move(c));
      }
      path.total_perturbations = entry.at("total").get<int>();
      out.paths.push_back(std::move(path));
    }
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed path file: ") + e.what());
  }
  return out;
}

AttractorLabels parse_labels(const std::string& text,
                             const std::vector<Attractor>& attractors) {
  AttractorLabels out;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream fields(line);
    std::string name, bits, extra;
    if (!(fields >> name)) continue;  // blank
    if (name == "=") {
      throw std::invalid_argument("labels line " + std::to_string(line_no) +
                                  ": missing label name");
    }
    if (!(fields >> bits)) {
      throw std::invalid_argument("labels line " + std::to_string(line_no) +
                                  ": expected 'NAME BITSTRING'");
    }
    if (bits == "=" && !(fields >> bits)) {
      throw std::invalid_argument("labels line " + std::to_string(line_no) +
                                  ": expected 'NAME = BITSTRING'");
    }
    State state = State::from_string(bits);
    bool matched = false;
    for (const Attractor& a : attractors) {
      if (state.width == a.states.width() && a.states.contains(state)) {
        out[a.id] = name;
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw std::invalid_argument("labels line " + std::to_string(line_no) +
                                  ": state " + bits +
                                  " is not part of any attractor");
    }
  }
  return out;
}

}  // namespace bnctrl
