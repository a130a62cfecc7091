#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bnctrl/dynamics.hpp"
#include "bnctrl/model.hpp"
#include "bnctrl/onestep.hpp"
#include "bnctrl/sequential.hpp"

// Machine-readable output schemas. Attractor ids are 1-based on the wire to
// match the usual A1, A2, ... naming; everything is emitted in sorted order
// so identical inputs produce byte-identical documents.

namespace bnctrl {

using Json = nlohmann::ordered_json;

/// Optional attractor display names, keyed by 0-based id.
using AttractorLabels = std::map<int, std::string>;

Json attractors_to_json(const std::string& network_name,
                        const BooleanNetwork& network,
                        const std::vector<Attractor>& attractors,
                        const AttractorLabels& labels = {});

Json basins_to_json(const std::string& network_name,
                    const BooleanNetwork& network, const Attractor& attractor,
                    const BasinReport& report);

Json control_to_json(const BooleanNetwork& network, const Control& control);

Json solutions_to_json(const std::string& network_name,
                       const BooleanNetwork& network, OneStepMode mode,
                       int source, int target, int budget,
                       const std::vector<ControlSolution>& solutions);

Json paths_to_json(const std::string& network_name,
                   const BooleanNetwork& network,
                   const std::vector<Attractor>& attractors, PathMode mode,
                   int source, int target, int budget,
                   const std::vector<ControlPath>& paths);

/// What cmd_verify reads back: exactly the cmd_paths document.
struct PathFile {
  std::string network_name;
  PathMode mode = PathMode::AST;
  int source = 0;  // 0-based
  int target = 0;
  std::map<int, std::vector<std::string>> attractor_states;  // 0-based id
  std::vector<ControlPath> paths;
};

PathFile parse_path_file(const Json& document, const BooleanNetwork& network);

/// Label files: one `NAME BITSTRING` pair per line, `#` comments.
AttractorLabels parse_labels(const std::string& text,
                             const std::vector<Attractor>& attractors);

}  // namespace bnctrl
