#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "edenca/ca.hpp"
#include "edenca/flow.hpp"
#include "edenca/group.hpp"

namespace edenca {

using Json = nlohmann::json;

// --- group / generating set ---

Json group_to_json(const GroupSpec& spec);
GroupSpec group_from_json(const Json& j);
// Shorthands: F2, F3, Z, Z2, Z3, C2*C2*C2, free:r, cyclic:o1,o2,..., lattice:d
GroupSpec parse_group_shorthand(const std::string& text);

Json gens_to_json(const Group& g, const GenSet& S);
GenSet gens_from_json(const Group& g, const Json& j);

// --- patterns ---

// {"states": {"kind": ..., ["names": [...] | "size": N]},
//  "cells": [[element, state-name], ...]}  (cells in canonical order)
Json pattern_to_json(const Group& g, const Pattern& p);
// Explicit state sets load standalone; generated ones need the owning rule's
// state set as context.
Pattern pattern_from_json(const Group& g, const Json& j,
                          std::shared_ptr<const StateSet> context = nullptr);

// --- correspondence witnesses ---

Json witness_to_json(const Group& g,
                     const std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>>& witness);
std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>> witness_from_json(const Group& g,
                                                                                     const Json& j);

// --- files / reports ---

std::string dump_report(const Json& j); // canonical bytes: sorted keys, 2-space indent, trailing newline
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
Json load_json_file(const std::string& path);

} // namespace edenca
