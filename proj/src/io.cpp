#include "edenca/io.hpp"

#include <fstream>
#include <sstream>

namespace edenca {

namespace {

std::string family_name(Family f) {
  switch (f) {
    case Family::Free: return "free";
    case Family::FreeProductCyclic: return "free-product-cyclic";
    case Family::Lattice: return "integer-lattice";
  }
  return "?";
}

} // namespace

Json group_to_json(const GroupSpec& spec) {
  Json j;
  j["family"] = family_name(spec.family);
  if (spec.family == Family::Lattice) {
    j["dimension"] = spec.rank();
  } else {
    j["generators"] = spec.generators;
    if (spec.family == Family::FreeProductCyclic) j["orders"] = spec.orders;
  }
  return j;
}

GroupSpec group_from_json(const Json& j) {
  try {
    std::string fam = j.at("family").get<std::string>();
    if (fam == "free") {
      GroupSpec s;
      s.family = Family::Free;
      if (j.contains("generators"))
        s.generators = j.at("generators").get<std::vector<std::string>>();
      else
        s = GroupSpec::free_group(j.at("rank").get<int>());
      return s;
    }
    if (fam == "free-product-cyclic") {
      GroupSpec s = GroupSpec::free_product_cyclic(j.at("orders").get<std::vector<int>>());
      if (j.contains("generators")) s.generators = j.at("generators").get<std::vector<std::string>>();
      return s;
    }
    if (fam == "integer-lattice") return GroupSpec::lattice(j.at("dimension").get<int>());
    throw UsageError("unknown group family: " + fam);
  } catch (const Json::exception& e) {
    throw UsageError(std::string("bad group description: ") + e.what());
  }
}

GroupSpec parse_group_shorthand(const std::string& text) {
  if (text == "Z") return GroupSpec::lattice(1);
  if (text.size() >= 2 && text[0] == 'Z' && std::isdigit(static_cast<unsigned char>(text[1])))
    return GroupSpec::lattice(std::stoi(text.substr(1)));
  if (text.size() >= 2 && text[0] == 'F' && std::isdigit(static_cast<unsigned char>(text[1])))
    return GroupSpec::free_group(std::stoi(text.substr(1)));
  auto split_ints = [](const std::string& s, char sep) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) v.push_back(std::stoi(tok));
    return v;
  };
  if (text.rfind("free:", 0) == 0) return GroupSpec::free_group(std::stoi(text.substr(5)));
  if (text.rfind("cyclic:", 0) == 0) return GroupSpec::free_product_cyclic(split_ints(text.substr(7), ','));
  if (text.rfind("lattice:", 0) == 0) return GroupSpec::lattice(std::stoi(text.substr(8)));
  if (text.find('*') != std::string::npos) {
    // C2*C2*C2 style
    std::vector<int> orders;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '*')) {
      if (tok.size() < 2 || (tok[0] != 'C' && tok[0] != 'c')) throw UsageError("bad group shorthand: " + text);
      orders.push_back(std::stoi(tok.substr(1)));
    }
    return GroupSpec::free_product_cyclic(orders);
  }
  throw UsageError("unknown group shorthand: " + text);
}

Json gens_to_json(const Group& g, const GenSet& S) {
  Json arr = Json::array();
  for (const auto& e : S.elems) arr.push_back(g.format(e));
  return arr;
}

GenSet gens_from_json(const Group& g, const Json& j) {
  std::vector<GroupElement> v;
  for (const auto& item : j) v.push_back(g.parse(item.get<std::string>()));
  return g.make_gen_set(std::move(v));
}

Json pattern_to_json(const Group& g, const Pattern& p) {
  Json j;
  Json st;
  st["kind"] = p.states->kind();
  if (p.states->kind() == "explicit") {
    Json names = Json::array();
    for (State i = 0; i < p.states->size(); ++i) names.push_back(p.states->name(i));
    st["names"] = names;
  } else {
    st["size"] = p.states->size();
  }
  j["states"] = st;
  Json cells = Json::array();
  for (const auto& [x, v] : p.cells) cells.push_back(Json::array({g.format(x), p.states->name(v)}));
  j["cells"] = cells;
  return j;
}

Pattern pattern_from_json(const Group& g, const Json& j, std::shared_ptr<const StateSet> context) {
  try {
    const Json& st = j.at("states");
    std::string kind = st.at("kind").get<std::string>();
    std::shared_ptr<const StateSet> states;
    if (kind == "explicit") {
      auto names = st.at("names").get<std::vector<std::string>>();
      if (context && context->kind() == "explicit") {
        states = context;
        auto probe = StateSet::explicit_set(names);
        if (!probe->same_as(*context)) throw DataError("pattern state set does not match the expected one");
      } else {
        states = StateSet::explicit_set(names);
      }
    } else {
      if (!context) throw UsageError("pattern with generated state set needs a rule context to load");
      if (context->kind() != kind || context->size() != st.at("size").get<State>())
        throw DataError("pattern state set '" + kind + "' does not match the rule context");
      states = context;
    }
    Pattern p;
    p.states = states;
    for (const auto& cell : j.at("cells")) {
      GroupElement x = g.parse(cell.at(0).get<std::string>());
      State v = states->index_of(cell.at(1).get<std::string>());
      if (v < 0) throw DataError("unknown state name: " + cell.at(1).get<std::string>());
      if (!p.cells.emplace(x, v).second) throw DataError("duplicate cell in pattern file");
    }
    return p;
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad pattern document: ") + e.what());
  }
}

Json witness_to_json(const Group& g,
                     const std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>>& witness) {
  Json arr = Json::array();
  for (const auto& [xy, f] : witness) arr.push_back(Json::array({g.format(xy.first), g.format(xy.second), f}));
  return arr;
}

std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>> witness_from_json(const Group& g,
                                                                                     const Json& j) {
  std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>> out;
  try {
    for (const auto& row : j)
      out.push_back({{g.parse(row.at(0).get<std::string>()), g.parse(row.at(1).get<std::string>())},
                     row.at(2).get<int>()});
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad witness document: ") + e.what());
  }
  return out;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write file: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    throw DataError("bad JSON in " + path + ": " + e.what());
  }
}

} // namespace edenca
