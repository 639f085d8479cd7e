#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "edenca/flow.hpp"
#include "edenca/io.hpp"
#include "edenca/linear.hpp"
#include "edenca/moore.hpp"
#include "edenca/oracle.hpp"
#include "edenca/rng.hpp"

namespace py = pybind11;
using namespace edenca;

namespace {

struct PyGroup {
  std::shared_ptr<const Group> g;
  GenSet gens;
};

PyGroup make_group(const std::string& shorthand) {
  auto g = Group::make(parse_group_shorthand(shorthand));
  return PyGroup{g, g->standard_gens()};
}

py::dict pattern_to_dict(const Group& g, const Pattern& p) {
  py::dict d;
  for (const auto& [x, v] : p.cells) d[py::str(g.format(x))] = p.states->name(v);
  return d;
}

Pattern pattern_from_dict(const Group& g, std::shared_ptr<const StateSet> states, const py::dict& d) {
  Pattern p;
  p.states = std::move(states);
  for (const auto& item : d) {
    GroupElement x = g.parse(py::cast<std::string>(item.first));
    State v = p.states->index_of(py::cast<std::string>(item.second));
    if (v < 0) throw UsageError("unknown state name: " + py::cast<std::string>(item.second));
    p.cells[x] = v;
  }
  return p;
}

struct PyField {
  PyGroup pg;
  std::shared_ptr<const VectorField> field;
};

struct PyFieldRule {
  PyGroup pg;
  std::shared_ptr<const FieldRule> rule;
};

struct PySlotRule {
  PyGroup pg;
  std::shared_ptr<const SlotRule> rule;
};

Pattern random_pattern(const LocalRule& rule, const std::vector<GroupElement>& dom, Rng& rng) {
  Pattern p;
  p.states = rule.states();
  for (const auto& x : dom)
    p.cells.emplace(x, static_cast<State>(rng.uniform(static_cast<std::uint64_t>(rule.states()->size()))));
  return p;
}

bool roundtrip(const LocalRule& lr, const Pattern& phi, const Pattern& psi) {
  Pattern image = evolve(lr, psi);
  for (const auto& [x, v] : phi.cells) {
    auto it = image.cells.find(x);
    if (it == image.cells.end() || it->second != v) return false;
  }
  return true;
}

template <class RuleHolder>
py::dict roundtrip_check(const RuleHolder& rh, int radius, int count, std::uint64_t seed) {
  const LocalRule& lr = rh.rule->rule();
  auto dom = ball(*rh.pg.g, rh.pg.gens, radius);
  Rng rng(seed);
  int passed = 0;
  for (int i = 0; i < count; ++i) {
    Pattern phi = random_pattern(lr, dom, rng);
    if (roundtrip(lr, phi, rh.rule->preimage(phi))) ++passed;
  }
  py::dict d;
  d["count"] = count;
  d["passed"] = passed;
  d["domain_size"] = dom.size();
  return d;
}

} // namespace

PYBIND11_MODULE(_edenca, m) {
  m.doc() = "cellular automata on groups: compressing vector fields, constructive preimages, "
            "MEP/GOE certificates, matching correspondences, GF(2) linear rules";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

  py::class_<PyGroup>(m, "Group")
      .def("__repr__",
           [](const PyGroup& pg) { return "<edenca.Group " + group_to_json(pg.g->spec()).dump() + ">"; })
      .def("multiply",
           [](const PyGroup& pg, const std::string& a, const std::string& b) {
             return pg.g->format(pg.g->multiply(pg.g->parse(a), pg.g->parse(b)));
           })
      .def("inverse",
           [](const PyGroup& pg, const std::string& a) { return pg.g->format(pg.g->inverse(pg.g->parse(a))); })
      .def("generators",
           [](const PyGroup& pg) {
             std::vector<std::string> out;
             for (const auto& e : pg.gens.elems) out.push_back(pg.g->format(e));
             return out;
           })
      .def("ball", [](const PyGroup& pg, int radius) {
        std::vector<std::string> out;
        for (const auto& x : ball(*pg.g, pg.gens, radius)) out.push_back(pg.g->format(x));
        return out;
      });
  m.def("make_group", &make_group, py::arg("shorthand"),
        "group from a shorthand such as F2, Z2 or C2*C2*C2");

  py::class_<PyField>(m, "TreeField")
      .def("f", [](const PyField& pf, const std::string& x) { return pf.pg.g->format(pf.field->apply(pf.pg.g->parse(x))); })
      .def("fiber",
           [](const PyField& pf, const std::string& x) {
             auto fib = pf.field->fiber(pf.pg.g->parse(x));
             return std::vector<std::string>{pf.pg.g->format(fib[0]), pf.pg.g->format(fib[1])};
           })
      .def("verify",
           [](const PyField& pf, int radius) {
             FieldReport rep = verify_field(*pf.field, radius);
             py::dict d;
             d["radius"] = rep.radius;
             d["interior_size"] = rep.interior_size;
             d["violations"] = rep.violations.size();
             return d;
           })
      .def("to_dot", [](const PyField& pf, int radius) { return field_to_dot(*pf.field, radius); });
  m.def("build_tree_field", [](const PyGroup& pg) {
    return PyField{pg, build_tree_field(pg.g, pg.gens)};
  });

  py::class_<PyFieldRule>(m, "FieldRule")
      .def_property_readonly("num_states",
                             [](const PyFieldRule& r) { return r.rule->rule().states()->size(); })
      .def_property_readonly("q0", [](const PyFieldRule& r) { return r.rule->rule().states()->name(r.rule->q0()); })
      .def("preimage",
           [](const PyFieldRule& r, const py::dict& phi) {
             Pattern p = pattern_from_dict(*r.pg.g, r.rule->rule().states(), phi);
             return pattern_to_dict(*r.pg.g, r.rule->preimage(p));
           })
      .def("evolve",
           [](const PyFieldRule& r, const py::dict& psi) {
             Pattern p = pattern_from_dict(*r.pg.g, r.rule->rule().states(), psi);
             return pattern_to_dict(*r.pg.g, evolve(r.rule->rule(), p));
           })
      .def("mep_witness",
           [](const PyFieldRule& r, const std::string& y, const py::dict& phi) {
             Pattern p = pattern_from_dict(*r.pg.g, r.rule->rule().states(), phi);
             auto [psi, psi2, Yc] = r.rule->mep_witness(r.pg.g->parse(y), p);
             bool cert = check_mep_certificate(r.rule->rule(), psi, psi2, Yc);
             std::vector<std::string> cells;
             for (const auto& x : Yc) cells.push_back(r.pg.g->format(x));
             return py::make_tuple(pattern_to_dict(*r.pg.g, psi), pattern_to_dict(*r.pg.g, psi2), cells, cert);
           })
      .def("roundtrip_check", &roundtrip_check<PyFieldRule>, py::arg("radius") = 2, py::arg("count") = 10,
           py::arg("seed") = 12345);
  m.def("build_field_rule", [](const PyGroup& pg) {
    return PyFieldRule{pg, build_field_rule(build_tree_field(pg.g, pg.gens))};
  });

  py::class_<PySlotRule>(m, "SlotRule")
      .def_property_readonly("num_states",
                             [](const PySlotRule& r) { return r.rule->rule().states()->size(); })
      .def_property_readonly("m", [](const PySlotRule& r) { return r.rule->m(); })
      .def_property_readonly("n", [](const PySlotRule& r) { return r.rule->n(); })
      .def("mep_witness",
           [](const PySlotRule& r, const std::string& y, const py::dict& phi) {
             Pattern p = pattern_from_dict(*r.pg.g, r.rule->rule().states(), phi);
             auto [psi, psi2, Yc] = r.rule->mep_witness(r.pg.g->parse(y), p);
             bool cert = check_mep_certificate(r.rule->rule(), psi, psi2, Yc);
             std::vector<std::string> cells;
             for (const auto& x : Yc) cells.push_back(r.pg.g->format(x));
             return py::make_tuple(pattern_to_dict(*r.pg.g, psi), pattern_to_dict(*r.pg.g, psi2), cells, cert);
           })
      .def("roundtrip_check", &roundtrip_check<PySlotRule>, py::arg("radius") = 2, py::arg("count") = 10,
           py::arg("seed") = 12345);
  m.def("build_slot_rule", [](const PyGroup& pg, int m_, int n_) {
    if (m_ != 2 * n_) throw UsageError("built-in slot rules double the tree field (m = 2n)");
    return PySlotRule{pg, build_slot_rule(double_field(build_tree_field(pg.g, pg.gens), n_))};
  }, py::arg("group"), py::arg("m") = 4, py::arg("n") = 2);

  m.def("build_correspondence",
        [](const PyGroup& pg, int m_, int n_, int radius) {
          FeasibilityReport rep = build_correspondence(*pg.g, pg.gens, m_, n_, radius);
          py::dict d;
          d["feasible"] = rep.feasible;
          d["deficiency"] = rep.deficiency;
          d["sources"] = rep.sources;
          d["hard_sinks"] = rep.hard_sinks;
          if (rep.feasible) {
            RecountReport rc = recount_witness(*pg.g, pg.gens, m_, n_, radius, rep.witness);
            d["recount_ok"] = rc.ok();
            d["witness_size"] = rep.witness.size();
          }
          return d;
        },
        py::arg("group"), py::arg("m"), py::arg("n"), py::arg("radius"));

  m.def("expansion_profile", [](const PyGroup& pg, int max_radius) {
    py::list out;
    for (const auto& e : expansion_profile(*pg.g, pg.gens, max_radius)) {
      py::dict d;
      d["radius"] = e.radius;
      d["m"] = e.best_m;
      d["n"] = e.best_n;
      out.append(d);
    }
    return out;
  });

  m.def("convolve", [](const PyGroup& pg, const std::string& a, const std::string& b) {
    return format_algebra(convolve(parse_algebra(pg.g, a), parse_algebra(pg.g, b)));
  });

  m.def("muller_kernel_scan", [](int max_k) {
    auto rule = muller_rule();
    py::list out;
    for (int k = 0; k <= max_k; ++k) {
      KernelScanReport rep = kernel_scan(*rule, k);
      py::dict d;
      d["k"] = rep.radius;
      d["rank"] = rep.rank;
      d["kernel_dim"] = rep.basis.size();
      d["empty"] = rep.empty();
      out.append(d);
    }
    return out;
  });

  m.def("muller_goe_confirmed", []() {
    auto rule = muller_rule();
    return is_goe_bruteforce(rule->rule(), goe_witness_linear(*rule));
  });

  m.def("moore_sweep", [](int max_width) {
    SearchBudget budget;
    budget.max_width = max_width;
    SweepTable table = moore_sweep(budget);
    py::list rows;
    for (const auto& r : table.rows) {
      py::dict d;
      d["rule_bits"] = r.rule_bits;
      d["mep"] = r.mep_status;
      d["mep_width"] = r.mep_width;
      d["goe"] = r.goe_status;
      d["goe_width"] = r.goe_width;
      d["consistent"] = r.consistent;
      rows.append(d);
    }
    py::dict out;
    out["rows"] = rows;
    out["all_consistent"] = table.all_consistent;
    return out;
  }, py::arg("max_width") = 4);
}
