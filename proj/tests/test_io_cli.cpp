#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "edenca/cli.hpp"
#include "edenca/io.hpp"
#include "edenca/moore.hpp"

using namespace edenca;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / ("edenca-test-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run_quiet(const std::vector<std::string>& args) {
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  int rc = run_cli(args);
  std::cout.rdbuf(old);
  return rc;
}

} // namespace

TEST_CASE("group json round-trip") {
  for (const auto& spec : {GroupSpec::free_group(2), GroupSpec::free_product_cyclic({2, 2, 2}),
                           GroupSpec::lattice(2)}) {
    Json j = group_to_json(spec);
    CHECK(group_from_json(j) == spec);
  }
  CHECK(parse_group_shorthand("F2") == GroupSpec::free_group(2));
  CHECK(parse_group_shorthand("Z2") == GroupSpec::lattice(2));
  CHECK(parse_group_shorthand("Z") == GroupSpec::lattice(1));
  CHECK(parse_group_shorthand("C2*C2*C2") == GroupSpec::free_product_cyclic({2, 2, 2}));
  CHECK(parse_group_shorthand("cyclic:2,2,2") == GroupSpec::free_product_cyclic({2, 2, 2}));
  CHECK_THROWS_AS(parse_group_shorthand("bogus"), UsageError);
}

TEST_CASE("pattern file round-trip: explicit states") {
  auto g = Group::make(GroupSpec::lattice(1));
  auto states = StateSet::explicit_set({"0", "1"});
  Pattern p;
  p.states = states;
  for (int i = -2; i <= 2; ++i) p.cells.emplace(g->generator_power(0, i), (i + 2) % 2);
  Json j = pattern_to_json(*g, p);
  Pattern q = pattern_from_json(*g, j);
  CHECK(p == q);
  // byte-level stability
  CHECK(dump_report(pattern_to_json(*g, q)) == dump_report(j));
}

TEST_CASE("pattern file round-trip: generated states need a context") {
  auto g = Group::make(GroupSpec::free_group(2));
  auto rule = build_field_rule(build_tree_field(g, g->standard_gens()));
  Pattern p;
  p.states = rule->rule().states();
  p.cells[g->identity()] = rule->encode(2, 1, 3);
  Json j = pattern_to_json(*g, p);
  CHECK_THROWS_AS(pattern_from_json(*g, j), UsageError);
  Pattern q = pattern_from_json(*g, j, rule->rule().states());
  CHECK(p == q);
}

TEST_CASE("witness json round-trip") {
  auto g = Group::make(GroupSpec::free_group(2));
  std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>> w = {
      {{g->parse("a"), g->identity()}, 1}, {{g->parse("b"), g->parse("b.a")}, 2}};
  CHECK(witness_from_json(*g, witness_to_json(*g, w)) == w);
}

TEST_CASE("cli: group ball basics and exit codes") {
  TempDir tmp;
  SUBCASE("radius 0 ball is [e]") {
    std::string out = tmp.path("ball.json");
    CHECK(run_quiet({"group", "ball", "--group", "F2", "--radius", "0", "--out", out}) == 0);
    Json rep = load_json_file(out);
    CHECK(rep["status"] == "ok");
    CHECK(rep["result"]["size"] == 1);
    CHECK(rep["result"]["elements"][0] == "e");
  }
  SUBCASE("unknown flags fail with exit 1") { CHECK(run_quiet({"group", "ball", "--bogus"}) == 1); }
  SUBCASE("missing group fails with exit 1") {
    CHECK(run_quiet({"group", "ball", "--radius", "2"}) == 1);
  }
  SUBCASE("bad group string fails with exit 1") {
    CHECK(run_quiet({"group", "ball", "--group", "nope", "--radius", "2"}) == 1);
  }
}

TEST_CASE("cli: field verify exits 0 with zero violations") {
  TempDir tmp;
  std::string out = tmp.path("verify.json");
  CHECK(run_quiet({"field", "verify", "--group", "F2", "--radius", "5", "--out", out}) == 0);
  Json rep = load_json_file(out);
  CHECK(rep["result"]["violations"].empty());
}

TEST_CASE("cli: corr build reports infeasibility with exit 2") {
  TempDir tmp;
  std::string out = tmp.path("corr.json");
  CHECK(run_quiet({"corr", "build", "--group", "Z2", "--m", "2", "--n", "1", "--radius", "3", "--out", out}) == 2);
  Json rep = load_json_file(out);
  CHECK(rep["status"] == "verification-failed");
  CHECK(rep["result"]["feasible"] == false);
  CHECK(rep["result"]["deficiency"].get<int>() > 0);
}

TEST_CASE("cli: moore preimage/mep-witness round through pattern files") {
  TempDir tmp;
  auto g = Group::make(GroupSpec::free_group(2));
  auto rule = build_field_rule(build_tree_field(g, g->standard_gens()));
  Pattern phi;
  phi.states = rule->rule().states();
  phi.cells[g->identity()] = rule->encode(0, 0, 0);
  std::string phi_file = tmp.path("phi.json");
  write_text_file(phi_file, dump_report(pattern_to_json(*g, phi)));

  std::string psi_file = tmp.path("psi.json");
  std::string rep_file = tmp.path("rep.json");
  CHECK(run_quiet({"moore", "preimage", "--group", "F2", "--phi", phi_file, "--out-pattern", psi_file, "--out",
                   rep_file}) == 0);
  Pattern psi = pattern_from_json(*g, load_json_file(psi_file), rule->rule().states());
  CHECK(psi.cells.size() == 5);
  CHECK(psi.at(g->parse("b")) == rule->encode(1, 0, 0));

  CHECK(run_quiet({"moore", "mep-witness", "--group", "F2", "--y", "e", "--phi", phi_file, "--out", rep_file}) == 0);
  Json rep = load_json_file(rep_file);
  CHECK(rep["result"]["certificate"] == true);
  CHECK(rep["result"]["flipped_cells"][0] == "a^-1");
  // the control flip must fail the certificate
  CHECK(run_quiet({"moore", "mep-witness", "--group", "F2", "--y", "e", "--phi", phi_file, "--control", "--out",
                   rep_file}) == 2);
}

TEST_CASE("cli: oracle budget exit code") {
  CHECK(run_quiet({"oracle", "goe", "--rule", "xor", "--width", "6", "--budget", "4"}) == 3);
}

TEST_CASE("cli: moore-gen runs on an imported correspondence witness") {
  TempDir tmp;
  std::string w_file = tmp.path("witness.json");
  REQUIRE(run_quiet({"corr", "build", "--group", "F2", "--m", "2", "--n", "1", "--radius", "3", "--out",
                     w_file}) == 0);
  Json phi;
  phi["states"] = Json{{"kind", "slot-rule-4-2-1"}, {"size", 32}};
  phi["cells"] = Json::array({Json::array({"e", "((a,1,b))"})});
  std::string phi_file = tmp.path("phi.json");
  write_text_file(phi_file, dump_report(phi));
  std::string rep_file = tmp.path("rep.json");
  CHECK(run_quiet({"moore-gen", "preimage", "--group", "F2", "--m", "2", "--n", "1", "--corr", w_file, "--phi",
                   phi_file, "--out", rep_file}) == 0);
  CHECK(load_json_file(rep_file)["result"]["verified"] == true);
}

TEST_CASE("cli: reports are byte-deterministic across runs") {
  TempDir tmp;
  std::vector<std::vector<std::string>> commands = {
      {"group", "ball", "--group", "F2", "--radius", "3"},
      {"field", "verify", "--group", "C2*C2*C2", "--radius", "4"},
      {"corr", "build", "--group", "F2", "--m", "2", "--n", "1", "--radius", "2"},
      {"moore", "roundtrip", "--group", "F2", "--radius", "1", "--count", "3", "--seed", "7"},
      {"linca", "kernel-scan", "--preset", "muller", "--max-k", "1"},
      {"oracle", "sweep", "--max-width", "2"},
  };
  for (size_t i = 0; i < commands.size(); ++i) {
    std::string out1 = tmp.path("r1_" + std::to_string(i) + ".json");
    std::string out2 = tmp.path("r2_" + std::to_string(i) + ".json");
    auto cmd1 = commands[i];
    cmd1.push_back("--out");
    cmd1.push_back(out1);
    auto cmd2 = commands[i];
    cmd2.push_back("--out");
    cmd2.push_back(out2);
    run_quiet(cmd1);
    run_quiet(cmd2);
    CHECK(read_text_file(out1) == read_text_file(out2));
  }
}

TEST_CASE("cli: config file drives a run and is echoed in the report") {
  TempDir tmp;
  Json cfg;
  cfg["group"] = group_to_json(GroupSpec::free_group(2));
  cfg["params"] = Json{{"radius", 2}};
  std::string cfg_file = tmp.path("cfg.json");
  write_text_file(cfg_file, dump_report(cfg));
  std::string out = tmp.path("rep.json");
  CHECK(run_quiet({"group", "ball", "--config", cfg_file, "--out", out}) == 0);
  Json rep = load_json_file(out);
  CHECK(rep["result"]["size"] == 17);
  CHECK(rep["config"]["group"] == cfg["group"]);
  CHECK(rep["config"]["params"]["radius"] == 2);
  // effective config round-trips through serialization
  Json echoed = rep["config"];
  CHECK(Json::parse(echoed.dump()) == echoed);
}

TEST_CASE("cli: dot export writes a graph file") {
  TempDir tmp;
  std::string dot = tmp.path("field.dot");
  CHECK(run_quiet({"field", "export-dot", "--group", "F2", "--radius", "2", "--dot", dot}) == 0);
  std::string content = read_text_file(dot);
  CHECK(content.find("digraph field") != std::string::npos);
  CHECK(content.find("\"a\" -> \"e\";") != std::string::npos);
}
