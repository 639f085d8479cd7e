#include "edenca/cli.hpp"

#include <ctime>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "edenca/io.hpp"
#include "edenca/linear.hpp"
#include "edenca/moore.hpp"
#include "edenca/oracle.hpp"
#include "edenca/rng.hpp"

namespace edenca {

namespace {

struct CommonOpts {
  std::string config_path, group_str, gens_csv, out_path;
  bool meta = false;
  std::uint64_t seed = 12345;
  int workers = 1;
  std::uint64_t budget = 100'000'000;

  CLI::Option* o_group = nullptr;
  CLI::Option* o_gens = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_workers = nullptr;
  CLI::Option* o_budget = nullptr;

  void attach(CLI::App* app, bool with_group = true) {
    app->add_option("--config", config_path, "JSON config document; flags override its fields");
    if (with_group) {
      o_group = app->add_option(
          "--group", group_str, "group shorthand (F2, Z, Z2, C2*C2*C2, free:r, cyclic:2,2,2, lattice:d)");
      o_gens = app->add_option("--gens", gens_csv, "comma-separated generating set (default: standard symmetric)");
    }
    app->add_option("--out", out_path, "write the JSON report here (default: print to stdout)");
    app->add_flag("--meta", meta, "also write a <out>.meta.json sidecar with a timestamp");
    o_seed = app->add_option("--seed", seed, "seed for randomized runs");
    o_workers = app->add_option("--workers", workers, "worker threads for enumerations");
    o_budget = app->add_option("--budget", budget, "assignment/size budget");
  }
};

// Collects only the parameters that were explicitly given on the command
// line; config-file parameters survive unless overridden.
struct ParamSet {
  Json given = Json::object();
  template <class T>
  void maybe(const char* key, CLI::Option* opt, const T& val) {
    if (opt && opt->count() > 0) given[key] = val;
  }
};

struct Ctx {
  Json cfg;
  std::shared_ptr<const Group> group;
  GenSet gens;
  std::uint64_t seed = 0;
  int workers = 1;
  std::uint64_t budget = 0;
};

void resolve_group(Ctx& ctx) {
  if (ctx.group) return;
  if (!ctx.cfg.contains("group")) throw UsageError("no group given (use --group or a config file)");
  ctx.group = Group::make(group_from_json(ctx.cfg["group"]));
  ctx.cfg["group"] = group_to_json(ctx.group->spec());
  if (ctx.cfg.contains("gens"))
    ctx.gens = gens_from_json(*ctx.group, ctx.cfg["gens"]);
  else
    ctx.gens = ctx.group->standard_gens();
  ctx.cfg["gens"] = gens_to_json(*ctx.group, ctx.gens);
}

Ctx make_ctx(const CommonOpts& c, const ParamSet& params, bool needs_group = true) {
  Ctx ctx;
  if (!c.config_path.empty()) ctx.cfg = load_json_file(c.config_path);
  if (!ctx.cfg.is_object() && !ctx.cfg.is_null()) throw UsageError("config document must be a JSON object");

  if (c.o_group && c.o_group->count() > 0) ctx.cfg["group"] = group_to_json(parse_group_shorthand(c.group_str));
  if (c.o_gens && c.o_gens->count() > 0) {
    Json arr = Json::array();
    std::stringstream ss(c.gens_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) arr.push_back(tok);
    ctx.cfg["gens"] = arr;
  }
  if (needs_group) resolve_group(ctx);

  if (c.o_seed->count() > 0 || !ctx.cfg.contains("seed")) ctx.cfg["seed"] = c.seed;
  if (c.o_workers->count() > 0 || !ctx.cfg.contains("workers")) ctx.cfg["workers"] = c.workers;
  if (c.o_budget->count() > 0 || !ctx.cfg.contains("budget")) ctx.cfg["budget"] = c.budget;
  ctx.seed = ctx.cfg["seed"].get<std::uint64_t>();
  ctx.workers = ctx.cfg["workers"].get<int>();
  ctx.budget = ctx.cfg["budget"].get<std::uint64_t>();

  if (!ctx.cfg.contains("params")) ctx.cfg["params"] = Json::object();
  for (const auto& [k, v] : params.given.items()) ctx.cfg["params"][k] = v;
  return ctx;
}

int finish(const std::string& command, const Ctx& ctx, const CommonOpts& c, Json result,
           const std::string& status) {
  Json report;
  report["command"] = command;
  report["config"] = ctx.cfg;
  report["result"] = std::move(result);
  report["status"] = status;
  std::string bytes = dump_report(report);
  if (!c.out_path.empty()) {
    write_text_file(c.out_path, bytes);
    std::cout << command << ": " << status << " (report: " << c.out_path << ")\n";
    if (c.meta) {
      Json meta;
      meta["written_at_epoch_seconds"] = static_cast<std::int64_t>(std::time(nullptr));
      meta["tool"] = "edenca";
      write_text_file(c.out_path + ".meta.json", dump_report(meta));
    }
  } else {
    std::cout << bytes;
  }
  if (status == "ok") return 0;
  if (status == "budget") return 3;
  return 2;
}

int param_int(const Ctx& ctx, const char* key, int def) {
  const Json& p = ctx.cfg["params"];
  return p.contains(key) ? p[key].get<int>() : def;
}

bool param_bool(const Ctx& ctx, const char* key, bool def) {
  const Json& p = ctx.cfg["params"];
  return p.contains(key) ? p[key].get<bool>() : def;
}

std::string param_str(const Ctx& ctx, const char* key, const std::string& def) {
  const Json& p = ctx.cfg["params"];
  return p.contains(key) ? p[key].get<std::string>() : def;
}

Pattern random_pattern(const LocalRule& rule, const std::vector<GroupElement>& domain, Rng& rng) {
  Pattern p;
  p.states = rule.states();
  for (const auto& x : domain)
    p.cells.emplace(x, static_cast<State>(rng.uniform(static_cast<std::uint64_t>(rule.states()->size()))));
  return p;
}

bool roundtrip_exact(const LocalRule& rule, const Pattern& phi, const Pattern& psi) {
  Pattern image = evolve(rule, psi);
  for (const auto& [x, v] : phi.cells) {
    auto it = image.cells.find(x);
    if (it == image.cells.end() || it->second != v) return false;
  }
  return true;
}

std::shared_ptr<const LinearRule> linear_rule_from(Ctx& ctx, const std::string& preset,
                                                   const std::string& alpha_s, const std::string& beta_s) {
  if (preset == "muller") return muller_rule();
  if (!preset.empty()) throw UsageError("unknown preset: " + preset);
  resolve_group(ctx);
  if (alpha_s.empty() && beta_s.empty()) throw UsageError("give --preset or --alpha/--beta");
  AlgebraElement a = alpha_s.empty() ? algebra_zero(ctx.group) : parse_algebra(ctx.group, alpha_s);
  AlgebraElement b = beta_s.empty() ? algebra_zero(ctx.group) : parse_algebra(ctx.group, beta_s);
  return build_linear_rule(std::move(a), std::move(b));
}

std::shared_ptr<const LocalRule> oracle_rule_from(int rule_bits, const std::string& name) {
  if (!name.empty()) {
    if (name == "xor") return z_rule_from_bits(6);
    if (name == "identity") return z_rule_from_bits(10);
    if (name == "constant0") return z_rule_from_bits(0);
    if (name == "constant1") return z_rule_from_bits(15);
    if (name == "majority") return z_majority_rule();
    throw UsageError("unknown rule name: " + name);
  }
  return z_rule_from_bits(rule_bits);
}

Json field_report_json(const Group& g, const FieldReport& rep) {
  Json j;
  j["radius"] = rep.radius;
  j["interior_size"] = rep.interior_size;
  Json v = Json::array();
  for (const auto& viol : rep.violations)
    v.push_back(Json{{"element", g.format(viol.element)}, {"kind", viol.kind}, {"detail", viol.detail}});
  j["violations"] = v;
  return j;
}

Json feas_report_json(const Group& g, const FeasibilityReport& rep) {
  Json j;
  j["radius"] = rep.radius;
  j["m"] = rep.m;
  j["n"] = rep.n;
  j["feasible"] = rep.feasible;
  j["interior_exact"] = rep.interior_exact;
  j["deficiency"] = rep.deficiency;
  j["sources"] = rep.sources;
  j["hard_sinks"] = rep.hard_sinks;
  if (rep.feasible) j["witness"] = witness_to_json(g, rep.witness);
  return j;
}

std::shared_ptr<const Correspondence> corr_for_gen(const Ctx& ctx, int m, int n, const std::string& corr_file) {
  if (!corr_file.empty()) {
    Json j = load_json_file(corr_file);
    const Json& w = j.contains("result") && j["result"].contains("witness") ? j["result"]["witness"] : j;
    return Correspondence::from_table(ctx.group, ctx.gens, m, n, witness_from_json(*ctx.group, w));
  }
  if (m != 2 * n)
    throw UsageError("built-in correspondences double the tree field (m = 2n); import others with --corr");
  auto field = build_tree_field(ctx.group, ctx.gens);
  return double_field(field, n);
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"cellular automata on groups: compressing fields, preimages, MEP/GOE certificates"};
  app.require_subcommand(1);
  int ret = 0;

  // ------------------------------------------------------------ group
  auto* grp = app.add_subcommand("group", "word arithmetic and Cayley balls");
  grp->require_subcommand(1);
  {
    auto* cmd = grp->add_subcommand("ball", "enumerate a ball in the Cayley graph");
    auto opts = std::make_shared<CommonOpts>();
    auto radius = std::make_shared<int>(2);
    opts->attach(cmd);
    auto o_radius = cmd->add_option("--radius", *radius, "ball radius");
    cmd->callback([opts, radius, o_radius, &ret]() {
      ParamSet ps;
      ps.maybe("radius", o_radius, *radius);
      Ctx ctx = make_ctx(*opts, ps);
      auto B = ball(*ctx.group, ctx.gens, param_int(ctx, "radius", 2));
      Json result;
      result["size"] = B.size();
      Json elems = Json::array();
      for (const auto& x : B) elems.push_back(ctx.group->format(x));
      result["elements"] = elems;
      ret = finish("group ball", ctx, *opts, result, "ok");
    });
  }

  // ------------------------------------------------------------ field
  auto* fld = app.add_subcommand("field", "2:1 compressing vector field on Cayley trees");
  fld->require_subcommand(1);
  {
    auto* cmd = fld->add_subcommand("build", "construct the field and report its summary");
    auto opts = std::make_shared<CommonOpts>();
    opts->attach(cmd);
    cmd->callback([opts, &ret]() {
      Ctx ctx = make_ctx(*opts, ParamSet{});
      auto field = build_tree_field(ctx.group, ctx.gens);
      Json result;
      result["digest"] = field->digest();
      result["tree_degree"] = ctx.group->tree_degree();
      result["f_of_identity"] = ctx.group->format(field->apply(ctx.group->identity()));
      ret = finish("field build", ctx, *opts, result, "ok");
    });
  }
  {
    auto* cmd = fld->add_subcommand("verify", "check displacement and fiber size on a ball");
    auto opts = std::make_shared<CommonOpts>();
    auto radius = std::make_shared<int>(8);
    opts->attach(cmd);
    auto o_radius = cmd->add_option("--radius", *radius, "verification radius");
    cmd->callback([opts, radius, o_radius, &ret]() {
      ParamSet ps;
      ps.maybe("radius", o_radius, *radius);
      Ctx ctx = make_ctx(*opts, ps);
      auto field = build_tree_field(ctx.group, ctx.gens);
      FieldReport rep = verify_field(*field, param_int(ctx, "radius", 8));
      Json result = field_report_json(*ctx.group, rep);
      result["digest"] = field->digest();
      ret = finish("field verify", ctx, *opts, result, rep.ok() ? "ok" : "verification-failed");
    });
  }
  {
    auto* cmd = fld->add_subcommand("export-dot", "write the field on a ball as a DOT graph");
    auto opts = std::make_shared<CommonOpts>();
    auto radius = std::make_shared<int>(3);
    auto dot_path = std::make_shared<std::string>("field.dot");
    opts->attach(cmd);
    auto o_radius = cmd->add_option("--radius", *radius, "ball radius");
    auto o_dot = cmd->add_option("--dot", *dot_path, "output DOT file");
    cmd->callback([opts, radius, o_radius, dot_path, o_dot, &ret]() {
      ParamSet ps;
      ps.maybe("radius", o_radius, *radius);
      ps.maybe("dot", o_dot, *dot_path);
      Ctx ctx = make_ctx(*opts, ps);
      auto field = build_tree_field(ctx.group, ctx.gens);
      int r = param_int(ctx, "radius", 3);
      std::string path = param_str(ctx, "dot", "field.dot");
      write_text_file(path, field_to_dot(*field, r));
      Json result;
      result["dot_file"] = path;
      result["vertices"] = ball(*ctx.group, ctx.gens, r).size();
      ret = finish("field export-dot", ctx, *opts, result, "ok");
    });
  }

  // ------------------------------------------------------------ corr
  auto* crr = app.add_subcommand("corr", "m:n compressing correspondences via matching");
  crr->require_subcommand(1);
  {
    auto* cmd = crr->add_subcommand("build", "solve the transportation instance on a ball");
    auto opts = std::make_shared<CommonOpts>();
    auto m = std::make_shared<int>(2);
    auto n = std::make_shared<int>(1);
    auto radius = std::make_shared<int>(4);
    opts->attach(cmd);
    auto o_m = cmd->add_option("--m", *m, "units received by each interior sink");
    auto o_n = cmd->add_option("--n", *n, "units sent by each source");
    auto o_radius = cmd->add_option("--radius", *radius, "source ball radius");
    cmd->callback([opts, m, o_m, n, o_n, radius, o_radius, &ret]() {
      ParamSet ps;
      ps.maybe("m", o_m, *m);
      ps.maybe("n", o_n, *n);
      ps.maybe("radius", o_radius, *radius);
      Ctx ctx = make_ctx(*opts, ps);
      int mm = param_int(ctx, "m", 2), nn = param_int(ctx, "n", 1), r = param_int(ctx, "radius", 4);
      FeasibilityReport rep = build_correspondence(*ctx.group, ctx.gens, mm, nn, r, ctx.budget);
      Json result = feas_report_json(*ctx.group, rep);
      std::string status = "verification-failed";
      if (rep.feasible) {
        RecountReport rc = recount_witness(*ctx.group, ctx.gens, mm, nn, r, rep.witness);
        result["recount_violations"] = rc.violations;
        status = rc.ok() ? "ok" : "verification-failed";
      }
      ret = finish("corr build", ctx, *opts, result, status);
    });
  }
  {
    auto* cmd = crr->add_subcommand("profile", "best feasible m/n per radius");
    auto opts = std::make_shared<CommonOpts>();
    auto max_radius = std::make_shared<int>(4);
    opts->attach(cmd);
    auto o_max = cmd->add_option("--max-radius", *max_radius, "largest radius probed");
    cmd->callback([opts, max_radius, o_max, &ret]() {
      ParamSet ps;
      ps.maybe("max_radius", o_max, *max_radius);
      Ctx ctx = make_ctx(*opts, ps);
      auto profile = expansion_profile(*ctx.group, ctx.gens, param_int(ctx, "max_radius", 4), 4, 4, ctx.budget);
      Json entries = Json::array();
      for (const auto& e : profile)
        entries.push_back(Json{{"radius", e.radius}, {"m", e.best_m}, {"n", e.best_n}});
      ret = finish("corr profile", ctx, *opts, Json{{"entries", entries}}, "ok");
    });
  }

  // ------------------------------------------------------------ moore / moore-gen
  auto add_moore = [&](CLI::App* parent, bool general) {
    const std::string base = parent->get_name();
    auto get_slot_rule = [general](const Ctx& ctx, const std::string& corr_file) {
      int m = param_int(ctx, "m", 4);
      int n = param_int(ctx, "n", 2);
      (void)general;
      return build_slot_rule(corr_for_gen(ctx, m, n, corr_file));
    };

    struct MnOpts {
      std::shared_ptr<int> m = std::make_shared<int>(4);
      std::shared_ptr<int> n = std::make_shared<int>(2);
      std::shared_ptr<std::string> corr_file = std::make_shared<std::string>();
      CLI::Option* o_m = nullptr;
      CLI::Option* o_n = nullptr;
    };
    auto attach_mn = [general](CLI::App* cmd, MnOpts& mn) {
      if (general) {
        mn.o_m = cmd->add_option("--m", *mn.m, "column sum of the correspondence");
        mn.o_n = cmd->add_option("--n", *mn.n, "row sum of the correspondence");
        cmd->add_option("--corr", *mn.corr_file, "import a correspondence witness file");
      }
    };
    auto mn_params = [](ParamSet& ps, const MnOpts& mn) {
      ps.maybe("m", mn.o_m, *mn.m);
      ps.maybe("n", mn.o_n, *mn.n);
    };

    {
      auto* cmd = parent->add_subcommand("build", "synthesize the automaton and report its shape");
      auto opts = std::make_shared<CommonOpts>();
      auto mn = std::make_shared<MnOpts>();
      opts->attach(cmd);
      attach_mn(cmd, *mn);
      cmd->callback([opts, mn, mn_params, get_slot_rule, base, general, &ret]() {
        ParamSet ps;
        mn_params(ps, *mn);
        Ctx ctx = make_ctx(*opts, ps);
        Json result;
        if (general) {
          auto rule = get_slot_rule(ctx, *mn->corr_file);
          result["m"] = rule->m();
          result["n"] = rule->n();
          result["q_size"] = rule->rule().states()->size();
          result["q0"] = rule->rule().states()->name(rule->q0());
          result["corr_digest"] = rule->corr().digest();
        } else {
          auto rule = build_field_rule(build_tree_field(ctx.group, ctx.gens));
          result["m"] = 2;
          result["n"] = 1;
          result["q_size"] = rule->rule().states()->size();
          result["q0"] = rule->rule().states()->name(rule->q0());
          result["field_digest"] = rule->field().digest();
        }
        result["s_size"] = ctx.gens.size();
        ret = finish(base + " build", ctx, *opts, result, "ok");
      });
    }
    {
      auto* cmd = parent->add_subcommand("preimage", "solve evolve(psi)|Y = phi constructively");
      auto opts = std::make_shared<CommonOpts>();
      auto mn = std::make_shared<MnOpts>();
      auto phi_file = std::make_shared<std::string>();
      auto out_pattern = std::make_shared<std::string>();
      opts->attach(cmd);
      attach_mn(cmd, *mn);
      cmd->add_option("--phi", *phi_file, "target pattern file")->required();
      cmd->add_option("--out-pattern", *out_pattern, "write the preimage pattern here");
      cmd->callback([opts, mn, mn_params, phi_file, out_pattern, get_slot_rule, base, general, &ret]() {
        ParamSet ps;
        mn_params(ps, *mn);
        Ctx ctx = make_ctx(*opts, ps);
        Pattern phi, psi;
        const LocalRule* lr = nullptr;
        std::shared_ptr<const FieldRule> frule;
        std::shared_ptr<const SlotRule> srule;
        if (general) {
          srule = get_slot_rule(ctx, *mn->corr_file);
          lr = &srule->rule();
          phi = pattern_from_json(*ctx.group, load_json_file(*phi_file), srule->rule().states());
          psi = srule->preimage(phi);
        } else {
          frule = build_field_rule(build_tree_field(ctx.group, ctx.gens));
          lr = &frule->rule();
          phi = pattern_from_json(*ctx.group, load_json_file(*phi_file), frule->rule().states());
          psi = frule->preimage(phi);
        }
        bool verified = roundtrip_exact(*lr, phi, psi);
        if (!out_pattern->empty()) write_text_file(*out_pattern, dump_report(pattern_to_json(*ctx.group, psi)));
        Json result;
        result["phi_cells"] = phi.cells.size();
        result["psi_cells"] = psi.cells.size();
        result["verified"] = verified;
        ret = finish(base + " preimage", ctx, *opts, result, verified ? "ok" : "verification-failed");
      });
    }
    {
      auto* cmd = parent->add_subcommand("mep-witness", "one-point mutually-erasable witness");
      auto opts = std::make_shared<CommonOpts>();
      auto mn = std::make_shared<MnOpts>();
      auto y_str = std::make_shared<std::string>("e");
      auto radius = std::make_shared<int>(1);
      auto phi_file = std::make_shared<std::string>();
      auto control = std::make_shared<bool>(false);
      auto out_psi = std::make_shared<std::string>();
      auto out_psi2 = std::make_shared<std::string>();
      opts->attach(cmd);
      attach_mn(cmd, *mn);
      auto o_y = cmd->add_option("--y", *y_str, "witness site (element string)");
      auto o_radius = cmd->add_option("--radius", *radius, "random phi domain ball radius (when --phi absent)");
      cmd->add_option("--phi", *phi_file, "pattern file for phi (default: seeded random)");
      auto o_control = cmd->add_flag("--control", *control, "flip the read bit instead (certificate must fail)");
      cmd->add_option("--out-psi", *out_psi, "write psi here");
      cmd->add_option("--out-psi2", *out_psi2, "write psi' here");
      cmd->callback([opts, mn, mn_params, y_str, o_y, radius, o_radius, phi_file, control, o_control,
                     out_psi, out_psi2, get_slot_rule, base, general, &ret]() {
        ParamSet ps;
        mn_params(ps, *mn);
        ps.maybe("y", o_y, *y_str);
        ps.maybe("radius", o_radius, *radius);
        ps.maybe("control", o_control, *control);
        Ctx ctx = make_ctx(*opts, ps);
        GroupElement y = ctx.group->parse(param_str(ctx, "y", "e"));

        const LocalRule* lr = nullptr;
        std::shared_ptr<const FieldRule> frule;
        std::shared_ptr<const SlotRule> srule;
        if (general) {
          srule = get_slot_rule(ctx, *mn->corr_file);
          lr = &srule->rule();
        } else {
          frule = build_field_rule(build_tree_field(ctx.group, ctx.gens));
          lr = &frule->rule();
        }

        Pattern phi;
        if (!phi_file->empty()) {
          phi = pattern_from_json(*ctx.group, load_json_file(*phi_file), lr->states());
        } else {
          Rng rng(ctx.seed);
          std::vector<GroupElement> dom = ball(*ctx.group, ctx.gens, param_int(ctx, "radius", 1));
          if (!std::binary_search(dom.begin(), dom.end(), y)) dom.push_back(y);
          phi = random_pattern(*lr, dom, rng);
        }
        bool want_control = param_bool(ctx, "control", false);
        std::tuple<Pattern, Pattern, std::vector<GroupElement>> wit =
            general ? (want_control ? srule->mep_witness_control(y, phi) : srule->mep_witness(y, phi))
                    : (want_control ? frule->mep_witness_control(y, phi) : frule->mep_witness(y, phi));
        auto& [psi, psi2, Yc] = wit;
        bool cert = check_mep_certificate(*lr, psi, psi2, Yc);
        int differing = 0;
        for (const auto& [x, v] : psi.cells)
          if (psi2.at(x) != v) ++differing;
        if (!out_psi->empty()) write_text_file(*out_psi, dump_report(pattern_to_json(*ctx.group, psi)));
        if (!out_psi2->empty()) write_text_file(*out_psi2, dump_report(pattern_to_json(*ctx.group, psi2)));
        Json result;
        result["y"] = ctx.group->format(y);
        Json yc = Json::array();
        for (const auto& x : Yc) yc.push_back(ctx.group->format(x));
        result["flipped_cells"] = yc;
        result["differing_cells"] = differing;
        result["certificate"] = cert;
        ret = finish(base + " mep-witness", ctx, *opts, result, cert ? "ok" : "verification-failed");
      });
    }
    {
      auto* cmd = parent->add_subcommand("roundtrip", "seeded random preimage round-trips");
      auto opts = std::make_shared<CommonOpts>();
      auto mn = std::make_shared<MnOpts>();
      auto radius = std::make_shared<int>(general ? 3 : 4);
      auto count = std::make_shared<int>(general ? 50 : 100);
      opts->attach(cmd);
      attach_mn(cmd, *mn);
      auto o_radius = cmd->add_option("--radius", *radius, "pattern domain ball radius");
      auto o_count = cmd->add_option("--count", *count, "number of random patterns");
      cmd->callback([opts, mn, mn_params, radius, o_radius, count, o_count, get_slot_rule, base, general, &ret]() {
        ParamSet ps;
        mn_params(ps, *mn);
        ps.maybe("radius", o_radius, *radius);
        ps.maybe("count", o_count, *count);
        Ctx ctx = make_ctx(*opts, ps);

        const LocalRule* lr = nullptr;
        std::shared_ptr<const FieldRule> frule;
        std::shared_ptr<const SlotRule> srule;
        if (general) {
          srule = get_slot_rule(ctx, *mn->corr_file);
          lr = &srule->rule();
        } else {
          frule = build_field_rule(build_tree_field(ctx.group, ctx.gens));
          lr = &frule->rule();
        }
        std::vector<GroupElement> dom = ball(*ctx.group, ctx.gens, param_int(ctx, "radius", general ? 3 : 4));
        Rng rng(ctx.seed);
        int total = param_int(ctx, "count", general ? 50 : 100), passed = 0;
        for (int i = 0; i < total; ++i) {
          Pattern phi = random_pattern(*lr, dom, rng);
          Pattern psi = general ? srule->preimage(phi) : frule->preimage(phi);
          if (roundtrip_exact(*lr, phi, psi)) ++passed;
        }
        Json result;
        result["count"] = total;
        result["passed"] = passed;
        result["domain_size"] = dom.size();
        ret = finish(base + " roundtrip", ctx, *opts, result, passed == total ? "ok" : "verification-failed");
      });
    }
  };
  auto* moore = app.add_subcommand("moore", "automaton from the 2:1 field: no GOE, one-point MEP");
  moore->require_subcommand(1);
  add_moore(moore, false);
  auto* moore_gen = app.add_subcommand("moore-gen", "generalized m:n slot automaton");
  moore_gen->require_subcommand(1);
  add_moore(moore_gen, true);

  // ------------------------------------------------------------ linca
  auto* lin = app.add_subcommand("linca", "linear automata over GF(2)");
  lin->require_subcommand(1);
  {
    auto* cmd = lin->add_subcommand("kernel-scan", "finitely supported kernel basis per radius");
    auto opts = std::make_shared<CommonOpts>();
    auto preset = std::make_shared<std::string>();
    auto alpha_s = std::make_shared<std::string>();
    auto beta_s = std::make_shared<std::string>();
    auto max_k = std::make_shared<int>(3);
    opts->attach(cmd);
    auto o_preset = cmd->add_option("--preset", *preset, "rule preset: muller");
    auto o_alpha = cmd->add_option("--alpha", *alpha_s, "alpha as 'x + y.z' style expression");
    auto o_beta = cmd->add_option("--beta", *beta_s, "beta expression");
    auto o_max_k = cmd->add_option("--max-k", *max_k, "scan radii 0..max-k");
    auto basis_prefix = std::make_shared<std::string>();
    cmd->add_option("--out-basis", *basis_prefix, "write kernel basis elements as pattern files <prefix>k<k>_<i>.json");
    cmd->callback([opts, preset, o_preset, alpha_s, o_alpha, beta_s, o_beta, max_k, o_max_k, basis_prefix, &ret]() {
      ParamSet ps;
      ps.maybe("preset", o_preset, *preset);
      ps.maybe("alpha", o_alpha, *alpha_s);
      ps.maybe("beta", o_beta, *beta_s);
      ps.maybe("max_k", o_max_k, *max_k);
      Ctx ctx = make_ctx(*opts, ps, /*needs_group=*/false);
      auto rule = linear_rule_from(ctx, param_str(ctx, "preset", ""), param_str(ctx, "alpha", ""),
                                   param_str(ctx, "beta", ""));
      const Group& g = rule->group();
      Json scans = Json::array();
      for (int k = 0; k <= param_int(ctx, "max_k", 3); ++k) {
        KernelScanReport rep = kernel_scan(*rule, k, ctx.budget);
        Json basis = Json::array();
        for (std::size_t i = 0; i < rep.basis.size(); ++i) {
          const auto& [gamma, delta] = rep.basis[i];
          basis.push_back(Json{{"gamma", format_algebra(gamma)}, {"delta", format_algebra(delta)}});
          if (!basis_prefix->empty()) {
            Pattern p;
            p.states = rule->rule().states();
            for (const auto& x : gamma.support) p.cells[x] = LinearRule::encode(1, 0);
            for (const auto& x : delta.support) {
              auto it = p.cells.find(x);
              p.cells[x] = (it == p.cells.end() ? 0 : it->second) | LinearRule::encode(0, 1);
            }
            write_text_file(*basis_prefix + "k" + std::to_string(k) + "_" + std::to_string(i) + ".json",
                            dump_report(pattern_to_json(g, p)));
          }
        }
        scans.push_back(Json{{"k", rep.radius},
                             {"rows", rep.matrix_rows},
                             {"cols", rep.matrix_cols},
                             {"rank", rep.rank},
                             {"kernel_dim", rep.basis.size()},
                             {"empty", rep.empty()},
                             {"basis", basis}});
      }
      Json result;
      result["alpha"] = format_algebra(rule->alpha());
      result["beta"] = format_algebra(rule->beta());
      result["S"] = gens_to_json(g, rule->S());
      result["scans"] = scans;
      ret = finish("linca kernel-scan", ctx, *opts, result, "ok");
    });
  }
  {
    auto* cmd = lin->add_subcommand("goe-witness", "orphan pattern with brute-force confirmation");
    auto opts = std::make_shared<CommonOpts>();
    auto preset = std::make_shared<std::string>("muller");
    auto alpha_s = std::make_shared<std::string>();
    auto beta_s = std::make_shared<std::string>();
    auto out_pattern = std::make_shared<std::string>();
    opts->attach(cmd);
    auto o_preset = cmd->add_option("--preset", *preset, "rule preset: muller (default)");
    auto o_alpha = cmd->add_option("--alpha", *alpha_s, "alpha expression");
    auto o_beta = cmd->add_option("--beta", *beta_s, "beta expression");
    cmd->add_option("--out-pattern", *out_pattern, "write the witness pattern here");
    cmd->callback([opts, preset, o_preset, alpha_s, o_alpha, beta_s, o_beta, out_pattern, &ret]() {
      ParamSet ps;
      ps.maybe("preset", o_preset, *preset);
      ps.maybe("alpha", o_alpha, *alpha_s);
      ps.maybe("beta", o_beta, *beta_s);
      Ctx ctx = make_ctx(*opts, ps, /*needs_group=*/false);
      // explicit coefficients replace the default preset
      std::string alpha_eff = param_str(ctx, "alpha", "");
      std::string beta_eff = param_str(ctx, "beta", "");
      std::string preset_eff =
          alpha_eff.empty() && beta_eff.empty() ? param_str(ctx, "preset", "muller") : param_str(ctx, "preset", "");
      auto rule = linear_rule_from(ctx, preset_eff, alpha_eff, beta_eff);
      Pattern w = goe_witness_linear(*rule);
      bool confirmed = is_goe_bruteforce(rule->rule(), w, ctx.budget, ctx.workers);
      if (!out_pattern->empty())
        write_text_file(*out_pattern, dump_report(pattern_to_json(rule->group(), w)));
      Json result;
      result["witness"] = pattern_to_json(rule->group(), w);
      result["confirmed_goe"] = confirmed;
      ret = finish("linca goe-witness", ctx, *opts, result, confirmed ? "ok" : "verification-failed");
    });
  }

  // ------------------------------------------------------------ oracle
  auto* orc = app.add_subcommand("oracle", "exhaustive desk-scale GOE/MEP searches");
  orc->require_subcommand(1);
  auto add_oracle_search = [&](const char* name, bool goe) {
    auto* cmd = orc->add_subcommand(name, goe ? "first orphan pattern on a width" : "first MEP pair on a width");
    auto opts = std::make_shared<CommonOpts>();
    auto rule_bits = std::make_shared<int>(0);
    auto rule_name = std::make_shared<std::string>();
    auto width = std::make_shared<int>(1);
    opts->attach(cmd, /*with_group=*/false);
    auto o_bits = cmd->add_option("--rule-bits", *rule_bits, "two-state rule on Z with S={0,1}, truth table bits 0..15");
    auto o_name = cmd->add_option("--rule", *rule_name, "named rule: xor, identity, constant0, constant1, majority");
    auto o_width = cmd->add_option("--width", *width, "|Y|, sites 0..width-1");
    cmd->callback([opts, rule_bits, o_bits, rule_name, o_name, width, o_width, goe, name, &ret]() {
      ParamSet ps;
      ps.maybe("rule_bits", o_bits, *rule_bits);
      ps.maybe("rule", o_name, *rule_name);
      ps.maybe("width", o_width, *width);
      Ctx ctx = make_ctx(*opts, ps, /*needs_group=*/false);
      auto rule = oracle_rule_from(param_int(ctx, "rule_bits", 0), param_str(ctx, "rule", ""));
      const Group& g = rule->group();
      std::vector<GroupElement> Y;
      for (int i = 0; i < param_int(ctx, "width", 1); ++i) Y.push_back(g.generator_power(0, i));
      SearchBudget budget;
      budget.max_assignments = ctx.budget;
      Json result;
      try {
        SearchOutcome oc = goe ? find_goe(*rule, Y, budget, ctx.workers) : find_mep(*rule, Y, budget);
        result["status"] = oc.status == SearchStatus::Found ? "found" : "exhausted";
        result["enumerated"] = oc.enumerated;
        if (oc.witness) result["witness"] = pattern_to_json(g, *oc.witness);
        if (oc.pair_witness) {
          result["witness1"] = pattern_to_json(g, oc.pair_witness->first);
          result["witness2"] = pattern_to_json(g, oc.pair_witness->second);
        }
        ret = finish(std::string("oracle ") + name, ctx, *opts, result, "ok");
      } catch (const BudgetError& e) {
        result["status"] = "budget";
        result["message"] = e.what();
        ret = finish(std::string("oracle ") + name, ctx, *opts, result, "budget");
      }
    });
  };
  add_oracle_search("goe", true);
  add_oracle_search("mep", false);
  {
    auto* cmd = orc->add_subcommand("sweep", "all 16 two-state rules on Z, S={0,1}");
    auto opts = std::make_shared<CommonOpts>();
    auto max_width = std::make_shared<int>(8);
    opts->attach(cmd, /*with_group=*/false);
    auto o_width = cmd->add_option("--max-width", *max_width, "largest |Y| probed");
    cmd->callback([opts, max_width, o_width, &ret]() {
      ParamSet ps;
      ps.maybe("max_width", o_width, *max_width);
      Ctx ctx = make_ctx(*opts, ps, /*needs_group=*/false);
      SearchBudget budget;
      budget.max_assignments = ctx.budget;
      budget.max_width = param_int(ctx, "max_width", 8);
      SweepTable table = moore_sweep(budget);
      auto zg = Group::make(GroupSpec::lattice(1));
      Json rows = Json::array();
      for (const auto& r : table.rows) {
        Json row{{"rule_bits", r.rule_bits}, {"mep", r.mep_status},       {"mep_width", r.mep_width},
                 {"goe", r.goe_status},      {"goe_width", r.goe_width},  {"consistent", r.consistent}};
        if (r.goe_witness) row["goe_witness"] = pattern_to_json(*zg, *r.goe_witness);
        if (r.mep_witness) {
          row["mep_witness1"] = pattern_to_json(*zg, r.mep_witness->first);
          row["mep_witness2"] = pattern_to_json(*zg, r.mep_witness->second);
        }
        rows.push_back(row);
      }
      Json result;
      result["max_width"] = table.max_width;
      result["rows"] = rows;
      result["all_consistent"] = table.all_consistent;
      ret = finish("oracle sweep", ctx, *opts, result, table.all_consistent ? "ok" : "verification-failed");
    });
  }

  // ------------------------------------------------------------ parse & dispatch
  std::vector<const char*> argv;
  argv.push_back("edenca");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  }
  return ret;
}

} // namespace edenca
