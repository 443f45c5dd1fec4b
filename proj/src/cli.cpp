#include "agentarch/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "agentarch/archcat.hpp"
#include "agentarch/corpus.hpp"
#include "agentarch/dsl.hpp"
#include "agentarch/errors.hpp"
#include "agentarch/report.hpp"
#include "agentarch/rl.hpp"
#include "agentarch/semantics.hpp"

namespace agentarch {

namespace {

struct GlobalOpts {
  bool json = false;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  bool tol_set = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw unknown_name("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_verdict(std::ostream& os, const std::string& name, const Verdict& v) {
  os << name << ": " << to_string(v.status) << "\n";
  for (const auto& [key, value] : v.residuals) os << "  " << key << " = " << value << "\n";
  for (const std::string& line : v.evidence) os << "  " << line << "\n";
}

int finish(const GlobalOpts& g, std::ostream& out, const Json& report,
           const std::string& text) {
  if (g.json)
    out << report.dump(2) << "\n";
  else
    out << text;
  return report.at("exit_code").get<int>();
}

// --- check ---------------------------------------------------------------

int cmd_check(const GlobalOpts& g, const std::string& path, std::ostream& out) {
  const std::string text = read_file(path);
  const FileKind kind = sniff_kind(text, path);
  std::vector<ReportItem> items;
  Json data{{"file", path}};
  std::ostringstream os;
  switch (kind) {
    case FileKind::architecture: {
      Architecture a = parse_architecture(text, path);
      items.push_back({a.name, arch_validate(a)});
      data["kind"] = "architecture";
      break;
    }
    case FileKind::morphism: {
      MorphismFile f = parse_morphism_file(text, path);
      ArchMorphism m = resolve_morphism(f, builtin(f.source), builtin(f.target));
      items.push_back({m.name, morphism_validate(m, builtin(f.source), builtin(f.target))});
      data["kind"] = "morphism";
      break;
    }
    case FileKind::env: {
      EnvSpec env = parse_env(text, path);
      items.push_back({env.name, env.validate()});
      data["kind"] = "env";
      break;
    }
  }
  for (const ReportItem& item : items) print_verdict(os, "check " + item.name, item.verdict);
  return finish(g, out, make_report("check", items, data), os.str());
}

// --- analyze ---------------------------------------------------------------

int cmd_analyze(const GlobalOpts& g, const std::string& target, std::ostream& out) {
  const auto& names = builtin_names();
  AnalysisReport report;
  if (std::find(names.begin(), names.end(), target) != names.end()) {
    report = analyze(target);
  } else {
    const std::string text = read_file(target);
    if (sniff_kind(text, target) != FileKind::architecture)
      throw unknown_name("analyze expects an architecture name or .arch file, got '" + target +
                         "'");
    report = analyze(parse_architecture(text, target));
  }
  return finish(g, out, make_report("analyze", {}, Json{{"analysis", analysis_to_json(report)}}),
                render_analysis(report));
}

// --- compare ---------------------------------------------------------------

int cmd_compare(const GlobalOpts& g, const std::string& a, const std::string& b,
                std::ostream& out) {
  std::vector<ComparisonRow> rows = compare(a, b);
  return finish(g, out,
                make_report("compare", {}, Json{{"comparison", comparison_to_json(a, b, rows)}}),
                render_comparison(a, b, rows));
}

// --- agent verify / reindex --------------------------------------------

// Per-item mirror of admissibility_check: same verdicts, same split order,
// but each stage is reported separately.
std::vector<ReportItem> admissibility_items(const Agent& agent, Rng& rng) {
  std::vector<ReportItem> items;
  Verdict shape = agent_validate(agent);
  items.push_back({"agent", shape});
  if (shape.status == Verdict::Status::fail) return items;
  try {
    Rng r = rng.split();
    items.push_back(
        {"interface", interface_compat_check(agent, CompatMode::exact, 64,
                                             agent.hp("tol", 1e-9), r)});
  } catch (const Error& e) {
    items.push_back({"interface", Verdict::failed(std::string(e.kind()) + ": " + e.what())});
  }
  for (const Constraint& rho : agent.arch->constraints) {
    Rng r = rng.split();
    items.push_back({rho.id, constraint_evaluate(agent, rho, r)});
  }
  return items;
}

Agent build_named_agent(const std::string& arch_name, const std::string& env_path,
                        AgentMode mode, std::map<std::string, double> hp) {
  if (arch_name != "RL" && arch_name != "CRL")
    throw unknown_name("only RL and CRL have executable realizations, got '" + arch_name + "'");
  auto env = std::make_shared<EnvSpec>(parse_env(read_file(env_path), env_path));
  const Architecture& arch = builtin(arch_name);
  if (arch_name == "CRL") {
    if (mode == AgentMode::neural)
      throw unknown_name("the CRL demo agent is tabular only");
    return build_crl_demo_agent(arch, env, hp);
  }
  return build_rl_agent(arch, env, mode, hp);
}

int run_agent_checks(const GlobalOpts& g, const std::string& command, const Agent& agent,
                     Json data, std::ostream& out) {
  Rng rng(g.seed);
  std::vector<ReportItem> items = admissibility_items(agent, rng);
  Verdict::Status status = Verdict::Status::pass;
  std::ostringstream os;
  for (const ReportItem& item : items) {
    status = combine_blocking(status, item.verdict.status);
    print_verdict(os, item.name, item.verdict);
  }
  os << "admissibility: " << to_string(status) << "\n";
  return finish(g, out, make_report(command, items, std::move(data)), os.str());
}

int cmd_agent_verify(const GlobalOpts& g, const std::string& arch_name,
                     const std::string& env_path, const std::string& mode_name,
                     const std::map<std::string, double>& flags, std::ostream& out) {
  const AgentMode mode = mode_name == "neural" ? AgentMode::neural : AgentMode::tabular;
  std::map<std::string, double> hp = flags;
  hp["seed"] = static_cast<double>(g.seed);
  if (g.tol_set) hp["tol"] = g.tol;
  Agent agent = build_named_agent(arch_name, env_path, mode, hp);
  return run_agent_checks(
      g, "agent verify", agent,
      Json{{"architecture", arch_name}, {"env", env_path}, {"mode", mode_name}}, out);
}

int cmd_agent_reindex(const GlobalOpts& g, const std::string& morphism_name,
                      const std::string& config_path,
                      const std::map<std::string, double>& flags, std::ostream& out) {
  const ArchMorphism* f = nullptr;
  ArchMorphism from_file;
  const auto& names = builtin_morphism_names();
  if (std::find(names.begin(), names.end(), morphism_name) != names.end()) {
    f = &builtin_morphism(morphism_name);
  } else {
    MorphismFile mf = parse_morphism_file(read_file(morphism_name), morphism_name);
    from_file = resolve_morphism(mf, builtin(mf.source), builtin(mf.target));
    f = &from_file;
  }

  Json config = Json::parse(read_file(config_path));
  const std::string arch_name = config.at("arch").get<std::string>();
  if (arch_name != f->target)
    throw unknown_name("agent config is for '" + arch_name + "' but the morphism targets '" +
                       f->target + "'");
  std::string env_path = config.at("env").get<std::string>();
  // Relative env paths resolve against the config file's directory.
  const auto slash = config_path.find_last_of('/');
  if (!env_path.empty() && env_path.front() != '/' && slash != std::string::npos)
    env_path = config_path.substr(0, slash + 1) + env_path;
  const std::string mode_name = config.value("mode", std::string("tabular"));
  std::map<std::string, double> hp;
  for (const auto& [key, value] : config.value("hyperparams", Json::object()).items())
    hp[key] = value.get<double>();
  for (const auto& [key, value] : flags) hp[key] = value;
  if (g.tol_set) hp["tol"] = g.tol;
  if (!hp.count("seed")) hp["seed"] = static_cast<double>(g.seed);

  Agent target_agent = build_named_agent(
      arch_name, env_path, mode_name == "neural" ? AgentMode::neural : AgentMode::tabular, hp);
  Agent reindexed = reindex_agent(*f, builtin(f->source), target_agent);
  return run_agent_checks(g, "agent reindex", reindexed,
                          Json{{"morphism", f->name},
                               {"source", f->source},
                               {"target", f->target},
                               {"agent", reindexed.name}},
                          out);
}

// --- ladder verify ---------------------------------------------------------

int cmd_ladder(const GlobalOpts& g, std::ostream& out) {
  std::vector<ReportItem> items;
  std::ostringstream os;
  ArchMorphism composite;
  bool first = true;
  for (const LadderStep& step : ladder()) {
    items.push_back({step.morphism->name,
                     morphism_validate(*step.morphism, *step.source, *step.target)});
    composite = first ? *step.morphism : morphism_compose(*step.morphism, composite);
    first = false;
  }
  items.push_back(
      {composite.name, morphism_validate(composite, builtin("RL"), builtin("SBL"))});
  for (const ReportItem& item : items) print_verdict(os, item.name, item.verdict);
  return finish(g, out, make_report("ladder verify", items), os.str());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"agentarch: specification checker for layered agent architectures"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_flag("--json", g.json, "emit a machine-readable JSON report");
  app.add_option("--seed", g.seed, "RNG seed (default 1)");
  auto* tol_opt = app.add_option("--tol", g.tol, "numeric tolerance override");

  auto* c_check = app.add_subcommand("check", "parse and validate a DSL file");
  std::string check_file;
  c_check->add_option("file", check_file, "architecture/morphism/env file")->required();

  auto* c_analyze = app.add_subcommand("analyze", "structural census of an architecture");
  std::string analyze_target;
  c_analyze->add_option("name", analyze_target, "builtin name or .arch file")->required();

  auto* c_compare = app.add_subcommand("compare", "compare two builtin architectures");
  std::string cmp_a, cmp_b;
  c_compare->add_option("a", cmp_a)->required();
  c_compare->add_option("b", cmp_b)->required();

  auto* c_morphism = app.add_subcommand("morphism", "morphism operations");
  c_morphism->require_subcommand(1);
  auto* c_mcheck = c_morphism->add_subcommand("check", "validate a morphism file");
  std::string morph_file;
  c_mcheck->add_option("file", morph_file)->required();

  auto* c_agent = app.add_subcommand("agent", "agent operations");
  c_agent->require_subcommand(1);
  auto* c_verify = c_agent->add_subcommand("verify", "build an agent and run admissibility");
  std::string verify_arch, verify_env, verify_mode = "tabular";
  c_verify->add_option("arch", verify_arch, "RL or CRL")->required();
  c_verify->add_option("--env", verify_env, "environment file")->required();
  c_verify->add_option("--mode", verify_mode, "tabular|neural")
      ->check(CLI::IsMember({"tabular", "neural"}));
  auto* c_reindex = c_agent->add_subcommand("reindex", "pull an agent back along a morphism");
  std::string reindex_morphism, reindex_config;
  c_reindex->add_option("morphism", reindex_morphism, "builtin morphism name or .morph file")
      ->required();
  c_reindex->add_option("config", reindex_config, "agent config JSON")->required();

  double alpha = 0, gamma = 0, epsilon = 0, steps = 0;
  std::vector<CLI::Option*> hp_opts;
  for (CLI::App* sc : {c_verify, c_reindex}) {
    hp_opts.push_back(sc->add_option("--alpha", alpha, "learning rate"));
    hp_opts.push_back(sc->add_option("--gamma", gamma, "discount factor"));
    hp_opts.push_back(sc->add_option("--epsilon", epsilon, "exploration rate"));
    hp_opts.push_back(sc->add_option("--steps", steps, "training steps"));
  }

  auto* c_ladder = app.add_subcommand("ladder", "ladder operations");
  c_ladder->require_subcommand(1);
  c_ladder->add_subcommand("verify", "validate every ladder morphism and the composite");

  std::vector<const char*> argv;
  argv.push_back("agentarch");
  for (const std::string& a : args) argv.push_back(a.c_str());

  std::string command = "cli";
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    g.tol_set = tol_opt->count() > 0;

    std::map<std::string, double> flags;
    auto collect = [&](CLI::App* sc) {
      if (sc->count("--alpha")) flags["alpha"] = alpha;
      if (sc->count("--gamma")) flags["gamma"] = gamma;
      if (sc->count("--epsilon")) flags["epsilon"] = epsilon;
      if (sc->count("--steps")) flags["steps"] = steps;
    };

    if (c_check->parsed()) {
      command = "check";
      return cmd_check(g, check_file, out);
    }
    if (c_analyze->parsed()) {
      command = "analyze";
      return cmd_analyze(g, analyze_target, out);
    }
    if (c_compare->parsed()) {
      command = "compare";
      return cmd_compare(g, cmp_a, cmp_b, out);
    }
    if (c_morphism->parsed()) {
      command = "morphism check";
      // `morphism check` resolves against the builtin corpus and validates.
      MorphismFile f = parse_morphism_file(read_file(morph_file), morph_file);
      ArchMorphism m = resolve_morphism(f, builtin(f.source), builtin(f.target));
      std::vector<ReportItem> items{
          {m.name, morphism_validate(m, builtin(f.source), builtin(f.target))}};
      std::ostringstream os;
      print_verdict(os, items[0].name, items[0].verdict);
      return finish(g, out, make_report(command, items, Json{{"file", morph_file}}), os.str());
    }
    if (c_verify->parsed()) {
      command = "agent verify";
      collect(c_verify);
      return cmd_agent_verify(g, verify_arch, verify_env, verify_mode, flags, out);
    }
    if (c_reindex->parsed()) {
      command = "agent reindex";
      collect(c_reindex);
      return cmd_agent_reindex(g, reindex_morphism, reindex_config, flags, out);
    }
    if (c_ladder->parsed()) {
      command = "ladder verify";
      return cmd_ladder(g, out);
    }
    err << "no subcommand\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      // --help and friends print through CLI11's own machinery.
      CLI::App* sub = &app;
      while (!sub->get_subcommands().empty() && sub->get_subcommands()[0]->parsed())
        sub = sub->get_subcommands()[0];
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  } catch (const SyntaxError& e) {
    err << e.what() << "\n";
    if (g.json) out << error_report(command, e.kind(), e.what()).dump(2) << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << "\n";
    if (g.json) out << error_report(command, e.kind(), e.what()).dump(2) << "\n";
    return 2;
  } catch (const Json::exception& e) {
    err << "JsonError: " << e.what() << "\n";
    if (g.json) out << error_report(command, "JsonError", e.what()).dump(2) << "\n";
    return 2;
  }
}

}  // namespace agentarch
