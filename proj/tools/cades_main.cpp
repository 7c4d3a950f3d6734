#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "cades/model_io.hpp"
#include "cades/verification.hpp"

namespace fs = std::filesystem;
using namespace cades;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBoundExceeded = 3;

void print_error(const std::string& msg) {
  bool color = isatty(fileno(stderr)) && std::getenv("NO_COLOR") == nullptr;
  if (color)
    std::cerr << "\033[31merror:\033[0m " << msg << "\n";
  else
    std::cerr << "error: " << msg << "\n";
}

struct CommonOpts {
  std::string model_path;
  bool sound_only = false;
  std::size_t max_commands = 4096;
  bool dot = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("model", c.model_path, "model file (JSON)")->required();
  cmd->add_flag("--sound-only", c.sound_only,
                "allow unobservable controllable events (sound, possibly "
                "non-supremal results)");
  cmd->add_option("--max-commands", c.max_commands,
                  "limit for the generated command set");
  cmd->add_flag("--dot", c.dot, "also write DOT renderings");
}

void write_automaton_file(const ModelFile& base, const std::string& name,
                          const Automaton& aut, const fs::path& path,
                          bool dot, const std::vector<StateId>& highlight = {}) {
  ModelFile out;
  out.alphabet = base.alphabet;
  out.automata.emplace_back(name, aut);
  write_file_atomic(path.string(), serialize_model(out));
  if (dot) {
    fs::path dot_path = path;
    dot_path.replace_extension(".dot");
    write_file_atomic(dot_path.string(), export_dot(aut, name, highlight));
  }
}

AttackConstraint constraint_of(const ModelFile& model) {
  return AttackConstraint::from_alphabet(*model.alphabet);
}

int run_synth_ns(const CommonOpts& c, const std::string& out_path) {
  ModelFile model = load_model(c.model_path, c.max_commands);
  const Automaton& g = model.require("plant");
  PipelineOptions opts;
  opts.sound_only = c.sound_only;
  CommandSupervisorResult r = procedure1(g, opts);
  if (!r.ns) {
    std::cout << "no safe supervisor exists (lifted plant: "
              << r.lifted_plant_states << " states)\n";
    return kExitFalse;
  }
  std::cout << "command supervisor: " << r.ns->aut.num_states()
            << " states (lifted plant: " << r.lifted_plant_states
            << " states)\n";
  if (!out_path.empty())
    write_automaton_file(model, "ns", r.ns->aut, out_path, c.dot);
  return kExitTrue;
}

int run_build_models(const CommonOpts& c, std::string models_csv,
                     const std::string& supervisor_name,
                     const std::string& out_dir) {
  ModelFile model = load_model(c.model_path, c.max_commands);
  const Automaton& g = model.require("plant");
  AttackConstraint ac = constraint_of(model);
  auto alphabet = model.alphabet;

  std::set<std::string> wanted;
  std::stringstream ss(models_csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) wanted.insert(tok);
  const std::set<std::string> known{"ac",    "ce",    "cea",    "oc",
                                    "ocns",  "ocnsa", "sdown",  "sdowna",
                                    "sdownbar", "ns",  "bts",   "btsm",
                                    "btsa"};
  for (const auto& w : wanted)
    if (!known.count(w)) throw Error("unknown model '" + w + "'");
  if (wanted.empty()) wanted = known;

  std::map<std::string, Automaton> built;
  std::map<std::string, std::vector<StateId>> highlights;

  auto need_obs = [&]() {
    return validate_observations(model.require("observations"));
  };

  if (wanted.count("ac")) built.emplace("ac", build_attack_template(alphabet, ac));
  if (wanted.count("ce")) built.emplace("ce", build_command_execution(alphabet));
  if (wanted.count("cea"))
    built.emplace("cea", build_command_execution_attacked(alphabet, ac));

  std::optional<Bipartite> ns;
  auto ensure_ns = [&]() {
    if (!ns) {
      PipelineOptions opts;
      opts.sound_only = c.sound_only;
      CommandSupervisorResult r = procedure1(g, opts);
      if (!r.ns) throw Error("no safe supervisor exists for this plant");
      ns = std::move(r.ns);
    }
  };
  if (wanted.count("ns")) {
    ensure_ns();
    built.emplace("ns", ns->aut);
  }
  std::optional<CommandFilter> oc;
  if (wanted.count("oc") || wanted.count("ocns") || wanted.count("ocnsa"))
    oc = build_observation_command_filter(need_obs(), alphabet);
  if (wanted.count("oc")) built.emplace("oc", oc->aut);
  if (wanted.count("ocns") || wanted.count("ocnsa")) {
    ensure_ns();
    ConsistentSupervisor ocns = build_consistent_supervisor(*ns, *oc);
    if (wanted.count("ocns")) built.emplace("ocns", ocns.aut);
    if (wanted.count("ocnsa")) {
      AttackedConsistentSupervisor a =
          build_attacked_consistent_supervisor(ocns, ac);
      highlights["ocnsa"] = {a.covert_break};
      built.emplace("ocnsa", a.aut);
    }
  }
  if (wanted.count("sdown") || wanted.count("sdowna") ||
      wanted.count("sdownbar")) {
    Automaton sdown = build_least_permissive(need_obs());
    if (wanted.count("sdown")) built.emplace("sdown", sdown);
    if (wanted.count("sdowna") || wanted.count("sdownbar")) {
      RiskSupervisor sa = build_least_permissive_attacked(sdown, ac);
      if (wanted.count("sdowna")) {
        highlights["sdowna"] = {sa.risk};
        built.emplace("sdowna", sa.aut);
      }
      if (wanted.count("sdownbar")) {
        CompletedRiskSupervisor sb = build_least_permissive_attacked_complete(sa);
        highlights["sdownbar"] = {sb.risk, sb.dump};
        built.emplace("sdownbar", sb.aut);
      }
    }
  }
  if (wanted.count("bts") || wanted.count("btsm") || wanted.count("btsa")) {
    if (supervisor_name.empty())
      throw Error("the supervisor builders need --supervisor NAME");
    Bipartite bts = build_bipartite_supervisor(model.require(supervisor_name));
    if (wanted.count("bts")) built.emplace("bts", bts.aut);
    if (wanted.count("btsm") || wanted.count("btsa")) {
      Automaton ce = build_command_execution(alphabet);
      Bipartite bts_m = build_monitored_supervisor(bts, g, ce);
      if (wanted.count("btsm")) built.emplace("btsm", bts_m.aut);
      if (wanted.count("btsa")) {
        AttackedSupervisor bts_a = build_attacked_supervisor(bts_m, ac);
        highlights["btsa"] = {bts_a.detect};
        built.emplace("btsa", bts_a.aut);
      }
    }
  }

  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  for (const auto& [name, aut] : built) {
    auto hl = highlights.count(name) ? highlights[name] : std::vector<StateId>{};
    write_automaton_file(model, name, aut, dir / (name + ".json"), c.dot, hl);
    std::cout << name << ": " << aut.num_states() << " states, "
              << aut.num_transitions() << " transitions\n";
  }
  return kExitTrue;
}

int run_synth_attacker(const CommonOpts& c, const std::string& out_path,
                       const std::string& intermediates_dir) {
  ModelFile model = load_model(c.model_path, c.max_commands);
  const Automaton& g = model.require("plant");
  const Automaton& m_o = model.require("observations");
  AttackConstraint ac = constraint_of(model);

  PipelineOptions opts;
  opts.sound_only = c.sound_only;
  opts.keep_intermediates = !intermediates_dir.empty();
  SynthesisOutcome outcome = synth_attacker(g, m_o, ac, opts);

  for (const auto& [name, n] : outcome.model_sizes)
    std::cout << name << ": " << n << " states\n";
  std::cout << "elapsed: " << outcome.seconds << " s\n";
  if (outcome.sound_incomplete)
    std::cout << "mode: sound-incomplete (unobservable controllable events)\n";

  if (!intermediates_dir.empty()) {
    fs::path dir(intermediates_dir);
    fs::create_directories(dir);
    for (const auto& [name, aut] : outcome.intermediates)
      write_automaton_file(model, name, aut, dir / (name + ".json"), c.dot);
  }

  if (!outcome.has_solution()) {
    std::cout << "no attacker exists: " << outcome.no_solution_reason << "\n";
    return kExitFalse;
  }
  std::vector<StateId> highlight;
  for (StateId s = 0; s < outcome.attacker->num_states(); ++s)
    if (outcome.estimate_contains_damage[s]) highlight.push_back(s);
  std::cout << "attacker: " << outcome.attacker->num_states() << " states\n";
  write_automaton_file(model, "attacker", *outcome.attacker,
                       out_path.empty() ? "attacker.json" : out_path, c.dot,
                       highlight);
  return kExitTrue;
}

int run_verify(const std::string& attacker_path, const CommonOpts& c,
               int state_bound, long count_bound) {
  ModelFile attacker_file = load_model(attacker_path, c.max_commands);
  ModelFile model = load_model(c.model_path, c.max_commands);
  if (!attacker_file.alphabet->structurally_equal(*model.alphabet))
    throw Error("attacker and model files use different alphabets");
  const Automaton& g = model.require("plant");
  const Automaton& m_o = model.require("observations");
  // Re-home the attacker onto the model's alphabet object.
  ModelFile re = parse_model(serialize_model(attacker_file), c.max_commands);
  Automaton attacker = re.require("attacker");
  attacker.alphabet = model.alphabet;

  SupervisorEnumOptions bounds;
  if (state_bound > 0) bounds.state_bound = state_bound;
  bounds.count_bound = count_bound;
  VerifyReport report =
      verify_successful(attacker, g, m_o, constraint_of(model), bounds);

  std::cout << "supervisors checked: " << report.supervisors_checked << "\n";
  for (const auto& f : report.failures)
    std::cout << "counterexample (supervisor " << f.supervisor << ", "
              << f.kind << "): " << format_word(*model.alphabet, f.trace)
              << "\n";
  std::cout << "counterexamples: " << report.failures.size() << "\n";
  if (report.truncated_enumeration)
    std::cout << "note: the supervisor enumeration was cut by the bounds\n";
  return report.failures.empty() ? kExitTrue : kExitFalse;
}

int run_consistent(const CommonOpts& c, const std::string& supervisor_name) {
  ModelFile model = load_model(c.model_path, c.max_commands);
  bool ok = check_consistency(model.require("plant"),
                              model.require(supervisor_name),
                              model.require("observations"));
  std::cout << (ok ? "consistent" : "not consistent") << "\n";
  return ok ? kExitTrue : kExitFalse;
}

int run_enumerate(const CommonOpts& c, int state_bound, long count_bound,
                  long node_budget, bool include_unsafe,
                  const std::string& out_path) {
  ModelFile model = load_model(c.model_path, c.max_commands);
  SupervisorEnumOptions opts;
  if (state_bound > 0) opts.state_bound = state_bound;
  opts.count_bound = count_bound;
  if (node_budget > 0) opts.node_budget = node_budget;
  opts.require_safe = !include_unsafe;
  EnumeratedSupervisors e = enumerate_consistent_supervisors(
      model.require("plant"), model.require("observations"), opts);
  std::cout << "supervisors: " << e.supervisors.size() << " (examined "
            << e.explored << " candidates)\n";
  if (!out_path.empty()) {
    ModelFile out;
    out.alphabet = model.alphabet;
    for (std::size_t i = 0; i < e.supervisors.size(); ++i)
      out.automata.emplace_back("sup" + std::to_string(i), e.supervisors[i]);
    write_file_atomic(out_path, serialize_model(out));
  }
  if (e.budget_exhausted) {
    std::cout << "search budget exhausted before the space was covered\n";
    return kExitBoundExceeded;
  }
  return kExitTrue;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Synthesis of covert sensor-actuator attackers against unknown "
      "supervisors from plant models and observations"};
  app.require_subcommand(1);

  CommonOpts c_ns, c_build, c_attack, c_verify, c_cons, c_enum;
  std::string out_path, intermediates_dir, models_csv, supervisor_name;
  std::string attacker_path, enum_out;
  int state_bound = -1;
  long count_bound = 10000;
  long node_budget = -1;
  bool include_unsafe = false;

  auto* ns = app.add_subcommand(
      "synth-ns", "synthesize the supremal safe command supervisor");
  add_common(ns, c_ns);
  ns->add_option("--out", out_path, "write the supervisor to this file");

  auto* build = app.add_subcommand("build-models",
                                   "build the component models of the attack "
                                   "pipeline (any subset)");
  add_common(build, c_build);
  build->add_option("--models", models_csv,
                    "comma list: ac,ce,cea,oc,ocns,ocnsa,sdown,sdowna,"
                    "sdownbar,ns,bts,btsm,btsa (default: all)");
  build->add_option("--supervisor", supervisor_name,
                    "automaton name for the bts/btsm/btsa builders");
  build->add_option("--out", intermediates_dir, "output directory");

  auto* attack = app.add_subcommand(
      "synth-attacker", "synthesize the supremal covert damage-reachable "
                        "attacker");
  add_common(attack, c_attack);
  attack->add_option("--out", out_path, "attacker output file");
  attack->add_option("--emit-intermediates", intermediates_dir,
                     "write every intermediate model to this directory");

  auto* verify = app.add_subcommand(
      "verify", "check an attacker against every enumerated consistent safe "
                "supervisor");
  verify->add_option("attacker", attacker_path, "attacker file")->required();
  add_common(verify, c_verify);
  verify->add_option("--bound", state_bound, "supervisor state bound");
  verify->add_option("--count-bound", count_bound, "supervisor count bound");

  auto* cons = app.add_subcommand(
      "consistent", "check a supervisor against the observations");
  add_common(cons, c_cons);
  cons->add_option("--supervisor", supervisor_name, "automaton name")
      ->required();

  auto* enumerate = app.add_subcommand(
      "enumerate-sup", "enumerate consistent (safe) supervisors");
  add_common(enumerate, c_enum);
  enumerate->add_option("--state-bound", state_bound, "supervisor state bound");
  enumerate->add_option("--count-bound", count_bound, "max supervisors");
  enumerate->add_option("--node-budget", node_budget,
                        "cap on search steps (exit 3 when exhausted)");
  enumerate->add_flag("--include-unsafe", include_unsafe,
                      "drop the safety filter");
  enumerate->add_option("--out", enum_out, "write supervisors to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ns->parsed()) return run_synth_ns(c_ns, out_path);
    if (build->parsed())
      return run_build_models(c_build, models_csv, supervisor_name,
                              intermediates_dir);
    if (attack->parsed())
      return run_synth_attacker(c_attack, out_path, intermediates_dir);
    if (verify->parsed())
      return run_verify(attacker_path, c_verify, state_bound, count_bound);
    if (cons->parsed()) return run_consistent(c_cons, supervisor_name);
    if (enumerate->parsed())
      return run_enumerate(c_enum, state_bound, count_bound, node_budget,
                           include_unsafe, enum_out);
  } catch (const SchemaError& e) {
    print_error(e.what());
    return kExitInputError;
  } catch (const Error& e) {
    print_error(e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    print_error(e.what());
    return kExitInputError;
  }
  return kExitInputError;
}
