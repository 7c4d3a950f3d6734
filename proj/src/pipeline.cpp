#include "cades/pipeline.hpp"

#include <algorithm>

namespace cades {

namespace {

// The observer of g || ce keeps self-loops on unobservable events at every
// estimate, including command-side ones where the command execution cannot
// fire anything. Those loops never fire but break the bipartite shape, so
// they are dropped: a state is command-side iff its estimate sits at the
// idle command-execution state.
Bipartite to_bipartite(const Automaton& sup,
                       const std::vector<std::vector<StateId>>& estimates,
                       const TrackedProduct& lifted, StateId ce_idle) {
  const Alphabet& a = *sup.alphabet;
  std::vector<bool> control(sup.num_states(), false);
  for (StateId s = 0; s < sup.num_states(); ++s) {
    bool all_idle = true, none_idle = true;
    for (StateId p : estimates[s]) {
      if (lifted.origin[p][1] == ce_idle)
        none_idle = false;
      else
        all_idle = false;
    }
    if (!all_idle && !none_idle)
      throw Error("command supervisor estimate mixes command phases");
    control[s] = !none_idle;
  }

  Automaton out(sup.alphabet, sup.events);
  for (StateId s = 0; s < sup.num_states(); ++s)
    out.add_state(sup.label(s), sup.marked(s));
  out.set_initial(sup.initial());
  EventSet unobs = a.unobservable_events();
  for (StateId s = 0; s < sup.num_states(); ++s)
    for (const auto& t : sup.out(s)) {
      if (control[s] && unobs.contains(t.event)) continue;
      out.add_transition(s, t.event, t.target);
    }
  out = trim_reachable(out);
  out.validate();

  // Bipartite shape checks.
  for (StateId s = 0; s < out.num_states(); ++s)
    for (const auto& t : out.out(s)) {
      if (a.commands().contains(t.event)) {
        if (!control[s]) throw Error("command issued at a reaction state");
        if (control[t.target]) throw Error("command leads to a control state");
      } else {
        if (control[s]) throw Error("plant event at a control state");
        if (a.observable_events().contains(t.event) && !control[t.target])
          throw Error("observation does not lead to a control state");
        if (unobs.contains(t.event) && t.target != s)
          throw Error("unobservable event is not a self-loop");
      }
    }
  return {std::move(out), std::move(control)};
}

void record_size(SynthesisOutcome& o, const std::string& name,
                 const Automaton& aut) {
  o.model_sizes.emplace_back(name, aut.num_states());
}

}  // namespace

CommandSupervisorResult procedure1(const Automaton& g,
                                   const PipelineOptions& opts) {
  g.validate();
  const auto alphabet = g.alphabet;
  if (!opts.sound_only && !alphabet->controllables_all_observable())
    throw Error(
        "controllable events must be observable in the default mode; pass "
        "sound-only to proceed with a sound but possibly non-supremal result");

  Automaton ce = build_command_execution(alphabet);
  Automaton g_all = g;
  g_all.mark_all();  // only safety matters for the command supervisor
  TrackedProduct lifted = sync_product_tracked({&g_all, &ce});

  std::vector<bool> damage(g.num_states(), false);
  for (StateId q = 0; q < g.num_states(); ++q) damage[q] = g.marked(q);
  std::vector<bool> bad = bad_by_plant_component(lifted, 0, damage);

  // Control constraint: all commands but the bare uncontrollable one;
  // observations are the observable events plus the commands.
  EventSet ctl = alphabet->commands();
  EventId bare = alphabet->command_with_members(
      alphabet->uncontrollable_events());
  if (bare >= 0) ctl.remove(bare);
  EventSet obs = alphabet->observable_events() | alphabet->commands();

  SupervisorSynthesis syn =
      supremal_safe_supervisor(lifted.aut, bad, {ctl, obs}, opts.sound_only);

  CommandSupervisorResult out;
  out.lifted_plant_states = lifted.aut.num_states();
  out.initial_deleted_round = syn.initial_deleted_round;
  if (!syn.has_solution()) return out;
  out.ns = to_bipartite(*syn.supervisor, syn.estimates, lifted,
                        ce.initial());
  return out;
}

SynthesisOutcome procedure2(const Automaton& g, const Automaton& cea,
                            const Automaton& ac_template,
                            const AttackedConsistentSupervisor& ocnsa,
                            const CompletedRiskSupervisor& sdown_bar,
                            const AttackConstraint& ac,
                            const PipelineOptions& opts) {
  auto started = std::chrono::steady_clock::now();
  const auto alphabet = g.alphabet;

  SynthesisOutcome out;
  out.sound_incomplete =
      opts.sound_only && !ac.attackable.is_subset_of(ac.observable);

  TrackedProduct plant = sync_product_tracked(
      {&g, &cea, &ac_template, &ocnsa.aut, &sdown_bar.aut});
  record_size(out, "composed_plant", plant.aut);

  // Bad: covertness broken while the process is undamaged.
  std::vector<bool> bad(plant.aut.num_states(), false);
  for (StateId s = 0; s < plant.aut.num_states(); ++s)
    bad[s] = plant.origin[s][3] == ocnsa.covert_break &&
             !g.marked(plant.origin[s][0]);

  ControlConstraint cac = ac.attacker_constraint(*alphabet);
  SupervisorSynthesis syn =
      supremal_safe_supervisor(plant.aut, bad, cac, opts.sound_only);
  if (!syn.has_solution()) {
    out.no_solution_reason = "covertness-unenforceable";
    out.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - started)
                      .count();
    return out;
  }

  Automaton attacker = make_admissible(*syn.supervisor, cac);
  TrackedProduct closed = sync_product_tracked({&plant.aut, &attacker});
  record_size(out, "attacked_closed_loop", closed.aut);
  out.marker_reachable = is_marker_reachable(closed.aut);
  if (!out.marker_reachable) {
    // A covert attacker exists but cannot certify damage against every
    // consistent supervisor.
    out.no_solution_reason = "damage-not-certified";
    out.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - started)
                      .count();
    return out;
  }

  out.attacker_estimates = syn.estimates;
  out.estimate_contains_damage.assign(attacker.num_states(), false);
  for (StateId s = 0; s < attacker.num_states(); ++s)
    for (StateId p : syn.estimates[s])
      if (g.marked(plant.origin[p][0])) {
        out.estimate_contains_damage[s] = true;
        break;
      }
  out.attacker = std::move(attacker);
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return out;
}

SynthesisOutcome synth_attacker(const Automaton& g, const Automaton& m_o,
                                const AttackConstraint& ac,
                                const PipelineOptions& opts) {
  auto started = std::chrono::steady_clock::now();
  const auto alphabet = g.alphabet;
  ac.validate(*alphabet);

  ObservationAutomaton obs = validate_observations(m_o);

  SynthesisOutcome out;
  CommandSupervisorResult ns = procedure1(g, opts);
  if (!ns.ns) {
    out.no_solution_reason = "no-safe-supervisor";
    out.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - started)
                      .count();
    return out;
  }

  Automaton cea = build_command_execution_attacked(alphabet, ac);
  Automaton ac_template = build_attack_template(alphabet, ac);
  CommandFilter oc = build_observation_command_filter(obs, alphabet);
  ConsistentSupervisor ocns = build_consistent_supervisor(*ns.ns, oc);
  AttackedConsistentSupervisor ocnsa =
      build_attacked_consistent_supervisor(ocns, ac);
  Automaton sdown = build_least_permissive(obs);
  RiskSupervisor sdown_a = build_least_permissive_attacked(sdown, ac);
  CompletedRiskSupervisor sdown_bar =
      build_least_permissive_attacked_complete(sdown_a);

  out = procedure2(g, cea, ac_template, ocnsa, sdown_bar, ac, opts);
  out.sound_incomplete = opts.sound_only &&
                         (!alphabet->controllables_all_observable() ||
                          !ac.attackable.is_subset_of(ac.observable));

  std::vector<std::pair<std::string, int>> sizes;
  sizes.emplace_back("ns", ns.ns->aut.num_states());
  sizes.emplace_back("oc", oc.aut.num_states());
  sizes.emplace_back("ocns", ocns.aut.num_states());
  sizes.emplace_back("ocnsa", ocnsa.aut.num_states());
  sizes.emplace_back("sdown", sdown.num_states());
  sizes.emplace_back("sdowna", sdown_a.aut.num_states());
  sizes.emplace_back("sdownbar", sdown_bar.aut.num_states());
  sizes.emplace_back("ac", ac_template.num_states());
  sizes.emplace_back("cea", cea.num_states());
  for (auto& s : out.model_sizes) sizes.push_back(s);
  out.model_sizes = std::move(sizes);

  if (opts.keep_intermediates) {
    out.intermediates.emplace("ns", ns.ns->aut);
    out.intermediates.emplace("ac", ac_template);
    out.intermediates.emplace("ce", build_command_execution(alphabet));
    out.intermediates.emplace("cea", cea);
    out.intermediates.emplace("oc", oc.aut);
    out.intermediates.emplace("ocns", ocns.aut);
    out.intermediates.emplace("ocnsa", ocnsa.aut);
    out.intermediates.emplace("sdown", sdown);
    out.intermediates.emplace("sdowna", sdown_a.aut);
    out.intermediates.emplace("sdownbar", sdown_bar.aut);
  }
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return out;
}

Automaton make_admissible(const Automaton& sup, const ControlConstraint& c) {
  Automaton out = sup;
  std::vector<EventId> uncontrollable;
  for (EventId e : out.events.to_vector())
    if (!c.controllable.contains(e)) uncontrollable.push_back(e);
  for (StateId q = 0; q < out.num_states(); ++q)
    for (EventId e : uncontrollable)
      if (!out.defined(q, e)) out.add_transition(q, e, q);
  out.validate();
  return out;
}

}  // namespace cades
