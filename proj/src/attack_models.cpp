#include "cades/attack_models.hpp"

#include <algorithm>
#include <deque>

namespace cades {

AttackConstraint AttackConstraint::from_alphabet(const Alphabet& a) {
  AttackConstraint ac{a.observable_events(), a.compromised_events(),
                      a.attackable_events()};
  ac.validate(a);
  return ac;
}

void AttackConstraint::validate(const Alphabet& a) const {
  if (!(observable == a.observable_events()))
    throw Error("the attacker observes exactly the observable events");
  if (!compromised.is_subset_of(observable))
    throw Error("compromised events must be observable");
  if (!attackable.is_subset_of(a.controllable_events()))
    throw Error("attackable events must be controllable");
  for (EventId e : compromised.to_vector())
    a.tampered(e);  // throws when the tampered copy is missing
}

ControlConstraint AttackConstraint::attacker_constraint(
    const Alphabet& a) const {
  EventSet tampered = a.empty_set();
  for (EventId e : compromised.to_vector()) tampered.add(a.tampered(e));
  EventSet ctl = attackable | tampered;
  ctl.add(a.stop_event());
  EventSet obs = observable | tampered;
  obs.add(a.stop_event());
  return {ctl, obs};
}

ObservationAutomaton validate_observations(const Automaton& m_o) {
  m_o.validate();
  if (m_o.is_empty()) throw Error("observation automaton is empty");
  if (!m_o.events.is_subset_of(m_o.alphabet->observable_events()))
    throw Error("observation automaton uses unobservable events");

  Automaton trimmed = trim_reachable(m_o);
  if (trimmed.num_states() != m_o.num_states())
    throw Error("observation automaton has unreachable states");

  // Finite language: no cycles.
  std::vector<int> color(m_o.num_states(), 0);
  std::vector<StateId> stack{m_o.initial()};
  std::function<void(StateId)> dfs = [&](StateId q) {
    color[q] = 1;
    for (const auto& t : m_o.out(q)) {
      if (color[t.target] == 1)
        throw Error("observation automaton has a cycle (infinite language)");
      if (color[t.target] == 0) dfs(t.target);
    }
    color[q] = 2;
  };
  dfs(m_o.initial());

  StateId deadlock = -1;
  for (StateId q = 0; q < m_o.num_states(); ++q) {
    if (!m_o.deadlocked(q)) continue;
    if (deadlock >= 0)
      throw Error("observation automaton must have exactly one deadlocked state");
    deadlock = q;
  }
  if (deadlock < 0)
    throw Error("observation automaton must have exactly one deadlocked state");
  return {m_o, deadlock};
}

void validate_supervisor(const Automaton& s) {
  s.validate();
  if (s.is_empty()) throw Error("supervisor automaton is empty");
  const Alphabet& a = *s.alphabet;
  if (!(s.events == a.plant_events()))
    throw Error("supervisor must range over exactly the plant events");
  EventSet unc = a.uncontrollable_events();
  EventSet unobs = a.unobservable_events();
  for (StateId q = 0; q < s.num_states(); ++q) {
    for (EventId e : unc.to_vector())
      if (!s.defined(q, e))
        throw Error("supervisor disables uncontrollable event '" + a.name(e) +
                    "' at state " + std::to_string(q));
    for (const auto& t : s.out(q))
      if (unobs.contains(t.event) && t.target != q)
        throw Error("supervisor changes state on unobservable event '" +
                    a.name(t.event) + "'");
  }
}

Automaton build_attack_template(std::shared_ptr<const Alphabet> alphabet,
                                const AttackConstraint& ac) {
  const Alphabet& a = *alphabet;
  ac.validate(a);
  EventSet events = a.plant_events() | a.commands();
  for (EventId e : ac.compromised.to_vector()) events.add(a.tampered(e));
  events.add(a.stop_event());

  Automaton t(alphabet, events);
  StateId init = t.add_state("idle");
  StateId after_comp = t.add_state("got_comp");
  StateId after_plain = t.add_state("got_plain");
  t.set_initial(init);

  EventSet unobs = a.unobservable_events();
  for (EventId e : (unobs | a.commands()).to_vector())
    t.add_transition(init, e, init);
  for (EventId e : ac.observable.to_vector())
    t.add_transition(init, e,
                     ac.compromised.contains(e) ? after_comp : after_plain);
  for (EventId e : ac.compromised.to_vector())
    t.add_transition(after_comp, a.tampered(e), after_plain);
  t.add_transition(after_comp, a.stop_event(), init);
  t.add_transition(after_plain, a.stop_event(), init);

  if (t.num_states() != 3) throw Error("attack template must have 3 states");
  t.validate();
  return t;
}

namespace {

Automaton command_execution_impl(std::shared_ptr<const Alphabet> alphabet,
                                 const AttackConstraint* ac) {
  const Alphabet& a = *alphabet;
  EventSet events = a.plant_events() | a.commands();
  Automaton ce(alphabet, events);
  StateId idle = ce.add_state("idle");
  ce.set_initial(idle);

  EventSet obs = a.observable_events();
  for (EventId g : a.commands().to_vector()) {
    StateId qg = ce.add_state("use_" + a.name(g));
    ce.add_transition(idle, g, qg);
    for (EventId e : a.command_members(g).to_vector())
      ce.add_transition(qg, e, obs.contains(e) ? idle : qg);
    if (ac) {
      // Attackable events can fire whether or not the command holds them.
      for (EventId e : ac->attackable.to_vector())
        ce.try_add_transition(qg, e, obs.contains(e) ? idle : qg);
    }
  }
  if (ac) {
    // With sensor deletion the supervisor may stay silent, but uncontrollable
    // events still fire without a command.
    for (EventId e : a.uncontrollable_events().to_vector())
      ce.add_transition(idle, e, idle);
  }
  if (ce.num_states() != static_cast<int>(a.commands().count()) + 1)
    throw Error("command execution must have one state per command plus idle");
  ce.validate();
  return ce;
}

}  // namespace

Automaton build_command_execution(std::shared_ptr<const Alphabet> alphabet) {
  return command_execution_impl(std::move(alphabet), nullptr);
}

Automaton build_command_execution_attacked(
    std::shared_ptr<const Alphabet> alphabet, const AttackConstraint& ac) {
  ac.validate(*alphabet);
  return command_execution_impl(std::move(alphabet), &ac);
}

Bipartite build_bipartite_supervisor(const Automaton& s) {
  validate_supervisor(s);
  const Alphabet& a = *s.alphabet;
  EventSet events = a.plant_events() | a.commands();

  Bipartite b{Automaton(s.alphabet, events), {}};
  // Layout: reaction state q -> id q, control state q^com -> id |Q|+q.
  int n = s.num_states();
  for (StateId q = 0; q < n; ++q) {
    b.aut.add_state(s.label(q).empty() ? std::to_string(q) : s.label(q));
    b.control_state.push_back(false);
  }
  for (StateId q = 0; q < n; ++q) {
    std::string l = s.label(q).empty() ? std::to_string(q) : s.label(q);
    b.aut.add_state(l + "^com");
    b.control_state.push_back(true);
  }
  auto com = [n](StateId q) { return n + q; };
  b.aut.set_initial(com(s.initial()));

  EventSet obs = a.observable_events();
  for (StateId q = 0; q < n; ++q) {
    EventId gamma = a.command_with_members(s.enabled(q));
    if (gamma < 0)
      throw Error("no command event matches the enabled set at supervisor state " +
                  std::to_string(q));
    b.aut.add_transition(com(q), gamma, q);
    for (const auto& t : s.out(q))
      b.aut.add_transition(q, t.event,
                           obs.contains(t.event) ? com(t.target) : q);
  }
  b.aut.validate();
  return b;
}

Bipartite build_monitored_supervisor(const Bipartite& bts, const Automaton& g,
                                     const Automaton& ce) {
  const Alphabet& a = *bts.aut.alphabet;
  EventSet view = a.observable_events() | a.commands();
  Automaton monitor = observer_project(sync_product(g, ce), view);
  // The monitor is an observation device; the plant's damage marking must
  // not leak into the supervisor model's marked set.
  monitor.mark_all();
  TrackedProduct prod = sync_product_tracked({&bts.aut, &monitor});
  Bipartite out{std::move(prod.aut), {}};
  out.control_state.reserve(out.aut.num_states());
  for (StateId s = 0; s < out.aut.num_states(); ++s)
    out.control_state.push_back(bts.control_state[prod.origin[s][0]]);
  // The bipartite split must survive the product: commands only at control
  // states, plant events only at reaction states.
  for (StateId s = 0; s < out.aut.num_states(); ++s)
    for (const auto& t : out.aut.out(s))
      if (a.commands().contains(t.event) != out.control_state[s])
        throw Error("monitored supervisor lost its bipartite shape");
  return out;
}

namespace {

// Shared shape of the two attack encodings: relabel compromised transitions
// to their tampered copies (with invisible self-loops), self-loop attackable
// invisible events at reaction-side states, keep the rest, and route
// unexpected observations at reaction-side states to a fresh sink.
struct AttackEncoding {
  Automaton aut;
  StateId sink = -1;
};

AttackEncoding encode_attack(const Automaton& base,
                             const std::vector<bool>& reaction_side,
                             const AttackConstraint& ac,
                             const std::string& sink_label,
                             bool include_commands) {
  const Alphabet& a = *base.alphabet;
  EventSet events = base.events;
  for (EventId e : ac.compromised.to_vector()) events.add(a.tampered(e));

  Automaton out(base.alphabet, events);
  for (StateId q = 0; q < base.num_states(); ++q)
    out.add_state(base.label(q), base.marked(q));
  StateId sink = out.add_state(sink_label);
  out.set_initial(base.initial());

  EventSet invisible = a.unobservable_events() | ac.compromised;
  EventSet keep = (a.plant_events() - ac.compromised);
  if (include_commands) keep |= a.commands();

  for (StateId q = 0; q < base.num_states(); ++q) {
    for (const auto& t : base.out(q)) {
      if (ac.compromised.contains(t.event)) {
        out.add_transition(q, a.tampered(t.event), t.target);
        out.add_transition(q, t.event, q);
      } else if (keep.contains(t.event)) {
        out.add_transition(q, t.event, t.target);
      }
    }
    if (!reaction_side[q]) continue;
    for (EventId e : (ac.attackable & invisible).to_vector())
      out.try_add_transition(q, e, q);
    for (EventId e : (ac.observable - ac.compromised).to_vector())
      if (!base.defined(q, e)) out.add_transition(q, e, sink);
    for (EventId e : ac.compromised.to_vector())
      if (!base.defined(q, e)) out.add_transition(q, a.tampered(e), sink);
  }
  out.validate();
  return {std::move(out), sink};
}

}  // namespace

AttackedSupervisor build_attacked_supervisor(const Bipartite& bts_m,
                                             const AttackConstraint& ac) {
  ac.validate(*bts_m.aut.alphabet);
  std::vector<bool> reaction(bts_m.control_state.size());
  for (std::size_t i = 0; i < reaction.size(); ++i)
    reaction[i] = !bts_m.control_state[i];
  AttackEncoding enc =
      encode_attack(bts_m.aut, reaction, ac, "detect", /*include_commands=*/true);
  if (enc.aut.num_states() != bts_m.aut.num_states() + 1)
    throw Error("attacked supervisor size mismatch");
  AttackedSupervisor out{std::move(enc.aut), enc.sink, bts_m.control_state};
  out.control_state.push_back(false);  // the detect sink
  return out;
}

CommandFilter build_observation_command_filter(
    const ObservationAutomaton& m_o, std::shared_ptr<const Alphabet> alphabet) {
  const Alphabet& a = *alphabet;
  const Automaton& mo = m_o.aut;
  EventSet events = a.plant_events() | a.commands();

  CommandFilter f{Automaton(alphabet, events), -1};
  int n = mo.num_states();
  for (StateId q = 0; q < n; ++q)
    f.aut.add_state(mo.label(q).empty() ? std::to_string(q) : mo.label(q));
  for (StateId q = 0; q < n; ++q) {
    std::string l = mo.label(q).empty() ? std::to_string(q) : mo.label(q);
    f.aut.add_state(l + "^com");
  }
  f.dump = f.aut.add_state("dump");
  auto com = [n](StateId q) { return n + q; };
  f.aut.set_initial(com(mo.initial()));

  EventSet obs = a.observable_events();
  EventSet unobs = a.unobservable_events();
  for (StateId q = 0; q < n; ++q) {
    EventSet recorded = mo.enabled(q);
    for (EventId g : a.commands().to_vector())
      if (recorded.is_subset_of(a.command_members(g)))
        f.aut.add_transition(com(q), g, q);
    for (EventId e : obs.to_vector()) {
      auto t = mo.next(q, e);
      f.aut.add_transition(q, e, t ? com(*t) : f.dump);
    }
    for (EventId e : unobs.to_vector()) f.aut.add_transition(q, e, q);
  }
  for (EventId e : (a.plant_events() | a.commands()).to_vector())
    f.aut.add_transition(f.dump, e, f.dump);
  f.aut.validate();
  return f;
}

ConsistentSupervisor build_consistent_supervisor(const Bipartite& ns,
                                                 const CommandFilter& oc) {
  TrackedProduct prod = sync_product_tracked({&ns.aut, &oc.aut});
  ConsistentSupervisor out{std::move(prod.aut), {}};
  const Alphabet& a = *out.aut.alphabet;
  out.reaction_side.reserve(out.aut.num_states());
  for (StateId s = 0; s < out.aut.num_states(); ++s)
    out.reaction_side.push_back(!ns.control_state[prod.origin[s][0]]);
  // Structural cross-check of the carried split.
  for (StateId s = 0; s < out.aut.num_states(); ++s)
    for (const auto& t : out.aut.out(s)) {
      bool is_command = a.commands().contains(t.event);
      if (is_command == out.reaction_side[s])
        throw Error("consistent supervisor split disagrees with structure");
    }
  return out;
}

AttackedConsistentSupervisor build_attacked_consistent_supervisor(
    const ConsistentSupervisor& ocns, const AttackConstraint& ac) {
  ac.validate(*ocns.aut.alphabet);
  AttackEncoding enc = encode_attack(ocns.aut, ocns.reaction_side, ac,
                                     "cov_brk", /*include_commands=*/true);
  if (enc.aut.num_states() != ocns.aut.num_states() + 1)
    throw Error("attacked consistent supervisor size mismatch");
  return {std::move(enc.aut), enc.sink};
}

Automaton build_least_permissive(const ObservationAutomaton& m_o) {
  const Automaton& mo = m_o.aut;
  const Alphabet& a = *mo.alphabet;
  Automaton s(mo.alphabet, a.plant_events());
  for (StateId q = 0; q < mo.num_states(); ++q)
    s.add_state(mo.label(q).empty() ? std::to_string(q) : mo.label(q));
  s.set_initial(mo.initial());

  EventSet unc = a.uncontrollable_events();
  EventSet unobs = a.unobservable_events();
  for (StateId q = 0; q < mo.num_states(); ++q) {
    for (const auto& t : mo.out(q)) s.add_transition(q, t.event, t.target);
    for (EventId e : (unc & unobs).to_vector()) s.add_transition(q, e, q);
    for (EventId e : (unc - unobs).to_vector())
      if (!mo.defined(q, e)) s.add_transition(q, e, m_o.deadlock);
  }
  s.validate();
  validate_supervisor(s);
  return s;
}

RiskSupervisor build_least_permissive_attacked(const Automaton& sdown,
                                               const AttackConstraint& ac) {
  const Alphabet& a = *sdown.alphabet;
  ac.validate(a);
  EventSet events = sdown.events;
  for (EventId e : ac.compromised.to_vector()) events.add(a.tampered(e));

  Automaton out(sdown.alphabet, events);
  for (StateId q = 0; q < sdown.num_states(); ++q)
    out.add_state(sdown.label(q), sdown.marked(q));
  StateId risk = out.add_state("risk");
  out.set_initial(sdown.initial());

  EventSet invisible = a.unobservable_events() | ac.compromised;
  auto defined_in_base = [&](StateId q, EventId e) {
    return q < sdown.num_states() && sdown.defined(q, e);
  };

  for (StateId q = 0; q < out.num_states(); ++q) {
    if (q < sdown.num_states()) {
      for (const auto& t : sdown.out(q)) {
        if (ac.compromised.contains(t.event)) {
          out.add_transition(q, a.tampered(t.event), t.target);
          out.add_transition(q, t.event, q);
        } else {
          out.add_transition(q, t.event, t.target);
        }
      }
    }
    for (EventId e : (ac.attackable & invisible).to_vector())
      if (!defined_in_base(q, e)) out.try_add_transition(q, e, q);
    for (EventId e : (ac.observable - ac.compromised).to_vector())
      if (!defined_in_base(q, e)) out.add_transition(q, e, risk);
    for (EventId e : ac.compromised.to_vector())
      if (!defined_in_base(q, e)) out.add_transition(q, a.tampered(e), risk);
  }
  out.validate();
  return {std::move(out), risk};
}

CompletedRiskSupervisor build_least_permissive_attacked_complete(
    const RiskSupervisor& sdown_a) {
  CompletionResult comp = complete(sdown_a.aut, "dump", sdown_a.aut.events);
  // Marked behavior: everything except the dump sink.
  for (StateId q = 0; q < comp.aut.num_states(); ++q)
    comp.aut.set_marked(q, q != comp.dump);
  return {std::move(comp.aut), sdown_a.risk, comp.dump};
}

}  // namespace cades
