#pragma once

#include "cades/synthesis.hpp"

namespace cades {

/// The attack constraint (Sigma_o, Sigma_sa, Sigma_ca): which events the
/// attacker observes, which sensor readings it can tamper with, and which
/// actuator events it can force or block.
struct AttackConstraint {
  EventSet observable;   // Sigma_o
  EventSet compromised;  // Sigma_sa, subset of Sigma_o
  EventSet attackable;   // Sigma_ca, subset of Sigma_c

  static AttackConstraint from_alphabet(const Alphabet& a);
  void validate(const Alphabet& a) const;

  // The derived attacker control constraint:
  // (Sigma_ca + tampered copies + stop, Sigma_o + tampered copies + stop).
  ControlConstraint attacker_constraint(const Alphabet& a) const;
};

/// A validated observation automaton: deterministic, over observable events
/// only, acyclic (finite language) with exactly one deadlocked state that
/// every maximal string reaches.
struct ObservationAutomaton {
  Automaton aut;
  StateId deadlock = -1;
};
ObservationAutomaton validate_observations(const Automaton& m_o);

/// Throws unless `s` satisfies the supervisor conditions: every
/// uncontrollable event defined at every state, defined unobservable events
/// self-loop.
void validate_supervisor(const Automaton& s);

/// 3-state template of the sensor attack: observation of a compromised event
/// allows a tampered copy or a bare stop (deletion) before anything else
/// happens; other observables only allow stop.
Automaton build_attack_template(std::shared_ptr<const Alphabet> alphabet,
                                const AttackConstraint& ac);

/// Command execution: commands received at the idle state, unobservable
/// members self-loop, observable members return to idle.
Automaton build_command_execution(std::shared_ptr<const Alphabet> alphabet);

/// Command execution under actuator attack: adds attackable-event firings at
/// every command state and uncontrollable firings at the idle state.
Automaton build_command_execution_attacked(
    std::shared_ptr<const Alphabet> alphabet, const AttackConstraint& ac);

/// A bipartite supervisor: control states issue one command event, reaction
/// states consume plant events.
struct Bipartite {
  Automaton aut;
  std::vector<bool> control_state;
};

/// Splits a supervisor into command-sending and reaction phases.
Bipartite build_bipartite_supervisor(const Automaton& s);

/// Refines a bipartite supervisor with the observer of g || ce over the
/// observable events and the commands (the supervisor's embedded monitor).
Bipartite build_monitored_supervisor(const Bipartite& bts, const Automaton& g,
                                     const Automaton& ce);

struct AttackedSupervisor {
  Automaton aut;
  StateId detect = -1;
  std::vector<bool> control_state;
};

/// Encodes sensor tampering on a monitored bipartite supervisor: compromised
/// transitions are relabelled to tampered copies with invisible self-loops,
/// attackable invisible events self-loop at reaction states, and unexpected
/// observations route to a fresh `detect` state.
AttackedSupervisor build_attacked_supervisor(const Bipartite& bts_m,
                                             const AttackConstraint& ac);

/// Bipartite command filter derived from the observations: a command is
/// issuable after an observed history iff it covers the events recorded
/// there; unrecorded observations fall into an all-accepting dump state.
struct CommandFilter {
  Automaton aut;
  StateId dump = -1;
};
CommandFilter build_observation_command_filter(
    const ObservationAutomaton& m_o, std::shared_ptr<const Alphabet> alphabet);

/// Product of the supremal safe command-nondeterministic supervisor with the
/// command filter; remembers which states sit on the reaction side.
struct ConsistentSupervisor {
  Automaton aut;
  std::vector<bool> reaction_side;
};
ConsistentSupervisor build_consistent_supervisor(const Bipartite& ns,
                                                 const CommandFilter& oc);

/// Attack effects on the consistent supervisor, with a fresh covertness-
/// breaking sink for observations impossible in the absence of attack.
struct AttackedConsistentSupervisor {
  Automaton aut;
  StateId covert_break = -1;
};
AttackedConsistentSupervisor build_attacked_consistent_supervisor(
    const ConsistentSupervisor& ocns, const AttackConstraint& ac);

/// Least permissive supervisor consistent with the observations: recorded
/// transitions plus the forced uncontrollable completions.
Automaton build_least_permissive(const ObservationAutomaton& m_o);

struct RiskSupervisor {
  Automaton aut;
  StateId risk = -1;
};
/// Attack effects on the least permissive supervisor; enablements that the
/// observations do not certify route to a fresh `risk` state.
RiskSupervisor build_least_permissive_attacked(const Automaton& sdown,
                                               const AttackConstraint& ac);

struct CompletedRiskSupervisor {
  Automaton aut;
  StateId risk = -1;
  StateId dump = -1;
};
/// Completion of the attacked least permissive supervisor into a total
/// automaton whose marked behavior is everything except the dump sink.
CompletedRiskSupervisor build_least_permissive_attacked_complete(
    const RiskSupervisor& sdown_a);

}  // namespace cades
