#pragma once

#include <chrono>
#include <map>

#include "cades/attack_models.hpp"

namespace cades {

struct PipelineOptions {
  bool sound_only = false;        // allow unobservable controllable events
  bool keep_intermediates = false;
};

/// Supremal safe command-nondeterministic supervisor for the lifted plant
/// g || command-execution, with damage states removed from the requirement.
struct CommandSupervisorResult {
  std::optional<Bipartite> ns;
  int initial_deleted_round = -1;
  int lifted_plant_states = 0;
};
CommandSupervisorResult procedure1(const Automaton& g,
                                   const PipelineOptions& opts = {});

struct SynthesisOutcome {
  std::optional<Automaton> attacker;
  bool marker_reachable = false;
  bool sound_incomplete = false;
  // empty when a solution exists; otherwise one of
  // "no-safe-supervisor", "covertness-unenforceable", "damage-not-certified".
  std::string no_solution_reason;
  std::map<std::string, Automaton> intermediates;
  std::vector<std::pair<std::string, int>> model_sizes;
  double seconds = 0.0;
  // For each attacker state, which composed-plant states it may be in; used
  // to flag damage states in renders.
  std::vector<std::vector<StateId>> attacker_estimates;
  std::vector<bool> estimate_contains_damage;

  bool has_solution() const { return attacker.has_value(); }
  int exit_code() const { return has_solution() ? 0 : 1; }
};

/// Composes the attacked closed-loop plant from the five component models,
/// removes covertness-breaking states, synthesizes the supremal supervisor
/// over the attacker's control constraint, and certifies damage reachability
/// of the closed loop.
SynthesisOutcome procedure2(const Automaton& g, const Automaton& cea,
                            const Automaton& ac_template,
                            const AttackedConsistentSupervisor& ocnsa,
                            const CompletedRiskSupervisor& sdown_bar,
                            const AttackConstraint& ac,
                            const PipelineOptions& opts = {});

/// Full flow: procedure1, the model builders, procedure2.
SynthesisOutcome synth_attacker(const Automaton& g, const Automaton& m_o,
                                const AttackConstraint& ac,
                                const PipelineOptions& opts = {});

/// Completes a synthesized supervisor so that every event outside the
/// control constraint is defined at every state (self-loops); the closed
/// loop is unchanged because the added transitions can never fire.
Automaton make_admissible(const Automaton& sup, const ControlConstraint& c);

}  // namespace cades
