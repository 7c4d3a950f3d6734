#pragma once

#include "cades/fsa_ops.hpp"

namespace cades {

/// Control constraint (Sigma_ctl, Sigma_obs) for partial-observation
/// supervisor synthesis. In the default mode Sigma_ctl must be a subset of
/// Sigma_obs, which guarantees a supremal solution; the sound-only mode
/// lifts that check and yields a sound but possibly non-supremal result.
struct ControlConstraint {
  EventSet controllable;
  EventSet observable;
};

struct SupervisorSynthesis {
  // The synthesized supervisor: a deterministic automaton whose states are
  // plant-state estimates, every state marked, events outside the observable
  // set self-looping. Absent when no safe supervisor exists.
  std::optional<Automaton> supervisor;
  // estimates[s]: the set of plant states consistent with the observations
  // that lead to supervisor state s.
  std::vector<std::vector<StateId>> estimates;
  int rounds = 0;
  // Diagnostic for the empty result: the fixpoint round that deleted the
  // initial estimate.
  int initial_deleted_round = -1;

  bool has_solution() const { return supervisor.has_value(); }
};

/// Supremal safe partial-observation supervisor for `plant` avoiding the
/// `bad` states, realized as a fixpoint over the observer: estimates that can
/// reach a bad estimate through non-controllable events are deleted in
/// batches, estimates are re-derived from the pruned closed loop, and the
/// loop stops when nothing is deleted.
SupervisorSynthesis supremal_safe_supervisor(const Automaton& plant,
                                             const std::vector<bool>& bad,
                                             const ControlConstraint& c,
                                             bool sound_only = false);

/// No reachable state of plant || sup has a bad plant component.
bool check_safety(const Automaton& plant, const std::vector<bool>& bad,
                  const Automaton& sup);

/// Every event outside c.controllable that the plant can execute in the
/// closed loop is allowed by the supervisor at that point.
bool check_controllability(const Automaton& plant, const Automaton& sup,
                           const ControlConstraint& c);

/// The supervisor changes state only on events in c.observable; every other
/// defined event self-loops.
bool check_normality(const Automaton& sup, const ControlConstraint& c);

std::vector<bool> bad_by_plant_component(const TrackedProduct& prod,
                                         std::size_t component,
                                         const std::vector<bool>& bad);

}  // namespace cades
