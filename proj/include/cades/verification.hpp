#pragma once

#include "cades/pipeline.hpp"

namespace cades {

/// The observations are contained in the observable projection of the
/// closed loop of g under s (with explicit command sending). Decided by
/// automaton inclusion against the observer, never by sampling.
bool check_consistency(const Automaton& g, const Automaton& s,
                       const Automaton& m_o);

/// No state of the attacked closed loop combines an undamaged plant with the
/// supervisor's detect state.
bool check_covert(const Automaton& g, const Automaton& cea,
                  const Automaton& ac_template, const AttackedSupervisor& bts_a,
                  const Automaton& attacker,
                  std::vector<EventId>* witness = nullptr);

/// The attacked closed loop can reach a damage-marked state.
bool check_damage(const Automaton& g, const Automaton& cea,
                  const Automaton& ac_template, const AttackedSupervisor& bts_a,
                  const Automaton& attacker,
                  std::vector<EventId>* witness = nullptr);

struct SupervisorEnumOptions {
  int state_bound = -1;       // default: observation states + 1
  long count_bound = 10000;   // accepted supervisors
  long node_budget = 2000000; // DFS row assignments
  bool require_safe = true;
};

struct EnumeratedSupervisors {
  std::vector<Automaton> supervisors;  // canonical forms, deterministic order
  bool budget_exhausted = false;  // the node budget cut the search
  bool count_reached = false;     // the requested count was filled
  long explored = 0;              // completed candidates examined
  bool truncated() const { return budget_exhausted || count_reached; }
};

/// Deterministic, isomorphism-pruned generation of supervisors (every
/// uncontrollable event enabled everywhere, defined unobservable events
/// self-looping, enabled sets drawn from the command set), filtered by
/// consistency with the observations and, optionally, safety. The least
/// permissive supervisor derived from the observations is always offered as
/// a candidate. Exhaustive up to the bounds; `truncated` reports budget cuts.
EnumeratedSupervisors enumerate_consistent_supervisors(
    const Automaton& g, const Automaton& m_o,
    const SupervisorEnumOptions& opts = {});

struct VerifyFailure {
  int supervisor = -1;
  std::string kind;  // "covertness" or "damage"
  std::vector<EventId> trace;
};

struct VerifyReport {
  int supervisors_checked = 0;
  bool truncated_enumeration = false;
  std::vector<VerifyFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// Covertness and damage reachability of `attacker` against every enumerated
/// consistent safe supervisor.
VerifyReport verify_successful(const Automaton& attacker, const Automaton& g,
                               const Automaton& m_o, const AttackConstraint& ac,
                               const SupervisorEnumOptions& bounds = {});

struct PolicyEnumOptions {
  int depth = 4;              // decision tree depth over attacker observations
  long policy_budget = 200000;
  int want = -1;              // stop after this many successful; -1 = no cap
};

struct EnumeratedPolicies {
  std::vector<Automaton> successful;
  long explored = 0;
  bool exhausted = true;  // the whole bounded policy space was examined
};

/// Exhaustive search over attacker decision trees of bounded depth (frozen —
/// nothing attacker-controllable enabled — beyond it), evaluated against the
/// given list of supervisors. Only events fireable in the supervisor-free
/// arena are branched on; covertness violations cut whole subtrees.
EnumeratedPolicies enumerate_successful_attackers(
    const Automaton& g, const AttackConstraint& ac,
    const std::vector<Automaton>& supervisors, const PolicyEnumOptions& opts);

}  // namespace cades
