#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cades/automaton.hpp"

namespace cades {

/// Synchronous product that remembers, for every product state, the component
/// state it projects to in each operand.
struct TrackedProduct {
  Automaton aut;
  std::vector<std::vector<StateId>> origin;  // origin[s][k] = state in part k
};

TrackedProduct sync_product_tracked(const std::vector<const Automaton*>& parts);
Automaton sync_product(const Automaton& a, const Automaton& b);

/// States reachable from q via strings over (events(a) - sigma_prime)*,
/// including q itself. Sorted.
std::vector<StateId> unobservable_reach(const Automaton& a, StateId q,
                                        const EventSet& sigma_prime);

/// Observer construction: power-set states, transitions on sigma_prime
/// events through the unobservable reach, self-loops on all other events of
/// the automaton. `cells[s]` is the sorted source-state subset of macro s.
struct ObserverResult {
  Automaton aut;
  std::vector<std::vector<StateId>> cells;
};

ObserverResult observer_project_tracked(const Automaton& a,
                                        const EventSet& sigma_prime);
Automaton observer_project(const Automaton& a, const EventSet& sigma_prime);

std::vector<EventId> project_string(const std::vector<EventId>& s,
                                    const EventSet& sigma_prime);

std::vector<bool> reachable_states(const Automaton& a);
Automaton trim_reachable(const Automaton& a);
bool is_marker_reachable(const Automaton& a);

/// Deletes the given states (and incident transitions), then trims to the
/// reachable part. Removing the initial state yields the empty automaton.
Automaton remove_states(const Automaton& a, const std::vector<bool>& del);
Automaton remove_states(const Automaton& a, const std::vector<StateId>& del);

/// Adds a fresh dump state and routes every undefined (state, event) pair
/// over `over` to it; the dump state self-loops on `over` and is unmarked.
struct CompletionResult {
  Automaton aut;
  StateId dump;
};
CompletionResult complete(const Automaton& a, const std::string& dump_label,
                          const EventSet& over);

/// Exactly the strings of L(a) of length <= max_len.
std::set<std::vector<EventId>> enumerate_language(const Automaton& a,
                                                  int max_len);

/// L(a) subseteq L(b), exact (product walk). On failure *witness, if given,
/// receives a shortest string of L(a) - L(b).
bool language_included(const Automaton& a, const Automaton& b,
                       std::vector<EventId>* witness = nullptr);
bool language_equal(const Automaton& a, const Automaton& b);

/// BFS renumbering from the initial state with ascending event order;
/// unreachable states are dropped. Identical inputs give identical outputs.
Automaton canonical_form(const Automaton& a);

/// Shortest word reaching a state satisfying `goal`, if any.
std::optional<std::vector<EventId>> shortest_word_to(
    const Automaton& a, const std::function<bool(StateId)>& goal);

std::string format_word(const Alphabet& alphabet,
                        const std::vector<EventId>& word);

}  // namespace cades
