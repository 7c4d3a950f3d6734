#pragma once

#include "cades/synthesis.hpp"

// Brute-force reference computations, kept independent of the library's
// algorithmic paths: they enumerate raw strings, tables or maps and decide
// by definition unfolding.
namespace cades::oracle {

// All strings of length <= max_len over `events` accepted by `a`, decided by
// running each candidate string from the initial state.
std::set<std::vector<EventId>> language_by_trial(const Automaton& a,
                                                 const std::vector<EventId>& events,
                                                 int max_len);

// Interleavings of two string sets over disjoint alphabets.
std::set<std::vector<EventId>> shuffle_strings(
    const std::set<std::vector<EventId>>& xs,
    const std::set<std::vector<EventId>>& ys);

// Natural projection applied to a whole string set.
std::set<std::vector<EventId>> project_strings(
    const std::set<std::vector<EventId>>& xs, const EventSet& keep);

// Reachability over transitions outside sigma_prime, by plain BFS on an
// explicit adjacency list.
std::vector<StateId> reach_by_bfs(const Automaton& a, StateId from,
                                  const EventSet& sigma_prime);

// Definition unfolding on strings of length <= max_len.
bool safety_by_unfolding(const Automaton& plant, const std::vector<bool>& bad,
                         const Automaton& sup, int max_len);
bool controllability_by_unfolding(const Automaton& plant, const Automaton& sup,
                                  const ControlConstraint& c, int max_len);

// Union of the closed-loop languages (strings of length <= max_len) over
// every safe belief-indexed control map. Exhaustive over maps.
std::set<std::vector<EventId>> policy_union_by_belief_maps(
    const Automaton& plant, const std::vector<bool>& bad,
    const ControlConstraint& c, int max_len);

// Union of the closed-loop languages (strings of length <= depth) over every
// safe decision tree on observation histories of length <= depth, with
// nothing controllable enabled beyond the horizon. Exhaustive over trees.
std::set<std::vector<EventId>> policy_union_by_history_trees(
    const Automaton& plant, const std::vector<bool>& bad,
    const ControlConstraint& c, int depth);

}  // namespace cades::oracle
