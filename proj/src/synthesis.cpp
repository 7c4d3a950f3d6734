#include "cades/synthesis.hpp"

#include <algorithm>
#include <deque>

namespace cades {

namespace {

// Backward closure of the bad macros along transitions labelled outside the
// controllable set.
std::vector<bool> doomed_macros(const Automaton& s,
                                const std::vector<bool>& bad_macro,
                                const EventSet& controllable) {
  std::vector<std::vector<StateId>> rev(s.num_states());
  for (StateId q = 0; q < s.num_states(); ++q)
    for (const auto& t : s.out(q))
      if (!controllable.contains(t.event) && t.target != q)
        rev[t.target].push_back(q);

  std::vector<bool> doomed = bad_macro;
  std::deque<StateId> queue;
  for (StateId q = 0; q < s.num_states(); ++q)
    if (doomed[q]) queue.push_back(q);
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (StateId p : rev[q])
      if (!doomed[p]) {
        doomed[p] = true;
        queue.push_back(p);
      }
  }
  return doomed;
}

}  // namespace

SupervisorSynthesis supremal_safe_supervisor(const Automaton& plant,
                                             const std::vector<bool>& bad,
                                             const ControlConstraint& c,
                                             bool sound_only) {
  plant.validate();
  if (plant.is_empty()) throw Error("synthesis over the empty plant");
  if (static_cast<int>(bad.size()) != plant.num_states())
    throw Error("bad-state vector size mismatch");
  if (!c.controllable.is_subset_of(c.observable) && !sound_only)
    throw Error(
        "control constraint has unobservable controllable events; supremality "
        "would be lost (use the sound-only mode to proceed)");

  SupervisorSynthesis out;

  ObserverResult cur = observer_project_tracked(plant, c.observable);
  std::vector<std::vector<StateId>> estimates = std::move(cur.cells);
  Automaton sup = std::move(cur.aut);

  for (;;) {
    out.rounds++;
    if (out.rounds > plant.num_states() * 64 + 64)
      throw Error("synthesis fixpoint failed to converge");

    std::vector<bool> bad_macro(sup.num_states(), false);
    bool any = false;
    for (StateId m = 0; m < sup.num_states(); ++m)
      for (StateId q : estimates[m])
        if (bad[q]) {
          bad_macro[m] = true;
          any = true;
          break;
        }
    if (!any) break;

    std::vector<bool> doomed = doomed_macros(sup, bad_macro, c.controllable);
    if (doomed[sup.initial()]) {
      out.initial_deleted_round = out.rounds;
      return out;
    }

    sup = remove_states(sup, doomed);

    // Re-derive the estimates from the pruned closed loop.
    TrackedProduct loop = sync_product_tracked({&plant, &sup});
    ObserverResult re = observer_project_tracked(loop.aut, c.observable);
    estimates.assign(re.aut.num_states(), {});
    for (StateId m = 0; m < re.aut.num_states(); ++m) {
      std::vector<StateId>& cell = estimates[m];
      for (StateId prod_state : re.cells[m])
        cell.push_back(loop.origin[prod_state][0]);
      std::sort(cell.begin(), cell.end());
      cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
    }
    sup = std::move(re.aut);
  }

  // Canonical numbering; keep estimates aligned and use them as labels.
  Automaton canon = canonical_form(sup);
  std::vector<std::vector<StateId>> canon_estimates(canon.num_states());
  {
    // canonical_form renumbers by BFS; recompute the mapping by replaying it.
    std::vector<StateId> order;
    std::vector<StateId> remap(sup.num_states(), -1);
    std::deque<StateId> queue{sup.initial()};
    remap[sup.initial()] = 0;
    order.push_back(sup.initial());
    while (!queue.empty()) {
      StateId s = queue.front();
      queue.pop_front();
      for (const auto& t : sup.out(s))
        if (remap[t.target] < 0) {
          remap[t.target] = static_cast<StateId>(order.size());
          order.push_back(t.target);
          queue.push_back(t.target);
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i)
      canon_estimates[i] = estimates[order[i]];
  }
  canon.mark_all();
  for (StateId s = 0; s < canon.num_states(); ++s) {
    std::string l = "{";
    for (std::size_t i = 0; i < canon_estimates[s].size(); ++i) {
      if (i) l += ",";
      l += std::to_string(canon_estimates[s][i]);
    }
    canon.set_label(s, l + "}");
  }
  out.supervisor = std::move(canon);
  out.estimates = std::move(canon_estimates);
  return out;
}

bool check_safety(const Automaton& plant, const std::vector<bool>& bad,
                  const Automaton& sup) {
  if (sup.is_empty()) return true;
  TrackedProduct loop = sync_product_tracked({&plant, &sup});
  for (StateId s = 0; s < loop.aut.num_states(); ++s)
    if (bad[loop.origin[s][0]]) return false;
  return true;
}

bool check_controllability(const Automaton& plant, const Automaton& sup,
                           const ControlConstraint& c) {
  if (!plant.same_alphabet_as(sup)) throw Error("alphabet mismatch");
  if (sup.is_empty()) return true;
  TrackedProduct loop = sync_product_tracked({&plant, &sup});
  for (StateId s = 0; s < loop.aut.num_states(); ++s) {
    StateId p = loop.origin[s][0];
    StateId m = loop.origin[s][1];
    for (const auto& t : plant.out(p)) {
      if (c.controllable.contains(t.event)) continue;
      if (!sup.events.contains(t.event)) continue;  // private to the plant
      if (!sup.defined(m, t.event)) return false;
    }
  }
  return true;
}

bool check_normality(const Automaton& sup, const ControlConstraint& c) {
  for (StateId q = 0; q < sup.num_states(); ++q)
    for (const auto& t : sup.out(q))
      if (!c.observable.contains(t.event) && t.target != q) return false;
  return true;
}

std::vector<bool> bad_by_plant_component(const TrackedProduct& prod,
                                         std::size_t component,
                                         const std::vector<bool>& bad) {
  std::vector<bool> out(prod.aut.num_states(), false);
  for (StateId s = 0; s < prod.aut.num_states(); ++s)
    out[s] = bad[prod.origin[s][component]];
  return out;
}

}  // namespace cades
