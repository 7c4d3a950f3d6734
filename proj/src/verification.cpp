#include "cades/verification.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace cades {

bool check_consistency(const Automaton& g, const Automaton& s,
                       const Automaton& m_o) {
  validate_supervisor(s);
  if (!g.same_alphabet_as(s) || !g.same_alphabet_as(m_o))
    throw Error("alphabet mismatch");
  Automaton ce = build_command_execution(g.alphabet);
  Bipartite bts = build_bipartite_supervisor(s);
  Automaton loop = sync_product(sync_product(g, ce), bts.aut);
  Automaton obs = observer_project(loop, g.alphabet->observable_events());
  return language_included(m_o, obs);
}

namespace {

TrackedProduct attacked_loop(const Automaton& g, const Automaton& cea,
                             const Automaton& ac_template,
                             const AttackedSupervisor& bts_a,
                             const Automaton& attacker) {
  return sync_product_tracked({&g, &cea, &ac_template, &bts_a.aut, &attacker});
}

}  // namespace

bool check_covert(const Automaton& g, const Automaton& cea,
                  const Automaton& ac_template, const AttackedSupervisor& bts_a,
                  const Automaton& attacker, std::vector<EventId>* witness) {
  if (attacker.is_empty()) return true;
  TrackedProduct loop = attacked_loop(g, cea, ac_template, bts_a, attacker);
  auto exposed = [&](StateId s) {
    return loop.origin[s][3] == bts_a.detect && !g.marked(loop.origin[s][0]);
  };
  auto w = shortest_word_to(loop.aut, exposed);
  if (w && witness) *witness = *w;
  return !w.has_value();
}

bool check_damage(const Automaton& g, const Automaton& cea,
                  const Automaton& ac_template, const AttackedSupervisor& bts_a,
                  const Automaton& attacker, std::vector<EventId>* witness) {
  if (attacker.is_empty()) return false;
  TrackedProduct loop = attacked_loop(g, cea, ac_template, bts_a, attacker);
  auto w = shortest_word_to(
      loop.aut, [&](StateId s) { return loop.aut.marked(s); });
  if (w && witness) *witness = *w;
  return w.has_value();
}

// ---------------------------------------------------------------------------
// Supervisor enumeration.
// ---------------------------------------------------------------------------

namespace {

// Closed-loop configurations (plant state, supervisor state) under the
// command-sending semantics: the supervisor's enabled set acts as the issued
// command; observable events move both parts, unobservable ones only the
// plant. Equivalent to the projection of g || ce || bipartite(s) onto plant
// events, which keeps the enumerator's inner filters cheap.
struct RowTable {
  // Per supervisor state: command member set and targets of its observable
  // members (parallel to obs_members_of_cmd[cmd]).
  std::vector<int> cmd;                        // -1 = unassigned
  std::vector<std::vector<StateId>> targets;
};

struct EnumWorld {
  const Automaton* g = nullptr;
  const Alphabet* a = nullptr;
  ObservationAutomaton obs;
  std::vector<EventId> commands;                    // ascending
  std::vector<std::vector<EventId>> cmd_members;    // per command, ascending
  std::vector<std::vector<EventId>> cmd_obs;        // observable members
  std::vector<std::vector<EventId>> cmd_unobs;      // unobservable members
  std::vector<StateId> mo_topo;                     // observation states, topological
};

struct Config {
  StateId g, s;
  bool operator<(const Config& o) const {
    return g != o.g ? g < o.g : s < o.s;
  }
  bool operator==(const Config& o) const { return g == o.g && s == o.s; }
};

// Set of closed-loop configurations plus an "unknown" marker meaning some
// run escaped into a supervisor state whose row is not assigned yet.
struct ConfigSet {
  std::vector<Config> known;
  bool unknown = false;
};

int find_index(const std::vector<EventId>& v, EventId e) {
  auto it = std::lower_bound(v.begin(), v.end(), e);
  return (it != v.end() && *it == e) ? static_cast<int>(it - v.begin()) : -1;
}

ConfigSet closure(const EnumWorld& w, const RowTable& rows,
                  std::vector<Config> seed, bool seed_unknown) {
  ConfigSet out;
  out.unknown = seed_unknown;
  std::set<Config> seen(seed.begin(), seed.end());
  std::deque<Config> queue(seed.begin(), seed.end());
  while (!queue.empty()) {
    Config c = queue.front();
    queue.pop_front();
    if (rows.cmd[c.s] < 0) {
      out.unknown = true;
      continue;
    }
    for (EventId e : w.cmd_unobs[rows.cmd[c.s]]) {
      auto gn = w.g->next(c.g, e);
      if (!gn) continue;
      Config n{*gn, c.s};
      if (seen.insert(n).second) queue.push_back(n);
    }
  }
  for (const Config& c : seen)
    if (rows.cmd[c.s] >= 0) out.known.push_back(c);
  std::sort(out.known.begin(), out.known.end());
  return out;
}

ConfigSet step_observable(const EnumWorld& w, const RowTable& rows,
                          const ConfigSet& from, EventId e) {
  std::vector<Config> seed;
  for (const Config& c : from.known) {
    int cmd = rows.cmd[c.s];
    int pos = find_index(w.cmd_obs[cmd], e);
    if (pos < 0) continue;  // event not enabled by the issued command
    auto gn = w.g->next(c.g, e);
    if (!gn) continue;
    seed.push_back({*gn, rows.targets[c.s][pos]});
  }
  std::sort(seed.begin(), seed.end());
  seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
  return closure(w, rows, std::move(seed), from.unknown);
}

// Damage reachable using assigned rows only; sound for pruning because
// assigning further rows can only add behavior.
bool partial_damage(const EnumWorld& w, const RowTable& rows) {
  std::set<Config> seen;
  std::deque<Config> queue;
  Config init{w.g->initial(), 0};
  seen.insert(init);
  queue.push_back(init);
  while (!queue.empty()) {
    Config c = queue.front();
    queue.pop_front();
    if (w.g->marked(c.g)) return true;
    int cmd = rows.cmd[c.s];
    if (cmd < 0) continue;
    for (EventId e : w.cmd_members[cmd]) {
      auto gn = w.g->next(c.g, e);
      if (!gn) continue;
      bool observable = w.a->observable_events().contains(e);
      Config n{*gn, c.s};
      if (observable) {
        int pos = find_index(w.cmd_obs[cmd], e);
        n.s = rows.targets[c.s][pos];
      }
      if (seen.insert(n).second) queue.push_back(n);
    }
  }
  return false;
}

// False when some observed string is already unrealizable through the
// assigned rows (runs escaping into unassigned rows count as realizable).
bool partial_consistent(const EnumWorld& w, const RowTable& rows) {
  std::vector<ConfigSet> at(w.obs.aut.num_states());
  std::vector<bool> set(w.obs.aut.num_states(), false);
  StateId root = w.obs.aut.initial();
  at[root] = closure(w, rows, {{w.g->initial(), 0}}, false);
  set[root] = true;
  for (StateId m : w.mo_topo) {
    if (!set[m]) continue;
    if (at[m].known.empty() && !at[m].unknown) return false;
    for (const auto& t : w.obs.aut.out(m)) {
      ConfigSet next = step_observable(w, rows, at[m], t.event);
      if (next.known.empty() && !next.unknown) return false;
      at[t.target] = std::move(next);  // observation automata are trees
      set[t.target] = true;
    }
  }
  return true;
}

std::vector<StateId> topo_order(const Automaton& dag) {
  std::vector<int> indeg(dag.num_states(), 0);
  for (StateId q = 0; q < dag.num_states(); ++q)
    for (const auto& t : dag.out(q)) indeg[t.target]++;
  std::deque<StateId> queue;
  for (StateId q = 0; q < dag.num_states(); ++q)
    if (indeg[q] == 0) queue.push_back(q);
  std::vector<StateId> order;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    order.push_back(q);
    for (const auto& t : dag.out(q))
      if (--indeg[t.target] == 0) queue.push_back(t.target);
  }
  return order;
}

Automaton supervisor_from_rows(const EnumWorld& w, const RowTable& rows,
                               int n) {
  Automaton s(w.g->alphabet, w.a->plant_events());
  for (int q = 0; q < n; ++q) s.add_state(std::to_string(q));
  s.set_initial(0);
  for (int q = 0; q < n; ++q) {
    int cmd = rows.cmd[q];
    for (std::size_t i = 0; i < w.cmd_obs[cmd].size(); ++i)
      s.add_transition(q, w.cmd_obs[cmd][i], rows.targets[q][i]);
    for (EventId e : w.cmd_unobs[cmd]) s.add_transition(q, e, q);
  }
  s.validate();
  return s;
}

std::string structure_key(const Automaton& a) {
  std::string k = std::to_string(a.num_states()) + ";" +
                  std::to_string(a.initial()) + ";";
  for (StateId q = 0; q < a.num_states(); ++q) {
    for (const auto& t : a.out(q)) {
      k += std::to_string(q) + "," + std::to_string(t.event) + "," +
           std::to_string(t.target) + ";";
    }
    k += a.marked(q) ? "m" : ".";
  }
  return k;
}

struct EnumState {
  const SupervisorEnumOptions* opts;
  EnumWorld world;
  RowTable rows;
  int n = 0;
  int max_ref = 0;
  long nodes = 0;
  bool out_of_budget = false;
  long explored = 0;
  std::map<std::string, Automaton> accepted;

  bool budget_ok() {
    if (++nodes > opts->node_budget) out_of_budget = true;
    return !out_of_budget;
  }
  bool full() const {
    return static_cast<long>(accepted.size()) >= opts->count_bound;
  }

  void offer(const Automaton& s) {
    Automaton canon = canonical_form(s);
    std::string key = structure_key(canon);
    if (accepted.count(key)) return;
    accepted.emplace(std::move(key), std::move(canon));
  }

  void complete() {
    if (max_ref != n - 1) return;  // states must all be referenced
    explored++;
    // The partial filters are exact once every row is assigned.
    offer(supervisor_from_rows(world, rows, n));
  }

  void assign_targets(int q, std::size_t pos);

  void assign_row(int q) {
    if (!budget_ok() || full()) return;
    if (q == n) {
      complete();
      return;
    }
    if (q > max_ref) return;  // state q was never referenced: not canonical
    for (std::size_t c = 0; c < world.commands.size(); ++c) {
      rows.cmd[q] = static_cast<int>(c);
      rows.targets[q].assign(world.cmd_obs[c].size(), 0);
      assign_targets(q, 0);
      if (out_of_budget || full()) break;
    }
    rows.cmd[q] = -1;
    rows.targets[q].clear();
  }
};

void EnumState::assign_targets(int q, std::size_t pos) {
  if (!budget_ok() || full()) return;
  int cmd = rows.cmd[q];
  if (pos == world.cmd_obs[cmd].size()) {
    if (opts->require_safe && partial_damage(world, rows)) return;
    if (!partial_consistent(world, rows)) return;
    assign_row(q + 1);
    return;
  }
  int limit = std::min(max_ref + 1, n - 1);
  for (int t = 0; t <= limit; ++t) {
    rows.targets[q][pos] = t;
    int saved = max_ref;
    if (t > max_ref) max_ref = t;
    assign_targets(q, pos + 1);
    max_ref = saved;
    if (out_of_budget || full()) return;
  }
}

}  // namespace

EnumeratedSupervisors enumerate_consistent_supervisors(
    const Automaton& g, const Automaton& m_o,
    const SupervisorEnumOptions& opts) {
  g.validate();
  const Alphabet& a = *g.alphabet;

  EnumState st;
  SupervisorEnumOptions effective = opts;
  if (effective.state_bound < 0) effective.state_bound = m_o.num_states() + 1;
  st.opts = &effective;

  st.world.g = &g;
  st.world.a = &a;
  st.world.obs = validate_observations(m_o);
  st.world.mo_topo = topo_order(m_o);
  for (EventId c : a.commands().to_vector()) {
    st.world.commands.push_back(c);
    std::vector<EventId> members = a.command_members(c).to_vector();
    std::vector<EventId> obs, unobs;
    for (EventId e : members)
      (a.observable_events().contains(e) ? obs : unobs).push_back(e);
    st.world.cmd_members.push_back(std::move(members));
    st.world.cmd_obs.push_back(std::move(obs));
    st.world.cmd_unobs.push_back(std::move(unobs));
  }

  // The least permissive consistent supervisor is always a candidate.
  {
    Automaton sdown = build_least_permissive(st.world.obs);
    bool ok = check_consistency(g, sdown, m_o);
    if (ok && effective.require_safe) {
      Automaton ce = build_command_execution(g.alphabet);
      Bipartite bts = build_bipartite_supervisor(sdown);
      TrackedProduct loop =
          sync_product_tracked({&g, &ce, &bts.aut});
      for (StateId s = 0; s < loop.aut.num_states(); ++s)
        if (g.marked(loop.origin[s][0])) {
          ok = false;
          break;
        }
    }
    if (ok && sdown.num_states() <= effective.state_bound) st.offer(sdown);
  }

  for (int n = 1; n <= effective.state_bound; ++n) {
    if (st.out_of_budget || st.full()) break;
    st.n = n;
    st.max_ref = 0;
    st.rows.cmd.assign(n, -1);
    st.rows.targets.assign(n, {});
    st.assign_row(0);
  }

  EnumeratedSupervisors out;
  out.explored = st.explored;
  out.budget_exhausted = st.out_of_budget;
  out.count_reached = st.full();
  for (auto& [key, aut] : st.accepted) out.supervisors.push_back(aut);
  std::sort(out.supervisors.begin(), out.supervisors.end(),
            [](const Automaton& x, const Automaton& y) {
              if (x.num_states() != y.num_states())
                return x.num_states() < y.num_states();
              return structure_key(x) < structure_key(y);
            });
  return out;
}

VerifyReport verify_successful(const Automaton& attacker, const Automaton& g,
                               const Automaton& m_o, const AttackConstraint& ac,
                               const SupervisorEnumOptions& bounds) {
  EnumeratedSupervisors sups = enumerate_consistent_supervisors(g, m_o, bounds);
  VerifyReport report;
  report.truncated_enumeration = sups.truncated();
  report.supervisors_checked = static_cast<int>(sups.supervisors.size());

  Automaton ce = build_command_execution(g.alphabet);
  Automaton cea = build_command_execution_attacked(g.alphabet, ac);
  Automaton ac_template = build_attack_template(g.alphabet, ac);

  for (std::size_t i = 0; i < sups.supervisors.size(); ++i) {
    Bipartite bts = build_bipartite_supervisor(sups.supervisors[i]);
    Bipartite bts_m = build_monitored_supervisor(bts, g, ce);
    AttackedSupervisor bts_a = build_attacked_supervisor(bts_m, ac);
    std::vector<EventId> trace;
    if (!check_covert(g, cea, ac_template, bts_a, attacker, &trace))
      report.failures.push_back(
          {static_cast<int>(i), "covertness", std::move(trace)});
    trace.clear();
    if (!check_damage(g, cea, ac_template, bts_a, attacker, &trace))
      report.failures.push_back(
          {static_cast<int>(i), "damage", std::move(trace)});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Attacker policy enumeration.
// ---------------------------------------------------------------------------

namespace {

struct PolicyNode {
  std::vector<StateId> belief;  // arena states, sorted
  int depth = 0;
  std::vector<EventId> fireable_ctl;
  std::vector<EventId> fireable_unctl;  // observable, not attacker-controllable
  int decision = 0;                     // mask over fireable_ctl
  std::vector<std::pair<EventId, int>> children;  // -1 = frozen sink
};

struct PolicySearch {
  const Automaton* arena = nullptr;
  const Alphabet* alphabet = nullptr;
  ControlConstraint cac;
  std::vector<EventId> observable;  // attacker-observable, ascending
  int depth_limit = 4;

  const Automaton* g = nullptr;
  const Automaton* cea = nullptr;
  const Automaton* ac_template = nullptr;
  std::vector<AttackedSupervisor> targets;

  std::vector<PolicyNode> nodes;
  long explored = 0;
  long calls = 0;
  long budget = 0;
  int want = -1;
  bool exhausted = true;
  std::vector<Automaton> successful;

  std::vector<StateId> closure(std::vector<StateId> seed) const {
    std::vector<bool> seen(arena->num_states(), false);
    std::deque<StateId> queue;
    for (StateId q : seed)
      if (!seen[q]) {
        seen[q] = true;
        queue.push_back(q);
      }
    while (!queue.empty()) {
      StateId s = queue.front();
      queue.pop_front();
      for (const auto& t : arena->out(s)) {
        if (cac.observable.contains(t.event)) continue;
        if (!seen[t.target]) {
          seen[t.target] = true;
          queue.push_back(t.target);
        }
      }
    }
    std::vector<StateId> out;
    for (StateId q = 0; q < arena->num_states(); ++q)
      if (seen[q]) out.push_back(q);
    return out;
  }

  int make_node(std::vector<StateId> belief, int depth) {
    PolicyNode n;
    n.belief = std::move(belief);
    n.depth = depth;
    for (EventId e : observable) {
      bool fires = false;
      for (StateId q : n.belief)
        if (arena->defined(q, e)) {
          fires = true;
          break;
        }
      if (!fires) continue;
      (cac.controllable.contains(e) ? n.fireable_ctl : n.fireable_unctl)
          .push_back(e);
    }
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  std::vector<StateId> step(const std::vector<StateId>& belief,
                            EventId e) const {
    std::vector<StateId> out;
    for (StateId q : belief) {
      auto t = arena->next(q, e);
      if (t) out.push_back(*t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Attacker automaton for the current (possibly partial) assignment;
  // nodes at or past `assigned_upto` are frozen.
  Automaton build(std::size_t assigned_upto) const {
    EventSet events = arena->events;
    Automaton aut(arena->alphabet, events);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      aut.add_state("n" + std::to_string(i));
    StateId frozen = aut.add_state("frozen");
    aut.set_initial(0);

    std::vector<EventId> invisible_unctl, observable_unctl;
    for (EventId e : events.to_vector()) {
      if (cac.controllable.contains(e)) continue;
      (cac.observable.contains(e) ? observable_unctl : invisible_unctl)
          .push_back(e);
    }

    auto wire = [&](StateId s, const PolicyNode* n, bool frozen_state) {
      for (EventId e : invisible_unctl) aut.add_transition(s, e, s);
      std::map<EventId, StateId> out_edges;
      if (!frozen_state) {
        for (const auto& [e, child] : n->children)
          out_edges[e] = child < 0 ? frozen : static_cast<StateId>(child);
      }
      for (EventId e : observable_unctl) {
        auto it = out_edges.find(e);
        aut.add_transition(s, e, it != out_edges.end() ? it->second : s);
      }
      for (const auto& [e, t] : out_edges)
        if (cac.controllable.contains(e)) aut.add_transition(s, e, t);
    };

    for (std::size_t i = 0; i < nodes.size(); ++i) {
      bool is_frozen = i >= assigned_upto;
      if (is_frozen) {
        wire(static_cast<StateId>(i), nullptr, true);
      } else {
        wire(static_cast<StateId>(i), &nodes[i], false);
      }
    }
    wire(frozen, nullptr, true);
    aut.validate();
    return aut;
  }

  bool covert_everywhere(const Automaton& attacker) const {
    for (const auto& bts_a : targets)
      if (!check_covert(*g, *cea, *ac_template, bts_a, attacker)) return false;
    return true;
  }

  bool damage_everywhere(const Automaton& attacker) const {
    for (const auto& bts_a : targets)
      if (!check_damage(*g, *cea, *ac_template, bts_a, attacker)) return false;
    return true;
  }

  bool done() const {
    return want >= 0 && static_cast<int>(successful.size()) >= want;
  }

  void assign(std::size_t idx) {
    if (done()) return;
    if (explored >= budget || ++calls > budget * 64) {
      exhausted = false;
      return;
    }
    if (idx == nodes.size()) {
      explored++;
      Automaton attacker = build(nodes.size());
      if (covert_everywhere(attacker) && damage_everywhere(attacker))
        successful.push_back(canonical_form(attacker));
      return;
    }
    int n_ctl = static_cast<int>(nodes[idx].fireable_ctl.size());
    for (int mask = 0; mask < (1 << n_ctl); ++mask) {
      nodes[idx].decision = mask;
      std::size_t rollback = nodes.size();
      nodes[idx].children.clear();
      std::vector<EventId> taken = nodes[idx].fireable_unctl;
      for (int b = 0; b < n_ctl; ++b)
        if (mask & (1 << b)) taken.push_back(nodes[idx].fireable_ctl[b]);
      std::sort(taken.begin(), taken.end());
      for (EventId e : taken) {
        if (nodes[idx].depth + 1 > depth_limit) {
          nodes[idx].children.emplace_back(e, -1);
          continue;
        }
        std::vector<StateId> next = closure(step(nodes[idx].belief, e));
        int child = make_node(std::move(next), nodes[idx].depth + 1);
        nodes[idx].children.emplace_back(e, child);
      }
      // Enabling more events later cannot remove a detection that is already
      // reachable, so a partial covertness violation kills the subtree.
      if (covert_everywhere(build(idx + 1))) assign(idx + 1);
      nodes.resize(rollback);
      nodes[idx].children.clear();
      if (done() || !exhausted) return;
    }
  }
};

}  // namespace

EnumeratedPolicies enumerate_successful_attackers(
    const Automaton& g, const AttackConstraint& ac,
    const std::vector<Automaton>& supervisors, const PolicyEnumOptions& opts) {
  const auto alphabet = g.alphabet;
  ac.validate(*alphabet);

  PolicySearch search;
  Automaton cea = build_command_execution_attacked(alphabet, ac);
  Automaton ac_template = build_attack_template(alphabet, ac);
  Automaton ce = build_command_execution(alphabet);
  TrackedProduct arena = sync_product_tracked({&g, &cea, &ac_template});

  search.arena = &arena.aut;
  search.alphabet = alphabet.get();
  search.cac = ac.attacker_constraint(*alphabet);
  search.observable = (arena.aut.events & search.cac.observable).to_vector();
  search.depth_limit = opts.depth;
  search.g = &g;
  search.cea = &cea;
  search.ac_template = &ac_template;
  search.budget = opts.policy_budget;
  search.want = opts.want;

  for (const Automaton& s : supervisors) {
    Bipartite bts = build_bipartite_supervisor(s);
    Bipartite bts_m = build_monitored_supervisor(bts, g, ce);
    search.targets.push_back(build_attacked_supervisor(bts_m, ac));
  }

  search.make_node(search.closure({arena.aut.initial()}), 0);
  search.assign(0);

  EnumeratedPolicies out;
  out.successful = std::move(search.successful);
  out.explored = search.explored;
  out.exhausted = search.exhausted && !search.done();
  return out;
}

}  // namespace cades
