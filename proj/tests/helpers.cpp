#include "helpers.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace cades::testing {

namespace {

// One deterministic sub-strategy of the command supervisor: at each control
// state take the highest enabled command. Observations are the projections
// of its closed-loop runs.
std::set<std::vector<EventId>> observations_of_selection(
    const Automaton& g, const Bipartite& ns, int max_obs_len,
    std::size_t max_strings) {
  const Alphabet& a = *g.alphabet;
  Automaton ce = build_command_execution(g.alphabet);
  TrackedProduct lifted = sync_product_tracked({&g, &ce});
  TrackedProduct loop = sync_product_tracked({&lifted.aut, &ns.aut});

  std::set<std::vector<EventId>> out;
  struct Node {
    StateId s;
    std::vector<EventId> obs;
  };
  std::deque<Node> queue{{loop.aut.initial(), {}}};
  std::set<std::pair<StateId, std::vector<EventId>>> seen;
  while (!queue.empty() && out.size() < max_strings) {
    Node n = queue.front();
    queue.pop_front();
    if (!seen.insert({n.s, n.obs}).second) continue;
    out.insert(n.obs);
    StateId ns_state = loop.origin[n.s][1];
    bool control = ns.control_state[ns_state];
    EventId chosen = -1;
    if (control) {
      for (const auto& t : loop.aut.out(n.s))
        if (a.commands().contains(t.event)) chosen = std::max(chosen, t.event);
    }
    for (const auto& t : loop.aut.out(n.s)) {
      if (control && t.event != chosen) continue;
      std::vector<EventId> obs = n.obs;
      if (a.observable_events().contains(t.event)) {
        if (static_cast<int>(obs.size()) >= max_obs_len) continue;
        obs.push_back(t.event);
      }
      queue.push_back({t.target, std::move(obs)});
    }
  }
  return out;
}

Automaton trie_of(const std::set<std::vector<EventId>>& strings,
                  std::shared_ptr<const Alphabet> alphabet) {
  const Alphabet& a = *alphabet;
  Automaton mo(alphabet, a.observable_events());
  mo.add_state("o0");
  mo.set_initial(0);
  std::map<std::vector<EventId>, StateId> node{{{}, 0}};
  for (const auto& s : strings) {
    std::vector<EventId> prefix;
    for (EventId e : s) {
      StateId from = node[prefix];
      prefix.push_back(e);
      if (!node.count(prefix)) {
        StateId q = mo.add_state("o" + std::to_string(mo.num_states()));
        node[prefix] = q;
        mo.add_transition(from, e, q);
      }
    }
  }
  // Merge every leaf into one deadlocked state.
  std::vector<StateId> leaves;
  for (StateId q = 0; q < mo.num_states(); ++q)
    if (mo.deadlocked(q)) leaves.push_back(q);
  if (leaves.size() <= 1) return mo;
  StateId keep = leaves.front();
  std::set<StateId> drop(leaves.begin() + 1, leaves.end());
  Automaton merged(alphabet, mo.events);
  std::vector<StateId> remap(mo.num_states(), -1);
  for (StateId q = 0; q < mo.num_states(); ++q)
    if (!drop.count(q))
      remap[q] = merged.add_state(mo.label(q));
  for (StateId q = 0; q < mo.num_states(); ++q) {
    if (drop.count(q)) continue;
    for (const auto& t : mo.out(q)) {
      StateId target = drop.count(t.target) ? keep : t.target;
      merged.add_transition(remap[q], t.event, remap[target]);
    }
  }
  merged.set_initial(remap[mo.initial()]);
  return trim_reachable(merged);
}

}  // namespace

TinyInstance random_attack_instance(unsigned seed) {
  for (unsigned attempt = 0;; ++attempt) {
    std::mt19937 rng((attempt + seed * 7919u) * 2654435761u + 17);
    auto pick = [&](int lo, int hi) {
      return lo + static_cast<int>(rng() % (hi - lo + 1));
    };

    int n_events = pick(3, 5);
    std::vector<Alphabet::PlantEventSpec> specs;
    int n_ctl = 0;
    for (int i = 0; i < n_events; ++i) {
      Alphabet::PlantEventSpec s;
      s.name = std::string(1, static_cast<char>('a' + i));
      s.controllable = pick(0, 2) == 0 && n_ctl < 2;
      if (s.controllable) n_ctl++;
      s.observable = s.controllable || pick(0, 3) > 0;
      s.compromised = s.observable && !s.controllable && pick(0, 1) == 0;
      s.attackable = s.controllable && pick(0, 1) == 0;
      specs.push_back(s);
    }
    bool any_comp = false, any_obs_unc = false;
    for (auto& s : specs) {
      any_comp |= s.compromised;
      any_obs_unc |= s.observable && !s.controllable;
    }
    if (!any_comp || !any_obs_unc || n_ctl == 0) continue;

    std::shared_ptr<const Alphabet> alphabet;
    try {
      alphabet = Alphabet::make(specs);
    } catch (const Error&) {
      continue;
    }

    int n_plain = pick(3, 4);
    Automaton plant(alphabet, alphabet->plant_events());
    for (int i = 0; i < n_plain; ++i) plant.add_state(std::to_string(i), false);
    StateId damage = plant.add_state("dmg", true);
    plant.set_initial(0);
    for (StateId q = 0; q < n_plain; ++q)
      for (EventId e : alphabet->plant_events().to_vector()) {
        int roll = pick(0, 5);
        if (roll <= 2)
          plant.try_add_transition(q, e, pick(0, n_plain - 1));
        else if (roll == 3)
          plant.try_add_transition(q, e, damage);
      }

    try {
      plant.validate();
      CommandSupervisorResult ns = procedure1(plant);
      if (!ns.ns) continue;
      auto obs_strings = observations_of_selection(plant, *ns.ns, 3, 40);
      if (obs_strings.size() < 3) continue;
      Automaton mo = trie_of(obs_strings, alphabet);
      validate_observations(mo);
      if (mo.num_states() < 2 || mo.num_states() > 7) continue;
      return {alphabet, std::move(plant), std::move(mo)};
    } catch (const Error&) {
      continue;
    }
  }
}

SynthInstance random_synth_instance(unsigned seed, int max_events,
                                    int max_ctl) {
  for (unsigned attempt = 0;; ++attempt) {
    std::mt19937 rng((attempt + seed * 6151u) * 0x9e3779b9u + 101);
    auto pick = [&](int lo, int hi) {
      return lo + static_cast<int>(rng() % (hi - lo + 1));
    };
    int n_events = pick(2, max_events);
    std::vector<Alphabet::PlantEventSpec> specs;
    int n_ctl = 0;
    for (int i = 0; i < n_events; ++i) {
      Alphabet::PlantEventSpec s;
      s.name = std::string(1, static_cast<char>('a' + i));
      s.controllable = n_ctl < max_ctl && pick(0, 1) == 0;
      if (s.controllable) n_ctl++;
      s.observable = s.controllable || pick(0, 2) > 0;
      specs.push_back(s);
    }
    if (n_ctl == 0) continue;
    auto alphabet = Alphabet::make(specs);

    int n_states = pick(3, 5);
    Automaton plant(alphabet, alphabet->plant_events());
    for (int i = 0; i < n_states; ++i) plant.add_state(std::to_string(i));
    plant.set_initial(0);
    for (StateId q = 0; q < n_states; ++q)
      for (EventId e : alphabet->plant_events().to_vector())
        if (pick(0, 2) > 0) plant.try_add_transition(q, e, pick(0, n_states - 1));

    std::vector<bool> bad(n_states, false);
    bad[pick(1, n_states - 1)] = true;
    if (bad[plant.initial()]) continue;

    SynthInstance inst{alphabet, std::move(plant), std::move(bad),
                       {alphabet->controllable_events(),
                        alphabet->observable_events()}};
    // Interesting instances: the bad state is reachable but avoidable, and
    // the controlled loop still does something.
    auto reach = reachable_states(inst.plant);
    bool bad_reachable = false;
    for (StateId q = 0; q < n_states; ++q)
      if (inst.bad[q] && reach[q]) bad_reachable = true;
    if (!bad_reachable) continue;
    SupervisorSynthesis syn =
        supremal_safe_supervisor(inst.plant, inst.bad, inst.constraint);
    if (!syn.has_solution()) continue;
    Automaton closed = sync_product(inst.plant, *syn.supervisor);
    if (enumerate_language(closed, 4).size() < 4) continue;
    return inst;
  }
}

}  // namespace cades::testing
