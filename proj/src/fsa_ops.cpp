#include "cades/fsa_ops.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace cades {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<StateId>& v) const {
    std::size_t h = v.size();
    for (StateId x : v) h = h * 1000003u + static_cast<std::size_t>(x) + 1;
    return h;
  }
};

std::string join_labels(const Automaton& a, const std::vector<StateId>& cell) {
  std::string s = "{";
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (i) s += ",";
    const std::string& l = a.label(cell[i]);
    s += l.empty() ? std::to_string(cell[i]) : l;
  }
  return s + "}";
}

}  // namespace

TrackedProduct sync_product_tracked(
    const std::vector<const Automaton*>& parts) {
  if (parts.empty()) throw Error("product of zero automata");
  for (const auto* p : parts) {
    p->validate();
    if (!p->same_alphabet_as(*parts[0]))
      throw Error("synchronous product over incompatible alphabets");
  }
  auto alphabet = parts[0]->alphabet;
  EventSet events = alphabet->empty_set();
  for (const auto* p : parts) events |= p->events;

  TrackedProduct prod{Automaton(alphabet, events), {}};
  for (const auto* p : parts)
    if (p->is_empty()) return prod;

  std::vector<EventId> evs = events.to_vector();
  std::unordered_map<std::vector<StateId>, StateId, VecHash> index;
  std::deque<StateId> queue;

  auto intern = [&](const std::vector<StateId>& key) {
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    bool marked = true;
    for (std::size_t k = 0; k < parts.size(); ++k)
      marked = marked && parts[k]->marked(key[k]);
    std::string label;
    if (parts.size() > 1) {
      label = "(";
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k) label += ",";
        const std::string& l = parts[k]->label(key[k]);
        label += l.empty() ? std::to_string(key[k]) : l;
      }
      label += ")";
    } else {
      label = parts[0]->label(key[0]);
    }
    StateId s = prod.aut.add_state(std::move(label), marked);
    prod.origin.push_back(key);
    index.emplace(key, s);
    queue.push_back(s);
    return s;
  };

  std::vector<StateId> init(parts.size());
  for (std::size_t k = 0; k < parts.size(); ++k) init[k] = parts[k]->initial();
  prod.aut.set_initial(intern(init));

  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    std::vector<StateId> key = prod.origin[s];
    for (EventId e : evs) {
      std::vector<StateId> nxt(key);
      bool ok = true;
      for (std::size_t k = 0; k < parts.size() && ok; ++k) {
        if (!parts[k]->events.contains(e)) continue;  // private: stays put
        auto t = parts[k]->next(key[k], e);
        if (!t)
          ok = false;
        else
          nxt[k] = *t;
      }
      if (ok) prod.aut.add_transition(s, e, intern(nxt));
    }
  }
  prod.aut.validate();
  return prod;
}

Automaton sync_product(const Automaton& a, const Automaton& b) {
  return sync_product_tracked({&a, &b}).aut;
}

std::vector<StateId> unobservable_reach(const Automaton& a, StateId q,
                                        const EventSet& sigma_prime) {
  if (q < 0 || q >= a.num_states()) throw Error("unknown state id");
  std::vector<bool> seen(a.num_states(), false);
  std::deque<StateId> queue{q};
  seen[q] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (const auto& t : a.out(s)) {
      if (sigma_prime.contains(t.event)) continue;
      if (!seen[t.target]) {
        seen[t.target] = true;
        queue.push_back(t.target);
      }
    }
  }
  std::vector<StateId> out;
  for (StateId s = 0; s < a.num_states(); ++s)
    if (seen[s]) out.push_back(s);
  return out;
}

ObserverResult observer_project_tracked(const Automaton& a,
                                        const EventSet& sigma_prime) {
  a.validate();
  ObserverResult res{Automaton(a.alphabet, a.events), {}};
  if (a.is_empty()) return res;

  EventSet observed = a.events & sigma_prime;
  EventSet looped = a.events - sigma_prime;
  std::vector<EventId> observed_v = observed.to_vector();
  std::vector<EventId> looped_v = looped.to_vector();

  std::unordered_map<std::vector<StateId>, StateId, VecHash> index;
  std::deque<StateId> queue;

  auto ur_of = [&](std::vector<StateId> base) {
    // union of unobservable reaches, kept sorted and unique
    std::vector<bool> seen(a.num_states(), false);
    std::deque<StateId> bfs;
    for (StateId q : base)
      if (!seen[q]) {
        seen[q] = true;
        bfs.push_back(q);
      }
    while (!bfs.empty()) {
      StateId s = bfs.front();
      bfs.pop_front();
      for (const auto& t : a.out(s)) {
        if (sigma_prime.contains(t.event)) continue;
        if (!seen[t.target]) {
          seen[t.target] = true;
          bfs.push_back(t.target);
        }
      }
    }
    std::vector<StateId> cell;
    for (StateId s = 0; s < a.num_states(); ++s)
      if (seen[s]) cell.push_back(s);
    return cell;
  };

  auto intern = [&](std::vector<StateId> cell) {
    auto it = index.find(cell);
    if (it != index.end()) return it->second;
    bool marked = false;
    for (StateId q : cell) marked = marked || a.marked(q);
    StateId s = res.aut.add_state(join_labels(a, cell), marked);
    res.cells.push_back(cell);
    index.emplace(std::move(cell), s);
    queue.push_back(s);
    return s;
  };

  res.aut.set_initial(intern(ur_of({a.initial()})));

  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    std::vector<StateId> cell = res.cells[s];
    for (EventId e : observed_v) {
      std::vector<StateId> moved;
      for (StateId q : cell) {
        auto t = a.next(q, e);
        if (t) moved.push_back(*t);
      }
      if (moved.empty()) continue;  // the observer never creates the empty set
      std::sort(moved.begin(), moved.end());
      moved.erase(std::unique(moved.begin(), moved.end()), moved.end());
      res.aut.add_transition(s, e, intern(ur_of(std::move(moved))));
    }
    for (EventId e : looped_v) res.aut.add_transition(s, e, s);
  }
  res.aut.validate();
  return res;
}

Automaton observer_project(const Automaton& a, const EventSet& sigma_prime) {
  return observer_project_tracked(a, sigma_prime).aut;
}

std::vector<EventId> project_string(const std::vector<EventId>& s,
                                    const EventSet& sigma_prime) {
  std::vector<EventId> out;
  for (EventId e : s)
    if (sigma_prime.contains(e)) out.push_back(e);
  return out;
}

std::vector<bool> reachable_states(const Automaton& a) {
  std::vector<bool> seen(a.num_states(), false);
  if (a.is_empty()) return seen;
  std::deque<StateId> queue{a.initial()};
  seen[a.initial()] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (const auto& t : a.out(s))
      if (!seen[t.target]) {
        seen[t.target] = true;
        queue.push_back(t.target);
      }
  }
  return seen;
}

Automaton trim_reachable(const Automaton& a) {
  return remove_states(a, std::vector<StateId>{});
}

bool is_marker_reachable(const Automaton& a) {
  if (a.is_empty()) return false;
  auto seen = reachable_states(a);
  for (StateId s = 0; s < a.num_states(); ++s)
    if (seen[s] && a.marked(s)) return true;
  return false;
}

Automaton remove_states(const Automaton& a, const std::vector<bool>& del) {
  a.validate();
  if (a.is_empty()) return a;
  if (a.initial() < static_cast<StateId>(del.size()) && del[a.initial()])
    return Automaton::empty(a.alphabet, a.events);

  auto dead = [&](StateId s) {
    return s < static_cast<StateId>(del.size()) && del[s];
  };

  // reachability avoiding deleted states
  std::vector<bool> keep(a.num_states(), false);
  std::deque<StateId> queue{a.initial()};
  keep[a.initial()] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (const auto& t : a.out(s))
      if (!dead(t.target) && !keep[t.target]) {
        keep[t.target] = true;
        queue.push_back(t.target);
      }
  }

  std::vector<StateId> remap(a.num_states(), -1);
  Automaton out(a.alphabet, a.events);
  for (StateId s = 0; s < a.num_states(); ++s)
    if (keep[s]) remap[s] = out.add_state(a.label(s), a.marked(s));
  out.set_initial(remap[a.initial()]);
  for (StateId s = 0; s < a.num_states(); ++s) {
    if (!keep[s]) continue;
    for (const auto& t : a.out(s))
      if (!dead(t.target) && keep[t.target])
        out.add_transition(remap[s], t.event, remap[t.target]);
  }
  out.validate();
  return out;
}

Automaton remove_states(const Automaton& a, const std::vector<StateId>& del) {
  std::vector<bool> mask(a.num_states(), false);
  for (StateId s : del) {
    if (s < 0 || s >= a.num_states()) throw Error("unknown state id");
    mask[s] = true;
  }
  return remove_states(a, mask);
}

CompletionResult complete(const Automaton& a, const std::string& dump_label,
                          const EventSet& over) {
  a.validate();
  if (a.is_empty()) throw Error("cannot complete the empty automaton");
  for (StateId s = 0; s < a.num_states(); ++s)
    if (a.label(s) == dump_label)
      throw Error("dump label '" + dump_label + "' already in use");

  Automaton out = a;
  out.events |= over;
  StateId dump = out.add_state(dump_label, false);
  std::vector<EventId> evs = over.to_vector();
  for (StateId s = 0; s < out.num_states(); ++s)
    for (EventId e : evs)
      if (!out.defined(s, e)) out.add_transition(s, e, dump);
  out.validate();
  return {std::move(out), dump};
}

std::set<std::vector<EventId>> enumerate_language(const Automaton& a,
                                                  int max_len) {
  std::set<std::vector<EventId>> out;
  if (a.is_empty()) return out;
  std::vector<EventId> word;
  std::function<void(StateId)> dfs = [&](StateId q) {
    out.insert(word);
    if (static_cast<int>(word.size()) == max_len) return;
    for (const auto& t : a.out(q)) {
      word.push_back(t.event);
      dfs(t.target);
      word.pop_back();
    }
  };
  dfs(a.initial());
  return out;
}

bool language_included(const Automaton& a, const Automaton& b,
                       std::vector<EventId>* witness) {
  a.validate();
  b.validate();
  if (a.is_empty()) return true;
  if (b.is_empty()) {
    if (witness) witness->clear();
    return false;  // epsilon distinguishes
  }
  // BFS over simultaneous runs; both deterministic.
  struct Node {
    StateId qa, qb;
  };
  std::map<std::pair<StateId, StateId>, std::pair<std::pair<StateId, StateId>, EventId>>
      parent;
  std::deque<Node> queue{{a.initial(), b.initial()}};
  std::set<std::pair<StateId, StateId>> seen{{a.initial(), b.initial()}};

  auto emit_witness = [&](std::pair<StateId, StateId> at, EventId last) {
    if (!witness) return;
    std::vector<EventId> w{last};
    auto cur = at;
    while (parent.count(cur)) {
      auto [prev, e] = parent[cur];
      w.push_back(e);
      cur = prev;
    }
    std::reverse(w.begin(), w.end());
    *witness = std::move(w);
  };

  while (!queue.empty()) {
    auto [qa, qb] = queue.front();
    queue.pop_front();
    for (const auto& t : a.out(qa)) {
      auto nb = b.events.contains(t.event) ? b.next(qb, t.event) : std::nullopt;
      if (!nb) {
        emit_witness({qa, qb}, t.event);
        return false;
      }
      std::pair<StateId, StateId> key{t.target, *nb};
      if (seen.insert(key).second) {
        parent[key] = {{qa, qb}, t.event};
        queue.push_back({t.target, *nb});
      }
    }
  }
  return true;
}

bool language_equal(const Automaton& a, const Automaton& b) {
  return language_included(a, b) && language_included(b, a);
}

Automaton canonical_form(const Automaton& a) {
  a.validate();
  if (a.is_empty()) return a;
  std::vector<StateId> order;
  std::vector<StateId> remap(a.num_states(), -1);
  std::deque<StateId> queue{a.initial()};
  remap[a.initial()] = 0;
  order.push_back(a.initial());
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (const auto& t : a.out(s))  // rows are event-sorted already
      if (remap[t.target] < 0) {
        remap[t.target] = static_cast<StateId>(order.size());
        order.push_back(t.target);
        queue.push_back(t.target);
      }
  }
  Automaton out(a.alphabet, a.events);
  for (StateId s : order) out.add_state(a.label(s), a.marked(s));
  out.set_initial(0);
  for (StateId s : order)
    for (const auto& t : a.out(s))
      out.add_transition(remap[s], t.event, remap[t.target]);
  out.validate();
  return out;
}

std::optional<std::vector<EventId>> shortest_word_to(
    const Automaton& a, const std::function<bool(StateId)>& goal) {
  if (a.is_empty()) return std::nullopt;
  std::vector<bool> seen(a.num_states(), false);
  std::vector<std::pair<StateId, EventId>> parent(a.num_states(), {-1, -1});
  std::deque<StateId> queue{a.initial()};
  seen[a.initial()] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    if (goal(s)) {
      std::vector<EventId> w;
      StateId cur = s;
      while (parent[cur].first >= 0) {
        w.push_back(parent[cur].second);
        cur = parent[cur].first;
      }
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (const auto& t : a.out(s))
      if (!seen[t.target]) {
        seen[t.target] = true;
        parent[t.target] = {s, t.event};
        queue.push_back(t.target);
      }
  }
  return std::nullopt;
}

std::string format_word(const Alphabet& alphabet,
                        const std::vector<EventId>& word) {
  if (word.empty()) return "<empty>";
  std::string s;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) s += ".";
    s += alphabet.name(word[i]);
  }
  return s;
}

}  // namespace cades
