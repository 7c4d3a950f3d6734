#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cades/alphabet.hpp"

namespace cades {

struct Transition {
  EventId event;
  StateId target;
  bool operator==(const Transition& o) const {
    return event == o.event && target == o.target;
  }
};

/// Deterministic finite automaton with a partial transition function.
///
/// States are dense integer ids with optional labels. The automaton owns a
/// subset of the shared alphabet as its own event set; synchronous products
/// interleave on events outside it. An automaton with no states is the empty
/// automaton (empty language); otherwise the initial state must be set.
class Automaton {
public:
  Automaton() = default;
  Automaton(std::shared_ptr<const Alphabet> alphabet, EventSet events)
      : alphabet(std::move(alphabet)), events(std::move(events)) {}

  static Automaton empty(std::shared_ptr<const Alphabet> a, EventSet events) {
    return Automaton(std::move(a), std::move(events));
  }

  StateId add_state(std::string label = "", bool marked = true);
  void set_initial(StateId q);
  void set_marked(StateId q, bool m) { marked_.at(q) = m; }
  void mark_all();
  // Throws if it would make the transition function nondeterministic or uses
  // an event outside the automaton's event set.
  void add_transition(StateId from, EventId event, StateId to);
  bool try_add_transition(StateId from, EventId event, StateId to);

  int num_states() const { return static_cast<int>(rows_.size()); }
  bool is_empty() const { return rows_.empty(); }
  StateId initial() const { return initial_; }
  bool marked(StateId q) const { return marked_.at(q); }
  const std::string& label(StateId q) const { return labels_.at(q); }
  void set_label(StateId q, std::string l) { labels_.at(q) = std::move(l); }
  StateId find_label(const std::string& l) const;

  const std::vector<Transition>& out(StateId q) const { return rows_.at(q); }
  std::optional<StateId> next(StateId q, EventId e) const;
  std::optional<StateId> run(StateId q, const std::vector<EventId>& word) const;
  bool defined(StateId q, EventId e) const { return next(q, e).has_value(); }
  EventSet enabled(StateId q) const;
  bool deadlocked(StateId q) const { return rows_.at(q).empty(); }

  std::size_t num_transitions() const;

  // Structural invariants: initial in range, endpoints in range, events in
  // the automaton's event set, rows sorted and deterministic.
  void validate() const;

  bool same_alphabet_as(const Automaton& o) const;

  std::shared_ptr<const Alphabet> alphabet;
  EventSet events;

private:
  std::vector<std::vector<Transition>> rows_;
  std::vector<bool> marked_;
  std::vector<std::string> labels_;
  StateId initial_ = -1;
};

}  // namespace cades
