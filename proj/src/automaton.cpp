#include "cades/automaton.hpp"

#include <algorithm>

namespace cades {

StateId Automaton::add_state(std::string label, bool marked) {
  rows_.emplace_back();
  marked_.push_back(marked);
  labels_.push_back(std::move(label));
  return static_cast<StateId>(rows_.size() - 1);
}

void Automaton::set_initial(StateId q) {
  if (q < 0 || q >= num_states()) throw Error("initial state out of range");
  initial_ = q;
}

void Automaton::mark_all() { marked_.assign(marked_.size(), true); }

bool Automaton::try_add_transition(StateId from, EventId event, StateId to) {
  if (from < 0 || from >= num_states() || to < 0 || to >= num_states())
    throw Error("transition endpoint out of range");
  if (!events.contains(event))
    throw Error("event '" + alphabet->name(event) +
                "' is not in the automaton's event set");
  auto& row = rows_[from];
  auto it = std::lower_bound(
      row.begin(), row.end(), event,
      [](const Transition& t, EventId e) { return t.event < e; });
  if (it != row.end() && it->event == event) return it->target == to;
  row.insert(it, Transition{event, to});
  return true;
}

void Automaton::add_transition(StateId from, EventId event, StateId to) {
  if (!try_add_transition(from, event, to))
    throw Error("nondeterministic transition on '" + alphabet->name(event) +
                "' from state " + std::to_string(from));
}

StateId Automaton::find_label(const std::string& l) const {
  for (StateId q = 0; q < num_states(); ++q)
    if (labels_[q] == l) return q;
  return -1;
}

std::optional<StateId> Automaton::next(StateId q, EventId e) const {
  const auto& row = rows_.at(q);
  auto it = std::lower_bound(
      row.begin(), row.end(), e,
      [](const Transition& t, EventId ev) { return t.event < ev; });
  if (it != row.end() && it->event == e) return it->target;
  return std::nullopt;
}

std::optional<StateId> Automaton::run(StateId q,
                                      const std::vector<EventId>& word) const {
  StateId cur = q;
  for (EventId e : word) {
    auto n = next(cur, e);
    if (!n) return std::nullopt;
    cur = *n;
  }
  return cur;
}

EventSet Automaton::enabled(StateId q) const {
  EventSet s = alphabet->empty_set();
  for (const auto& t : rows_.at(q)) s.add(t.event);
  return s;
}

std::size_t Automaton::num_transitions() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

void Automaton::validate() const {
  if (is_empty()) {
    if (initial_ != -1) throw Error("empty automaton with an initial state");
    return;
  }
  if (initial_ < 0 || initial_ >= num_states())
    throw Error("automaton has no initial state");
  for (StateId q = 0; q < num_states(); ++q) {
    const auto& row = rows_[q];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!events.contains(row[i].event)) throw Error("foreign event in row");
      if (row[i].target < 0 || row[i].target >= num_states())
        throw Error("dangling transition target");
      if (i > 0 && row[i - 1].event >= row[i].event)
        throw Error("row not sorted/deterministic");
    }
  }
}

bool Automaton::same_alphabet_as(const Automaton& o) const {
  return alphabet == o.alphabet ||
         (alphabet && o.alphabet && alphabet->structurally_equal(*o.alphabet));
}

}  // namespace cades
