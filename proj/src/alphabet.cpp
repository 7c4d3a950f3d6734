#include "cades/alphabet.hpp"

#include <algorithm>
#include <bit>

namespace cades {

std::size_t EventSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

EventSet& EventSet::operator|=(const EventSet& o) {
  if (universe_ != o.universe_) throw Error("event set universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

EventSet& EventSet::operator&=(const EventSet& o) {
  if (universe_ != o.universe_) throw Error("event set universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

EventSet& EventSet::subtract(const EventSet& o) {
  if (universe_ != o.universe_) throw Error("event set universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

bool EventSet::is_subset_of(const EventSet& o) const {
  if (universe_ != o.universe_) throw Error("event set universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

std::vector<EventId> EventSet::to_vector() const {
  std::vector<EventId> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w) {
      int b = std::countr_zero(w);
      out.push_back(static_cast<EventId>(i * 64 + b));
      w &= w - 1;
    }
  }
  return out;
}

bool is_reserved_label(const std::string& s) {
  return s == "detect" || s == "cov_brk" || s == "risk" || s == "dump" ||
         s == "stop";
}

namespace {

void check_user_name(const std::string& name) {
  if (name.empty()) throw Error("empty event name");
  if (is_reserved_label(name)) throw Error("'" + name + "' is a reserved name");
  if (name.find('#') != std::string::npos)
    throw Error("event name '" + name + "' may not contain '#'");
}

}  // namespace

std::shared_ptr<const Alphabet> Alphabet::make(
    const std::vector<PlantEventSpec>& plant_events,
    const std::vector<CommandSpec>& commands, std::size_t max_commands) {
  auto alpha = std::shared_ptr<Alphabet>(new Alphabet());

  std::vector<EventId> compromised_ids;
  for (const auto& spec : plant_events) {
    check_user_name(spec.name);
    if (alpha->by_name_.count(spec.name))
      throw Error("duplicate event name '" + spec.name + "'");
    if (spec.compromised && !spec.observable)
      throw Error("compromised event '" + spec.name + "' must be observable");
    if (spec.attackable && !spec.controllable)
      throw Error("attackable event '" + spec.name + "' must be controllable");
    EventId id = static_cast<EventId>(alpha->events_.size());
    alpha->events_.push_back({spec.name, EventKind::Plant, spec.observable,
                              spec.controllable, spec.compromised,
                              spec.attackable, -1});
    alpha->by_name_[spec.name] = id;
    if (spec.compromised) compromised_ids.push_back(id);
  }

  // Tampered copies, one per compromised event, in plant-event order.
  for (EventId p : compromised_ids) {
    EventId id = static_cast<EventId>(alpha->events_.size());
    std::string name = alpha->events_[p].name + "#";
    alpha->events_.push_back(
        {name, EventKind::Tampered, false, false, false, false, p});
    alpha->by_name_[name] = id;
    alpha->events_[p].twin = id;
  }

  std::size_t n_plant = plant_events.size();

  // Commands.
  std::vector<std::pair<std::string, std::vector<EventId>>> command_defs;
  if (!commands.empty()) {
    for (const auto& c : commands) {
      check_user_name(c.name);
      std::vector<EventId> mem;
      for (const auto& m : c.members) {
        auto it = alpha->by_name_.find(m);
        if (it == alpha->by_name_.end() ||
            alpha->events_[it->second].kind != EventKind::Plant)
          throw Error("command '" + c.name + "' lists unknown plant event '" +
                      m + "'");
        mem.push_back(it->second);
      }
      command_defs.emplace_back(c.name, std::move(mem));
    }
  } else {
    // Full command set: every superset of the uncontrollable events.
    std::vector<EventId> ctl;
    std::vector<EventId> unc;
    for (EventId e = 0; e < static_cast<EventId>(n_plant); ++e)
      (alpha->events_[e].controllable ? ctl : unc).push_back(e);
    if ((std::size_t{1} << std::min<std::size_t>(ctl.size(), 63)) >
        max_commands)
      throw Error("refusing to generate " +
                  std::to_string(std::size_t{1} << ctl.size()) +
                  " commands for " + std::to_string(ctl.size()) +
                  " controllable events; raise the command limit or list "
                  "commands explicitly");
    for (std::size_t mask = 0; mask < (std::size_t{1} << ctl.size()); ++mask) {
      std::vector<EventId> mem = unc;
      for (std::size_t i = 0; i < ctl.size(); ++i)
        if (mask & (std::size_t{1} << i)) mem.push_back(ctl[i]);
      command_defs.emplace_back("g" + std::to_string(mask), std::move(mem));
    }
  }

  std::size_t universe = alpha->events_.size() + command_defs.size() + 1;
  alpha->plant_ = EventSet(universe);
  alpha->observable_ = EventSet(universe);
  alpha->controllable_ = EventSet(universe);
  alpha->compromised_ = EventSet(universe);
  alpha->attackable_ = EventSet(universe);
  alpha->tampered_set_ = EventSet(universe);
  alpha->commands_ = EventSet(universe);
  alpha->members_.assign(universe, EventSet());

  for (EventId e = 0; e < static_cast<EventId>(alpha->events_.size()); ++e) {
    const auto& info = alpha->events_[e];
    if (info.kind == EventKind::Plant) {
      alpha->plant_.add(e);
      if (info.observable) alpha->observable_.add(e);
      if (info.controllable) alpha->controllable_.add(e);
      if (info.compromised) alpha->compromised_.add(e);
      if (info.attackable) alpha->attackable_.add(e);
    } else {
      alpha->tampered_set_.add(e);
    }
  }

  EventSet unc = alpha->plant_ - alpha->controllable_;
  for (auto& [cname, mem] : command_defs) {
    if (alpha->by_name_.count(cname))
      throw Error("duplicate event name '" + cname + "'");
    EventId id = static_cast<EventId>(alpha->events_.size());
    alpha->events_.push_back(
        {cname, EventKind::Command, false, false, false, false, -1});
    alpha->by_name_[cname] = id;
    EventSet ms(universe);
    for (EventId m : mem) ms.add(m);
    if (!unc.is_subset_of(ms))
      throw Error("command '" + cname +
                  "' does not contain every uncontrollable event");
    alpha->members_[id] = std::move(ms);
    alpha->commands_.add(id);
  }

  alpha->stop_ = static_cast<EventId>(alpha->events_.size());
  alpha->events_.push_back(
      {"stop", EventKind::Stop, false, false, false, false, -1});
  alpha->by_name_["stop"] = alpha->stop_;

  if (alpha->events_.size() != universe) throw Error("alphabet size mismatch");
  return alpha;
}

EventId Alphabet::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

EventId Alphabet::require(const std::string& name) const {
  EventId e = find(name);
  if (e < 0) throw Error("unknown event '" + name + "'");
  return e;
}

EventId Alphabet::tampered(EventId plant_event) const {
  const auto& info = events_.at(plant_event);
  if (info.kind != EventKind::Plant || info.twin < 0)
    throw Error("event '" + info.name + "' has no tampered copy");
  return info.twin;
}

EventId Alphabet::plant_of(EventId tampered_event) const {
  const auto& info = events_.at(tampered_event);
  if (info.kind != EventKind::Tampered)
    throw Error("event '" + info.name + "' is not a tampered copy");
  return info.twin;
}

EventId Alphabet::command_with_members(const EventSet& members) const {
  for (EventId c : commands_.to_vector())
    if (members_[c] == members) return c;
  return -1;
}

const EventSet& Alphabet::command_members(EventId command) const {
  if (!commands_.contains(command))
    throw Error("event '" + events_.at(command).name + "' is not a command");
  return members_[command];
}

bool Alphabet::structurally_equal(const Alphabet& o) const {
  if (events_.size() != o.events_.size()) return false;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto &a = events_[i], &b = o.events_[i];
    if (a.name != b.name || a.kind != b.kind || a.observable != b.observable ||
        a.controllable != b.controllable || a.compromised != b.compromised ||
        a.attackable != b.attackable || a.twin != b.twin)
      return false;
    if (a.kind == EventKind::Command &&
        !(members_[i] == o.members_[i]))
      return false;
  }
  return true;
}

}  // namespace cades
