#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cades {

using EventId = int32_t;
using StateId = int32_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed-universe bitset over event ids.
class EventSet {
public:
  EventSet() = default;
  explicit EventSet(std::size_t universe)
      : words_((universe + 63) / 64, 0), universe_(universe) {}

  std::size_t universe() const { return universe_; }

  void add(EventId e) {
    check(e);
    words_[e >> 6] |= (std::uint64_t{1} << (e & 63));
  }
  void remove(EventId e) {
    check(e);
    words_[e >> 6] &= ~(std::uint64_t{1} << (e & 63));
  }
  bool contains(EventId e) const {
    if (e < 0 || static_cast<std::size_t>(e) >= universe_) return false;
    return (words_[e >> 6] >> (e & 63)) & 1;
  }

  std::size_t count() const;
  bool empty() const { return count() == 0; }

  EventSet& operator|=(const EventSet& o);
  EventSet& operator&=(const EventSet& o);
  EventSet& subtract(const EventSet& o);

  friend EventSet operator|(EventSet a, const EventSet& b) { return a |= b; }
  friend EventSet operator&(EventSet a, const EventSet& b) { return a &= b; }
  friend EventSet operator-(EventSet a, const EventSet& b) { return a.subtract(b); }

  bool operator==(const EventSet& o) const { return words_ == o.words_; }
  bool operator!=(const EventSet& o) const { return !(*this == o); }
  bool is_subset_of(const EventSet& o) const;

  std::vector<EventId> to_vector() const;

private:
  void check(EventId e) const {
    if (e < 0 || static_cast<std::size_t>(e) >= universe_)
      throw Error("event id out of range");
  }
  std::vector<std::uint64_t> words_;
  std::size_t universe_ = 0;
};

enum class EventKind : std::uint8_t {
  Plant,     // an event of the physical process
  Tampered,  // relabelled copy of a compromised event, as delivered to the supervisor
  Command,   // a control command (set of enabled plant events)
  Stop,      // end of one sensor-attack round
};

struct EventInfo {
  std::string name;
  EventKind kind = EventKind::Plant;
  bool observable = false;
  bool controllable = false;
  bool compromised = false;  // sensor-attackable
  bool attackable = false;   // actuator-attackable
  EventId twin = -1;         // plant <-> tampered pairing
};

/// The event universe of one problem instance: plant events, tampered copies
/// of the compromised ones, control commands, and the stop event.
///
/// Command events carry their member set; the member set of every command
/// must contain all uncontrollable plant events.
class Alphabet {
public:
  struct PlantEventSpec {
    std::string name;
    bool observable = true;
    bool controllable = false;
    bool compromised = false;
    bool attackable = false;
  };
  struct CommandSpec {
    std::string name;
    std::vector<std::string> members;
  };

  // Builds the universe. If `commands` is empty, the full command set (every
  // superset of the uncontrollable events) is generated; that is exponential
  // in the number of controllable events, hence `max_commands`.
  static std::shared_ptr<const Alphabet> make(
      const std::vector<PlantEventSpec>& plant_events,
      const std::vector<CommandSpec>& commands = {},
      std::size_t max_commands = 4096);

  std::size_t size() const { return events_.size(); }
  const EventInfo& info(EventId e) const { return events_.at(e); }
  const std::string& name(EventId e) const { return events_.at(e).name; }
  EventId find(const std::string& name) const;
  EventId require(const std::string& name) const;

  EventId stop_event() const { return stop_; }
  EventId tampered(EventId plant_event) const;
  EventId plant_of(EventId tampered_event) const;
  // The command whose member set equals `members`, or -1.
  EventId command_with_members(const EventSet& members) const;

  EventSet empty_set() const { return EventSet(size()); }
  const EventSet& plant_events() const { return plant_; }            // Sigma
  const EventSet& observable_events() const { return observable_; }  // Sigma_o
  const EventSet& controllable_events() const { return controllable_; }
  const EventSet& compromised_events() const { return compromised_; }
  const EventSet& attackable_events() const { return attackable_; }
  const EventSet& tampered_events() const { return tampered_set_; }
  const EventSet& commands() const { return commands_; }
  EventSet uncontrollable_events() const { return plant_ - controllable_; }
  EventSet unobservable_events() const { return plant_ - observable_; }
  const EventSet& command_members(EventId command) const;

  // Controllable events that are unobservable make the default synthesis
  // constraint invalid; callers then need the sound-only mode.
  bool controllables_all_observable() const {
    return controllable_.is_subset_of(observable_);
  }

  bool structurally_equal(const Alphabet& o) const;

private:
  Alphabet() = default;
  std::vector<EventInfo> events_;
  std::unordered_map<std::string, EventId> by_name_;
  std::vector<EventSet> members_;  // indexed by event id; empty for non-commands
  EventId stop_ = -1;
  EventSet plant_, observable_, controllable_, compromised_, attackable_,
      tampered_set_, commands_;
};

// Reserved words: state labels that builders introduce and the file format
// refuses in user input, plus the stop event name.
bool is_reserved_label(const std::string& s);

}  // namespace cades
