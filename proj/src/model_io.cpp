#include "cades/model_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cades {

using ordered_json = nlohmann::ordered_json;

const Automaton& ModelFile::require(const std::string& name) const {
  const Automaton* a = find(name);
  if (!a) throw SchemaError("model file has no automaton named '" + name + "'");
  return *a;
}

const Automaton* ModelFile::find(const std::string& name) const {
  for (const auto& [n, a] : automata)
    if (n == name) return &a;
  return nullptr;
}

namespace {

std::string location(const std::string& where) { return "at " + where + ": "; }

const ordered_json& get(const ordered_json& j, const char* key,
                        const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw SchemaError(location(where) + "missing field '" + key + "'");
  return *it;
}

Automaton parse_automaton(const ordered_json& j, const std::string& where,
                          std::shared_ptr<const Alphabet> alphabet) {
  if (!j.is_object()) throw SchemaError(location(where) + "expected an object");
  const auto& jstates = get(j, "states", where);
  if (!jstates.is_array() || jstates.empty())
    throw SchemaError(location(where) + "no states (no initial state)");

  EventSet events = alphabet->empty_set();
  Automaton aut(alphabet, events);
  std::map<std::string, StateId> by_name;
  for (std::size_t i = 0; i < jstates.size(); ++i) {
    const auto& js = jstates[i];
    std::string swhere = where + ".states[" + std::to_string(i) + "]";
    std::string name;
    bool marked = false;
    if (js.is_string()) {
      name = js.get<std::string>();
    } else if (js.is_object()) {
      name = get(js, "name", swhere).get<std::string>();
      marked = js.value("marked", false);
    } else {
      throw SchemaError(location(swhere) + "expected a string or object");
    }
    if (name.empty()) throw SchemaError(location(swhere) + "empty state name");
    if (is_reserved_label(name))
      throw SchemaError(location(swhere) + "'" + name +
                        "' is a reserved state label");
    if (by_name.count(name))
      throw SchemaError(location(swhere) + "duplicate state '" + name + "'");
    by_name[name] = aut.add_state(name, marked);
  }

  std::string initial = get(j, "initial", where).get<std::string>();
  auto init_it = by_name.find(initial);
  if (init_it == by_name.end())
    throw SchemaError(location(where) + "initial state '" + initial +
                      "' is not a state");
  aut.set_initial(init_it->second);

  const auto& jtrans = get(j, "transitions", where);
  if (!jtrans.is_array())
    throw SchemaError(location(where) + "'transitions' must be an array");
  for (std::size_t i = 0; i < jtrans.size(); ++i) {
    const auto& jt = jtrans[i];
    std::string twhere = where + ".transitions[" + std::to_string(i) + "]";
    if (!jt.is_array() || jt.size() != 3)
      throw SchemaError(location(twhere) + "expected [from, event, to]");
    auto from = by_name.find(jt[0].get<std::string>());
    auto to = by_name.find(jt[2].get<std::string>());
    if (from == by_name.end() || to == by_name.end())
      throw SchemaError(location(twhere) + "unknown state");
    EventId e = alphabet->find(jt[1].get<std::string>());
    if (e < 0)
      throw SchemaError(location(twhere) + "unknown event '" +
                        jt[1].get<std::string>() + "'");
    aut.events.add(e);
    if (!aut.try_add_transition(from->second, e, to->second))
      throw SchemaError(location(twhere) + "nondeterministic transition on '" +
                        jt[1].get<std::string>() + "'");
  }

  // Plant-style automata range over the plant events they mention; widen to
  // the declared set when given.
  if (j.contains("events")) {
    const auto& je = j["events"];
    if (!je.is_array())
      throw SchemaError(location(where) + "'events' must be an array");
    EventSet declared = alphabet->empty_set();
    for (const auto& jn : je) {
      EventId e = alphabet->find(jn.get<std::string>());
      if (e < 0)
        throw SchemaError(location(where) + "unknown event '" +
                          jn.get<std::string>() + "' in 'events'");
      declared.add(e);
    }
    if (!aut.events.is_subset_of(declared))
      throw SchemaError(location(where) +
                        "transitions use events outside the declared set");
    aut.events = declared;
  }
  aut.validate();
  return aut;
}

}  // namespace

ModelFile parse_model(const std::string& text, std::size_t max_commands) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("top level must be an object");
  int version = get(j, "format_version", "top level").get<int>();
  if (version != 1)
    throw SchemaError("unsupported format_version " + std::to_string(version));

  const auto& jalpha = get(j, "alphabet", "top level");
  const auto& jevents = get(jalpha, "events", "alphabet");
  if (!jevents.is_array() || jevents.empty())
    throw SchemaError("alphabet.events must be a non-empty array");

  std::vector<Alphabet::PlantEventSpec> events;
  for (std::size_t i = 0; i < jevents.size(); ++i) {
    const auto& je = jevents[i];
    std::string where = "alphabet.events[" + std::to_string(i) + "]";
    Alphabet::PlantEventSpec spec;
    spec.name = get(je, "name", where).get<std::string>();
    spec.observable = je.value("observable", true);
    spec.controllable = je.value("controllable", false);
    spec.compromised = je.value("compromised", false);
    spec.attackable = je.value("attackable", false);
    events.push_back(std::move(spec));
  }

  std::vector<Alphabet::CommandSpec> commands;
  if (jalpha.contains("commands")) {
    const auto& jc = jalpha["commands"];
    if (!jc.is_array()) throw SchemaError("alphabet.commands must be an array");
    for (std::size_t i = 0; i < jc.size(); ++i) {
      std::string where = "alphabet.commands[" + std::to_string(i) + "]";
      Alphabet::CommandSpec spec;
      spec.name = get(jc[i], "name", where).get<std::string>();
      for (const auto& m : get(jc[i], "events", where))
        spec.members.push_back(m.get<std::string>());
      commands.push_back(std::move(spec));
    }
  }

  ModelFile model;
  try {
    model.alphabet = Alphabet::make(events, commands, max_commands);
  } catch (const Error& e) {
    throw SchemaError(std::string("at alphabet: ") + e.what());
  }

  const auto& jauts = get(j, "automata", "top level");
  if (!jauts.is_array()) throw SchemaError("'automata' must be an array");
  for (std::size_t i = 0; i < jauts.size(); ++i) {
    std::string where = "automata[" + std::to_string(i) + "]";
    std::string name = get(jauts[i], "name", where).get<std::string>();
    if (model.find(name))
      throw SchemaError(location(where) + "duplicate automaton '" + name + "'");
    model.automata.emplace_back(
        name, parse_automaton(jauts[i], where, model.alphabet));
  }
  return model;
}

ModelFile load_model(const std::string& path, std::size_t max_commands) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), max_commands);
}

std::string serialize_model(const ModelFile& model) {
  const Alphabet& a = *model.alphabet;
  ordered_json j;
  j["format_version"] = 1;

  ordered_json jevents = ordered_json::array();
  for (EventId e : a.plant_events().to_vector()) {
    const EventInfo& info = a.info(e);
    ordered_json je;
    je["name"] = info.name;
    je["observable"] = info.observable;
    je["controllable"] = info.controllable;
    je["compromised"] = info.compromised;
    je["attackable"] = info.attackable;
    jevents.push_back(std::move(je));
  }
  ordered_json jcommands = ordered_json::array();
  for (EventId c : a.commands().to_vector()) {
    ordered_json jc;
    jc["name"] = a.name(c);
    ordered_json members = ordered_json::array();
    for (EventId m : a.command_members(c).to_vector()) members.push_back(a.name(m));
    jc["events"] = std::move(members);
    jcommands.push_back(std::move(jc));
  }
  j["alphabet"] = {{"events", std::move(jevents)},
                   {"commands", std::move(jcommands)}};

  ordered_json jauts = ordered_json::array();
  for (const auto& [name, aut] : model.automata) {
    ordered_json ja;
    ja["name"] = name;
    ordered_json jstates = ordered_json::array();
    for (StateId q = 0; q < aut.num_states(); ++q) {
      std::string l = aut.label(q).empty() ? std::to_string(q) : aut.label(q);
      if (aut.marked(q))
        jstates.push_back(ordered_json{{"name", l}, {"marked", true}});
      else
        jstates.push_back(l);
    }
    ja["states"] = std::move(jstates);
    ja["initial"] = aut.label(aut.initial()).empty()
                        ? std::to_string(aut.initial())
                        : aut.label(aut.initial());
    ordered_json jtrans = ordered_json::array();
    for (StateId q = 0; q < aut.num_states(); ++q)
      for (const auto& t : aut.out(q)) {
        auto nm = [&](StateId s) {
          return aut.label(s).empty() ? std::to_string(s) : aut.label(s);
        };
        jtrans.push_back(ordered_json::array({nm(q), a.name(t.event), nm(t.target)}));
      }
    ja["transitions"] = std::move(jtrans);
    ordered_json jevs = ordered_json::array();
    for (EventId e : aut.events.to_vector()) jevs.push_back(a.name(e));
    ja["events"] = std::move(jevs);
    jauts.push_back(std::move(ja));
  }
  j["automata"] = std::move(jauts);
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp + "'");
    out << content;
    if (!out) throw Error("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cannot move '" + tmp + "' to '" + path + "'");
}

void save_model(const ModelFile& model, const std::string& path) {
  write_file_atomic(path, serialize_model(model));
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const Automaton& a, const std::string& name,
                       const std::vector<StateId>& highlight) {
  std::vector<bool> hl(a.num_states(), false);
  for (StateId s : highlight) {
    if (s < 0 || s >= a.num_states()) throw Error("unknown state id");
    hl[s] = true;
  }
  std::ostringstream out;
  out << "digraph \"" << dot_escape(name) << "\" {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle];\n";
  if (!a.is_empty()) out << "  __start [shape=point];\n";
  for (StateId q = 0; q < a.num_states(); ++q) {
    std::string l = a.label(q).empty() ? std::to_string(q) : a.label(q);
    out << "  s" << q << " [label=\"" << dot_escape(l) << "\"";
    if (a.marked(q)) out << ", shape=doublecircle";
    if (hl[q]) out << ", style=filled, fillcolor=lightblue";
    out << "];\n";
  }
  if (!a.is_empty()) out << "  __start -> s" << a.initial() << ";\n";
  for (StateId q = 0; q < a.num_states(); ++q) {
    // merge parallel edges into one comma-separated label
    std::map<StateId, std::vector<EventId>> grouped;
    for (const auto& t : a.out(q)) grouped[t.target].push_back(t.event);
    for (const auto& [target, evs] : grouped) {
      std::string l;
      for (std::size_t i = 0; i < evs.size(); ++i) {
        if (i) l += ",";
        l += a.alphabet->name(evs[i]);
      }
      out << "  s" << q << " -> s" << target << " [label=\"" << dot_escape(l)
          << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace cades
