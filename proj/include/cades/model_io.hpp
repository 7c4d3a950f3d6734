#pragma once

#include <iosfwd>
#include <map>

#include "cades/automaton.hpp"

namespace cades {

struct SchemaError : Error {
  using Error::Error;
};

/// A model interchange file: one alphabet plus named automata over it.
/// The plant's damage states are its marked states.
struct ModelFile {
  std::shared_ptr<const Alphabet> alphabet;
  std::vector<std::pair<std::string, Automaton>> automata;

  const Automaton& require(const std::string& name) const;
  const Automaton* find(const std::string& name) const;
};

/// Parses and validates a model file. Reserved state labels are rejected;
/// every referenced event and state must resolve. `max_commands` bounds the
/// generated command set when the file lists none.
ModelFile load_model(const std::string& path, std::size_t max_commands = 4096);
ModelFile parse_model(const std::string& text, std::size_t max_commands = 4096);

/// Canonical serialization: loading its own output and saving again is
/// byte-identical.
std::string serialize_model(const ModelFile& model);
void save_model(const ModelFile& model, const std::string& path);

/// Deterministic DOT rendering; marked states are double circles and
/// highlighted states are filled.
std::string export_dot(const Automaton& a, const std::string& name,
                       const std::vector<StateId>& highlight = {});

void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cades
