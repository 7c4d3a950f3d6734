#include <doctest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"

using namespace cades;
using namespace cades::testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("the water-tank fixture is canonical: load then save is identity") {
  std::string text = slurp(fixture_path("watertank.json"));
  ModelFile model = parse_model(text);
  CHECK(serialize_model(model) == text);
}

TEST_CASE("save then load preserves the models semantically") {
  ModelFile model = load_watertank();
  ModelFile again = parse_model(serialize_model(model));
  CHECK(model.alphabet->structurally_equal(*again.alphabet));
  REQUIRE(model.automata.size() == again.automata.size());
  for (std::size_t i = 0; i < model.automata.size(); ++i) {
    CHECK(model.automata[i].first == again.automata[i].first);
    const Automaton& x = model.automata[i].second;
    Automaton y = again.automata[i].second;
    y.alphabet = model.alphabet;
    CHECK(x.events == y.events);
    CHECK(language_equal(x, y));
    CHECK(x.num_states() == y.num_states());
    for (StateId q = 0; q < x.num_states(); ++q)
      CHECK(x.marked(q) == y.marked(q));
  }
}

TEST_CASE("schema violations carry a location") {
  auto expect_schema_error = [](const std::string& text,
                                const std::string& needle) {
    try {
      parse_model(text);
      FAIL("expected a schema error for: ", needle);
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  SUBCASE("no states means no initial state") {
    expect_schema_error(R"({
      "format_version": 1,
      "alphabet": {"events": [{"name": "a"}]},
      "automata": [{"name": "plant", "states": [], "initial": "x",
                    "transitions": []}]
    })",
                        "no states");
  }
  SUBCASE("reserved state labels are rejected") {
    expect_schema_error(R"({
      "format_version": 1,
      "alphabet": {"events": [{"name": "a"}]},
      "automata": [{"name": "plant", "states": ["dump"], "initial": "dump",
                    "transitions": []}]
    })",
                        "reserved");
  }
  SUBCASE("unknown events in transitions") {
    expect_schema_error(R"({
      "format_version": 1,
      "alphabet": {"events": [{"name": "a"}]},
      "automata": [{"name": "plant", "states": ["s"], "initial": "s",
                    "transitions": [["s", "zap", "s"]]}]
    })",
                        "unknown event");
  }
  SUBCASE("nondeterminism") {
    expect_schema_error(R"({
      "format_version": 1,
      "alphabet": {"events": [{"name": "a"}]},
      "automata": [{"name": "plant", "states": ["s", "t"], "initial": "s",
                    "transitions": [["s", "a", "s"], ["s", "a", "t"]]}]
    })",
                        "nondeterministic");
  }
  SUBCASE("tampered names cannot be declared") {
    expect_schema_error(R"({
      "format_version": 1,
      "alphabet": {"events": [{"name": "a#"}]},
      "automata": []
    })",
                        "may not contain");
  }
  SUBCASE("commands must cover the uncontrollable events") {
    expect_schema_error(R"({
      "format_version": 1,
      "alphabet": {"events": [{"name": "a"}, {"name": "c", "controllable": true}],
                   "commands": [{"name": "g", "events": ["c"]}]},
      "automata": []
    })",
                        "uncontrollable");
  }
  SUBCASE("bad version") {
    expect_schema_error(R"({"format_version": 7, "alphabet": {"events": []},
                            "automata": []})",
                        "format_version");
  }
}

TEST_CASE("dot export is deterministic and styles marked and highlighted "
          "states") {
  ModelFile model = load_watertank();
  const Automaton& g = model.require("plant");
  std::string dot1 = export_dot(g, "plant", {g.find_label("xlow")});
  std::string dot2 = export_dot(g, "plant", {g.find_label("xlow")});
  CHECK(dot1 == dot2);
  CHECK(dot1.find("doublecircle") != std::string::npos);
  CHECK(dot1.find("fillcolor=lightblue") != std::string::npos);
  CHECK(dot1.find("digraph \"plant\"") != std::string::npos);
  CHECK(dot1.find("label=\"L\"") != std::string::npos);
  // merged parallel edges hold comma-joined labels
  Automaton two(model.alphabet, g.events);
  two.add_state("x");
  two.add_state("y");
  two.set_initial(0);
  two.add_transition(0, model.alphabet->require("L"), 1);
  two.add_transition(0, model.alphabet->require("H"), 1);
  CHECK(export_dot(two, "two").find("label=\"L,H\"") != std::string::npos);
}

TEST_CASE("atomic writes replace the target file") {
  std::string path = "cades_io_test.tmp.json";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  CHECK(slurp(path) == "second");
  std::remove(path.c_str());
}
