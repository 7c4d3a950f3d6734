#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace cades;
using namespace cades::testing;

namespace {

// Small scratch alphabet: a,b controllable+observable; u unobservable; the
// commands are generated (4 of them).
std::shared_ptr<const Alphabet> scratch_alphabet() {
  return Alphabet::make({{"a", true, true, false, false},
                         {"b", true, true, false, false},
                         {"u", false, false, false, false}});
}

}  // namespace

TEST_CASE("event sets behave like sets") {
  auto a = scratch_alphabet();
  EventSet s = a->empty_set();
  CHECK(s.empty());
  s.add(a->require("a"));
  s.add(a->require("u"));
  CHECK(s.count() == 2);
  CHECK(s.contains(a->require("a")));
  CHECK_FALSE(s.contains(a->require("b")));
  EventSet t = a->plant_events();
  CHECK(s.is_subset_of(t));
  CHECK_FALSE(t.is_subset_of(s));
  CHECK((t - s).count() == 1);
  CHECK((t & s) == s);
  CHECK((s | t) == t);
}

TEST_CASE("alphabet: generated commands cover every superset of the "
          "uncontrollable events") {
  auto a = scratch_alphabet();
  CHECK(a->commands().count() == 4);  // two controllable events
  EventSet unc = a->uncontrollable_events();
  for (EventId c : a->commands().to_vector())
    CHECK(unc.is_subset_of(a->command_members(c)));
  // lookup by member set
  EventSet m = unc;
  m.add(a->require("a"));
  EventId c = a->command_with_members(m);
  REQUIRE(c >= 0);
  CHECK(a->command_members(c) == m);
}

TEST_CASE("alphabet: command limit guards the exponential generation") {
  std::vector<Alphabet::PlantEventSpec> specs;
  for (int i = 0; i < 5; ++i)
    specs.push_back({std::string(1, char('a' + i)), true, true, false, false});
  CHECK_THROWS_AS(Alphabet::make(specs, {}, 8), Error);
  CHECK(Alphabet::make(specs, {}, 32)->commands().count() == 32);
}

TEST_CASE("automaton rejects nondeterminism and foreign events") {
  auto a = scratch_alphabet();
  Automaton aut(a, set_of(*a, {"a"}));
  aut.add_state("x");
  aut.add_state("y");
  aut.set_initial(0);
  aut.add_transition(0, a->require("a"), 1);
  CHECK_THROWS_AS(aut.add_transition(0, a->require("a"), 0), Error);
  CHECK_THROWS_AS(aut.add_transition(0, a->require("b"), 1), Error);
  aut.validate();
}

TEST_CASE("synchronous product: lifted water-tank plant") {
  ModelFile model = load_watertank();
  const Automaton& g = model.require("plant");
  Automaton ce = build_command_execution(model.alphabet);
  Automaton lifted = sync_product(g, ce);
  lifted.validate();
  const Alphabet& a = *model.alphabet;

  // after any command the plant reports L or H; then only the valve events
  auto s = lifted.run(lifted.initial(), word(a, {"v4", "L"}));
  REQUIRE(s.has_value());
  auto end = lifted.run(lifted.initial(), word(a, {"v4", "L", "v2", "close"}));
  REQUIRE(end.has_value());
  CHECK_FALSE(lifted.run(lifted.initial(), word(a, {"L"})));  // command first
  CHECK_FALSE(lifted.run(lifted.initial(), word(a, {"v1", "close"})));
}

TEST_CASE("synchronous product: one-state self-loop automaton is neutral") {
  ModelFile model = load_watertank();
  const Automaton& g = model.require("plant");
  Automaton u(model.alphabet, g.events);
  u.add_state("all");
  u.set_initial(0);
  for (EventId e : g.events.to_vector()) u.add_transition(0, e, 0);
  CHECK(language_equal(sync_product(g, u), g));
}

TEST_CASE("synchronous product: disjoint alphabets interleave") {
  auto a = Alphabet::make({{"a", true, true, false, false},
                           {"b", true, false, false, false},
                           {"c", true, true, false, false},
                           {"d", true, false, false, false}});
  Automaton x(a, set_of(*a, {"a", "b"}));
  x.add_state("0");
  x.add_state("1");
  x.add_state("2");
  x.set_initial(0);
  x.add_transition(0, a->require("a"), 1);
  x.add_transition(1, a->require("b"), 2);
  x.add_transition(2, a->require("a"), 0);

  Automaton y(a, set_of(*a, {"c", "d"}));
  y.add_state("0");
  y.add_state("1");
  y.add_state("2");
  y.set_initial(0);
  y.add_transition(0, a->require("c"), 1);
  y.add_transition(1, a->require("d"), 0);
  y.add_transition(1, a->require("c"), 2);

  Automaton prod = sync_product(x, y);
  auto got = enumerate_language(prod, 6);
  auto shuffled = oracle::shuffle_strings(enumerate_language(x, 6),
                                          enumerate_language(y, 6));
  std::set<std::vector<EventId>> want;
  for (const auto& s : shuffled)
    if (s.size() <= 6) want.insert(s);
  CHECK(got == want);
}

TEST_CASE("synchronous product: language characterization with shared and "
          "private events") {
  auto a = scratch_alphabet();
  Automaton x(a, set_of(*a, {"a", "b"}));
  x.add_state("0");
  x.add_state("1");
  x.set_initial(0);
  x.add_transition(0, a->require("a"), 1);
  x.add_transition(1, a->require("b"), 0);
  x.add_transition(1, a->require("a"), 1);

  Automaton y(a, set_of(*a, {"b", "u"}));  // b shared, u private
  y.add_state("0");
  y.add_state("1");
  y.set_initial(0);
  y.add_transition(0, a->require("u"), 1);
  y.add_transition(1, a->require("b"), 0);

  Automaton prod = sync_product(x, y);
  auto got = enumerate_language(prod, 6);

  // s in L(x||y) iff the projection on each alphabet runs in that part
  std::set<std::vector<EventId>> direct;
  std::vector<EventId> evs = prod.events.to_vector();
  std::function<void(std::vector<EventId>&)> grow = [&](std::vector<EventId>& w) {
    if (x.run(x.initial(), project_string(w, x.events)) &&
        y.run(y.initial(), project_string(w, y.events)))
      direct.insert(w);
    if (w.size() == 6) return;
    for (EventId e : evs) {
      w.push_back(e);
      grow(w);
      w.pop_back();
    }
  };
  std::vector<EventId> w;
  grow(w);
  CHECK(got == direct);
  CHECK(got.count(word(*a, {"a", "u", "b"})) == 1);
  CHECK(got.count(word(*a, {"a", "b"})) == 0);  // y must move first on u
}

TEST_CASE("synchronous product rejects incompatible alphabets") {
  auto a1 = scratch_alphabet();
  auto a2 = Alphabet::make({{"a", true, true, false, false}});
  Automaton x(a1, a1->plant_events());
  x.add_state("0");
  x.set_initial(0);
  Automaton y(a2, a2->plant_events());
  y.add_state("0");
  y.set_initial(0);
  CHECK_THROWS_AS(sync_product(x, y), Error);
}

TEST_CASE("unobservable reach") {
  ModelFile model = load_watertank();
  const Automaton& g = model.require("plant");

  SUBCASE("everything observable: the reach is the state itself") {
    for (StateId q = 0; q < g.num_states(); ++q) {
      auto r = unobservable_reach(g, q, model.alphabet->observable_events());
      CHECK(r == std::vector<StateId>{q});
    }
  }
  SUBCASE("empty observation set: the reach is everything reachable") {
    auto r = unobservable_reach(g, g.initial(), model.alphabet->empty_set());
    CHECK(r == oracle::reach_by_bfs(g, g.initial(), model.alphabet->empty_set()));
    CHECK(r.size() == 5);
  }
  SUBCASE("unknown state id") {
    CHECK_THROWS_AS(
        unobservable_reach(g, 99, model.alphabet->observable_events()), Error);
  }
}

TEST_CASE("unobservable reach on a chain with two unobservable events") {
  auto a = Alphabet::make({{"a", true, false, false, false},
                           {"u", false, false, false, false},
                           {"v", false, false, false, false}});
  Automaton chain(a, a->plant_events());
  for (int i = 0; i < 5; ++i) chain.add_state(std::to_string(i));
  chain.set_initial(0);
  chain.add_transition(0, a->require("u"), 1);
  chain.add_transition(1, a->require("a"), 2);
  chain.add_transition(1, a->require("v"), 3);
  chain.add_transition(3, a->require("u"), 4);
  for (StateId q = 0; q < 5; ++q) {
    auto got = unobservable_reach(chain, q, a->observable_events());
    CHECK(got == oracle::reach_by_bfs(chain, q, a->observable_events()));
  }
  CHECK(unobservable_reach(chain, 0, a->observable_events()) ==
        std::vector<StateId>{0, 1, 3, 4});
}

TEST_CASE("observer over the full alphabet reproduces the automaton") {
  ModelFile model = load_watertank();
  const Automaton& g = model.require("plant");
  Automaton obs = observer_project(g, g.events);
  CHECK(obs.num_states() == trim_reachable(g).num_states());
  CHECK(language_equal(obs, g));
}

TEST_CASE("observer: projection semantics with an unobservable event") {
  auto a = Alphabet::make({{"a", true, false, false, false},
                           {"b", true, true, false, false},
                           {"u", false, false, false, false}});
  Automaton aut(a, a->plant_events());
  for (int i = 0; i < 4; ++i) aut.add_state(std::to_string(i));
  aut.set_initial(0);
  aut.add_transition(0, a->require("a"), 1);
  aut.add_transition(0, a->require("u"), 2);
  aut.add_transition(2, a->require("b"), 3);
  aut.add_transition(1, a->require("b"), 0);

  EventSet keep = a->observable_events();
  Automaton obs = observer_project(aut, keep);
  obs.validate();

  // s is accepted by the observer iff its projection is the projection of
  // some accepted string; unprojected events self-loop everywhere.
  auto lang = enumerate_language(aut, 12);
  auto projected = oracle::project_strings(lang, keep);
  auto all = oracle::language_by_trial(obs, aut.events.to_vector(), 6);
  std::set<std::vector<EventId>> expect;
  std::function<void(std::vector<EventId>&)> grow = [&](std::vector<EventId>& w) {
    if (projected.count(project_string(w, keep))) expect.insert(w);
    if (w.size() == 6) return;
    for (EventId e : aut.events.to_vector()) {
      w.push_back(e);
      grow(w);
      w.pop_back();
    }
  };
  std::vector<EventId> w;
  grow(w);
  CHECK(all == expect);

  for (StateId q = 0; q < obs.num_states(); ++q)
    for (EventId e : (aut.events - keep).to_vector())
      CHECK(obs.next(q, e) == q);
}

TEST_CASE("string projection") {
  ModelFile model = load_watertank();
  const Alphabet& a = *model.alphabet;
  EventSet sigma_o = a.observable_events();
  CHECK(project_string(word(a, {"v1", "H", "v3", "open"}), sigma_o) ==
        word(a, {"H", "open"}));
  CHECK(project_string({}, sigma_o).empty());
  CHECK(project_string(word(a, {"L", "close"}), a.empty_set()).empty());
  // homomorphism
  auto s = word(a, {"v1", "L"});
  auto t = word(a, {"close", "v2"});
  auto st = s;
  st.insert(st.end(), t.begin(), t.end());
  auto ps = project_string(s, sigma_o);
  auto pt = project_string(t, sigma_o);
  ps.insert(ps.end(), pt.begin(), pt.end());
  CHECK(project_string(st, sigma_o) == ps);
}

TEST_CASE("trim, removal and marker reachability") {
  ModelFile model = load_watertank();
  const Automaton& g = model.require("plant");
  const Alphabet& a = *model.alphabet;

  CHECK(is_marker_reachable(g));  // damage is reachable in the open loop
  CHECK(language_equal(remove_states(g, std::vector<StateId>{}),
                       trim_reachable(g)));

  // deleting both damage states leaves the safe three-state loop
  Automaton safe = remove_states(
      g, std::vector<StateId>{g.find_label("xlow"), g.find_label("xhigh")});
  CHECK(safe.num_states() == 3);
  CHECK_FALSE(is_marker_reachable(safe));
  CHECK(safe.run(safe.initial(), word(a, {"L", "close", "H", "open"})));

  // deleting the initial state empties the automaton
  Automaton none = remove_states(g, std::vector<StateId>{g.initial()});
  CHECK(none.is_empty());
  CHECK_FALSE(is_marker_reachable(none));
}

TEST_CASE("completion adds a fresh dump sink") {
  ModelFile model = load_watertank();
  const Automaton& g = model.require("plant");
  EventSet over = g.events;
  CompletionResult comp = complete(g, "sink", over);
  CHECK(comp.aut.num_states() == g.num_states() + 1);
  for (StateId q = 0; q < comp.aut.num_states(); ++q)
    for (EventId e : over.to_vector()) CHECK(comp.aut.defined(q, e));
  CHECK_FALSE(comp.aut.marked(comp.dump));
  CHECK(language_included(g, comp.aut));
  // marked language unchanged: marked states reached by the same words
  auto lang = enumerate_language(g, 4);
  for (const auto& s : lang) {
    auto e1 = g.run(g.initial(), s);
    auto e2 = comp.aut.run(comp.aut.initial(), s);
    REQUIRE(e2.has_value());
    CHECK(g.marked(*e1) == comp.aut.marked(*e2));
  }
  CHECK_THROWS_AS(complete(g, "mid", over), Error);  // label collision
}

TEST_CASE("language enumeration matches the trial oracle") {
  ModelFile model = load_watertank();
  const Automaton& g = model.require("plant");
  auto got = enumerate_language(g, 3);
  auto want = oracle::language_by_trial(g, g.events.to_vector(), 3);
  CHECK(got == want);
  CHECK(got.count(word(*model.alphabet, {"L", "close", "H"})) == 1);
  CHECK(got.count(word(*model.alphabet, {"L", "open"})) == 1);
  CHECK(got.count(word(*model.alphabet, {"EH"})) == 0);
}

TEST_CASE("language inclusion produces replayable witnesses") {
  ModelFile model = load_watertank();
  const Automaton& g = model.require("plant");
  Automaton safe = remove_states(
      g, std::vector<StateId>{g.find_label("xlow"), g.find_label("xhigh")});
  CHECK(language_included(safe, g));
  std::vector<EventId> witness;
  CHECK_FALSE(language_included(g, safe, &witness));
  CHECK(g.run(g.initial(), witness));
  CHECK_FALSE(safe.run(safe.initial(), witness));
}

TEST_CASE("canonical form is stable and language preserving") {
  ModelFile model = load_watertank();
  const Automaton& g = model.require("plant");
  Automaton c1 = canonical_form(g);
  Automaton c2 = canonical_form(c1);
  CHECK(language_equal(g, c1));
  CHECK(c1.num_states() == c2.num_states());
  for (StateId q = 0; q < c1.num_states(); ++q) {
    CHECK(c1.label(q) == c2.label(q));
    CHECK(c1.out(q).size() == c2.out(q).size());
    for (std::size_t i = 0; i < c1.out(q).size(); ++i)
      CHECK(c1.out(q)[i] == c2.out(q)[i]);
  }
}
