#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cades/model_io.hpp"
#include "cades/verification.hpp"

namespace py = pybind11;
using namespace cades;

namespace {

EventSet set_from_names(const Alphabet& a, const std::vector<std::string>& names) {
  EventSet s = a.empty_set();
  for (const auto& n : names) s.add(a.require(n));
  return s;
}

std::vector<EventId> word_from_names(const Alphabet& a,
                                     const std::vector<std::string>& names) {
  std::vector<EventId> w;
  for (const auto& n : names) w.push_back(a.require(n));
  return w;
}

std::vector<std::string> names_of(const Alphabet& a, const EventSet& s) {
  std::vector<std::string> out;
  for (EventId e : s.to_vector()) out.push_back(a.name(e));
  return out;
}

}  // namespace

PYBIND11_MODULE(_cades, m) {
  m.doc() = "Covert sensor-actuator attacker synthesis for discrete-event "
            "systems";

  // translators run newest-first: register the base before the derived
  py::register_exception<Error>(m, "CadesError");
  py::register_exception<SchemaError>(m, "SchemaError");

  py::class_<Automaton>(m, "Automaton")
      .def_property_readonly("num_states", &Automaton::num_states)
      .def_property_readonly("num_transitions", &Automaton::num_transitions)
      .def_property_readonly("initial", &Automaton::initial)
      .def("label", &Automaton::label)
      .def("marked", &Automaton::marked)
      .def("events",
           [](const Automaton& a) { return names_of(*a.alphabet, a.events); })
      .def("transitions",
           [](const Automaton& a) {
             std::vector<std::tuple<int, std::string, int>> out;
             for (StateId q = 0; q < a.num_states(); ++q)
               for (const auto& t : a.out(q))
                 out.emplace_back(q, a.alphabet->name(t.event), t.target);
             return out;
           })
      .def("accepts",
           [](const Automaton& a, const std::vector<std::string>& w) {
             return a.run(a.initial(), word_from_names(*a.alphabet, w))
                 .has_value();
           })
      .def("enabled_after",
           [](const Automaton& a, const std::vector<std::string>& w) {
             auto s = a.run(a.initial(), word_from_names(*a.alphabet, w));
             if (!s) throw Error("word not accepted");
             std::vector<std::string> out;
             for (const auto& t : a.out(*s))
               out.push_back(a.alphabet->name(t.event));
             return out;
           })
      .def("to_dot",
           [](const Automaton& a, const std::string& name) {
             return export_dot(a, name);
           },
           py::arg("name") = "automaton")
      .def("__repr__", [](const Automaton& a) {
        return "<Automaton states=" + std::to_string(a.num_states()) +
               " transitions=" + std::to_string(a.num_transitions()) + ">";
      });

  py::class_<ModelFile>(m, "Model")
      .def_property_readonly("names",
                             [](const ModelFile& mf) {
                               std::vector<std::string> out;
                               for (const auto& [n, a] : mf.automata)
                                 out.push_back(n);
                               return out;
                             })
      .def("automaton",
           [](const ModelFile& mf, const std::string& name) {
             return mf.require(name);
           })
      .def("plant_events",
           [](const ModelFile& mf) {
             return names_of(*mf.alphabet, mf.alphabet->plant_events());
           })
      .def("commands",
           [](const ModelFile& mf) {
             return names_of(*mf.alphabet, mf.alphabet->commands());
           })
      .def("serialize", &serialize_model);

  m.def("load_model", &load_model, py::arg("path"),
        py::arg("max_commands") = 4096);
  m.def("parse_model", &parse_model, py::arg("text"),
        py::arg("max_commands") = 4096);

  m.def("sync_product", &sync_product);
  m.def("observer_project",
        [](const Automaton& a, const std::vector<std::string>& events) {
          return observer_project(a, set_from_names(*a.alphabet, events));
        });
  m.def("language_included",
        [](const Automaton& a, const Automaton& b) {
          return language_included(a, b);
        });
  m.def("language_equal", &language_equal);

  m.def("synth_command_supervisor",
        [](const ModelFile& mf, bool sound_only) -> std::optional<Automaton> {
          PipelineOptions opts;
          opts.sound_only = sound_only;
          CommandSupervisorResult r = procedure1(mf.require("plant"), opts);
          if (!r.ns) return std::nullopt;
          return r.ns->aut;
        },
        py::arg("model"), py::arg("sound_only") = false);

  py::class_<SynthesisOutcome>(m, "SynthesisOutcome")
      .def_property_readonly(
          "attacker",
          [](const SynthesisOutcome& o) { return o.attacker; })
      .def_property_readonly(
          "solved", [](const SynthesisOutcome& o) { return o.has_solution(); })
      .def_readonly("marker_reachable", &SynthesisOutcome::marker_reachable)
      .def_readonly("sound_incomplete", &SynthesisOutcome::sound_incomplete)
      .def_readonly("no_solution_reason", &SynthesisOutcome::no_solution_reason)
      .def_readonly("model_sizes", &SynthesisOutcome::model_sizes)
      .def_readonly("seconds", &SynthesisOutcome::seconds)
      .def_property_readonly("intermediates", [](const SynthesisOutcome& o) {
        return o.intermediates;
      });

  m.def("synth_attacker",
        [](const ModelFile& mf, bool sound_only, bool keep_intermediates) {
          PipelineOptions opts;
          opts.sound_only = sound_only;
          opts.keep_intermediates = keep_intermediates;
          AttackConstraint ac = AttackConstraint::from_alphabet(*mf.alphabet);
          return synth_attacker(mf.require("plant"),
                                mf.require("observations"), ac, opts);
        },
        py::arg("model"), py::arg("sound_only") = false,
        py::arg("keep_intermediates") = false);

  m.def("check_consistency",
        [](const ModelFile& mf, const std::string& supervisor) {
          return check_consistency(mf.require("plant"),
                                   mf.require(supervisor),
                                   mf.require("observations"));
        });

  py::class_<VerifyReport>(m, "VerifyReport")
      .def_readonly("supervisors_checked", &VerifyReport::supervisors_checked)
      .def_readonly("truncated_enumeration",
                    &VerifyReport::truncated_enumeration)
      .def("ok", &VerifyReport::ok)
      .def_property_readonly("failures", [](const VerifyReport& r) {
        std::vector<std::pair<int, std::string>> out;
        for (const auto& f : r.failures) out.emplace_back(f.supervisor, f.kind);
        return out;
      });

  m.def("verify_successful",
        [](const Automaton& attacker, const ModelFile& mf, int state_bound,
           long count_bound) {
          SupervisorEnumOptions bounds;
          if (state_bound > 0) bounds.state_bound = state_bound;
          bounds.count_bound = count_bound;
          AttackConstraint ac = AttackConstraint::from_alphabet(*mf.alphabet);
          return verify_successful(attacker, mf.require("plant"),
                                   mf.require("observations"), ac, bounds);
        },
        py::arg("attacker"), py::arg("model"), py::arg("state_bound") = -1,
        py::arg("count_bound") = 10000);

  m.def("enumerate_consistent_supervisors",
        [](const ModelFile& mf, int state_bound, long count_bound,
           bool require_safe) {
          SupervisorEnumOptions opts;
          if (state_bound > 0) opts.state_bound = state_bound;
          opts.count_bound = count_bound;
          opts.require_safe = require_safe;
          EnumeratedSupervisors r = enumerate_consistent_supervisors(
              mf.require("plant"), mf.require("observations"), opts);
          return std::make_pair(r.supervisors, r.truncated());
        },
        py::arg("model"), py::arg("state_bound") = -1,
        py::arg("count_bound") = 10000, py::arg("require_safe") = true);
}
