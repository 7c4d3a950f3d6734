import os

import pytest

import cades

FIXTURES = os.environ.get("CADES_FIXTURES", "tests/fixtures")


@pytest.fixture(scope="module")
def watertank():
    return cades.load_model(os.path.join(FIXTURES, "watertank.json"))


def test_model_surface(watertank):
    assert set(watertank.names) == {"plant", "observations"}
    assert set(watertank.plant_events()) == {"L", "H", "EL", "EH", "close", "open"}
    assert watertank.commands() == ["v1", "v2", "v3", "v4"]
    plant = watertank.automaton("plant")
    assert plant.num_states == 5
    assert plant.accepts(["L", "close", "H"])
    assert not plant.accepts(["EH"])


def test_round_trip(watertank):
    text = watertank.serialize()
    again = cades.parse_model(text)
    assert again.serialize() == text


def test_basic_operations(watertank):
    plant = watertank.automaton("plant")
    obs = cades.observer_project(plant, plant.events())
    assert cades.language_equal(obs, plant)
    prod = cades.sync_product(plant, plant)
    assert cades.language_equal(prod, plant)


def test_command_supervisor(watertank):
    ns = cades.synth_command_supervisor(watertank)
    assert ns is not None
    assert sorted(ns.enabled_after([])) == ["v1", "v2", "v3", "v4"]
    assert sorted(ns.enabled_after(["v4", "L"])) == ["v1", "v2"]
    assert sorted(ns.enabled_after(["v4", "H"])) == ["v1", "v3"]


def test_attack_pipeline(watertank):
    outcome = cades.synth_attacker(watertank)
    assert outcome.solved
    assert outcome.marker_reachable
    attacker = outcome.attacker
    assert attacker.num_states > 0
    # the headline replacement attacks drive the attacker's own model
    assert attacker.accepts(["v1", "H", "L#", "stop", "v2", "close"])
    assert attacker.accepts(["v1", "L", "H#", "stop", "v3", "open"])
    # tampering with an unexpected reading is not part of the strategy
    assert not attacker.accepts(["v1", "H", "EH#"])

    report = cades.verify_successful(attacker, watertank, count_bound=25)
    assert report.ok()
    assert report.supervisors_checked >= 20


def test_no_attack_surface():
    model = cades.load_model(os.path.join(FIXTURES, "watertank_noattack.json"))
    outcome = cades.synth_attacker(model)
    assert not outcome.solved
    assert outcome.no_solution_reason == "damage-not-certified"


def test_consistency():
    model = cades.load_model(os.path.join(FIXTURES, "watertank_supervisors.json"))
    assert cades.check_consistency(model, "sup")
    assert not cades.check_consistency(model, "idle")


def test_dot_export(watertank):
    dot = watertank.automaton("plant").to_dot("plant")
    assert dot.startswith('digraph "plant"')
    assert "doublecircle" in dot


def test_schema_errors():
    with pytest.raises(cades.SchemaError):
        cades.parse_model("{}")
