"""Covert sensor-actuator attacker synthesis for discrete-event systems.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._cades import (  # noqa: F401
    Automaton,
    CadesError,
    Model,
    SchemaError,
    SynthesisOutcome,
    VerifyReport,
    check_consistency,
    enumerate_consistent_supervisors,
    language_equal,
    language_included,
    load_model,
    observer_project,
    parse_model,
    sync_product,
    synth_attacker,
    synth_command_supervisor,
    verify_successful,
)

__all__ = [
    "Automaton",
    "CadesError",
    "Model",
    "SchemaError",
    "SynthesisOutcome",
    "VerifyReport",
    "check_consistency",
    "enumerate_consistent_supervisors",
    "language_equal",
    "language_included",
    "load_model",
    "observer_project",
    "parse_model",
    "sync_product",
    "synth_attacker",
    "synth_command_supervisor",
    "verify_successful",
]
