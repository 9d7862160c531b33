"""Finite structural causal models: validation, abstraction verification and
search, and continual model revision from observation streams.

Models, abstractions, graphs, and interventions use the same JSON schemas as
the command-line tool and the files under ``tests/fixtures``. Every function
accepts either a ``dict`` in that schema or raw JSON text, and returns plain
Python values.
"""

import json as _json

from ._core import CapacityError, DomainError, RationalError, StructuralError
from . import _core

__all__ = [
    "CapacityError",
    "DomainError",
    "RationalError",
    "StructuralError",
    "cca_run",
    "find_abstraction",
    "fit_high_level",
    "pushforward",
    "solve",
    "validate_scm",
    "verify",
]

__version__ = "0.1.0"


def _text(payload):
    """Pass JSON text through; serialize anything else."""
    if isinstance(payload, str):
        return payload
    return _json.dumps(payload)


def validate_scm(model):
    """Check a model for structural violations.

    Returns ``{"ok": bool, "violations": [{"kind", "message"}, ...]}``.
    """
    return _json.loads(_core.validate_scm(_text(model)))


def solve(model, u, intervention=None):
    """Evaluate the model at exogenous values ``u`` under an intervention.

    ``intervention`` maps variable names to forced values, e.g. ``{"A": 1}``;
    ``None`` means the null intervention. Returns endogenous values in
    declared order.
    """
    return _core.solve(_text(model), list(u), _text(intervention or {}))


def pushforward(model, intervention=None):
    """Exact distribution over endogenous assignments.

    Returns a list of ``{"state": [...], "mass": "p/q"}`` entries.
    """
    return _json.loads(_core.pushforward(_text(model), _text(intervention or {})))


def verify(low, high, abstraction):
    """Run the four abstraction checks between two models.

    Returns the full report with a pass flag and a witness per failed check.
    """
    return _json.loads(_core.verify(_text(low), _text(high), _text(abstraction)))


def find_abstraction(low, high, mode="partition", budget=1_000_000, table_cap=4096,
                     threads=1):
    """Search candidate maps in canonical order; first verified one wins.

    Returns ``{"found", "index", "abstraction", "log"}``. The log counts
    emitted, prefiltered, and considered candidates and flags budget
    exhaustion; parallel runs report identical logs to sequential ones.
    """
    return _json.loads(
        _core.find_abstraction(_text(low), _text(high), mode, budget, table_cap, threads))


def fit_high_level(data_csv, cause, target, budget=1_000_000, table_cap=16):
    """Fit the best mediator merge between a cause and a target from CSV data.

    Returns the fitted model, the column map, decision rules, and the score
    (rows whose target value the model reproduces).
    """
    return _json.loads(_core.fit_high_level(data_csv, cause, target, budget, table_cap))


def cca_run(graph, base_csv, stream_csv, budget=1_000_000, table_cap=16):
    """Fit from intake data, then revise over an observation stream.

    Returns the session record: initial and final rules, one record per
    stream row, remaining active columns, and the installed model.
    """
    return _json.loads(
        _core.cca_run(_text(graph), base_csv, stream_csv, budget, table_cap))
