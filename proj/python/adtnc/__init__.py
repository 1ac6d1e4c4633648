"""Algebraic coding on deterministic relay networks.

Thin wrapper over the compiled core. Network and assignment documents may be
given as dicts or JSON strings; reports come back as dicts shaped like the
CLI's --json envelopes ({"schema": "adtnc-report/1", "command": ..., "result":
...}).
"""

from __future__ import annotations

import json
from typing import Any

from . import _core
from ._core import AlgebraError, Error, Infeasible, ParseError, UsageError

__all__ = [
    "AlgebraError",
    "Error",
    "Infeasible",
    "ParseError",
    "UsageError",
    "canonical",
    "code",
    "delay",
    "erasure_average",
    "erasure_feasibility",
    "erasure_static",
    "mincut",
    "system_matrix",
    "validate",
    "verify",
]


def _text(doc: Any) -> str:
    if isinstance(doc, str):
        return doc
    return json.dumps(doc)


def canonical(network: Any) -> dict:
    """Parse a network document and return its canonical form."""
    return json.loads(_core.canonical(_text(network)))


def validate(network: Any) -> dict:
    return json.loads(_core.validate(_text(network)))


def mincut(
    network: Any,
    source: str = "",
    dest: str = "",
    method: str = "",
    q: int = 0,
    trials: int = 32,
    seed: int = 0,
) -> dict:
    return json.loads(_core.mincut(_text(network), source, dest, method, q, trials, seed))


def code(network: Any, q: int = 0, trials: int = 32, seed: int = 0) -> dict:
    return json.loads(_core.code(_text(network), q, trials, seed))


def verify(network: Any, assignment: Any, q: int = 0) -> dict:
    return json.loads(_core.verify(_text(network), _text(assignment), q))


def system_matrix(network: Any, assignment: Any, q: int = 0) -> list[list[int]]:
    """End-to-end transfer matrix as rows of raw field encodings."""
    return json.loads(_core.system_matrix(_text(network), _text(assignment), q))


def erasure_static(network: Any, q: int = 0, trials: int = 32, seed: int = 0) -> dict:
    return json.loads(_core.erasure_static(_text(network), q, trials, seed))


def erasure_average(
    network: Any, source: str = "", dest: str = "", samples: int = 0, seed: int = 0
) -> dict:
    return json.loads(_core.erasure_average(_text(network), source, dest, samples, seed))


def erasure_feasibility(network: Any) -> dict:
    return json.loads(_core.erasure_feasibility(_text(network)))


def delay(
    network: Any,
    assignment: Any,
    q: int = 0,
    method: str = "symbolic",
    order: int = 0,
    seed: int = 0,
) -> dict:
    return json.loads(_core.delay(_text(network), _text(assignment), q, method, order, seed))
