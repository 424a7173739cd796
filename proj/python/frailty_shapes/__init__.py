"""Relative frailty variance (RFV) and cross-ratio function (CRF) shapes.

Families and models are plain dicts in the same JSON layout the command-line
tool reads, e.g. ``{"family": "poisson", "params": {"eta": 2}}``.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Sequence

from . import _core

FrailtyError = _core.FrailtyError

__all__ = [
    "FrailtyError",
    "error_kind",
    "validate",
    "laplace",
    "moments",
    "rfv",
    "crf",
    "rfv_closed",
    "rfv_derivative",
    "stationary_points",
    "classify_tail",
    "curve",
    "survivor_pmf",
    "oracle_rfv",
    "simulate",
    "correlated_crf",
    "frailty_correlation",
    "piecewise_rfv",
    "timevarying_rfv",
    "verify",
]


def _doc(obj: dict[str, Any]) -> str:
    return json.dumps(obj)


def error_kind(err: FrailtyError) -> str:
    """The machine-readable kind carried by a FrailtyError."""
    return err.args[0]


def validate(family: dict) -> None:
    _core.validate(_doc(family))


def laplace(family: dict, s: float) -> dict[str, float]:
    return _core.laplace(_doc(family), float(s))


def moments(family: dict) -> tuple[float, float]:
    return _core.moments(_doc(family))


def rfv(family: dict, lam: float) -> float:
    return _core.rfv(_doc(family), float(lam))


def crf(family: dict, lam: float) -> float:
    return _core.crf(_doc(family), float(lam))


def rfv_closed(family: dict, lam: float) -> float:
    return _core.rfv_closed(_doc(family), float(lam))


def rfv_derivative(family: dict, lam: float) -> float:
    return _core.rfv_derivative(_doc(family), float(lam))


def stationary_points(family: dict, lambda_max: float) -> list[tuple[float, str]]:
    return _core.stationary_points(_doc(family), float(lambda_max))


def classify_tail(family: dict) -> str:
    return _core.classify_tail(_doc(family))


def curve(family: dict, grid: Iterable[float]) -> dict[str, Any]:
    """RFV and CRF on a grid, with tail class and stationary points."""
    grid = [float(x) for x in grid]
    doc = _doc(family)
    out = json.loads(_core.curve(doc, grid))
    out["rfv"], out["crf"] = _core.curve_values(doc, grid)
    return out


def survivor_pmf(family: dict, lam: float) -> tuple[list[float], list[float]]:
    return _core.survivor_pmf(_doc(family), float(lam))


def oracle_rfv(family: dict, lam: float) -> float:
    return _core.oracle_rfv(_doc(family), float(lam))


def simulate(config: dict) -> dict[str, Any]:
    """Clustered event times; cured times are ``math.inf``."""
    z, times, cured = _core.simulate(_doc(config))
    return {"z": z, "times": times, "cure_fraction": cured}


def correlated_crf(model: dict, t: Sequence[float]) -> float:
    return _core.correlated_crf(_doc(model), [float(x) for x in t])


def frailty_correlation(model: dict, j: int = 0, j_prime: int = 1) -> float:
    return _core.frailty_correlation(_doc(model), j, j_prime)


def piecewise_rfv(model: dict, t: Sequence[float]) -> float:
    return _core.piecewise_rfv(_doc(model), [float(x) for x in t])


def timevarying_rfv(model: dict, lam: float) -> float:
    return _core.timevarying_rfv(_doc(model), float(lam))


def verify(
    only: Sequence[str] = (),
    seed: int = 20240601,
    mc_clusters: int = 1_000_000,
    fault: str = "none",
) -> dict[str, Any]:
    """Run acceptance criteria and return the JSON report as a dict."""
    return json.loads(_core.verify(list(only), seed, mc_clusters, fault))


