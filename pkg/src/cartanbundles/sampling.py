"""Seeded sampling and the generic check loop.

A check is a pair of pure functions: ``draw(target, rng) -> witness`` and
``residual(target, witness, tol) -> float``. Witnesses are JSON-ready dicts,
so any report can be re-evaluated from its stored witness alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .numkit import DEFAULT_TOL, Tolerances
from .report import CheckReport, jsonable

STRUCTURAL_TOL = 0.5


@dataclass(frozen=True)
class Sampler:
    seed: int = 42
    points: int = 100
    pairs: int = 200
    groups: int = 50

    def stream(self, index: int) -> np.random.Generator:
        """Independent generator for the check at position ``index``."""
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(index,)))

    def count(self, kind: str) -> int:
        if kind == "once":
            return 1
        return getattr(self, kind)

    def scaled(self, factor: float) -> "Sampler":
        return Sampler(self.seed, max(1, int(self.points * factor)), max(1, int(self.pairs * factor)),
                       max(1, int(self.groups * factor)))


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    count: str  # "points" | "pairs" | "groups" | "once"
    tolerance: str  # "exact" | "fd" | "structural"
    draw: Callable[[Any, np.random.Generator], dict]
    residual: Callable[[Any, dict, Tolerances], float]
    target_kind: str = "bundle"

    def tol_value(self, tol: Tolerances) -> float:
        return {"exact": tol.exact_tol, "fd": tol.fd_tol, "structural": STRUCTURAL_TOL}[self.tolerance]


def run_check(check: Check, target, sampler: Sampler | None = None, tol: Tolerances = DEFAULT_TOL,
              index: int = 0) -> CheckReport:
    sampler = Sampler() if sampler is None else sampler
    rng = sampler.stream(index)
    n = sampler.count(check.count)
    worst, witness = -1.0, None
    for _ in range(n):
        w = jsonable(check.draw(target, rng))
        try:
            r = float(check.residual(target, w, tol))
        except np.linalg.LinAlgError:
            r = math.inf
        if math.isnan(r):
            r = math.inf
        if r > worst:
            worst, witness = r, w
    return CheckReport(check.name, check.anchor, n, max(worst, 0.0), check.tol_value(tol), witness)


def reevaluate(check: Check, target, witness: dict, tol: Tolerances = DEFAULT_TOL) -> float:
    return float(check.residual(target, witness, tol))


# -- draw helpers -------------------------------------------------------------

def uniform_in_box(rng: np.random.Generator, lower, upper, margin: float = 1e-3) -> np.ndarray:
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    return rng.uniform(lower + margin, upper - margin)


def tangent(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size=dim)


def algebra_coords(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.uniform(-0.5, 0.5, size=dim)
