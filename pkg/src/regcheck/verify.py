"""Adaptive regularity verification of Bezier volumes.

Each cell of an octree over the parameter cube carries the Bernstein
coefficients of the Jacobian restricted to that cell (obtained by de Casteljau
splitting of the root coefficient tensor). A cell is

* Regular when every coefficient exceeds ``tol``;
* Irregular when a corner coefficient (an exact determinant value) is
  ``<= -tol``, which gives a witness point;
* otherwise split in half, or Undecided once ``max_depth`` is reached.

Cells are visited depth first in lexicographic child order and the search
stops at the first Irregular cell, so certificates are deterministic.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bernstein
from .geometry import BezierVolume
from .jacobian import get_threads, jacobian_coeffs

REGULAR = "Regular"
IRREGULAR = "Irregular"
UNDECIDED = "Undecided"
STATUSES = (REGULAR, IRREGULAR, UNDECIDED)

SPLIT_RULES = ("all", "longest")

UNIT_BOX = ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))


@dataclass(frozen=True)
class VerifyConfig:
    """``split_rule``: ``"all"`` halves every direction (octree), ``"longest"``
    halves the widest side of the cell (ties go to the earlier direction)."""

    max_depth: int = 8
    tol: float = 1e-12
    split_rule: str = "all"

    def __post_init__(self):
        if int(self.max_depth) != self.max_depth or self.max_depth < 0:
            raise ValueError("max_depth must be a nonnegative integer")
        if not self.tol >= 0.0:
            raise ValueError("tol must be nonnegative")
        if self.split_rule not in SPLIT_RULES:
            raise ValueError(f"split_rule must be one of {SPLIT_RULES}")


@dataclass(frozen=True)
class Cell:
    box: tuple[tuple[float, float], ...]
    verdict: str
    min_coeff: float
    depth: int

    def to_json(self) -> dict:
        return {"box": [list(b) for b in self.box], "verdict": self.verdict, "min_coeff": self.min_coeff, "depth": self.depth}

    @classmethod
    def from_json(cls, d) -> Cell:
        return cls(tuple(tuple(float(x) for x in b) for b in d["box"]), d["verdict"], float(d["min_coeff"]), int(d["depth"]))


@dataclass(frozen=True)
class Certificate:
    """Outcome of one verification run.

    ``leaves`` are the terminal cells in visiting order and ``domain`` is the
    box the unit parameter cube maps to (knot space for spline elements);
    leaf boxes and the witness are given in ``domain`` coordinates.
    """

    status: str
    min_coeff: float
    witness: tuple[float, float, float] | None
    cells_processed: int
    max_depth: int
    elapsed_ms: float
    leaves: tuple[Cell, ...] = field(repr=False)
    domain: tuple[tuple[float, float], ...] = UNIT_BOX

    @property
    def regular(self) -> bool:
        return self.status == REGULAR

    def witness_unit(self) -> tuple[float, float, float] | None:
        """The witness in unit-cube coordinates of the verified volume."""
        if self.witness is None:
            return None
        return tuple((x - a) / (b - a) for x, (a, b) in zip(self.witness, self.domain))

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "min_coeff": self.min_coeff,
            "witness": None if self.witness is None else list(self.witness),
            "cells_processed": self.cells_processed,
            "max_depth": self.max_depth,
            "elapsed_ms": self.elapsed_ms,
            "domain": [list(b) for b in self.domain],
            "leaves": [c.to_json() for c in self.leaves],
        }

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, d) -> Certificate:
        if d["status"] not in STATUSES:
            raise ValueError(f"unknown status {d['status']!r}")
        return cls(
            status=d["status"],
            min_coeff=float(d["min_coeff"]),
            witness=None if d["witness"] is None else tuple(float(x) for x in d["witness"]),
            cells_processed=int(d["cells_processed"]),
            max_depth=int(d["max_depth"]),
            elapsed_ms=float(d["elapsed_ms"]),
            leaves=tuple(Cell.from_json(c) for c in d["leaves"]),
            domain=tuple(tuple(float(x) for x in b) for b in d.get("domain", UNIT_BOX)),
        )

    def same_outcome(self, other: Certificate) -> bool:
        """Equality ignoring the wall-clock field."""
        a, b = self.to_json(), other.to_json()
        a.pop("elapsed_ms")
        b.pop("elapsed_ms")
        return a == b


def _map_box(box, domain):
    return tuple((a + lo * (b - a), a + hi * (b - a)) for (lo, hi), (a, b) in zip(box, domain))


def _children(coeffs, box, rule):
    """Child (coeffs, box) pairs in lexicographic order."""
    if rule == "all":
        axes = (0, 1, 2)
    else:
        widths = [hi - lo for lo, hi in box]
        axes = (int(np.argmax(widths)),)
    parts = [(coeffs, box)]
    for ax in axes:
        nxt = []
        for c, bx in parts:
            lo, hi = bx[ax]
            mid = 0.5 * (lo + hi)
            left, right = bernstein.split(c, 0.5, ax)
            for piece, iv in ((left, (lo, mid)), (right, (mid, hi))):
                nb = list(bx)
                nb[ax] = iv
                nxt.append((piece, tuple(nb)))
        parts = nxt
    return parts


def _corner_witness(coeffs, box, tol):
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                val = coeffs[(0, -1)[a], (0, -1)[b], (0, -1)[c]]
                if val <= -tol:
                    return (box[0][a], box[1][b], box[2][c]), float(val)
    return None


def verify_coeffs(coeffs: np.ndarray, cfg: VerifyConfig | None = None, domain=UNIT_BOX, _t0: float | None = None) -> Certificate:
    """Run the subdivision search on a precomputed Jacobian coefficient tensor."""
    cfg = cfg or VerifyConfig()
    t0 = time.perf_counter() if _t0 is None else _t0
    stack = [(np.asarray(coeffs, dtype=np.float64), UNIT_BOX, 0)]
    leaves: list[Cell] = []
    processed = 0
    deepest = 0
    status = REGULAR
    witness = None
    while stack:
        c, box, depth = stack.pop()
        processed += 1
        deepest = max(deepest, depth)
        m = float(c.min())
        if m > cfg.tol:
            leaves.append(Cell(_map_box(box, domain), REGULAR, m, depth))
            continue
        hit = _corner_witness(c, box, cfg.tol)
        if hit is not None:
            leaves.append(Cell(_map_box(box, domain), IRREGULAR, m, depth))
            status = IRREGULAR
            witness = tuple(lo for lo, _ in _map_box([(x, x) for x in hit[0]], domain))
            break
        if depth >= cfg.max_depth:
            leaves.append(Cell(_map_box(box, domain), UNDECIDED, m, depth))
            status = UNDECIDED
            continue
        stack.extend((cc, bx, depth + 1) for cc, bx in reversed(_children(c, box, cfg.split_rule)))
    return Certificate(
        status=status,
        min_coeff=min(cell.min_coeff for cell in leaves),
        witness=witness,
        cells_processed=processed,
        max_depth=deepest,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
        leaves=tuple(leaves),
        domain=tuple(tuple(float(x) for x in b) for b in domain),
    )


def verify_volume(vol: BezierVolume, cfg: VerifyConfig | None = None, domain=UNIT_BOX, parallel: bool | None = None) -> Certificate:
    t0 = time.perf_counter()
    jc = jacobian_coeffs(vol, parallel=parallel)
    return verify_coeffs(jc.coeffs, cfg, domain, _t0=t0)


def combine_status(statuses) -> str:
    statuses = list(statuses)
    if IRREGULAR in statuses:
        return IRREGULAR
    if UNDECIDED in statuses:
        return UNDECIDED
    return REGULAR


@dataclass(frozen=True)
class MultipatchResult:
    per_patch: tuple[Certificate, ...]
    overall: str
    total_elapsed_ms: float

    def to_json(self) -> dict:
        return {
            "overall": self.overall,
            "total_elapsed_ms": self.total_elapsed_ms,
            "patches": [c.to_json() for c in self.per_patch],
        }


def verify_multipatch(patches, cfg: VerifyConfig | None = None, domains=None, workers: int | None = None) -> MultipatchResult:
    """Verify patches independently; results keep the input order.

    ``workers`` defaults to the kernel thread count. Each patch uses the serial
    kernel so the pool is the only level of parallelism.
    """
    patches = list(patches)
    if not patches:
        raise ValueError("verify_multipatch needs at least one patch")
    domains = list(domains) if domains is not None else [UNIT_BOX] * len(patches)
    if len(domains) != len(patches):
        raise ValueError("domains and patches differ in length")
    cfg = cfg or VerifyConfig()
    workers = workers or get_threads()
    t0 = time.perf_counter()

    def one(i):
        return verify_volume(patches[i], cfg, domains[i], parallel=False)

    if workers > 1 and len(patches) > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(patches), os.cpu_count() or 1)) as pool:
            certs = list(pool.map(one, range(len(patches))))
    else:
        certs = [one(i) for i in range(len(patches))]
    total = (time.perf_counter() - t0) * 1e3
    return MultipatchResult(tuple(certs), combine_status(c.status for c in certs), total)
