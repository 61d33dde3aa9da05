"""Clamped tensor-product B-spline volumes and their Bezier extraction.

Extraction raises every interior knot to multiplicity ``degree`` by Boehm
insertion, one direction at a time, after which each nonempty knot span owns
a contiguous block of ``degree + 1`` control points. The conversion is exact
up to rounding.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .geometry import BezierVolume
from .verify import MultipatchResult, VerifyConfig, verify_multipatch


@dataclass(frozen=True, eq=False)
class KnotVector:
    degree: int
    knots: np.ndarray

    def __post_init__(self):
        p = int(self.degree)
        t = np.array(self.knots, dtype=np.float64)
        if p < 1:
            raise ValueError("degree must be >= 1")
        if t.ndim != 1 or t.size < 2 * (p + 1):
            raise ValueError(f"a clamped degree-{p} knot vector needs at least {2 * (p + 1)} knots")
        if not np.all(np.isfinite(t)) or np.any(np.diff(t) < 0):
            raise ValueError("knots must be finite and nondecreasing")
        if np.any(t[: p + 1] != t[0]) or np.any(t[-p - 1 :] != t[-1]):
            raise ValueError("knot vector is not clamped (end multiplicity must be degree + 1)")
        if t[0] == t[-1]:
            raise ValueError("knot vector has an empty domain")
        _, counts = np.unique(t[p + 1 : -p - 1], return_counts=True)
        if counts.size and counts.max() > p:
            raise ValueError("interior knot multiplicity exceeds the degree")
        t.setflags(write=False)
        object.__setattr__(self, "degree", p)
        object.__setattr__(self, "knots", t)

    @classmethod
    def clamped(cls, degree: int, interior=(), domain=(0.0, 1.0)) -> KnotVector:
        a, b = domain
        return cls(degree, [a] * (degree + 1) + sorted(interior) + [b] * (degree + 1))

    @classmethod
    def uniform(cls, degree: int, spans: int, domain=(0.0, 1.0)) -> KnotVector:
        a, b = domain
        return cls.clamped(degree, list(np.linspace(a, b, spans + 1)[1:-1]), domain)

    @property
    def num_ctrl(self) -> int:
        return self.knots.size - self.degree - 1

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.knots[0]), float(self.knots[-1])

    def spans(self) -> list[tuple[int, float, float]]:
        """Nonempty spans as ``(knot index, start, end)``."""
        t, p = self.knots, self.degree
        return [(i, float(t[i]), float(t[i + 1])) for i in range(p, t.size - p - 1) if t[i] < t[i + 1]]

    def find_span(self, x: float) -> int:
        a, b = self.domain
        if not a <= x <= b:
            raise ValueError(f"parameter {x} outside knot domain [{a}, {b}]")
        t, p = self.knots, self.degree
        if x == b:
            return self.spans()[-1][0]
        return bisect.bisect_right(t, x, p, t.size - p - 1) - 1

    def basis(self, x: float) -> tuple[int, np.ndarray]:
        """Span index and the ``degree + 1`` nonzero basis values at ``x``."""
        i = self.find_span(x)
        t, p = self.knots, self.degree
        N = np.zeros(p + 1)
        left = np.zeros(p + 1)
        right = np.zeros(p + 1)
        N[0] = 1.0
        for j in range(1, p + 1):
            left[j] = x - t[i + 1 - j]
            right[j] = t[i + j] - x
            saved = 0.0
            for r in range(j):
                tmp = N[r] / (right[r + 1] + left[j - r])
                N[r] = saved + right[r + 1] * tmp
                saved = left[j - r] * tmp
            N[j] = saved
        return i, N

    def greville(self) -> np.ndarray:
        p = self.degree
        return np.array([self.knots[i + 1 : i + p + 1].mean() for i in range(self.num_ctrl)])

    def __eq__(self, other):
        return isinstance(other, KnotVector) and self.degree == other.degree and np.array_equal(self.knots, other.knots)


@dataclass(frozen=True, eq=False)
class BSplineVolume:
    ku: KnotVector
    kv: KnotVector
    kw: KnotVector
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        want = (self.ku.num_ctrl, self.kv.num_ctrl, self.kw.num_ctrl, 3)
        if pts.shape != want:
            raise ValueError(f"control grid shape {pts.shape} does not match knot vectors {want}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("control points must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_bezier(cls, vol: BezierVolume) -> BSplineVolume:
        ks = [KnotVector.clamped(d) for d in vol.degrees]
        return cls(*ks, vol.points)

    @classmethod
    def greville_identity(cls, ku: KnotVector, kv: KnotVector, kw: KnotVector) -> BSplineVolume:
        """The identity map of the knot domain (control points at Greville abscissae)."""
        grid = np.stack(np.meshgrid(ku.greville(), kv.greville(), kw.greville(), indexing="ij"), axis=-1)
        return cls(ku, kv, kw, grid)

    @property
    def degrees(self) -> tuple[int, int, int]:
        return self.ku.degree, self.kv.degree, self.kw.degree

    @property
    def knot_vectors(self) -> tuple[KnotVector, KnotVector, KnotVector]:
        return self.ku, self.kv, self.kw

    def __eq__(self, other):
        return (
            isinstance(other, BSplineVolume)
            and self.knot_vectors == other.knot_vectors
            and np.array_equal(self.points, other.points)
        )


def eval_bspline(vol: BSplineVolume, u: float, v: float, w: float) -> np.ndarray:
    (iu, Nu), (iv, Nv), (iw, Nw) = vol.ku.basis(u), vol.kv.basis(v), vol.kw.basis(w)
    pu, pv, pw = vol.degrees
    local = vol.points[iu - pu : iu + 1, iv - pv : iv + 1, iw - pw : iw + 1]
    return np.einsum("i,j,k,ijkd->d", Nu, Nv, Nw, local)


def insert_knot(points: np.ndarray, kv: KnotVector, x: float, axis: int) -> tuple[np.ndarray, KnotVector]:
    """Insert ``x`` once along ``axis`` (Boehm); the spline is unchanged."""
    t, p = kv.knots, kv.degree
    k = kv.find_span(x)
    if x == kv.domain[1] or x == kv.domain[0]:
        raise ValueError("cannot insert an end knot of a clamped vector")
    c = np.moveaxis(np.asarray(points, dtype=np.float64), axis, 0)
    out = np.empty((c.shape[0] + 1,) + c.shape[1:])
    out[: k - p + 1] = c[: k - p + 1]
    out[k + 1 :] = c[k:]
    for i in range(k - p + 1, k + 1):
        a = (x - t[i]) / (t[i + p] - t[i])
        out[i] = (1.0 - a) * c[i - 1] + a * c[i]
    nk = KnotVector(p, np.insert(t, k + 1, x))
    return np.moveaxis(out, 0, axis), nk


def _saturate(points, kv: KnotVector, axis: int):
    p = kv.degree
    interior = kv.knots[p + 1 : -p - 1]
    for x in np.unique(interior):
        mult = int(np.count_nonzero(kv.knots == x))
        for _ in range(p - mult):
            points, kv = insert_knot(points, kv, float(x), axis)
    return points, kv


@dataclass(frozen=True)
class ExtractedElement:
    span_index: tuple[int, int, int]
    box: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]
    volume: BezierVolume


def bezier_extract(vol: BSplineVolume) -> list[ExtractedElement]:
    """One Bezier element per nonempty span triple, ordered lexicographically by span."""
    pts = vol.points
    kvs = []
    for ax, kv in enumerate(vol.knot_vectors):
        pts, kv = _saturate(pts, kv, ax)
        kvs.append(kv)
    spans = [kv.spans() for kv in kvs]
    degs = vol.degrees
    elements = []
    for a, (_, u0, u1) in enumerate(spans[0]):
        for b, (_, v0, v1) in enumerate(spans[1]):
            for c, (_, w0, w1) in enumerate(spans[2]):
                block = pts[
                    a * degs[0] : a * degs[0] + degs[0] + 1,
                    b * degs[1] : b * degs[1] + degs[1] + 1,
                    c * degs[2] : c * degs[2] + degs[2] + 1,
                ]
                elements.append(ExtractedElement((a, b, c), ((u0, u1), (v0, v1), (w0, w1)), BezierVolume(block)))
    return elements


def span_count(vol: BSplineVolume) -> int:
    return int(np.prod([len(kv.spans()) for kv in vol.knot_vectors]))


def verify_bspline(vol: BSplineVolume, cfg: VerifyConfig | None = None, workers: int | None = None) -> MultipatchResult:
    """Extract, then verify every element; certificates carry knot-space boxes."""
    elements = bezier_extract(vol)
    return verify_multipatch([e.volume for e in elements], cfg, [e.box for e in elements], workers)
