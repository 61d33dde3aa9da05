"""Tensor-product Bezier surfaces and volumes.

Control points live in a dense float array of shape ``(nu+1, nv+1, nw+1, 3)``
(``(n1+1, n2+1, 3)`` for surfaces). Flattening in C order gives the
serialized ordering used everywhere: ``index = (i*(nv+1) + j)*(nw+1) + k``,
i.e. the last parametric index runs fastest.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bernstein

AXES = {"u": 0, "v": 1, "w": 2}


def _axis(direction) -> int:
    if isinstance(direction, str):
        try:
            return AXES[direction]
        except KeyError:
            raise ValueError(f"unknown direction {direction!r}") from None
    if direction not in (0, 1, 2):
        raise ValueError(f"unknown direction {direction!r}")
    return int(direction)


def _check_param(name: str, t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"parameter {name}={t} outside [0, 1]")
    return t


def _frozen(points, ndim: int) -> np.ndarray:
    a = np.array(points, dtype=np.float64)
    if a.ndim != ndim + 1 or a.shape[-1] != 3:
        raise ValueError(f"expected control array of shape (..., 3) with {ndim} parametric axes, got {a.shape}")
    if any(s < 1 for s in a.shape[:ndim]):
        raise ValueError("every parametric direction needs at least one control point")
    if not np.all(np.isfinite(a)):
        raise ValueError("control points must be finite")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BezierSurface:
    """Tensor-product Bezier patch ``S(s, t)``; ``points[a, b]`` pairs with ``B_a(s) B_b(t)``."""

    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen(self.points, 2))

    @property
    def degrees(self) -> tuple[int, int]:
        return self.points.shape[0] - 1, self.points.shape[1] - 1

    def evaluate(self, s: float, t: float) -> np.ndarray:
        s = _check_param("s", s)
        t = _check_param("t", t)
        return bernstein.decasteljau(bernstein.decasteljau(self.points, t, axis=1), s, axis=0)

    def derivative(self, s: float, t: float, axis: int) -> np.ndarray:
        """Partial derivative along parametric axis 0 (``s``) or 1 (``t``)."""
        d = self.points.shape[axis] - 1
        if d == 0:
            return np.zeros(3)
        return BezierSurface(bernstein.hodograph(self.points, axis)).evaluate(s, t)

    def elevated(self, degrees) -> BezierSurface:
        p = self.points
        for ax, target in enumerate(degrees):
            p = bernstein.elevate(p, ax, int(target))
        return BezierSurface(p)

    def __eq__(self, other):
        return isinstance(other, BezierSurface) and np.array_equal(self.points, other.points)


@dataclass(frozen=True, eq=False)
class BezierVolume:
    """Trivariate tensor-product Bezier volume ``T(u, v, w)``."""

    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen(self.points, 3))

    @classmethod
    def from_flat(cls, degrees, flat_points) -> BezierVolume:
        nu, nv, nw = (int(d) for d in degrees)
        pts = np.asarray(flat_points, dtype=np.float64)
        expected = (nu + 1) * (nv + 1) * (nw + 1)
        if pts.shape != (expected, 3):
            raise ValueError(f"degrees {degrees} need {expected} points, got array of shape {pts.shape}")
        return cls(pts.reshape(nu + 1, nv + 1, nw + 1, 3))

    @classmethod
    def identity(cls, degrees=(1, 1, 1)) -> BezierVolume:
        """The identity map of the unit cube at the given degrees (Greville net)."""
        axes = [np.linspace(0.0, 1.0, d + 1) if d > 0 else np.zeros(1) for d in degrees]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        return cls(grid)

    @property
    def degrees(self) -> tuple[int, int, int]:
        return tuple(s - 1 for s in self.points.shape[:3])

    @property
    def flat_points(self) -> np.ndarray:
        return self.points.reshape(-1, 3)

    def transformed(self, matrix=None, offset=None) -> BezierVolume:
        """Affine image ``x -> A x + b`` (Bezier volumes are affinely invariant)."""
        p = self.points
        if matrix is not None:
            p = p @ np.asarray(matrix, dtype=np.float64).T
        if offset is not None:
            p = p + np.asarray(offset, dtype=np.float64)
        return BezierVolume(p)

    def elevated(self, degrees) -> BezierVolume:
        p = self.points
        for ax, target in enumerate(degrees):
            p = bernstein.elevate(p, ax, int(target))
        return BezierVolume(p)

    def face(self, name: str) -> BezierSurface:
        """Boundary face using the Coons labelling S1..S6."""
        p = self.points
        sl = {
            "S1": p[:, :, 0], "S2": p[:, :, -1],
            "S3": p[:, 0, :], "S4": p[:, -1, :],
            "S5": p[-1, :, :], "S6": p[0, :, :],
        }
        try:
            return BezierSurface(sl[name])
        except KeyError:
            raise ValueError(f"unknown face {name!r}") from None

    def faces(self) -> dict[str, BezierSurface]:
        return {name: self.face(name) for name in ("S1", "S2", "S3", "S4", "S5", "S6")}

    def __eq__(self, other):
        return isinstance(other, BezierVolume) and np.array_equal(self.points, other.points)

    def __call__(self, u, v, w):
        return eval_volume(self, u, v, w)


def eval_volume(vol: BezierVolume, u: float, v: float, w: float) -> np.ndarray:
    """Point ``T(u, v, w)`` via nested de Casteljau (w, then v, then u)."""
    u = _check_param("u", u)
    v = _check_param("v", v)
    w = _check_param("w", w)
    c = bernstein.decasteljau(vol.points, w, axis=2)
    c = bernstein.decasteljau(c, v, axis=1)
    return bernstein.decasteljau(c, u, axis=0)


def eval_grid(points: np.ndarray, us, vs, ws) -> np.ndarray:
    """Evaluate a trivariate Bernstein net (any trailing shape) on a tensor grid."""
    pts = np.asarray(points, dtype=np.float64)
    bu = bernstein.bernstein_matrix(pts.shape[0] - 1, us)
    bv = bernstein.bernstein_matrix(pts.shape[1] - 1, vs)
    bw = bernstein.bernstein_matrix(pts.shape[2] - 1, ws)
    c = np.tensordot(bu, pts, axes=(1, 0))
    c = np.tensordot(bv, c, axes=(1, 1)).swapaxes(0, 1)
    c = np.tensordot(bw, c, axes=(1, 2))
    return np.moveaxis(c, 0, 2)


def partial_derivative(vol: BezierVolume, direction) -> BezierVolume:
    """Hodograph volume: control vectors ``n (P[i+1] - P[i])`` along ``direction``."""
    ax = _axis(direction)
    if vol.degrees[ax] < 1:
        raise ValueError(f"degree along {direction!r} is 0; nothing to differentiate")
    return BezierVolume(bernstein.hodograph(vol.points, ax))


def subdivide(vol: BezierVolume, direction, t: float = 0.5) -> tuple[BezierVolume, BezierVolume]:
    """Split at ``t`` along ``direction``; pieces cover ``[0, t]`` and ``[t, 1]``."""
    ax = _axis(direction)
    t = float(t)
    if not 0.0 < t < 1.0:
        raise ValueError(f"split parameter t={t} must lie strictly inside (0, 1)")
    left, right = bernstein.split(vol.points, t, ax)
    return BezierVolume(left), BezierVolume(right)


def restrict(points: np.ndarray, box) -> np.ndarray:
    """Bernstein net of the restriction to ``box = ((u0,u1),(v0,v1),(w0,w1))``."""
    c = np.asarray(points, dtype=np.float64)
    for ax, (a, b) in enumerate(box):
        if not 0.0 <= a < b <= 1.0:
            raise ValueError(f"invalid interval ({a}, {b})")
        if b < 1.0:
            c, _ = bernstein.split(c, b, ax)
        if a > 0.0:
            _, c = bernstein.split(c, a / b, ax)
    return c


def uniform_partition(vol: BezierVolume, sigma: int) -> list[BezierVolume]:
    """``sigma**3`` sub-blocks of equal parameter size, ordered lexicographically by cell (i, j, k)."""
    sigma = int(sigma)
    if sigma < 1:
        raise ValueError("sigma must be >= 1")

    def slabs(c, ax):
        out = []
        rest = c
        for m in range(sigma, 1, -1):
            # peel one cell of width 1/m off the remaining [0, 1] piece
            first, rest = bernstein.split(rest, 1.0 / m, ax)
            out.append(first)
        out.append(rest)
        return out

    blocks = []
    for cu in slabs(vol.points, 0):
        for cv in slabs(cu, 1):
            for cw in slabs(cv, 2):
                blocks.append(BezierVolume(cw))
    return blocks


def bounding_box(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pts = np.asarray(points).reshape(-1, 3)
    return pts.min(axis=0), pts.max(axis=0)
