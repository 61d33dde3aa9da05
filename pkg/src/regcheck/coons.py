"""Coons volumes: transfinite interpolation of six boundary surfaces.

Face labelling (fixed throughout the package)::

    S1(u, v) = T(u, v, 0)    S2(u, v) = T(u, v, 1)
    S3(u, w) = T(u, 0, w)    S4(u, w) = T(u, 1, w)
    S5(v, w) = T(1, v, w)    S6(v, w) = T(0, v, w)

Blending uses ``F0 = 1 - F1`` with ``F1(0) = 0``, ``F1(1) = 1`` and ``F1``
nondecreasing; ``F1`` is stored by its Bernstein coefficients ``alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Protocol

import numpy as np

from . import bernstein
from .geometry import BezierSurface, BezierVolume, _check_param, bounding_box
from .jacobian import det_coeffs

FACE_NAMES = ("S1", "S2", "S3", "S4", "S5", "S6")


class ContinuityError(ValueError):
    """Boundary faces do not agree along a shared edge."""

    def __init__(self, report: ContinuityReport):
        self.report = report
        bad = [e.name for e in report.edges if not e.passed]
        super().__init__(f"{len(bad)} of 12 shared edges exceed eps_edge={report.eps_edge:g}: {', '.join(bad)}")


class UnsupportedModeError(ValueError):
    pass


class Surface(Protocol):
    def evaluate(self, s: float, t: float) -> np.ndarray: ...
    def derivative(self, s: float, t: float, axis: int) -> np.ndarray: ...


class CallableSurface:
    """Wrap a plain function ``f(s, t) -> xyz`` as a boundary face.

    Derivatives come from ``df(s, t, axis)`` when given, otherwise from
    central differences (one-sided at the domain edge).
    """

    def __init__(self, f: Callable, df: Callable | None = None, h: float = 1e-6):
        self._f = f
        self._df = df
        self.h = h

    def evaluate(self, s, t):
        return np.asarray(self._f(_check_param("s", s), _check_param("t", t)), dtype=np.float64)

    def derivative(self, s, t, axis):
        if self._df is not None:
            return np.asarray(self._df(s, t, axis), dtype=np.float64)
        x = [s, t]
        lo, hi = max(0.0, x[axis] - self.h), min(1.0, x[axis] + self.h)
        a, b = list(x), list(x)
        a[axis], b[axis] = lo, hi
        return (self.evaluate(*b) - self.evaluate(*a)) / (hi - lo)


# --------------------------------------------------------------------------
# blending


def _bernstein_to_power(alpha) -> np.polynomial.Polynomial:
    m = len(alpha) - 1
    t = np.polynomial.Polynomial([0.0, 1.0])
    out = np.polynomial.Polynomial([0.0])
    for i, a in enumerate(alpha):
        out = out + a * bernstein.binomial(m, i) * t**i * (1 - t) ** (m - i)
    return out


@dataclass(frozen=True, eq=False)
class BlendingFunction:
    kind: str
    alpha: np.ndarray
    rho: float

    @classmethod
    def linear(cls) -> BlendingFunction:
        return cls._make("linear", [0.0, 1.0])

    @classmethod
    def cubic(cls) -> BlendingFunction:
        return cls._make("cubic", [0.0, 0.0, 1.0, 1.0])

    @classmethod
    def from_alpha(cls, alpha) -> BlendingFunction:
        return cls._make("custom-bezier", alpha)

    @classmethod
    def parse(cls, spec) -> BlendingFunction:
        """Accept ``"linear"``, ``"cubic"``, ``{"alpha": [...]}`` or an instance."""
        if isinstance(spec, BlendingFunction):
            return spec
        if spec == "linear":
            return cls.linear()
        if spec == "cubic":
            return cls.cubic()
        if isinstance(spec, Mapping) and "alpha" in spec:
            return cls.from_alpha(spec["alpha"])
        raise ValueError(f"unrecognised blend specification {spec!r}")

    @classmethod
    def _make(cls, kind, alpha) -> BlendingFunction:
        a = np.array(alpha, dtype=np.float64)
        if a.ndim != 1 or a.size < 2:
            raise ValueError("blend needs at least two Bezier coefficients")
        if a[0] != 0.0 or a[-1] != 1.0:
            raise ValueError("blend must satisfy F1(0) = 0 and F1(1) = 1")
        poly = _bernstein_to_power(a)
        d1 = poly.deriv()
        cands = [0.0, 1.0]
        if d1.degree() >= 1:
            cands += [r.real for r in d1.deriv().roots() if abs(r.imag) < 1e-12 and 0.0 <= r.real <= 1.0]
        vals = np.array([d1(t) for t in cands])
        if vals.min() < -1e-12:
            raise ValueError("blend F1 must be increasing on [0, 1]")
        a.setflags(write=False)
        return cls(kind, a, float(np.abs(vals).max()))

    @property
    def degree(self) -> int:
        return self.alpha.size - 1

    def f1(self, t: float) -> float:
        return float(bernstein.decasteljau(self.alpha, t))

    def f0(self, t: float) -> float:
        return 1.0 - self.f1(t)

    def df1(self, t: float) -> float:
        if self.degree == 0:
            return 0.0
        return float(bernstein.decasteljau(bernstein.hodograph(self.alpha, 0), t))

    def weights(self, t: float) -> tuple[float, float]:
        f1 = self.f1(t)
        return 1.0 - f1, f1

    def alpha_at(self, degree: int) -> np.ndarray:
        return bernstein.elevate(self.alpha, 0, degree)

    def to_json(self):
        if self.kind in ("linear", "cubic"):
            return self.kind
        return {"alpha": [float(x) for x in self.alpha]}


# --------------------------------------------------------------------------
# boundary sets


@dataclass(frozen=True)
class EdgeCheck:
    name: str
    deviation: float
    passed: bool


@dataclass(frozen=True)
class ContinuityReport:
    edges: tuple[EdgeCheck, ...]
    eps_edge: float

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.edges)

    @property
    def max_deviation(self) -> float:
        return max(e.deviation for e in self.edges)

    def format(self) -> str:
        lines = [f"{'OK ' if e.passed else 'BAD'} {e.name:<18} deviation={e.deviation:.3e}" for e in self.edges]
        return "\n".join(lines)


# (label, face A, params on A, face B, params on B, edge runs along)
_EDGES = (
    ("S1(u,0)=S3(u,0)", "S1", lambda t: (t, 0.0), "S3", lambda t: (t, 0.0), 0),
    ("S1(u,1)=S4(u,0)", "S1", lambda t: (t, 1.0), "S4", lambda t: (t, 0.0), 0),
    ("S2(u,0)=S3(u,1)", "S2", lambda t: (t, 0.0), "S3", lambda t: (t, 1.0), 0),
    ("S2(u,1)=S4(u,1)", "S2", lambda t: (t, 1.0), "S4", lambda t: (t, 1.0), 0),
    ("S1(0,v)=S6(v,0)", "S1", lambda t: (0.0, t), "S6", lambda t: (t, 0.0), 1),
    ("S1(1,v)=S5(v,0)", "S1", lambda t: (1.0, t), "S5", lambda t: (t, 0.0), 1),
    ("S2(0,v)=S6(v,1)", "S2", lambda t: (0.0, t), "S6", lambda t: (t, 1.0), 1),
    ("S2(1,v)=S5(v,1)", "S2", lambda t: (1.0, t), "S5", lambda t: (t, 1.0), 1),
    ("S3(0,w)=S6(0,w)", "S3", lambda t: (0.0, t), "S6", lambda t: (0.0, t), 2),
    ("S3(1,w)=S5(0,w)", "S3", lambda t: (1.0, t), "S5", lambda t: (0.0, t), 2),
    ("S4(0,w)=S6(1,w)", "S4", lambda t: (0.0, t), "S6", lambda t: (1.0, t), 2),
    ("S4(1,w)=S5(1,w)", "S4", lambda t: (1.0, t), "S5", lambda t: (1.0, t), 2),
)

# which face axis carries each volume direction, per face
_FACE_AXES = {
    "S1": (0, 1), "S2": (0, 1),  # (u, v)
    "S3": (0, 2), "S4": (0, 2),  # (u, w)
    "S5": (1, 2), "S6": (1, 2),  # (v, w)
}


class BoundarySet:
    """The six faces of a Coons volume (Bezier patches or any ``Surface``)."""

    def __init__(self, faces: Mapping[str, Surface]):
        missing = [n for n in FACE_NAMES if faces.get(n) is None]
        if missing:
            raise ValueError(f"boundary set is missing faces: {', '.join(missing)}")
        self.faces = {n: faces[n] for n in FACE_NAMES}

    @classmethod
    def from_volume(cls, vol: BezierVolume) -> BoundarySet:
        return cls(vol.faces())

    def __getitem__(self, name: str) -> Surface:
        return self.faces[name]

    @property
    def is_bezier(self) -> bool:
        return all(isinstance(f, BezierSurface) for f in self.faces.values())

    def common_degrees(self, blend_degree: int = 1) -> tuple[int, int, int]:
        """Per-direction degree that all faces (and the blend) elevate to."""
        self._require_bezier("common_degrees")
        degs = [blend_degree, blend_degree, blend_degree]
        for name, axes in _FACE_AXES.items():
            fd = self.faces[name].degrees
            for a, d in zip(axes, fd):
                degs[a] = max(degs[a], d)
        return tuple(degs)

    def elevated(self, degrees) -> BoundarySet:
        self._require_bezier("elevated")
        return BoundarySet({
            n: self.faces[n].elevated([degrees[a] for a in _FACE_AXES[n]]) for n in FACE_NAMES
        })

    def _require_bezier(self, what):
        if not self.is_bezier:
            raise UnsupportedModeError(f"{what} needs Bezier faces")


def validate_continuity(b: BoundarySet, eps_edge: float = 1e-9, samples: int | None = None) -> ContinuityReport:
    """Compare the twelve shared edges at uniformly spaced parameters.

    For Bezier faces the sample count is one more than the larger edge degree,
    which makes agreement at the samples equivalent to identical edge curves.
    """
    if not isinstance(b, BoundarySet):
        raise ValueError("expected a BoundarySet")
    checks = []
    for name, fa, pa, fb, pb, run in _EDGES:
        A, B = b[fa], b[fb]
        if samples is not None:
            m = samples
        elif isinstance(A, BezierSurface) and isinstance(B, BezierSurface):
            m = max(A.degrees[_FACE_AXES[fa].index(run)], B.degrees[_FACE_AXES[fb].index(run)]) + 1
            m = max(m, 2)
        else:
            m = 17
        dev = 0.0
        for t in np.linspace(0.0, 1.0, m):
            dev = max(dev, float(np.max(np.abs(A.evaluate(*pa(t)) - B.evaluate(*pb(t))))))
        checks.append(EdgeCheck(name, dev, dev <= eps_edge))
    return ContinuityReport(tuple(checks), eps_edge)


class _Boundary:
    """Boundary values ``T(., ., .)`` expressed through the faces."""

    def __init__(self, b: BoundarySet):
        self.b = b

    def T(self, u, v, w):
        # exactly one argument may be interior; the rest are 0/1
        if w in (0.0, 1.0):
            return self.b["S1" if w == 0.0 else "S2"].evaluate(u, v)
        if v in (0.0, 1.0):
            return self.b["S3" if v == 0.0 else "S4"].evaluate(u, w)
        return self.b["S6" if u == 0.0 else "S5"].evaluate(v, w)

    def dT(self, u, v, w, axis):
        """Derivative of T along ``axis`` on a boundary edge."""
        if axis == 0:  # T(u, b, c) lies on S1 or S2
            return self.b["S1" if w == 0.0 else "S2"].derivative(u, v, 0)
        if axis == 1:  # T(a, v, c) lies on S1 or S2
            return self.b["S1" if w == 0.0 else "S2"].derivative(u, v, 1)
        return self.b["S3" if v == 0.0 else "S4"].derivative(u, w, 1)  # T(a, b, w)


def eval_coons(b: BoundarySet, blend: BlendingFunction, u: float, v: float, w: float) -> np.ndarray:
    """Evaluate the transfinite (Boolean sum) formula at one point."""
    u, v, w = _check_param("u", u), _check_param("v", v), _check_param("w", w)
    blend = BlendingFunction.parse(blend)
    bd = _Boundary(b)
    Fu, Fv, Fw = blend.weights(u), blend.weights(v), blend.weights(w)
    ends = (0.0, 1.0)
    x = (
        Fu[0] * b["S6"].evaluate(v, w) + Fu[1] * b["S5"].evaluate(v, w)
        + Fv[0] * b["S3"].evaluate(u, w) + Fv[1] * b["S4"].evaluate(u, w)
        + Fw[0] * b["S1"].evaluate(u, v) + Fw[1] * b["S2"].evaluate(u, v)
    )
    for a in range(2):
        for c in range(2):
            x = x - Fu[a] * Fv[c] * bd.T(ends[a], ends[c], w)
            x = x - Fv[a] * Fw[c] * bd.T(u, ends[a], ends[c])
            x = x - Fw[a] * Fu[c] * bd.T(ends[c], v, ends[a])
    for a in range(2):
        for c in range(2):
            for e in range(2):
                x = x + Fu[a] * Fv[c] * Fw[e] * bd.T(ends[a], ends[c], ends[e])
    return x


def coons_to_bezier(
    b: BoundarySet,
    blend: BlendingFunction | str = "linear",
    check: bool = True,
    eps_edge: float = 1e-9,
) -> BezierVolume:
    """Assemble the Bezier control net of the Coons volume.

    Faces and blend are elevated to a common degree per direction. Interior
    control points follow the closed-form expansion around the ``i=0``,
    ``j=0``, ``k=0`` faces; boundary layers are copied from the faces.
    """
    blend = BlendingFunction.parse(blend)
    if not b.is_bezier:
        raise UnsupportedModeError("coons_to_bezier needs Bezier faces")
    degs = b.common_degrees(blend.degree)
    if min(degs) < 1:
        raise ValueError(f"common degrees {degs} must be >= 1")
    be = b.elevated(degs)
    for name, axes in _FACE_AXES.items():
        if tuple(be[name].degrees) != tuple(degs[a] for a in axes):
            raise ValueError(f"face {name} has degrees {be[name].degrees} after elevation")
    if check:
        rep = validate_continuity(be, eps_edge)
        if not rep.passed:
            raise ContinuityError(rep)
    X = _boundary_net(be, degs)
    P = _closed_form(X, blend.alpha_at(degs[0]), blend.alpha_at(degs[1]), blend.alpha_at(degs[2]))
    P[0], P[-1] = X[0], X[-1]
    P[:, 0], P[:, -1] = X[:, 0], X[:, -1]
    P[:, :, 0], P[:, :, -1] = X[:, :, 0], X[:, :, -1]
    return BezierVolume(P)


def _boundary_net(b: BoundarySet, degs) -> np.ndarray:
    nu, nv, nw = degs
    X = np.zeros((nu + 1, nv + 1, nw + 1, 3))
    X[0] = b["S6"].points
    X[-1] = b["S5"].points
    X[:, 0] = b["S3"].points
    X[:, -1] = b["S4"].points
    X[:, :, 0] = b["S1"].points
    X[:, :, -1] = b["S2"].points
    return X


def _closed_form(X, au, av, aw) -> np.ndarray:
    ai = au[:, None, None, None]
    aj = av[None, :, None, None]
    ak = aw[None, None, :, None]
    # faces
    P0jk, Pnjk = X[0][None], X[-1][None]
    Pi0k, Pink = X[:, 0][:, None], X[:, -1][:, None]
    Pij0, Pijn = X[:, :, 0][:, :, None], X[:, :, -1][:, :, None]
    # edges
    Pi00, Pin0 = X[:, 0, 0][:, None, None], X[:, -1, 0][:, None, None]
    Pi0n, Pinn = X[:, 0, -1][:, None, None], X[:, -1, -1][:, None, None]
    P0j0, Pnj0 = X[0, :, 0][None, :, None], X[-1, :, 0][None, :, None]
    P0jn, Pnjn = X[0, :, -1][None, :, None], X[-1, :, -1][None, :, None]
    P00k, Pn0k = X[0, 0, :][None, None], X[-1, 0, :][None, None]
    P0nk, Pnnk = X[0, -1, :][None, None], X[-1, -1, :][None, None]
    # corners
    P000, Pn00, P0n0, P00n = X[0, 0, 0], X[-1, 0, 0], X[0, -1, 0], X[0, 0, -1]
    Pnn0, Pn0n, P0nn, Pnnn = X[-1, -1, 0], X[-1, 0, -1], X[0, -1, -1], X[-1, -1, -1]

    P = P0jk + Pi0k + Pij0 - Pi00 - P0j0 - P00k + P000
    P = P + ai * (
        Pnjk - P0jk + P00k - Pn0k + P0j0 - Pnj0 - P000 + Pn00
        + aj * (Pn0k - P00k + P0nk - Pnnk + P000 - P0n0 - Pn00 + Pnn0)
        + ak * (P0jn - P0j0 + Pnj0 - Pnjn + P000 - Pn00 - P00n + Pn0n)
        + aj * ak * (P0n0 - P000 + Pn00 + P00n - Pnn0 - P0nn - Pn0n + Pnnn)
    )
    P = P + aj * (
        Pink - Pi0k + P00k - P0nk - Pin0 + Pi00 + P0n0 - P000
        + ak * (Pin0 - Pi00 + Pi0n - Pinn + P000 - P0n0 - P00n + P0nn)
    )
    P = P + ak * (Pijn - Pij0 - Pi0n + Pi00 + P0j0 - P0jn - P000 + P00n)
    return np.ascontiguousarray(P)


# --------------------------------------------------------------------------
# derivative split  T_u = F1'(u) gap1(v, w) + tangent1(u, v, w), cyclic


@dataclass(frozen=True)
class DerivativeSplit:
    """Pointwise split of the partial derivatives of a Coons volume.

    ``gap[d]`` multiplies ``F1'`` of direction ``d`` and depends only on the
    two other parameters; it measures how far the difference of the two
    opposite faces departs from its boundary-blended interpolant.
    ``tangent[d]`` collects the blended face and edge tangents.
    """

    gap: np.ndarray
    tangent: np.ndarray


def derivative_split(b: BoundarySet, blend: BlendingFunction, u: float, v: float, w: float) -> DerivativeSplit:
    blend = BlendingFunction.parse(blend)
    bd = _Boundary(b)
    T = bd.T
    Fu, Fv, Fw = blend.weights(u), blend.weights(v), blend.weights(w)
    e = (0.0, 1.0)

    g1 = b["S5"].evaluate(v, w) - b["S6"].evaluate(v, w)
    g2 = b["S4"].evaluate(u, w) - b["S3"].evaluate(u, w)
    g3 = b["S2"].evaluate(u, v) - b["S1"].evaluate(u, v)
    for a in range(2):
        g1 = g1 + Fv[a] * (T(0.0, e[a], w) - T(1.0, e[a], w)) + Fw[a] * (T(0.0, v, e[a]) - T(1.0, v, e[a]))
        g2 = g2 + Fu[a] * (T(e[a], 0.0, w) - T(e[a], 1.0, w)) + Fw[a] * (T(u, 0.0, e[a]) - T(u, 1.0, e[a]))
        g3 = g3 + Fu[a] * (T(e[a], v, 0.0) - T(e[a], v, 1.0)) + Fv[a] * (T(u, e[a], 0.0) - T(u, e[a], 1.0))
        for c in range(2):
            g1 = g1 - Fv[a] * Fw[c] * (T(0.0, e[a], e[c]) - T(1.0, e[a], e[c]))
            g2 = g2 - Fu[a] * Fw[c] * (T(e[a], 0.0, e[c]) - T(e[a], 1.0, e[c]))
            g3 = g3 - Fu[a] * Fv[c] * (T(e[a], e[c], 0.0) - T(e[a], e[c], 1.0))

    t1 = (
        Fv[0] * b["S3"].derivative(u, w, 0) + Fv[1] * b["S4"].derivative(u, w, 0)
        + Fw[0] * b["S1"].derivative(u, v, 0) + Fw[1] * b["S2"].derivative(u, v, 0)
    )
    t2 = (
        Fu[0] * b["S6"].derivative(v, w, 0) + Fu[1] * b["S5"].derivative(v, w, 0)
        + Fw[0] * b["S1"].derivative(u, v, 1) + Fw[1] * b["S2"].derivative(u, v, 1)
    )
    t3 = (
        Fu[0] * b["S6"].derivative(v, w, 1) + Fu[1] * b["S5"].derivative(v, w, 1)
        + Fv[0] * b["S3"].derivative(u, w, 1) + Fv[1] * b["S4"].derivative(u, w, 1)
    )
    for a in range(2):
        for c in range(2):
            t1 = t1 - Fv[a] * Fw[c] * bd.dT(u, e[a], e[c], 0)
            t2 = t2 - Fu[a] * Fw[c] * bd.dT(e[a], v, e[c], 1)
            t3 = t3 - Fu[a] * Fv[c] * bd.dT(e[a], e[c], w, 2)
    return DerivativeSplit(np.array([g1, g2, g3]), np.array([t1, t2, t3]))


def _complement(net, alpha, axis):
    """``(I - L) net`` where ``L`` blends the two end layers along ``axis``."""
    c = np.moveaxis(net, axis, 0)
    a = alpha.reshape((-1,) + (1,) * (c.ndim - 1))
    out = c - ((1.0 - a) * c[0] + a * c[-1])
    return np.moveaxis(out, 0, axis)


@dataclass(frozen=True)
class SplitNets:
    """Bernstein nets of the gap fields (bivariate) and tangent fields (trivariate)."""

    gap: tuple[np.ndarray, np.ndarray, np.ndarray]
    tangent: tuple[np.ndarray, np.ndarray, np.ndarray]


def split_nets(b: BoundarySet, blend: BlendingFunction) -> SplitNets:
    blend = BlendingFunction.parse(blend)
    vol = coons_to_bezier(b, blend, check=False)
    P = vol.points
    nu, nv, nw = vol.degrees
    au, av, aw = blend.alpha_at(nu), blend.alpha_at(nv), blend.alpha_at(nw)
    g1 = _complement(_complement(P[-1] - P[0], av, 0), aw, 1)
    g2 = _complement(_complement(P[:, -1] - P[:, 0], au, 0), aw, 1)
    g3 = _complement(_complement(P[:, :, -1] - P[:, :, 0], au, 0), av, 1)
    du, dv, dw = nu * np.diff(au), nv * np.diff(av), nw * np.diff(aw)
    t1 = bernstein.hodograph(P, 0) - du[:, None, None, None] * g1[None]
    t2 = bernstein.hodograph(P, 1) - dv[None, :, None, None] * g2[:, None]
    t3 = bernstein.hodograph(P, 2) - dw[None, None, :, None] * g3[:, :, None]
    return SplitNets((g1, g2, g3), (t1, t2, t3))


# --------------------------------------------------------------------------
# general-form sufficient bound


@dataclass(frozen=True)
class GapBounds:
    """Quantities of the general-form sufficient condition.

    ``gap_norms[d]`` bounds ``|F1'| * |gap_d|``, ``gap_bound`` is their max,
    ``tangent_bound`` bounds the tangent fields and ``tangent_det_lower``
    bounds ``det[tangent_1, tangent_2, tangent_3]`` from below. With
    ``rigorous`` these are certified bounds; otherwise sample estimates.
    """

    blend_slope: float
    gap_norms: tuple[float, float, float]
    gap_bound: float
    tangent_bound: float
    tangent_det_lower: float
    rigorous: bool

    @property
    def perturbation(self) -> float:
        F, M = self.gap_bound, self.tangent_bound
        return F**3 + 3 * M * F**2 + 3 * F * M**2


@dataclass(frozen=True)
class BoundCheck:
    """``satisfied`` proves regularity; ``False`` is inconclusive."""

    satisfied: bool
    bounds: GapBounds


def blend_bound_check(
    b: BoundarySet,
    blend: BlendingFunction | str = "linear",
    mode: str = "rigorous",
    samples: int = 11,
) -> BoundCheck:
    """Check ``det[tangents] >= tau > 0`` and ``F^3 + 3MF^2 + 3FM^2 < tau``.

    ``F`` bounds the blended gap fields and ``M`` the tangent fields. In
    ``rigorous`` mode all three bounds come from Bernstein nets (convex hull);
    ``sampled`` mode uses a ``samples**3`` grid and works for any surfaces.
    """
    blend = BlendingFunction.parse(blend)
    if mode == "rigorous":
        if not b.is_bezier:
            raise UnsupportedModeError("rigorous mode needs Bezier faces; use mode='sampled'")
        nets = split_nets(b, blend)
        gap_sup = [float(np.max(np.linalg.norm(g, axis=-1))) for g in nets.gap]
        tan_sup = max(float(np.max(np.linalg.norm(t, axis=-1))) for t in nets.tangent)
        tau = float(np.min(det_coeffs(*nets.tangent)))
        rigorous = True
    elif mode == "sampled":
        ts = np.linspace(0.0, 1.0, samples)
        gap_sup = [0.0, 0.0, 0.0]
        tan_sup = 0.0
        tau = np.inf
        for u in ts:
            for v in ts:
                for w in ts:
                    s = derivative_split(b, blend, u, v, w)
                    norms = np.linalg.norm(s.gap, axis=1)
                    gap_sup = [max(x, float(y)) for x, y in zip(gap_sup, norms)]
                    tan_sup = max(tan_sup, float(np.max(np.linalg.norm(s.tangent, axis=1))))
                    tau = min(tau, float(np.linalg.det(s.tangent.T)))
        rigorous = False
    else:
        raise ValueError(f"unknown mode {mode!r}")
    h = tuple(blend.rho * g for g in gap_sup)
    bounds = GapBounds(blend.rho, h, max(h), tan_sup, tau, rigorous)
    ok = tau > 0.0 and bounds.perturbation < tau
    return BoundCheck(bool(ok), bounds)


# --------------------------------------------------------------------------
# structural configurations


@dataclass(frozen=True)
class StructuralReport:
    translation_config: bool
    offsets: tuple[np.ndarray, np.ndarray, np.ndarray] | None
    bilinear_parallelogram: bool
    parallelogram_face: str | None


_OPPOSITE = (("S5", "S6"), ("S4", "S3"), ("S2", "S1"))


def _separated(a: np.ndarray, b: np.ndarray) -> bool:
    lo_a, hi_a = bounding_box(a)
    lo_b, hi_b = bounding_box(b)
    return bool(np.any(hi_a < lo_b) or np.any(hi_b < lo_a))


def _is_bilinear(face: BezierSurface, tol: float) -> bool:
    p = face.points
    corners = p[np.ix_([0, -1], [0, -1])]
    lifted = bernstein.elevate(bernstein.elevate(corners, 0, p.shape[0] - 1), 1, p.shape[1] - 1)
    return bool(np.max(np.abs(lifted - p)) <= tol)


def corollary_checks(b: BoundarySet, tol: float = 1e-12) -> StructuralReport:
    """Detect the two closed-form regular configurations.

    ``translation_config``: every pair of opposite faces differs by a constant
    vector (returned in ``offsets`` as S5-S6, S4-S3, S2-S1) and the pair's
    control-net bounding boxes are disjoint. ``bilinear_parallelogram``: all
    faces bilinear, and some face is a parallelogram whose outgoing edges at
    two adjacent vertices are equal vectors.
    """
    if not b.is_bezier:
        raise UnsupportedModeError("structural checks need Bezier faces")
    scale = max(1.0, max(float(np.max(np.abs(b[n].points))) for n in FACE_NAMES))
    atol = tol * scale

    be = b.elevated(b.common_degrees(1))
    offsets = []
    translation = True
    for hi, lo in _OPPOSITE:
        diff = be[hi].points - be[lo].points
        w = diff[0, 0]
        if np.max(np.abs(diff - w)) > atol or not _separated(be[hi].points, be[lo].points):
            translation = False
        offsets.append(w.copy())

    para_face = None
    if all(_is_bilinear(b[n], atol) for n in FACE_NAMES):
        # hexahedron vertices X[a, b, c] = T(a, b, c)
        X = np.stack([b["S1"].points[np.ix_([0, -1], [0, -1])], b["S2"].points[np.ix_([0, -1], [0, -1])]], axis=2)
        para_face = _parallelogram_face(X, atol)
    return StructuralReport(
        translation,
        tuple(offsets) if translation else None,
        para_face is not None,
        para_face,
    )


# face name -> (fixed axis, value)
_FACE_FIX = {"S1": (2, 0), "S2": (2, 1), "S3": (1, 0), "S4": (1, 1), "S5": (0, 1), "S6": (0, 0)}


def _parallelogram_face(X: np.ndarray, atol: float) -> str | None:
    for name in FACE_NAMES:
        d, s = _FACE_FIX[name]
        others = [ax for ax in range(3) if ax != d]

        def vert(i, j):
            idx = [0, 0, 0]
            idx[d], idx[others[0]], idx[others[1]] = s, i, j
            return tuple(idx)

        def outgoing(i, j):
            idx = list(vert(i, j))
            src = X[tuple(idx)]
            idx[d] = 1 - s
            return X[tuple(idx)] - src

        c00, c10, c01, c11 = X[vert(0, 0)], X[vert(1, 0)], X[vert(0, 1)], X[vert(1, 1)]
        if np.max(np.abs(c00 + c11 - c10 - c01)) > atol:
            continue
        pairs = (((0, 0), (1, 0)), ((0, 1), (1, 1)), ((0, 0), (0, 1)), ((1, 0), (1, 1)))
        if any(np.max(np.abs(outgoing(*p) - outgoing(*q))) <= atol for p, q in pairs):
            return name
    return None
