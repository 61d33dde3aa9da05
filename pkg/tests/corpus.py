"""Seeded test volumes: regular, irregular and borderline constructions."""
from __future__ import annotations

import numpy as np

from regcheck.coons import BoundarySet
from regcheck.geometry import BezierSurface, BezierVolume, restrict


def random_degrees(rng, lo=1, hi=3):
    return tuple(int(d) for d in rng.integers(lo, hi + 1, size=3))


def random_rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def perturbed_identity(rng, degrees, amp) -> BezierVolume:
    base = BezierVolume.identity(degrees)
    return BezierVolume(base.points + rng.uniform(-amp, amp, base.points.shape))


def random_volume(rng, degrees, amp=0.25) -> BezierVolume:
    """Identity net plus Uniform(0, amp) per coordinate."""
    base = BezierVolume.identity(degrees)
    return BezierVolume(base.points + rng.uniform(0.0, amp, base.points.shape))


def twisted(angle: float, n: int = 3, lift: float = 0.0) -> BezierVolume:
    """Unit cube whose w-layers are rotated about the cube axis by ``angle * k / n``.

    In-plane rotation alone keeps the determinant positive; ``lift`` pushes the
    inner layers toward each other in z; for ``n = 3``, ``dz/dw`` at ``w = 1/2`` is
    ``1 - 1.5 lift``, negative once ``lift > 2/3``.
    """
    P = BezierVolume.identity((n, n, n)).points.copy()
    for k in range(n + 1):
        th = angle * k / n
        c, s = np.cos(th), np.sin(th)
        x, y = P[:, :, k, 0] - 0.5, P[:, :, k, 1] - 0.5
        P[:, :, k, 0] = c * x - s * y + 0.5
        P[:, :, k, 1] = s * x + c * y + 0.5
    if lift:
        P[:, :, 1, 2] += lift
        P[:, :, n - 1, 2] -= lift
    return BezierVolume(P)


def reflected(rng, degrees) -> BezierVolume:
    return perturbed_identity(rng, degrees, 0.02).transformed(np.diag([-1.0, 1.0, 1.0]))


def collapsed(rng, degrees, margin: float) -> BezierVolume:
    """The ``u = 1`` face squeezed toward the line ``y = 1/2``.

    The determinant is ``1 - S(u)`` with ``S`` increasing to ``1 - margin``,
    so its minimum is exactly ``margin`` (negative margins invert a slab).
    A random rotation and scale keep the sign pattern.
    """
    P = BezierVolume.identity(degrees).points.copy()
    nu = degrees[0]
    t = 1.0 - margin
    for i in range(nu + 1):
        s = t * (i / nu) ** 2
        P[i, ..., 1] = (1 - s) * P[i, ..., 1] + s * 0.5
    return BezierVolume(P).transformed(random_rotation(rng) * rng.uniform(0.5, 2.0), rng.normal(size=3))


def folded(rng, overshoot: float, degrees=(1, 3, 1)) -> BezierVolume:
    """y-layers with control values ``0, 1 + d, -d, 1``: ``dy/dv`` at ``v = 1/2`` is ``-1.5 d``.

    ``d > 0`` folds the middle of the cube; ``d < 0`` leaves a thin positive margin.
    """
    P = BezierVolume.identity(degrees).points.copy()
    P[:, 1, :, 1] = 1.0 + overshoot
    P[:, 2, :, 1] = -overshoot
    return BezierVolume(P).transformed(random_rotation(rng), rng.normal(size=3))


def thin_fold(rng, margin: float) -> BezierVolume:
    """Folded volume with positive ``dy/dv`` minimum ``1.5 margin / 0.85`` off the dyadic grid."""
    P = folded(rng, -margin).points
    return BezierVolume(restrict(P, ((0.0, 1.0), (0.1, 0.95), (0.0, 1.0))))


def soundness_corpus(seed: int = 2024):
    """50 regular, 25 irregular, 25 borderline volumes as ``(kind, volume)``."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(50):
        degs = random_degrees(rng)
        vol = perturbed_identity(rng, degs, 0.04)
        if i % 2:
            vol = vol.transformed(random_rotation(rng) * rng.uniform(0.5, 2.0), rng.normal(size=3))
        out.append(("regular", vol))
    for i in range(7):
        out.append(("irregular", reflected(rng, random_degrees(rng))))
    for i in range(6):
        out.append(("irregular", collapsed(rng, random_degrees(rng), -rng.uniform(0.05, 0.5))))
    for i in range(6):
        out.append(("irregular", folded(rng, rng.uniform(0.05, 0.5))))
    for ang in np.linspace(1.0, 3.0, 6):
        out.append(("irregular", twisted(float(ang), 3, lift=0.9)))
    for i in range(25):
        sign = 1.0 if i % 2 else -1.0
        if i < 13:
            margin = sign * float(10.0 ** rng.uniform(-6, -2))
            out.append(("borderline", collapsed(rng, random_degrees(rng, 1, 2), margin)))
        else:
            out.append(("borderline", folded(rng, -sign * float(10.0 ** rng.uniform(-3, -2)))))
    return out


# ---- Coons boundary configurations


def translated_faces(rng, degrees=(2, 2, 2), amp=0.05):
    """Boundary set whose opposite faces are translates of each other.

    A volume that is itself a tensor of three curves (x-curve in u plus
    y-curve in v plus z-curve in w) has this property; a small per-curve
    wobble keeps the faces curved.
    """
    nu, nv, nw = degrees
    cu = np.zeros((nu + 1, 3))
    cu[:, 0] = np.linspace(0, 1, nu + 1)
    cu[1:-1] += rng.uniform(-amp, amp, (nu - 1, 3))
    cv = np.zeros((nv + 1, 3))
    cv[:, 1] = np.linspace(0, 1, nv + 1)
    cv[1:-1] += rng.uniform(-amp, amp, (nv - 1, 3))
    cw = np.zeros((nw + 1, 3))
    cw[:, 2] = np.linspace(0, 1, nw + 1)
    cw[1:-1] += rng.uniform(-amp, amp, (nw - 1, 3))
    P = cu[:, None, None] + cv[None, :, None] + cw[None, None, :]
    return BoundarySet.from_volume(BezierVolume(P))


def parallelepiped_faces(A: np.ndarray, offset=(0.0, 0.0, 0.0)) -> BoundarySet:
    return BoundarySet.from_volume(BezierVolume.identity((1, 1, 1)).transformed(A, offset))


def bilinear_parallelogram_faces(skew: float = 0.3) -> BoundarySet:
    """Bilinear hexahedron: bottom face a parallelogram whose two front
    vertical edges are equal, back top edge tilted."""
    X = np.zeros((2, 2, 2, 3))
    X[0, 0, 0], X[1, 0, 0] = (0, 0, 0), (1, 0, 0)
    X[0, 1, 0], X[1, 1, 0] = (skew, 1, 0), (1 + skew, 1, 0)
    X[0, 0, 1], X[1, 0, 1] = (0.1, 0.0, 1.0), (1.1, 0.0, 1.0)
    X[0, 1, 1], X[1, 1, 1] = (skew + 0.05, 1.1, 0.9), (1 + skew - 0.05, 1.05, 1.1)
    return BoundarySet.from_volume(BezierVolume(X))


def wavy_faces(amp: float = 0.12, n: int = 3) -> BoundarySet:
    """Cube whose top and bottom faces carry opposite bumps in z."""
    P = BezierVolume.identity((n, n, n)).points.copy()
    bump = np.zeros((n + 1, n + 1))
    bump[1:-1, 1:-1] = amp
    P[:, :, 0, 2] += bump
    P[:, :, -1, 2] -= bump
    return BoundarySet.from_volume(BezierVolume(P))


def curved_faces(rng, degrees=(3, 3, 3), amp=0.15) -> BoundarySet:
    return BoundarySet.from_volume(perturbed_identity(rng, degrees, amp))


def as_surfaces(b: BoundarySet) -> dict[str, BezierSurface]:
    return dict(b.faces)
