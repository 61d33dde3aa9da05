"""Bernstein coefficients of the Jacobian determinant of a Bezier volume.

For a volume of degrees ``(nu, nv, nw)`` the determinant
``det[T_u, T_v, T_w]`` is a polynomial of degree ``(3nu-1, 3nv-1, 3nw-1)``.
Its Bernstein coefficients are obtained exactly (up to rounding) by expanding
the product of the three hodographs and regrouping with the Bernstein product
identity. All coefficients positive implies a positive determinant on the
whole cube; the corner coefficients equal the determinant at the corners.
"""
from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field

import numba
import numpy as np

from . import bernstein
from . import _kernel
from .geometry import BezierVolume, _check_param, eval_grid

# below this many inner terms the parallel launch costs more than it saves
_PARALLEL_MIN_TERMS = 2_000_000


def set_threads(n: int | None = None) -> int:
    """Set the kernel thread count (``None``: ``REGCHECK_THREADS`` or all available)."""
    if n is None:
        env = os.environ.get("REGCHECK_THREADS")
        n = int(env) if env else numba.config.NUMBA_NUM_THREADS
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n


def get_threads() -> int:
    return numba.get_num_threads()


@dataclass(frozen=True)
class DifferenceTensors:
    """Scaled forward differences ``n_d (P[.. +1 ..] - P)`` along each direction."""

    du: np.ndarray
    dv: np.ndarray
    dw: np.ndarray

    @classmethod
    def of(cls, vol: BezierVolume) -> DifferenceTensors:
        if min(vol.degrees) < 1:
            raise ValueError(f"volume degrees {vol.degrees} must all be >= 1")
        p = vol.points
        return cls(*(bernstein.hodograph(p, ax) for ax in range(3)))


@dataclass(frozen=True, eq=False)
class JacobianCoeffs:
    """Bernstein coefficient tensor ``coeffs[p, q, r]`` of the Jacobian determinant."""

    coeffs: np.ndarray
    min_coeff: float = field(init=False)
    min_index: tuple[int, int, int] = field(init=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.float64)
        if c.ndim != 3:
            raise ValueError("coefficient tensor must be 3-dimensional")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        idx = np.unravel_index(int(np.argmin(c)), c.shape)
        object.__setattr__(self, "min_coeff", float(c[idx]))
        object.__setattr__(self, "min_index", tuple(int(i) for i in idx))

    @property
    def degrees(self) -> tuple[int, int, int]:
        return tuple(s - 1 for s in self.coeffs.shape)

    def corners(self) -> np.ndarray:
        """The eight corner coefficients, indexed ``[a, b, c]`` with a, b, c in {0, 1}."""
        return self.coeffs[np.ix_([0, -1], [0, -1], [0, -1])]

    def evaluate(self, u: float, v: float, w: float) -> float:
        c = bernstein.decasteljau(self.coeffs, _check_param("w", w), axis=2)
        c = bernstein.decasteljau(c, _check_param("v", v), axis=1)
        return float(bernstein.decasteljau(c, _check_param("u", u), axis=0))

    def reconstruct(self, us, vs, ws) -> np.ndarray:
        """The polynomial ``sum J_pqr B_p(u) B_q(v) B_r(w)`` on a tensor grid."""
        return eval_grid(self.coeffs, us, vs, ws)

    def __eq__(self, other):
        return isinstance(other, JacobianCoeffs) and np.array_equal(self.coeffs, other.coeffs)


def det_coeffs(U: np.ndarray, V: np.ndarray, W: np.ndarray, parallel: bool | None = None) -> np.ndarray:
    """Bernstein coefficients of ``det[U, V, W]`` for three vector-valued nets.

    ``U`` has degree ``(nu-1, nv, nw)``, ``V`` degree ``(nu, nv-1, nw)`` and
    ``W`` degree ``(nu, nv, nw-1)``; the result has degree
    ``(3nu-1, 3nv-1, 3nw-1)``.
    """
    U = np.ascontiguousarray(U, dtype=np.float64)
    V = np.ascontiguousarray(V, dtype=np.float64)
    W = np.ascontiguousarray(W, dtype=np.float64)
    nu, nv, nw = U.shape[0], V.shape[1], W.shape[2]
    if min(nu, nv, nw) < 1:
        raise ValueError("all degrees must be >= 1")
    if (
        U.shape != (nu, nv + 1, nw + 1, 3)
        or V.shape != (nu + 1, nv, nw + 1, 3)
        or W.shape != (nu + 1, nv + 1, nw, 3)
    ):
        raise ValueError(f"inconsistent difference net shapes {U.shape}, {V.shape}, {W.shape}")
    tu = bernstein.decomposition_table(nu, 0)
    tv = bernstein.decomposition_table(nv, 1)
    tw = bernstein.decomposition_table(nw, 2)
    if parallel is None:
        terms = (nu * (nu + 1) ** 2) * (nv * (nv + 1) ** 2) * (nw * (nw + 1) ** 2)
        parallel = get_threads() > 1 and terms >= _PARALLEL_MIN_TERMS
    kern = _kernel.det_coeffs_parallel if parallel else _kernel.det_coeffs_serial
    return kern(U, V, W, tu, tv, tw)


def jacobian_coeffs(vol: BezierVolume, parallel: bool | None = None) -> JacobianCoeffs:
    """Exact Bernstein coefficients of ``det[T_u, T_v, T_w]``."""
    d = DifferenceTensors.of(vol)
    return JacobianCoeffs(det_coeffs(d.du, d.dv, d.dw, parallel=parallel))


def jacobian_direct(vol: BezierVolume, u: float, v: float, w: float) -> float:
    """Determinant of the three partial derivatives evaluated at one point."""
    d = DifferenceTensors.of(vol)
    cols = []
    for net in (d.du, d.dv, d.dw):
        c = bernstein.decasteljau(net, _check_param("w", w), axis=2)
        c = bernstein.decasteljau(c, _check_param("v", v), axis=1)
        cols.append(bernstein.decasteljau(c, _check_param("u", u), axis=0))
    return float(np.linalg.det(np.column_stack(cols)))


def jacobian_grid(vol: BezierVolume, us, vs, ws, chunk: int = 16) -> np.ndarray:
    """Direct determinant on a tensor grid, shape ``(len(us), len(vs), len(ws))``.

    Works in slabs of ``chunk`` u-values to bound memory on dense grids.
    """
    d = DifferenceTensors.of(vol)
    us = np.atleast_1d(np.asarray(us, dtype=np.float64))
    out = np.empty((len(us), len(np.atleast_1d(vs)), len(np.atleast_1d(ws))))
    for s in range(0, len(us), chunk):
        uu = us[s : s + chunk]
        a = eval_grid(d.du, uu, vs, ws)
        b = eval_grid(d.dv, uu, vs, ws)
        c = eval_grid(d.dw, uu, vs, ws)
        out[s : s + chunk] = (
            a[..., 0] * (b[..., 1] * c[..., 2] - b[..., 2] * c[..., 1])
            - a[..., 1] * (b[..., 0] * c[..., 2] - b[..., 2] * c[..., 0])
            + a[..., 2] * (b[..., 0] * c[..., 1] - b[..., 1] * c[..., 0])
        )
    return out


@dataclass(frozen=True)
class CertifiedPositive:
    min_coeff: float


@dataclass(frozen=True)
class HasNonpositiveCoefficient:
    """At least one coefficient is ``<= tol``. On its own this does not prove irregularity."""

    min_coeff: float
    min_index: tuple[int, int, int]


def classify_positivity(jc: JacobianCoeffs, tol: float = 1e-12):
    if jc.min_coeff > tol:
        return CertifiedPositive(jc.min_coeff)
    return HasNonpositiveCoefficient(jc.min_coeff, jc.min_index)


def max_reconstruction_error(vol: BezierVolume, samples: int = 101, jc: JacobianCoeffs | None = None) -> float:
    """Max ``|sum J B B B - det|`` over a uniform ``samples**3`` grid."""
    jc = jc if jc is not None else jacobian_coeffs(vol)
    t = np.linspace(0.0, 1.0, samples)
    err = 0.0
    step = 16
    for s in range(0, samples, step):
        uu = t[s : s + step]
        direct = jacobian_grid(vol, uu, t, t)
        recon = jc.reconstruct(uu, t, t)
        err = max(err, float(np.max(np.abs(recon - direct))))
    return err


# flat binary export: magic, three little-endian uint32 sizes, then float64 data (k fastest)
BINARY_MAGIC = b"RCJCOEF1"


def coeffs_to_bytes(jc: JacobianCoeffs) -> bytes:
    P, Q, R = jc.coeffs.shape
    return BINARY_MAGIC + struct.pack("<3I", P, Q, R) + jc.coeffs.astype("<f8").tobytes(order="C")


def coeffs_from_bytes(blob: bytes) -> JacobianCoeffs:
    if blob[:8] != BINARY_MAGIC:
        raise ValueError("not a Jacobian coefficient file")
    P, Q, R = struct.unpack("<3I", blob[8:20])
    data = np.frombuffer(blob, dtype="<f8", offset=20)
    if data.size != P * Q * R:
        raise ValueError("truncated coefficient payload")
    return JacobianCoeffs(data.reshape(P, Q, R).astype(np.float64))
