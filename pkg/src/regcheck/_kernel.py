"""Compiled inner loop for Bernstein coefficients of ``det[U, V, W]``.

The sum runs over every index decomposition ``(i1,i2,i3)``, ``(j1,j2,j3)``,
``(k1,k2,k3)`` with fixed totals ``(p, q, r)``. Valid decompositions per
direction are precomputed as sorted tables (``start``, ``idx``, ``weight``)
so the loops carry no bound arithmetic. Each ``(p, q)`` row of the output is
owned by one thread and summed in a fixed order, so results do not depend on
the thread count.
"""
import os

import numba
import numpy as np
from numba import njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]


@njit(cache=True, nogil=True)
def _cross_table(V, W):
    """``X[i2, i3, j2, j3, k2, k3] = V[i2, j2, k2] x W[i3, j3, k3]``."""
    a0, a1, a2 = V.shape[0], V.shape[1], V.shape[2]
    b0, b1, b2 = W.shape[0], W.shape[1], W.shape[2]
    X = np.empty((a0, b0, a1, b1, a2, b2, 3))
    for i2 in range(a0):
        for j2 in range(a1):
            for k2 in range(a2):
                vx = V[i2, j2, k2, 0]
                vy = V[i2, j2, k2, 1]
                vz = V[i2, j2, k2, 2]
                for i3 in range(b0):
                    for j3 in range(b1):
                        for k3 in range(b2):
                            wx = W[i3, j3, k3, 0]
                            wy = W[i3, j3, k3, 1]
                            wz = W[i3, j3, k3, 2]
                            X[i2, i3, j2, j3, k2, k3, 0] = vy * wz - vz * wy
                            X[i2, i3, j2, j3, k2, k3, 1] = vz * wx - vx * wz
                            X[i2, i3, j2, j3, k2, k3, 2] = vx * wy - vy * wx
    return X


@njit(cache=True, nogil=True)
def _gather(Uf, iw):
    """``Ug[a, g] = Uf[a, k1(g)]``: the u-net factor of every w decomposition
    laid out contiguously. The cross table is indexed in place because a
    gathered copy grows past cache and hurts scaling at high degree."""
    G = iw.shape[0]
    Ug = np.empty((Uf.shape[0], G, 3))
    for a in range(Uf.shape[0]):
        for g in range(G):
            for c in range(3):
                Ug[a, g, c] = Uf[a, iw[g, 0], c]
    return Ug


@njit(cache=True, nogil=True, inline="always")
def _row(p, q, out, Ug, Xf, su, iu, wu, sv, iv, wv, sw, iw, ww, nvb, a1b1):
    R = out.shape[2]
    for e in range(su[p], su[p + 1]):
        i1 = iu[e, 0]
        ux = iu[e, 1]
        we = wu[e]
        for f in range(sv[q], sv[q + 1]):
            u = Ug[i1 * nvb + iv[f, 0]]
            x = Xf[ux * a1b1 + iv[f, 1]]
            wef = we * wv[f]
            for r in range(R):
                s = 0.0
                for g in range(sw[r], sw[r + 1]):
                    h = iw[g, 1]
                    s += ww[g] * (u[g, 0] * x[h, 0] + u[g, 1] * x[h, 1] + u[g, 2] * x[h, 2])
                out[p, q, r] += wef * s


def _flatten(U, V, W, iw):
    X = _cross_table(V, W)
    a0, b0, a1, b1, a2, b2, _ = X.shape
    nu, nv1, nw1 = U.shape[0], U.shape[1], U.shape[2]
    Ug = _gather(U.reshape(nu * nv1, nw1, 3), iw)
    return Ug, X.reshape(a0 * b0 * a1 * b1, a2 * b2, 3), nv1, a1 * b1


@njit(cache=True, nogil=True)
def _serial(P, Q, R, Ug, Xf, su, iu, wu, sv, iv, wv, sw, iw, ww, nvb, a1b1):
    out = np.zeros((P, Q, R))
    for p in range(P):
        for q in range(Q):
            _row(p, q, out, Ug, Xf, su, iu, wu, sv, iv, wv, sw, iw, ww, nvb, a1b1)
    return out


@njit(cache=True, nogil=True, parallel=True)
def _parallel(P, Q, R, Ug, Xf, su, iu, wu, sv, iv, wv, sw, iw, ww, nvb, a1b1):
    out = np.zeros((P, Q, R))
    for pq in prange(P * Q):
        _row(pq // Q, pq % Q, out, Ug, Xf, su, iu, wu, sv, iv, wv, sw, iw, ww, nvb, a1b1)
    return out


def det_coeffs_serial(U, V, W, tu, tv, tw):
    Ug, Xf, nvb, a1b1 = _flatten(U, V, W, tw[1])
    P, Q, R = len(tu[0]) - 1, len(tv[0]) - 1, len(tw[0]) - 1
    return _serial(P, Q, R, Ug, Xf, *tu, *tv, *tw, nvb, a1b1)


def det_coeffs_parallel(U, V, W, tu, tv, tw):
    Ug, Xf, nvb, a1b1 = _flatten(U, V, W, tw[1])
    P, Q, R = len(tu[0]) - 1, len(tv[0]) - 1, len(tw[0]) - 1
    return _parallel(P, Q, R, Ug, Xf, *tu, *tv, *tw, nvb, a1b1)
