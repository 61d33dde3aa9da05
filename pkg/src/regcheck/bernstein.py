"""Bernstein basis numerics: binomials, basis evaluation, degree elevation,
de Casteljau splitting of coefficient tensors and the per-direction weight
tables used by the Jacobian coefficient kernel."""
from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

MAX_BINOMIAL_N = 32


class BinomialTable:
    """Exact binomial coefficients ``C(n, k)`` for ``0 <= k <= n <= max_n``.

    Entries are Python integers built from Pascal's rule, so nothing is
    rounded. ``as_float`` gives a float64 view that is still exact because
    ``C(32, 16) < 2**53``.
    """

    def __init__(self, max_n: int = MAX_BINOMIAL_N):
        if max_n < 0:
            raise ValueError("max_n must be nonnegative")
        self.max_n = max_n
        rows = [[1]]
        for n in range(1, max_n + 1):
            prev = rows[-1]
            rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
        self._rows = tuple(tuple(r) for r in rows)
        dense = np.zeros((max_n + 1, max_n + 1), dtype=np.float64)
        for n, row in enumerate(self._rows):
            dense[n, : n + 1] = row
        dense.setflags(write=False)
        self.as_float = dense

    def __call__(self, n: int, k: int) -> int:
        if not 0 <= n <= self.max_n:
            raise ValueError(f"n={n} outside table range [0, {self.max_n}]")
        if not 0 <= k <= n:
            raise ValueError(f"k={k} outside [0, {n}]")
        return self._rows[n][k]

    def row(self, n: int) -> tuple[int, ...]:
        return self._rows[n]


BINOMIALS = BinomialTable()


def binomial(n: int, k: int) -> int:
    if n > BINOMIALS.max_n:
        return comb(n, k)
    return BINOMIALS(n, k)


def bernstein_eval(n: int, i: int, t: float) -> float:
    """Return ``B_i^n(t) = C(n, i) t^i (1 - t)^(n - i)``."""
    if n < 0 or not 0 <= i <= n:
        raise ValueError(f"Bernstein index i={i} out of range for degree {n}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"parameter t={t} outside [0, 1]")
    return binomial(n, i) * t**i * (1.0 - t) ** (n - i)


def bernstein_matrix(n: int, t) -> np.ndarray:
    """All degree-``n`` basis functions at the samples ``t``, shape ``(len(t), n + 1)``."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    k = np.arange(n + 1)
    c = np.array([binomial(n, i) for i in k], dtype=np.float64)
    return c * t[:, None] ** k * (1.0 - t[:, None]) ** (n - k)


def coefficient_weight(degrees, decomposition) -> float:
    """Binomial weight of one index decomposition in the Jacobian coefficient sum.

    ``decomposition`` is ``(i1, j1, k1, i2, j2, k2, i3, j3, k3)`` where the
    first triple indexes the u-difference net (degree ``nu - 1`` in u), the
    second the v-difference net and the third the w-difference net. The
    weight is the product of one reduced ratio per parametric direction,
    e.g. ``C(nu-1, i1) C(nu, i2) C(nu, i3) / C(3nu-1, i1+i2+i3)`` for u.
    """
    nu, nv, nw = (int(d) for d in degrees)
    i1, j1, k1, i2, j2, k2, i3, j3, k3 = (int(x) for x in decomposition)
    bounds = (
        (i1, nu - 1), (i2, nu), (i3, nu),
        (j1, nv), (j2, nv - 1), (j3, nv),
        (k1, nw), (k2, nw), (k3, nw - 1),
    )
    for idx, hi in bounds:
        if not 0 <= idx <= hi:
            raise ValueError(f"decomposition {tuple(decomposition)} violates index bounds for degrees {degrees}")
    return (
        _direction_ratio(nu, i1, i2, i3, 0)
        * _direction_ratio(nv, j1, j2, j3, 1)
        * _direction_ratio(nw, k1, k2, k3, 2)
    )


def _direction_ratio(n: int, a: int, b: int, c: int, lowered: int) -> float:
    # `lowered` picks which of the three factors carries degree n - 1
    degs = [n, n, n]
    degs[lowered] = n - 1
    num = binomial(degs[0], a) * binomial(degs[1], b) * binomial(degs[2], c)
    return num / binomial(3 * n - 1, a + b + c)


@lru_cache(maxsize=64)
def direction_weights(n: int, lowered: int) -> np.ndarray:
    """Table ``w[a, b, c]`` of reduced ratios for one direction.

    Axis ``lowered`` has length ``n`` (the differenced factor), the others
    ``n + 1``. Read-only; cached per ``(n, lowered)``.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    shape = [n + 1, n + 1, n + 1]
    shape[lowered] = n
    w = np.empty(shape, dtype=np.float64)
    for a in range(shape[0]):
        for b in range(shape[1]):
            for c in range(shape[2]):
                w[a, b, c] = _direction_ratio(n, a, b, c, lowered)
    w.setflags(write=False)
    return w


@lru_cache(maxsize=64)
def decomposition_table(n: int, lowered: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index triples of one direction grouped by their sum.

    Returns ``(start, idx, weight)``: rows ``start[p]:start[p+1]`` hold the
    triples ``(a, b, c)`` with ``a + b + c == p``, stored as
    ``idx = [a, b * len_c + c]`` (first-factor index, flat index of the
    other two) with ``weight`` from ``direction_weights``. Rows are sorted
    by ``(p, a, b, c)``.
    """
    w = direction_weights(n, lowered)
    la, lb, lc = w.shape
    rows = sorted((a + b + c, a, b, c) for a in range(la) for b in range(lb) for c in range(lc))
    start = np.zeros(3 * n + 1, dtype=np.int64)
    for s, *_ in rows:
        start[s + 1] += 1
    start = np.cumsum(start)
    idx = np.array([[a, b * lc + c] for _, a, b, c in rows], dtype=np.int64)
    weight = np.array([w[a, b, c] for _, a, b, c in rows])
    for arr in (start, idx, weight):
        arr.setflags(write=False)
    return start, idx, weight


def elevate(coeffs: np.ndarray, axis: int, target: int) -> np.ndarray:
    """Degree-elevate Bernstein coefficients along ``axis`` to degree ``target``."""
    c = np.moveaxis(np.asarray(coeffs, dtype=np.float64), axis, 0)
    n = c.shape[0] - 1
    if target < n:
        raise ValueError(f"cannot elevate degree {n} down to {target}")
    while n < target:
        out = np.empty((n + 2,) + c.shape[1:])
        out[0] = c[0]
        out[n + 1] = c[n]
        i = np.arange(1, n + 1).reshape((-1,) + (1,) * (c.ndim - 1))
        out[1 : n + 1] = (i / (n + 1)) * c[:n] + (1 - i / (n + 1)) * c[1 : n + 1]
        c = out
        n += 1
    return np.moveaxis(c, 0, axis)


def split(coeffs: np.ndarray, t: float, axis: int) -> tuple[np.ndarray, np.ndarray]:
    """de Casteljau split of a coefficient tensor along ``axis`` at ``t``.

    Returns the coefficients of the pieces on ``[0, t]`` and ``[t, 1]``, each
    reparametrized to ``[0, 1]``.
    """
    c = np.moveaxis(np.array(coeffs, dtype=np.float64), axis, 0)
    n = c.shape[0] - 1
    left = np.empty_like(c)
    right = np.empty_like(c)
    left[0] = c[0]
    right[n] = c[n]
    s = 1.0 - t
    for r in range(1, n + 1):
        c[: n - r + 1] = s * c[: n - r + 1] + t * c[1 : n - r + 2]
        left[r] = c[0]
        right[n - r] = c[n - r]
    return np.moveaxis(left, 0, axis), np.moveaxis(right, 0, axis)


def decasteljau(coeffs: np.ndarray, t: float, axis: int = 0) -> np.ndarray:
    """Evaluate along ``axis`` at ``t``; the axis is contracted away."""
    c = np.moveaxis(np.array(coeffs, dtype=np.float64), axis, 0)
    n = c.shape[0] - 1
    s = 1.0 - t
    for r in range(1, n + 1):
        c[: n - r + 1] = s * c[: n - r + 1] + t * c[1 : n - r + 2]
    return c[0]


def hodograph(coeffs: np.ndarray, axis: int) -> np.ndarray:
    """Coefficients of the derivative along ``axis`` (degree drops by one)."""
    c = np.asarray(coeffs, dtype=np.float64)
    n = c.shape[axis] - 1
    if n < 1:
        raise ValueError("cannot differentiate a degree-0 direction")
    return n * np.diff(c, axis=axis)


def multiply(a: np.ndarray, b: np.ndarray, ndim: int) -> np.ndarray:
    """Product of two tensor-product Bernstein polynomials.

    The first ``ndim`` axes are parametric; any trailing axes must broadcast
    (e.g. a scalar field times a vector field).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    da = [s - 1 for s in a.shape[:ndim]]
    db = [s - 1 for s in b.shape[:ndim]]
    a_s = a.copy()
    b_s = b.copy()
    for ax in range(ndim):
        a_s = _scale_axis(a_s, ax, da[ax])
        b_s = _scale_axis(b_s, ax, db[ax])
    tail = np.broadcast_shapes(a.shape[ndim:], b.shape[ndim:])
    out_shape = tuple(x + y + 1 for x, y in zip(da, db)) + tail
    out = np.zeros(out_shape)
    for idx in np.ndindex(*a.shape[:ndim]):
        sl = tuple(slice(i, i + d + 1) for i, d in zip(idx, db))
        out[sl] += a_s[idx] * b_s
    for ax in range(ndim):
        n = da[ax] + db[ax]
        inv = 1.0 / np.array([binomial(n, k) for k in range(n + 1)])
        out = out * inv.reshape((-1,) + (1,) * (out.ndim - ax - 1))
    return out


def _scale_axis(c: np.ndarray, axis: int, n: int) -> np.ndarray:
    w = np.array([binomial(n, k) for k in range(n + 1)], dtype=np.float64)
    return c * w.reshape((-1,) + (1,) * (c.ndim - axis - 1))
