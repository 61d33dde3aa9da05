"""JSON and binary file formats.

Control points are stored as a flat list of ``[x, y, z]`` triples with the
last parametric index running fastest::

    volume   index = (i * (nv + 1) + j) * (nw + 1) + k
    surface  index = a * (n2 + 1) + b
    coeffs   index = (p * (3nv) + q) * (3nw) + r

Floats are written with ``repr`` precision, so every value reads back
bit-identical.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .coons import FACE_NAMES, BlendingFunction, BoundarySet
from .geometry import BezierSurface, BezierVolume
from .jacobian import JacobianCoeffs, coeffs_from_bytes, coeffs_to_bytes
from .splines import BSplineVolume, ExtractedElement, KnotVector
from .verify import Certificate


def _points(arr) -> list:
    return np.asarray(arr, dtype=np.float64).reshape(-1, 3).tolist()


def _degrees(d, k: int) -> tuple[int, ...]:
    if len(d) != k or any(int(x) != x or x < 0 for x in d):
        raise ValueError(f"expected {k} nonnegative integer degrees, got {d!r}")
    return tuple(int(x) for x in d)


def volume_to_json(vol: BezierVolume) -> dict:
    return {"degrees": list(vol.degrees), "points": _points(vol.points)}


def volume_from_json(d) -> BezierVolume:
    return BezierVolume.from_flat(_degrees(d["degrees"], 3), d["points"])


def surface_to_json(s: BezierSurface) -> dict:
    return {"degrees": list(s.degrees), "points": _points(s.points)}


def surface_from_json(d) -> BezierSurface:
    n1, n2 = _degrees(d["degrees"], 2)
    pts = np.asarray(d["points"], dtype=np.float64)
    if pts.shape != ((n1 + 1) * (n2 + 1), 3):
        raise ValueError(f"surface of degrees {(n1, n2)} needs {(n1 + 1) * (n2 + 1)} points")
    return BezierSurface(pts.reshape(n1 + 1, n2 + 1, 3))


def boundary_to_json(b: BoundarySet, blend: BlendingFunction | str = "linear") -> dict:
    return {
        "blend": BlendingFunction.parse(blend).to_json(),
        "surfaces": {n: surface_to_json(b[n]) for n in FACE_NAMES},
    }


def boundary_from_json(d) -> tuple[BoundarySet, BlendingFunction]:
    surfaces = d.get("surfaces", {})
    missing = [n for n in FACE_NAMES if n not in surfaces]
    if missing:
        raise ValueError(f"boundary file is missing surfaces: {', '.join(missing)}")
    b = BoundarySet({n: surface_from_json(surfaces[n]) for n in FACE_NAMES})
    return b, BlendingFunction.parse(d.get("blend", "linear"))


def bspline_to_json(vol: BSplineVolume) -> dict:
    return {
        "degrees": list(vol.degrees),
        "knots_u": vol.ku.knots.tolist(),
        "knots_v": vol.kv.knots.tolist(),
        "knots_w": vol.kw.knots.tolist(),
        "points": _points(vol.points),
    }


def bspline_from_json(d) -> BSplineVolume:
    degs = _degrees(d["degrees"], 3)
    ks = [KnotVector(p, d[f"knots_{a}"]) for p, a in zip(degs, "uvw")]
    pts = np.asarray(d["points"], dtype=np.float64)
    shape = tuple(k.num_ctrl for k in ks)
    if pts.shape != (int(np.prod(shape)), 3):
        raise ValueError(f"B-spline with {shape} control points per direction needs {int(np.prod(shape))} points")
    return BSplineVolume(*ks, pts.reshape(shape + (3,)))


def coeffs_to_json(jc: JacobianCoeffs) -> dict:
    return {"degrees": list(jc.degrees), "coeffs": jc.coeffs.reshape(-1).tolist()}


def coeffs_from_json(d) -> JacobianCoeffs:
    P, Q, R = (x + 1 for x in _degrees(d["degrees"], 3))
    c = np.asarray(d["coeffs"], dtype=np.float64)
    if c.size != P * Q * R:
        raise ValueError("coefficient count does not match degrees")
    return JacobianCoeffs(c.reshape(P, Q, R))


def element_to_json(e: ExtractedElement) -> dict:
    return {"span_index": list(e.span_index), "box": [list(b) for b in e.box], **volume_to_json(e.volume)}


def element_from_json(d) -> ExtractedElement:
    box = tuple(tuple(float(x) for x in b) for b in d["box"])
    return ExtractedElement(tuple(int(i) for i in d["span_index"]), box, volume_from_json(d))


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def load_volume_like(path) -> BezierVolume | BSplineVolume:
    """A Bezier volume or B-spline volume file, told apart by its knot keys."""
    d = read_json(path)
    return bspline_from_json(d) if "knots_u" in d else volume_from_json(d)


def save_coeffs(path, jc: JacobianCoeffs) -> None:
    """``.bin`` suffix selects the binary layout, anything else JSON."""
    if Path(path).suffix == ".bin":
        Path(path).write_bytes(coeffs_to_bytes(jc))
    else:
        write_json(path, coeffs_to_json(jc))


def load_coeffs(path) -> JacobianCoeffs:
    if Path(path).suffix == ".bin":
        return coeffs_from_bytes(Path(path).read_bytes())
    return coeffs_from_json(read_json(path))


def load_certificate(path) -> Certificate:
    return Certificate.from_json(read_json(path))
