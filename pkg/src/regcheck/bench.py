"""Timing harness for the Jacobian coefficient kernel.

For each degree ``n`` the identity cube of degree ``n`` gets an independent
random perturbation per trial, and only the ``jacobian_coeffs`` call is
timed. One extra warm-up trial per degree is run first and discarded.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
import time
from dataclasses import dataclass

import numpy as np

from .geometry import BezierVolume
from .jacobian import jacobian_coeffs

CSV_HEADER = ("degree", "num_ctrl_pts", "mean_time_s", "std_dev_s", "local_slope")
PERTURB_DISTS = ("uniform", "centered")


@dataclass(frozen=True)
class BenchRecord:
    degree: int
    num_ctrl_pts: int
    mean_time_s: float
    std_dev_s: float
    local_slope: float | None

    def row(self) -> list[str]:
        slope = "" if self.local_slope is None else repr(self.local_slope)
        return [str(self.degree), str(self.num_ctrl_pts), repr(self.mean_time_s), repr(self.std_dev_s), slope]


@dataclass(frozen=True)
class BenchResult:
    records: tuple[BenchRecord, ...]
    seed: int
    perturb_dist: str
    trials: int
    # sha256 over every perturbed input and computed tensor, independent of timing
    workload_digest: str

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.records:
            w.writerow(r.row())
        return buf.getvalue()


def perturbed_cube(n: int, rng: np.random.Generator, dist: str = "uniform") -> BezierVolume:
    """Identity cube of degree ``n`` plus an independent offset per coordinate.

    ``uniform`` draws from [0, 0.25]; ``centered`` from [-0.125, 0.125].
    """
    base = BezierVolume.identity((n, n, n)).points
    if dist == "uniform":
        noise = rng.uniform(0.0, 0.25, base.shape)
    elif dist == "centered":
        noise = rng.uniform(-0.125, 0.125, base.shape)
    else:
        raise ValueError(f"perturb_dist must be one of {PERTURB_DISTS}")
    return BezierVolume(base + noise)


def local_slopes(degrees, means) -> list[float | None]:
    out: list[float | None] = [None]
    for k in range(1, len(degrees)):
        out.append(math.log(means[k] / means[k - 1]) / math.log(degrees[k] / degrees[k - 1]))
    return out


def run_bench(degrees, trials: int = 1000, seed: int = 0, perturb_dist: str = "uniform", parallel: bool | None = None) -> BenchResult:
    degrees = [int(n) for n in degrees]
    if not degrees or any(n < 1 for n in degrees):
        raise ValueError("degrees must be positive integers")
    if sorted(set(degrees)) != degrees:
        raise ValueError("degrees must be strictly increasing")
    if trials < 2:
        raise ValueError("need at least 2 trials for a standard deviation")
    rng = np.random.default_rng(seed)
    digest = hashlib.sha256()
    means, stds = [], []
    for n in degrees:
        samples = [perturbed_cube(n, rng, perturb_dist) for _ in range(trials + 1)]
        times = []
        for t, vol in enumerate(samples):
            t0 = time.perf_counter()
            jc = jacobian_coeffs(vol, parallel=parallel)
            dt = time.perf_counter() - t0
            digest.update(vol.points.tobytes())
            digest.update(jc.coeffs.tobytes())
            if t > 0:
                times.append(dt)
        means.append(float(np.mean(times)))
        stds.append(float(np.std(times, ddof=1)))
    slopes = local_slopes(degrees, means)
    records = tuple(
        BenchRecord(n, (n + 1) ** 3, m, s, sl) for n, m, s, sl in zip(degrees, means, stds, slopes)
    )
    return BenchResult(records, seed, perturb_dist, trials, digest.hexdigest())
