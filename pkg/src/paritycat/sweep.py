"""Parameter sweeps producing entropy records.

Every sweep builds a list of independent points, evaluates them (optionally in
a process pool) into an index-addressed list, and returns records in index
order, so the output never depends on the number of workers.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Iterable, Sequence

import numpy as np

from .cats import CatParams
from .combinatorics import ParityLabel
from .limits import (
    IndeterminateLimitError,
    LossChannel,
    SphericalDirection,
    direction_components,
    directional_spectrum,
    rescaled_tl_spectrum,
    spectrum_at,
    thermodynamic_spectrum,
)
from .oracle import random_case, verify_spectrum
from .rng import SplitMix64
from .schmidt import SchmidtSpectrum, linear_entropy, numerical_rank, von_neumann_entropy
from .states import CSLabel

MAX_GRID_POINTS = 10_000_000
COLORMAPS = ("entropy", "dist", "angle")


class CapExceededError(ValueError):
    """A sweep or oracle request is larger than the documented caps."""


@dataclass
class SweepConfig:
    mode: str
    D: int = 2
    N: int = 6
    M: int = 1
    c: int = 0
    ranges: list[tuple[float, float]] = field(default_factory=lambda: [(0.0, 2.0)])
    points: list[int] = field(default_factory=lambda: [21])
    radius: float | None = None
    eta: float | None = None
    seed: int | None = None
    samples: int = 1000
    colormap: str = "entropy"
    ref: tuple[float, ...] | None = None
    kind: str = "tl"
    workers: int = 1
    chi2_samples: int = 0
    chi2_dim: int = 5
    cases: int = 50
    z: tuple[float, ...] | None = None
    with_limit: bool = True
    corrupt: float = 0.0

    def __post_init__(self):
        if self.D < 2:
            raise ValueError("D must be >= 2")
        if not 0 <= self.c < 1 << (self.D - 1):
            raise ValueError(f"parity {self.c} out of range for D={self.D}")
        if any(p < 2 for p in self.points):
            raise ValueError("resolution must be >= 2")
        for lo, hi in self.ranges:
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError("ranges must be finite")
        if self.colormap not in COLORMAPS:
            raise ValueError(f"colormap must be one of {COLORMAPS}")

    def axis_grid(self, n_axes: int) -> list[np.ndarray]:
        """``linspace`` per axis; a single range/points value applies to every axis."""
        ranges = self.ranges if len(self.ranges) > 1 else self.ranges * n_axes
        points = self.points if len(self.points) > 1 else self.points * n_axes
        if len(ranges) != n_axes or len(points) != n_axes:
            raise ValueError(f"need 1 or {n_axes} ranges/points, got {len(ranges)}/{len(points)}")
        total = math.prod(points)
        if total > MAX_GRID_POINTS:
            raise CapExceededError(f"grid has {total} points, cap is {MAX_GRID_POINTS}")
        return [np.linspace(lo, hi, p) for (lo, hi), p in zip(ranges, points)]

    def label(self) -> str:
        return ParityLabel(self.c, self.D - 1).to_string()


@dataclass
class EntropyRecord:
    coords: tuple[float, ...]
    c: str
    lambdas: tuple[float, ...]
    linear: float
    vonneumann: float
    rank: int
    colormap: float | None = None
    extra: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        row = {f"coord_{i + 1}": v for i, v in enumerate(self.coords)}
        row["c"] = self.c
        row.update({f"lambda_{i}": v for i, v in enumerate(self.lambdas)})
        row.update(linear=self.linear, vonneumann=self.vonneumann, rank=self.rank,
                   colormap=self.colormap)
        row.update(self.extra)
        return row


def _record(coords, label, spectrum: SchmidtSpectrum | Sequence[float], d=None,
            colormap=None, extra=None) -> EntropyRecord:
    lam = np.asarray(getattr(spectrum, "lambdas", spectrum), dtype=float)
    if d is None and not isinstance(spectrum, SchmidtSpectrum):
        d = lam.shape[0]
    L = linear_entropy(spectrum, d)
    S = von_neumann_entropy(spectrum, d)
    return EntropyRecord(tuple(float(x) for x in coords), label, tuple(float(x) for x in lam),
                         L, S, numerical_rank(lam), colormap, extra or {})


def parallel_map(func: Callable, items: Sequence, workers: int = 1) -> list:
    """Order-preserving map; results land at the index of their input."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunk))


def _grid_point(mags, D, N, M, c, label):
    spectrum = spectrum_at(CSLabel(tuple(mags)), c, N, M)
    return _record(mags, label, spectrum, colormap=von_neumann_entropy(spectrum))


def run_grid(cfg: SweepConfig) -> list[EntropyRecord]:
    """Spectra and entropies on the Cartesian grid of ``|z_i|`` (row-major, last axis fastest)."""
    _check_split(cfg)
    axes = cfg.axis_grid(cfg.D - 1)
    pts = [tuple(float(v) for v in p) for p in itertools.product(*axes)]
    func = partial(_grid_point, D=cfg.D, N=cfg.N, M=cfg.M, c=cfg.c, label=cfg.label())
    return parallel_map(func, pts, cfg.workers)


def _angular_point(theta, D, N, M, c, label, radius, with_limit):
    direction = SphericalDirection(tuple(theta), D)
    y = direction_components(direction)
    spectrum = spectrum_at(CSLabel(tuple(radius * y)), c, N, M)
    extra = {}
    if with_limit:
        width = 1 << (D - 1)
        try:
            lim = directional_spectrum(direction, c, N, M)
            vals = [float(v) for v in lim.lambdas]
            extra_L, extra_S = linear_entropy(lim), von_neumann_entropy(lim)
        except IndeterminateLimitError:
            vals, extra_L, extra_S = [math.nan] * width, math.nan, math.nan
        extra = {f"limit_lambda_{i}": v for i, v in enumerate(vals)}
        extra.update(limit_linear=extra_L, limit_vonneumann=extra_S)
    return _record(theta, label, spectrum, colormap=von_neumann_entropy(spectrum), extra=extra)


def run_angular(cfg: SweepConfig) -> list[EntropyRecord]:
    """Entropies on the sphere ``|z| = R`` over the first-octant angles, with the exact limit."""
    if cfg.D < 3:
        raise ValueError("angular sweeps need D >= 3")
    if cfg.radius is None:
        raise ValueError("angular sweeps need --radius")
    _check_split(cfg)
    if cfg.ranges == [(0.0, 2.0)]:
        cfg.ranges = [(0.0, math.pi / 2)]
    axes = cfg.axis_grid(cfg.D - 2)
    pts = [tuple(min(float(v), math.pi / 2) for v in p) for p in itertools.product(*axes)]
    func = partial(_angular_point, D=cfg.D, N=cfg.N, M=cfg.M, c=cfg.c, label=cfg.label(),
                   radius=cfg.radius, with_limit=cfg.with_limit)
    return parallel_map(func, pts, cfg.workers)


def colormap_value(kind: str, mags: np.ndarray, entropy: float,
                   ref: Sequence[float] | None) -> float:
    """``entropy``: von Neumann entropy; ``dist``: ``||z| - ref|``; ``angle``: angle to ``ref``."""
    if kind == "entropy":
        return entropy
    ref = np.ones_like(mags) if ref is None else np.asarray(ref, dtype=float)
    if ref.shape != mags.shape:
        raise ValueError(f"reference has {ref.shape[0]} components, need {mags.shape[0]}")
    if kind == "dist":
        return float(np.linalg.norm(mags - ref))
    nm, nr = np.linalg.norm(mags), np.linalg.norm(ref)
    if nm == 0 or nr == 0:
        return 0.0
    return float(math.acos(min(1.0, max(-1.0, float(mags @ ref) / (nm * nr)))))


def sample_magnitudes(rng: SplitMix64, width: int, ranges, radius: float | None) -> np.ndarray:
    if radius is not None:
        g = np.array([abs(rng.normal()) for _ in range(width)])
        norm = np.linalg.norm(g)
        return radius * g / norm if norm > 0 else np.full(width, radius / math.sqrt(width))
    return np.array([rng.uniform(lo, hi) for lo, hi in ranges])


def _infodiag_point(index, seed, D, N, M, c, label, ranges, radius, colormap, ref):
    rng = SplitMix64.for_sample(seed, index)
    mags = sample_magnitudes(rng, D - 1, ranges, radius)
    spectrum = spectrum_at(CSLabel(tuple(mags)), c, N, M)
    S = von_neumann_entropy(spectrum)
    return _record(mags, label, spectrum, colormap=colormap_value(colormap, mags, S, ref))


def chi2_spectrum(rng: SplitMix64, d: int) -> np.ndarray:
    """Random spectrum: rank ``r`` uniform in ``1..d``, entries ``g^2`` (1 dof), ``d - r`` zeroed."""
    r = rng.randint(1, d)
    x = np.array([rng.normal() ** 2 for _ in range(d)])
    x[r:] = 0.0
    if x.sum() == 0.0:
        x[0] = 1.0
    return x / x.sum()


def _chi2_point(index, seed, d):
    lam = chi2_spectrum(SplitMix64.for_sample(seed, index), d)
    rec = _record((), "", lam, d=d)
    rec.colormap = float(rec.rank)
    return rec


def run_infodiag(cfg: SweepConfig) -> list[EntropyRecord]:
    """Seeded point cloud in the (linear, von Neumann) plane.

    With ``chi2_samples > 0`` the cloud is made of random ``chi2_dim``-dimensional
    spectra instead of cat spectra (the rank-region background).
    """
    if cfg.seed is None:
        raise ValueError("infodiag needs --seed")
    if cfg.chi2_samples:
        if cfg.chi2_dim < 2:
            raise ValueError("chi2 dimension must be >= 2")
        func = partial(_chi2_point, seed=cfg.seed, d=cfg.chi2_dim)
        return parallel_map(func, range(cfg.chi2_samples), cfg.workers)
    _check_split(cfg)
    ranges = cfg.ranges if len(cfg.ranges) > 1 else cfg.ranges * (cfg.D - 1)
    if len(ranges) != cfg.D - 1:
        raise ValueError(f"need 1 or {cfg.D - 1} ranges")
    func = partial(_infodiag_point, seed=cfg.seed, D=cfg.D, N=cfg.N, M=cfg.M, c=cfg.c,
                   label=cfg.label(), ranges=ranges, radius=cfg.radius,
                   colormap=cfg.colormap, ref=cfg.ref)
    return parallel_map(func, range(cfg.samples), cfg.workers)


def _limit_point(coords, D, M, c, label, kind, eta):
    if kind == "tl":
        spectrum = thermodynamic_spectrum(CSLabel(tuple(coords)), M, c)
    else:
        spectrum = rescaled_tl_spectrum(LossChannel(eta, tuple(coords)), c)
    return _record(coords, label, spectrum, colormap=von_neumann_entropy(spectrum))


def run_limit(cfg: SweepConfig) -> list[EntropyRecord]:
    """Exact limit spectra over a grid of ``|z_i|`` (``tl``) or ``alpha_i`` (``rstl``).

    ``tl`` normalizes entropies by ``binom(M + D - 1, M)``, ``rstl`` by ``2^(D-1)``.
    """
    if cfg.kind not in ("tl", "rstl"):
        raise ValueError(f"unknown limit kind {cfg.kind!r}")
    if cfg.kind == "rstl":
        if cfg.eta is None or not 0.5 <= cfg.eta < 1.0:
            raise ValueError("rstl needs --eta in [1/2, 1)")
    elif cfg.M < 1:
        raise ValueError("M must be >= 1")
    axes = cfg.axis_grid(cfg.D - 1)
    pts = [tuple(float(v) for v in p) for p in itertools.product(*axes)]
    func = partial(_limit_point, D=cfg.D, M=cfg.M, c=cfg.c, label=cfg.label(),
                   kind=cfg.kind, eta=cfg.eta)
    return parallel_map(func, pts, cfg.workers)


def _oracle_case(case, corrupt):
    p, M = case
    rep = verify_spectrum(p, M, perturb=corrupt)
    row = {"D": p.D, "N": p.N, "M": M, "c": ParityLabel(p.c, p.D - 1).to_string(),
           "z": " ".join(repr(m) for m in p.z.magnitudes),
           "max_deviation": rep.max_deviation, "passed": rep.passed}
    return row


def oracle_cases(cfg: SweepConfig) -> list[tuple[CatParams, int]]:
    if cfg.z is not None:
        if len(cfg.z) != cfg.D - 1:
            raise ValueError(f"--z needs {cfg.D - 1} magnitudes")
        _check_split(cfg)
        return [(CatParams(CSLabel(tuple(cfg.z)), cfg.c, cfg.N), cfg.M)]
    rng = SplitMix64(0 if cfg.seed is None else cfg.seed)
    return [random_case(rng) for _ in range(cfg.cases)]


def run_oracle_check(cfg: SweepConfig) -> list[dict]:
    """Closed form versus brute force, one report row per case."""
    func = partial(_oracle_case, corrupt=cfg.corrupt)
    return parallel_map(func, oracle_cases(cfg), cfg.workers)


def _check_split(cfg: SweepConfig):
    if not 1 <= cfg.M <= cfg.N - 1:
        raise ValueError(f"invalid split: M={cfg.M}, N={cfg.N}")


RUNNERS = {
    "grid": run_grid,
    "angular": run_angular,
    "infodiag": run_infodiag,
    "limit": run_limit,
    "oracle": run_oracle_check,
}


def rows(records: Iterable) -> list[dict]:
    return [r.as_row() if isinstance(r, EntropyRecord) else r for r in records]
