"""Monte-Carlo sampler and empirical-distribution utilities.

Sampling uses the counter-based Philox generator on fixed-size logical
blocks: block b always draws from Philox(key=seed, counter=b << 64)
regardless of how blocks are grouped into work chunks, so a given seed
yields the same stream for every chunk size and worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import WalkConfig
from .errors import DomainError, EmptyInputError

_CHUNK = 1 << 20
_BLOCK = 1 << 14  # samples per Philox counter block; fixed for stream stability


@dataclass(frozen=True)
class SampleBatch:
    """Endpoint samples in polar form, with the provenance of the draw."""

    radii: np.ndarray
    angles: np.ndarray
    cfg: WalkConfig
    seed: int

    def __post_init__(self):
        self.radii.setflags(write=False)
        self.angles.setflags(write=False)

    @property
    def size(self) -> int:
        return self.radii.size


def sample_walk(
    cfg: WalkConfig,
    n_samples: int,
    seed: int,
    chunk_size: int = _CHUNK,
    n_jobs: int = 1,
) -> SampleBatch:
    """Draw endpoint samples of the N-step walk.

    Each sample sums N unit vectors with angles uniform on [-a, a] and
    records the endpoint radius and angle. Samples are generated in
    fixed logical blocks of 2**14; block b draws from the counter value
    b << 64, so the stream depends only on the seed. chunk_size (rounded
    up to whole blocks) and n_jobs only control work scheduling.
    """
    if n_samples < 1:
        raise DomainError(f"n_samples must be positive, got {n_samples!r}")
    if chunk_size < 1:
        raise DomainError(f"chunk_size must be positive, got {chunk_size!r}")
    n, a = cfg.n_steps, cfg.max_angle
    radii = np.empty(n_samples)
    angles = np.empty(n_samples)
    blocks_per_chunk = max(1, -(-chunk_size // _BLOCK))
    n_blocks = -(-n_samples // _BLOCK)
    n_chunks = -(-n_blocks // blocks_per_chunk)

    def fill(i: int):
        for b in range(i * blocks_per_chunk, min((i + 1) * blocks_per_chunk, n_blocks)):
            lo = b * _BLOCK
            hi = min(lo + _BLOCK, n_samples)
            rng = np.random.Generator(np.random.Philox(key=seed, counter=b << 64))
            # always draw the full block so partial use at the tail does
            # not change the values of the samples that are kept
            phi = rng.uniform(-a, a, size=(_BLOCK, n))[: hi - lo]
            x = np.cos(phi).sum(axis=1)
            y = np.sin(phi).sum(axis=1)
            radii[lo:hi] = np.hypot(x, y)
            angles[lo:hi] = np.arctan2(y, x)

    if n_jobs > 1 and n_chunks > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            list(pool.map(fill, range(n_chunks)))
    else:
        for i in range(n_chunks):
            fill(i)
    return SampleBatch(radii=radii, angles=angles, cfg=cfg, seed=seed)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Right-continuous empirical CDF built from a sample."""

    sorted_values: np.ndarray

    def __post_init__(self):
        self.sorted_values.setflags(write=False)

    @classmethod
    def from_sample(cls, values) -> "EmpiricalDistribution":
        values = np.asarray(values, dtype=float).ravel()
        if values.size == 0:
            raise EmptyInputError("empirical distribution requires at least one sample")
        return cls(sorted_values=np.sort(values))

    @property
    def size(self) -> int:
        return self.sorted_values.size

    def cdf(self, x):
        """Fraction of the sample <= x."""
        x = np.asarray(x, dtype=float)
        out = np.searchsorted(self.sorted_values, x, side="right") / self.size
        return out if out.ndim else float(out)


def empirical_cdf(values, x):
    """One-shot empirical CDF of `values` evaluated at `x`."""
    return EmpiricalDistribution.from_sample(values).cdf(x)


def ks_distance(values, cdf) -> float:
    """Kolmogorov-Smirnov distance between a sample and a model CDF.

    `cdf` is a callable evaluated vectorized at the sorted sample points;
    the statistic is max(D+, D-) over the sample.
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise EmptyInputError("KS distance requires at least one sample")
    xs = np.sort(values)
    f = np.asarray(cdf(xs), dtype=float)
    n = xs.size
    grid = np.arange(1, n + 1) / n
    d_plus = np.max(grid - f)
    d_minus = np.max(f - (grid - 1.0 / n))
    return float(max(d_plus, d_minus))


def tabulated_cdf(cdf, lo: float, hi: float, n_points: int = 4001):
    """Tabulate an expensive CDF on a grid; returns an interpolating callable.

    Outside [lo, hi] the interpolant clamps to the tabulated end values.
    """
    if not lo < hi:
        raise DomainError("tabulation requires lo < hi")
    grid = np.linspace(lo, hi, n_points)
    vals = np.asarray(cdf(grid), dtype=float)

    def interp(x):
        out = np.interp(np.asarray(x, dtype=float), grid, vals)
        return out if out.ndim else float(out)

    return interp


def histogram_density(values, bins: int, range_=None):
    """Histogram normalized as a density; returns (edges, density, counts)."""
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise EmptyInputError("histogram requires at least one sample")
    counts, edges = np.histogram(values, bins=bins, range=range_)
    widths = np.diff(edges)
    density = counts / (values.size * widths)
    return edges, density, counts
