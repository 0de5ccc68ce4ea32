"""Gaussian-correlated metric fluctuations along the propagation axis.

The weak-field metric perturbation is modelled by four mutually independent
stationary Gaussian processes (the diagonal components h00, h11, h22, h33),
each with zero mean and covariance  A^2 exp(-(x - x')^2 / L^2).  Realizations
are drawn on a uniform grid by factorizing the dense covariance matrix, which
keeps the sampler exact at every lag rather than approximate in a spectral
cutoff.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    GridTooCoarseError,
    InsufficientSamplesError,
    InvalidParameterError,
    RegimeError,
)

COMPONENT_NAMES = ("h00", "h11", "h22", "h33")

# Dense eigen-factorization is O(n^3); beyond this many nodes a caller should
# rethink the grid rather than wait on it.
MAX_GRID_NODES = 4096

# Eigenvalues of the covariance below -tol*max(eig) mean the kernel matrix is
# broken; tiny negatives above that are roundoff and are clipped to zero.
_EIG_CLIP_REL = 1e-12


@dataclass(frozen=True)
class FluctuationParameters:
    """Amplitude and correlation length of the metric fluctuation."""

    amplitude: float
    correlation_length: float

    def __post_init__(self) -> None:
        if not (self.amplitude >= 0.0 and math.isfinite(self.amplitude)):
            raise InvalidParameterError(f"amplitude must be >= 0 and finite, got {self.amplitude!r}")
        if not (self.correlation_length > 0.0 and math.isfinite(self.correlation_length)):
            raise InvalidParameterError(
                f"correlation length must be positive and finite, got {self.correlation_length!r}"
            )
        if self.amplitude > 0.1:
            warnings.warn(
                f"amplitude {self.amplitude!r} is outside the weak-field regime; "
                "first-order propagation is unreliable",
                RuntimeWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class MetricTrajectory:
    """One realization of the four metric components on a uniform grid."""

    positions: np.ndarray
    values: np.ndarray  # shape (4, n), rows ordered as COMPONENT_NAMES
    params: FluctuationParameters
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.values.shape != (4, self.positions.size):
            raise InvalidParameterError(
                f"values shape {self.values.shape} does not match {self.positions.size} grid nodes"
            )

    @property
    def spacing(self) -> float:
        return float(self.positions[1] - self.positions[0])

    def component(self, name: str) -> np.ndarray:
        return self.values[COMPONENT_NAMES.index(name)]

    @property
    def h00(self) -> np.ndarray:
        return self.values[0]

    @property
    def h11(self) -> np.ndarray:
        return self.values[1]

    @property
    def h22(self) -> np.ndarray:
        return self.values[2]

    @property
    def h33(self) -> np.ndarray:
        return self.values[3]


def _validate_grid(params: FluctuationParameters, positions: np.ndarray) -> float:
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 1 or positions.size < 2:
        raise InvalidParameterError("grid must be a 1-d array with at least two nodes")
    if positions.size > MAX_GRID_NODES:
        raise RegimeError(
            f"{positions.size} nodes exceeds the dense-factorization cap of {MAX_GRID_NODES}"
        )
    steps = np.diff(positions)
    spacing = float(steps[0])
    if spacing <= 0.0 or not np.allclose(steps, spacing, rtol=1e-9, atol=0.0):
        raise InvalidParameterError("grid must be uniformly spaced and increasing")
    if spacing > params.correlation_length / 4.0 * (1.0 + 1e-12):
        raise GridTooCoarseError(
            f"grid spacing {spacing!r} does not resolve the correlation length "
            f"{params.correlation_length!r}; need spacing <= L/4"
        )
    return spacing


def covariance_factor(params: FluctuationParameters, positions) -> np.ndarray:
    """Symmetric square root of the grid covariance matrix.

    Multiplying a vector of iid standard normals by this factor yields one
    realization of a single component on the grid.
    """
    positions = np.asarray(positions, dtype=float)
    _validate_grid(params, positions)
    delta = positions[:, None] - positions[None, :]
    cov = params.amplitude**2 * np.exp(-(delta * delta) / params.correlation_length**2)
    eigval, eigvec = np.linalg.eigh(cov)
    floor = -_EIG_CLIP_REL * max(eigval[-1], 0.0)
    if eigval[0] < floor:
        raise RegimeError(
            f"covariance matrix is not positive semidefinite: min eigenvalue {eigval[0]!r}"
        )
    eigval = np.clip(eigval, 0.0, None)
    return (eigvec * np.sqrt(eigval)) @ eigvec.T


def sample_trajectory(
    params: FluctuationParameters,
    positions,
    seed: int,
    factor: np.ndarray | None = None,
) -> MetricTrajectory:
    """Draw one realization of all four components on a uniform grid.

    The four components are sampled independently from the same stationary
    kernel.  Passing a precomputed ``factor`` (from :func:`covariance_factor`)
    skips the O(n^3) factorization; the draw is bit-reproducible for a given
    seed either way.
    """
    positions = np.asarray(positions, dtype=float)
    _validate_grid(params, positions)
    if params.amplitude == 0.0:
        values = np.zeros((4, positions.size))
    else:
        if factor is None:
            factor = covariance_factor(params, positions)
        rng = np.random.default_rng(seed)
        normals = rng.standard_normal((4, positions.size))
        values = normals @ factor.T
    return MetricTrajectory(positions=positions, values=values, params=params, seed=seed)


def sample_many(
    params: FluctuationParameters,
    positions,
    n_realizations: int,
    base_seed: int,
    factor: np.ndarray | None = None,
) -> np.ndarray:
    """Draw a batch of realizations; returns shape (n_realizations, 4, n).

    One generator stream seeded with ``base_seed`` feeds the whole batch,
    so the ensemble is reproducible as a unit.
    """
    positions = np.asarray(positions, dtype=float)
    _validate_grid(params, positions)
    if n_realizations < 1:
        raise InvalidParameterError("need at least one realization")
    if params.amplitude == 0.0:
        return np.zeros((n_realizations, 4, positions.size))
    if factor is None:
        factor = covariance_factor(params, positions)
    rng = np.random.default_rng(base_seed)
    normals = rng.standard_normal((n_realizations, 4, positions.size))
    return normals @ factor.T


def empirical_autocorrelation(
    trajectories,
    lag_steps: int,
    component_a: str = "h00",
    component_b: str = "h00",
) -> tuple[float, float]:
    """Estimate <h_a(x) h_b(x + lag)> from an ensemble of realizations.

    Averages over both the ensemble and the admissible grid positions; the
    lag is given in grid steps so the estimator never interpolates.  Returns
    the estimate and its standard error.  Grid positions within a realization
    are correlated, so the error bar treats each trajectory's spatial mean as
    one independent sample rather than pooling all products.
    """
    trajectories = list(trajectories)
    if len(trajectories) < 100:
        raise InsufficientSamplesError(
            f"autocorrelation estimate needs at least 100 trajectories, got {len(trajectories)}"
        )
    if lag_steps < 0:
        raise InvalidParameterError("lag must be non-negative")
    n = trajectories[0].positions.size
    if lag_steps >= n:
        raise InvalidParameterError(f"lag of {lag_steps} steps exceeds the grid of {n} nodes")
    ia = COMPONENT_NAMES.index(component_a)
    ib = COMPONENT_NAMES.index(component_b)
    per_trajectory = np.empty(len(trajectories))
    for i, traj in enumerate(trajectories):
        if traj.positions.size != n:
            raise InvalidParameterError("all trajectories must share one grid")
        a = traj.values[ia]
        b = traj.values[ib]
        per_trajectory[i] = float(np.mean(a[: n - lag_steps] * b[lag_steps:]))
    estimate = float(np.mean(per_trajectory))
    stderr = float(np.std(per_trajectory, ddof=1) / math.sqrt(len(trajectories)))
    return estimate, stderr


def write_trajectory_csv(trajectory: MetricTrajectory, file) -> None:
    """Write a realization as CSV with columns x3,h00,h11,h22,h33."""
    writer = csv.writer(file)
    writer.writerow(("x3",) + COMPONENT_NAMES)
    for i, x in enumerate(trajectory.positions):
        writer.writerow([repr(float(x))] + [repr(float(v)) for v in trajectory.values[:, i]])
