"""Entanglement and mixedness diagnostics for two-photon states.

Negativity is computed two independent ways: numerically, by diagonalizing
the partial transpose with the package's own Jacobi eigensolver, and in
closed form for the evolved maximally entangled state, where the partial
transpose splits into scalar blocks and antidiagonal 2x2 blocks whose
spectra are known.  The pair of routes cross-validates both the evolution
law and the eigensolver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConvergenceError, InvalidParameterError, NoRootError

# Eigenvalues of a partial transpose more negative than this count as
# genuinely negative; anything closer to zero is roundoff.
NEGATIVE_EIG_THRESHOLD = -1e-12


@dataclass(frozen=True)
class MetricsReport:
    """Diagnostics of one state at one propagation distance."""

    x3: float
    purity: float
    negativity: float
    trace: float
    min_eigenvalue_pt: float


@njit(cache=True)
def _jacobi_rotate(a, v, max_sweeps, rel_tol):
    """Cyclic Jacobi sweeps on a symmetric matrix, in place.

    Returns the number of sweeps used, or -1 if the off-diagonal mass did
    not fall below rel_tol times the Frobenius norm within the cap.
    """
    n = a.shape[0]
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j] * a[i, j]
    fro = math.sqrt(fro)
    if fro == 0.0:
        return 0
    skip = 1e-2 * rel_tol * fro / n
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        off = math.sqrt(2.0 * off)
        if off <= rel_tol * fro:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                tau = s / (1.0 + c)
                h = t * apq
                a[p, p] -= h
                a[q, q] += h
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(p):
                    g = a[i, p]
                    w = a[i, q]
                    a[i, p] = g - s * (w + g * tau)
                    a[i, q] = w + s * (g - w * tau)
                    a[p, i] = a[i, p]
                    a[q, i] = a[i, q]
                for i in range(p + 1, q):
                    g = a[p, i]
                    w = a[i, q]
                    a[p, i] = g - s * (w + g * tau)
                    a[i, q] = w + s * (g - w * tau)
                    a[i, p] = a[p, i]
                    a[q, i] = a[i, q]
                for i in range(q + 1, n):
                    g = a[p, i]
                    w = a[q, i]
                    a[p, i] = g - s * (w + g * tau)
                    a[q, i] = w + s * (g - w * tau)
                    a[i, p] = a[p, i]
                    a[i, q] = a[q, i]
                for i in range(n):
                    g = v[i, p]
                    w = v[i, q]
                    v[i, p] = g - s * (w + g * tau)
                    v[i, q] = w + s * (g - w * tau)
    return -1


def eigenvalues_symmetric(
    matrix: np.ndarray,
    return_vectors: bool = False,
    max_sweeps: int = 100,
    rel_tol: float = 1e-14,
):
    """Eigenvalues (ascending) of a real symmetric matrix by cyclic Jacobi.

    The result is checked a posteriori: every residual ||A v - lambda v||
    must be below 1e-10 times the Frobenius norm of A, otherwise the run is
    rejected rather than returned silently.  With ``return_vectors`` the
    orthonormal eigenvector columns come back too.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidParameterError(f"need a square matrix, got shape {matrix.shape}")
    scale = max(1.0, float(np.max(np.abs(matrix)))) if matrix.size else 1.0
    asym = float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0
    if asym > 1e-12 * scale:
        raise InvalidParameterError(f"matrix is not symmetric: max asymmetry {asym:.3e}")

    work = np.array(0.5 * (matrix + matrix.T), dtype=np.float64, order="C")
    vectors = np.eye(work.shape[0], dtype=np.float64)
    sweeps = _jacobi_rotate(work, vectors, max_sweeps, rel_tol)
    if sweeps < 0:
        raise ConvergenceError(
            f"Jacobi sweeps did not converge within {max_sweeps} iterations "
            f"for a {work.shape[0]}x{work.shape[0]} matrix"
        )
    values = np.diagonal(work).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]

    fro = float(np.linalg.norm(matrix))
    if fro > 0.0:
        residual = np.linalg.norm(matrix @ vectors - vectors * values, axis=0)
        worst = float(np.max(residual))
        if worst > 1e-10 * fro:
            raise ConvergenceError(
                f"eigen decomposition failed its backward-error check: "
                f"{worst:.3e} > 1e-10 * {fro:.3e}"
            )
    if return_vectors:
        return values, vectors
    return values


def _embed_hermitian(matrix: np.ndarray) -> np.ndarray:
    """Real symmetric embedding of a Hermitian matrix.

    [[X, -Y], [Y, X]] has the spectrum of X + iY with every eigenvalue
    appearing twice.
    """
    x = matrix.real
    y = matrix.imag
    top = np.concatenate([x, -y], axis=1)
    bottom = np.concatenate([y, x], axis=1)
    return np.concatenate([top, bottom], axis=0)


def eigenvalues_hermitian(matrix: np.ndarray, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues (ascending) of a Hermitian matrix via the real embedding."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidParameterError(f"need a square matrix, got shape {matrix.shape}")
    scale = max(1.0, float(np.max(np.abs(matrix)))) if matrix.size else 1.0
    dev = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
    if dev > 1e-12 * scale:
        raise InvalidParameterError(f"matrix is not Hermitian: max deviation {dev:.3e}")
    if float(np.max(np.abs(matrix.imag))) <= 1e-15 * scale:
        return eigenvalues_symmetric(matrix.real, max_sweeps=max_sweeps)
    doubled = eigenvalues_symmetric(_embed_hermitian(matrix), max_sweeps=max_sweeps)
    # Every eigenvalue shows up twice in the embedding; take one copy.
    return doubled[::2]


def _as_square(state) -> np.ndarray:
    matrix = state.matrix if hasattr(state, "matrix") else np.asarray(state, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidParameterError(f"need a square matrix, got shape {matrix.shape}")
    return matrix


def purity(state) -> float:
    """tr(rho^2) of a Hermitian state; 1 for pure, 1/rank for maximally mixed."""
    matrix = _as_square(state)
    dev = float(np.max(np.abs(matrix - matrix.conj().T)))
    if dev > 1e-12 * max(1.0, float(np.max(np.abs(matrix)))):
        raise InvalidParameterError(f"state is not Hermitian: max deviation {dev:.3e}")
    # For Hermitian rho, tr(rho^2) is the squared Frobenius norm.
    return float(np.sum(matrix.real**2 + matrix.imag**2))


def purity_blockwise(x3: float, max_azimuthal: int, kappa: float) -> float:
    """Closed-form purity of the evolved maximally entangled state.

    Every surviving element has weight 2(|l| - |j|)^2, so
    P = (1/D^2) sum_{l,j} exp(-4 (|l|-|j|)^2 x3 / kappa).
    """
    if x3 < 0.0:
        raise InvalidParameterError(f"distance must be >= 0, got {x3!r}")
    m = max_azimuthal
    d = 2 * m + 1
    ls = np.abs(np.arange(-m, m + 1))
    diff2 = (ls[:, None] - ls[None, :]) ** 2
    return float(np.sum(np.exp(-4.0 * diff2 * (x3 / kappa)))) / (d * d)


def partial_transpose(state) -> np.ndarray:
    """Transpose the second photon's indices; entanglement witness input."""
    matrix = _as_square(state)
    d = math.isqrt(matrix.shape[0])
    if d * d != matrix.shape[0]:
        raise InvalidParameterError(
            f"matrix side {matrix.shape[0]} is not a perfect square"
        )
    four = matrix.reshape(d, d, d, d)
    return np.ascontiguousarray(four.transpose(0, 3, 2, 1).reshape(d * d, d * d))


def negativity(state, max_sweeps: int = 100) -> float:
    """Sum of |negative eigenvalues| of the partial transpose.

    Zero for separable states; (D - 1)/2 for the maximally entangled state
    on D modes per photon.
    """
    pt = partial_transpose(state)
    values = eigenvalues_hermitian(pt, max_sweeps=max_sweeps)
    negative = values[values < NEGATIVE_EIG_THRESHOLD]
    return float(-np.sum(negative))


def negativity_blockwise(x3: float, max_azimuthal: int, kappa: float) -> float:
    """Closed-form negativity of the evolved maximally entangled state.

    The partial transpose decomposes into invariant populations and
    antidiagonal 2x2 blocks, one per unordered mode pair, each contributing
    (1/D) exp(-2 (|l|-|j|)^2 x3 / kappa) of negative mass.
    """
    if x3 < 0.0:
        raise InvalidParameterError(f"distance must be >= 0, got {x3!r}")
    m = max_azimuthal
    d = 2 * m + 1
    total = 0.0
    for l in range(-m, m + 1):
        for j in range(l + 1, m + 1):
            total += math.exp(-2.0 * (abs(l) - abs(j)) ** 2 * (x3 / kappa))
    return total / d


def decay_distance(
    max_azimuthal: int, kappa: float, tol: float = 1e-4
) -> float:
    """Distance at which the negativity falls to 1/e of its initial value.

    Uses the closed-form curve and bisection to a tolerance of ``tol`` times
    kappa.  The fully decayed negativity must lie below the 1/e mark, or
    there is no crossing to find.
    """
    if not (kappa > 0.0 and math.isfinite(kappa)):
        raise InvalidParameterError(f"characteristic length must be positive and finite, got {kappa!r}")
    n0 = negativity_blockwise(0.0, max_azimuthal, kappa)
    target = n0 / math.e
    # Safety islands keep this much negativity at any distance.
    floor = max_azimuthal / (2.0 * max_azimuthal + 1.0)
    if floor >= target:
        raise NoRootError(
            f"negativity floor {floor:.6f} never crosses the 1/e mark {target:.6f} "
            f"for {2 * max_azimuthal + 1} modes"
        )
    lo, hi = 0.0, kappa
    while negativity_blockwise(hi, max_azimuthal, kappa) > target:
        hi *= 2.0
        if hi > 1e6 * kappa:
            raise NoRootError("no crossing found below 1e6 kappa")
    while hi - lo > tol * kappa:
        mid = 0.5 * (lo + hi)
        if negativity_blockwise(mid, max_azimuthal, kappa) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def metrics_report(state, x3: float) -> MetricsReport:
    """Bundle purity, negativity and sanity scalars for one state."""
    matrix = _as_square(state)
    pt = partial_transpose(matrix)
    values = eigenvalues_hermitian(pt)
    negative = values[values < NEGATIVE_EIG_THRESHOLD]
    return MetricsReport(
        x3=float(x3),
        purity=purity(matrix),
        negativity=float(-np.sum(negative)),
        trace=float(np.trace(matrix).real),
        min_eigenvalue_pt=float(values[0]),
    )
