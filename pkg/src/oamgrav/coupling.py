"""Coupling of beam modes through the fluctuating metric.

To first order in the metric perturbation, propagation adds to the free
paraxial z-derivative a fluctuation term

    (1/(2i)) k (h00 + h33) T  +  (1/(2ik)) [ (h33 - h11) d1^2 T
                                           + (h33 - h22) d2^2 T ],

where the h's are the diagonal metric components at the beam's current
position.  Projecting this operator, applied to the conjugated target mode,
onto another mode yields the coupling integrals that drive the density-matrix
evolution.  The integrals are computed two independent ways: a grid
quadrature with finite-difference transverse derivatives, and a closed form
obtained from the generating function of the mode family.  Both are kept so
each can check the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beam_optics import (
    BeamParameters,
    ModeIndex,
    TransverseQuadrature,
    beam_geometry,
    evaluate_lg,
)
from .errors import InvalidParameterError, RegimeError

# Defaults for the uniform finite-difference quadrature; measured to give
# relative accuracy better than 1e-7 against the closed form for |l| <= 6.
FD_QUAD_NODES = 896
FD_QUAD_EXTENT = 6.0


@dataclass(frozen=True)
class MetricPoint:
    """Diagonal metric components sampled at one position on the beam axis."""

    h00: float
    h11: float
    h22: float
    h33: float

    def __post_init__(self) -> None:
        for name in ("h00", "h11", "h22", "h33"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidParameterError(f"{name} must be finite, got {v!r}")
            if abs(v) >= 1.0:
                raise InvalidParameterError(
                    f"{name}={v!r} is not a weak perturbation; require |h| < 1"
                )

    @classmethod
    def zero(cls) -> "MetricPoint":
        return cls(0.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, values) -> "MetricPoint":
        h00, h11, h22, h33 = (float(v) for v in values)
        return cls(h00, h11, h22, h33)

    def as_array(self) -> np.ndarray:
        return np.array([self.h00, self.h11, self.h22, self.h33])


def _second_derivative(values: np.ndarray, spacing: float, axis: int) -> np.ndarray:
    """Fourth-order centered second derivative with zero padding at the edges.

    Zero padding keeps the stencil matrix symmetric, which the discrete
    power-conservation identity relies on; it is accurate for fields that
    decay well inside the window.
    """
    f = np.moveaxis(values, axis, 0)
    pad = np.zeros((2,) + f.shape[1:], dtype=values.dtype)
    g = np.concatenate([pad, f, pad], axis=0)
    d2 = (-g[:-4] + 16.0 * g[1:-3] - 30.0 * g[2:-2] + 16.0 * g[3:-1] - g[4:]) / (
        12.0 * spacing * spacing
    )
    return np.moveaxis(d2, 0, axis)


def _fluctuation_coefficients(point: MetricPoint, beam: BeamParameters):
    alpha = -0.5j * beam.k * (point.h00 + point.h33)
    beta = -0.5j / beam.k * (point.h33 - point.h11)
    gamma = -0.5j / beam.k * (point.h33 - point.h22)
    return alpha, beta, gamma


def apply_fluctuation_derivative(
    values: np.ndarray,
    spacing: float,
    point: MetricPoint,
    beam: BeamParameters,
) -> np.ndarray:
    """Fluctuation part of the z-derivative, acting on a sampled field.

    The field must be sampled on a uniform grid with the given spacing, at
    least five nodes along each transverse axis.  The operator is applied
    exactly as written above, also when the caller passes a conjugated mode;
    the coefficients are not conjugated.
    """
    values = np.asarray(values)
    if values.ndim != 2 or min(values.shape) < 5:
        raise InvalidParameterError(
            f"need a 2-d field with at least 5 nodes per axis, got shape {values.shape}"
        )
    if not (spacing > 0.0 and math.isfinite(spacing)):
        raise InvalidParameterError(f"spacing must be positive and finite, got {spacing!r}")
    alpha, beta, gamma = _fluctuation_coefficients(point, beam)
    out = alpha * values
    if beta != 0.0:
        out = out + beta * _second_derivative(values, spacing, axis=0)
    if gamma != 0.0:
        out = out + gamma * _second_derivative(values, spacing, axis=1)
    return out


def apply_free_derivative(values: np.ndarray, spacing: float, beam: BeamParameters) -> np.ndarray:
    """Free-space paraxial z-derivative of a sampled forward-propagating field.

    In this package's phase convention a mode obeys
    dT/dz = (i / (2k)) (d1^2 + d2^2) T; use the conjugate for conjugated
    fields.
    """
    values = np.asarray(values)
    if values.ndim != 2 or min(values.shape) < 5:
        raise InvalidParameterError(
            f"need a 2-d field with at least 5 nodes per axis, got shape {values.shape}"
        )
    lap = _second_derivative(values, spacing, axis=0) + _second_derivative(values, spacing, axis=1)
    return (0.5j / beam.k) * lap


def coupling_integral_quadrature(
    n: int,
    s: int,
    point: MetricPoint,
    z: float,
    beam: BeamParameters,
    quad: TransverseQuadrature | None = None,
) -> complex:
    """Coupling integral between azimuthal modes n and s by grid quadrature.

    Projects the fluctuation derivative of the conjugated mode s onto mode n
    over the transverse plane at z.  Radial index zero only; the uniform grid
    is required because the transverse derivatives are finite differences.
    """
    geom = beam_geometry(beam, z)
    if quad is None:
        quad = TransverseQuadrature.uniform(geom.spot_size, extent=FD_QUAD_EXTENT, n=FD_QUAD_NODES)
    if quad.spacing is None:
        raise InvalidParameterError("coupling quadrature needs a uniform rule")
    xg, yg = quad.grid()
    field_n = evaluate_lg(ModeIndex(n, 0), xg, yg, z, beam)
    field_s_conj = np.conj(evaluate_lg(ModeIndex(s, 0), xg, yg, z, beam))
    deriv = apply_fluctuation_derivative(field_s_conj, quad.spacing, point, beam)
    return complex(quad.integrate(field_n * deriv))


def coupling_integral_generating(
    n: int,
    s: int,
    point: MetricPoint,
    z: float,
    beam: BeamParameters,
) -> complex:
    """Closed-form coupling integral from the mode generating function.

    The transverse Gaussian integral is done exactly in terms of the
    expansion variables, after which the mode pair (n, s) is read off as a
    bivariate series coefficient.  Radial index zero only.
    """
    an, asb = abs(int(n)), abs(int(s))
    sign_n = 1.0 if n >= 0 else -1.0
    sign_s = 1.0 if s >= 0 else -1.0

    w0 = beam.w0
    zeta = z / beam.rayleigh_range
    omega0 = 1.0 + 1j * zeta
    omega0c = np.conj(omega0)
    g_ket = 1.0 / (w0 * w0 * omega0)
    g_bra = 1.0 / (w0 * w0 * omega0c)
    g_sum = g_ket + g_bra  # equals 2 / w(z)^2

    alpha, beta, gamma = _fluctuation_coefficients(point, beam)

    # First-derivative symbols of the conjugated mode under the Gaussian
    # average, as linear forms in the two expansion variables (t1 for mode n,
    # t2 for the conjugated mode s).
    p1 = np.array([-g_bra, g_ket]) / g_sum
    p2 = -1j * np.array([sign_n * g_bra, sign_s * g_ket]) / g_sum

    shift = -2.0 * g_bra * g_ket / g_sum
    q = np.zeros((3, 3), dtype=complex)
    q[0, 0] = alpha + (beta + gamma) * shift
    q[2, 0] = beta * p1[0] ** 2 + gamma * p2[0] ** 2
    q[0, 2] = beta * p1[1] ** 2 + gamma * p2[1] ** 2
    q[1, 1] = 2.0 * (beta * p1[0] * p1[1] + gamma * p2[0] * p2[1])

    # The cross term of the completed square survives only when both vortex
    # factors wind the same way.
    pair = (1.0 / g_sum) if (n >= 0) == (s >= 0) else 0.0

    coeff = 0.0 + 0.0j
    for i in range(3):
        for j in range(3):
            if q[i, j] == 0.0:
                continue
            mi, mj = an - i, asb - j
            if mi < 0 or mj < 0 or mi != mj:
                continue
            coeff += q[i, j] * (pair**mi) / math.factorial(mi)

    norm_n = math.sqrt(2.0 / (math.pi * math.factorial(an)))
    norm_s = math.sqrt(2.0 / (math.pi * math.factorial(asb)))
    pref_n = norm_n * math.sqrt(2.0) ** an * (w0 * omega0) ** (-an) / w0
    pref_s = norm_s * math.sqrt(2.0) ** asb * (w0 * omega0c) ** (-asb) / w0
    gauss = math.pi / (g_sum * omega0 * omega0c)
    return complex(
        pref_n * pref_s * math.factorial(an) * math.factorial(asb) * gauss * coeff
    )


@dataclass(frozen=True)
class CouplingMatrix:
    """All coupling integrals between azimuthal modes -M..M at one plane."""

    max_azimuthal: int
    z: float
    point: MetricPoint
    entries: np.ndarray  # shape (2M+1, 2M+1), entries[i(n), i(s)]
    method: str

    def index(self, l: int) -> int:
        if abs(l) > self.max_azimuthal:
            raise InvalidParameterError(f"mode {l} outside +-{self.max_azimuthal}")
        return l + self.max_azimuthal

    def value(self, n: int, s: int) -> complex:
        return complex(self.entries[self.index(n), self.index(s)])

    @property
    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.entries)


def coupling_matrix(
    max_azimuthal: int,
    point: MetricPoint,
    z: float,
    beam: BeamParameters,
    method: str = "generating",
    quad: TransverseQuadrature | None = None,
) -> CouplingMatrix:
    """Assemble the full coupling matrix for azimuthal modes -M..M."""
    if max_azimuthal < 0:
        raise InvalidParameterError("max azimuthal index must be >= 0")
    size = 2 * max_azimuthal + 1
    entries = np.zeros((size, size), dtype=complex)
    modes = range(-max_azimuthal, max_azimuthal + 1)
    if method == "generating":
        for n in modes:
            for s in modes:
                entries[n + max_azimuthal, s + max_azimuthal] = coupling_integral_generating(
                    n, s, point, z, beam
                )
    elif method == "quadrature":
        geom = beam_geometry(beam, z)
        if quad is None:
            quad = TransverseQuadrature.uniform(
                geom.spot_size, extent=FD_QUAD_EXTENT, n=FD_QUAD_NODES
            )
        xg, yg = quad.grid()
        fields = {
            l: evaluate_lg(ModeIndex(l, 0), xg, yg, z, beam) for l in modes
        }
        for s in modes:
            deriv = apply_fluctuation_derivative(np.conj(fields[s]), quad.spacing, point, beam)
            for n in modes:
                entries[n + max_azimuthal, s + max_azimuthal] = quad.integrate(
                    fields[n] * deriv
                )
    else:
        raise InvalidParameterError(f"unknown coupling method {method!r}")
    return CouplingMatrix(
        max_azimuthal=max_azimuthal, z=z, point=point, entries=entries, method=method
    )


def diagonal_coupling(
    max_azimuthal: int, point: MetricPoint, z: float, beam: BeamParameters
) -> np.ndarray:
    """Diagonal coupling integrals for modes -M..M, closed form."""
    return np.array(
        [
            coupling_integral_generating(l, l, point, z, beam)
            for l in range(-max_azimuthal, max_azimuthal + 1)
        ]
    )


def evolution_generator(
    rho: np.ndarray,
    point_a: MetricPoint,
    point_b: MetricPoint,
    z: float,
    beam: BeamParameters,
    diagonal_only: bool = True,
) -> np.ndarray:
    """Right-hand side of the two-photon density-matrix equation of motion.

    ``rho`` is the four-index view, shape (D, D, D, D) with D = 2M + 1, axes
    ordered (l1, l2, j1, j2) and each axis running over -M..M.  The two
    photons travel separate paths, so each sees its own metric sample
    (``point_a`` for the first index pair, ``point_b`` for the second).

    Population elements have identically zero derivative: the large O(k)
    pieces of the couplings cancel between the conjugated and plain factors
    of each beam, so only index-dependent pieces survive.  With
    ``diagonal_only`` the mode-mixing entries of the coupling matrices are
    dropped, which is the weak-coupling default; the full contraction is kept
    for magnitude checks.
    """
    rho = np.asarray(rho)
    if rho.ndim != 4 or len(set(rho.shape)) != 1:
        raise InvalidParameterError(f"need a (D,D,D,D) array, got shape {rho.shape}")
    d = rho.shape[0]
    if d % 2 != 1:
        raise InvalidParameterError("axis length must be odd (modes -M..M)")
    m = (d - 1) // 2
    if diagonal_only:
        la = diagonal_coupling(m, point_a, z, beam)
        lb = diagonal_coupling(m, point_b, z, beam)
        rate = (
            np.conj(la)[:, None, None, None]
            + np.conj(lb)[None, :, None, None]
            + la[None, None, :, None]
            + lb[None, None, None, :]
        )
        return rate * rho
    la = coupling_matrix(m, point_a, z, beam, method="generating").entries
    lb = coupling_matrix(m, point_b, z, beam, method="generating").entries
    out = np.einsum("am,mbcd->abcd", np.conj(la), rho)
    out += np.einsum("bm,amcd->abcd", np.conj(lb), rho)
    out += np.einsum("cn,abnd->abcd", la, rho)
    out += np.einsum("dn,abcn->abcd", lb, rho)
    return out
