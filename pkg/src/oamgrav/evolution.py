"""Two-photon density-matrix evolution through the fluctuating metric.

Each photon of an entangled pair propagates along its own path and sees its
own metric sample; the joint state lives on azimuthal modes -M..M per photon.
Two evolution routes are implemented:

* an analytic route, in which every coherence decays exponentially with a
  rate set by the integer weight ((|l1|-|j1|)^2 + (|l2|-|j2|)^2) divided by a
  single characteristic length built from the beam and fluctuation
  parameters, and

* a stochastic route that draws explicit fluctuation realizations, integrates
  the equation of motion realization by realization with fixed-step RK4, and
  averages.

The stochastic route is the arbiter: it makes no assumption beyond the
first-order coupling, so any systematic gap between the two routes is a
statement about the analytic law, not something to be calibrated away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beam_optics import BeamParameters
from .coupling import MetricPoint, coupling_matrix, diagonal_coupling, evolution_generator
from .errors import (
    GridTooCoarseError,
    InsufficientSamplesError,
    InvalidParameterError,
    RegimeError,
)
from .fluctuation_field import (
    MAX_GRID_NODES,
    FluctuationParameters,
    covariance_factor,
    sample_many,
)

# Dense two-photon states get unwieldy beyond this many modes per photon.
MAX_AZIMUTHAL = 12


def characteristic_length(beam: BeamParameters, fluct: FluctuationParameters) -> float:
    """Length over which a unit-weight coherence decays by 1/e.

    Equals 2 k^2 w0^4 / (3 L A^2).  A vanishing amplitude gives no decay at
    any distance, reported as an infinite length.
    """
    if fluct.amplitude == 0.0:
        return math.inf
    return (
        2.0
        * beam.k**2
        * beam.w0**4
        / (3.0 * fluct.correlation_length * fluct.amplitude**2)
    )


def decay_weight(l1: int, l2: int, j1: int, j2: int) -> int:
    """Integer multiplier of x3/kappa in an element's decay exponent.

    Zero exactly for the safety islands |l1| = |j1|, |l2| = |j2|, which
    therefore never decay.
    """
    return (abs(l1) - abs(j1)) ** 2 + (abs(l2) - abs(j2)) ** 2


@dataclass(frozen=True)
class DecayModel:
    """Analytic decay law: factor exp(-weight * x3 / kappa) per element."""

    kappa: float

    def __post_init__(self) -> None:
        if not self.kappa > 0.0:
            raise InvalidParameterError(f"characteristic length must be positive, got {self.kappa!r}")

    @classmethod
    def from_parameters(
        cls, beam: BeamParameters, fluct: FluctuationParameters
    ) -> "DecayModel":
        return cls(kappa=characteristic_length(beam, fluct))

    @property
    def is_decay_free(self) -> bool:
        return math.isinf(self.kappa)

    def factor(self, l1: int, l2: int, j1: int, j2: int, x3: float) -> float:
        if x3 < 0.0:
            raise InvalidParameterError(f"distance must be >= 0, got {x3!r}")
        return math.exp(-decay_weight(l1, l2, j1, j2) * x3 / self.kappa)


def ensemble_decay_exponent(
    weight: float, x3: float, kappa: float, correlation_length: float
) -> float:
    """Exact ensemble-average decay exponent of the stochastic route.

    The accumulated phase of a coherence is Gaussian with variance
    (weight/kappa) * [sqrt(pi) x3 erf(x3/L) - L (1 - exp(-x3^2/L^2))], and the
    ensemble average decays by exp(-variance/2); this returns variance/2.

    The plain law exp(-weight * x3 / kappa) instead treats the kernel area
    integral(0..inf) exp(-u^2/L^2) du as L; its exact value is sqrt(pi) L / 2,
    so for x3 >> L the true ensemble rate is sqrt(pi)/2 of the plain one.
    """
    if x3 < 0.0:
        raise InvalidParameterError(f"distance must be >= 0, got {x3!r}")
    if math.isinf(kappa):
        return 0.0
    length = correlation_length
    bracket = math.sqrt(math.pi) * x3 * math.erf(x3 / length) - length * (
        1.0 - math.exp(-((x3 / length) ** 2))
    )
    return 0.5 * weight / kappa * bracket


class TwoPhotonDensityMatrix:
    """Dense two-photon state on azimuthal modes -M..M per photon.

    Rows and columns are indexed by the pair (l1, l2) through the fixed map
    row = (l1 + M) * D + (l2 + M) with D = 2M + 1.  Construction checks
    Hermiticity, unit trace and positive semidefiniteness so that downstream
    code can rely on having a physical state.
    """

    _HERM_TOL = 1e-12
    _TRACE_TOL = 1e-12
    _PSD_TOL = -1e-10

    def __init__(self, matrix: np.ndarray, max_azimuthal: int):
        if not (0 <= max_azimuthal <= MAX_AZIMUTHAL):
            raise InvalidParameterError(
                f"max azimuthal index must be in 0..{MAX_AZIMUTHAL}, got {max_azimuthal!r}"
            )
        d = 2 * max_azimuthal + 1
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (d * d, d * d):
            raise InvalidParameterError(
                f"matrix shape {matrix.shape} does not match modes -{max_azimuthal}..{max_azimuthal}"
            )
        herm = np.max(np.abs(matrix - matrix.conj().T))
        if herm > self._HERM_TOL:
            raise InvalidParameterError(f"matrix is not Hermitian: max deviation {herm:.3e}")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > self._TRACE_TOL:
            raise InvalidParameterError(f"trace must be 1, got {trace!r}")
        min_eig = float(np.linalg.eigvalsh(matrix)[0])
        if min_eig < self._PSD_TOL:
            raise InvalidParameterError(
                f"matrix is not positive semidefinite: min eigenvalue {min_eig:.3e}"
            )
        self.matrix = matrix
        self.max_azimuthal = int(max_azimuthal)

    @property
    def dimension(self) -> int:
        """Modes per photon."""
        return 2 * self.max_azimuthal + 1

    @property
    def four_index(self) -> np.ndarray:
        """(l1, l2, j1, j2) view of the matrix; indices offset by M."""
        d = self.dimension
        return self.matrix.reshape(d, d, d, d)

    def element(self, l1: int, l2: int, j1: int, j2: int) -> complex:
        m = self.max_azimuthal
        for name, l in (("l1", l1), ("l2", l2), ("j1", j1), ("j2", j2)):
            if abs(l) > m:
                raise InvalidParameterError(f"{name}={l} outside -{m}..{m}")
        return complex(self.four_index[l1 + m, l2 + m, j1 + m, j2 + m])

    @classmethod
    def from_four_index(cls, four: np.ndarray, max_azimuthal: int) -> "TwoPhotonDensityMatrix":
        d = 2 * max_azimuthal + 1
        four = np.asarray(four, dtype=complex)
        if four.shape != (d, d, d, d):
            raise InvalidParameterError(f"expected shape {(d, d, d, d)}, got {four.shape}")
        return cls(four.reshape(d * d, d * d), max_azimuthal)


def initial_maximally_entangled(max_azimuthal: int) -> TwoPhotonDensityMatrix:
    """Equal-weight superposition of the opposite-twist pairs |l, -l>.

    The state (1/sqrt(D)) sum_l |l, -l> has density matrix entries 1/D at
    (l, -l; j, -j) for every l, j and zero elsewhere.
    """
    if not (0 <= max_azimuthal <= MAX_AZIMUTHAL):
        raise InvalidParameterError(
            f"max azimuthal index must be in 0..{MAX_AZIMUTHAL}, got {max_azimuthal!r}"
        )
    m = max_azimuthal
    d = 2 * m + 1
    four = np.zeros((d, d, d, d), dtype=complex)
    for l in range(-m, m + 1):
        for j in range(-m, m + 1):
            four[l + m, -l + m, j + m, -j + m] = 1.0 / d
    return TwoPhotonDensityMatrix.from_four_index(four, m)


def _weight_array(max_azimuthal: int) -> np.ndarray:
    ls = np.abs(np.arange(-max_azimuthal, max_azimuthal + 1))
    d1 = (ls[:, None] - ls[None, :]) ** 2  # (|l| - |j|)^2 for one photon
    return d1[:, None, :, None] + d1[None, :, None, :]


def evolve_analytic(
    rho0: TwoPhotonDensityMatrix, x3: float, kappa: float
) -> TwoPhotonDensityMatrix:
    """Propagate a state the distance x3 with the analytic decay law."""
    if x3 < 0.0:
        raise InvalidParameterError(f"distance must be >= 0, got {x3!r}")
    if not kappa > 0.0:
        raise InvalidParameterError(f"characteristic length must be positive, got {kappa!r}")
    weights = _weight_array(rho0.max_azimuthal)
    four = rho0.four_index * np.exp(-weights * (x3 / kappa))
    return TwoPhotonDensityMatrix.from_four_index(four, rho0.max_azimuthal)


@dataclass(frozen=True)
class MonteCarloResult:
    """Ensemble statistics of the stochastic evolution at one distance."""

    x3: float
    n_realizations: int
    base_seed: int
    mean: np.ndarray  # (D^2, D^2) ensemble-average state
    stderr_real: np.ndarray  # (D^2, D^2) standard error of the real parts
    stderr_imag: np.ndarray
    max_azimuthal: int
    realizations: np.ndarray | None = None  # (n, D^2, D^2) if kept

    def _flat(self, arr: np.ndarray, l1: int, l2: int, j1: int, j2: int) -> complex:
        m = self.max_azimuthal
        d = 2 * m + 1
        return complex(arr[(l1 + m) * d + (l2 + m), (j1 + m) * d + (j2 + m)])

    def element_mean(self, l1: int, l2: int, j1: int, j2: int) -> complex:
        return self._flat(self.mean, l1, l2, j1, j2)

    def element_stderr(self, l1: int, l2: int, j1: int, j2: int) -> complex:
        return self._flat(self.stderr_real + 1j * self.stderr_imag, l1, l2, j1, j2)

    def mean_state(self) -> TwoPhotonDensityMatrix:
        """Validated density matrix of the ensemble mean."""
        return TwoPhotonDensityMatrix(self.mean, self.max_azimuthal)


def _rk4_diagonal(
    state: np.ndarray, diag_a: np.ndarray, diag_b: np.ndarray, step: float
) -> np.ndarray:
    """March the elementwise equation through one RK4 step of size ``step``.

    ``state`` has shape (n, D, D, D, D); ``diag_a``/``diag_b`` hold the
    diagonal couplings of each beam at the three stage nodes, shape (3, n, D).
    """

    def rate(i: int) -> np.ndarray:
        la = diag_a[i]
        lb = diag_b[i]
        return (
            np.conj(la)[:, :, None, None, None]
            + np.conj(lb)[:, None, :, None, None]
            + la[:, None, None, :, None]
            + lb[:, None, None, None, :]
        )

    r0, r1, r2 = rate(0), rate(1), rate(2)
    k1 = r0 * state
    k2 = r1 * (state + 0.5 * step * k1)
    k3 = r1 * (state + 0.5 * step * k2)
    k4 = r2 * (state + step * k3)
    return state + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rk4_full(
    state: np.ndarray, mats_a: np.ndarray, mats_b: np.ndarray, step: float
) -> np.ndarray:
    """Full-crosstalk RK4 step; coupling matrices shaped (3, n, D, D)."""

    def apply(i: int, rho: np.ndarray) -> np.ndarray:
        la = mats_a[i]
        lb = mats_b[i]
        out = np.einsum("ram,rmbcd->rabcd", np.conj(la), rho)
        out += np.einsum("rbm,ramcd->rabcd", np.conj(lb), rho)
        out += np.einsum("rcn,rabnd->rabcd", la, rho)
        out += np.einsum("rdn,rabcn->rabcd", lb, rho)
        return out

    k1 = apply(0, state)
    k2 = apply(1, state + 0.5 * step * k1)
    k3 = apply(1, state + 0.5 * step * k2)
    k4 = apply(2, state + step * k3)
    return state + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve_monte_carlo(
    rho0: TwoPhotonDensityMatrix,
    x3: float,
    beam: BeamParameters,
    fluct: FluctuationParameters,
    grid_spacing: float,
    n_realizations: int,
    base_seed: int,
    diagonal_only: bool = True,
    keep_realizations: bool = False,
) -> MonteCarloResult:
    """Average the stochastic evolution over explicit metric realizations.

    Each realization draws two independent trajectories (one per photon path)
    on a grid of the requested spacing, builds the coupling integrals along
    them, and integrates the equation of motion with fixed-step RK4, taking
    one step per pair of grid intervals so the midpoint stage lands on a
    sampled node.  Statistics are reported per matrix element with the
    standard error of the mean.

    The spacing must resolve both the correlation length (<= L/4) and the
    decay scale (<= kappa/100), and the distance must cover many correlation
    lengths for the ensemble statistics to be meaningful.
    """
    if x3 <= 0.0:
        raise InvalidParameterError(f"distance must be positive, got {x3!r}")
    if n_realizations < 100:
        raise InsufficientSamplesError(
            f"need at least 100 realizations for ensemble statistics, got {n_realizations}"
        )
    length = fluct.correlation_length
    kappa = characteristic_length(beam, fluct)
    if grid_spacing > length / 4.0 * (1.0 + 1e-12):
        raise GridTooCoarseError(
            f"grid spacing {grid_spacing!r} does not resolve the correlation length {length!r}"
        )
    if grid_spacing > kappa / 100.0 * (1.0 + 1e-12):
        raise RegimeError(
            f"grid spacing {grid_spacing!r} does not resolve the decay length {kappa!r}"
        )
    if x3 < 5.0 * length:
        raise RegimeError(
            f"distance {x3!r} must cover several correlation lengths ({length!r}) "
            "for the ensemble average to be meaningful"
        )

    # One RK4 step spans two grid intervals, so use an even interval count.
    n_half = max(2, math.ceil(x3 / grid_spacing))
    if n_half % 2 == 1:
        n_half += 1
    if n_half + 1 > MAX_GRID_NODES:
        raise RegimeError(
            f"{n_half + 1} grid nodes exceed the sampling cap {MAX_GRID_NODES}; "
            "increase the spacing or shorten the run"
        )
    nodes = np.linspace(0.0, x3, n_half + 1)
    spacing = nodes[1] - nodes[0]

    parent = np.random.default_rng(base_seed)
    child_a, child_b = parent.spawn(2)
    factor = covariance_factor(fluct, nodes) if fluct.amplitude > 0.0 else None
    h_a = sample_many(fluct, nodes, n_realizations, child_a, factor=factor)
    h_b = sample_many(fluct, nodes, n_realizations, child_b, factor=factor)

    m = rho0.max_azimuthal
    d = rho0.dimension

    # The couplings are linear in the metric components, so per-component
    # basis values at each node turn each realization into a cheap
    # contraction.  Using 0.5 and doubling keeps the probe inside the
    # weak-field validation and is exact in floating point.
    probes = [
        MetricPoint(*(0.5 if c == i else 0.0 for c in range(4))) for i in range(4)
    ]
    if diagonal_only:
        basis = np.empty((n_half + 1, 4, d), dtype=complex)
        for node_idx, z in enumerate(nodes):
            for comp, probe in enumerate(probes):
                basis[node_idx, comp] = 2.0 * diagonal_coupling(m, probe, z, beam)
        coup_a = np.einsum("rcn,ncd->rnd", h_a, basis)
        coup_b = np.einsum("rcn,ncd->rnd", h_b, basis)
    else:
        basis = np.empty((n_half + 1, 4, d, d), dtype=complex)
        for node_idx, z in enumerate(nodes):
            for comp, probe in enumerate(probes):
                basis[node_idx, comp] = (
                    2.0 * coupling_matrix(m, probe, z, beam, method="generating").entries
                )
        coup_a = np.einsum("rcn,ncij->rnij", h_a, basis)
        coup_b = np.einsum("rcn,ncij->rnij", h_b, basis)

    state = np.broadcast_to(
        rho0.four_index, (n_realizations, d, d, d, d)
    ).copy()
    step = 2.0 * spacing
    for i in range(0, n_half, 2):
        sl = slice(i, i + 3)
        if diagonal_only:
            state = _rk4_diagonal(state, coup_a[:, sl].transpose(1, 0, 2), coup_b[:, sl].transpose(1, 0, 2), step)
        else:
            state = _rk4_full(
                state,
                coup_a[:, sl].transpose(1, 0, 2, 3),
                coup_b[:, sl].transpose(1, 0, 2, 3),
                step,
            )

    flat = state.reshape(n_realizations, d * d, d * d)
    mean = flat.mean(axis=0)
    stderr_real = np.std(flat.real, axis=0, ddof=1) / math.sqrt(n_realizations)
    stderr_imag = np.std(flat.imag, axis=0, ddof=1) / math.sqrt(n_realizations)
    return MonteCarloResult(
        x3=x3,
        n_realizations=n_realizations,
        base_seed=base_seed,
        mean=mean,
        stderr_real=stderr_real,
        stderr_imag=stderr_imag,
        max_azimuthal=m,
        realizations=flat if keep_realizations else None,
    )


def monte_carlo_reference(
    rho0: TwoPhotonDensityMatrix,
    x3: float,
    beam: BeamParameters,
    fluct: FluctuationParameters,
    grid_spacing: float,
    seed: int,
    diagonal_only: bool = True,
) -> np.ndarray:
    """Single-realization evolution through the explicit generator.

    Slow path used to validate the vectorized integrator: rebuilds the
    right-hand side at every stage with :func:`evolution_generator` instead
    of precontracted couplings.  Returns the final (D^2, D^2) matrix for the
    realization drawn exactly like realization 0 of
    :func:`evolve_monte_carlo` with the same base seed.
    """
    length = fluct.correlation_length
    if grid_spacing > length / 4.0 * (1.0 + 1e-12):
        raise GridTooCoarseError(
            f"grid spacing {grid_spacing!r} does not resolve the correlation length {length!r}"
        )
    n_half = max(2, math.ceil(x3 / grid_spacing))
    if n_half % 2 == 1:
        n_half += 1
    nodes = np.linspace(0.0, x3, n_half + 1)
    parent = np.random.default_rng(seed)
    child_a, child_b = parent.spawn(2)
    factor = covariance_factor(fluct, nodes) if fluct.amplitude > 0.0 else None
    h_a = sample_many(fluct, nodes, 1, child_a, factor=factor)[0]
    h_b = sample_many(fluct, nodes, 1, child_b, factor=factor)[0]

    step = 2.0 * (nodes[1] - nodes[0])
    state = rho0.four_index.copy()
    for i in range(0, n_half, 2):
        pa = [MetricPoint.from_array(h_a[:, i + off]) for off in range(3)]
        pb = [MetricPoint.from_array(h_b[:, i + off]) for off in range(3)]
        zs = nodes[i : i + 3]

        def rhs(stage: int, rho: np.ndarray) -> np.ndarray:
            return evolution_generator(
                rho, pa[stage], pb[stage], zs[stage], beam, diagonal_only=diagonal_only
            )

        k1 = rhs(0, state)
        k2 = rhs(1, state + 0.5 * step * k1)
        k3 = rhs(1, state + 0.5 * step * k2)
        k4 = rhs(2, state + step * k3)
        state = state + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    d = rho0.dimension
    return state.reshape(d * d, d * d)
