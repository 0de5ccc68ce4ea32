"""Experiment configuration for the command-line front end.

One JSON file drives every subcommand.  Unknown keys are rejected rather
than ignored so that a typo cannot silently fall back to a default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .beam_optics import BeamParameters
from .coupling import MetricPoint
from .errors import InvalidParameterError
from .evolution import MAX_AZIMUTHAL
from .fluctuation_field import FluctuationParameters

_MAX_DIMENSION = 2 * MAX_AZIMUTHAL + 1


def _require_odd_dimension(value, label: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidParameterError(f"{label} must be an integer, got {value!r}")
    if value < 3 or value % 2 == 0 or value > _MAX_DIMENSION:
        raise InvalidParameterError(
            f"{label} must be an odd integer in 3..{_MAX_DIMENSION}, got {value!r}"
        )
    return value


@dataclass(frozen=True)
class SweepSection:
    """Propagation distances, in units of the characteristic length."""

    start: float = 0.0
    stop: float = 3.0
    count: int = 61

    def __post_init__(self) -> None:
        if self.start < 0.0:
            raise InvalidParameterError(f"sweep start must be >= 0, got {self.start!r}")
        if not self.stop > self.start:
            raise InvalidParameterError("sweep stop must exceed start")
        if self.count < 2:
            raise InvalidParameterError(f"sweep needs at least 2 points, got {self.count!r}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class MonteCarloSection:
    n_realizations: int = 2000
    grid_spacing: float | None = None  # physical units; None means L/8
    base_seed: int = 20260814
    dimension: int = 3
    checkpoints: tuple[float, ...] = (0.25, 0.5)  # kappa units
    # One decaying coherence and one safety island by default.
    elements: tuple[tuple[int, int, int, int], ...] = ((1, -1, 0, 0), (1, -1, 1, -1))

    def __post_init__(self) -> None:
        if self.n_realizations < 100:
            raise InvalidParameterError(
                f"need at least 100 realizations, got {self.n_realizations!r}"
            )
        if self.grid_spacing is not None and not self.grid_spacing > 0.0:
            raise InvalidParameterError(f"grid spacing must be positive, got {self.grid_spacing!r}")
        _require_odd_dimension(self.dimension, "monte_carlo.dimension")
        if not self.checkpoints:
            raise InvalidParameterError("need at least one checkpoint")
        for c in self.checkpoints:
            if not c > 0.0:
                raise InvalidParameterError(f"checkpoints must be positive, got {c!r}")
        m = (self.dimension - 1) // 2
        for el in self.elements:
            if len(el) != 4:
                raise InvalidParameterError(f"element {el!r} must have four indices")
            if any(abs(i) > m for i in el):
                raise InvalidParameterError(
                    f"element {el!r} is outside modes -{m}..{m} of dimension {self.dimension}"
                )


@dataclass(frozen=True)
class QuadratureSection:
    extent: float = 6.0
    nodes: int = 128

    def __post_init__(self) -> None:
        if not self.extent > 0.0:
            raise InvalidParameterError(f"quadrature extent must be positive, got {self.extent!r}")
        if self.nodes < 2:
            raise InvalidParameterError(f"need at least 2 quadrature nodes, got {self.nodes!r}")


@dataclass(frozen=True)
class ModesSection:
    l: int = 1
    p: int = 0
    z: float = 0.0
    grid_points: int = 81
    extent: float = 3.0  # half-width in spot sizes

    def __post_init__(self) -> None:
        if self.grid_points < 9:
            raise InvalidParameterError(f"need at least 9 grid points, got {self.grid_points!r}")
        if not self.extent > 0.0:
            raise InvalidParameterError(f"extent must be positive, got {self.extent!r}")


@dataclass(frozen=True)
class LsymbolsSection:
    h00: float = 2e-6
    h11: float = -1e-6
    h22: float = 3e-6
    h33: float = 1e-6
    z: float = 0.0
    max_azimuthal: int = 3
    method: str = "generating"

    def __post_init__(self) -> None:
        if self.max_azimuthal < 0:
            raise InvalidParameterError("max azimuthal index must be >= 0")
        if self.method not in ("generating", "quadrature"):
            raise InvalidParameterError(f"unknown coupling method {self.method!r}")

    def point(self) -> MetricPoint:
        return MetricPoint(self.h00, self.h11, self.h22, self.h33)


@dataclass(frozen=True)
class EvolveSection:
    x3: float = 1.0  # kappa units
    dimension: int = 7

    def __post_init__(self) -> None:
        if self.x3 < 0.0:
            raise InvalidParameterError(f"distance must be >= 0, got {self.x3!r}")
        _require_odd_dimension(self.dimension, "evolve.dimension")


@dataclass(frozen=True)
class ExperimentConfig:
    beam: BeamParameters = field(default_factory=lambda: BeamParameters(k=1732.0508075688772, w0=0.001))
    fluctuation: FluctuationParameters = field(
        default_factory=lambda: FluctuationParameters(amplitude=0.01, correlation_length=0.02)
    )
    dimensions: tuple[int, ...] = (3, 5, 7, 11, 19)
    sweep: SweepSection = field(default_factory=SweepSection)
    monte_carlo: MonteCarloSection = field(default_factory=MonteCarloSection)
    quadrature: QuadratureSection = field(default_factory=QuadratureSection)
    output_dir: str = "out"
    modes: ModesSection = field(default_factory=ModesSection)
    lsymbols: LsymbolsSection = field(default_factory=LsymbolsSection)
    evolve: EvolveSection = field(default_factory=EvolveSection)

    def __post_init__(self) -> None:
        if not self.dimensions:
            raise InvalidParameterError("need at least one dimension")
        for d in self.dimensions:
            _require_odd_dimension(d, "dimensions entry")
        if not self.output_dir:
            raise InvalidParameterError("output_dir must be non-empty")

    def to_dict(self) -> dict:
        return {
            "beam": {"k": self.beam.k, "w0": self.beam.w0},
            "fluctuation": {
                "amplitude": self.fluctuation.amplitude,
                "correlation_length": self.fluctuation.correlation_length,
            },
            "dimensions": list(self.dimensions),
            "x3_sweep": {
                "start": self.sweep.start,
                "stop": self.sweep.stop,
                "count": self.sweep.count,
            },
            "monte_carlo": {
                "n_realizations": self.monte_carlo.n_realizations,
                "grid_spacing": self.monte_carlo.grid_spacing,
                "base_seed": self.monte_carlo.base_seed,
                "dimension": self.monte_carlo.dimension,
                "checkpoints": list(self.monte_carlo.checkpoints),
                "elements": [list(el) for el in self.monte_carlo.elements],
            },
            "quadrature": {"extent": self.quadrature.extent, "nodes": self.quadrature.nodes},
            "output_dir": self.output_dir,
            "modes": {
                "l": self.modes.l,
                "p": self.modes.p,
                "z": self.modes.z,
                "grid_points": self.modes.grid_points,
                "extent": self.modes.extent,
            },
            "lsymbols": {
                "h00": self.lsymbols.h00,
                "h11": self.lsymbols.h11,
                "h22": self.lsymbols.h22,
                "h33": self.lsymbols.h33,
                "z": self.lsymbols.z,
                "max_azimuthal": self.lsymbols.max_azimuthal,
                "method": self.lsymbols.method,
            },
            "evolve": {"x3": self.evolve.x3, "dimension": self.evolve.dimension},
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def _section(raw: dict, name: str, allowed: tuple[str, ...]) -> dict:
    block = raw.get(name, {})
    if not isinstance(block, dict):
        raise InvalidParameterError(f"config section {name!r} must be an object")
    unknown = set(block) - set(allowed)
    if unknown:
        raise InvalidParameterError(
            f"unknown keys in config section {name!r}: {sorted(unknown)}"
        )
    return block


def config_from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise InvalidParameterError("config root must be a JSON object")
    allowed_top = (
        "beam",
        "fluctuation",
        "dimensions",
        "x3_sweep",
        "monte_carlo",
        "quadrature",
        "output_dir",
        "modes",
        "lsymbols",
        "evolve",
    )
    unknown = set(raw) - set(allowed_top)
    if unknown:
        raise InvalidParameterError(f"unknown top-level config keys: {sorted(unknown)}")

    defaults = ExperimentConfig()

    beam_raw = _section(raw, "beam", ("k", "w0"))
    beam = BeamParameters(
        k=float(beam_raw.get("k", defaults.beam.k)),
        w0=float(beam_raw.get("w0", defaults.beam.w0)),
    )
    fluct_raw = _section(raw, "fluctuation", ("amplitude", "correlation_length"))
    fluct = FluctuationParameters(
        amplitude=float(fluct_raw.get("amplitude", defaults.fluctuation.amplitude)),
        correlation_length=float(
            fluct_raw.get("correlation_length", defaults.fluctuation.correlation_length)
        ),
    )
    dims = raw.get("dimensions", list(defaults.dimensions))
    if not isinstance(dims, (list, tuple)):
        raise InvalidParameterError("dimensions must be a list")

    sweep_raw = _section(raw, "x3_sweep", ("start", "stop", "count"))
    sweep = SweepSection(
        start=float(sweep_raw.get("start", defaults.sweep.start)),
        stop=float(sweep_raw.get("stop", defaults.sweep.stop)),
        count=int(sweep_raw.get("count", defaults.sweep.count)),
    )
    mc_raw = _section(
        raw,
        "monte_carlo",
        ("n_realizations", "grid_spacing", "base_seed", "dimension", "checkpoints", "elements"),
    )
    spacing = mc_raw.get("grid_spacing", defaults.monte_carlo.grid_spacing)
    mc = MonteCarloSection(
        n_realizations=int(mc_raw.get("n_realizations", defaults.monte_carlo.n_realizations)),
        grid_spacing=None if spacing is None else float(spacing),
        base_seed=int(mc_raw.get("base_seed", defaults.monte_carlo.base_seed)),
        dimension=int(mc_raw.get("dimension", defaults.monte_carlo.dimension)),
        checkpoints=tuple(
            float(c) for c in mc_raw.get("checkpoints", defaults.monte_carlo.checkpoints)
        ),
        elements=tuple(
            tuple(int(i) for i in el)
            for el in mc_raw.get("elements", defaults.monte_carlo.elements)
        ),
    )
    quad_raw = _section(raw, "quadrature", ("extent", "nodes"))
    quad = QuadratureSection(
        extent=float(quad_raw.get("extent", defaults.quadrature.extent)),
        nodes=int(quad_raw.get("nodes", defaults.quadrature.nodes)),
    )
    modes_raw = _section(raw, "modes", ("l", "p", "z", "grid_points", "extent"))
    modes = ModesSection(
        l=int(modes_raw.get("l", defaults.modes.l)),
        p=int(modes_raw.get("p", defaults.modes.p)),
        z=float(modes_raw.get("z", defaults.modes.z)),
        grid_points=int(modes_raw.get("grid_points", defaults.modes.grid_points)),
        extent=float(modes_raw.get("extent", defaults.modes.extent)),
    )
    lsym_raw = _section(
        raw, "lsymbols", ("h00", "h11", "h22", "h33", "z", "max_azimuthal", "method")
    )
    lsym = LsymbolsSection(
        h00=float(lsym_raw.get("h00", defaults.lsymbols.h00)),
        h11=float(lsym_raw.get("h11", defaults.lsymbols.h11)),
        h22=float(lsym_raw.get("h22", defaults.lsymbols.h22)),
        h33=float(lsym_raw.get("h33", defaults.lsymbols.h33)),
        z=float(lsym_raw.get("z", defaults.lsymbols.z)),
        max_azimuthal=int(lsym_raw.get("max_azimuthal", defaults.lsymbols.max_azimuthal)),
        method=str(lsym_raw.get("method", defaults.lsymbols.method)),
    )
    evolve_raw = _section(raw, "evolve", ("x3", "dimension"))
    evolve = EvolveSection(
        x3=float(evolve_raw.get("x3", defaults.evolve.x3)),
        dimension=int(evolve_raw.get("dimension", defaults.evolve.dimension)),
    )
    return ExperimentConfig(
        beam=beam,
        fluctuation=fluct,
        dimensions=tuple(int(d) for d in dims),
        sweep=sweep,
        monte_carlo=mc,
        quadrature=quad,
        output_dir=str(raw.get("output_dir", defaults.output_dir)),
        modes=modes,
        lsymbols=lsym,
        evolve=evolve,
    )


def load_config(path: str) -> ExperimentConfig:
    """Read and validate a JSON experiment configuration."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidParameterError(f"config file {path!r} is not valid JSON: {exc}") from exc
    except OSError as exc:
        raise InvalidParameterError(f"cannot read config file {path!r}: {exc}") from exc
    return config_from_dict(raw)
