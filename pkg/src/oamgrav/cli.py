"""Command-line front end.

Every subcommand reads one JSON configuration file, writes CSV files into an
output directory, and reports what it wrote on stdout.  Outputs are
deterministic for a given configuration and seed: rows are emitted in a fixed
order, floats with shortest round-trip formatting, and each file starts with
comment lines recording the package version, the command, the effective
configuration and the seed.

Exit codes: 0 on success, 1 for usage or configuration problems, 2 when the
numerics are outside their validated regime, and 3 when a cross-check between
the stochastic ensemble and the closed-form law fails.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

import numpy as np

from . import __version__
from .beam_optics import ModeIndex, beam_geometry, evaluate_lg
from .config import ExperimentConfig, load_config
from .coupling import coupling_matrix
from .entanglement_metrics import (
    decay_distance,
    metrics_report,
    negativity_blockwise,
    purity_blockwise,
)
from .errors import (
    ConvergenceError,
    GridTooCoarseError,
    InsufficientSamplesError,
    InvalidParameterError,
    NoRootError,
    OamgravError,
    OracleMismatchError,
    OrderCapError,
    QuadratureError,
    RegimeError,
    SingularOmegaError,
)
from .evolution import (
    characteristic_length,
    decay_weight,
    ensemble_decay_exponent,
    evolve_analytic,
    evolve_monte_carlo,
    initial_maximally_entangled,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_ORACLE = 3

FIGURES = ("purity", "negativity", "density_matrix", "decay_table")

# Statistical checks ignore discrepancies below this absolute size: elements
# that evolve only through roundoff (safety islands, zero amplitude) would
# otherwise compare noise against a zero standard error.
_ABS_STAT_FLOOR = 1e-12


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_csv(path: str, header: list[str], columns: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
    print(f"wrote {path}")


def _header(command: str, cfg: ExperimentConfig, seed: int | None) -> list[str]:
    lines = [
        f"oamgrav {__version__}",
        f"command: {command}",
        f"config: {cfg.canonical_json()}",
    ]
    if seed is not None:
        lines.append(f"seed: {seed}")
    return lines


def _finite_kappa(cfg: ExperimentConfig) -> float:
    kappa = characteristic_length(cfg.beam, cfg.fluctuation)
    if math.isinf(kappa):
        raise RegimeError(
            "zero fluctuation amplitude gives an infinite characteristic length; "
            "distances in units of it are undefined for this command"
        )
    return kappa


def cmd_modes(cfg: ExperimentConfig, out_dir: str) -> int:
    """Sample one mode on a transverse grid and dump field values."""
    sec = cfg.modes
    mode = ModeIndex(sec.l, sec.p)
    geom = beam_geometry(cfg.beam, sec.z)
    half = sec.extent * geom.spot_size
    axis = np.linspace(-half, half, sec.grid_points)
    rows = []
    for x in axis:
        values = evaluate_lg(mode, np.full_like(axis, x), axis, sec.z, cfg.beam)
        for y, v in zip(axis, values):
            rows.append(
                (
                    _fmt(x),
                    _fmt(y),
                    _fmt(v.real),
                    _fmt(v.imag),
                    _fmt(abs(v) ** 2),
                    _fmt(np.angle(v)),
                )
            )
    path = os.path.join(out_dir, f"modes_l{sec.l}_p{sec.p}.csv")
    _write_csv(
        path,
        _header("modes", cfg, None),
        ["x", "y", "re", "im", "abs2", "phase"],
        rows,
    )
    return EXIT_OK


def cmd_lsymbols(cfg: ExperimentConfig, out_dir: str) -> int:
    """Dump the coupling matrix for the configured metric point."""
    sec = cfg.lsymbols
    mat = coupling_matrix(sec.max_azimuthal, sec.point(), sec.z, cfg.beam, method=sec.method)
    rows = []
    span = range(-sec.max_azimuthal, sec.max_azimuthal + 1)
    for n in span:
        for s in span:
            v = mat.value(n, s)
            rows.append((str(n), str(s), _fmt(v.real), _fmt(v.imag)))
    path = os.path.join(out_dir, "lsymbols.csv")
    _write_csv(path, _header("lsymbols", cfg, None), ["n", "s", "re", "im"], rows)
    return EXIT_OK


def _density_rows(state) -> list[tuple[str, ...]]:
    m = state.max_azimuthal
    four = state.four_index
    rows = []
    span = range(-m, m + 1)
    for l1 in span:
        for l2 in span:
            for j1 in span:
                for j2 in span:
                    v = four[l1 + m, l2 + m, j1 + m, j2 + m]
                    if v == 0.0:
                        continue
                    rows.append(
                        (str(l1), str(l2), str(j1), str(j2), _fmt(v.real), _fmt(v.imag))
                    )
    return rows


def cmd_evolve(cfg: ExperimentConfig, out_dir: str) -> int:
    """Evolve the maximally entangled state analytically and dump it."""
    kappa = _finite_kappa(cfg)
    d = cfg.evolve.dimension
    m = (d - 1) // 2
    state = evolve_analytic(initial_maximally_entangled(m), cfg.evolve.x3 * kappa, kappa)
    path = os.path.join(out_dir, f"evolved_D{d}.csv")
    _write_csv(
        path,
        _header("evolve", cfg, None),
        ["l1", "l2", "j1", "j2", "re", "im"],
        _density_rows(state),
    )
    return EXIT_OK


def cmd_metrics(cfg: ExperimentConfig, out_dir: str) -> int:
    """Purity and negativity along the distance sweep, per dimension.

    The reported negativity comes from the package's own eigensolver on the
    partial transpose, not from the closed form, so this command exercises
    the full numerical path.
    """
    kappa = _finite_kappa(cfg)
    rows = []
    for d in cfg.dimensions:
        m = (d - 1) // 2
        rho0 = initial_maximally_entangled(m)
        for x in cfg.sweep.values():
            state = evolve_analytic(rho0, float(x) * kappa, kappa)
            rep = metrics_report(state, float(x))
            rows.append((_fmt(x), str(d), _fmt(rep.purity), _fmt(rep.negativity)))
    path = os.path.join(out_dir, "metrics.csv")
    _write_csv(
        path,
        _header("metrics", cfg, None),
        ["x3_over_kappa", "D", "purity", "negativity"],
        rows,
    )
    return EXIT_OK


def _decay_rows(cfg: ExperimentConfig) -> list[tuple[str, str]]:
    rows = []
    for d in cfg.dimensions:
        m = (d - 1) // 2
        rows.append((str(d), _fmt(decay_distance(m, 1.0))))
    return rows


def cmd_reproduce(cfg: ExperimentConfig, out_dir: str, figure: str) -> int:
    """Write the data behind one of the headline figures.

    The curves are universal functions of distance over the characteristic
    length, so they are emitted in those units and need no beam parameters.
    """
    header = _header(f"reproduce --figure {figure}", cfg, None)
    if figure == "purity":
        for d in cfg.dimensions:
            m = (d - 1) // 2
            rows = [
                (_fmt(x), _fmt(purity_blockwise(float(x), m, 1.0)))
                for x in cfg.sweep.values()
            ]
            _write_csv(
                os.path.join(out_dir, f"purity_D{d}.csv"),
                header,
                ["x3_over_kappa", "purity"],
                rows,
            )
    elif figure == "negativity":
        for d in cfg.dimensions:
            m = (d - 1) // 2
            rows = [
                (_fmt(x), _fmt(negativity_blockwise(float(x), m, 1.0)))
                for x in cfg.sweep.values()
            ]
            _write_csv(
                os.path.join(out_dir, f"negativity_D{d}.csv"),
                header,
                ["x3_over_kappa", "negativity"],
                rows,
            )
    elif figure == "density_matrix":
        # Seven modes per photon, shown at the distance where the negativity
        # has fallen to 1/e of its initial value.
        x_star = decay_distance(3, 1.0)
        state = evolve_analytic(initial_maximally_entangled(3), x_star, 1.0)
        _write_csv(
            os.path.join(out_dir, "density_matrix_D7.csv"),
            header + [f"x3_over_kappa: {_fmt(x_star)}"],
            ["l1", "l2", "j1", "j2", "re", "im"],
            _density_rows(state),
        )
    elif figure == "decay_table":
        _write_csv(
            os.path.join(out_dir, "decay_table.csv"),
            header,
            ["D", "x3_over_kappa"],
            _decay_rows(cfg),
        )
    else:
        raise InvalidParameterError(f"unknown figure {figure!r}")
    return EXIT_OK


def cmd_decay_distance(cfg: ExperimentConfig, out_dir: str) -> int:
    """1/e distances of the negativity for every configured dimension."""
    _write_csv(
        os.path.join(out_dir, "decay_distance.csv"),
        _header("decay-distance", cfg, None),
        ["D", "x3_over_kappa"],
        _decay_rows(cfg),
    )
    return EXIT_OK


def cmd_montecarlo(cfg: ExperimentConfig, out_dir: str, seed: int | None) -> int:
    """Run the stochastic ensemble and compare it to the closed-form law.

    Tracked elements are compared at every checkpoint; a discrepancy beyond
    three standard errors of the ensemble mean is reported and reflected in
    the exit code.  The exact ensemble expectation of the sampled process is
    written alongside for diagnosis.  With zero fluctuation amplitude there
    is no decay scale, and the checkpoints are read as plain distances
    instead of multiples of the characteristic length.
    """
    mc = cfg.monte_carlo
    base_seed = mc.base_seed if seed is None else seed
    kappa = characteristic_length(cfg.beam, cfg.fluctuation)
    length = cfg.fluctuation.correlation_length
    spacing = mc.grid_spacing if mc.grid_spacing is not None else length / 8.0
    m = (mc.dimension - 1) // 2
    rho0 = initial_maximally_entangled(m)

    rows = []
    failures = []
    for idx, checkpoint in enumerate(mc.checkpoints):
        x3 = checkpoint * kappa if math.isfinite(kappa) else checkpoint
        x_over_kappa = checkpoint if math.isfinite(kappa) else 0.0
        result = evolve_monte_carlo(
            rho0,
            x3,
            cfg.beam,
            cfg.fluctuation,
            spacing,
            mc.n_realizations,
            base_seed + idx,
        )
        for el in mc.elements:
            l1, l2, j1, j2 = el
            base = rho0.element(l1, l2, j1, j2)
            weight = decay_weight(l1, l2, j1, j2)
            analytic = base * math.exp(-weight * x_over_kappa)
            exact = base * math.exp(
                -ensemble_decay_exponent(weight, x3, kappa, length)
            )
            mean = result.element_mean(l1, l2, j1, j2)
            err = result.element_stderr(l1, l2, j1, j2)
            rows.append(
                (
                    _fmt(checkpoint),
                    str(l1),
                    str(l2),
                    str(j1),
                    str(j2),
                    _fmt(mean.real),
                    _fmt(mean.imag),
                    _fmt(err.real),
                    _fmt(err.imag),
                    _fmt(analytic.real),
                    _fmt(exact.real),
                )
            )
            gap = abs(mean.real - analytic.real)
            allowed = 3.0 * err.real + _ABS_STAT_FLOOR
            if gap > allowed:
                sigma = gap / err.real if err.real > 0.0 else math.inf
                failures.append(
                    f"element ({l1},{l2};{j1},{j2}) at {checkpoint} kappa: "
                    f"mean {mean.real:.6f} vs law {analytic.real:.6f} "
                    f"({sigma:.1f} standard errors)"
                )
    path = os.path.join(out_dir, "montecarlo.csv")
    _write_csv(
        path,
        _header("montecarlo", cfg, base_seed),
        [
            "x3_over_kappa",
            "l1",
            "l2",
            "j1",
            "j2",
            "mean_re",
            "mean_im",
            "stderr_re",
            "stderr_im",
            "analytic_re",
            "exact_re",
        ],
        rows,
    )
    if failures:
        print(
            "stochastic ensemble disagrees with the closed-form decay law:",
            file=sys.stderr,
        )
        for line in failures:
            print(f"  {line}", file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="oamgrav",
        description="OAM photon decoherence in a stochastically fluctuating metric",
    )
    parser.add_argument("--version", action="version", version=f"oamgrav {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, figure: bool = False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the JSON configuration")
        p.add_argument("--out", default=None, help="output directory (default from config)")
        p.add_argument("--seed", type=int, default=None, help="override the ensemble base seed")
        if figure:
            p.add_argument(
                "--figure", required=True, choices=FIGURES, help="which data set to write"
            )
        return p

    add("modes", "sample one beam mode on a transverse grid")
    add("lsymbols", "dump the mode-coupling matrix at one metric point")
    add("evolve", "analytic evolution of the maximally entangled state")
    add("metrics", "purity and negativity along the distance sweep")
    add("reproduce", "write the data behind a headline figure", figure=True)
    add("montecarlo", "stochastic ensemble versus the closed-form law")
    add("decay-distance", "1/e distances of the negativity")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        out_dir = args.out if args.out is not None else cfg.output_dir
        os.makedirs(out_dir, exist_ok=True)
        if args.command == "modes":
            return cmd_modes(cfg, out_dir)
        if args.command == "lsymbols":
            return cmd_lsymbols(cfg, out_dir)
        if args.command == "evolve":
            return cmd_evolve(cfg, out_dir)
        if args.command == "metrics":
            return cmd_metrics(cfg, out_dir)
        if args.command == "reproduce":
            return cmd_reproduce(cfg, out_dir, args.figure)
        if args.command == "montecarlo":
            return cmd_montecarlo(cfg, out_dir, args.seed)
        if args.command == "decay-distance":
            return cmd_decay_distance(cfg, out_dir)
        parser.error(f"unknown command {args.command!r}")
    except OracleMismatchError as exc:
        print(f"oamgrav: oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (
        OrderCapError,
        GridTooCoarseError,
        RegimeError,
        InsufficientSamplesError,
        SingularOmegaError,
        QuadratureError,
        ConvergenceError,
        NoRootError,
    ) as exc:
        print(f"oamgrav: numerical regime error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OamgravError, ValueError, OSError) as exc:
        print(f"oamgrav: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
