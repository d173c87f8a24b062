"""Command-line frontend.

Subcommands: flip, decompose, capacities, herald, verify, nogo.
Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 verification
failure. All randomised commands take --seed (default 0xF11F); identical
configurations produce byte-identical CSV/JSON output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import capacity, channels, figures, flip, nogo, qmat, verify

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_VERIFY = 3

DEFAULT_SEED = capacity.DEFAULT_SEED

FAMILIES = ("depolarising", "dephasing_y", "projection", "random_bistochastic")


class ConfigError(Exception):
    """Invalid configuration; the message names the offending field."""


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    q: float | None = None
    p: float | None = None
    d: int = 2
    theta: float = 0.0
    m: int = 0
    n: int = 1
    r: int = 2
    channel_json: str | None = None
    state_json: str | None = None
    grid: list[float] = field(default_factory=list)
    out: str | None = None
    seed: int = DEFAULT_SEED
    grid_size: int = capacity.DEFAULT_ENVELOPE_GRID
    fmt: str = "csv"
    no_plot: bool = False
    plot_out: str | None = None
    restarts: int = 8
    tolerances: dict[str, float] = field(default_factory=dict)


def parse_grid(spec: str) -> list[float]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid: expected start:stop:step, got {spec!r}")
    try:
        start, stop, step = (float(x) for x in parts)
    except ValueError as exc:
        raise ConfigError(f"grid: non-numeric component in {spec!r}") from exc
    if step <= 0:
        raise ConfigError("grid: step must be positive")
    count = int(round((stop - start) / step))
    grid = [round(start + i * step, 12) for i in range(count + 1)]
    grid = [g for g in grid if g <= stop + step * 1e-9]
    if not grid or stop < start:
        raise ConfigError("grid: empty parameter grid")
    return grid


def _parse_tolerances(items) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"tolerance: expected NAME=VALUE, got {item!r}")
        name, _, value = item.partition("=")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise ConfigError(f"tolerance: non-numeric value in {item!r}") from exc
    return out


def resolve_channel(cfg: RunConfig) -> channels.KrausChannel:
    """Build the working channel from a JSON file or a named family."""
    if cfg.channel_json:
        try:
            return channels.load_channel(cfg.channel_json)
        except OSError as exc:
            raise IOError(f"cannot read channel file: {exc}") from exc
        except (channels.ChannelValidationError, ValueError, KeyError) as exc:
            raise ConfigError(f"channel-json: {exc}") from exc
    if cfg.family is None:
        raise ConfigError("family: required when no --channel-json is given")
    if cfg.family not in FAMILIES:
        raise ConfigError(f"family: unknown family {cfg.family!r}")
    try:
        if cfg.family == "depolarising":
            if cfg.q is None:
                raise ConfigError("q: required for the depolarising family")
            return channels.depolarising(cfg.q, cfg.d)
        if cfg.family == "dephasing_y":
            if cfg.p is None:
                raise ConfigError("p: required for the dephasing_y family")
            return channels.dephasing_y(cfg.p)
        if cfg.family == "projection":
            return channels.projection_channel(cfg.theta, cfg.m, cfg.n, cfg.d)
        return channels.random_bistochastic(cfg.d, cfg.r, cfg.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_state(cfg: RunConfig, d: int) -> np.ndarray:
    if cfg.state_json is None:
        return qmat.identity(d) / d
    try:
        with open(cfg.state_json, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IOError(f"cannot read state file: {exc}") from exc
    try:
        rho = qmat.complex_matrix_from_json(data["matrix"], (d, d))
        return qmat.check_density_matrix(rho)
    except (KeyError, ValueError, qmat.StateValidationError) as exc:
        raise ConfigError(f"state-json: {exc}") from exc


def _dump_json(obj, cfg: RunConfig) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    _write_text(text, cfg.out)


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOError(f"cannot write {out}: {exc}") from exc


def _matrix_json(m) -> dict:
    a = np.asarray(m)
    return {"rows": a.shape[0], "cols": a.shape[1],
            "matrix": qmat.complex_matrix_to_json(a)}


def _herald_table(ch, rho) -> list[dict]:
    table = []
    for outcome in flip.heralded_transmit(ch, rho):
        table.append({
            "outcome": outcome.outcome,
            "probability": outcome.probability,
            "noiseless": outcome.noiseless,
            "conditional_state": _matrix_json(outcome.conditional_state),
        })
    return table


def cmd_flip(cfg: RunConfig) -> int:
    ch = resolve_channel(cfg)
    try:
        joint = flip.time_flip_kraus(ch)
    except channels.ChannelValidationError as exc:
        raise ConfigError(str(exc)) from exc
    choi = channels.choi_of_channel(joint)
    doc = {
        "dim": ch.dim_in,
        "joint_choi": _matrix_json(choi.op),
        "transposition_invariant": channels.is_transposition_invariant(ch),
        "branches": None,
        "herald": None,
    }
    if doc["transposition_invariant"]:
        lrc = flip.canonical_effective(ch)
        doc["branches"] = [
            {"label": label, "weight": p,
             "kraus": [qmat.complex_matrix_to_json(k) for k in branch.kraus]}
            for p, branch, label in lrc.branches
        ]
        doc["herald"] = _herald_table(ch, load_state(cfg, ch.dim_in))
    _dump_json(doc, cfg)
    return EXIT_OK


def cmd_decompose(cfg: RunConfig) -> int:
    ch = resolve_channel(cfg)
    try:
        deco = flip.sym_antisym_decomposition(ch)
    except channels.ChannelValidationError as exc:
        raise ConfigError(str(exc)) from exc
    doc = {
        "dim": deco.dim,
        "sym": [qmat.complex_matrix_to_json(k) for k in deco.sym],
        "antisym": [qmat.complex_matrix_to_json(k) for k in deco.antisym],
        "sym_weight": deco.sym_weight,
        "antisym_weight": deco.antisym_weight,
        "reconstruction_choi_distance": channels.choi_distance(deco.reconstruct(), ch),
    }
    _dump_json(doc, cfg)
    return EXIT_OK


def cmd_herald(cfg: RunConfig) -> int:
    ch = resolve_channel(cfg)
    try:
        table = _herald_table(ch, load_state(cfg, ch.dim_in))
    except channels.ChannelValidationError as exc:
        raise ConfigError(str(exc)) from exc
    _dump_json({"dim": ch.dim_in, "herald": table}, cfg)
    return EXIT_OK


def cmd_capacities(cfg: RunConfig) -> int:
    if cfg.family in (None, "depolarising"):
        family, quantities = "depolarising", ["C", "C_flipped", "smith_smolin", "Ic_flipped"]
    elif cfg.family in ("dephasing", "dephasing_y"):
        family, quantities = "dephasing", ["Q", "Q_flipped"]
    else:
        raise ConfigError(f"family: no capacity sweep for {cfg.family!r}")
    if not cfg.grid:
        raise ConfigError("grid: required for the capacities command")
    try:
        curve = capacity.curve_sweep(family, quantities, cfg.grid, d=cfg.d,
                                     grid_size=cfg.grid_size)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.fmt == "json":
        doc = {
            "family": family,
            "d": cfg.d,
            "parameter": curve.parameter_name,
            "formulas": curve.formulas,
            "comparison_constants": {
                "superposed_paths_classical_capacity": capacity.SUPERPOSED_PATHS_CAPACITY,
                "superposed_orders_classical_capacity": capacity.SUPERPOSED_ORDERS_CAPACITY,
            },
            "points": [
                {"parameter": p, "quantity": qid, "value": v}
                for p, v, qid in curve.points
            ],
        }
        _dump_json(doc, cfg)
    else:
        _write_text("\n".join(capacity.curve_csv_lines(curve)) + "\n", cfg.out)
    if cfg.out and not cfg.no_plot:
        plot_path = cfg.plot_out or os.path.splitext(cfg.out)[0] + ".png"
        try:
            figures.render_curve(curve, plot_path)
        except OSError as exc:
            raise IOError(f"cannot write figure {plot_path}: {exc}") from exc
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    results = verify.run_all_checks(seed=cfg.seed, restarts=cfg.restarts,
                                    tolerances=cfg.tolerances)
    report = verify.report_dict(results, cfg.seed)
    _dump_json(report, cfg)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def cmd_nogo(cfg: RunConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    d = cfg.d
    worst = 0.0
    for _ in range(50):
        m = int(rng.integers(0, d))
        n = int(rng.integers(0, d - 1))
        n = n if n != m else d - 1
        ch = channels.projection_channel(rng.uniform(0, np.pi), m, n, d)
        worst = max(worst, nogo.sym_chan_flip_identity(
            ch, qmat.random_density_matrix(2, rng)))
    sigma = qmat.random_density_matrix(2, rng)
    reports = [
        nogo.fixed_output_check(channels.constant_channel(sigma, d),
                                qmat.random_density_matrix(d, rng), d,
                                description="constant decoder"),
        nogo.fixed_output_check(channels.identity_channel(d),
                                qmat.identity(d) / d, d,
                                description="identity decoder, maximally mixed"),
    ]
    omega = qmat.projector(qmat.KET_PLUS)

    def constant_supermap(ch):
        post = channels.trace_out_channel((ch.dim_in, 2), keep=0).then(
            channels.depolarising(1.0, ch.dim_in))
        return flip.flipped_channel(ch, omega).then(post)

    scan = nogo.side_channel_scan(constant_supermap, samples=10, seed=cfg.seed, d=d)
    doc = {
        "sym_chan_max_distance": worst,
        "sym_chan_tolerance": 1e-9,
        "fixed_output": [r.to_dict() for r in reports],
        "side_channel_scan": scan.to_dict(),
    }
    _dump_json(doc, cfg)
    ok = (worst <= 1e-9 and all(r.verdict == "pass" for r in reports)
          and scan.verdict == "pass")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timeflip",
        description="Quantum communication through channels used in an "
                    "indefinite input-output direction.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, grid=False):
        p.add_argument("--family", choices=FAMILIES,
                       help="named channel family")
        p.add_argument("--q", type=float, help="depolarisation probability")
        p.add_argument("--p", type=float, help="dephasing probability")
        p.add_argument("--d", type=int, default=2, help="target dimension")
        p.add_argument("--theta", type=float, default=0.0,
                       help="projection channel angle (radians)")
        p.add_argument("--m", type=int, default=0, help="projection index m")
        p.add_argument("--n", type=int, default=1, help="projection index n")
        p.add_argument("--r", type=int, default=2,
                       help="unitary count for random_bistochastic")
        p.add_argument("--channel-json", help="path to a channel JSON file")
        p.add_argument("--state-json", help="input state as {'matrix': [[re,im],...]}")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED,
                       help="PRNG seed (default 0xF11F)")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"),
                       default="csv", help="capacities output format")
        if grid:
            p.add_argument("--grid", help="parameter grid start:stop:step")
            p.add_argument("--grid-size", type=int,
                           default=capacity.DEFAULT_ENVELOPE_GRID,
                           help="envelope sampling density")

    for name in ("flip", "decompose", "herald"):
        add_common(sub.add_parser(name, help=f"{name} a channel"))
    cap = sub.add_parser("capacities", help="sweep capacity quantities over a grid")
    add_common(cap, grid=True)
    cap.add_argument("--no-plot", action="store_true",
                     help="skip the figure next to the CSV")
    cap.add_argument("--plot-out", help="explicit figure path")
    ver = sub.add_parser("verify", help="run the acceptance checks")
    add_common(ver)
    ver.add_argument("--restarts", type=int, default=8,
                     help="restarts for the brute-force Holevo oracle")
    ver.add_argument("--tolerance", action="append", metavar="NAME=VALUE",
                     help="override a named check tolerance (repeatable)")
    ng = sub.add_parser("nogo", help="run the no-side-channel harness")
    add_common(ng)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("family", "q", "p", "d", "theta", "m", "n", "r",
                 "channel_json", "state_json", "out", "seed", "fmt"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "grid", None):
        cfg.grid = parse_grid(args.grid)
    if hasattr(args, "grid_size"):
        cfg.grid_size = args.grid_size
    if getattr(args, "no_plot", False):
        cfg.no_plot = True
    if getattr(args, "plot_out", None):
        cfg.plot_out = args.plot_out
    if hasattr(args, "restarts"):
        cfg.restarts = args.restarts
    cfg.tolerances = _parse_tolerances(getattr(args, "tolerance", None))
    return cfg


_COMMANDS = {
    "flip": cmd_flip,
    "decompose": cmd_decompose,
    "capacities": cmd_capacities,
    "herald": cmd_herald,
    "verify": cmd_verify,
    "nogo": cmd_nogo,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return _COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
