"""Command-line front end.

Subcommands: ``sweep``, ``figure <preset>``, ``converge``, ``report``.
Exit codes: 0 on success, 2 on validation errors, 3 on solver failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ._version import __version__
from .errors import SingularAfterConstraintError, SingularSystemError
from .observables import Source, report
from .params import SystemParams, Truncation, default_1pb_params, validate
from .sweep import (
    PRESET_NAMES,
    Axis,
    PumpMode,
    SweepSpec,
    convergence_study,
    run_preset,
    run_sweep,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--params", type=Path, default=None,
                        help="JSON file with the system parameters (default: built-in 1PB set)")
    parser.add_argument("--out", type=Path, default=Path("."),
                        help="output directory (default: current directory)")
    parser.add_argument("--na", type=int, default=None, help="photon-number cutoff")
    parser.add_argument("--nb", type=int, default=None, help="phonon-number cutoff")
    parser.add_argument("--source", choices=[s.value for s in Source], default=None,
                        help="solution path")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for grid points")


def _load_params(args: argparse.Namespace) -> SystemParams:
    if args.params is None:
        params = default_1pb_params()
    else:
        params = SystemParams.from_json(Path(args.params).read_text())
    return validate(params)


def _load_truncation(args: argparse.Namespace) -> Truncation:
    default = Truncation()
    return Truncation(
        n_photon_max=args.na if args.na is not None else default.n_photon_max,
        n_phonon_max=args.nb if args.nb is not None else default.n_phonon_max,
    )


def _parse_axis(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError(f"axis must be name:start:stop:points, got {text!r}")
    return Axis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))


def _parse_assignments(items: list[str]) -> dict[str, float]:
    out = {}
    for item in items:
        key, _, value = item.partition("=")
        if not _:
            raise ValueError(f"expected key=value, got {item!r}")
        out[key] = float(value)
    return out


def _cmd_sweep(args: argparse.Namespace) -> int:
    params = _load_params(args)
    axes = [_parse_axis(text) for text in args.axis]
    if not 1 <= len(axes) <= 2:
        raise ValueError("provide one or two --axis options")
    target = None
    if args.pump_target:
        target = tuple(_parse_assignments(args.pump_target).items())
    spec = SweepSpec(
        axis1=axes[0],
        axis2=axes[1] if len(axes) == 2 else None,
        pump_mode=PumpMode(args.pump),
        pump_target=target,
        outputs=tuple(args.outputs.split(",")),
        source=Source(args.source) if args.source else Source.LINDBLAD,
        truncation=_load_truncation(args),
    )
    result = run_sweep(spec, params, jobs=args.jobs)
    csv_path, manifest_path = result.write(args.out, args.name)
    print(csv_path)
    print(manifest_path)
    return EXIT_OK


def _cmd_figure(args: argparse.Namespace) -> int:
    overrides = {}
    if args.source:
        overrides["source"] = Source(args.source)
    if args.na is not None or args.nb is not None:
        overrides["truncation"] = _load_truncation(args)
    written = run_preset(args.preset, args.out, jobs=args.jobs, overrides=overrides or None)
    for path in written:
        print(path)
    return EXIT_OK


def _cmd_converge(args: argparse.Namespace) -> int:
    params = _load_params(args)
    ladder = []
    for step in args.ladder.split(","):
        na, _, nb = step.partition(":")
        ladder.append(Truncation(n_photon_max=int(na), n_phonon_max=int(nb) if nb else 0))
    study = convergence_study(
        params,
        args.observable,
        ladder,
        source=Source(args.source) if args.source else Source.LINDBLAD,
    )
    text = json.dumps(study, indent=2, sort_keys=True)
    if args.out != Path("."):
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / f"{args.name}.json"
        path.write_text(text + "\n")
        print(path)
    else:
        print(text)
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    params = _load_params(args)
    rep = report(
        params,
        _load_truncation(args),
        Source(args.source) if args.source else Source.LINDBLAD,
    )
    print(rep.to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pbsim",
        description="Photon-blockade scans for a pumped optomechanical cavity.",
    )
    parser.add_argument("--version", action="version", version=f"pbsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    _add_common(p_sweep)
    p_sweep.add_argument("--axis", action="append", required=True,
                         help="name:start:stop:points (repeat for a second axis)")
    p_sweep.add_argument("--pump", choices=[m.value for m in PumpMode],
                         default=PumpMode.FIXED.value)
    p_sweep.add_argument("--pump-target", action="append", default=None,
                         help="key=value override used only for pump optimization")
    p_sweep.add_argument("--outputs", default="g2", help="comma-separated observables")
    p_sweep.add_argument("--name", default="sweep", help="basename for output files")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fig = sub.add_parser("figure", help="run a canned figure preset")
    _add_common(p_fig)
    p_fig.add_argument("preset", choices=PRESET_NAMES)
    p_fig.set_defaults(func=_cmd_figure)

    p_conv = sub.add_parser("converge", help="truncation convergence study")
    _add_common(p_conv)
    p_conv.add_argument("--observable", default="g2",
                        choices=("g2", "g3", "n_mean", "p1"))
    p_conv.add_argument("--ladder", required=True,
                        help="comma-separated na:nb pairs, e.g. 6:4,8:6,10:8")
    p_conv.add_argument("--name", default="converge")
    p_conv.set_defaults(func=_cmd_converge)

    p_rep = sub.add_parser("report", help="single-point observable report (JSON)")
    _add_common(p_rep)
    p_rep.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SingularSystemError, SingularAfterConstraintError, np.linalg.LinAlgError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
