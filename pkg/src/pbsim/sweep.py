"""Parameter sweeps, figure presets, convergence studies, and manifests.

A sweep walks a 1- or 2-axis grid of parameter values, optionally applying
an optimal-pump rule at every point, and emits one CSV row per grid point
(axis1 outer, axis2 inner) plus a JSON manifest sufficient to re-run the
sweep bit-identically.  Grid points are independent, so they can be
dispatched to a process pool; results are always gathered in grid order.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from ._version import __version__
from .analytic import OptimalPump, optimal_1pb, optimal_2pb
from .errors import UnknownObservableError, UnknownParameterError, UnknownPresetError
from .lindblad import build_liouvillian, g2_of_tau, steady_state
from .observables import Source, report
from .params import SystemParams, Truncation, default_1pb_params, default_2pb_params

PARAM_NAMES = tuple(f.name for f in fields(SystemParams))
AXIS_NAMES = PARAM_NAMES + ("tau",)

SCALAR_OUTPUTS = ("g2", "g3", "n_mean", "p1", "p0", "p2", "gain_opt", "theta_opt")
VECTOR_OUTPUTS = ("pn", "poisson_dev")
TAU_OUTPUT = "g2_tau"

_PUMP_OUTPUTS = ("gain_opt", "theta_opt")


class PumpMode(str, Enum):
    """How the parametric pump is set at each grid point."""

    FIXED = "fixed"
    OPTIMAL_1PB = "optimal-1pb"
    OPTIMAL_2PB = "optimal-2pb"


@dataclass(frozen=True)
class Axis:
    """One swept quantity: a parameter field name or the delay ``tau``."""

    name: str
    start: float
    stop: float
    points: int

    def __post_init__(self) -> None:
        if self.name not in AXIS_NAMES:
            raise UnknownParameterError(
                f"unknown axis {self.name!r}; choose from {sorted(AXIS_NAMES)}"
            )
        if self.points < 1:
            raise ValueError(f"axis needs at least one point, got {self.points}")

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([float(self.start)])
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepSpec:
    """Full description of a sweep.

    ``pump_target`` optionally overrides parameter fields only for the
    pump-optimization step, so a pump can be tuned for one detuning and
    then held fixed while the detuning is swept.  When a pump field
    (``gain`` or ``theta``) is itself an axis, the optimizer fills only the
    other one.
    """

    axis1: Axis
    axis2: Axis | None = None
    pump_mode: PumpMode = PumpMode.FIXED
    pump_target: tuple[tuple[str, float], ...] | None = None
    outputs: tuple[str, ...] = ("g2",)
    source: Source = Source.LINDBLAD
    truncation: Truncation = Truncation()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pump_mode", PumpMode(self.pump_mode))
        object.__setattr__(self, "source", Source(self.source))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if self.pump_target is not None:
            target = tuple(sorted((str(k), float(v)) for k, v in dict(self.pump_target).items()))
            for key, _ in target:
                if key not in PARAM_NAMES:
                    raise UnknownParameterError(f"unknown pump_target field {key!r}")
            object.__setattr__(self, "pump_target", target)
        axis_names = [self.axis1.name] + ([self.axis2.name] if self.axis2 else [])
        if len(set(axis_names)) != len(axis_names):
            raise ValueError("axis1 and axis2 must name different quantities")
        has_tau = "tau" in axis_names
        for name in self.outputs:
            if name == TAU_OUTPUT:
                if not has_tau:
                    raise UnknownObservableError("g2_tau needs a tau axis")
            elif name not in SCALAR_OUTPUTS + VECTOR_OUTPUTS:
                raise UnknownObservableError(
                    f"unknown observable {name!r}; choose from "
                    f"{sorted(SCALAR_OUTPUTS + VECTOR_OUTPUTS + (TAU_OUTPUT,))}"
                )
        if has_tau:
            if self.outputs != (TAU_OUTPUT,):
                raise UnknownObservableError("a tau axis supports exactly the g2_tau output")
            if self.source is not Source.LINDBLAD:
                raise ValueError("delayed correlations require the lindblad source")
        if self.pump_mode is PumpMode.FIXED:
            for name in self.outputs:
                if name in _PUMP_OUTPUTS:
                    raise UnknownObservableError(f"{name!r} needs an optimal pump mode")

    def to_dict(self) -> dict:
        return {
            "axis1": dict(vars(self.axis1)),
            "axis2": dict(vars(self.axis2)) if self.axis2 else None,
            "pump_mode": self.pump_mode.value,
            "pump_target": dict(self.pump_target) if self.pump_target else None,
            "outputs": list(self.outputs),
            "source": self.source.value,
            "truncation": {
                "n_photon_max": self.truncation.n_photon_max,
                "n_phonon_max": self.truncation.n_phonon_max,
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        axis2 = Axis(**data["axis2"]) if data.get("axis2") else None
        target = data.get("pump_target")
        return cls(
            axis1=Axis(**data["axis1"]),
            axis2=axis2,
            pump_mode=PumpMode(data["pump_mode"]),
            pump_target=tuple(target.items()) if target else None,
            outputs=tuple(data["outputs"]),
            source=Source(data["source"]),
            truncation=Truncation(**data["truncation"]),
        )


@dataclass(frozen=True)
class SweepResult:
    """CSV-ready rows plus the manifest that reproduces them."""

    header: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    manifest: dict

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    def write(self, out_dir: str | Path, name: str) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"{name}.csv"
        manifest_path = out / f"{name}.manifest.json"
        csv_path.write_text(self.to_csv())
        manifest_path.write_text(json.dumps(self.manifest, indent=2, sort_keys=True) + "\n")
        return csv_path, manifest_path


def expanded_header(spec: SweepSpec) -> tuple[str, ...]:
    """Axis columns first, then observables; vectors become indexed columns."""
    names = [spec.axis1.name] + ([spec.axis2.name] if spec.axis2 else [])
    for output in spec.outputs:
        if output in VECTOR_OUTPUTS:
            names.extend(f"{output}_{n}" for n in range(spec.truncation.dim_photon))
        else:
            names.append(output)
    return tuple(names)


def _apply_pump(params: SystemParams, spec: SweepSpec, axis_fields: set[str]) -> tuple[SystemParams, OptimalPump | None]:
    if spec.pump_mode is PumpMode.FIXED:
        return params, None
    target = params
    if spec.pump_target:
        target = replace(params, **dict(spec.pump_target))
    pump = optimal_1pb(target) if spec.pump_mode is PumpMode.OPTIMAL_1PB else optimal_2pb(target)
    updates = {}
    if "gain" not in axis_fields:
        updates["gain"] = pump.gain
    if "theta" not in axis_fields:
        updates["theta"] = pump.theta
    return (replace(params, **updates) if updates else params), pump


def _point_row(task: tuple) -> tuple[float, ...]:
    """One grid point: resolve parameters, run the source, extract outputs."""
    base, spec, axis_values = task
    point = replace(base, **axis_values)
    point_params, pump = _apply_pump(point, spec, set(axis_values))
    needs_report = any(name not in _PUMP_OUTPUTS for name in spec.outputs)
    rep = report(point_params, spec.truncation, spec.source) if needs_report else None

    row: list[float] = [axis_values[spec.axis1.name]]
    if spec.axis2 is not None:
        row.append(axis_values[spec.axis2.name])
    for name in spec.outputs:
        if name == "gain_opt":
            row.append(pump.gain)
        elif name == "theta_opt":
            row.append(pump.theta)
        elif name == "g2":
            row.append(rep.g2_zero)
        elif name == "g3":
            row.append(rep.g3_zero)
        elif name == "n_mean":
            row.append(rep.mean_photon)
        elif name in ("p0", "p1", "p2"):
            row.append(float(rep.photon_distribution[int(name[1])]))
        elif name == "pn":
            row.extend(float(p) for p in rep.photon_distribution)
        elif name == "poisson_dev":
            row.extend(float(d) for d in rep.poisson_deviations)
    return tuple(row)


def _tau_block(task: tuple) -> tuple[tuple[float, ...], ...]:
    """All delays for one non-tau grid point, sharing one steady state."""
    base, spec, fixed_values, taus, tau_first = task
    point = replace(base, **fixed_values)
    point_params, _ = _apply_pump(point, spec, set(fixed_values))
    liou = build_liouvillian(point_params, spec.truncation)
    rho = steady_state(liou)
    values = g2_of_tau(liou, rho, np.asarray(taus))
    rows = []
    for tau, value in zip(taus, values):
        if tau_first:
            rows.append((float(tau), *[fixed_values[k] for k in fixed_values], float(value)))
        elif fixed_values:
            rows.append((*[fixed_values[k] for k in fixed_values], float(tau), float(value)))
        else:
            rows.append((float(tau), float(value)))
    return tuple(rows)


def _grid(spec: SweepSpec) -> list[dict[str, float]]:
    v1 = spec.axis1.values()
    if spec.axis2 is None:
        return [{spec.axis1.name: float(a)} for a in v1]
    v2 = spec.axis2.values()
    return [
        {spec.axis1.name: float(a), spec.axis2.name: float(b)}
        for a in v1
        for b in v2
    ]


def _manifest(spec: SweepSpec, params: SystemParams, extra: dict | None = None) -> dict:
    manifest = {
        "tool_version": __version__,
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "params": params.to_dict(),
        "spec": spec.to_dict(),
    }
    if extra:
        manifest.update(extra)
    return manifest


def run_sweep(
    spec: SweepSpec,
    params: SystemParams,
    jobs: int = 1,
    manifest_extra: dict | None = None,
) -> SweepResult:
    """Execute a sweep; rows are ordered axis1 outer, axis2 inner."""
    header = expanded_header(spec)
    tau_axes = [ax for ax in (spec.axis1, spec.axis2) if ax is not None and ax.name == "tau"]
    if tau_axes:
        rows = _run_tau_sweep(spec, params, jobs)
    else:
        tasks = [(params, spec, values) for values in _grid(spec)]
        rows = _map_tasks(_point_row, tasks, jobs)
    return SweepResult(header=header, rows=tuple(rows), manifest=_manifest(spec, params, manifest_extra))


def _run_tau_sweep(spec: SweepSpec, params: SystemParams, jobs: int) -> list[tuple[float, ...]]:
    tau_axis = spec.axis1 if spec.axis1.name == "tau" else spec.axis2
    other = spec.axis2 if spec.axis1.name == "tau" else spec.axis1
    taus = tuple(float(t) for t in tau_axis.values())
    tau_first = spec.axis1.name == "tau"
    if other is None:
        tasks = [(params, spec, {}, taus, tau_first)]
    else:
        tasks = [
            (params, spec, {other.name: float(v)}, taus, tau_first)
            for v in other.values()
        ]
    blocks = _map_tasks(_tau_block, tasks, jobs)
    rows: list[tuple[float, ...]] = []
    if tau_first and other is not None:
        # axis1 = tau runs outermost: regroup the per-point blocks.
        for i_tau in range(len(taus)):
            for block in blocks:
                rows.append(block[i_tau])
    else:
        for block in blocks:
            rows.extend(block)
    return rows


def _map_tasks(fn, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def rerun_manifest(manifest: dict, jobs: int = 1) -> SweepResult:
    """Re-execute the sweep recorded in a manifest (bit-identical CSV)."""
    spec = SweepSpec.from_dict(manifest["spec"])
    params = SystemParams.from_dict(manifest["params"])
    extra = {k: v for k, v in manifest.items() if k not in ("tool_version", "created_utc", "params", "spec")}
    return run_sweep(spec, params, jobs=jobs, manifest_extra=extra or None)


# --------------------------------------------------------------------------
# Figure presets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PresetRun:
    """One labeled sweep belonging to a figure preset."""

    label: str
    spec: SweepSpec
    params: SystemParams
    note: str = ""


def _preset_fig2a() -> list[PresetRun]:
    # Blockade depth vs optomechanical coupling at resonance, with the pump
    # optimized pointwise versus switched off.
    base = default_1pb_params()
    axis = Axis("g", 1.0, 15.0, 15)
    common = dict(axis1=axis, outputs=("g2",), source=Source.LINDBLAD)
    return [
        PresetRun("fig2a_opa", SweepSpec(pump_mode=PumpMode.OPTIMAL_1PB, **common), base),
        PresetRun("fig2a_no_opa", SweepSpec(pump_mode=PumpMode.FIXED, **common),
                  replace(base, gain=0.0)),
    ]


def _preset_fig2b() -> list[PresetRun]:
    # Delayed correlation g2(tau) at three couplings, optimal pump at
    # resonance.  Delays are in units of 1/kappa.
    base = default_1pb_params()
    return [
        PresetRun(
            "fig2b",
            SweepSpec(
                axis1=Axis("g", 5.0, 15.0, 3),
                axis2=Axis("tau", 0.0, 20.0, 200),
                pump_mode=PumpMode.OPTIMAL_1PB,
                outputs=(TAU_OUTPUT,),
                source=Source.LINDBLAD,
            ),
            base,
        )
    ]


_HEATMAP_NOTE = (
    "axis ranges are judgment calls: delta_c/kappa in [-3, 3], gain/kappa in "
    "[0, 0.02], theta in [0, 2*pi]"
)


def _preset_fig2c() -> list[PresetRun]:
    # g2 over the (detuning, gain) plane; theta follows its optimum.
    return [
        PresetRun(
            "fig2c",
            SweepSpec(
                axis1=Axis("delta_c", -3.0, 3.0, 61),
                axis2=Axis("gain", 0.0, 0.02, 41),
                pump_mode=PumpMode.OPTIMAL_1PB,
                outputs=("g2",),
                source=Source.ANALYTIC,
            ),
            default_1pb_params(),
            note=_HEATMAP_NOTE,
        )
    ]


def _preset_fig2d() -> list[PresetRun]:
    # g2 over the (detuning, phase) plane; gain follows its optimum.
    return [
        PresetRun(
            "fig2d",
            SweepSpec(
                axis1=Axis("delta_c", -3.0, 3.0, 61),
                axis2=Axis("theta", 0.0, 2.0 * np.pi, 41),
                pump_mode=PumpMode.OPTIMAL_1PB,
                outputs=("g2",),
                source=Source.ANALYTIC,
            ),
            default_1pb_params(),
            note=_HEATMAP_NOTE,
        )
    ]


def _preset_fig3a() -> list[PresetRun]:
    # Blockade dips engineered at three detunings; analytic and exact
    # curves side by side.
    base = default_1pb_params()
    runs = []
    for target in (-2.0, 0.0, 1.5):
        for source in (Source.ANALYTIC, Source.LINDBLAD):
            runs.append(
                PresetRun(
                    f"fig3a_dc{target:+.1f}_{source.value}",
                    SweepSpec(
                        axis1=Axis("delta_c", -3.0, 3.0, 61),
                        pump_mode=PumpMode.OPTIMAL_1PB,
                        pump_target=(("delta_c", target),),
                        outputs=("g2",),
                        source=source,
                    ),
                    base,
                )
            )
    return runs


def _preset_fig3b() -> list[PresetRun]:
    # Single-photon occupancy vs detuning at three couplings, pump optimal
    # at every point.
    return [
        PresetRun(
            "fig3b",
            SweepSpec(
                axis1=Axis("g", 5.0, 15.0, 3),
                axis2=Axis("delta_c", -1.0, 4.0, 101),
                pump_mode=PumpMode.OPTIMAL_1PB,
                outputs=("p1",),
                source=Source.LINDBLAD,
            ),
            default_1pb_params(),
        )
    ]


def _preset_fig4ab() -> list[PresetRun]:
    # Two-photon blockade region vs detuning, without and with the pump.
    base = default_2pb_params()
    axis = Axis("delta_c", 0.0, 4.0, 81)
    common = dict(axis1=axis, outputs=("g2", "g3"), source=Source.LINDBLAD)
    return [
        PresetRun("fig4a_no_opa", SweepSpec(pump_mode=PumpMode.FIXED, **common),
                  replace(base, gain=0.0)),
        PresetRun("fig4b_opa", SweepSpec(pump_mode=PumpMode.OPTIMAL_2PB, **common), base),
    ]


def _preset_fig4cd() -> list[PresetRun]:
    # The optimal pump itself (magnitude and phase) vs detuning.
    return [
        PresetRun(
            "fig4cd",
            SweepSpec(
                axis1=Axis("delta_c", 0.0, 4.0, 201),
                pump_mode=PumpMode.OPTIMAL_2PB,
                outputs=("gain_opt", "theta_opt"),
                source=Source.ANALYTIC,
            ),
            default_2pb_params(),
        )
    ]


def _preset_fig4e() -> list[PresetRun]:
    # Poisson deviations of the photon distribution at the two-photon
    # blockade point, analytic and exact.
    base = replace(default_2pb_params(), delta_c=2.0)
    runs = []
    for source in (Source.ANALYTIC, Source.LINDBLAD):
        runs.append(
            PresetRun(
                f"fig4e_{source.value}",
                SweepSpec(
                    axis1=Axis("delta_c", 2.0, 2.0, 1),
                    pump_mode=PumpMode.OPTIMAL_2PB,
                    outputs=("n_mean", "pn", "poisson_dev"),
                    source=source,
                ),
                base,
            )
        )
    return runs


_PRESETS = {
    "fig2a": _preset_fig2a,
    "fig2b": _preset_fig2b,
    "fig2c": _preset_fig2c,
    "fig2d": _preset_fig2d,
    "fig3a": _preset_fig3a,
    "fig3b": _preset_fig3b,
    "fig4ab": _preset_fig4ab,
    "fig4cd": _preset_fig4cd,
    "fig4e": _preset_fig4e,
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def figure_preset(name: str) -> list[PresetRun]:
    """Canned sweeps reproducing the library's reference scans."""
    try:
        builder = _PRESETS[name]
    except KeyError:
        raise UnknownPresetError(f"unknown preset {name!r}; choose from {PRESET_NAMES}") from None
    return builder()


def run_preset(name: str, out_dir: str | Path, jobs: int = 1,
               overrides: dict | None = None) -> list[Path]:
    """Run every sweep in a preset and write CSV + manifest files."""
    written = []
    for run in figure_preset(name):
        spec = run.spec
        if overrides:
            spec = replace(spec, **overrides)
        extra = {"preset": name, "label": run.label}
        if run.note:
            extra["note"] = run.note
        result = run_sweep(spec, run.params, jobs=jobs, manifest_extra=extra)
        csv_path, manifest_path = result.write(out_dir, run.label)
        written.extend([csv_path, manifest_path])
    return written


# --------------------------------------------------------------------------
# Convergence studies
# --------------------------------------------------------------------------

CONVERGENCE_TOL = 1e-3


def convergence_study(
    params: SystemParams,
    observable: str,
    ladder: Sequence[Truncation],
    source: Source | str = Source.LINDBLAD,
    tol: float = CONVERGENCE_TOL,
) -> dict:
    """Evaluate one observable along a strictly growing truncation ladder.

    Returns a JSON-ready report with the value at each truncation, the
    successive relative changes, and a convergence flag (last change below
    ``tol``).
    """
    if observable not in ("g2", "g3", "n_mean", "p1"):
        raise UnknownObservableError(f"unknown observable {observable!r}")
    ladder = list(ladder)
    if len(ladder) < 2:
        raise ValueError("ladder needs at least two truncations")
    for prev, nxt in zip(ladder, ladder[1:]):
        grows = (nxt.n_photon_max >= prev.n_photon_max
                 and nxt.n_phonon_max >= prev.n_phonon_max
                 and nxt.dim > prev.dim)
        if not grows:
            raise ValueError("ladder must be strictly increasing")

    key = {"g2": "g2_zero", "g3": "g3_zero", "n_mean": "mean_photon", "p1": "p1"}[observable]
    entries = []
    previous = None
    for trunc in ladder:
        rep = report(params, trunc, source)
        value = float(getattr(rep, key))
        delta = None if previous is None else abs(value - previous) / max(abs(previous), 1e-300)
        entries.append(
            {
                "n_photon_max": trunc.n_photon_max,
                "n_phonon_max": trunc.n_phonon_max,
                "value": value,
                "rel_delta": delta,
            }
        )
        previous = value
    return {
        "observable": observable,
        "source": Source(source).value,
        "tolerance": tol,
        "params": params.to_dict(),
        "ladder": entries,
        "converged": entries[-1]["rel_delta"] is not None and entries[-1]["rel_delta"] < tol,
    }
