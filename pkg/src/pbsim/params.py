"""System parameters, truncation settings, and validation.

Unit convention
---------------
Every rate-valued quantity (detuning, mechanical frequency, couplings,
drives, decay rates) is expressed in units of the cavity decay rate kappa,
so kappa = 1 in canonical form.  :meth:`SystemParams.normalized` rescales an
arbitrary parameter set into that convention and is idempotent.

Both drive magnitudes are stored as nonnegative numbers; all phase
information lives in ``theta``, which is kept reduced to [0, 2*pi).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, fields, replace

from .errors import NonFiniteParameterError, NonPositiveKappaError, RegimeWarning

TWO_PI = 2.0 * math.pi

# Fields that scale as rates (everything except the pump phase).
RATE_FIELDS = ("delta_c", "omega_m", "g", "gain", "drive", "kappa", "gamma_m")

# Soft regime thresholds for the perturbative formulas.  The weak-drive and
# dispersive conditions are inequalities; these cutoffs are where warnings
# start, not hard limits.
WEAK_DRIVE_MAX = 0.1
DISPERSIVE_MAX = 0.2


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the driven cavity, in units of kappa.

    Defaults reproduce the single-photon-blockade working point
    (g/omega_m = 0.05, omega_m/kappa = 100, gamma_m/omega_m = 1e-6,
    E/kappa = 0.05) with the parametric pump switched off.
    """

    delta_c: float = 0.0    # laser-cavity detuning
    omega_m: float = 100.0  # mechanical frequency
    g: float = 5.0          # single-photon optomechanical coupling
    gain: float = 0.0       # parametric gain magnitude G >= 0
    theta: float = 0.0      # pump phase relative to twice the laser phase
    drive: float = 0.05     # laser amplitude E >= 0
    kappa: float = 1.0      # cavity decay rate
    gamma_m: float = 1e-4   # mechanical damping rate

    def __post_init__(self) -> None:
        theta = float(self.theta)
        if math.isfinite(theta):
            theta = theta % TWO_PI
            if theta == TWO_PI:  # fmod of a tiny negative can round up
                theta = 0.0
        object.__setattr__(self, "theta", theta)
        for f in RATE_FIELDS:
            object.__setattr__(self, f, float(getattr(self, f)))

    @property
    def kerr_shift(self) -> float:
        """Effective photon-photon interaction strength g**2 / omega_m."""
        return self.g**2 / self.omega_m

    def normalized(self) -> "SystemParams":
        """Rescale all rates by 1/kappa so that kappa = 1."""
        if not math.isfinite(self.kappa):
            raise NonFiniteParameterError("kappa is not finite")
        if self.kappa <= 0.0:
            raise NonPositiveKappaError(f"kappa must be > 0, got {self.kappa}")
        # true division (not a reciprocal product) keeps this idempotent:
        # the second pass divides by exactly 1.0
        return replace(self, **{f: getattr(self, f) / self.kappa for f in RATE_FIELDS})

    def to_dict(self) -> dict:
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "SystemParams":
        """Build from a flat mapping with exactly the declared field names."""
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ValueError(f"unknown parameter keys: {unknown}")
        missing = sorted(names - set(data))
        if missing:
            raise ValueError(f"missing parameter keys: {missing}")
        return cls(**{k: float(v) for k, v in data.items()})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SystemParams":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Truncation:
    """Fock-space cutoffs for the optical and mechanical modes.

    The perturbative path uses amplitudes up to the three-photon state, so
    at least photon numbers 0..3 must be representable.
    """

    n_photon_max: int = 8
    n_phonon_max: int = 6

    def __post_init__(self) -> None:
        if int(self.n_photon_max) != self.n_photon_max or int(self.n_phonon_max) != self.n_phonon_max:
            raise ValueError("truncation cutoffs must be integers")
        object.__setattr__(self, "n_photon_max", int(self.n_photon_max))
        object.__setattr__(self, "n_phonon_max", int(self.n_phonon_max))
        if self.n_photon_max < 3:
            raise ValueError(f"n_photon_max must be >= 3, got {self.n_photon_max}")
        if self.n_phonon_max < 0:
            raise ValueError(f"n_phonon_max must be >= 0, got {self.n_phonon_max}")

    @property
    def dim_photon(self) -> int:
        return self.n_photon_max + 1

    @property
    def dim_phonon(self) -> int:
        return self.n_phonon_max + 1

    @property
    def dim(self) -> int:
        """Bipartite Hilbert-space dimension (cavity x mechanics)."""
        return self.dim_photon * self.dim_phonon


def default_1pb_params() -> SystemParams:
    """Single-photon-blockade working point, pump fields zero-initialized."""
    return SystemParams(delta_c=0.0, omega_m=100.0, g=5.0, gain=0.0,
                        theta=0.0, drive=0.05, kappa=1.0, gamma_m=1e-4)


def default_2pb_params() -> SystemParams:
    """Two-photon-blockade working point: g/omega_m = 0.1, rest unchanged."""
    return replace(default_1pb_params(), g=10.0)


def regime_warnings(params: SystemParams) -> list[str]:
    """Soft diagnostics for parameters outside the perturbative regime."""
    notes = []
    if params.kappa > 0 and math.isfinite(params.kappa):
        if params.drive / params.kappa > WEAK_DRIVE_MAX:
            notes.append(
                f"weak-drive condition marginal: drive/kappa = "
                f"{params.drive / params.kappa:.3g} > {WEAK_DRIVE_MAX}"
            )
        if params.gain / params.kappa > WEAK_DRIVE_MAX:
            notes.append(
                f"weak-pump condition marginal: gain/kappa = "
                f"{params.gain / params.kappa:.3g} > {WEAK_DRIVE_MAX}"
            )
    if params.omega_m > 0 and math.isfinite(params.omega_m):
        if params.g / params.omega_m > DISPERSIVE_MAX:
            notes.append(
                f"dispersive condition marginal: g/omega_m = "
                f"{params.g / params.omega_m:.3g} > {DISPERSIVE_MAX}"
            )
    return notes


def validate(params: SystemParams) -> SystemParams:
    """Check hard constraints and emit :class:`RegimeWarning` diagnostics.

    Never mutates numeric values; returns the same parameter set.
    """
    for f in fields(params):
        value = getattr(params, f.name)
        if not math.isfinite(value):
            raise NonFiniteParameterError(f"{f.name} is not finite: {value!r}")
    if params.kappa <= 0.0:
        raise NonPositiveKappaError(f"kappa must be > 0, got {params.kappa}")
    if params.omega_m <= 0.0:
        raise ValueError(f"omega_m must be > 0, got {params.omega_m}")
    if params.gain < 0.0:
        raise ValueError(f"gain must be >= 0, got {params.gain}")
    if params.drive < 0.0:
        raise ValueError(f"drive must be >= 0, got {params.drive}")
    if params.gamma_m < 0.0:
        raise ValueError(f"gamma_m must be >= 0, got {params.gamma_m}")
    for note in regime_warnings(params):
        warnings.warn(note, RegimeWarning, stacklevel=2)
    return params
