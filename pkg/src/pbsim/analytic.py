"""Closed-form weak-drive theory of the pumped nonlinear cavity.

After eliminating the mechanics, the cavity is a Kerr oscillator with
per-photon shift g**2/omega_m, driven by a laser (amplitude E) and a
degenerate parametric pump (amplitude G, phase theta).  Under weak driving
the steady state is captured by the probability amplitudes c0..c3 of the
lowest Fock states; every function here is an explicit expression in those
amplitudes, evaluated in kappa units.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import ZeroDriveError, ZeroMeanError
from .params import TWO_PI, SystemParams

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)


class PumpBranch(str, Enum):
    """Which root of the pump-optimization problem a value came from."""

    ONE_PHOTON = "one_photon"
    TWO_PHOTON_PLUS = "two_photon_plus"
    TWO_PHOTON_MINUS = "two_photon_minus"


@dataclass(frozen=True)
class PerturbativeAmplitudes:
    """Weak-drive steady-state amplitudes of the 0..3 photon states.

    The vacuum amplitude is pinned to 1; the state is not normalized.
    """

    c0: complex
    c1: complex
    c2: complex
    c3: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.c0, self.c1, self.c2, self.c3], dtype=complex)

    def probabilities(self) -> np.ndarray:
        """Normalized photon-number probabilities over n = 0..3."""
        weights = np.abs(self.as_array()) ** 2
        return weights / weights.sum()


@dataclass(frozen=True)
class OptimalPump:
    """Parametric pump settings (magnitude, phase) produced by an optimizer.

    ``gain * exp(1j * theta)`` reconstructs the underlying complex optimum
    losslessly.
    """

    gain: float
    theta: float
    branch: PumpBranch

    @property
    def z(self) -> complex:
        return self.gain * cmath.exp(1j * self.theta)

    def apply(self, params: SystemParams) -> SystemParams:
        """Return a copy of ``params`` driven with this pump."""
        return replace(params, gain=self.gain, theta=self.theta)


def _from_complex(z: complex, branch: PumpBranch) -> OptimalPump:
    return OptimalPump(gain=abs(z), theta=cmath.phase(z) % TWO_PI, branch=branch)


def complex_detuning(params: SystemParams, n: int) -> complex:
    """Effective complex detuning of the n-photon amplitude equation.

    Combines the Kerr-shifted detuning and the cavity loss:
    2*n*g**2/omega_m - 2*delta_c + 1j*kappa.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return 2.0 * n * params.kerr_shift - 2.0 * params.delta_c + 1j * params.kappa


def perturbative_amplitudes(params: SystemParams) -> PerturbativeAmplitudes:
    """Steady-state amplitudes to leading order in the drives.

    c1 = 2E/m1,  c2 = sqrt(2) (2E^2 + z m1) / (m1 m2),
    c3 = 2 sqrt(2) E [2E^2 + z (4z - 2g^2/omega_m + 3 m2)]
         / (sqrt(3) m1 m2 m3),
    with z = G exp(i theta) and m_n the complex detuning factors.  Division
    by zero cannot occur for kappa > 0.
    """
    m1 = complex_detuning(params, 1)
    m2 = complex_detuning(params, 2)
    m3 = complex_detuning(params, 3)
    e = params.drive
    z = params.gain * cmath.exp(1j * params.theta)
    c1 = 2.0 * e / m1
    c2 = _SQRT2 * (2.0 * e**2 + z * m1) / (m1 * m2)
    c3 = (2.0 * _SQRT2 * e * (2.0 * e**2 + z * (4.0 * z - 2.0 * params.kerr_shift + 3.0 * m2))
          / (_SQRT3 * m1 * m2 * m3))
    return PerturbativeAmplitudes(c0=1.0 + 0.0j, c1=c1, c2=c2, c3=c3)


def g2_analytic(params: SystemParams) -> float:
    """Equal-time second-order correlation from the truncated amplitudes.

    g2(0) ~= (2|c2|^2 + 6|c3|^2) / |c1|^4.  The three-photon term is kept
    deliberately so that incomplete suppression of higher excitation shows
    up in the result.
    """
    if params.drive == 0.0:
        raise ZeroDriveError("g2 is undefined at zero drive (c1 = 0)")
    amps = perturbative_amplitudes(params)
    return float((2.0 * abs(amps.c2) ** 2 + 6.0 * abs(amps.c3) ** 2) / abs(amps.c1) ** 4)


def g3_analytic(params: SystemParams) -> float:
    """Equal-time third-order correlation from the truncated amplitudes.

    g3(0) ~= 6|c3|^2 / |c1|^6, mirroring the g2 construction (the weak-drive
    mean photon number is |c1|^2).
    """
    if params.drive == 0.0:
        raise ZeroDriveError("g3 is undefined at zero drive (c1 = 0)")
    amps = perturbative_amplitudes(params)
    return float(6.0 * abs(amps.c3) ** 2 / abs(amps.c1) ** 6)


def optimal_1pb(params: SystemParams) -> OptimalPump:
    """Pump that cancels the two-photon amplitude: G e^{i theta} = -2E^2/m1.

    With this pump c2 = 0 exactly, which is the single-photon-blockade
    optimum for the given detuning and coupling.
    """
    if params.drive == 0.0:
        raise ZeroDriveError("the 1PB optimum requires drive > 0")
    z = -2.0 * params.drive**2 / complex_detuning(params, 1)
    return _from_complex(z, PumpBranch.ONE_PHOTON)


def two_photon_branch_threshold(params: SystemParams) -> float:
    """Detuning (frequency units) separating the two roots used below."""
    return 5.0 * params.kerr_shift / 3.0


def optimal_2pb(params: SystemParams) -> OptimalPump:
    """Pump that cancels the three-photon amplitude (g3 = 0).

    Both roots of z^2 - 2 K z + E^2/2 = 0 with
    K = g^2/(4 omega_m) - 3 m2 / 8 cancel c3; the branch is picked by the
    detuning relative to 5 g^2 / (3 omega_m): plus below, minus above.  The
    complex square root is the principal branch, and the threshold itself
    takes the plus branch.  Along a detuning scan this piecewise rule keeps
    the small-magnitude root, so the resulting gain stays in the weak-pump
    regime.
    """
    if params.drive == 0.0:
        raise ZeroDriveError("the 2PB optimum requires drive > 0")
    m2 = complex_detuning(params, 2)
    k = params.kerr_shift / 4.0 - 3.0 * m2 / 8.0
    root = cmath.sqrt(k * k - params.drive**2 / 2.0)
    if params.delta_c <= two_photon_branch_threshold(params):
        return _from_complex(k + root, PumpBranch.TWO_PHOTON_PLUS)
    return _from_complex(k - root, PumpBranch.TWO_PHOTON_MINUS)


def spectrum_level(params: SystemParams, n: int) -> float:
    """Energy of the n-photon level of the Kerr-shifted cavity:
    n*delta_c - n**2 * g**2/omega_m."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return float(n * params.delta_c - n**2 * params.kerr_shift)


def poisson_reference(mean: float, n_max: int) -> np.ndarray:
    """Poisson probabilities exp(-mean) mean^n / n! for n = 0..n_max."""
    ns = np.arange(n_max + 1)
    return np.exp(-mean) * mean**ns / np.array([math.factorial(int(n)) for n in ns])


def poisson_deviation(distribution: np.ndarray, mean: float) -> np.ndarray:
    """Relative deviation (P_n - Poisson_n) / Poisson_n per photon number.

    The reference Poisson distribution carries the supplied mean.  Entries
    of ``distribution`` must be nonnegative up to numerical noise; tiny
    negative values from a solver are clipped to zero.
    """
    if mean <= 0.0:
        raise ZeroMeanError(f"mean must be > 0, got {mean}")
    dist = np.asarray(distribution, dtype=float)
    if dist.min(initial=0.0) < -1e-9:
        raise ValueError("distribution has a significantly negative entry")
    dist = np.clip(dist, 0.0, None)
    ref = poisson_reference(mean, dist.size - 1)
    return (dist - ref) / ref
