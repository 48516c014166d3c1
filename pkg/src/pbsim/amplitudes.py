"""Amplitude equations of the reduced cavity, exact within the truncation.

The photon state |psi> = sum_n c_n |n> evolves under the non-Hermitian
generator H_reduced - 1j*kappa/2 * n.  The right-hand side below is written
directly from the three-term recurrence so it stays an independent check on
the sparse-matrix route in :mod:`pbsim.operators`; the two are compared in
the test suite rather than sharing code.
"""

from __future__ import annotations

import cmath

import numpy as np

from .errors import (
    LengthTooSmallError,
    SingularSystemError,
    StepInvalidError,
    ZeroDriveError,
)
from .params import SystemParams, Truncation

MIN_LENGTH = 4  # amplitudes through the three-photon state

DEFAULT_DT = 1e-3  # in 1/kappa; the reduced model carries no omega_m scale


def amplitude_rhs(params: SystemParams, state: np.ndarray) -> np.ndarray:
    """Time derivative dc/dt of the amplitude vector.

    Implements, entry by entry,
    1j * dc_n/dt = -n m_n c_n / 2
                   + E (sqrt(n) c_{n-1} + sqrt(n+1) c_{n+1})
                   + G (sqrt(n(n-1)) e^{i theta} c_{n-2}
                        + sqrt((n+1)(n+2)) e^{-i theta} c_{n+2}),
    with out-of-range neighbors dropped at the truncation boundary.
    """
    c = np.asarray(state, dtype=complex)
    size = c.size
    if size < MIN_LENGTH:
        raise LengthTooSmallError(f"need at least {MIN_LENGTH} amplitudes, got {size}")
    ns = np.arange(size)
    m_n = 2.0 * ns * params.kerr_shift - 2.0 * params.delta_c + 1j * params.kappa

    i_dot = -ns * m_n * c / 2.0

    e = params.drive
    if e != 0.0:
        lower = np.zeros(size, dtype=complex)
        lower[1:] = np.sqrt(ns[1:]) * c[:-1]
        upper = np.zeros(size, dtype=complex)
        upper[:-1] = np.sqrt(ns[1:]) * c[1:]
        i_dot += e * (lower + upper)

    if params.gain != 0.0:
        phase = cmath.exp(1j * params.theta)
        two_down = np.zeros(size, dtype=complex)
        two_down[2:] = np.sqrt(ns[2:] * (ns[2:] - 1)) * c[:-2]
        two_up = np.zeros(size, dtype=complex)
        two_up[:-2] = np.sqrt((ns[:-2] + 1) * (ns[:-2] + 2)) * c[2:]
        i_dot += params.gain * (phase * two_down + np.conj(phase) * two_up)

    return -1j * i_dot


def steady_amplitudes(params: SystemParams, trunc: Truncation) -> np.ndarray:
    """Driven steady state with the vacuum amplitude pinned to one.

    Solves the stationarity conditions dc_n/dt = 0 for n = 1..n_photon_max
    together with c_0 = 1; the n = 0 equation is discarded in favor of that
    pin, which reproduces the weak-drive normalization and avoids the
    trivial all-zero solution of the homogeneous non-Hermitian system.  The
    returned vector is the c_0-normalized ray; use :func:`probabilities`
    for probability readouts.
    """
    if params.drive == 0.0 and params.gain == 0.0:
        raise ZeroDriveError("steady state needs drive > 0 or gain > 0")
    n_max = trunc.n_photon_max
    kerr = params.kerr_shift
    e = params.drive
    z_pump = params.gain * cmath.exp(1j * params.theta)

    # Unknowns c_1..c_n_max; row n-1 is the stationarity condition for c_n.
    a = np.zeros((n_max, n_max), dtype=complex)
    rhs = np.zeros(n_max, dtype=complex)
    for n in range(1, n_max + 1):
        row = n - 1
        m_n = 2.0 * n * kerr - 2.0 * params.delta_c + 1j * params.kappa
        a[row, n - 1] = -n * m_n / 2.0
        if n - 1 >= 1:
            a[row, n - 2] += e * np.sqrt(n)
        else:
            rhs[row] -= e * np.sqrt(n)  # couples to the pinned c_0
        if n + 1 <= n_max:
            a[row, n] += e * np.sqrt(n + 1)
        if n - 2 >= 1:
            a[row, n - 3] += z_pump * np.sqrt(n * (n - 1))
        elif n - 2 == 0:
            rhs[row] -= z_pump * np.sqrt(n * (n - 1))
        if n + 2 <= n_max:
            a[row, n + 1] += np.conj(z_pump) * np.sqrt((n + 1) * (n + 2))

    try:
        tail = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:  # not expected for kappa > 0
        raise SingularSystemError(str(exc)) from exc
    return np.concatenate(([1.0 + 0.0j], tail))


def probabilities(state: np.ndarray) -> np.ndarray:
    """Normalized photon-number probabilities |c_n|^2 / sum |c_m|^2."""
    weights = np.abs(np.asarray(state, dtype=complex)) ** 2
    total = weights.sum()
    if total == 0.0:
        raise ZeroDriveError("cannot normalize an all-zero amplitude vector")
    return weights / total


def evolve_amplitudes(
    params: SystemParams,
    initial: np.ndarray,
    t_final: float,
    dt: float = DEFAULT_DT,
) -> np.ndarray:
    """Fixed-step classical Runge-Kutta integration of the amplitude ODEs.

    The generator is lossy, so with all drives off the norm decays
    monotonically; accuracy is pinned by the closed-form single-photon
    decay |c_1(t)| = exp(-kappa t / 2).
    """
    if not (dt > 0.0) or not np.isfinite(dt):
        raise StepInvalidError(f"dt must be > 0, got {dt}")
    if t_final < 0.0 or not np.isfinite(t_final):
        raise StepInvalidError(f"t_final must be >= 0, got {t_final}")
    y = np.asarray(initial, dtype=complex).copy()
    if y.size < MIN_LENGTH:
        raise LengthTooSmallError(f"need at least {MIN_LENGTH} amplitudes, got {y.size}")
    if t_final == 0.0:
        return y

    n_full, remainder = divmod(t_final, dt)
    steps = [dt] * int(n_full)
    if remainder > 1e-12 * max(t_final, dt):
        steps.append(remainder)

    for h in steps:
        k1 = amplitude_rhs(params, y)
        k2 = amplitude_rhs(params, y + 0.5 * h * k1)
        k3 = amplitude_rhs(params, y + 0.5 * h * k2)
        k4 = amplitude_rhs(params, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y
