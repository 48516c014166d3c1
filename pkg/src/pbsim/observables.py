"""Observable extraction from any of the three solution paths.

Cavity observables on bipartite states embed the cavity operator as
op (x) identity, consistent with the ordering fixed in
:mod:`pbsim.operators`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import amplitudes as amp
from .analytic import g2_analytic, g3_analytic, perturbative_amplitudes, poisson_deviation
from .errors import ZeroMeanPhotonError
from .lindblad import build_liouvillian, steady_state
from .operators import annihilation, embed_cavity
from .params import SystemParams, Truncation

MEAN_PHOTON_FLOOR = 1e-14


class Source(str, Enum):
    """Which solution path produced a report."""

    ANALYTIC = "analytic"
    AMPLITUDE = "amplitude"
    LINDBLAD = "lindblad"


@dataclass
class ObservableReport:
    """Everything reported for one parameter point."""

    g2_zero: float
    g3_zero: float
    mean_photon: float
    photon_distribution: np.ndarray
    p1: float
    poisson_deviations: np.ndarray
    source: str

    def to_dict(self) -> dict:
        return {
            "g2_zero": self.g2_zero,
            "g3_zero": self.g3_zero,
            "mean_photon": self.mean_photon,
            "photon_distribution": [float(p) for p in self.photon_distribution],
            "p1": self.p1,
            "poisson_deviations": [float(d) for d in self.poisson_deviations],
            "source": self.source,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def photon_number_weights(trunc: Truncation) -> np.ndarray:
    """Diagonal of n_photon (x) identity in the bipartite basis."""
    return np.repeat(np.arange(trunc.dim_photon, dtype=float), trunc.dim_phonon)


def photon_distribution(rho: np.ndarray, trunc: Truncation) -> np.ndarray:
    """Photon-number probabilities: partial trace over mechanics, diagonal."""
    da, dm = trunc.dim_photon, trunc.dim_phonon
    blocks = np.asarray(rho).reshape(da, dm, da, dm)
    return np.real(np.einsum("nmnm->n", blocks))


def mean_photon_number(rho: np.ndarray, trunc: Truncation) -> float:
    return float(np.real(np.diag(rho)) @ photon_number_weights(trunc))


def mean_phonon_number(rho: np.ndarray, trunc: Truncation) -> float:
    """Mechanical occupation, exposed as a convergence diagnostic only."""
    weights = np.tile(np.arange(trunc.dim_phonon, dtype=float), trunc.dim_photon)
    return float(np.real(np.diag(rho)) @ weights)


def _normally_ordered_moment(rho: np.ndarray, trunc: Truncation, order: int) -> float:
    """<a^dag^k a^k> via the embedded cavity operators."""
    a = annihilation(trunc.dim_photon)
    op = a
    for _ in range(order - 1):
        op = op @ a  # a^k on the cavity factor
    full = embed_cavity(op.conj().T @ op, trunc)
    return float(np.real(np.trace(full @ rho)))


def g2_numeric(rho: np.ndarray, trunc: Truncation) -> float:
    """tr(a^dag a^dag a a rho) / tr(a^dag a rho)^2 on a bipartite state."""
    nbar = mean_photon_number(rho, trunc)
    if nbar < MEAN_PHOTON_FLOOR:
        raise ZeroMeanPhotonError(f"mean photon number {nbar:.3e} is numerically zero")
    return _normally_ordered_moment(rho, trunc, 2) / nbar**2


def g3_numeric(rho: np.ndarray, trunc: Truncation) -> float:
    """tr(a^dag^3 a^3 rho) / tr(a^dag a rho)^3 on a bipartite state."""
    nbar = mean_photon_number(rho, trunc)
    if nbar < MEAN_PHOTON_FLOOR:
        raise ZeroMeanPhotonError(f"mean photon number {nbar:.3e} is numerically zero")
    return _normally_ordered_moment(rho, trunc, 3) / nbar**3


def g2_from_distribution(dist: np.ndarray) -> float:
    """sum n(n-1) P_n / (sum n P_n)^2; equals the trace form for cavity
    operators after partial trace."""
    ns = np.arange(len(dist), dtype=float)
    nbar = float(ns @ dist)
    if nbar < MEAN_PHOTON_FLOOR:
        raise ZeroMeanPhotonError(f"mean photon number {nbar:.3e} is numerically zero")
    return float((ns * (ns - 1.0)) @ dist) / nbar**2


def g3_from_distribution(dist: np.ndarray) -> float:
    ns = np.arange(len(dist), dtype=float)
    nbar = float(ns @ dist)
    if nbar < MEAN_PHOTON_FLOOR:
        raise ZeroMeanPhotonError(f"mean photon number {nbar:.3e} is numerically zero")
    return float((ns * (ns - 1.0) * (ns - 2.0)) @ dist) / nbar**3


def _assemble(g2: float, g3: float, dist: np.ndarray, source: Source) -> ObservableReport:
    ns = np.arange(len(dist), dtype=float)
    mean = float(ns @ dist)
    deviations = poisson_deviation(dist, mean)
    return ObservableReport(
        g2_zero=g2,
        g3_zero=g3,
        mean_photon=mean,
        photon_distribution=np.asarray(dist, dtype=float),
        p1=float(dist[1]),
        poisson_deviations=deviations,
        source=source.value,
    )


def report(params: SystemParams, trunc: Truncation, source: Source | str) -> ObservableReport:
    """Run the chosen solution path and assemble every reported quantity.

    The analytic distribution is |c_n|^2 / sum |c_m|^2 padded with zeros
    beyond the three-photon state; the amplitude path uses the
    exact-within-truncation steady ray; the Lindblad path solves the full
    master equation.
    """
    source = Source(source)
    if source is Source.ANALYTIC:
        g2 = g2_analytic(params)
        g3 = g3_analytic(params)
        probs = perturbative_amplitudes(params).probabilities()
        dist = np.zeros(trunc.dim_photon)
        dist[: probs.size] = probs
        return _assemble(g2, g3, dist, source)
    if source is Source.AMPLITUDE:
        state = amp.steady_amplitudes(params, trunc)
        dist = amp.probabilities(state)
        return _assemble(g2_from_distribution(dist), g3_from_distribution(dist), dist, source)
    rho = steady_state(build_liouvillian(params, trunc))
    dist = photon_distribution(rho, trunc)
    return _assemble(g2_numeric(rho, trunc), g3_numeric(rho, trunc), dist, source)


def is_two_photon_blockade(rep: ObservableReport) -> bool:
    """Two-photon blockade criterion: g2(0) >= 1 together with g3(0) < 1."""
    return rep.g2_zero >= 1.0 and rep.g3_zero < 1.0


def single_photon_rate(p1: float, kappa: float) -> float:
    """Order-of-magnitude single-photon emission rate estimate, P1 * kappa.

    With kappa in physical frequency units this is a rate per second; it is
    a convenience figure, not a calibrated quantity.
    """
    return p1 * kappa
