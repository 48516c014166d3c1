import math
from dataclasses import replace

import numpy as np
import pytest

from pbsim.errors import StepInvalidError, ZeroMeanPhotonError
from pbsim.lindblad import (
    build_liouvillian,
    density_diagnostics,
    dump_density_matrix,
    evolve,
    g2_of_tau,
    load_density_matrix,
    steady_residual,
    steady_state,
    stable_step,
    uniqueness_gap,
    unvectorize,
    vectorize,
)
from pbsim.observables import g2_numeric, mean_photon_number
from pbsim.operators import annihilation, build_hamiltonians, embed_cavity, embed_mechanics
from pbsim.params import SystemParams, Truncation, default_1pb_params


def dense_master_rhs(params, trunc, rho):
    """Direct dense evaluation of the master equation right-hand side."""
    h = build_hamiltonians(params, trunc).full.toarray()
    a = embed_cavity(annihilation(trunc.dim_photon), trunc).toarray()
    out = -1j * (h @ rho - rho @ h)

    def dissipator(op):
        return op @ rho @ op.conj().T - 0.5 * (op.conj().T @ op @ rho + rho @ op.conj().T @ op)

    out = out + params.kappa * dissipator(a)
    if trunc.dim_phonon >= 2:
        b = embed_mechanics(annihilation(trunc.dim_phonon), trunc).toarray()
        out = out + params.gamma_m * dissipator(b)
    return out


class TestLiouvillianConstruction:
    def test_column_stacking_convention(self):
        # the convention bug catcher: superoperator action must equal the
        # dense master-equation formula on a random Hermitian matrix
        rng = np.random.default_rng(5)
        p = replace(default_1pb_params(), gain=0.02, theta=0.7, delta_c=1.1)
        trunc = Truncation(4, 2)
        liou = build_liouvillian(p, trunc)
        d = trunc.dim
        rho = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = rho + rho.conj().T
        direct = dense_master_rhs(p, trunc, rho)
        via_superop = unvectorize(liou.matrix @ vectorize(rho), d)
        scale = np.abs(direct).max()
        assert np.abs(direct - via_superop).max() <= 1e-12 * scale

    def test_pure_commutator_annihilates_identity(self):
        # kappa = gamma_m = 0 leaves only -i[H, .], which kills the identity
        p = SystemParams(kappa=0.0, gamma_m=0.0, drive=0.03, gain=0.01)
        trunc = Truncation(3, 1)
        liou = build_liouvillian(p, trunc)
        rho = np.eye(trunc.dim, dtype=complex) / trunc.dim
        out = liou.matrix @ vectorize(rho)
        assert np.abs(out).max() < 1e-14

    def test_trace_preservation(self):
        rng = np.random.default_rng(17)
        liou = build_liouvillian(default_1pb_params(), Truncation(4, 3))
        d = liou.hilbert_dim
        rho = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = (rho + rho.conj().T) / np.linalg.norm(rho)
        out = unvectorize(liou.matrix @ vectorize(rho), d)
        assert abs(np.trace(out)) < 1e-12

    def test_empty_lossy_cavity_vacuum_is_steady(self):
        p = SystemParams(drive=0.0, gain=0.0, g=0.0)
        trunc = Truncation(4, 2)
        liou = build_liouvillian(p, trunc)
        rho = np.zeros((trunc.dim, trunc.dim), dtype=complex)
        rho[0, 0] = 1.0
        assert np.abs(liou.matrix @ vectorize(rho)).max() < 1e-12


class TestSteadyState:
    def test_undriven_steady_state_is_vacuum(self):
        p = SystemParams(drive=0.0, gain=0.0)
        trunc = Truncation(4, 2)
        rho = steady_state(build_liouvillian(p, trunc))
        expected = np.zeros((trunc.dim, trunc.dim), dtype=complex)
        expected[0, 0] = 1.0
        assert np.abs(rho - expected).max() < 1e-10

    def test_residual_small(self):
        liou = build_liouvillian(default_1pb_params(), Truncation(6, 4))
        rho = steady_state(liou)
        norm = math.sqrt(float(np.abs(liou.matrix).power(2).sum()))
        assert steady_residual(liou, rho) < 1e-9 * norm

    def test_density_matrix_invariants(self):
        from pbsim.analytic import optimal_1pb
        p = optimal_1pb(default_1pb_params()).apply(default_1pb_params())
        rho = steady_state(build_liouvillian(p, Truncation(6, 4)))
        diag = density_diagnostics(rho)
        assert diag["hermiticity_defect"] <= 1e-10
        assert diag["trace"] == pytest.approx(1.0, abs=1e-10)
        assert diag["min_eigenvalue"] >= -1e-8

    def test_blockade_regime_g2(self):
        from pbsim.analytic import optimal_1pb
        p = optimal_1pb(default_1pb_params()).apply(default_1pb_params())
        trunc = Truncation(8, 6)
        rho = steady_state(build_liouvillian(p, trunc))
        assert g2_numeric(rho, trunc) < 0.1

    def test_phonon_truncation_convergence(self):
        p = default_1pb_params()
        values = {}
        for n_phonon in (6, 8):
            trunc = Truncation(8, n_phonon)
            rho = steady_state(build_liouvillian(p, trunc))
            values[n_phonon] = g2_numeric(rho, trunc)
        assert abs(values[6] - values[8]) / values[8] < 5e-3


class TestEvolve:
    def test_zero_horizon(self):
        liou = build_liouvillian(default_1pb_params(), Truncation(3, 1))
        rho0 = np.zeros((liou.hilbert_dim,) * 2, dtype=complex)
        rho0[0, 0] = 1.0
        assert np.array_equal(evolve(liou, rho0, 0.0), rho0)

    def test_single_photon_decay_oracle(self):
        # <n>(t) = exp(-kappa t) for a lossy empty cavity
        p = SystemParams(drive=0.0, gain=0.0, g=0.0)
        trunc = Truncation(3, 0)
        liou = build_liouvillian(p, trunc)
        rho0 = np.zeros((4, 4), dtype=complex)
        rho0[1, 1] = 1.0
        rho_t = evolve(liou, rho0, 1.0, dt=1e-3)
        assert mean_photon_number(rho_t, trunc) == pytest.approx(math.exp(-1.0), abs=1e-5)

    def test_hermiticity_and_trace_preserved(self):
        rng = np.random.default_rng(29)
        liou = build_liouvillian(default_1pb_params(), Truncation(4, 2))
        d = liou.hilbert_dim
        rho = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = rho @ rho.conj().T
        rho /= np.trace(rho).real
        out = evolve(liou, rho, 2.0)
        diag = density_diagnostics(out)
        assert diag["hermiticity_defect"] <= 1e-10
        assert abs(diag["trace"] - 1.0) < 1e-8

    def test_long_time_evolution_matches_null_space(self):
        # oracle equivalence between the two steady-state routes, run at a
        # parameter point whose slowest mode relaxes well inside the horizon
        p = replace(default_1pb_params(), gamma_m=1.0, delta_c=0.3, gain=0.01, theta=1.0)
        trunc = Truncation(5, 3)
        liou = build_liouvillian(p, trunc)
        target = steady_state(liou)
        rho0 = np.zeros((trunc.dim, trunc.dim), dtype=complex)
        rho0[0, 0] = 1.0
        rho_t = evolve(liou, rho0, 60.0)
        eigs = np.linalg.eigvalsh(rho_t - target)
        assert 0.5 * np.abs(eigs).sum() < 1e-6

    def test_step_validation(self):
        liou = build_liouvillian(default_1pb_params(), Truncation(3, 0))
        rho0 = np.zeros((4, 4), dtype=complex)
        rho0[0, 0] = 1.0
        with pytest.raises(StepInvalidError):
            evolve(liou, rho0, 1.0, dt=-0.1)
        with pytest.raises(StepInvalidError):
            evolve(liou, rho0, -1.0)


@pytest.fixture(scope="module")
def blockade_setup():
    from pbsim.analytic import optimal_1pb
    p = optimal_1pb(default_1pb_params()).apply(default_1pb_params())
    trunc = Truncation(5, 3)
    liou = build_liouvillian(p, trunc)
    return liou, steady_state(liou), trunc


class TestG2OfTau:
    def test_zero_delay_matches_equal_time(self, blockade_setup):
        liou, rho, trunc = blockade_setup
        values = g2_of_tau(liou, rho, np.array([0.0]))
        assert values[0] == pytest.approx(g2_numeric(rho, trunc), abs=1e-8)

    def test_rises_toward_uncorrelated(self, blockade_setup):
        liou, rho, trunc = blockade_setup
        taus = np.linspace(0.0, 15.0, 40)
        values = g2_of_tau(liou, rho, taus)
        assert values.min() >= values[0] - 1e-9
        assert values[-1] == pytest.approx(1.0, abs=0.05)

    def test_vacuum_state_rejected(self):
        p = SystemParams(drive=0.0, gain=0.0)
        trunc = Truncation(3, 1)
        liou = build_liouvillian(p, trunc)
        rho = np.zeros((trunc.dim, trunc.dim), dtype=complex)
        rho[0, 0] = 1.0
        with pytest.raises(ZeroMeanPhotonError):
            g2_of_tau(liou, rho, np.array([0.0, 1.0]))

    def test_grid_validation(self, blockade_setup):
        liou, rho, _ = blockade_setup
        with pytest.raises(StepInvalidError):
            g2_of_tau(liou, rho, np.array([-1.0, 0.0]))
        with pytest.raises(StepInvalidError):
            g2_of_tau(liou, rho, np.array([1.0, 0.5]))


class TestDiagnostics:
    def test_uniqueness_gap_unique_case(self):
        p = replace(default_1pb_params(), gamma_m=0.01)
        s_min, s_next = uniqueness_gap(build_liouvillian(p, Truncation(4, 2)))
        # unique steady state: exactly one numerically-zero singular value
        assert s_min < 1e-10
        assert s_next > 1e-4

    def test_uniqueness_gap_flags_degenerate_manifold(self):
        # no mechanical dissipation and no coupling: every mechanical Fock
        # population is separately conserved
        p = SystemParams(g=0.0, gamma_m=0.0)
        s_min, s_next = uniqueness_gap(build_liouvillian(p, Truncation(3, 2)))
        assert s_next < 1e-10

    def test_uniqueness_gap_size_guard(self):
        liou = build_liouvillian(default_1pb_params(), Truncation(8, 6))
        with pytest.raises(ValueError):
            uniqueness_gap(liou, max_dim=100)

    def test_stable_step_positive(self):
        liou = build_liouvillian(default_1pb_params(), Truncation(5, 3))
        assert 0.0 < stable_step(liou) < 1.0

    def test_density_matrix_dump_round_trip(self, tmp_path):
        rng = np.random.default_rng(31)
        rho = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        path = tmp_path / "rho.txt"
        dump_density_matrix(rho, path)
        header = path.read_text().splitlines()[0]
        assert header == "6"
        assert np.array_equal(load_density_matrix(path), rho)
