import io
from dataclasses import replace

import numpy as np
import pytest
import scipy.sparse as sp

from pbsim.errors import DimTooSmallError
from pbsim.operators import (
    annihilation,
    build_hamiltonians,
    creation,
    dump_coordinates,
    embed_cavity,
    hermiticity_defect,
    identity_operator,
    is_hermitian,
    number_operator,
    tensor,
    to_coordinates,
)
from pbsim.params import SystemParams, Truncation, default_1pb_params


class TestLadderOperators:
    def test_dim2_single_entry(self):
        a = annihilation(2)
        assert to_coordinates(a) == [(0, 1, 1.0, 0.0)]

    def test_dim4_superdiagonal(self):
        a = annihilation(4).toarray()
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 1] = 1.0
        expected[1, 2] = np.sqrt(2.0)
        expected[2, 3] = np.sqrt(3.0)
        assert np.array_equal(a, expected)

    def test_dim1_rejected(self):
        with pytest.raises(DimTooSmallError):
            annihilation(1)

    def test_commutator_truncation_artifact(self):
        # [a, a+] is the identity except the last diagonal entry -(dim-1);
        # sqrt(n)**2 rounding keeps this from being bit-exact at larger n
        for dim in (2, 5, 9):
            a = annihilation(dim)
            comm = (a @ creation(dim) - creation(dim) @ a).toarray()
            expected = np.eye(dim, dtype=complex)
            expected[-1, -1] = -(dim - 1)
            assert np.abs(comm - expected).max() <= 1e-12 * dim

    def test_number_operator(self):
        n = number_operator(5).toarray()
        assert np.array_equal(np.diag(n), np.arange(5))


class TestTensor:
    def test_identity_tensor_identity(self):
        t = tensor(identity_operator(2), identity_operator(3))
        assert (t != identity_operator(6)).nnz == 0

    def test_acts_on_first_factor(self):
        # a (x) 1 sends |1,0> to |0,0>
        op = tensor(annihilation(2), identity_operator(2))
        state = np.zeros(4, dtype=complex)
        state[2] = 1.0  # photon index 1, phonon index 0
        out = op @ state
        expected = np.zeros(4, dtype=complex)
        expected[0] = 1.0
        assert np.array_equal(out, expected)

    def test_kronecker_sparsity(self):
        rng = np.random.default_rng(3)
        a = sp.random(6, 6, density=0.3, random_state=rng.integers(1 << 31)).tocsr()
        b = sp.random(5, 5, density=0.4, random_state=rng.integers(1 << 31)).tocsr()
        a.eliminate_zeros(); b.eliminate_zeros()
        assert tensor(a, b).nnz == a.nnz * b.nnz


class TestHamiltonians:
    def test_free_hamiltonian_diagonal(self):
        p = SystemParams(drive=0.0, gain=0.0, g=0.0, delta_c=0.7)
        trunc = Truncation(3, 2)
        hs = build_hamiltonians(p, trunc)
        full = hs.full.toarray()
        assert np.abs(full - np.diag(np.diag(full))).max() == 0.0
        na = np.repeat(np.arange(4), 3)
        nb = np.tile(np.arange(3), 4)
        assert np.allclose(np.diag(full).real, p.delta_c * na + p.omega_m * nb)

    def test_reduced_diagonal_hand_values(self):
        # -g^2/omega_m * n^2 with the default coupling, pumped terms off-diagonal
        hs = build_hamiltonians(default_1pb_params(), Truncation(3, 0))
        assert np.allclose(hs.reduced.diagonal().real, [0.0, -0.25, -1.0, -2.25])

    def test_reduced_diagonal_matches_spectrum_level(self):
        from pbsim.analytic import spectrum_level
        p = replace(default_1pb_params(), delta_c=1.3, gain=0.01, theta=0.4)
        hs = build_hamiltonians(p, Truncation(6, 0))
        diag = hs.reduced.diagonal().real
        for n in range(7):
            assert diag[n] == pytest.approx(spectrum_level(p, n), abs=1e-14)

    def test_full_is_hermitian(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            p = SystemParams(
                delta_c=rng.uniform(-3, 3), omega_m=rng.uniform(20, 200),
                g=rng.uniform(0, 20), gain=rng.uniform(0, 0.1),
                theta=rng.uniform(0, 6.28), drive=rng.uniform(0, 0.1),
            )
            hs = build_hamiltonians(p, Truncation(5, 3))
            assert hermiticity_defect(hs.full) <= 1e-12

    def test_effective_anti_hermitian_part(self):
        p = default_1pb_params()
        trunc = Truncation(6, 0)
        hs = build_hamiltonians(p, trunc)
        n_a = number_operator(trunc.dim_photon)
        diff = (hs.effective - hs.reduced + 0.5j * p.kappa * n_a).toarray()
        assert np.abs(diff).max() == 0.0

    def test_undriven_reduced_commutes_with_number(self):
        p = SystemParams(drive=0.0, gain=0.0)
        hs = build_hamiltonians(p, Truncation(5, 0))
        n_a = number_operator(6)
        comm = hs.reduced @ n_a - n_a @ hs.reduced
        assert comm.nnz == 0

    def test_pump_terms_respect_truncation(self):
        # a+^2 entries exist only where both photon indices fit the cutoff
        p = SystemParams(drive=0.0, gain=0.01, g=0.0, delta_c=0.0)
        hs = build_hamiltonians(p, Truncation(3, 0))
        rows, cols = hs.reduced.nonzero()
        assert set(zip(rows.tolist(), cols.tolist())) == {(2, 0), (3, 1), (0, 2), (1, 3)}

    def test_is_hermitian_predicate(self):
        assert is_hermitian(number_operator(4))
        assert not is_hermitian(annihilation(4))


class TestEmbedding:
    def test_embed_cavity_matches_kron_order(self):
        trunc = Truncation(3, 2)
        direct = tensor(annihilation(4), identity_operator(3))
        assert (embed_cavity(annihilation(4), trunc) != direct).nnz == 0


class TestCoordinateDump:
    def test_format_and_order(self):
        op = annihilation(3)
        buf = io.StringIO()
        dump_coordinates(op, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0].split() == ["0", "1", "1.0", "0.0"]
        assert len(lines) == op.nnz

    def test_zero_entries_absent(self):
        op = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
        op[0, 1] = 0.0
        assert to_coordinates(op) == []
