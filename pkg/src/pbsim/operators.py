"""Truncated Fock-space operators and the three Hamiltonians.

Operators are scipy CSR matrices with complex entries and no explicit
zeros.  The bipartite ordering is fixed once and for all as
cavity (x) mechanics: ``tensor(cavity_op, mech_op)``, so a bipartite basis
index decomposes as ``i = n_photon * dim_phonon + n_phonon``.  Every
downstream embedding and partial trace relies on this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

import numpy as np
import scipy.sparse as sp

from .errors import DimTooSmallError
from .params import SystemParams, Truncation


def annihilation(dim: int) -> sp.csr_matrix:
    """Ladder operator with entries sqrt(n) at (n-1, n), n = 1..dim-1."""
    if dim < 2:
        raise DimTooSmallError(f"annihilation needs dim >= 2, got {dim}")
    n = np.arange(1, dim)
    return sp.csr_matrix((np.sqrt(n).astype(complex), (n - 1, n)), shape=(dim, dim))


def creation(dim: int) -> sp.csr_matrix:
    return annihilation(dim).conj().T.tocsr()


def number_operator(dim: int) -> sp.csr_matrix:
    return sp.diags(np.arange(dim, dtype=complex), format="csr")


def identity_operator(dim: int) -> sp.csr_matrix:
    return sp.identity(dim, dtype=complex, format="csr")


def tensor(first: sp.spmatrix, second: sp.spmatrix) -> sp.csr_matrix:
    """Kronecker product; dimension is the product of the dimensions."""
    return sp.kron(first, second, format="csr")


def hermiticity_defect(op: sp.spmatrix) -> float:
    """Largest entrywise deviation of ``op`` from its adjoint."""
    diff = (op - op.conj().T).tocoo()
    return float(np.abs(diff.data).max()) if diff.nnz else 0.0


def is_hermitian(op: sp.spmatrix, tol: float = 1e-12) -> bool:
    return hermiticity_defect(op) <= tol


def to_coordinates(op: sp.spmatrix) -> list[tuple[int, int, float, float]]:
    """(row, col, re, im) tuples in row-major order, zeros dropped."""
    coo = op.tocoo()
    coo.sum_duplicates()
    order = np.lexsort((coo.col, coo.row))
    return [
        (int(coo.row[k]), int(coo.col[k]), float(coo.data[k].real), float(coo.data[k].imag))
        for k in order
        if coo.data[k] != 0
    ]


def dump_coordinates(op: sp.spmatrix, stream: IO[str]) -> None:
    """Debug dump, one ``row col re im`` line per nonzero entry."""
    for row, col, re, im in to_coordinates(op):
        stream.write(f"{row} {col} {re!r} {im!r}\n")


@dataclass(frozen=True)
class HamiltonianSet:
    """Bipartite, reduced, and non-Hermitian effective Hamiltonians.

    ``full`` acts on cavity (x) mechanics, ``reduced`` and ``effective`` on
    the cavity alone; ``effective = reduced - 1j*kappa/2 * n_photon``.
    """

    full: sp.csr_matrix
    reduced: sp.csr_matrix
    effective: sp.csr_matrix
    truncation: Truncation


def _clean(op: sp.spmatrix) -> sp.csr_matrix:
    out = op.tocsr()
    out.sum_duplicates()
    out.eliminate_zeros()
    return out


def build_hamiltonians(params: SystemParams, trunc: Truncation) -> HamiltonianSet:
    """Assemble the three Hamiltonians for the given parameters.

    The bipartite operator contains the free cavity and mechanical terms,
    the radiation-pressure coupling -g n_a (b + b^dag), and the pump/drive
    terms G e^{i theta} a^dag^2 + E a^dag plus their Hermitian conjugates.
    The reduced operator replaces the mechanics by the Kerr term
    -g^2/omega_m (a^dag a)^2.  Pump terms that would reach above the photon
    cutoff are simply absent; there is no boundary renormalization.
    """
    da, dm = trunc.dim_photon, trunc.dim_phonon
    a = annihilation(da)
    ad = a.conj().T.tocsr()
    n_a = number_operator(da)  # exact integer diagonal, not sqrt(n)**2

    pump = params.gain * np.exp(1j * params.theta) * (ad @ ad) + params.drive * ad
    drive_terms = pump + pump.conj().T

    reduced = _clean(
        params.delta_c * n_a - params.kerr_shift * (n_a @ n_a) + drive_terms
    )
    effective = _clean(reduced - 0.5j * params.kappa * n_a)

    i_m = identity_operator(dm)
    if dm >= 2:
        b = annihilation(dm)
        n_b = number_operator(dm)
        x_b = (b + b.conj().T).tocsr()
    else:
        n_b = sp.csr_matrix((1, 1), dtype=complex)
        x_b = sp.csr_matrix((1, 1), dtype=complex)

    full = _clean(
        params.delta_c * tensor(n_a, i_m)
        + params.omega_m * tensor(identity_operator(da), n_b)
        - params.g * tensor(n_a, x_b)
        + tensor(drive_terms, i_m)
    )
    return HamiltonianSet(full=full, reduced=reduced, effective=effective, truncation=trunc)


def embed_cavity(op: sp.spmatrix, trunc: Truncation) -> sp.csr_matrix:
    """Lift a cavity operator into the bipartite space (cavity first)."""
    return tensor(op, identity_operator(trunc.dim_phonon))


def embed_mechanics(op: sp.spmatrix, trunc: Truncation) -> sp.csr_matrix:
    return tensor(identity_operator(trunc.dim_photon), op)
