"""Exact master-equation path: Liouvillian, steady state, propagation.

The equation of motion is
    d rho / dt = -1j [H, rho] + kappa D[a] rho + gamma_m D[b] rho,
with zero-temperature dissipators D[o] rho = o rho o^dag
- (o^dag o rho + rho o^dag o) / 2 and H the full bipartite Hamiltonian.

Vectorization convention (used everywhere in this module): column stacking,
``vec(rho) = rho.reshape(-1, order="F")``, under which
``vec(A rho B) = kron(B.T, A) vec(rho)``.  Getting this wrong is the classic
superoperator bug, so the identity -1j[H, rho] is unit-tested against a
dense matrix computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import SingularAfterConstraintError, StepInvalidError, ZeroMeanPhotonError
from .operators import annihilation, build_hamiltonians, embed_cavity, embed_mechanics, identity_operator
from .params import SystemParams, Truncation

MEAN_PHOTON_FLOOR = 1e-14

# RK4 keeps roughly |lambda| * dt <= 2.8 stable along the imaginary axis;
# the 1-norm bounds the spectral radius, and 2.0 leaves margin.
_RK4_STABILITY = 2.0


@dataclass(frozen=True)
class Liouvillian:
    """Sparse generator acting on column-stacked density matrices."""

    matrix: sp.csr_matrix
    params: SystemParams
    truncation: Truncation

    @property
    def dim(self) -> int:
        """Dimension of the vectorized space (hilbert_dim squared)."""
        return self.matrix.shape[0]

    @property
    def hilbert_dim(self) -> int:
        return self.truncation.dim


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvectorize(vec: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(vec, dtype=complex).reshape((dim, dim), order="F")


def _dissipator(op: sp.spmatrix) -> sp.csr_matrix:
    """Column-stacked superoperator for D[op]."""
    dim = op.shape[0]
    ident = identity_operator(dim)
    opdop = (op.conj().T @ op).tocsr()
    return (
        sp.kron(op.conj(), op, format="csr")
        - 0.5 * sp.kron(ident, opdop, format="csr")
        - 0.5 * sp.kron(opdop.T, ident, format="csr")
    )


def hamiltonian_superoperator(h: sp.spmatrix) -> sp.csr_matrix:
    """Column-stacked superoperator for rho -> -1j [h, rho]."""
    dim = h.shape[0]
    ident = identity_operator(dim)
    return (-1j * (sp.kron(ident, h, format="csr") - sp.kron(h.T, ident, format="csr"))).tocsr()


def build_liouvillian(params: SystemParams, trunc: Truncation) -> Liouvillian:
    """Assemble the full generator for the given parameters."""
    hs = build_hamiltonians(params, trunc)
    mat = hamiltonian_superoperator(hs.full)
    if params.kappa != 0.0:
        mat = mat + params.kappa * _dissipator(embed_cavity(annihilation(trunc.dim_photon), trunc))
    if params.gamma_m != 0.0 and trunc.dim_phonon >= 2:
        mat = mat + params.gamma_m * _dissipator(embed_mechanics(annihilation(trunc.dim_phonon), trunc))
    mat = mat.tocsr()
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return Liouvillian(matrix=mat, params=params, truncation=trunc)


def constrained_system(liou: Liouvillian) -> tuple[sp.csc_matrix, np.ndarray]:
    """The vectorized system with row 0 replaced by the trace constraint.

    Row 0 (the d rho_00 / dt equation) is a dependent row of any
    trace-preserving generator, so replacing it keeps the physics while
    pinning trace(rho) = 1 through the right-hand side.
    """
    d = liou.hilbert_dim
    d2 = liou.dim
    coo = liou.matrix.tocoo()
    keep = coo.row != 0
    rows = np.concatenate([coo.row[keep], np.zeros(d, dtype=coo.row.dtype)])
    cols = np.concatenate([coo.col[keep], np.arange(d) * (d + 1)])
    data = np.concatenate([coo.data[keep], np.ones(d, dtype=complex)])
    constrained = sp.csc_matrix((data, (rows, cols)), shape=(d2, d2))
    b = np.zeros(d2, dtype=complex)
    b[0] = 1.0
    return constrained, b


def _solve_constrained(constrained: sp.csc_matrix, b: np.ndarray) -> np.ndarray:
    """Fast path: incomplete-LU preconditioned LGMRES; exact LU fallback.

    The factorization fill-in of the exact LU dominates the cost at the
    default truncations, so an ILU preconditioner plus a handful of Krylov
    iterations is several times faster.  Any breakdown (singular ILU, no
    convergence, poor residual) falls back to the direct factorization with
    one step of iterative refinement.
    """
    try:
        ilu = spla.spilu(constrained, drop_tol=1e-3, fill_factor=10)
        precond = spla.LinearOperator(constrained.shape, ilu.solve)
        # a Krylov breakdown on an instantly-converged system divides by
        # zero internally; the residual check below is the real gate
        with np.errstate(invalid="ignore", divide="ignore"):
            x, info = spla.lgmres(constrained, b, M=precond, rtol=1e-13,
                                  atol=0.0, maxiter=100)
        if info == 0 and np.all(np.isfinite(x)):
            if np.linalg.norm(b - constrained @ x) <= 1e-10:
                return x
    except RuntimeError:
        pass
    try:
        lu = spla.splu(constrained)
        x = lu.solve(b)
        x += lu.solve(b - constrained @ x)
    except RuntimeError as exc:
        raise SingularAfterConstraintError(str(exc)) from exc
    return x


def steady_state(liou: Liouvillian, check: bool = True) -> np.ndarray:
    """Solve L rho = 0 with trace(rho) = 1 by a trace-constrained solve.

    The result is Hermitized and, if ``check`` is set, verified for trace,
    Hermiticity, and positivity up to numerical tolerances.
    """
    constrained, b = constrained_system(liou)
    x = _solve_constrained(constrained, b)
    if not np.all(np.isfinite(x)):
        raise SingularAfterConstraintError("constrained solve returned non-finite entries")

    rho = unvectorize(x, liou.hilbert_dim)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real

    if check:
        diag = density_diagnostics(rho)
        if diag["hermiticity_defect"] > 1e-10:
            raise SingularAfterConstraintError(
                f"steady state is not Hermitian: defect {diag['hermiticity_defect']:.3e}"
            )
        if abs(diag["trace"] - 1.0) > 1e-10:
            raise SingularAfterConstraintError(f"steady state trace is {diag['trace']!r}")
        if diag["min_eigenvalue"] < -1e-8:
            raise SingularAfterConstraintError(
                f"steady state has eigenvalue {diag['min_eigenvalue']:.3e} < -1e-8"
            )
    return rho


def density_diagnostics(rho: np.ndarray) -> dict:
    """Hermiticity defect, trace, and smallest eigenvalue of a state."""
    herm = float(np.abs(rho - rho.conj().T).max())
    sym = 0.5 * (rho + rho.conj().T)
    eigs = np.linalg.eigvalsh(sym)
    return {
        "hermiticity_defect": herm,
        "trace": float(np.trace(rho).real),
        "min_eigenvalue": float(eigs.min()),
    }


def steady_residual(liou: Liouvillian, rho: np.ndarray) -> float:
    """Euclidean norm of L vec(rho), the steady-state defect."""
    return float(np.linalg.norm(liou.matrix @ vectorize(rho)))


def stable_step(liou: Liouvillian) -> float:
    """Fixed RK4 step from the 1-norm bound on the spectral radius."""
    one_norm = float(np.abs(liou.matrix).sum(axis=0).max())
    return _RK4_STABILITY / max(one_norm, 1.0)


def evolve(
    liou: Liouvillian,
    rho0: np.ndarray,
    t_final: float,
    dt: float | None = None,
) -> np.ndarray:
    """Fixed-step classical Runge-Kutta propagation of d rho/dt = L rho.

    ``dt`` defaults to a stability-safe step derived from the operator
    norm.  The trace is conserved to integrator roundoff because every
    stage lies in the image of a trace-annihilating generator.
    """
    if dt is None:
        dt = stable_step(liou)
    if not (dt > 0.0) or not np.isfinite(dt):
        raise StepInvalidError(f"dt must be > 0, got {dt}")
    if t_final < 0.0 or not np.isfinite(t_final):
        raise StepInvalidError(f"t_final must be >= 0, got {t_final}")
    v = vectorize(rho0)
    if t_final == 0.0:
        return unvectorize(v, liou.hilbert_dim)
    _propagate(liou.matrix, v, t_final, dt)
    return unvectorize(v, liou.hilbert_dim)


def _propagate(mat: sp.csr_matrix, v: np.ndarray, span: float, dt: float) -> None:
    """Advance ``v`` in place by ``span`` using RK4 steps of at most ``dt``."""
    n_full, remainder = divmod(span, dt)
    steps = int(n_full)
    tail = remainder if remainder > 1e-12 * max(span, dt) else 0.0
    for _ in range(steps):
        _rk4_step(mat, v, dt)
    if tail > 0.0:
        _rk4_step(mat, v, tail)


def _rk4_step(mat: sp.csr_matrix, v: np.ndarray, h: float) -> None:
    k1 = mat @ v
    k2 = mat @ (v + 0.5 * h * k1)
    k3 = mat @ (v + 0.5 * h * k2)
    k4 = mat @ (v + h * k3)
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def g2_of_tau(
    liou: Liouvillian,
    rho_s: np.ndarray,
    taus: np.ndarray,
    dt: float | None = None,
) -> np.ndarray:
    """Delayed second-order correlation via the regression theorem.

    The operator-seeded matrix a rho_s a^dag is propagated under L; at each
    delay the photon-number expectation is read out and divided by the
    squared steady-state mean photon number.  The zero-delay entry equals
    the equal-time g2 by construction.
    """
    taus = np.asarray(taus, dtype=float)
    if taus.size == 0:
        return np.zeros(0)
    if taus[0] < 0.0 or np.any(np.diff(taus) < 0.0):
        raise StepInvalidError("tau grid must be nonnegative and nondecreasing")
    trunc = liou.truncation
    weights = np.repeat(np.arange(trunc.dim_photon, dtype=float), trunc.dim_phonon)
    nbar = float(np.real(np.diag(rho_s)) @ weights)
    if nbar < MEAN_PHOTON_FLOOR:
        raise ZeroMeanPhotonError(f"mean photon number {nbar:.3e} is numerically zero")

    a_full = embed_cavity(annihilation(trunc.dim_photon), trunc)
    seeded = np.asarray(a_full @ rho_s @ a_full.conj().T)
    v = vectorize(seeded)
    if dt is None:
        dt = stable_step(liou)

    d = liou.hilbert_dim
    diag_idx = np.arange(d) * (d + 1)
    out = np.empty(taus.size)
    current = 0.0
    for k, tau in enumerate(taus):
        span = tau - current
        if span > 0.0:
            _propagate(liou.matrix, v, span, dt)
            current = tau
        out[k] = float(np.real(v[diag_idx]) @ weights) / nbar**2
    return out


def uniqueness_gap(liou: Liouvillian, max_dim: int = 2500) -> tuple[float, float]:
    """Two smallest singular values of the generator (dense diagnostic).

    Exactly one singular value near zero (the steady state) separated from
    the next by many orders of magnitude indicates a unique steady state;
    two near-zero values signal a degenerate manifold.  Reported, not
    asserted, by the test suite.  Refuses absurd sizes.
    """
    if liou.dim > max_dim:
        raise ValueError(f"uniqueness_gap is a dense diagnostic; dim {liou.dim} > {max_dim}")
    singular = np.linalg.svd(liou.matrix.toarray(), compute_uv=False)
    return float(singular[-1]), float(singular[-2])


def dump_density_matrix(rho: np.ndarray, path: str | Path) -> None:
    """Text dump: dimension header, then row-major ``re im`` pairs."""
    rho = np.asarray(rho, dtype=complex)
    with open(path, "w") as fh:
        fh.write(f"{rho.shape[0]}\n")
        for value in rho.reshape(-1):
            fh.write(f"{float(value.real)!r} {float(value.imag)!r}\n")


def load_density_matrix(path: str | Path) -> np.ndarray:
    with open(path) as fh:
        dim = int(fh.readline())
        flat = np.array(
            [complex(float(re), float(im)) for re, im in (line.split() for line in fh)]
        )
    return flat.reshape((dim, dim))
