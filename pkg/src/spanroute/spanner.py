"""Barycentric spanners of finite vector sets (determinant-swap construction)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import NonConvergence, OutOfSpan, RankDeficient

RESIDUAL_TOL = 1e-9
SWAP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BarycentricSpanner:
    """d members of a vector set that express every member with bounded coefficients.

    ``coords`` are the d coordinates on which determinants and solves are
    taken; the projection onto them is injective on the span of the set.
    """

    basis: np.ndarray
    basis_ids: tuple[int, ...]
    coords: tuple[int, ...]
    approx_C: float = 1.0
    det_history: tuple[float, ...] = field(default=())

    def __post_init__(self):
        lu = sla.lu_factor(self.basis[:, list(self.coords)].T)
        object.__setattr__(self, "_lu", lu)

    @property
    def d(self) -> int:
        return len(self.basis_ids)

    def coefficients(self, x) -> np.ndarray:
        """Coefficients a with sum_i a_i * basis_i == x."""
        x = np.asarray(x, dtype=float)
        a = sla.lu_solve(self._lu, x[list(self.coords)])
        resid = np.max(np.abs(a @ self.basis - x)) if x.size else 0.0
        if resid > RESIDUAL_TOL * max(1.0, float(np.max(np.abs(x), initial=0.0))):
            raise OutOfSpan(f"vector lies outside the spanned subspace (residual {resid:.3g})")
        return a

    def coefficient_matrix(self, vectors) -> np.ndarray:
        """Row n holds the coefficients of vectors[n]."""
        return np.array([self.coefficients(x) for x in np.asarray(vectors, dtype=float)])


def _greedy_independent(X, d, tol):
    chosen = []
    q = np.zeros((0, X.shape[1]))
    for i, x in enumerate(X):
        r = x - q.T @ (q @ x)
        nrm = np.linalg.norm(r)
        if nrm > tol * max(1.0, np.linalg.norm(x)):
            chosen.append(i)
            q = np.vstack([q, r / nrm])
            if len(chosen) == d:
                break
    return chosen


def build_spanner(vectors, d: int, approx_C: float = 1.0) -> BarycentricSpanner:
    """Determinant-swap barycentric spanner over a finite vector set.

    With ``approx_C == 1`` every member gets coefficients in [-1, 1]; larger
    values trade the bound (coefficients in [-C, C]) for fewer swaps.
    """
    if approx_C < 1:
        raise ValueError("approx_C must be >= 1")
    X = np.atleast_2d(np.asarray(vectors, dtype=float))
    n_vec = X.shape[0]
    tol = 1e-10
    if d < 1 or np.linalg.matrix_rank(X, tol=tol * max(1.0, np.abs(X).max())) != d:
        raise RankDeficient(f"vector set does not span a {d}-dimensional subspace")
    ids = _greedy_independent(X, d, tol)
    if len(ids) < d:
        raise RankDeficient(f"found only {len(ids)} independent vectors, need {d}")

    _, _, piv = sla.qr(X[ids], pivoting=True, mode="economic")
    coords = tuple(sorted(int(c) for c in piv[:d]))
    Xp = X[:, list(coords)]

    history = [abs(np.linalg.det(Xp[ids]))]
    limit = d * n_vec * 64
    swaps = 0
    improved = True
    while improved:
        improved = False
        for i in range(d):
            # Cramer: replacing slot i by x scales |det| by |coefficient_i(x)|
            A = np.linalg.solve(Xp[ids].T, Xp.T)
            j = int(np.argmax(np.abs(A[i])))
            if abs(A[i, j]) > approx_C * (1 + SWAP_TOL):
                ids[i] = j
                history.append(abs(np.linalg.det(Xp[ids])))
                swaps += 1
                improved = True
                if swaps > limit:
                    raise NonConvergence(f"no convergence after {swaps} swaps")
    return BarycentricSpanner(
        basis=X[ids].copy(),
        basis_ids=tuple(int(i) for i in ids),
        coords=coords,
        approx_C=float(approx_C),
        det_history=tuple(float(h) for h in history),
    )


def coefficients(spanner: BarycentricSpanner, x) -> np.ndarray:
    return spanner.coefficients(x)
