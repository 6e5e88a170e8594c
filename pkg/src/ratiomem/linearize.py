"""Jacobians of the undelayed and delayed systems at the interior equilibrium.

Both matrices are assembled from the same four families of scalars,
written with u_i* = y_i*/x* and p_i'* = p_i'(u_i*):

    a11      = r g(x*) + r x* g'(x*) + sum_i (u_i*)^2 p_i'*
    diag_i   = u_i* p_i'*                    (own-ratio crowding, < 0)
    row_i    = -d_i - u_i* p_i'*             (prey loss per predator, < 0)
    col_i    = -(u_i*)^2 p_i'*               (prey benefit to predator, > 0)

The undelayed Jacobian is an (n+1)x(n+1) arrow matrix: first row
(a11, row), first column (a11, col), diag_i on the diagonal, zeros
elsewhere.  The delayed Jacobian is (n+2)x(n+2): the col_i entries move
to the last column (predators now respond to the memory variable), the
first column empties below a11, and the memory row (alpha, 0, ..., 0,
-alpha) closes the loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import Equilibrium, ModelParams


def arrow_matrix(a11: float, diag, row, col) -> np.ndarray:
    """(n+1)x(n+1) undelayed interaction matrix from named entries."""
    diag = np.asarray(diag, dtype=float)
    row = np.asarray(row, dtype=float)
    col = np.asarray(col, dtype=float)
    n = diag.shape[0]
    A = np.zeros((n + 1, n + 1))
    A[0, 0] = a11
    A[0, 1:] = row
    A[1:, 0] = col
    A[np.arange(1, n + 1), np.arange(1, n + 1)] = diag
    return A


def delayed_matrix(a11: float, diag, row, col, alpha: float) -> np.ndarray:
    """(n+2)x(n+2) delayed interaction matrix from the same entries."""
    diag = np.asarray(diag, dtype=float)
    row = np.asarray(row, dtype=float)
    col = np.asarray(col, dtype=float)
    n = diag.shape[0]
    A = np.zeros((n + 2, n + 2))
    A[0, 0] = a11
    A[0, 1:n + 1] = row
    A[np.arange(1, n + 1), np.arange(1, n + 1)] = diag
    A[1:n + 1, n + 1] = col
    A[n + 1, 0] = alpha
    A[n + 1, n + 1] = -alpha
    return A


@dataclass(frozen=True)
class JacobianPair:
    """Undelayed matrix A, optional delayed matrix A_d, and their entries."""

    a11: float
    a_diag: np.ndarray
    a_row: np.ndarray
    a_col: np.ndarray
    alpha: float | None
    A: np.ndarray
    A_d: np.ndarray | None

    @classmethod
    def from_entries(cls, a11, diag, row, col, alpha=None) -> "JacobianPair":
        diag = np.asarray(diag, dtype=float)
        row = np.asarray(row, dtype=float)
        col = np.asarray(col, dtype=float)
        A = arrow_matrix(a11, diag, row, col)
        A_d = None if alpha is None else delayed_matrix(a11, diag, row, col, alpha)
        for m in (A, A_d, diag, row, col):
            if m is not None:
                m.setflags(write=False)
        return cls(a11=float(a11), a_diag=diag, a_row=row, a_col=col,
                   alpha=None if alpha is None else float(alpha), A=A, A_d=A_d)

    @property
    def n(self) -> int:
        return self.a_diag.shape[0]

    def with_alpha(self, alpha: float | None) -> "JacobianPair":
        return JacobianPair.from_entries(
            self.a11, self.a_diag, self.a_row, self.a_col, alpha)

    def has_delay_pattern(self) -> bool:
        """Sign pattern required by the delayed stability theory.

        a11 non-positive, crowding entries negative, prey-loss row
        negative, memory coupling column positive.
        """
        return bool(
            self.a11 <= 0.0
            and np.all(self.a_diag < 0.0)
            and np.all(self.a_row < 0.0)
            and np.all(self.a_col > 0.0)
        )


def build_a11(params: ModelParams, eq: Equilibrium) -> float:
    """Prey self-interaction entry of the Jacobian at the equilibrium.

    For logistic growth the growth part r g + r x g' is evaluated through
    the equilibrium identity r g(x*) = sum_i d_i u_i*, which gives
    2 sum_i d_i u_i* - r without cancellation; the sign of a11 right at
    its zero crossing then comes out exact whenever the inputs do.
    """
    crowding = sum(u * u * resp.derivative(u)
                   for resp, u in zip(params.responses, eq.u_star))
    if params.growth.kind == "logistic":
        load = sum(d * u for d, u in zip(params.d, eq.u_star))
        growth_part = 2.0 * load - params.r
    else:
        growth_part = (params.r * params.growth.value(eq.x_star)
                       + params.r * eq.x_star * params.growth.derivative(eq.x_star))
    return growth_part + crowding


def build_jacobians(params: ModelParams, eq: Equilibrium) -> JacobianPair:
    """Assemble A (and A_d when a memory rate is set) at the equilibrium."""
    diag, row, col = [], [], []
    for resp, d, u in zip(params.responses, params.d, eq.u_star):
        dp = resp.derivative(u)
        if not (dp < 0):
            raise DomainError("functional response must be strictly decreasing")
        diag.append(u * dp)
        row.append(-d - u * dp)
        col.append(-u * u * dp)
    a11 = build_a11(params, eq)
    return JacobianPair.from_entries(a11, diag, row, col, params.alpha)


def predator_entries(resp, d: float) -> tuple[float, float, float]:
    """(diag, row, col) for a single predator, straight from (kind, m, a, d).

    These entries do not involve r or K, so strategy conditions can be
    evaluated without solving for the full equilibrium.
    """
    u = resp.equilibrium_ratio(d)
    dp = resp.derivative(u)
    return (u * dp, -d - u * dp, -u * u * dp)
