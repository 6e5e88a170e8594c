"""Independent brute-force cross-checks, shipped so any machine can
re-verify the analysis pipeline (`ratiomem verify`).

Every oracle here recomputes a production quantity by a different
route: cofactor determinants against the trace-recursion characteristic
polynomial, transcribed closed-form quartic coefficients against the
direct polynomial, central finite differences against the analytic
Jacobians, and eigenvalue classification against the Routh-Hurwitz
flags.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import UnsupportedDimensionError
from .linearize import JacobianPair, build_jacobians
from .model import ModelParams, State, rhs_delayed, rhs_undelayed, equilibrium
from .stability import (
    MARGINAL_BAND,
    Polynomial,
    QuarticCoeffs,
    char_poly,
    char_poly_delayed,
    eigenvalues,
    hurwitz_quartic,
    quartic_coeffs,
    spectral_abscissa,
    stability_class,
)


def charpoly_bruteforce(M) -> Polynomial:
    """det(lambda I - M) by exact cofactor expansion over polynomial entries.

    Laplace expansion with bitmask memoisation over column subsets;
    refused above dimension 8 (factorial blow-up)."""
    M = np.asarray(M, dtype=float)
    dim = M.shape[0]
    if dim > 8:
        raise UnsupportedDimensionError("brute-force determinant capped at 8")
    cols = tuple(range(dim))

    @lru_cache(maxsize=None)
    def minor(col_mask: int) -> tuple:
        free = [j for j in cols if not (col_mask >> j) & 1]
        row = dim - len(free)
        if not free:
            return (1.0,)
        acc = np.zeros(len(free) + 1)
        for pos, j in enumerate(free):
            # entry of (M - lambda I) as an ascending-coefficient poly
            entry = np.array([M[row, j], -1.0]) if row == j else np.array([M[row, j]])
            sub = np.asarray(minor(col_mask | (1 << j)))
            term = np.convolve(entry, sub)
            if pos % 2:
                term = -term
            acc[:term.size] += term
        return tuple(acc)

    det = np.asarray(minor(0))          # det(M - lambda I)
    if dim % 2:
        det = -det                      # monic normalisation
    return Polynomial(det)


def quartic_coeffs_closed_form(a11, a22, a33, a12, a13, a24, a34, alpha):
    """Transcribed closed-form coefficients of the delayed quartic (n = 2).

    Accepts scalars or equal-shaped arrays.  a0 equals the determinant
    of the delayed matrix."""
    a3 = -a11 - a22 - a33 + alpha
    a2 = a11 * a22 + a11 * a33 + a22 * a33 - alpha * (a11 + a22 + a33)
    a1 = (-a11 * a22 * a33
          + alpha * (a11 * a22 + a11 * a33 + a22 * a33)
          - alpha * (a12 * a24 + a13 * a34))
    a0 = alpha * (-a11 * a22 * a33 + a22 * a13 * a34 + a33 * a12 * a24)
    return a3, a2, a1, a0


def quartic_from_jacobian_closed_form(jac: JacobianPair) -> QuarticCoeffs:
    if jac.n != 2 or jac.alpha is None:
        raise UnsupportedDimensionError("closed form needs n = 2 with alpha")
    a3, a2, a1, a0 = quartic_coeffs_closed_form(
        jac.a11, jac.a_diag[0], jac.a_diag[1],
        jac.a_row[0], jac.a_row[1], jac.a_col[0], jac.a_col[1], jac.alpha)
    return QuarticCoeffs(a3=float(a3), a2=float(a2), a1=float(a1), a0=float(a0))


def finite_difference_jacobian(params: ModelParams, point: State,
                               h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of the appropriate right-hand side.

    Component i is perturbed by h * max(|v_i|, 1e-2) so tiny populations
    keep a resolvable step; h must lie in [1e-8, 1e-4]."""
    if not (1e-8 <= h <= 1e-4):
        raise ValueError("finite-difference h must lie in [1e-8, 1e-4]")
    delayed = point.delayed
    rhs = rhs_delayed if delayed else rhs_undelayed
    v = point.as_vector()
    dim = v.size
    J = np.empty((dim, dim))
    for j in range(dim):
        step = h * max(abs(v[j]), 1e-2)
        vp, vm = v.copy(), v.copy()
        vp[j] += step
        vm[j] -= step
        fp = rhs(params, State.from_vector(vp, delayed))
        fm = rhs(params, State.from_vector(vm, delayed))
        J[:, j] = (fp - fm) / (2.0 * step)
    return J


def eigen_stability_oracle(M) -> str:
    """'stable' / 'unstable' / 'marginal' straight from the spectrum."""
    return stability_class(spectral_abscissa(eigenvalues(M)))


# ----------------------------------------------------------------------
# verification suite

@dataclass
class OracleReport:
    name: str
    cases: int
    max_abs_error: float
    max_rel_error: float
    tolerance: float
    ok: bool
    worst_case: dict = field(default_factory=dict)

    def line(self) -> str:
        flag = "ok " if self.ok else "FAIL"
        return (f"{flag} {self.name:<38} cases={self.cases:<6} "
                f"max_rel={self.max_rel_error:.3e} tol={self.tolerance:.1e}")


def _poly_rel_error(p: Polynomial, q: Polynomial) -> float:
    a, b = p.coeffs, q.coeffs
    size = max(a.size, b.size)
    a = np.pad(a, (0, size - a.size))
    b = np.pad(b, (0, size - b.size))
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b)) / scale)


def _random_pattern_entries(rng, strict_a11=False):
    a11 = -rng.uniform(0.0 if not strict_a11 else 1e-3, 5.0)
    diag = -rng.uniform(0.05, 5.0, 2)
    row = -rng.uniform(0.05, 5.0, 2)
    col = rng.uniform(0.05, 5.0, 2)
    alpha = float(10.0 ** rng.uniform(-2, 2))
    return a11, diag, row, col, alpha


def _random_model(rng, n=None, kind=None, with_alpha=True) -> ModelParams:
    from .model import FunctionalResponse, GrowthLaw
    n = int(rng.integers(1, 4)) if n is None else n
    responses, deaths = [], []
    for _ in range(n):
        k = kind or ("holling" if rng.random() < 0.5 else "ivlev")
        m = float(rng.uniform(1.0, 20.0))
        d = float(m * rng.uniform(0.2, 0.9))
        a = float(rng.uniform(0.3, 5.0))
        responses.append(FunctionalResponse(kind=k, m=m, a=a))
        deaths.append(d)
    growth = GrowthLaw(K=float(rng.uniform(0.5, 5.0)))
    params = ModelParams(r=1.0, growth=growth, responses=tuple(responses),
                         d=tuple(deaths),
                         alpha=float(10.0 ** rng.uniform(-1, 1)) if with_alpha else None)
    from .model import predation_pressure
    load = predation_pressure(params)
    return params.with_(r=float(load * rng.uniform(1.2, 4.0)))


def verify_charpoly(rng, cases: int = 60) -> OracleReport:
    worst = 0.0
    snap = {}
    for _ in range(cases):
        dim = int(rng.integers(2, 7))
        M = rng.normal(0.0, 2.0, (dim, dim))
        err = _poly_rel_error(char_poly(M), charpoly_bruteforce(M))
        if err > worst:
            worst, snap = err, {"dim": dim}
    return OracleReport("char_poly vs cofactor determinant", cases,
                        worst, worst, 1e-9, worst < 1e-9, snap)


def verify_quartic_formulas(rng, cases: int = 1000) -> OracleReport:
    worst = 0.0
    snap = {}
    for _ in range(cases):
        a11, diag, row, col, alpha = _random_pattern_entries(rng)
        jac = JacobianPair.from_entries(a11, diag, row, col, alpha)
        direct = quartic_coeffs(jac)
        closed = quartic_from_jacobian_closed_form(jac)
        det_err = abs(closed.a0 - float(np.linalg.det(jac.A_d)))
        vals = np.array([direct.a3, direct.a2, direct.a1, direct.a0])
        ref = np.array([closed.a3, closed.a2, closed.a1, closed.a0])
        scale = max(float(np.max(np.abs(ref))), 1.0)
        err = max(float(np.max(np.abs(vals - ref))) / scale, det_err / scale)
        if err > worst:
            worst, snap = err, {"a11": a11, "alpha": alpha}
    return OracleReport("quartic closed form vs char poly", cases,
                        worst, worst, 1e-9, worst < 1e-9, snap)


def verify_schur_identity(rng, cases_per_n: int = 30) -> OracleReport:
    worst = 0.0
    snap = {}
    total = 0
    for n in range(1, 7):
        for _ in range(cases_per_n):
            total += 1
            a11 = -rng.uniform(0.0, 4.0)
            diag = -rng.uniform(0.05, 4.0, n)
            row = -rng.uniform(0.05, 4.0, n)
            col = rng.uniform(0.05, 4.0, n)
            alpha = float(10.0 ** rng.uniform(-2, 2))
            jac = JacobianPair.from_entries(a11, diag, row, col, alpha)
            err = _poly_rel_error(char_poly_delayed(jac),
                                  charpoly_bruteforce(jac.A_d))
            if err > worst:
                worst, snap = err, {"n": n, "alpha": alpha}
    return OracleReport("delayed char poly identity vs cofactor", total,
                        worst, worst, 1e-9, worst < 1e-9, snap)


def verify_jacobians(rng, cases: int = 60) -> OracleReport:
    worst = 0.0
    snap = {}
    for _ in range(cases):
        params = _random_model(rng)
        eq = equilibrium(params)
        jac = build_jacobians(params, eq)
        fd_a = finite_difference_jacobian(params, eq.state(delayed=False))
        err = float(np.max(np.abs(jac.A - fd_a) / np.maximum(1.0, np.abs(jac.A))))
        fd_d = finite_difference_jacobian(params, eq.state(delayed=True))
        err = max(err, float(np.max(np.abs(jac.A_d - fd_d)
                                    / np.maximum(1.0, np.abs(jac.A_d)))))
        if err > worst:
            worst, snap = err, {"n": params.n, "r": params.r}
    return OracleReport("analytic vs finite-difference Jacobian", cases,
                        worst, worst, 1e-6, worst < 1e-6, snap)


def verify_hurwitz_vs_eigen(rng, cases: int = 1000) -> OracleReport:
    disagreements = 0
    snap = {}
    for _ in range(cases):
        a11, diag, row, col, alpha = _random_pattern_entries(rng)
        jac = JacobianPair.from_entries(a11, diag, row, col, alpha)
        flags = hurwitz_quartic(quartic_coeffs(jac))
        absc = spectral_abscissa(eigenvalues(jac.A_d))
        if abs(absc) <= MARGINAL_BAND:
            continue  # marginal band: classification intentionally open
        if flags.sufficient != (absc < 0):
            disagreements += 1
            snap = {"a11": a11, "alpha": alpha, "abscissa": absc}
    return OracleReport("Routh-Hurwitz vs eigenvalue classification", cases,
                        float(disagreements), float(disagreements),
                        0.5, disagreements == 0, snap)


def run_verification(seed: int = 0) -> list[OracleReport]:
    rng = np.random.default_rng(seed)
    return [
        verify_charpoly(rng),
        verify_quartic_formulas(rng),
        verify_schur_identity(rng),
        verify_jacobians(rng),
        verify_hurwitz_vs_eigen(rng),
    ]
