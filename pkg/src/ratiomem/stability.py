"""Stability machinery: condition checks, characteristic polynomials,
Routh-Hurwitz tests, the memory-robustness cubic H(alpha), and scans.

Classification always uses a marginal band: a spectral abscissa within
+-1e-9 of zero is reported as "marginal", never coerced to a boolean,
because stability switches live exactly on that boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainError,
    InapplicableError,
    NoPositiveEquilibriumError,
    NumericFailureError,
    UnsupportedDimensionError,
)
from .linearize import JacobianPair, build_jacobians, predator_entries
from .model import Equilibrium, ModelParams, equilibrium

MARGINAL_BAND = 1e-9


# ----------------------------------------------------------------------
# polynomials

@dataclass(frozen=True)
class Polynomial:
    """Real polynomial, coefficients in ascending degree order."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        scale = np.max(np.abs(c)) if c.size else 0.0
        if scale > 0.0:  # trim numerically-zero leading coefficients
            keep = c.size
            while keep > 1 and abs(c[keep - 1]) <= 1e-14 * scale:
                keep -= 1
            c = c[:keep]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x):
        acc = np.zeros_like(np.asarray(x, dtype=complex))
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return acc if acc.shape else complex(acc)

    def descending(self) -> np.ndarray:
        return self.coeffs[::-1].copy()

    def roots(self) -> np.ndarray:
        return polynomial_roots(self)


def char_poly(M) -> Polynomial:
    """Monic characteristic polynomial det(lambda I - M).

    Computed by the Faddeev-LeVerrier trace recursion, which is exact up
    to rounding for the small dense matrices used here (and literally
    exact for integer matrices with integer coefficients).
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError("characteristic polynomial needs a square matrix")
    dim = M.shape[0]
    if dim == 0:
        raise DomainError("matrix dimension must be at least 1")
    if dim > 64:
        raise UnsupportedDimensionError("matrix dimension capped at 64")
    coeffs = np.zeros(dim + 1)
    coeffs[dim] = 1.0
    Mk = M.copy()
    for k in range(1, dim + 1):
        ck = -np.trace(Mk) / k
        coeffs[dim - k] = ck
        if k < dim:
            Mk = M @ (Mk + ck * np.eye(dim))
    return Polynomial(coeffs)


def char_poly_delayed(jac: JacobianPair) -> Polynomial:
    """Characteristic polynomial of the delayed matrix, assembled from A.

    A Schur-complement factorisation of the delayed matrix gives, in the
    monic convention,

        chi_Ad(l) = alpha * chi_A(l) + l * prod_i (l - A_ii)

    where the product runs over every diagonal entry of the undelayed
    matrix.  Equals char_poly(A_d) coefficientwise.
    """
    if jac.alpha is None:
        raise DomainError("delayed characteristic polynomial requires alpha")
    chi_a = char_poly(jac.A).coeffs
    prod = np.array([1.0])
    for aii in np.concatenate(([jac.a11], jac.a_diag)):
        prod = np.convolve(prod, np.array([-aii, 1.0]))
    out = np.zeros(prod.size + 1)
    out[1:] += prod                      # l * prod(l - A_ii)
    out[:chi_a.size] += jac.alpha * chi_a
    return Polynomial(out)


def polynomial_roots(p: Polynomial) -> np.ndarray:
    """All roots, via the companion matrix, with a backward-error guard."""
    if p.degree < 1:
        raise DomainError("root finding needs degree >= 1")
    try:
        roots = np.roots(p.descending())
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericFailureError(f"root finding did not converge: {exc}")
    # residual |p(z)| relative to sum_i |c_i| |z|^i
    for z in roots:
        powers = np.abs(z) ** np.arange(p.coeffs.size)
        scale = float(np.sum(np.abs(p.coeffs) * powers))
        if abs(p(z)) > 1e-9 * max(scale, 1e-300):
            raise NumericFailureError(
                f"polynomial root residual too large at {z}")
    return roots


def eigenvalues(obj) -> np.ndarray:
    """Eigenvalues of a matrix or roots of a Polynomial."""
    if isinstance(obj, Polynomial):
        return polynomial_roots(obj)
    M = np.asarray(obj, dtype=float)
    try:
        return np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NumericFailureError(f"eigenvalue iteration failed: {exc}")


def cluster_roots(values, tol: float = 1e-7) -> list[tuple[complex, int]]:
    """Group near-identical values into (representative, multiplicity)."""
    remaining = list(values)
    clusters: list[tuple[complex, int]] = []
    while remaining:
        z = remaining.pop(0)
        members = [z]
        keep = []
        for w in remaining:
            if abs(w - z) <= tol * max(1.0, abs(z)):
                members.append(w)
            else:
                keep.append(w)
        remaining = keep
        clusters.append((complex(np.mean(members)), len(members)))
    return clusters


def spectral_abscissa(values) -> float:
    return float(np.max(np.real(values)))


def stability_class(abscissa: float, band: float = MARGINAL_BAND) -> str:
    if abscissa < -band:
        return "stable"
    if abscissa > band:
        return "unstable"
    return "marginal"


# ----------------------------------------------------------------------
# quartic conditions (two predators)

@dataclass(frozen=True)
class QuarticCoeffs:
    """Monic quartic l^4 + a3 l^3 + a2 l^2 + a1 l + a0."""

    a3: float
    a2: float
    a1: float
    a0: float

    def as_polynomial(self) -> Polynomial:
        return Polynomial(np.array([self.a0, self.a1, self.a2, self.a3, 1.0]))


def quartic_coeffs(jac: JacobianPair) -> QuarticCoeffs:
    """Coefficients of the delayed characteristic quartic (n = 2 only).

    Taken from the direct characteristic polynomial of the delayed
    matrix; the transcribed closed-form entry formulas live in the
    oracle module as an independent cross-check.
    """
    if jac.n != 2:
        raise UnsupportedDimensionError("quartic analysis needs two predators")
    if jac.alpha is None:
        raise DomainError("quartic analysis requires a memory rate alpha")
    c = char_poly(jac.A_d).coeffs
    if c.size != 5:
        raise NumericFailureError("delayed matrix lost full degree")
    return QuarticCoeffs(a3=float(c[3]), a2=float(c[2]),
                         a1=float(c[1]), a0=float(c[0]))


def hurwitz_critical(q: QuarticCoeffs) -> float:
    """a3 (a1 a2 - a0 a3) - a1^2: positive iff the quartic is stable
    once all coefficients are positive."""
    return q.a3 * (q.a1 * q.a2 - q.a0 * q.a3) - q.a1 * q.a1


@dataclass(frozen=True)
class HurwitzQuartic:
    necessary: bool        # a3, a2, a1, a0 all positive
    sufficient: bool       # necessary and critical expression positive
    critical: float


def hurwitz_quartic(q: QuarticCoeffs) -> HurwitzQuartic:
    necessary = q.a3 > 0 and q.a2 > 0 and q.a1 > 0 and q.a0 > 0
    crit = hurwitz_critical(q)
    return HurwitzQuartic(necessary=necessary,
                          sufficient=bool(necessary and crit > 0),
                          critical=crit)


@dataclass(frozen=True)
class HurwitzCubic:
    """The critical Hurwitz expression as a cubic in the memory rate:
    H(alpha) = c3 a^3 + c2 a^2 + c1 a + c0.  Positive H means the
    delayed equilibrium is stable at that alpha; roots of H mark
    stability switches."""

    c3: float
    c2: float
    c1: float
    c0: float

    def __call__(self, alpha):
        a = np.asarray(alpha, dtype=float)
        out = ((self.c3 * a + self.c2) * a + self.c1) * a + self.c0
        return out if out.shape else float(out)

    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.c3, self.c2, self.c1, self.c0)

    def positive_roots(self) -> list[float]:
        rts = np.roots([self.c3, self.c2, self.c1, self.c0])
        out = [float(z.real) for z in rts if abs(z.imag) < 1e-9 and z.real > 0]
        return sorted(out)


_H_NODES = np.array([1.0, 2.0, 3.0, 4.0])
_H_VANDER = np.vander(_H_NODES)  # rows [a^3, a^2, a, 1]


def hurwitz_cubic(jac: JacobianPair) -> HurwitzCubic:
    """Extract H(alpha) by evaluating it at four nodes and interpolating.

    The quartic coefficients are affine in alpha, so the critical
    expression is exactly a cubic; a 4-node solve recovers it without
    any symbolic expansion.
    """
    if jac.n != 2:
        raise UnsupportedDimensionError("H(alpha) analysis needs two predators")
    values = [hurwitz_critical(quartic_coeffs(jac.with_alpha(a)))
              for a in _H_NODES]
    c3, c2, c1, c0 = np.linalg.solve(_H_VANDER, np.asarray(values))
    return HurwitzCubic(c3=float(c3), c2=float(c2), c1=float(c1), c0=float(c0))


# ----------------------------------------------------------------------
# condition checks

@dataclass(frozen=True)
class SignStability:
    """Sufficient conditions for sign stability of the undelayed matrix."""

    a11_nonpositive: bool
    response_decreasing: tuple[bool, ...]   # diag_i < 0
    predation_row_negative: tuple[bool, ...]  # row_i < 0

    @property
    def sign_stable(self) -> bool:
        return (self.a11_nonpositive
                and all(self.response_decreasing)
                and all(self.predation_row_negative))


def check_sign_stability(jac: JacobianPair) -> SignStability:
    return SignStability(
        a11_nonpositive=bool(jac.a11 <= 0.0),
        response_decreasing=tuple(bool(v < 0.0) for v in jac.a_diag),
        predation_row_negative=tuple(bool(v < 0.0) for v in jac.a_row),
    )


@dataclass(frozen=True)
class DelayRobustness:
    """Entry conditions under which no memory rate can destabilise.

    Per predator i the chain  a11^2 > diag_i^2 > -row_i col_i  must
    hold: prey self-limitation dominates predator self-limitation
    (competition_dominant), and the predator's own crowding beats the
    prey-coupling product (strategy_ok)."""

    applicable: bool                       # sign pattern with a11 < 0
    competition_dominant: tuple[bool, ...]
    strategy_ok: tuple[bool, ...]

    @property
    def holds(self) -> bool:
        return (self.applicable
                and all(self.competition_dominant)
                and all(self.strategy_ok))


def check_delay_robust(jac: JacobianPair) -> DelayRobustness:
    if jac.n != 2:
        raise UnsupportedDimensionError("delay-robustness test needs two predators")
    pattern = (jac.a11 <= 0.0 and np.all(jac.a_diag < 0.0)
               and np.all(jac.a_row < 0.0) and np.all(jac.a_col > 0.0))
    a11sq = jac.a11 * jac.a11
    comp = tuple(bool(a11sq > d * d) for d in jac.a_diag)
    strat = tuple(bool(d * d > -r * c)
                  for d, r, c in zip(jac.a_diag, jac.a_row, jac.a_col))
    return DelayRobustness(applicable=bool(pattern),
                           competition_dominant=comp, strategy_ok=strat)


def ivlev_strategy_bound(m: float, d: float) -> float:
    """Closed-form half-saturation bound reported for Ivlev predators.

    With x = m/(m-d) and L = log x this is (1 - 1/x - L/x) / L^2, a
    strictly decreasing function of x with supremum 1/2 as x -> 1+.
    Note it understates the exact product-condition threshold (below)
    by the factor x; the two coincide only in the limit d -> 0.
    """
    if not (m > d > 0):
        raise DomainError("requires m > d > 0")
    L = math.log(m / (m - d))
    return (d / m - ((m - d) / m) * L) / (L * L)


def ivlev_product_threshold(m: float, d: float) -> float:
    """Half-saturation value at which diag^2 = -row*col exactly for an
    Ivlev predator; above it the consume-strategy condition holds."""
    if not (m > d > 0):
        raise DomainError("requires m > d > 0")
    L = math.log(m / (m - d))
    return (m / (m - d) - 1.0 - L) / (L * L)


@dataclass(frozen=True)
class StrategyThreshold:
    """Half-saturation test for one predator.

    For holling responses a > 1 is exactly equivalent to the
    consume-strategy condition diag^2 > -row*col.  For ivlev responses
    the reported closed-form bound is necessary but not sufficient;
    product_holds carries the direct entry check.
    """

    kind: str
    a: float
    bound: float
    passes: bool
    above_half: bool
    product_threshold: float
    product_holds: bool


def check_strategy_threshold(params: ModelParams) -> tuple[StrategyThreshold, ...]:
    out = []
    for resp, d in zip(params.responses, params.d):
        diag, row, col = predator_entries(resp, d)
        product_holds = bool(diag * diag > -row * col)
        if resp.kind == "holling":
            bound = 1.0
            product_threshold = 1.0
        else:
            bound = ivlev_strategy_bound(resp.m, d)
            product_threshold = ivlev_product_threshold(resp.m, d)
        out.append(StrategyThreshold(
            kind=resp.kind, a=resp.a, bound=bound,
            passes=bool(resp.a > bound),
            above_half=bool(resp.a > 0.5),
            product_threshold=product_threshold,
            product_holds=product_holds,
        ))
    return tuple(out)


# ----------------------------------------------------------------------
# scans and reports

@dataclass(frozen=True)
class SwitchPoint:
    alpha: float
    omega: float              # sqrt(a1/a3): frequency of the imaginary pair
    critical: float           # H at the refined root (near zero)
    pair_real_part: float     # real part of the nearest eigenvalue pair


@dataclass(frozen=True)
class AlphaScan:
    alphas: np.ndarray
    H: np.ndarray
    abscissa: np.ndarray
    stability: tuple[str, ...]
    switch_points: tuple[SwitchPoint, ...]


def alpha_scan(params: ModelParams, alpha_min: float = 0.01,
               alpha_max: float = 100.0, points: int = 200,
               deadline=None) -> AlphaScan:
    """Scan H(alpha) and the delayed spectrum over a log grid.

    Sign changes of H are bracketed on the grid and refined by bisection
    to 1e-10 relative; each refined root is a stability switch and a
    Hopf candidate with frequency omega = sqrt(a1/a3).
    """
    if params.n != 2:
        raise UnsupportedDimensionError("alpha scan needs two predators")
    if not (0 < alpha_min < alpha_max):
        raise DomainError("alpha range must satisfy 0 < min < max")
    eq = equilibrium(params)
    jac = build_jacobians(params, eq)
    alphas = np.geomspace(alpha_min, alpha_max, points)

    def H_at(a: float) -> float:
        return hurwitz_critical(quartic_coeffs(jac.with_alpha(a)))

    H = np.empty(points)
    absc = np.empty(points)
    classes = []
    for i, a in enumerate(alphas):
        _check_deadline(deadline)
        H[i] = H_at(a)
        absc[i] = spectral_abscissa(eigenvalues(jac.with_alpha(a).A_d))
        classes.append(stability_class(absc[i]))

    switches = []
    for i in range(points - 1):
        lo, hi = float(alphas[i]), float(alphas[i + 1])
        flo, fhi = H[i], H[i + 1]
        if flo == 0.0:
            root = lo
        elif flo * fhi < 0.0:
            while hi - lo > 1e-10 * (0.5 * (lo + hi)):
                _check_deadline(deadline)
                mid = 0.5 * (lo + hi)
                fm = H_at(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if flo * fm < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            root = 0.5 * (lo + hi)
        else:
            continue
        q = quartic_coeffs(jac.with_alpha(root))
        if not q.a1 / q.a3 > 0:
            raise NumericFailureError("switch point without a real frequency")
        omega = math.sqrt(q.a1 / q.a3)
        evs = eigenvalues(jac.with_alpha(root).A_d)
        pair = min((z for z in evs if z.imag > 0),
                   key=lambda z: abs(abs(z.imag) - omega), default=None)
        pair_re = float(pair.real) if pair is not None else float("nan")
        switches.append(SwitchPoint(alpha=float(root), omega=float(omega),
                                    critical=float(H_at(root)),
                                    pair_real_part=pair_re))
    return AlphaScan(alphas=alphas, H=H, abscissa=absc,
                     stability=tuple(classes), switch_points=tuple(switches))


@dataclass(frozen=True)
class AlphaEndpointReport:
    """Certificate of delayed stability at two supplied memory rates.

    The theory guarantees stability for alpha small enough and large
    enough (under the sign conditions with a11 < 0) without quantitative
    thresholds, so the user picks the alphas to certify."""

    applicable: bool
    coefficients_positive: bool
    abscissa_small: float | None
    abscissa_large: float | None
    class_small: str | None
    class_large: str | None


def certify_alpha_endpoints(jac: JacobianPair, alpha_small: float,
                            alpha_large: float) -> AlphaEndpointReport:
    if not (0 < alpha_small <= alpha_large):
        raise DomainError("requires 0 < alpha_small <= alpha_large")
    hypothesis = (jac.a11 < 0.0 and np.all(jac.a_diag < 0.0)
                  and np.all(jac.a_row < 0.0) and np.all(jac.a_col > 0.0))
    if not hypothesis:
        return AlphaEndpointReport(applicable=False,
                                   coefficients_positive=False,
                                   abscissa_small=None, abscissa_large=None,
                                   class_small=None, class_large=None)
    coeffs_ok = True
    for a in (alpha_small, alpha_large):
        c = char_poly_delayed(jac.with_alpha(a)).coeffs
        coeffs_ok = coeffs_ok and bool(np.all(c > 0.0))
    small = spectral_abscissa(eigenvalues(jac.with_alpha(alpha_small).A_d))
    large = spectral_abscissa(eigenvalues(jac.with_alpha(alpha_large).A_d))
    return AlphaEndpointReport(
        applicable=True, coefficients_positive=coeffs_ok,
        abscissa_small=small, abscissa_large=large,
        class_small=stability_class(small), class_large=stability_class(large),
    )


@dataclass(frozen=True)
class StabilityReport:
    """Everything the condition machinery can say about one system."""

    has_equilibrium: bool
    equilibrium: Equilibrium | None = None
    jacobians: JacobianPair | None = None
    sign_stability: SignStability | None = None
    quartic: QuarticCoeffs | None = None
    hurwitz: HurwitzQuartic | None = None
    delay_robust: DelayRobustness | None = None
    strategy: tuple[StrategyThreshold, ...] | None = None
    eigenvalues_A: np.ndarray | None = None
    eigenvalues_Ad: np.ndarray | None = None
    spectral_abscissa_A: float | None = None
    spectral_abscissa_Ad: float | None = None
    allee_zone: str | None = None
    classification: str = "none"


def allee_zone(a11: float, band: float = MARGINAL_BAND) -> str:
    """Allee-effect zone by the sign of the prey self-interaction entry.

    Positive a11 means prey growth still improves with prey density at
    the equilibrium (inside the zone); negative means overcrowding
    already bites (outside), which is where stability is most robust.
    """
    if a11 > band:
        return "inside"
    if a11 < -band:
        return "outside"
    return "boundary"


def stability_report(params: ModelParams) -> StabilityReport:
    try:
        eq = equilibrium(params)
    except NoPositiveEquilibriumError:
        return StabilityReport(has_equilibrium=False, classification="none")
    jac = build_jacobians(params, eq)
    sign = check_sign_stability(jac)
    evs_a = eigenvalues(jac.A)
    absc_a = spectral_abscissa(evs_a)
    quart = hur = None
    evs_ad = absc_ad = None
    robust = None
    strategy = check_strategy_threshold(params)
    if jac.n == 2:
        robust = check_delay_robust(jac)
        if jac.alpha is not None:
            quart = quartic_coeffs(jac)
            hur = hurwitz_quartic(quart)
    if jac.alpha is not None:
        evs_ad = eigenvalues(jac.A_d)
        absc_ad = spectral_abscissa(evs_ad)
    if robust is not None and robust.holds:
        label = "delay-robust"
    elif sign.sign_stable:
        label = "sign-stable"
    elif stability_class(absc_a) == "stable":
        label = "stable"
    else:
        label = "unstable"
    return StabilityReport(
        has_equilibrium=True, equilibrium=eq, jacobians=jac,
        sign_stability=sign, quartic=quart, hurwitz=hur,
        delay_robust=robust, strategy=strategy,
        eigenvalues_A=evs_a, eigenvalues_Ad=evs_ad,
        spectral_abscissa_A=absc_a, spectral_abscissa_Ad=absc_ad,
        allee_zone=allee_zone(jac.a11), classification=label,
    )


def _check_deadline(deadline):
    if deadline is not None:
        import time
        if time.monotonic() > deadline:
            from .errors import BudgetExceededError
            raise BudgetExceededError("computation budget exceeded")
