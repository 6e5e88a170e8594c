"""Ratio-dependent predator-prey models with exponentially fading memory.

``n`` predator species compete for a single prey.  The prey grows
logistically; each predator's per capita birth rate depends on the
predator-to-prey ratio u_i = y_i / x through a saturating, strictly
decreasing functional response p_i(u_i):

    x'   = r x g(x) - sum_i y_i p_i(y_i / x)
    y_i' = y_i p_i(y_i / x) - d_i y_i

Two response families are supported, both parametrised by a maximal
birth rate m and a half-saturation constant a:

    holling:  p(u) = m / (a u + 1)
    ivlev:    p(u) = m (1 - exp(-1 / (a u)))

With fading memory the predators perceive a weighted average q of past
prey quantities instead of the present value.  For the exponential
weight alpha * exp(-alpha s) the integral memory term reduces exactly
to one extra ODE, giving the delayed system

    x'   = r x g(x) - sum_i y_i p_i(y_i / x)
    y_i' = y_i p_i(y_i / q) - d_i y_i
    q'   = alpha (x - q)

Small alpha means long memory: 1/alpha is the time scale over which the
past still influences present predator growth.

Everything in this module is a pure function over immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainError,
    NoPositiveEquilibriumError,
    NoSurvivalError,
    SingularStateError,
    UnsupportedDimensionError,
)

# exp(-s) underflows for s > ~745; past this the Ivlev response is m to
# full double precision, so the limit is substituted directly.
_IVLEV_EXP_CUTOFF = 700.0


@dataclass(frozen=True)
class GrowthLaw:
    """Per capita prey growth shape g(x).

    Only the logistic law g(x) = 1 - x/K is built in.  Any addition must
    keep the defining sign property (K - x) g(x) > 0 for x >= 0, x != K,
    which guarantees a growth/decline crossover exactly at the carrying
    capacity.
    """

    K: float
    kind: str = "logistic"

    def __post_init__(self):
        if self.kind != "logistic":
            raise DomainError(f"unknown growth law {self.kind!r}")
        if not (self.K > 0):
            raise DomainError("carrying capacity K must be positive")

    def value(self, x: float) -> float:
        return 1.0 - x / self.K

    def derivative(self, x: float) -> float:
        return -1.0 / self.K


@dataclass(frozen=True)
class FunctionalResponse:
    """Ratio-dependent functional response p(u), u = predator/prey ratio.

    p is positive, bounded by the maximal birth rate m and strictly
    decreasing in u, so every predator does worse when its own kind
    crowds the shared prey.
    """

    kind: str
    m: float
    a: float

    def __post_init__(self):
        if self.kind not in ("holling", "ivlev"):
            raise DomainError(f"unknown response kind {self.kind!r}")
        if not (self.m > 0 and self.a > 0):
            raise DomainError("response parameters m, a must be positive")

    def value(self, u: float) -> float:
        """p(u) for u > 0; always in (0, m)."""
        if not (u > 0):
            raise DomainError("response ratio u must be positive")
        if self.kind == "holling":
            return self.m / (self.a * u + 1.0)
        s = 1.0 / (self.a * u)
        if s > _IVLEV_EXP_CUTOFF:
            return self.m
        return self.m * (1.0 - math.exp(-s))

    def derivative(self, u: float) -> float:
        """dp/du for u > 0; always negative."""
        if not (u > 0):
            raise DomainError("response ratio u must be positive")
        if self.kind == "holling":
            q = self.a * u + 1.0
            return -self.m * self.a / (q * q)
        s = 1.0 / (self.a * u)
        if s > _IVLEV_EXP_CUTOFF:
            return -0.0
        return -self.m * math.exp(-s) / (self.a * u * u)

    def equilibrium_ratio(self, d: float) -> float:
        """The unique u* with p(u*) = d, in closed form.

        Requires m > d: a predator whose maximal birth rate does not
        exceed its death rate cannot survive at any ratio.
        """
        if not (d > 0):
            raise DomainError("death rate d must be positive")
        if not (self.m > d):
            raise NoSurvivalError(
                f"survival requires m > d (got m={self.m}, d={d})"
            )
        if self.kind == "holling":
            return (self.m - d) / (self.a * d)
        return 1.0 / (self.a * math.log(self.m / (self.m - d)))


@dataclass(frozen=True)
class ModelParams:
    """Complete parameter set for one system instance.

    ``alpha`` is the memory rate of the exponentially fading weight;
    ``None`` selects the undelayed system.
    """

    r: float
    growth: GrowthLaw
    responses: tuple[FunctionalResponse, ...]
    d: tuple[float, ...]
    alpha: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "responses", tuple(self.responses))
        object.__setattr__(self, "d", tuple(float(v) for v in self.d))
        if not (self.r > 0):
            raise DomainError("prey growth rate r must be positive")
        if len(self.responses) == 0:
            raise DomainError("at least one predator is required")
        if len(self.responses) != len(self.d):
            raise DomainError("responses and death rates must pair up")
        for i, (resp, di) in enumerate(zip(self.responses, self.d)):
            if not (di > 0):
                raise DomainError(f"death rate d[{i}] must be positive")
            if not (resp.m > di):
                raise NoSurvivalError(
                    f"predator {i}: survival requires m > d "
                    f"(got m={resp.m}, d={di})"
                )
        if self.alpha is not None and not (self.alpha > 0):
            raise DomainError("memory rate alpha must be positive")

    @property
    def n(self) -> int:
        return len(self.responses)

    @property
    def K(self) -> float:
        return self.growth.K

    @property
    def delayed(self) -> bool:
        return self.alpha is not None

    def with_(self, **changes) -> "ModelParams":
        """Copy with selected fields replaced (alpha, r, ...)."""
        kw = dict(
            r=self.r, growth=self.growth, responses=self.responses,
            d=self.d, alpha=self.alpha,
        )
        kw.update(changes)
        return ModelParams(**kw)


@dataclass(frozen=True)
class Equilibrium:
    """Interior equilibrium: prey x*, predators y_i*, memory q* = x*.

    u_star holds the equilibrium ratios u_i* = y_i*/x*, the quantities
    every linearisation entry is built from.
    """

    x_star: float
    y_star: tuple[float, ...]
    q_star: float
    u_star: tuple[float, ...]

    def state(self, delayed: bool = False) -> "State":
        return State(self.x_star, self.y_star, self.q_star if delayed else None)


@dataclass(frozen=True)
class State:
    """Point of the open positive orthant; q present only when delayed."""

    x: float
    y: tuple[float, ...]
    q: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))
        if not (self.x > 0) or any(not (v > 0) for v in self.y):
            raise DomainError("state components must be strictly positive")
        if self.q is not None and not (self.q > 0):
            raise DomainError("memory component q must be strictly positive")

    @property
    def delayed(self) -> bool:
        return self.q is not None

    def as_vector(self) -> np.ndarray:
        v = [self.x, *self.y]
        if self.q is not None:
            v.append(self.q)
        return np.asarray(v, dtype=float)

    @staticmethod
    def from_vector(v, delayed: bool) -> "State":
        v = np.asarray(v, dtype=float)
        if delayed:
            return State(float(v[0]), tuple(v[1:-1]), float(v[-1]))
        return State(float(v[0]), tuple(v[1:]), None)

    def scaled(self, factor: float) -> "State":
        return State(self.x * factor, tuple(v * factor for v in self.y),
                     None if self.q is None else self.q * factor)


# ----------------------------------------------------------------------
# operations

def response_value(resp: FunctionalResponse, u: float) -> float:
    return resp.value(u)


def response_derivative(resp: FunctionalResponse, u: float) -> float:
    return resp.derivative(u)


def equilibrium_ratio(resp: FunctionalResponse, d: float) -> float:
    return resp.equilibrium_ratio(d)


def predation_pressure(params: ModelParams) -> float:
    """sum_i d_i u_i*: total per-prey predation load at equilibrium."""
    return sum(d * resp.equilibrium_ratio(d)
               for resp, d in zip(params.responses, params.d))


def equilibrium(params: ModelParams) -> Equilibrium:
    """Closed-form interior equilibrium.

    The ratios u_i* solve p_i(u_i*) = d_i per predator; the prey level
    then solves r g(x*) = sum_i d_i u_i*.  For logistic growth that
    gives x* = K (1 - sum_i d_i u_i* / r), positive only when the prey
    growth rate beats the total predation load.
    """
    u = tuple(resp.equilibrium_ratio(d)
              for resp, d in zip(params.responses, params.d))
    load = sum(di * ui for di, ui in zip(params.d, u))
    if params.growth.kind == "logistic":
        x = params.K * (1.0 - load / params.r)
    else:  # bracketed bisection on (0, K); any growth law changes sign there
        x = _bisect_growth_balance(params, load)
    if not (x > 0):
        raise NoPositiveEquilibriumError(
            "no positive equilibrium: requires r > sum_i d_i u_i* "
            f"(r={params.r}, load={load})"
        )
    y = tuple(ui * x for ui in u)
    return Equilibrium(x_star=x, y_star=y, q_star=x, u_star=u)


def _bisect_growth_balance(params: ModelParams, load: float) -> float:
    r, K = params.r, params.K
    f = lambda x: r * params.growth.value(x) - load
    lo, hi = K * 1e-16, K
    if f(lo) <= 0:
        raise NoPositiveEquilibriumError(
            "no positive equilibrium: prey growth below predation load"
        )
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def equilibrium_residuals(params: ModelParams, eq: Equilibrium) -> tuple[float, ...]:
    """Defect of the defining equations at eq: (prey balance, p_i(u_i*) - d_i)."""
    prey = params.r * eq.x_star * params.growth.value(eq.x_star) - sum(
        d * y for d, y in zip(params.d, eq.y_star))
    preds = tuple(resp.value(u) - d
                  for resp, d, u in zip(params.responses, params.d, eq.u_star))
    return (prey, *preds)


def rhs_undelayed(params: ModelParams, s: State) -> np.ndarray:
    """(x', y_1', ..., y_n') of the memoryless system at s."""
    if s.delayed:
        raise DomainError("undelayed right-hand side takes a state without q")
    if len(s.y) != params.n:
        raise DomainError("state dimension does not match parameter set")
    if s.x <= 0:
        raise SingularStateError("prey quantity x must be positive")
    x = s.x
    births = [resp.value(y / x) for resp, y in zip(params.responses, s.y)]
    xdot = params.r * x * params.growth.value(x) - sum(
        y * p for y, p in zip(s.y, births))
    ydot = [y * (p - d) for y, p, d in zip(s.y, births, params.d)]
    return np.asarray([xdot, *ydot], dtype=float)


def rhs_delayed(params: ModelParams, s: State) -> np.ndarray:
    """(x', y_1', ..., y_n', q') of the memory system at s.

    Predator birth rates read the remembered prey level q; prey losses
    still use the present ratio y_i/x.
    """
    if params.alpha is None:
        raise DomainError("delayed right-hand side requires params.alpha")
    if not s.delayed:
        raise DomainError("delayed right-hand side requires a state with q")
    if len(s.y) != params.n:
        raise DomainError("state dimension does not match parameter set")
    if s.x <= 0 or s.q <= 0:
        raise SingularStateError("prey and memory quantities must be positive")
    x, q = s.x, s.q
    prey_loss = sum(y * resp.value(y / x)
                    for resp, y in zip(params.responses, s.y))
    xdot = params.r * x * params.growth.value(x) - prey_loss
    ydot = [y * (resp.value(y / q) - d)
            for resp, y, d in zip(params.responses, s.y, params.d)]
    qdot = params.alpha * (x - q)
    return np.asarray([xdot, *ydot, qdot], dtype=float)


def rhs_vector(params: ModelParams, v: np.ndarray, delayed: bool) -> np.ndarray:
    """Right-hand side on raw vectors, for the integrator.

    Runge-Kutta stage points can overshoot slightly outside the open
    orthant, so every term is continued by its one-sided limit there:
    a predator at y <= 0 decays as -d y, and predation vanishes as the
    perceived prey (x for losses, q for births) reaches zero because the
    ratio-dependent responses tend to zero with the prey.  Accepted
    states are still held to the positivity floor by the integrator.
    """
    x = v[0]
    n = params.n
    y = v[1:1 + n]
    out = np.empty(v.shape[0], dtype=float)
    if delayed:
        q = v[1 + n]
        out[1 + n] = params.alpha * (x - q)
        ratio_src = q
    else:
        ratio_src = x
    loss = 0.0
    for i, (resp, d) in enumerate(zip(params.responses, params.d)):
        yi = y[i] if y[i] > 0.0 else 0.0
        if yi > 0.0:
            if x > 0.0:
                loss += yi * resp.value(yi / x)
            growth = resp.value(yi / ratio_src) if ratio_src > 0.0 else 0.0
            out[1 + i] = y[i] * (growth - d)
        else:
            out[1 + i] = -d * y[i]
    out[0] = params.r * x * params.growth.value(x) - loss
    return out


@dataclass(frozen=True)
class NullclineMesh:
    """Sampled prey zero-growth surface over a (y1, y2) grid.

    roots[i][j] lists every x in (0, K) with zero prey growth at
    (y1[i], y2[j]); an empty list marks a no-root cell.
    """

    y1: np.ndarray
    y2: np.ndarray
    roots: list
    max_residual: float

    def points(self) -> np.ndarray:
        pts = [(x, self.y1[i], self.y2[j])
               for i in range(len(self.y1))
               for j in range(len(self.y2))
               for x in self.roots[i][j]]
        return np.asarray(pts, dtype=float).reshape(-1, 3)


def prey_nullcline_sample(params: ModelParams,
                          y1_grid, y2_grid,
                          x_samples: int = 96,
                          f_tol: float = 1e-12) -> NullclineMesh:
    """Sample the prey nullcline surface x(y1, y2) for two predators.

    For each grid point the prey balance F1(x) = r x g(x) - sum_i y_i
    p_i(y_i/x) is scanned over a log-spaced x grid in (0, K) and each
    sign change is refined by bisection.  Cells without a bracketed root
    are reported empty rather than failing (the surface folds like an
    onion and whole regions of predator space lie off it).
    """
    if params.n != 2:
        raise UnsupportedDimensionError("nullcline sampling is for two predators")
    y1_grid = np.asarray(y1_grid, dtype=float)
    y2_grid = np.asarray(y2_grid, dtype=float)
    if np.any(y1_grid <= 0) or np.any(y2_grid <= 0):
        raise DomainError("nullcline grid values must be positive")
    K = params.K
    xs = np.geomspace(K * 1e-9, K * (1.0 - 1e-12), x_samples)
    r1, r2 = params.responses
    worst = 0.0
    rows = []
    for y1 in y1_grid:
        row = []
        for y2 in y2_grid:
            def f(x):
                return (params.r * x * params.growth.value(x)
                        - y1 * r1.value(y1 / x) - y2 * r2.value(y2 / x))
            vals = np.array([f(x) for x in xs])
            cell = []
            for k in range(len(xs) - 1):
                a, b = vals[k], vals[k + 1]
                if a == 0.0:
                    cell.append(float(xs[k]))
                    continue
                if a * b < 0.0:
                    lo, hi, flo = xs[k], xs[k + 1], a
                    while hi - lo > 1e-15 * K:
                        mid = 0.5 * (lo + hi)
                        fm = f(mid)
                        if abs(fm) < f_tol:
                            lo = hi = mid
                            break
                        if flo * fm < 0.0:
                            hi = mid
                        else:
                            lo, flo = mid, fm
                    root = 0.5 * (lo + hi)
                    cell.append(float(root))
                    worst = max(worst, abs(f(root)))
            row.append(cell)
        rows.append(row)
    return NullclineMesh(y1=y1_grid, y2=y2_grid, roots=rows, max_residual=worst)
