"""Time integration of the undelayed and delayed systems.

A Dormand-Prince 5(4) embedded pair with the standard quartic dense
interpolant drives all trajectories.  The integrator is deterministic
(no randomness, fixed evaluation order), counts accepted and rejected
steps, aborts on step-size underflow, and enforces a positivity floor
of 1e-30 on accepted states: the model is only defined on the open
positive orthant, so a state that reaches the floor is a diagnostic,
not data.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    BudgetExceededError,
    InapplicableError,
    PositivityFloorError,
    StepUnderflowError,
)
from .model import ModelParams, State, rhs_vector

# Dormand-Prince 5(4) tableau with the quartic dense-output weights.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200,
               22 / 525, -1 / 40])
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608,
     -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933,
     87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304,
     -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408,
     701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883,
     -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

POSITIVITY_FLOOR = 1e-30
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_ERR_EXPONENT = -0.2  # 1 / (order 4 + 1)


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: times, matching state rows, and step counters.

    states[k] holds (x, y_1..y_n) or (x, y_1..y_n, q) at times[k]; the
    first row is exactly the supplied initial condition.
    """

    times: np.ndarray
    states: np.ndarray
    delayed: bool
    params: ModelParams
    accepted_steps: int
    rejected_steps: int
    nfev: int

    @property
    def n(self) -> int:
        return self.params.n

    def x(self) -> np.ndarray:
        return self.states[:, 0]

    def y(self, i: int) -> np.ndarray:
        return self.states[:, 1 + i]

    def q(self) -> np.ndarray:
        if not self.delayed:
            raise InapplicableError("trajectory has no memory component")
        return self.states[:, -1]

    def state(self, k: int) -> State:
        return State.from_vector(self.states[k], self.delayed)

    def final_state(self) -> State:
        return self.state(len(self.times) - 1)


def _initial_step(f, t0, v0, f0, rel_tol, abs_tol, span):
    """Standard curvature-probe guess for the first step size."""
    scale = abs_tol + np.abs(v0) * rel_tol
    d0 = math.sqrt(float(np.mean((v0 / scale) ** 2)))
    d1 = math.sqrt(float(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    v1 = v0 + h0 * f0
    f1 = f(t0 + h0, v1)
    d2 = math.sqrt(float(np.mean(((f1 - f0) / scale) ** 2))) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, span)


def integrate(params: ModelParams, s0: State, t_end: float,
              rel_tol: float = 1e-8, abs_tol: float = 1e-10,
              sample_times=None, t0: float = 0.0,
              max_step: float = math.inf,
              time_budget: float | None = None) -> Trajectory:
    """Integrate from s0 at t0 to t_end with adaptive error control.

    When sample_times is given, output states are produced at exactly
    those times by the dense interpolant (t0 is always included as the
    first output row); otherwise every accepted step is emitted.  A
    delayed run is selected by params.alpha; an initial q defaulting to
    x0 encodes a constant prehistory.
    """
    if not (1e-13 <= rel_tol <= 1e-2 and 1e-13 <= abs_tol <= 1e-2):
        raise DomainError("tolerances must lie in [1e-13, 1e-2]")
    if not (t_end > t0):
        raise DomainError("t_end must exceed t0")
    delayed = params.delayed
    if delayed and s0.q is None:
        s0 = State(s0.x, s0.y, s0.x)  # constant past: q0 = x0
    if not delayed and s0.q is not None:
        raise DomainError("undelayed run takes an initial state without q")
    if len(s0.y) != params.n:
        raise DomainError("initial state dimension does not match parameters")

    deadline = None if time_budget is None else time.monotonic() + time_budget
    nfev = 0

    def f(t, v):
        nonlocal nfev
        nfev += 1
        return rhs_vector(params, v, delayed)

    span = t_end - t0
    v = s0.as_vector()
    t = t0
    k = np.empty((7, v.size))
    k[0] = f(t, v)
    h = min(_initial_step(f, t, v, k[0], rel_tol, abs_tol, span), max_step)
    nfev += 1  # probe evaluation inside _initial_step

    if sample_times is not None:
        samples = np.asarray(sorted(float(ts) for ts in sample_times))
        if samples.size and (samples[0] < t0 - 1e-12 or samples[-1] > t_end + 1e-12):
            raise DomainError("sample times must lie within [t0, t_end]")
        samples = samples[samples > t0]
    else:
        samples = None

    out_t = [t0]
    out_v = [v.copy()]
    sample_idx = 0
    accepted = rejected = 0

    def partial():
        return Trajectory(times=np.asarray(out_t), states=np.asarray(out_v),
                          delayed=delayed, params=params,
                          accepted_steps=accepted, rejected_steps=rejected,
                          nfev=nfev)

    while t < t_end:
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceededError("integration wall-clock budget exceeded")
        if h < 1e-14 * span:
            raise StepUnderflowError(
                f"step size underflow at t={t:.6g} (stiffness or blow-up)",
                trajectory=partial())
        h = min(h, t_end - t, max_step)
        for i in range(1, 7):
            k[i] = f(t + _C[i] * h, v + h * (k[:i].T @ _A[i]))
        v_new = v + h * (k.T @ _B)
        err = h * (k.T @ _E)
        scale = abs_tol + rel_tol * np.maximum(np.abs(v), np.abs(v_new))
        err_norm = math.sqrt(float(np.mean((err / scale) ** 2)))
        if err_norm > 1.0:
            rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err_norm ** _ERR_EXPONENT)
            continue

        t_new = t + h
        if np.any(v_new < POSITIVITY_FLOOR):
            raise PositivityFloorError(
                f"state component fell below {POSITIVITY_FLOOR:g} at "
                f"t={t_new:.6g}", trajectory=partial())

        if samples is None:
            out_t.append(t_new)
            out_v.append(v_new.copy())
        else:
            # dense interpolant over [t, t_new]
            while sample_idx < samples.size and samples[sample_idx] <= t_new + 1e-12:
                ts = min(samples[sample_idx], t_new)
                theta = (ts - t) / h
                powers = np.array([theta, theta ** 2, theta ** 3, theta ** 4])
                vs = v + h * (k.T @ (_P @ powers))
                out_t.append(float(ts))
                out_v.append(vs)
                sample_idx += 1

        accepted += 1
        factor = _MAX_FACTOR if err_norm == 0.0 else min(
            _MAX_FACTOR, _SAFETY * err_norm ** _ERR_EXPONENT)
        h *= max(_MIN_FACTOR, factor)
        t = t_new
        v = v_new
        k[0] = k[6]  # first-same-as-last

    if samples is not None and (not out_t or out_t[-1] < t_end - 1e-12):
        if samples.size == 0 or samples[-1] < t_end - 1e-12:
            out_t.append(t_end)
            out_v.append(v.copy())
    return partial()


def memory_consistency_check(traj: Trajectory) -> float:
    """Max |q_quadrature - q_trajectory| over the sampled times.

    Rebuilds the memory variable from its defining integral
    q(t) = q(t0) e^{-a(t-t0)} + a * int_{t0}^{t} x(s) e^{-a(t-s)} ds
    by trapezoidal quadrature on the trajectory's own samples, with the
    exponential weight integrated exactly over each interval (product
    rule).  A constant prey history then reproduces q to round-off, and
    for smooth trajectories the residual contracts as O(step^2).  Dense
    sampling (step <= 0.01) keeps the quadrature error meaningful.
    """
    if not traj.delayed:
        raise InapplicableError("memory check requires a delayed trajectory")
    alpha = traj.params.alpha
    t = traj.times
    x = traj.x()
    q = traj.q()
    acc = q[0]
    worst = 0.0
    for i in range(1, t.size):
        dt = t[i] - t[i - 1]
        decay = math.exp(-alpha * dt)
        one_minus = -math.expm1(-alpha * dt)
        # x linear on the interval, weight a e^{-a(t_i - s)} exact
        w_right = 1.0 - one_minus / (alpha * dt)
        w_left = one_minus - w_right
        acc = acc * decay + x[i - 1] * w_left + x[i] * w_right
        worst = max(worst, abs(acc - q[i]))
    return worst


def detect_sustained_oscillation(traj: Trajectory, component: int = 0,
                                 rel_floor: float = 1e-6) -> bool:
    """Heuristic flag for a non-decaying oscillation in one component.

    Compares peak-to-peak amplitude over the last quarter of the run
    with the quarter before it: sustained means the amplitude did not
    decay (and is not merely numerical noise).  A true periodic orbit
    and a very slowly converging spiral can both trigger this; it is a
    screening aid, not a proof.
    """
    series = traj.states[:, component]
    m = len(series)
    if m < 8:
        return False
    half = series[m // 2:]
    quarter = len(half) // 2
    first, second = half[:quarter], half[quarter:]
    amp1 = float(np.ptp(first))
    amp2 = float(np.ptp(second))
    scale = max(abs(float(np.mean(series))), 1e-300)
    if amp2 / scale < rel_floor:
        return False
    return amp2 >= 0.5 * amp1
