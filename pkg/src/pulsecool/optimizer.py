"""Quasi-Newton pulse optimization for the swap and cooling objectives.

Both objectives are minimized: the swap objective is the negative purity of
the target marginal after the mixed-12 protocol, the cooling objective is
the final target occupation of the covariance dynamics from a thermal start.
Multi-start BFGS (scipy L-BFGS-B: rank-two secant updates with a
Wolfe-condition line search and bound projection) with seeded restarts.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, expm_frechet
from scipy.optimize import minimize

from . import covariance, fock
from .errors import DivergenceError, OptimizationFailedError, PhysicalityError, ValidationError
from .model import RADIANS_PER_PERIOD, ControlPulse

#: objective value substituted when propagation diverges (line search backs off)
DIVERGENCE_PENALTY = 1e12

GTOL = 1e-8
MAX_ITER = 500

#: default coupling bound, in angular units (~5 cycles/period)
DEFAULT_G_MAX = 0.8

_system_cache = {}


def _get_system(cutoffs):
    if cutoffs not in _system_cache:
        _system_cache[cutoffs] = fock.build_system(*cutoffs)
    return _system_cache[cutoffs]


@dataclass(frozen=True)
class Objective:
    """Specification of one optimization problem over segment couplings."""

    kind: str  # "swap_purity" | "final_occupation"
    params: object
    n_segments: int
    total_time: float
    g_max: float = DEFAULT_G_MAX
    cutoffs: tuple = (25, 25)

    def __post_init__(self):
        if self.kind not in ("swap_purity", "final_occupation"):
            raise ValidationError(f"unknown objective kind {self.kind!r}")
        if self.n_segments < 1:
            raise ValidationError("n_segments must be >= 1")
        if self.g_max <= 0:
            raise ValidationError("g_max must be > 0")
        if self.total_time <= 0:
            raise ValidationError("total_time must be > 0")
        if self.kind == "swap_purity" and len(self.params.auxiliaries) != 1:
            raise ValidationError("swap objective supports one auxiliary")

    @property
    def n_channels(self):
        return len(self.params.auxiliaries)

    @property
    def n_parameters(self):
        return self.n_segments * self.n_channels

    def pulse_from_vector(self, g_values):
        g = np.asarray(g_values, dtype=float).reshape(self.n_channels, self.n_segments)
        return ControlPulse.equal_segments(g, self.total_time)


@dataclass(frozen=True)
class OptimizationResult:
    """Best pulse found across restarts plus run diagnostics."""

    best_pulse: ControlPulse
    best_value: float
    restarts_used: int
    iterations: tuple
    gradient_norm_final: float
    seed: object
    wall_time: float
    history: tuple = ()


def _check_bounds(objective, g_values):
    g = np.asarray(g_values, dtype=float)
    if g.shape != (objective.n_parameters,):
        raise ValidationError(
            f"expected {objective.n_parameters} couplings, got shape {g.shape}"
        )
    slack = 1e-6 * objective.g_max  # finite-difference probes at the boundary
    if np.any(np.abs(g) > objective.g_max + slack):
        raise ValidationError(
            f"couplings exceed bound {objective.g_max}: max |g| = {np.abs(g).max()}"
        )
    return g


def evaluate(objective, g_values):
    """Objective value at a coupling vector (lower is better)."""
    if callable(objective):  # plain callables allowed for harness self-tests
        out = objective(np.asarray(g_values, dtype=float))
        return out[0] if isinstance(out, tuple) else out
    g = _check_bounds(objective, g_values)
    if objective.kind == "swap_purity":
        system = _get_system(objective.cutoffs)
        return -fock.swap_purity(system, g, objective.total_time)
    pulse = objective.pulse_from_vector(g)
    return covariance.final_occupation(objective.params, pulse)


def _evaluate_safe(objective, g_values):
    try:
        val = evaluate(objective, g_values)
    except (DivergenceError, PhysicalityError):
        return DIVERGENCE_PENALTY
    if not np.isfinite(val):
        return DIVERGENCE_PENALTY
    return min(val, DIVERGENCE_PENALTY)


def finite_difference_gradient(objective, g_values, rel_step=1e-6, abs_floor=1e-8):
    """Central differences with per-component relative step."""
    if callable(objective):
        g = np.asarray(g_values, dtype=float)
    else:
        g = _check_bounds(objective, g_values)
    grad = np.zeros_like(g)
    for i in range(len(g)):
        h = max(rel_step * abs(g[i]), abs_floor)
        gp, gm = g.copy(), g.copy()
        gp[i] += h
        gm[i] -= h
        grad[i] = (_evaluate_safe(objective, gp) - _evaluate_safe(objective, gm)) / (2 * h)
    return grad


def _occupation_value_and_gradient(objective, g_values):
    """Exact forward-sensitivity gradient of the covariance objective.

    Each segment propagator is expm of the augmented vectorized system; its
    derivative with respect to the segment coupling is the Frechet derivative,
    pushed through the remaining segments.
    """
    params = objective.params
    g = np.asarray(g_values, dtype=float).reshape(objective.n_channels, objective.n_segments)
    d = 2 * (1 + objective.n_channels)
    n = d * d
    dt_rad = (objective.total_time / objective.n_segments) * RADIANS_PER_PERIOD

    G = covariance.build_diffusion(params)
    # dA/dg_c, one constant matrix per channel
    base = covariance.build_drift(params, np.zeros(objective.n_channels))
    dA = []
    for c in range(objective.n_channels):
        e = np.zeros(objective.n_channels)
        e[c] = 1.0
        dA.append(covariance.build_drift(params, e) - base)

    def augment(M_top, vec_g):
        M = np.zeros((n + 1, n + 1), dtype=complex)
        M[:n, :n] = M_top
        M[:n, n] = vec_g
        return M

    s = np.append(covariance.thermal_covariance(params).matrix.reshape(-1), 1.0)
    states = [s]
    mats = []
    props = []
    for k in range(objective.n_segments):
        A = covariance.build_drift(params, g[:, k])
        M = augment(covariance._vec_operator(A), G.reshape(-1)) * dt_rad
        E = expm(M)
        mats.append(M)
        props.append(E)
        s = E @ s
        states.append(s)

    C_final = states[-1][:n].reshape(d, d)
    if np.max(np.abs(C_final)) > covariance.DIVERGENCE_LIMIT or not np.all(np.isfinite(C_final)):
        raise DivergenceError("covariance diverged in sensitivity propagation")
    value = float(np.real(C_final[1, 0]))

    idx = 1 * d + 0  # row-major position of <a+ a>
    grad = np.zeros((objective.n_channels, objective.n_segments))
    for k in range(objective.n_segments):
        for c in range(objective.n_channels):
            dM = augment(covariance._vec_operator(dA[c]), np.zeros(n)) * dt_rad
            dE = expm_frechet(mats[k], dM, compute_expm=False)
            v = dE @ states[k]
            for m in range(k + 1, objective.n_segments):
                v = props[m] @ v
            grad[c, k] = float(np.real(v[idx]))
    return value, grad.reshape(-1)


def gradient(objective, g_values, method="auto"):
    """Gradient of the objective; analytic where available, else central FD."""
    if method == "fd":
        return finite_difference_gradient(objective, g_values)
    if objective.kind == "final_occupation":
        return _occupation_value_and_gradient(objective, g_values)[1]
    system = _get_system(objective.cutoffs)
    g = _check_bounds(objective, g_values)
    _, grad = fock.swap_purity_and_gradient(system, g, objective.total_time)
    return -grad


def _value_and_gradient(objective, g_values):
    if callable(objective):
        out = objective(np.asarray(g_values, dtype=float))
        if isinstance(out, tuple):
            return out
        return out, finite_difference_gradient(objective, g_values)
    try:
        if objective.kind == "final_occupation":
            return _occupation_value_and_gradient(objective, g_values)
        system = _get_system(objective.cutoffs)
        val, grad = fock.swap_purity_and_gradient(
            system, np.asarray(g_values, dtype=float), objective.total_time
        )
        return -val, -grad
    except (DivergenceError, PhysicalityError):
        return DIVERGENCE_PENALTY, np.zeros(objective.n_parameters)


def _run_restart(objective, x0, record_history=False):
    history = []

    def fun(x):
        return _value_and_gradient(objective, x)

    def callback(xk):
        if record_history:
            history.append(_evaluate_safe(objective, xk))

    bounds = None
    if not callable(objective):
        bounds = [(-objective.g_max, objective.g_max)] * objective.n_parameters
    res = minimize(
        fun,
        x0,
        jac=True,
        method="L-BFGS-B",
        bounds=bounds,
        callback=callback if record_history else None,
        options={"maxiter": MAX_ITER, "gtol": GTOL, "ftol": 1e-14},
    )
    value = _evaluate_safe(objective, res.x)
    grad_norm = float(np.linalg.norm(np.atleast_1d(res.jac)))
    return res.x, value, int(res.nit), grad_norm, tuple(history)


def optimize(objective, restarts=None, seed=0, jobs=1, initial_guesses=(),
             target_value=None, record_history=False):
    """Multi-start quasi-Newton minimization.

    The first restart starts from all segments at g = 0.5; the remaining
    restarts from uniform random vectors in [-g_max, g_max] drawn from a
    seeded generator.  initial_guesses (ControlPulse or vectors) are warm
    starts evaluated before the seeded restarts.  When target_value is given,
    no further restarts launch once the best value is at or below it.
    """
    if restarts is None:
        restarts = 20 if objective.n_segments <= 10 else 50
    if restarts < 1:
        raise ValidationError("restarts must be >= 1")
    t0 = time.monotonic()
    rng = np.random.default_rng(seed)

    starts = []
    for guess in initial_guesses:
        if isinstance(guess, ControlPulse):
            vec = np.array(
                [g for ch in guess.channels for g, _ in ch], dtype=float
            )
        else:
            vec = np.asarray(guess, dtype=float)
        starts.append(np.clip(vec, -objective.g_max, objective.g_max))
    starts.append(np.full(objective.n_parameters, 0.5))
    for _ in range(restarts - 1):
        starts.append(rng.uniform(-objective.g_max, objective.g_max,
                                  objective.n_parameters))

    best = None  # (value, order index, x, grad_norm)
    iterations = []
    histories = []
    n_done = 0
    failures = 0

    def consume(order, outcome):
        nonlocal best, failures
        x, value, nit, grad_norm, history = outcome
        iterations.append(nit)
        histories.append(history)
        if value >= DIVERGENCE_PENALTY:
            failures += 1
            return
        if best is None or (value, order) < (best[0], best[1]):
            best = (value, order, x, grad_norm)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, jobs)
            i = 0
            while i < len(starts):
                batch = starts[i:i + chunk]
                futures = [
                    pool.submit(_run_restart, objective, x0, record_history)
                    for x0 in batch
                ]
                for j, fut in enumerate(futures):
                    consume(i + j, fut.result())
                n_done = i + len(batch)
                i += chunk
                if target_value is not None and best is not None and best[0] <= target_value:
                    break
    else:
        for i, x0 in enumerate(starts):
            consume(i, _run_restart(objective, x0, record_history))
            n_done = i + 1
            if target_value is not None and best is not None and best[0] <= target_value:
                break

    # the trivial zero pulse is always an admissible candidate for cooling
    if objective.kind == "final_occupation":
        zero = np.zeros(objective.n_parameters)
        zero_val = _evaluate_safe(objective, zero)
        if best is None or zero_val < best[0]:
            best = (zero_val, len(starts), zero, 0.0)

    if best is None:
        raise OptimizationFailedError(
            f"all {n_done} restarts diverged (objective {objective.kind})"
        )
    value, _, x, grad_norm = best
    return OptimizationResult(
        best_pulse=objective.pulse_from_vector(x),
        best_value=value,
        restarts_used=n_done,
        iterations=tuple(iterations),
        gradient_norm_final=grad_norm,
        seed=seed,
        wall_time=time.monotonic() - t0,
        history=tuple(histories),
    )


def optimize_over_time(objective_template, time_grid, restarts=None, seed=0,
                       jobs=1, initial_guesses=(), target_value=None):
    """Run optimize at each total time; returns (results, index of argmin).

    objective_template is an Objective whose total_time is replaced per grid
    point.  Seeds are decorrelated deterministically across grid points.
    """
    time_grid = list(time_grid)
    if not time_grid:
        raise ValidationError("time grid must be nonempty")
    seeds = np.random.SeedSequence(seed).spawn(len(time_grid))
    results = []
    for sub_seed, tau in zip(seeds, time_grid):
        obj = Objective(
            kind=objective_template.kind,
            params=objective_template.params,
            n_segments=objective_template.n_segments,
            total_time=float(tau),
            g_max=objective_template.g_max,
            cutoffs=objective_template.cutoffs,
        )
        results.append(optimize(obj, restarts=restarts, seed=sub_seed, jobs=jobs,
                                initial_guesses=initial_guesses,
                                target_value=target_value))
    best_idx = int(np.argmin([r.best_value for r in results]))
    return results, best_idx
