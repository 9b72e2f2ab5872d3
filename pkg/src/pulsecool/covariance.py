"""Second-moment (covariance) dynamics of the linearly coupled resonators.

The state is the matrix C of ordered second moments <x_i x_j> with
x = (a, a+, b1, b1+[, b2, b2+]).  Under the linear dynamics C obeys
dC/dt = A C + C A^T + G with a drift matrix A depending on the couplings
and a diffusion matrix G depending only on the thermal environments.
Piecewise-constant pulses are propagated exactly with the matrix
exponential of the augmented vectorized system.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import expm

from .errors import DivergenceError, NoSteadyStateError, PhysicalityError, ValidationError
from .model import RADIANS_PER_PERIOD

#: abort threshold for any moment magnitude during propagation
DIVERGENCE_LIMIT = 1e12

#: tolerance on the imaginary part of <a+ a>
IMAG_TOL = 1e-8


@dataclass(frozen=True)
class CovarianceState:
    """Ordered second moments and the elapsed time (in periods)."""

    matrix: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        m.setflags(write=False)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (4, 6):
            raise ValidationError(f"covariance matrix must be 4x4 or 6x6, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self):
        return self.matrix.shape[0] // 2


@dataclass(frozen=True)
class DriftDiffusion:
    """Drift matrix A and diffusion matrix G of the moment equation."""

    A: np.ndarray
    G: np.ndarray


def build_drift(params, g):
    """Drift matrix A for couplings g (one per auxiliary).

    Per-mode diagonal is (-i*omega - rate/2, +i*omega - rate/2); the target
    couples to auxiliary j through -i*g_j / +i*g_j blocks with the row sign
    set by the annihilation/creation component, and the auxiliaries are
    mutually uncoupled.
    """
    g = np.atleast_1d(np.asarray(g, dtype=float))
    m = len(params.auxiliaries)
    if g.shape != (m,):
        raise ValidationError(f"need {m} coupling values, got shape {g.shape}")
    d = 2 * (1 + m)
    A = np.zeros((d, d), dtype=complex)
    w = params.omega
    A[0, 0] = -1j * w - params.gamma / 2
    A[1, 1] = 1j * w - params.gamma / 2
    for j, aux in enumerate(params.auxiliaries):
        r, s = 2 + 2 * j, 3 + 2 * j
        A[r, r] = -1j * w - aux.kappa / 2
        A[s, s] = 1j * w - aux.kappa / 2
        gj = g[j]
        A[0, r] = A[0, s] = -1j * gj
        A[1, r] = A[1, s] = 1j * gj
        A[r, 0] = A[r, 1] = -1j * gj
        A[s, 0] = A[s, 1] = 1j * gj
    return A


def build_diffusion(params):
    """Diffusion matrix G; independent of the couplings."""
    m = len(params.auxiliaries)
    d = 2 * (1 + m)
    G = np.zeros((d, d), dtype=complex)
    G[0, 1] = params.gamma * (params.n_T + 1)
    G[1, 0] = params.gamma * params.n_T
    for j, aux in enumerate(params.auxiliaries):
        r, s = 2 + 2 * j, 3 + 2 * j
        G[r, s] = aux.kappa * (aux.n_aux + 1)
        G[s, r] = aux.kappa * aux.n_aux
    return G


def thermal_covariance(params, n_target=None):
    """Thermal product state: <a+ a> = n_T, each auxiliary at its n_aux.

    n_target overrides the target occupation (used when matching a truncated
    initial state); defaults to params.n_T.
    """
    n = params.n_T if n_target is None else float(n_target)
    m = len(params.auxiliaries)
    d = 2 * (1 + m)
    C = np.zeros((d, d), dtype=complex)
    C[0, 1] = n + 1
    C[1, 0] = n
    for j, aux in enumerate(params.auxiliaries):
        r, s = 2 + 2 * j, 3 + 2 * j
        C[r, s] = aux.n_aux + 1
        C[s, r] = aux.n_aux
    return CovarianceState(matrix=C, time=0.0)


def _vec_operator(A):
    """Row-major vectorized operator for C -> A C + C A^T."""
    d = A.shape[0]
    eye = np.eye(d)
    return np.kron(A, eye) + np.kron(eye, A)


def _augmented_propagator(A, G, dt_rad):
    """exp(M*dt) for the augmented system [vec(C); 1]."""
    d = A.shape[0]
    n = d * d
    M = np.zeros((n + 1, n + 1), dtype=complex)
    M[:n, :n] = _vec_operator(A)
    M[:n, n] = G.reshape(-1)
    return expm(M * dt_rad)


def _check_finite(C, context):
    if not np.all(np.isfinite(C)) or np.max(np.abs(C)) > DIVERGENCE_LIMIT:
        raise DivergenceError(f"covariance diverged during {context}")


def propagate_segment(state, A, G, dt):
    """Advance C by dt periods under constant A, G (exact to expm accuracy)."""
    if dt <= 0:
        raise ValidationError(f"dt must be > 0, got {dt}")
    P = _augmented_propagator(A, G, dt * RADIANS_PER_PERIOD)
    d = A.shape[0]
    v = np.append(state.matrix.reshape(-1), 1.0)
    out = (P @ v)[:-1].reshape(d, d)
    _check_finite(out, f"segment of duration {dt} periods")
    return CovarianceState(matrix=out, time=state.time + dt)


def propagate_pulse(params, pulse, initial, samples_per_period=50):
    """Chain segment propagation over a pulse; also sample occupations.

    Returns (final_state, trajectory) where trajectory is a record array of
    (time, n_target, n_aux_total) sampled on a grid of at least
    samples_per_period points per period, including both endpoints.
    """
    if pulse.n_channels != len(params.auxiliaries):
        raise ValidationError(
            f"pulse has {pulse.n_channels} channels for {len(params.auxiliaries)} auxiliaries"
        )
    G = build_diffusion(params)
    d = initial.matrix.shape[0]
    m = len(params.auxiliaries)

    times = [initial.time]
    n_target = [float(np.real(initial.matrix[1, 0]))]
    n_aux = [float(sum(np.real(initial.matrix[2 + 2 * j + 1, 2 + 2 * j]) for j in range(m)))]

    state = initial
    for g_vec, duration in pulse.piecewise():
        A = build_drift(params, g_vec)
        nsub = max(1, math.ceil(samples_per_period * duration))
        dt_sub = duration / nsub
        P = _augmented_propagator(A, G, dt_sub * RADIANS_PER_PERIOD)
        v = np.append(state.matrix.reshape(-1), 1.0)
        t = state.time
        for _ in range(nsub):
            v = P @ v
            t += dt_sub
            C = v[:-1].reshape(d, d)
            _check_finite(C, f"pulse segment at t={t:.6g} periods")
            times.append(t)
            n_target.append(float(np.real(C[1, 0])))
            n_aux.append(float(sum(np.real(C[3 + 2 * j, 2 + 2 * j]) for j in range(m))))
        state = CovarianceState(matrix=v[:-1].reshape(d, d), time=t)

    trajectory = np.rec.fromarrays(
        [np.array(times), np.array(n_target), np.array(n_aux)],
        names=["time", "n_target", "n_aux"],
    )
    return state, trajectory


def final_occupation(params, pulse, initial=None):
    """Target occupation after a pulse from a thermal start (fast path).

    Avoids the trajectory sampling of propagate_pulse; used by the optimizer.
    """
    if initial is None:
        initial = thermal_covariance(params)
    G = build_diffusion(params)
    d = initial.matrix.shape[0]
    v = np.append(initial.matrix.reshape(-1), 1.0)
    for g_vec, duration in pulse.piecewise():
        A = build_drift(params, g_vec)
        P = _augmented_propagator(A, G, duration * RADIANS_PER_PERIOD)
        v = P @ v
        C = v[:-1].reshape(d, d)
        _check_finite(C, "pulse propagation")
    return mean_occupation(CovarianceState(matrix=C, time=initial.time + pulse.total_time))


def mean_occupation(state):
    """Target occupation Re(<a+ a>); rejects unphysical imaginary parts."""
    val = state.matrix[1, 0]
    if abs(val.imag) > IMAG_TOL:
        raise PhysicalityError(f"<a+ a> has imaginary part {val.imag:.3e}")
    return float(val.real)


def aux_occupation(state, j=0):
    """Occupation <b+ b> of auxiliary j."""
    return float(np.real(state.matrix[3 + 2 * j, 2 + 2 * j]))


def steady_state(params, g):
    """Steady state of constant-g dynamics: solves A C + C A^T + G = 0.

    Requires A Hurwitz; raises NoSteadyStateError otherwise, reporting the
    offending eigenvalue.
    """
    A = build_drift(params, g)
    eigs = np.linalg.eigvals(A)
    worst = eigs[np.argmax(eigs.real)]
    if worst.real >= 0:
        raise NoSteadyStateError(
            f"drift matrix not Hurwitz: eigenvalue {worst:.6g} has Re >= 0"
        )
    G = build_diffusion(params)
    d = A.shape[0]
    L = _vec_operator(A)
    lu = scipy.linalg.lu_factor(L)
    vec_c = scipy.linalg.lu_solve(lu, -G.reshape(-1))
    C = vec_c.reshape(d, d)
    # iterative refinement: the solve is ill-conditioned when rates span
    # many orders of magnitude
    for _ in range(3):
        residual = A @ C + C @ A.T + G
        if np.linalg.norm(residual) <= 1e-13 * max(np.linalg.norm(G), 1.0):
            break
        C = C - scipy.linalg.lu_solve(lu, residual.reshape(-1)).reshape(d, d)
    residual = A @ C + C @ A.T + G
    g_norm = np.linalg.norm(G)
    if g_norm > 0 and np.linalg.norm(residual) > 1e-10 * g_norm:
        raise NoSteadyStateError(
            f"steady-state residual {np.linalg.norm(residual):.3e} exceeds tolerance"
        )
    return CovarianceState(matrix=C, time=math.inf)
