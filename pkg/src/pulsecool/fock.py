"""Truncated-Fock-basis simulation of the two coupled resonators.

Provides the closed-system state-swap machinery (segment unitaries via
eigendecomposition of the real-symmetric Hamiltonian, partial trace, purity)
and a small-cutoff Lindblad master-equation evolver used as the brute-force
cross-check for the covariance dynamics.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DimensionError, SpaceError, TruncationError, UnsupportedConfigurationError, ValidationError
from .model import RADIANS_PER_PERIOD

TRACE_TOL = 1e-8


def ladder(cutoff):
    """Single-mode annihilation operator with matrix elements sqrt(n)."""
    return np.diag(np.sqrt(np.arange(1, cutoff)), k=1)


@dataclass(frozen=True)
class FockSystem:
    """Cached operators on the truncated target (x) auxiliary product space."""

    cutoff_target: int
    cutoff_aux: int
    a: np.ndarray
    b: np.ndarray
    num_a: np.ndarray
    num_b: np.ndarray
    x_a: np.ndarray
    x_b: np.ndarray
    h_free: np.ndarray
    h_coupling: np.ndarray

    @property
    def dim(self):
        return self.cutoff_target * self.cutoff_aux

    def hamiltonian(self, g):
        """H(g) = num_a + num_b + g * x_a x_b (omega = 1), real symmetric."""
        return self.h_free + g * self.h_coupling


def build_system(cutoff_target=25, cutoff_aux=25):
    if cutoff_target < 2 or cutoff_aux < 2:
        raise DimensionError(
            f"cutoffs must be >= 2, got ({cutoff_target}, {cutoff_aux})"
        )
    a1 = ladder(cutoff_target)
    b1 = ladder(cutoff_aux)
    ia = np.eye(cutoff_target)
    ib = np.eye(cutoff_aux)
    a = np.kron(a1, ib)
    b = np.kron(ia, b1)
    num_a = a.T @ a
    num_b = b.T @ b
    x_a = a + a.T
    x_b = b + b.T
    return FockSystem(
        cutoff_target=int(cutoff_target),
        cutoff_aux=int(cutoff_aux),
        a=a,
        b=b,
        num_a=num_a,
        num_b=num_b,
        x_a=x_a,
        x_b=x_b,
        h_free=num_a + num_b,
        h_coupling=x_a @ x_b,
    )


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace state on the target, auxiliary, or product space."""

    matrix: np.ndarray
    space: str  # "target" | "aux" | "product"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        m.setflags(write=False)
        if self.space not in ("target", "aux", "product"):
            raise SpaceError(f"unknown space {self.space!r}")
        tr = np.trace(m).real
        if abs(tr - 1) > 1e-8:
            raise ValidationError(f"density matrix trace {tr} is not 1")
        object.__setattr__(self, "matrix", m)


def mixed_12_initial(system):
    """Target maximally mixed over the 12 lowest Fock states, auxiliary in |0>."""
    if system.cutoff_target < 12:
        raise DimensionError("cutoff_target must be >= 12 for the mixed-12 state")
    rho_t = np.zeros((system.cutoff_target, system.cutoff_target), dtype=complex)
    for n in range(12):
        rho_t[n, n] = 1.0 / 12.0
    rho_b = np.zeros((system.cutoff_aux, system.cutoff_aux), dtype=complex)
    rho_b[0, 0] = 1.0
    return DensityMatrix(matrix=np.kron(rho_t, rho_b), space="product")


def segment_unitary(system, g, duration):
    """exp(-i H(g) * 2*pi*duration) via eigendecomposition of the symmetric H."""
    evals, evecs = np.linalg.eigh(system.hamiltonian(g))
    phases = np.exp(-1j * evals * duration * RADIANS_PER_PERIOD)
    return (evecs * phases) @ evecs.T


def evolve_closed(system, pulse, rho0):
    """Unitary evolution of a product-space density matrix under a pulse."""
    if pulse.n_channels != 1:
        raise UnsupportedConfigurationError("closed evolution supports one auxiliary")
    if rho0.space != "product":
        raise SpaceError("evolve_closed needs a product-space state")
    rho = rho0.matrix
    for (g,), duration in pulse.piecewise():
        U = segment_unitary(system, g, duration)
        rho = U @ rho @ U.conj().T
    return DensityMatrix(matrix=rho, space="product")


def partial_trace_target(system, rho):
    """Trace out the auxiliary, leaving the target marginal."""
    if rho.space != "product":
        raise SpaceError("partial trace needs a product-space state")
    na, nb = system.cutoff_target, system.cutoff_aux
    r = rho.matrix.reshape(na, nb, na, nb)
    return DensityMatrix(matrix=np.einsum("ajbj->ab", r), space="target")


def purity(rho):
    """Tr(rho^2); for Hermitian rho this is the squared Frobenius norm."""
    return float(np.sum(np.abs(rho.matrix) ** 2))


def swap_purity(system, g_values, total_time):
    """Purity of the target marginal after the mixed-12 swap protocol.

    Evolves the 12 pure inputs |n>|0> as state vectors and averages their
    target marginals; equivalent to evolve_closed on the mixed state but
    much cheaper inside optimization loops.
    """
    psi = _mixed_12_columns(system)
    for g, duration in zip(
        np.atleast_1d(np.asarray(g_values, dtype=float)),
        _equal_durations(g_values, total_time),
    ):
        evals, evecs = np.linalg.eigh(system.hamiltonian(g))
        phases = np.exp(-1j * evals * duration * RADIANS_PER_PERIOD)
        psi = evecs @ (phases[:, None] * (evecs.T @ psi))
    rho_t = _average_target_marginal(system, psi)
    return float(np.sum(np.abs(rho_t) ** 2))


def _equal_durations(g_values, total_time):
    n = len(np.atleast_1d(g_values))
    return [total_time / n] * n


def _mixed_12_columns(system):
    """State-vector columns |n>|0>, n = 0..11, on the product space."""
    if system.cutoff_target < 12:
        raise DimensionError("cutoff_target must be >= 12 for the mixed-12 state")
    psi = np.zeros((system.dim, 12), dtype=complex)
    for n in range(12):
        psi[n * system.cutoff_aux, n] = 1.0
    return psi


def _average_target_marginal(system, psi):
    """(1/12) sum_n Tr_aux |psi_n><psi_n| for columns psi."""
    r = psi.reshape(system.cutoff_target, system.cutoff_aux, psi.shape[1])
    return np.einsum("ajn,bjn->ab", r, r.conj()) / psi.shape[1]


def swap_purity_and_gradient(system, g_values, total_time):
    """Swap purity and its gradient with respect to the segment couplings.

    The derivative of each segment unitary is taken in its eigenbasis using
    divided differences of exp(-i*lambda*t), then pushed through the
    remaining segments.
    """
    g_values = np.atleast_1d(np.asarray(g_values, dtype=float))
    n_seg = len(g_values)
    dt = total_time / n_seg
    t_rad = dt * RADIANS_PER_PERIOD

    psi = _mixed_12_columns(system)
    states = [psi]
    eigs = []
    for g in g_values:
        evals, evecs = np.linalg.eigh(system.hamiltonian(g))
        eigs.append((evals, evecs))
        phases = np.exp(-1j * evals * t_rad)
        psi = evecs @ (phases[:, None] * (evecs.T @ states[-1]))
        states.append(psi)

    rho_t = _average_target_marginal(system, states[-1])
    val = float(np.sum(np.abs(rho_t) ** 2))

    grad = np.zeros(n_seg)
    for k in range(n_seg):
        evals, evecs = eigs[k]
        # divided differences of f(x) = exp(-i x t) on the eigenvalue pairs
        lam_i = evals[:, None]
        lam_j = evals[None, :]
        f_i = np.exp(-1j * lam_i * t_rad)
        f_j = np.exp(-1j * lam_j * t_rad)
        diff = lam_i - lam_j
        with np.errstate(divide="ignore", invalid="ignore"):
            phi = (f_i - f_j) / diff
        degenerate = np.abs(diff) < 1e-12
        phi[degenerate] = (-1j * t_rad * f_i * np.ones_like(f_j))[degenerate]
        v_tilde = evecs.T @ system.h_coupling @ evecs
        dU_core = phi * v_tilde
        dpsi = evecs @ (dU_core @ (evecs.T @ states[k]))
        for m in range(k + 1, n_seg):
            ev, vec = eigs[m]
            ph = np.exp(-1j * ev * t_rad)
            dpsi = vec @ (ph[:, None] * (vec.T @ dpsi))
        # dP = 2 Re Tr[rho_t * d(rho_t)]
        r = states[-1].reshape(system.cutoff_target, system.cutoff_aux, -1)
        dr = dpsi.reshape(system.cutoff_target, system.cutoff_aux, -1)
        drho = np.einsum("ajn,bjn->ab", dr, r.conj()) / states[-1].shape[1]
        drho = drho + drho.conj().T
        grad[k] = 2.0 * float(np.real(np.sum(rho_t.conj() * drho)))
    return val, grad


def thermal_density(cutoff, n_bar):
    """Truncated, renormalized thermal state of one mode."""
    if n_bar <= 0:
        p = np.zeros(cutoff)
        p[0] = 1.0
    else:
        k = np.arange(cutoff)
        p = (n_bar / (n_bar + 1)) ** k / (n_bar + 1)
        p = p / p.sum()
    return np.diag(p.astype(complex))


def evolve_lindblad(system, params, pulse, rho0, sample_times=None,
                    rtol=1e-9, atol=1e-11, truncation_tol=1e-6):
    """Thermal-bath master equation evolution of a product-space state.

    Integrates drho/dt = -i[H(g(t)), rho] + gamma dissipators on the target
    and kappa dissipators on the auxiliary with an adaptive Runge-Kutta
    method.  Intended as a small-cutoff oracle; raises TruncationError when
    the top-level Fock population grows by more than truncation_tol over its
    initial value.

    Returns (DensityMatrix, trajectory) where trajectory holds
    (time, n_target, n_aux) rows at sample_times (or segment edges).
    """
    if pulse.n_channels != 1:
        raise UnsupportedConfigurationError("Lindblad oracle supports one auxiliary")
    if rho0.space != "product":
        raise SpaceError("evolve_lindblad needs a product-space state")
    if len(params.auxiliaries) != 1:
        raise UnsupportedConfigurationError("Lindblad oracle supports one auxiliary")

    gamma, n_T = params.gamma, params.n_T
    kappa, n_aux = params.kappa, params.n_aux
    dim = system.dim

    ops = []
    for rate, L in (
        (gamma * (n_T + 1), system.a),
        (gamma * n_T, system.a.T),
        (kappa * (n_aux + 1), system.b),
        (kappa * n_aux, system.b.T),
    ):
        if rate > 0:
            ops.append((rate, L, L.T @ L))

    def rhs_factory(h):
        def rhs(_t, y):
            rho = y.reshape(dim, dim)
            out = -1j * (h @ rho - rho @ h)
            for rate, L, LdL in ops:
                out += rate * (L @ rho @ L.T - 0.5 * (LdL @ rho + rho @ LdL))
            return out.reshape(-1)
        return rhs

    total = pulse.total_time
    if sample_times is None:
        sample_times = []
    sample_times = sorted(float(t) for t in sample_times)

    top_initial = _top_level_population(system, rho0.matrix)

    rho = rho0.matrix.astype(complex)
    t0_trace = np.trace(rho).real
    traj_t, traj_na, traj_nb = [], [], []

    t_edge = 0.0
    for (g,), duration in pulse.piecewise():
        h = system.hamiltonian(g)
        t1 = t_edge + duration
        t_eval = [t for t in sample_times if t_edge < t <= t1 + 1e-12 * total]
        t_eval_rad = sorted({min(t, t1) * RADIANS_PER_PERIOD for t in t_eval}
                            | {t1 * RADIANS_PER_PERIOD})
        sol = solve_ivp(
            rhs_factory(h),
            (t_edge * RADIANS_PER_PERIOD, t1 * RADIANS_PER_PERIOD),
            rho.reshape(-1),
            method="DOP853",
            t_eval=t_eval_rad,
            rtol=rtol,
            atol=atol,
        )
        if not sol.success:
            raise RuntimeError(f"Lindblad integration failed: {sol.message}")
        for idx, t_rad in enumerate(sol.t):
            r = sol.y[:, idx].reshape(dim, dim)
            t_per = t_rad / RADIANS_PER_PERIOD
            if any(abs(t_per - ts) < 1e-9 for ts in t_eval):
                traj_t.append(t_per)
                traj_na.append(float(np.real(np.trace(system.num_a @ r))))
                traj_nb.append(float(np.real(np.trace(system.num_b @ r))))
        rho = sol.y[:, -1].reshape(dim, dim)
        top = _top_level_population(system, rho)
        if top - top_initial > truncation_tol:
            raise TruncationError(
                f"top-level Fock population grew to {top:.3e} (from {top_initial:.3e})"
            )
        t_edge = t1

    drift = abs(np.trace(rho).real - t0_trace)
    if drift > TRACE_TOL:
        raise RuntimeError(f"Lindblad trace drifted by {drift:.3e}")
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real

    trajectory = np.rec.fromarrays(
        [np.array(traj_t), np.array(traj_na), np.array(traj_nb)],
        names=["time", "n_target", "n_aux"],
    )
    return DensityMatrix(matrix=rho, space="product"), trajectory


def _top_level_population(system, rho):
    """Combined population of the highest Fock level of either mode."""
    na, nb = system.cutoff_target, system.cutoff_aux
    diag = np.real(np.diag(rho)).reshape(na, nb)
    return float(diag[-1, :].sum() + diag[:, -1].sum())
