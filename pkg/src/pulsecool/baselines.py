"""Sideband-cooling reference curves for comparison with pulsed control.

The sideband baseline at each kappa is the steady-state target occupation of
the constant-g dynamics, minimized over g; the constant-g "single swap" of
duration pi/(2g) is the other classic reference.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import covariance
from .errors import NoSteadyStateError, ValidationError
from .model import ControlPulse, RADIANS_PER_PERIOD

#: default constant-g search window for the baseline (capped at omega; beyond
#: that constant-g coupling is no longer sideband cooling)
G_MIN_DEFAULT = 1e-4
G_MAX_DEFAULT = 1.0
G_GRID_POINTS = 200
GOLDEN_REL_TOL = 1e-3


@dataclass(frozen=True)
class SidebandPoint:
    """Best constant-g steady state at one auxiliary damping rate."""

    kappa: float
    g_opt: float
    n_ss: float


def _steady_occupation(params, g):
    try:
        return covariance.mean_occupation(covariance.steady_state(params, [g]))
    except NoSteadyStateError:
        return math.inf


def sideband_point(params, g_min=G_MIN_DEFAULT, g_max=G_MAX_DEFAULT,
                   n_grid=G_GRID_POINTS):
    """Minimize the constant-g steady-state occupation over a log-spaced grid,
    refined by golden-section search around the discrete minimum."""
    grid = np.geomspace(g_min, g_max, n_grid)
    values = np.array([_steady_occupation(params, g) for g in grid])
    if not np.any(np.isfinite(values)):
        raise NoSteadyStateError(
            f"no stable constant coupling in [{g_min}, {g_max}] for kappa={params.kappa}"
        )
    k = int(np.nanargmin(np.where(np.isfinite(values), values, np.nan)))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, n_grid - 1)]
    g_opt, n_ss = _golden_section(lambda g: _steady_occupation(params, g), lo, hi)
    if values[k] < n_ss:
        g_opt, n_ss = grid[k], values[k]
    return SidebandPoint(kappa=params.kappa, g_opt=float(g_opt), n_ss=float(n_ss))


def _golden_section(f, lo, hi, rel_tol=GOLDEN_REL_TOL):
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > rel_tol * max(abs(a), abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def sideband_curve(params_factory, kappa_grid, g_min=G_MIN_DEFAULT,
                   g_max=G_MAX_DEFAULT, n_grid=G_GRID_POINTS):
    """SidebandPoint per kappa; params_factory(kappa) builds the ModelParams."""
    kappa_grid = list(kappa_grid)
    if not kappa_grid:
        raise ValidationError("kappa grid must be nonempty")
    points = []
    for kappa in kappa_grid:
        params = params_factory(kappa)
        points.append(sideband_point(params, g_min=g_min, g_max=g_max, n_grid=n_grid))
    return points


def rwa_swap_cool(params, g):
    """Final target occupation after a constant-g swap of duration pi/(2g).

    The classic single-swap cooling reference; meaningful within the RWA
    (g well below omega, guidance g <= 0.1)."""
    if g <= 0:
        raise ValidationError(f"swap coupling must be > 0, got {g}")
    duration_periods = (math.pi / (2 * g)) / RADIANS_PER_PERIOD
    pulse = ControlPulse.equal_segments([g], duration_periods)
    return covariance.final_occupation(params, pulse)
