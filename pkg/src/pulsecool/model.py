"""Physical parameters, piecewise-constant pulses, and cooling metrics.

Units: the target frequency omega is the unit of rate (omega = 1, hbar = 1)
and durations are measured in target periods T = 2*pi.  All damping rates
and couplings are therefore dimensionless fractions of omega.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RefinementError, UnsupportedConfigurationError, ValidationError

#: radians of phase per target period (omega = 1)
RADIANS_PER_PERIOD = 2.0 * math.pi

OMEGA = 1.0


def _check_rate(name, value):
    if not np.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    if value < 0:
        raise ValidationError(f"{name} must be >= 0, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class Auxiliary:
    """One auxiliary resonator: damping rate kappa and thermal occupation."""

    kappa: float
    n_aux: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kappa", _check_rate("kappa", self.kappa))
        object.__setattr__(self, "n_aux", _check_rate("n_aux", self.n_aux))


@dataclass(frozen=True)
class ModelParams:
    """Damped target resonator plus one or two damped auxiliaries.

    gamma is the target damping rate, n_T its ambient thermal occupation.
    The target frequency is fixed to 1 (the unit); the auxiliary sits at the
    same effective frequency after frequency conversion.
    """

    gamma: float
    n_T: float
    auxiliaries: tuple[Auxiliary, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma", _check_rate("gamma", self.gamma))
        object.__setattr__(self, "n_T", _check_rate("n_T", self.n_T))
        aux = tuple(self.auxiliaries)
        if not 1 <= len(aux) <= 2:
            raise UnsupportedConfigurationError(
                f"need 1 or 2 auxiliaries, got {len(aux)}"
            )
        object.__setattr__(self, "auxiliaries", aux)

    @property
    def omega(self):
        return OMEGA

    @property
    def n_modes(self):
        """Total mode count: target plus auxiliaries."""
        return 1 + len(self.auxiliaries)

    @property
    def kappa(self):
        """Damping rate of the (single) auxiliary; errors if there are two."""
        if len(self.auxiliaries) != 1:
            raise UnsupportedConfigurationError("kappa is ambiguous with 2 auxiliaries")
        return self.auxiliaries[0].kappa

    @property
    def n_aux(self):
        if len(self.auxiliaries) != 1:
            raise UnsupportedConfigurationError("n_aux is ambiguous with 2 auxiliaries")
        return self.auxiliaries[0].n_aux


def make_params(gamma, n_T, aux_list):
    """Validated ModelParams from (gamma, n_T, [(kappa, n_aux), ...])."""
    auxiliaries = []
    for item in aux_list:
        if isinstance(item, Auxiliary):
            auxiliaries.append(item)
        else:
            kappa, n_aux = item
            auxiliaries.append(Auxiliary(kappa=kappa, n_aux=n_aux))
    return ModelParams(gamma=gamma, n_T=n_T, auxiliaries=tuple(auxiliaries))


@dataclass(frozen=True)
class ControlPulse:
    """Piecewise-constant coupling g(t), one channel per auxiliary.

    Each channel is a tuple of (g_value, duration) segments; durations are in
    target periods.  All channels must span the same total time.
    """

    channels: tuple[tuple[tuple[float, float], ...], ...]

    def __post_init__(self):
        channels = tuple(
            tuple((float(g), float(d)) for g, d in ch) for ch in self.channels
        )
        if not channels:
            raise ValidationError("pulse needs at least one channel")
        for ch in channels:
            if len(ch) < 1:
                raise ValidationError("each channel needs at least one segment")
            for g, d in ch:
                if not (np.isfinite(g) and np.isfinite(d)):
                    raise ValidationError("segment values must be finite")
                if d <= 0:
                    raise ValidationError(f"segment duration must be > 0, got {d}")
        totals = [math.fsum(d for _, d in ch) for ch in channels]
        if any(abs(t - totals[0]) > 1e-12 * max(totals[0], 1.0) for t in totals):
            raise ValidationError("channels must share the same total time")
        object.__setattr__(self, "channels", channels)

    @classmethod
    def equal_segments(cls, values, total_time):
        """Single- or multi-channel pulse with equal-duration segments.

        `values` is a 1-D sequence (one channel) or a list of such sequences.
        """
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[None, :]
        n = values.shape[1]
        dt = float(total_time) / n
        return cls(
            channels=tuple(tuple((float(g), dt) for g in row) for row in values)
        )

    @property
    def n_channels(self):
        return len(self.channels)

    @property
    def total_time(self):
        return math.fsum(d for _, d in self.channels[0])

    def value_at(self, t, channel=0):
        """Step-function value at time t (left-closed segments)."""
        edge = 0.0
        segs = self.channels[channel]
        for g, d in segs:
            edge += d
            if t < edge:
                return g
        return segs[-1][0]

    def piecewise(self):
        """Merged segmentation: list of (g_vector, duration) across channels.

        For channels with identical segment boundaries this is a plain zip;
        otherwise boundaries are merged so every interval has constant g on
        every channel.
        """
        total = self.total_time
        edges = {0.0, total}
        for ch in self.channels:
            acc = 0.0
            for _, d in ch[:-1]:
                acc += d
                edges.add(acc)
        sorted_edges = sorted(edges)
        out = []
        for lo, hi in zip(sorted_edges[:-1], sorted_edges[1:]):
            if hi - lo <= 1e-15 * total:
                continue
            mid = 0.5 * (lo + hi)
            g_vec = tuple(self.value_at(mid, c) for c in range(self.n_channels))
            out.append((g_vec, hi - lo))
        return out


def pulse_resample(pulse, n_segments):
    """Refine a pulse to n_segments equal-duration segments per channel.

    Values are sampled from the input step function at the midpoints of the
    new segments, so exact splits duplicate values and the step function is
    preserved wherever new segments do not straddle an old boundary.
    """
    existing = max(len(ch) for ch in pulse.channels)
    if n_segments < existing:
        raise RefinementError(
            f"can only refine: requested {n_segments} < existing {existing}"
        )
    total = pulse.total_time
    dt = total / n_segments
    channels = []
    for c in range(pulse.n_channels):
        vals = [pulse.value_at((k + 0.5) * dt, c) for k in range(n_segments)]
        channels.append(tuple((v, dt) for v in vals))
    return ControlPulse(channels=tuple(channels))


@dataclass(frozen=True)
class CoolingMetrics:
    """Cooling figures of merit derived from the achieved occupation."""

    n_cool: float
    f_cool: float
    gamma_eff: float


def metrics_from_occupation(n_cool, params):
    """Cooling factor n_T/n_cool and effective extraction rate gamma*n_T/n_cool."""
    if n_cool <= 0:
        raise ValidationError(f"n_cool must be > 0, got {n_cool}")
    if params.n_T <= 0:
        raise ValidationError("n_T must be > 0 to define a cooling factor")
    f_cool = params.n_T / n_cool
    return CoolingMetrics(
        n_cool=float(n_cool),
        f_cool=f_cool,
        gamma_eff=params.gamma * f_cool,
    )
