"""Gait phase, clock inputs, and the per-foot force/velocity gait clocks.

The clocks schedule a walking gait: the left foot's stance occupies the
phase interval [0, stance_fraction), the right foot's stance is offset by
half a period, and stance_fraction > 0.5 makes the two overlap in a short
double-stance window.  The force clock is +1 while a foot may bear load
(stance) and -1 while loading is penalized (swing); the velocity clock is
its exact negation, penalizing foot motion during stance and allowing it
during swing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_GAIT_PERIOD = 32     # control steps per cycle (0.8 s at 40 Hz)
DEFAULT_STANCE_FRACTION = 0.55
DEFAULT_SMOOTHING = 0.03     # transition half-width in phase units


@dataclass(frozen=True)
class GaitPhase:
    t: int
    T: int
    phi: float

    def __post_init__(self):
        if self.T < 1:
            raise ValueError(f"gait period T must be >= 1, got {self.T}")
        expected = (self.t % self.T) / self.T
        if self.phi != expected:
            raise ValueError(f"phi = {self.phi} does not equal (t mod T)/T = {expected}")

    @classmethod
    def from_step(cls, t: int, T: int = DEFAULT_GAIT_PERIOD) -> "GaitPhase":
        return cls(t=t, T=T, phi=(t % T) / T)


@dataclass(frozen=True)
class GaitClocks:
    k_frc_left: float
    k_frc_right: float
    k_vel_left: float
    k_vel_right: float


def clock_inputs(phase: GaitPhase) -> np.ndarray:
    """The two periodic network inputs (sin(2*pi*phi), sin(2*pi*(phi+0.5)))."""
    s = math.sin(2.0 * math.pi * phase.phi)
    s_off = math.sin(2.0 * math.pi * (phase.phi + 0.5))
    return np.array([s, s_off])


def force_clock(phi, stance_fraction: float = DEFAULT_STANCE_FRACTION,
                smoothing: float = DEFAULT_SMOOTHING):
    """Left-foot force clock at phase `phi` (scalar or array).

    Exactly +1 over the stance interior, exactly -1 over the swing
    interior, with C1 sine ramps of half-width `smoothing` centered on the
    two stance boundaries.  Exact saturation keeps the worked reward values
    (tanh(pi * F * k) at k = +-1) reproducible to tight tolerances.
    """
    s = stance_fraction
    w = smoothing
    if not 0.5 < s < 1.0:
        raise ValueError(f"stance_fraction = {s} must lie in (0.5, 1) so stances overlap")
    if w <= 0.0:
        raise ValueError(f"smoothing = {w} must be > 0")
    if w > min(s, 1.0 - s) / 2.0:
        raise ValueError(f"smoothing = {w} too wide for stance_fraction = {s}")

    p = np.asarray(phi, dtype=np.float64) % 1.0
    d0 = (p + 0.5) % 1.0 - 0.5  # signed distance to the swing->stance boundary at 0
    ds = p - s                  # signed distance to the stance->swing boundary at s

    k = np.where((p >= 0.0) & (p < s), 1.0, -1.0)
    in0 = np.abs(d0) < w
    ins = np.abs(ds) < w
    k = np.where(in0, np.sin(0.5 * np.pi * d0 / w), k)
    k = np.where(ins, -np.sin(0.5 * np.pi * ds / w), k)
    if np.isscalar(phi):
        return float(k)
    return k


def gait_clocks(phase: GaitPhase, stance_fraction: float = DEFAULT_STANCE_FRACTION,
                smoothing: float = DEFAULT_SMOOTHING) -> GaitClocks:
    """Evaluate all four gait clocks at the given phase.

    The right foot runs the left foot's schedule shifted by half a period;
    the velocity clocks are the exact negation of the force clocks.
    """
    k_frc_l = force_clock(phase.phi, stance_fraction, smoothing)
    k_frc_r = force_clock((phase.phi + 0.5) % 1.0, stance_fraction, smoothing)
    return GaitClocks(
        k_frc_left=k_frc_l,
        k_frc_right=k_frc_r,
        k_vel_left=-k_frc_l,
        k_vel_right=-k_frc_r,
    )


def in_stance(phi, foot: str, stance_fraction: float = DEFAULT_STANCE_FRACTION):
    """Boolean stance schedule (ignores transition smoothing)."""
    p = np.asarray(phi, dtype=np.float64) % 1.0
    if foot == "right":
        p = (p + 0.5) % 1.0
    elif foot != "left":
        raise ValueError(f"foot must be 'left' or 'right', got {foot!r}")
    result = p < stance_fraction
    if np.isscalar(phi):
        return bool(result)
    return result


def clock_curve(T: int = DEFAULT_GAIT_PERIOD, n: int = 200,
                stance_fraction: float = DEFAULT_STANCE_FRACTION,
                smoothing: float = DEFAULT_SMOOTHING):
    """Sample all four clocks over one period; returns (phi, 4-column array)."""
    phi = np.arange(n) / n
    k_l = force_clock(phi, stance_fraction, smoothing)
    k_r = force_clock((phi + 0.5) % 1.0, stance_fraction, smoothing)
    return phi, np.column_stack([k_l, k_r, -k_l, -k_r])
