"""Reward components for command-following locomotion and their weighted
aggregate.

Three families: gait rewards (clock-based force/velocity terms blended
against airtime terms by the reward curriculum factor c_r), command
following (planar velocity, yaw rate, orthogonal drift), and smoothness
(foot/pelvis orientation, pelvis motion, torque, action rate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gait import GaitClocks
from .state import ActionVector, RobotState, VelocityCommand
from .terrain import CurriculumState

# Aggregate weights; the clock and airtime groups are gated by c_r.
W_FRC = 0.25
W_VEL = 0.25
CLOCK_CONSTANT = 0.2
W_ONE = 0.1
W_V_XY = 0.2
W_OMEGA_Z = 0.2
W_LOV = 0.05
W_FO = 0.05
W_PM = 0.05
W_PO = 0.05
W_T = 0.025
W_A = 0.025

AIRTIME_THRESHOLD = 0.5  # seconds of swing that score zero

COMPONENT_NAMES = (
    "r_frc", "r_vel", "r_air", "r_one", "r_v_xy", "r_omega_z",
    "r_lov", "r_fo", "r_pm", "r_po", "r_t", "r_a",
)


@dataclass(frozen=True)
class RewardBreakdown:
    r_frc: float
    r_vel: float
    r_air: float
    r_one: float
    r_v_xy: float
    r_omega_z: float
    r_lov: float
    r_fo: float
    r_pm: float
    r_po: float
    r_t: float
    r_a: float
    total: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in COMPONENT_NAMES + ("total",)}


def _action_array(a) -> np.ndarray:
    if isinstance(a, ActionVector):
        return a.pd_targets
    return np.asarray(a, dtype=np.float64)


def r_frc(state: RobotState, clocks: GaitClocks) -> float:
    """Foot force clock term: force is rewarded while the clock is positive
    (stance) and penalized while it is negative (swing)."""
    return math.tanh(math.pi * state.foot_force_norm_left * clocks.k_frc_left) + math.tanh(
        math.pi * state.foot_force_norm_right * clocks.k_frc_right
    )


def r_vel(state: RobotState, clocks: GaitClocks) -> float:
    """Foot velocity clock term: motion is penalized during stance."""
    return math.tanh(math.pi * state.foot_velocity_norm_left * clocks.k_vel_left) + math.tanh(
        math.pi * state.foot_velocity_norm_right * clocks.k_vel_right
    )


def r_air(state: RobotState) -> float:
    """Airtime credited at touchdown, short hops scoring negative."""
    return float(np.sum((state.t_air - AIRTIME_THRESHOLD) * state.first_contact))


def r_one(state: RobotState) -> float:
    return 1.0 if state.single_contact else 0.0


def r_v_xy(state: RobotState, cmd: VelocityCommand) -> float:
    """Planar velocity tracking with a saturation branch past the command."""
    if np.linalg.norm(cmd.v_cmd) == 0.0:
        return math.exp(-2.5 * float(np.dot(state.v_xy, state.v_xy)))
    dot = float(np.dot(cmd.v_cmd, state.v_xy))
    if dot >= 1.0:
        return 1.0
    return math.exp(-2.0 * (dot - 1.0) ** 2)


def r_omega_z(state: RobotState, cmd: VelocityCommand) -> float:
    """Yaw rate tracking, same branch structure as the planar term."""
    omega_z = float(state.omega[2])
    if cmd.omega_cmd == 0.0:
        return math.exp(-5.0 * omega_z**2)
    prod = cmd.omega_cmd * omega_z
    if prod >= 1.0:
        return 1.0
    return math.exp(-2.0 * (prod - 1.0) ** 2)


def r_lov(state: RobotState, cmd: VelocityCommand) -> float:
    """Penalty on the planar velocity component orthogonal to the command
    direction; with a zero command the whole planar velocity counts."""
    norm = float(np.linalg.norm(cmd.v_cmd))
    if norm == 0.0:
        v_perp = state.v_xy
    else:
        direction = cmd.v_cmd / norm
        v_perp = state.v_xy - float(np.dot(direction, state.v_xy)) * direction
    return math.exp(-5.0 * float(np.linalg.norm(v_perp)))


def r_fo(state: RobotState, c_t: float) -> float:
    """Flat-foot term, faded to a constant as the terrain curriculum ramps.

    Tilt is measured as |z . psi| per foot so the value stays in (0, 1] for
    axes tilted either way.
    """
    tilt = abs(float(state.foot_axis_left[2])) + abs(float(state.foot_axis_right[2]))
    return math.exp(-1.5 * tilt) * (1.0 - c_t) + c_t


def r_pm(state: RobotState) -> float:
    return math.exp(-(state.v_z**2 + float(state.omega[1]) ** 2 + float(state.omega[0]) ** 2))


def r_po(state: RobotState) -> float:
    return math.exp(-3.0 * (abs(state.pelvis_roll) + abs(state.pelvis_pitch)))


def r_t(state: RobotState) -> float:
    return math.exp(-0.02 * float(np.mean(np.abs(state.torques))))


def r_a(a_t, a_prev) -> float:
    cur = _action_array(a_t)
    prev = _action_array(a_prev)
    if cur.shape != prev.shape:
        raise ValueError(f"action shapes differ: {cur.shape} vs {prev.shape}")
    return math.exp(-5.0 * float(np.mean(np.abs(cur - prev))))


def total_reward(state: RobotState, cmd: VelocityCommand, clocks: GaitClocks,
                 a_t, a_prev, curriculum: CurriculumState) -> RewardBreakdown:
    """Evaluate every component and the weighted aggregate.

    The clock group (plus its 0.2 constant) is active when c_r = 1; the
    airtime group replaces it when c_r = 0.
    """
    components = {
        "r_frc": r_frc(state, clocks),
        "r_vel": r_vel(state, clocks),
        "r_air": r_air(state),
        "r_one": r_one(state),
        "r_v_xy": r_v_xy(state, cmd),
        "r_omega_z": r_omega_z(state, cmd),
        "r_lov": r_lov(state, cmd),
        "r_fo": r_fo(state, curriculum.c_t),
        "r_pm": r_pm(state),
        "r_po": r_po(state),
        "r_t": r_t(state),
        "r_a": r_a(a_t, a_prev),
    }
    for name, value in components.items():
        if not math.isfinite(value):
            raise ValueError(f"reward component {name} is non-finite ({value})")
    c_r = curriculum.c_r
    total = (
        (W_FRC * components["r_frc"] + W_VEL * components["r_vel"] + CLOCK_CONSTANT) * c_r
        + (components["r_air"] + W_ONE * components["r_one"]) * (1.0 - c_r)
        + W_V_XY * components["r_v_xy"]
        + W_OMEGA_Z * components["r_omega_z"]
        + W_LOV * components["r_lov"]
        + W_FO * components["r_fo"]
        + W_PM * components["r_pm"]
        + W_PO * components["r_po"]
        + W_T * components["r_t"]
        + W_A * components["r_a"]
    )
    return RewardBreakdown(total=total, **components)
