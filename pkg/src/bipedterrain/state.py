"""Observation, action, and robot-state containers shared by the whole toolkit.

All types are immutable value objects built on float64 numpy arrays.  They
validate on construction, serialize to plain dicts for line-delimited JSON
trace files, and flatten into fixed-layout vectors for network input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

N_MOTORS = 10
N_JOINTS = 4
PROPRIO_DIM = 44
ACTION_DIM = 10

QUAT_NORM_TOL = 1e-9

# Fixed slot layout of the flattened proprioceptive vector.  The declared
# blocks sum to 40; the remaining 4 slots are a zero-padded reserved block so
# the vector is 44 wide (see README for the rationale).
PROPRIO_LAYOUT = {
    "motor_positions": slice(0, 10),
    "motor_velocities": slice(10, 20),
    "joint_positions": slice(20, 24),
    "joint_velocities": slice(24, 28),
    "pelvis_orientation": slice(28, 32),
    "pelvis_angular_velocity": slice(32, 35),
    "command": slice(35, 38),
    "clock": slice(38, 40),
    "reserved": slice(40, 44),
}


def _vec(name: str, value, n: int) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.shape != (n,):
        raise ValueError(f"{name} must have shape ({n},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    arr.flags.writeable = False
    return arr


def _scalar(name: str, value) -> float:
    x = float(value)
    if not np.isfinite(x):
        raise ValueError(f"{name} is non-finite")
    return x


@dataclass(frozen=True, eq=False)
class VelocityCommand:
    """Planar velocity command: (v_x, v_y) in m/s plus yaw rate in rad/s."""

    v_cmd: np.ndarray
    omega_cmd: float

    def __post_init__(self):
        object.__setattr__(self, "v_cmd", _vec("v_cmd", self.v_cmd, 2))
        object.__setattr__(self, "omega_cmd", _scalar("omega_cmd", self.omega_cmd))

    @classmethod
    def zero(cls) -> "VelocityCommand":
        return cls(np.zeros(2), 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.v_cmd[0], self.v_cmd[1], self.omega_cmd])

    def __eq__(self, other):
        if not isinstance(other, VelocityCommand):
            return NotImplemented
        return np.array_equal(self.as_array(), other.as_array())

    def to_record(self) -> dict:
        return {"v_cmd": self.v_cmd.tolist(), "omega_cmd": self.omega_cmd}

    @classmethod
    def from_record(cls, rec: dict) -> "VelocityCommand":
        return cls(np.asarray(rec["v_cmd"]), rec["omega_cmd"])


@dataclass(frozen=True, eq=False)
class ActionVector:
    """PD position targets for the 10 actuated motors."""

    pd_targets: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pd_targets", _vec("pd_targets", self.pd_targets, ACTION_DIM))

    @classmethod
    def zero(cls) -> "ActionVector":
        return cls(np.zeros(ACTION_DIM))

    def __eq__(self, other):
        if not isinstance(other, ActionVector):
            return NotImplemented
        return np.array_equal(self.pd_targets, other.pd_targets)

    def to_record(self) -> dict:
        return {"pd_targets": self.pd_targets.tolist()}

    @classmethod
    def from_record(cls, rec: dict) -> "ActionVector":
        return cls(np.asarray(rec["pd_targets"]))


@dataclass(frozen=True, eq=False)
class ProprioObservation:
    """Proprioceptive input: motor/joint kinematics, pelvis pose rates,
    the active command, and the two gait clock inputs."""

    motor_positions: np.ndarray
    motor_velocities: np.ndarray
    joint_positions: np.ndarray
    joint_velocities: np.ndarray
    pelvis_orientation: np.ndarray  # unit quaternion (w, x, y, z)
    pelvis_angular_velocity: np.ndarray
    command: VelocityCommand
    clock: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "motor_positions", _vec("motor_positions", self.motor_positions, N_MOTORS))
        object.__setattr__(self, "motor_velocities", _vec("motor_velocities", self.motor_velocities, N_MOTORS))
        object.__setattr__(self, "joint_positions", _vec("joint_positions", self.joint_positions, N_JOINTS))
        object.__setattr__(self, "joint_velocities", _vec("joint_velocities", self.joint_velocities, N_JOINTS))
        quat = _vec("pelvis_orientation", self.pelvis_orientation, 4)
        if abs(np.linalg.norm(quat) - 1.0) > QUAT_NORM_TOL:
            raise ValueError(f"pelvis_orientation norm {np.linalg.norm(quat):.12f} is not 1")
        object.__setattr__(self, "pelvis_orientation", quat)
        object.__setattr__(
            self, "pelvis_angular_velocity", _vec("pelvis_angular_velocity", self.pelvis_angular_velocity, 3)
        )
        if not isinstance(self.command, VelocityCommand):
            raise ValueError("command must be a VelocityCommand")
        clock = _vec("clock", self.clock, 2)
        if np.any(np.abs(clock) > 1.0 + 1e-12):
            raise ValueError(f"clock entries {clock} outside [-1, 1]")
        object.__setattr__(self, "clock", clock)

    @classmethod
    def zero(cls) -> "ProprioObservation":
        """All-zero observation with identity pelvis orientation."""
        return cls(
            motor_positions=np.zeros(N_MOTORS),
            motor_velocities=np.zeros(N_MOTORS),
            joint_positions=np.zeros(N_JOINTS),
            joint_velocities=np.zeros(N_JOINTS),
            pelvis_orientation=np.array([1.0, 0.0, 0.0, 0.0]),
            pelvis_angular_velocity=np.zeros(3),
            command=VelocityCommand.zero(),
            clock=np.zeros(2),
        )

    def __eq__(self, other):
        if not isinstance(other, ProprioObservation):
            return NotImplemented
        return np.array_equal(flatten_proprio(self), flatten_proprio(other))

    def to_record(self) -> dict:
        return {
            "motor_positions": self.motor_positions.tolist(),
            "motor_velocities": self.motor_velocities.tolist(),
            "joint_positions": self.joint_positions.tolist(),
            "joint_velocities": self.joint_velocities.tolist(),
            "pelvis_orientation": self.pelvis_orientation.tolist(),
            "pelvis_angular_velocity": self.pelvis_angular_velocity.tolist(),
            "command": self.command.to_record(),
            "clock": self.clock.tolist(),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ProprioObservation":
        return cls(
            motor_positions=np.asarray(rec["motor_positions"]),
            motor_velocities=np.asarray(rec["motor_velocities"]),
            joint_positions=np.asarray(rec["joint_positions"]),
            joint_velocities=np.asarray(rec["joint_velocities"]),
            pelvis_orientation=np.asarray(rec["pelvis_orientation"]),
            pelvis_angular_velocity=np.asarray(rec["pelvis_angular_velocity"]),
            command=VelocityCommand.from_record(rec["command"]),
            clock=np.asarray(rec["clock"]),
        )


def flatten_proprio(obs: ProprioObservation) -> np.ndarray:
    """Flatten an observation into the fixed 44-slot layout."""
    vec = np.zeros(PROPRIO_DIM)
    vec[PROPRIO_LAYOUT["motor_positions"]] = obs.motor_positions
    vec[PROPRIO_LAYOUT["motor_velocities"]] = obs.motor_velocities
    vec[PROPRIO_LAYOUT["joint_positions"]] = obs.joint_positions
    vec[PROPRIO_LAYOUT["joint_velocities"]] = obs.joint_velocities
    vec[PROPRIO_LAYOUT["pelvis_orientation"]] = obs.pelvis_orientation
    vec[PROPRIO_LAYOUT["pelvis_angular_velocity"]] = obs.pelvis_angular_velocity
    vec[PROPRIO_LAYOUT["command"]] = obs.command.as_array()
    vec[PROPRIO_LAYOUT["clock"]] = obs.clock
    return vec


def unflatten_proprio(vec: np.ndarray) -> ProprioObservation:
    """Inverse of :func:`flatten_proprio`.  Rejects vectors whose reserved
    block is nonzero so the mapping stays one-to-one."""
    arr = np.asarray(vec, dtype=np.float64)
    if arr.shape != (PROPRIO_DIM,):
        raise ValueError(f"expected shape ({PROPRIO_DIM},), got {arr.shape}")
    if np.any(arr[PROPRIO_LAYOUT["reserved"]] != 0.0):
        raise ValueError("reserved block must be zero")
    cmd = arr[PROPRIO_LAYOUT["command"]]
    return ProprioObservation(
        motor_positions=arr[PROPRIO_LAYOUT["motor_positions"]],
        motor_velocities=arr[PROPRIO_LAYOUT["motor_velocities"]],
        joint_positions=arr[PROPRIO_LAYOUT["joint_positions"]],
        joint_velocities=arr[PROPRIO_LAYOUT["joint_velocities"]],
        pelvis_orientation=arr[PROPRIO_LAYOUT["pelvis_orientation"]],
        pelvis_angular_velocity=arr[PROPRIO_LAYOUT["pelvis_angular_velocity"]],
        command=VelocityCommand(cmd[:2], cmd[2]),
        clock=arr[PROPRIO_LAYOUT["clock"]],
    )


def _unit3(name: str, value) -> np.ndarray:
    arr = _vec(name, value, 3)
    if abs(np.linalg.norm(arr) - 1.0) > QUAT_NORM_TOL:
        raise ValueError(f"{name} norm {np.linalg.norm(arr):.12f} is not 1")
    return arr


def _norm01(name: str, value) -> float:
    x = _scalar(name, value)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} = {x} outside [0, 1]")
    return x


@dataclass(frozen=True, eq=False)
class RobotState:
    """Per-timestep physical quantities consumed by the reward components.

    This is an input contract for reward evaluation, not a simulation
    output: forces and velocities arrive already normalized to [0, 1].
    """

    foot_force_norm_left: float
    foot_force_norm_right: float
    foot_velocity_norm_left: float
    foot_velocity_norm_right: float
    v_xy: np.ndarray            # planar pelvis velocity, body heading frame
    v_z: float
    omega: np.ndarray           # pelvis angular velocity (x, y, z)
    pelvis_roll: float
    pelvis_pitch: float
    foot_axis_left: np.ndarray  # unit vector along the foot length
    foot_axis_right: np.ndarray
    t_air: np.ndarray           # running swing airtime per foot, seconds
    first_contact: np.ndarray   # bool per foot: swing ended by contact now
    single_contact: bool
    torques: np.ndarray
    foot_position_left: np.ndarray  # world xy
    foot_position_right: np.ndarray
    pelvis_yaw: float

    def __post_init__(self):
        object.__setattr__(self, "foot_force_norm_left", _norm01("foot_force_norm_left", self.foot_force_norm_left))
        object.__setattr__(self, "foot_force_norm_right", _norm01("foot_force_norm_right", self.foot_force_norm_right))
        object.__setattr__(
            self, "foot_velocity_norm_left", _norm01("foot_velocity_norm_left", self.foot_velocity_norm_left)
        )
        object.__setattr__(
            self, "foot_velocity_norm_right", _norm01("foot_velocity_norm_right", self.foot_velocity_norm_right)
        )
        object.__setattr__(self, "v_xy", _vec("v_xy", self.v_xy, 2))
        object.__setattr__(self, "v_z", _scalar("v_z", self.v_z))
        object.__setattr__(self, "omega", _vec("omega", self.omega, 3))
        object.__setattr__(self, "pelvis_roll", _scalar("pelvis_roll", self.pelvis_roll))
        object.__setattr__(self, "pelvis_pitch", _scalar("pelvis_pitch", self.pelvis_pitch))
        object.__setattr__(self, "foot_axis_left", _unit3("foot_axis_left", self.foot_axis_left))
        object.__setattr__(self, "foot_axis_right", _unit3("foot_axis_right", self.foot_axis_right))
        t_air = _vec("t_air", self.t_air, 2)
        if np.any(t_air < 0.0):
            raise ValueError(f"t_air entries {t_air} must be >= 0")
        object.__setattr__(self, "t_air", t_air)
        fc = np.asarray(self.first_contact, dtype=bool)
        if fc.shape != (2,):
            raise ValueError(f"first_contact must have shape (2,), got {fc.shape}")
        fc.flags.writeable = False
        object.__setattr__(self, "first_contact", fc)
        object.__setattr__(self, "single_contact", bool(self.single_contact))
        object.__setattr__(self, "torques", _vec("torques", self.torques, N_MOTORS))
        object.__setattr__(self, "foot_position_left", _vec("foot_position_left", self.foot_position_left, 2))
        object.__setattr__(self, "foot_position_right", _vec("foot_position_right", self.foot_position_right, 2))
        object.__setattr__(self, "pelvis_yaw", _scalar("pelvis_yaw", self.pelvis_yaw))

    @classmethod
    def rest(cls) -> "RobotState":
        """Robot standing still on both feet with level pelvis and zero loads."""
        return cls(
            foot_force_norm_left=0.0,
            foot_force_norm_right=0.0,
            foot_velocity_norm_left=0.0,
            foot_velocity_norm_right=0.0,
            v_xy=np.zeros(2),
            v_z=0.0,
            omega=np.zeros(3),
            pelvis_roll=0.0,
            pelvis_pitch=0.0,
            foot_axis_left=np.array([1.0, 0.0, 0.0]),
            foot_axis_right=np.array([1.0, 0.0, 0.0]),
            t_air=np.zeros(2),
            first_contact=np.array([False, False]),
            single_contact=False,
            torques=np.zeros(N_MOTORS),
            foot_position_left=np.array([0.0, 0.1]),
            foot_position_right=np.array([0.0, -0.1]),
            pelvis_yaw=0.0,
        )

    def replace(self, **changes) -> "RobotState":
        from dataclasses import replace as _replace

        return _replace(self, **changes)

    def to_record(self) -> dict:
        return {
            "foot_force_norm_left": self.foot_force_norm_left,
            "foot_force_norm_right": self.foot_force_norm_right,
            "foot_velocity_norm_left": self.foot_velocity_norm_left,
            "foot_velocity_norm_right": self.foot_velocity_norm_right,
            "v_xy": self.v_xy.tolist(),
            "v_z": self.v_z,
            "omega": self.omega.tolist(),
            "pelvis_roll": self.pelvis_roll,
            "pelvis_pitch": self.pelvis_pitch,
            "foot_axis_left": self.foot_axis_left.tolist(),
            "foot_axis_right": self.foot_axis_right.tolist(),
            "t_air": self.t_air.tolist(),
            "first_contact": self.first_contact.tolist(),
            "single_contact": self.single_contact,
            "torques": self.torques.tolist(),
            "foot_position_left": self.foot_position_left.tolist(),
            "foot_position_right": self.foot_position_right.tolist(),
            "pelvis_yaw": self.pelvis_yaw,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "RobotState":
        return cls(
            foot_force_norm_left=rec["foot_force_norm_left"],
            foot_force_norm_right=rec["foot_force_norm_right"],
            foot_velocity_norm_left=rec["foot_velocity_norm_left"],
            foot_velocity_norm_right=rec["foot_velocity_norm_right"],
            v_xy=np.asarray(rec["v_xy"]),
            v_z=rec["v_z"],
            omega=np.asarray(rec["omega"]),
            pelvis_roll=rec["pelvis_roll"],
            pelvis_pitch=rec["pelvis_pitch"],
            foot_axis_left=np.asarray(rec["foot_axis_left"]),
            foot_axis_right=np.asarray(rec["foot_axis_right"]),
            t_air=np.asarray(rec["t_air"]),
            first_contact=np.asarray(rec["first_contact"]),
            single_contact=rec["single_contact"],
            torques=np.asarray(rec["torques"]),
            foot_position_left=np.asarray(rec["foot_position_left"]),
            foot_position_right=np.asarray(rec["foot_position_right"]),
            pelvis_yaw=rec["pelvis_yaw"],
        )


def write_jsonl(path, records) -> None:
    """Write an iterable of dicts as one JSON object per line."""
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True))
            fh.write("\n")


def read_jsonl(path) -> list:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]
