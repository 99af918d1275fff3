"""Gravity-load torques and payload capacity against the drive torque budget.

Gravity acts along -z of the base frame with configurable magnitude
(``mass_model.gravity``). Required torque at a joint is the magnitude of the
gravity moment about that joint's axis from every mass distal to it; the
holding budget is ``holding_torque x total reduction`` per joint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import drivetrain
from .errors import NoConvergenceError
from .kinematics import fk_frames
from .model import ArmDescription, limits_array

#: Default worst-case sweep: 15-degree grid on the gravity-loaded joints
#: (shoulder pitch, elbow pitch, wrist pitch); yaw/roll joints stay at zero.
SWEEP_JOINTS = (2, 3, 5)
SWEEP_GRID_DEG = 15.0

BISECTION_TOL_KG = 1e-4


@dataclass(frozen=True)
class StaticLoadReport:
    """Required vs. available torque per joint at one pose."""

    required: np.ndarray     # (6,) N.m, magnitudes
    available: np.ndarray    # (6,) N.m
    utilization: np.ndarray  # (6,) required/available
    limiting_joint: int      # 1-based index of the max-utilization joint


@dataclass(frozen=True)
class PayloadResult:
    """Outcome of a max-payload search."""

    mass: float              # kg
    limiting_joint: int      # 1-based
    utilization: float       # limiting joint's utilization at ``mass``
    pose: np.ndarray         # binding pose (radians)
    policy: str              # "worst_case_sweep" or "fixed"


def _mass_entries(arm: ArmDescription):
    """(frame, mass, offset) for every structural and motor mass."""
    entries = [(p.frame, p.mass, p.offset) for p in arm.mass_model.links]
    for pl in arm.mass_model.motors:
        entries.append((pl.frame, arm.drive(pl.drive).motor.mass, pl.offset))
    return entries


def _com_points(arm: ArmDescription, frames: np.ndarray):
    """Center-of-mass point per mass entry at the given pose."""
    pts = []
    for frame, mass, offset in _mass_entries(arm):
        if frame == 0:
            com = frames[0][:3, 3] + offset * frames[0][:3, 2]
        else:
            o_prev = frames[frame - 1][:3, 3]
            o_i = frames[frame][:3, 3]
            span = o_i - o_prev
            length = float(np.linalg.norm(span))
            u = span / length if length > 1e-12 else frames[frame][:3, 2]
            com = o_prev + offset * u
        pts.append((frame, mass, com))
    return pts


def gravity_torques(arm: ArmDescription, q, payload: Optional[float] = None
                    ) -> np.ndarray:
    """Signed gravity moment about each joint axis (N.m).

    Args:
        arm: arm description.
        q: joint angles (radians).
        payload: point mass (kg) at the tool frame origin; defaults to the
            mass model's configured payload.

    Returns:
        (6,) array; entry ``j-1`` is the moment about joint ``j``'s axis from
        all masses distal to joint ``j`` (links, motors, payload).
    """
    if payload is None:
        payload = arm.mass_model.payload
    frames = fk_frames(arm, q)
    g = arm.mass_model.gravity
    entries = _com_points(arm, frames)
    if payload > 0:
        entries.append((6, float(payload), frames[6][:3, 3]))

    tau = np.zeros(6)
    for j in range(1, 7):
        axis = frames[j - 1][:3, 2]
        origin = frames[j - 1][:3, 3]
        total = 0.0
        for frame, mass, com in entries:
            if frame < j or mass == 0.0:
                continue
            r = com - origin
            # moment of force (0, 0, -m g) about the axis through ``origin``
            total += mass * (axis[0] * (-r[1]) + axis[1] * r[0]) * (-g)
        tau[j - 1] = total
    return tau


def available_torques(arm: ArmDescription) -> np.ndarray:
    """Holding torque budget per joint (N.m) at zero step rate."""
    return np.array([drivetrain.available_joint_torque(arm.drive(j), 0.0)
                     for j in range(1, 7)])


def static_report(arm: ArmDescription, q, payload: Optional[float] = None
                  ) -> StaticLoadReport:
    """Required vs. available torques and utilizations at one pose."""
    required = np.abs(gravity_torques(arm, q, payload))
    available = available_torques(arm)
    with np.errstate(divide="ignore", invalid="ignore"):
        util = np.where(available > 0.0,
                        required / np.where(available > 0.0, available, 1.0),
                        np.where(required > 0.0, np.inf, 0.0))
    limiting = int(np.argmax(util)) + 1
    return StaticLoadReport(required=required, available=available,
                            utilization=util, limiting_joint=limiting)


# --------------------------------------------------------------------------
# payload capacity
# --------------------------------------------------------------------------

def sweep_poses(arm: ArmDescription,
                grid_deg: float = SWEEP_GRID_DEG,
                sweep_joints: Sequence[int] = SWEEP_JOINTS) -> np.ndarray:
    """In-limits pose lattice for the worst-case search.

    Swept joints get an inclusive ``grid_deg`` grid over their limits; the
    remaining joints are held at 0 (they do not change the gravity moment
    about their own axes in this mounting, and zero keeps the lattice small).
    """
    lim = limits_array(arm)
    axes = []
    for j in range(1, 7):
        if j in sweep_joints:
            lo, hi = lim[j - 1]
            n = max(2, int(round(math.degrees(hi - lo) / grid_deg)) + 1)
            axes.append(np.linspace(lo, hi, n))
        else:
            axes.append(np.array([0.0]))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _constraint_columns(constraint_joints: Sequence[int]) -> list:
    cols = sorted({int(j) for j in constraint_joints})
    if not cols or cols[0] < 1 or cols[-1] > 6:
        raise ValueError("constraint_joints must be a non-empty subset of 1-6")
    return [j - 1 for j in cols]


def _torque_split(arm: ArmDescription, poses: np.ndarray):
    """Signed structural torque and payload coefficient per pose/joint.

    gravity_torques is linear in the payload at fixed q, so each pose yields
    ``tau(m) = tau_struct + m * coeff`` exactly.
    """
    n = poses.shape[0]
    tau_s = np.empty((n, 6))
    coeff = np.empty((n, 6))
    for i in range(n):
        t0 = gravity_torques(arm, poses[i], payload=0.0)
        t1 = gravity_torques(arm, poses[i], payload=1.0)
        tau_s[i] = t0
        coeff[i] = t1 - t0
    return tau_s, coeff


def max_payload(arm: ArmDescription,
                pose_policy: Union[str, Sequence[float]] = "worst_case_sweep",
                grid_deg: float = SWEEP_GRID_DEG,
                sweep_joints: Sequence[int] = SWEEP_JOINTS,
                constraint_joints: Sequence[int] = (1, 2, 3, 4, 5, 6),
                tol_kg: float = BISECTION_TOL_KG) -> PayloadResult:
    """Largest payload (kg) holdable at every joint under the pose policy.

    Args:
        arm: arm description.
        pose_policy: ``"worst_case_sweep"`` (default) checks every pose of
            the :func:`sweep_poses` lattice; a six-vector of joint angles
            checks that fixed pose only.
        grid_deg / sweep_joints: sweep lattice controls (worst-case policy).
        constraint_joints: joints whose torque budgets bound the answer
            (default all six). Restricting to (2, 3) answers the
            shoulder/elbow-only question, a useful diagnostic because the
            wrist-pitch budget otherwise dominates.
        tol_kg: bisection bracket width.

    Returns:
        :class:`PayloadResult` with the feasible payload (lower bisection
        bracket, so the limiting utilization is <= 1), the limiting joint,
        its utilization at the returned mass, and the binding pose.

    Raises:
        NoConvergenceError: no finite bracket exists (feasible beyond 1e6 kg),
            reported with the bracketing values.
    """
    if isinstance(pose_policy, str):
        if pose_policy != "worst_case_sweep":
            raise ValueError(f"unknown pose policy {pose_policy!r}")
        poses = sweep_poses(arm, grid_deg=grid_deg, sweep_joints=sweep_joints)
        policy = "worst_case_sweep"
    else:
        poses = np.asarray(pose_policy, dtype=float).reshape(1, 6)
        policy = "fixed"

    cols = _constraint_columns(constraint_joints)
    tau_s, coeff = _torque_split(arm, poses)
    tau_s, coeff = tau_s[:, cols], coeff[:, cols]
    avail = available_torques(arm)[cols]

    def feasible(m: float) -> bool:
        return bool(np.all(np.abs(tau_s + m * coeff) <= avail + 1e-12))

    def binding(m: float):
        """(pose index, joint index, utilization) of the worst joint at m."""
        req = np.abs(tau_s + m * coeff)
        with np.errstate(divide="ignore", invalid="ignore"):
            util = np.where(avail > 0.0, req / np.where(avail > 0.0, avail, 1.0),
                            np.where(req > 0.0, np.inf, 0.0))
        flat = int(np.argmax(util))
        n_cols = len(cols)
        return (flat // n_cols, cols[flat % n_cols] + 1,
                float(util.reshape(-1)[flat]))

    if not feasible(0.0):
        pi, joint, util = binding(0.0)
        return PayloadResult(mass=0.0, limiting_joint=joint, utilization=util,
                             pose=poses[pi], policy=policy)

    lo, hi = 0.0, 1.0
    while feasible(hi):
        lo, hi = hi, hi * 2.0
        if hi > 1e6:
            raise NoConvergenceError(
                "payload bisection found no infeasible upper bracket",
                bracket=(lo, hi))
    while hi - lo > tol_kg:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    pi, joint, util = binding(lo)
    return PayloadResult(mass=lo, limiting_joint=joint, utilization=util,
                         pose=poses[pi], policy=policy)


def sweep_payload_caps(arm: ArmDescription,
                       grid_deg: float = SWEEP_GRID_DEG,
                       sweep_joints: Sequence[int] = SWEEP_JOINTS,
                       constraint_joints: Sequence[int] = (1, 2, 3, 4, 5, 6),
                       tol_kg: float = BISECTION_TOL_KG):
    """Per-pose payload cap over the worst-case lattice (for CSV export).

    Returns:
        (poses, caps, limiting_joints): the lattice (n, 6), each pose's
        feasible payload (kg), and its 1-based limiting joint.
    """
    cols = _constraint_columns(constraint_joints)
    poses = sweep_poses(arm, grid_deg=grid_deg, sweep_joints=sweep_joints)
    tau_s, coeff = _torque_split(arm, poses)
    tau_s, coeff = tau_s[:, cols], coeff[:, cols]
    avail = available_torques(arm)[cols]

    n = poses.shape[0]
    lo = np.zeros(n)
    hi = np.full(n, 1.0)
    feasible0 = np.all(np.abs(tau_s) <= avail + 1e-12, axis=1)
    # grow upper brackets until infeasible everywhere (vectorized doubling)
    for _ in range(64):
        req = np.abs(tau_s + hi[:, None] * coeff)
        still = np.all(req <= avail + 1e-12, axis=1) & feasible0
        if not np.any(still):
            break
        lo[still] = hi[still]
        hi[still] *= 2.0
    for _ in range(int(math.ceil(math.log2(max(hi.max(), 1.0) / tol_kg))) + 2):
        mid = 0.5 * (lo + hi)
        req = np.abs(tau_s + mid[:, None] * coeff)
        ok = np.all(req <= avail + 1e-12, axis=1) & feasible0
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    caps = np.where(feasible0, lo, 0.0)
    req = np.abs(tau_s + caps[:, None] * coeff)
    with np.errstate(divide="ignore", invalid="ignore"):
        util = np.where(avail > 0.0, req / np.where(avail > 0.0, avail, 1.0),
                        np.where(req > 0.0, np.inf, 0.0))
    limiting = np.array(cols)[np.argmax(util, axis=1)] + 1
    return poses, caps, limiting
