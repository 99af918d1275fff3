"""Reduction-stage calculus and joint torque/resolution bookkeeping.

All functions are pure and operate on the immutable model types. The capstan
relations::

    h = t * gamma + delta        (stacked cable height on the sheave)
    s = 1.5 * t                  (groove spacing)
    gamma_rotating   = D / D0    (output pulley turns with the joint)
    gamma_stationary = D / D0 + 1  (sheave orbits a fixed pulley)

use ``D0`` for the small driven sheave and ``D`` for the large pulley,
regardless of how a particular datasheet labels its symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ComputationError
from .model import ArmDescription, CapstanGeometry, JointDrive, MotorSpec


@dataclass(frozen=True)
class TorqueTableRow:
    """One joint's torque bookkeeping line.

    ``annotation`` is non-None when the config's ``listed_max_torque``
    disagrees with ``holding_torque x total_reduction``; it carries both
    numbers so downstream tooling can see the conflict machine-readably.
    """

    joint_index: int
    motor: str
    holding_torque: float
    mechanism: str
    total_reduction: float
    max_joint_torque: float
    listed_max_torque: Optional[float] = None
    annotation: Optional[str] = None


def capstan_reduction(geom: CapstanGeometry) -> float:
    """Reduction ratio of a capstan stage.

    Args:
        geom: capstan geometry; ``mode`` selects the regime.

    Returns:
        D/D0 for a rotating output pulley; D/D0 + 1 when the pulley is
        stationary and the sheave orbits it.

    Raises:
        ComputationError: if the diameters are not ``D > D0 > 0`` or the
            mode is unknown.
    """
    d0, d = geom.sheave_diameter, geom.pulley_diameter
    if not (d > d0 > 0) and not (d == d0 > 0):
        raise ComputationError(
            f"invalid capstan geometry: need pulley {d} >= sheave {d0} > 0")
    if geom.mode == "rotating":
        return d / d0
    if geom.mode == "stationary":
        return d / d0 + 1.0
    raise ComputationError(f"unknown capstan mode {geom.mode!r}")


def sheave_height(geom: CapstanGeometry, gamma: float) -> float:
    """Stacked cable height on the sheave: ``t * gamma + delta`` (m)."""
    if gamma <= 0:
        raise ComputationError(f"gamma must be > 0, got {gamma}")
    return geom.cable_thickness * gamma + geom.tolerance


def sheave_spacing(t: float) -> float:
    """Groove spacing for cable thickness ``t``: 1.5 t (m)."""
    if t < 0:
        raise ComputationError(f"cable thickness must be >= 0, got {t}")
    return 1.5 * t


def windings_required(gamma: float, output_range_deg: float) -> float:
    """Cable windings needed on the sheave to cover an output range.

    Returned as a real number; round up when budgeting cable length.
    """
    if gamma <= 0 or output_range_deg <= 0:
        raise ComputationError("gamma and output range must both be > 0")
    return gamma * output_range_deg / 360.0


def total_reduction(drive: JointDrive) -> float:
    """Product of stage ratios; 1.0 for an empty stage list (direct drive)."""
    ratio = 1.0
    for s in drive.stages:
        ratio *= s.ratio
    return ratio


def max_joint_torque(drive: JointDrive) -> float:
    """Static output torque budget: holding torque x total reduction (N.m)."""
    return drive.motor.holding_torque * total_reduction(drive)


def joint_resolution(drive: JointDrive) -> float:
    """Output angle per microstep (degrees)."""
    steps = drive.motor.steps_per_rev * drive.microstep_factor
    if steps < 1:
        raise ComputationError("steps_per_rev x microstep_factor must be >= 1")
    return 360.0 / (steps * total_reduction(drive))


def motor_torque_at(motor: MotorSpec, rate: float) -> float:
    """Available motor torque at a step rate via the piecewise-linear curve.

    Rates beyond the last knot hold the last value; negative rates clamp to 0.
    """
    curve = motor.torque_speed_curve
    rates = [p[0] for p in curve]
    torqs = [p[1] for p in curve]
    return float(np.interp(max(rate, 0.0), rates, torqs))


def available_joint_torque(drive: JointDrive, rate: float = 0.0) -> float:
    """Joint-side torque available at a commanded motor step rate (N.m)."""
    return motor_torque_at(drive.motor, rate) * total_reduction(drive)


def _mechanism_label(drive: JointDrive) -> str:
    names = {
        "capstan_rotating": "Capstan",
        "capstan_stationary": "Capstan",
        "belt": "Belt",
        "gear": "Gear",
        "cable": "Cable",
    }
    if not drive.stages:
        return "Direct"
    return " + ".join(names.get(s.kind, s.kind) for s in drive.stages)


def torque_table(arm: ArmDescription) -> list[TorqueTableRow]:
    """Per-joint torque bookkeeping, ordered by joint index.

    Rows whose configured ``listed_max_torque`` conflicts with the computed
    product carry an annotation naming both values; the computed value is the
    one reported in ``max_joint_torque``.
    """
    rows = []
    for j in range(1, 7):
        drive = arm.drive(j)
        computed = max_joint_torque(drive)
        listed = drive.listed_max_torque
        annotation = None
        if listed is not None and abs(listed - computed) > 5e-5:
            annotation = (
                f"listed value {listed} N.m conflicts with holding x reduction = "
                f"{computed:.5f} N.m (listed figure matches a "
                f"{listed / drive.motor.holding_torque:.2f}:1 chain)"
            )
        rows.append(TorqueTableRow(
            joint_index=j,
            motor=drive.motor.name,
            holding_torque=drive.motor.holding_torque,
            mechanism=_mechanism_label(drive),
            total_reduction=total_reduction(drive),
            max_joint_torque=computed,
            listed_max_torque=listed,
            annotation=annotation,
        ))
    return rows


def resolution_table(arm: ArmDescription) -> list[tuple[int, float, float]]:
    """(joint, total reduction, degrees per microstep) per joint."""
    out = []
    for j in range(1, 7):
        d = arm.drive(j)
        out.append((j, total_reduction(d), joint_resolution(d)))
    return out


def microstep_sizes(arm: ArmDescription) -> np.ndarray:
    """Output-side microstep size per joint (radians)."""
    return np.array([math.radians(joint_resolution(arm.drive(j)))
                     for j in range(1, 7)])
