"""Arm data model: load, validate, and serialize a complete arm description.

The arm description is a YAML file with four sections (``dh``, ``limits``,
``drives``, ``mass_model``) plus a required ``schema_version`` key. Angles in
the file may be plain numbers (radians) or strings with an explicit unit
suffix, e.g. ``"90 deg"`` or ``"1.5707 rad"``; everything is stored in
radians/meters/kilograms internally. All other modules treat the loaded
:class:`ArmDescription` as read-only.

Kinematic convention
--------------------
Row ``i`` of the ``dh`` table contributes the link transform

    T_i = Rz(theta_i + theta_offset) * Dz(d) * Dx(a_prev) * Rx(alpha_prev)

composed left to right from the base. Joint ``i`` therefore rotates about the
z-axis of frame ``i-1``. The shipped default chain carries the two roll-link
lengths (forearm and tool) in ``d`` so that those joints spin about their own
links; see the README for the full rationale.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np
import yaml

from .errors import ConfigError

log = logging.getLogger("armkit")

SCHEMA_VERSION = 1
STAGE_KINDS = ("capstan_rotating", "capstan_stationary", "belt", "gear", "cable")
DEFAULT_STEPS_PER_REV = 200
#: Plausibility reference for the total structural + motor mass (kg).
REFERENCE_TOTAL_MASS = 3.5

ENV_ARM_CONFIG = "ARMKIT_ARM_CONFIG"


# --------------------------------------------------------------------------
# domain types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DHRow:
    """One row of the kinematic table (radians / meters)."""

    theta_offset: float
    alpha_prev: float
    a_prev: float
    d: float


@dataclass(frozen=True)
class JointLimits:
    """Inclusive joint travel range in radians."""

    min: float
    max: float

    @property
    def span(self) -> float:
        return self.max - self.min


@dataclass(frozen=True)
class CapstanGeometry:
    """Cable capstan stage geometry (meters).

    ``sheave_diameter`` is the small driven drum the cable winds around;
    ``pulley_diameter`` is the large output drum. ``tolerance`` is the
    assembly clearance added to the stacked cable height.
    """

    sheave_diameter: float
    pulley_diameter: float
    cable_thickness: float
    tolerance: float = 0.002
    mode: str = "rotating"  # {"rotating", "stationary"}


@dataclass(frozen=True)
class TransmissionStage:
    """One reduction stage: kind, ratio, and geometry for capstan kinds."""

    kind: str
    ratio: float
    geometry: Optional[CapstanGeometry] = None


@dataclass(frozen=True)
class MotorSpec:
    """Stepper motor parameters.

    ``torque_speed_curve`` is a piecewise-linear map from step rate (steps/s)
    to available torque (N.m); it must start at (0, holding_torque) and be
    non-increasing. Rates beyond the last knot hold the last value.
    ``mass_source`` is ``"placeholder"`` until the value is replaced from the
    vendor datasheet; the loader warns while it is a placeholder.
    """

    name: str
    holding_torque: float
    steps_per_rev: int
    torque_speed_curve: tuple[tuple[float, float], ...]
    mass: float
    mass_source: str = "datasheet"
    steps_per_rev_is_default: bool = False


@dataclass(frozen=True)
class JointDrive:
    """Motor plus ordered reduction stages for one joint.

    ``listed_max_torque`` is the output-torque figure recorded in the config
    (vendor-style spec sheet value). When it disagrees with
    ``holding_torque x total reduction`` the loader emits a notice and the
    torque table annotates the row instead of silently using either number.
    """

    joint_index: int
    motor: MotorSpec
    stages: tuple[TransmissionStage, ...]
    microstep_factor: int
    listed_max_torque: Optional[float] = None


@dataclass(frozen=True)
class MassPoint:
    """Point mass riding on link ``frame`` (0 = stationary base).

    ``offset`` is measured in meters from the link's inboard frame origin
    along the link toward the next frame origin (for zero-length links, along
    the frame's z-axis).
    """

    frame: int
    mass: float
    offset: float
    label: str = ""


@dataclass(frozen=True)
class MotorPlacement:
    """Where drive ``drive``'s motor mass sits (same offset convention)."""

    drive: int
    frame: int
    offset: float


@dataclass(frozen=True)
class MassModel:
    """Structural masses, motor placements, payload, and gravity.

    ``reference_total`` (kg), when set, enables the plausibility check that
    structural plus motor mass stays within 10% of it.
    """

    links: tuple[MassPoint, ...]
    motors: tuple[MotorPlacement, ...]
    payload: float = 0.0
    gravity: float = 9.81
    reference_total: Optional[float] = REFERENCE_TOTAL_MASS


@dataclass(frozen=True)
class ArmDescription:
    """Complete parametric model of the arm; immutable after load."""

    name: str
    dh: tuple[DHRow, ...]
    limits: tuple[JointLimits, ...]
    drives: tuple[JointDrive, ...]
    mass_model: MassModel
    schema_version: int = SCHEMA_VERSION
    notices: tuple[str, ...] = ()

    def drive(self, joint_index: int) -> JointDrive:
        """Drive for 1-based ``joint_index``."""
        for d in self.drives:
            if d.joint_index == joint_index:
                return d
        raise KeyError(f"no drive with joint_index {joint_index}")


@dataclass(frozen=True)
class Violation:
    """One invariant violation found by :func:`validate_arm`."""

    code: str
    path: str
    message: str


# --------------------------------------------------------------------------
# parsing helpers
# --------------------------------------------------------------------------

def _angle(value, path: str) -> float:
    """Angle from config: plain number = radians, or "X deg" / "X rad"."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        parts = value.strip().split()
        if len(parts) == 2 and parts[1] in ("deg", "rad"):
            try:
                num = float(parts[0])
            except ValueError:
                raise ConfigError(f"{path}: cannot parse angle {value!r}") from None
            return math.radians(num) if parts[1] == "deg" else num
    raise ConfigError(
        f"{path}: angle must be a number (radians) or 'X deg'/'X rad', got {value!r}"
    )


def _number(value, path: str) -> float:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise ConfigError(f"{path}: expected a number, got {value!r}")


def _require(mapping, key, path: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ConfigError(f"{path}: missing required key '{key}'")
    return mapping[key]


def _angle_out(rad: float) -> float:
    # serialization keeps radians so reload is bit-exact
    return rad


# --------------------------------------------------------------------------
# load / dump
# --------------------------------------------------------------------------

def _parse_motor(raw, path: str) -> tuple[MotorSpec, list[str]]:
    notices: list[str] = []
    curve_raw = _require(raw, "torque_speed_curve", path)
    if not isinstance(curve_raw, list) or not curve_raw:
        raise ConfigError(f"{path}.torque_speed_curve: expected a non-empty list")
    curve = []
    for k, pair in enumerate(curve_raw):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"{path}.torque_speed_curve[{k}]: expected [rate, torque]")
        curve.append((_number(pair[0], f"{path}.torque_speed_curve[{k}][0]"),
                      _number(pair[1], f"{path}.torque_speed_curve[{k}][1]")))
    if "steps_per_rev" in raw:
        steps = int(_number(raw["steps_per_rev"], f"{path}.steps_per_rev"))
        is_default = bool(raw.get("steps_per_rev_is_default", False))
    else:
        steps, is_default = DEFAULT_STEPS_PER_REV, True
    spec = MotorSpec(
        name=str(_require(raw, "name", path)),
        holding_torque=_number(_require(raw, "holding_torque", path),
                               f"{path}.holding_torque"),
        steps_per_rev=steps,
        torque_speed_curve=tuple(curve),
        mass=_number(_require(raw, "mass", path), f"{path}.mass"),
        mass_source=str(raw.get("mass_source", "datasheet")),
        steps_per_rev_is_default=is_default,
    )
    if spec.mass_source == "placeholder":
        notices.append(
            f"{path}.mass = {spec.mass} kg is a placeholder; replace it with the "
            "vendor datasheet value for your motors"
        )
    if spec.steps_per_rev_is_default:
        notices.append(
            f"{path}.steps_per_rev uses the {DEFAULT_STEPS_PER_REV} full-steps/rev "
            "default (standard 1.8-degree hybrid steppers); override if your "
            "motors differ"
        )
    return spec, notices


def _parse_stage(raw, path: str) -> TransmissionStage:
    kind = str(_require(raw, "kind", path))
    ratio = _number(_require(raw, "ratio", path), f"{path}.ratio")
    geometry = None
    if "geometry" in raw and raw["geometry"] is not None:
        g = raw["geometry"]
        gp = f"{path}.geometry"
        mode = str(g.get("mode", "")) or (
            "stationary" if kind == "capstan_stationary" else "rotating")
        geometry = CapstanGeometry(
            sheave_diameter=_number(_require(g, "sheave_diameter", gp),
                                    f"{gp}.sheave_diameter"),
            pulley_diameter=_number(_require(g, "pulley_diameter", gp),
                                    f"{gp}.pulley_diameter"),
            cable_thickness=_number(_require(g, "cable_thickness", gp),
                                    f"{gp}.cable_thickness"),
            tolerance=_number(g.get("tolerance", 0.002), f"{gp}.tolerance"),
            mode=mode,
        )
    return TransmissionStage(kind=kind, ratio=ratio, geometry=geometry)


def load_arm_data(data: dict, source: str = "<dict>") -> ArmDescription:
    """Build and validate an :class:`ArmDescription` from parsed config data.

    Raises:
        ConfigError: on schema/shape problems.
        ValidationError: when the assembled model violates invariants.
    """
    from .errors import ValidationError

    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    if "schema_version" not in data:
        raise ConfigError(f"{source}: missing required key 'schema_version'")
    version = data["schema_version"]
    if not isinstance(version, int) or isinstance(version, bool):
        raise ConfigError(f"{source}: schema_version must be an integer")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"{source}: unsupported schema_version {version} "
            f"(this toolkit reads version {SCHEMA_VERSION})"
        )

    notices: list[str] = []

    dh_raw = _require(data, "dh", source)
    if not isinstance(dh_raw, list):
        raise ConfigError(f"{source}.dh: expected a list of rows")
    dh = tuple(
        DHRow(
            theta_offset=_angle(_require(row, "theta_offset", f"dh[{i}]"),
                                f"dh[{i}].theta_offset"),
            alpha_prev=_angle(_require(row, "alpha_prev", f"dh[{i}]"),
                              f"dh[{i}].alpha_prev"),
            a_prev=_number(_require(row, "a_prev", f"dh[{i}]"), f"dh[{i}].a_prev"),
            d=_number(_require(row, "d", f"dh[{i}]"), f"dh[{i}].d"),
        )
        for i, row in enumerate(dh_raw)
    )

    lim_raw = _require(data, "limits", source)
    if not isinstance(lim_raw, list):
        raise ConfigError(f"{source}.limits: expected a list")
    limits = tuple(
        JointLimits(
            min=_angle(_require(row, "min", f"limits[{i}]"), f"limits[{i}].min"),
            max=_angle(_require(row, "max", f"limits[{i}]"), f"limits[{i}].max"),
        )
        for i, row in enumerate(lim_raw)
    )

    drives_raw = _require(data, "drives", source)
    if not isinstance(drives_raw, list):
        raise ConfigError(f"{source}.drives: expected a list")
    drives = []
    for i, row in enumerate(drives_raw):
        dp = f"drives[{i}]"
        motor, motor_notices = _parse_motor(_require(row, "motor", dp), f"{dp}.motor")
        notices.extend(motor_notices)
        stages_raw = _require(row, "stages", dp)
        if not isinstance(stages_raw, list):
            raise ConfigError(f"{dp}.stages: expected a list")
        stages = tuple(_parse_stage(s, f"{dp}.stages[{k}]")
                       for k, s in enumerate(stages_raw))
        listed = row.get("listed_max_torque")
        drives.append(JointDrive(
            joint_index=int(_number(_require(row, "joint_index", dp),
                                    f"{dp}.joint_index")),
            motor=motor,
            stages=stages,
            microstep_factor=int(_number(_require(row, "microstep_factor", dp),
                                         f"{dp}.microstep_factor")),
            listed_max_torque=(None if listed is None
                               else _number(listed, f"{dp}.listed_max_torque")),
        ))
    drives = tuple(drives)

    mm_raw = _require(data, "mass_model", source)
    links = tuple(
        MassPoint(
            frame=int(_number(_require(row, "frame", f"mass_model.links[{i}]"),
                              f"mass_model.links[{i}].frame")),
            mass=_number(_require(row, "mass", f"mass_model.links[{i}]"),
                         f"mass_model.links[{i}].mass"),
            offset=_number(_require(row, "offset", f"mass_model.links[{i}]"),
                           f"mass_model.links[{i}].offset"),
            label=str(row.get("label", "")),
        )
        for i, row in enumerate(mm_raw.get("links", []))
    )
    motors = tuple(
        MotorPlacement(
            drive=int(_number(_require(row, "drive", f"mass_model.motors[{i}]"),
                              f"mass_model.motors[{i}].drive")),
            frame=int(_number(_require(row, "frame", f"mass_model.motors[{i}]"),
                              f"mass_model.motors[{i}].frame")),
            offset=_number(_require(row, "offset", f"mass_model.motors[{i}]"),
                           f"mass_model.motors[{i}].offset"),
        )
        for i, row in enumerate(mm_raw.get("motors", []))
    )
    ref = mm_raw.get("reference_total", REFERENCE_TOTAL_MASS)
    mass_model = MassModel(
        links=links,
        motors=motors,
        payload=_number(mm_raw.get("payload", 0.0), "mass_model.payload"),
        gravity=_number(mm_raw.get("gravity", 9.81), "mass_model.gravity"),
        reference_total=None if ref is None else _number(
            ref, "mass_model.reference_total"),
    )

    # torque bookkeeping notice: listed output torque vs holding x reduction
    from . import drivetrain  # local import to avoid a cycle

    for d in drives:
        if d.listed_max_torque is None:
            continue
        computed = drivetrain.max_joint_torque(d)
        if abs(computed - d.listed_max_torque) > 5e-5:
            notices.append(
                f"drive {d.joint_index}: listed_max_torque {d.listed_max_torque} N.m "
                f"is inconsistent with holding_torque x total reduction = "
                f"{computed:.5f} N.m; the computed value is authoritative and the "
                "torque table annotates this row"
            )

    arm = ArmDescription(
        name=str(data.get("name", "arm")),
        dh=dh,
        limits=limits,
        drives=drives,
        mass_model=mass_model,
        schema_version=version,
        notices=tuple(notices),
    )
    violations = validate_arm(arm)
    if violations:
        raise ValidationError(violations)
    for n in notices:
        log.warning("%s: %s", source, n)
    return arm


def load_arm(config_path: str) -> ArmDescription:
    """Load and validate an arm description from a YAML file.

    Args:
        config_path: path to the configuration file.

    Returns:
        Validated, immutable :class:`ArmDescription`. Loader notices
        (placeholder masses, defaulted fields, torque-listing conflicts) are
        attached as ``arm.notices`` and logged at WARNING level.
    """
    try:
        with open(config_path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read arm config {config_path!r}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{config_path}: YAML parse error: {exc}") from exc
    return load_arm_data(data, source=str(config_path))


def default_arm() -> ArmDescription:
    """The shipped desk-arm description (packaged data file)."""
    ref = resources.files("armkit").joinpath("data/default_arm.yaml")
    data = yaml.safe_load(ref.read_text(encoding="utf-8"))
    return load_arm_data(data, source="builtin:default_arm.yaml")


def resolve_arm(selector: Optional[str]) -> tuple[ArmDescription, str]:
    """Resolve an arm per CLI rules: explicit path, else $ARMKIT_ARM_CONFIG,
    else the builtin default. Returns (arm, source label)."""
    if selector and selector != "default":
        return load_arm(selector), selector
    env = os.environ.get(ENV_ARM_CONFIG)
    if env:
        return load_arm(env), env
    return default_arm(), "builtin:default"


def dump_arm(arm: ArmDescription, path: str) -> None:
    """Serialize an arm description to YAML.

    Numbers are written as plain radians/meters via Python float repr, so a
    dump/load round trip reproduces every field bit-exactly.
    """
    def stage_out(s: TransmissionStage):
        out = {"kind": s.kind, "ratio": s.ratio}
        if s.geometry is not None:
            out["geometry"] = dataclasses.asdict(s.geometry)
        return out

    data = {
        "schema_version": arm.schema_version,
        "name": arm.name,
        "dh": [
            {"theta_offset": _angle_out(r.theta_offset),
             "alpha_prev": _angle_out(r.alpha_prev),
             "a_prev": r.a_prev, "d": r.d}
            for r in arm.dh
        ],
        "limits": [{"min": _angle_out(l.min), "max": _angle_out(l.max)}
                   for l in arm.limits],
        "drives": [
            {
                "joint_index": d.joint_index,
                "microstep_factor": d.microstep_factor,
                **({"listed_max_torque": d.listed_max_torque}
                   if d.listed_max_torque is not None else {}),
                "motor": {
                    "name": d.motor.name,
                    "holding_torque": d.motor.holding_torque,
                    "steps_per_rev": d.motor.steps_per_rev,
                    "steps_per_rev_is_default": d.motor.steps_per_rev_is_default,
                    "torque_speed_curve": [list(p) for p in d.motor.torque_speed_curve],
                    "mass": d.motor.mass,
                    "mass_source": d.motor.mass_source,
                },
                "stages": [stage_out(s) for s in d.stages],
            }
            for d in arm.drives
        ],
        "mass_model": {
            "gravity": arm.mass_model.gravity,
            "payload": arm.mass_model.payload,
            "reference_total": arm.mass_model.reference_total,
            "links": [dataclasses.asdict(m) for m in arm.mass_model.links],
            "motors": [dataclasses.asdict(m) for m in arm.mass_model.motors],
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(data, fh, sort_keys=False)


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

def validate_arm(arm: ArmDescription) -> list[Violation]:
    """Check every model invariant; returns violations (empty = valid)."""
    from . import drivetrain  # local import to avoid a cycle

    v: list[Violation] = []

    def bad(code, path, message):
        v.append(Violation(code=code, path=path, message=message))

    if len(arm.dh) != 6:
        bad("dh.count", "dh", f"expected 6 rows, got {len(arm.dh)}")
    for i, row in enumerate(arm.dh):
        for name in ("theta_offset", "alpha_prev", "a_prev", "d"):
            val = getattr(row, name)
            if not math.isfinite(val):
                bad("dh.nonfinite", f"dh[{i}].{name}", "value must be finite")
        if row.a_prev < 0 or row.d < 0:
            bad("dh.negative_length", f"dh[{i}]",
                "link lengths must be non-negative for this arm")

    if len(arm.limits) != 6:
        bad("limits.count", "limits", f"expected 6 entries, got {len(arm.limits)}")
    for i, lim in enumerate(arm.limits):
        if not (lim.min < lim.max):
            bad("limits.order", f"limits[{i}] (JointLimits)",
                f"min {lim.min} must be < max {lim.max}")

    if len(arm.drives) != 6:
        bad("drive.count", "drives", f"expected 6 drives, got {len(arm.drives)}")
    seen = set()
    for i, d in enumerate(arm.drives):
        dp = f"drives[{i}]"
        if not 1 <= d.joint_index <= 6:
            bad("drive.joint_index.range", dp,
                f"joint_index {d.joint_index} outside 1..6")
        if d.joint_index in seen:
            bad("drive.joint_index.duplicate", dp,
                f"joint_index {d.joint_index} appears more than once")
        seen.add(d.joint_index)
        if d.microstep_factor < 1:
            bad("drive.microstep", f"{dp}.microstep_factor", "must be >= 1")

        m = d.motor
        if not m.holding_torque > 0:
            bad("motor.holding_torque", f"{dp}.motor.holding_torque", "must be > 0")
        if m.mass < 0:
            bad("motor.mass.negative", f"{dp}.motor.mass (MassModel)",
                "motor mass must be >= 0")
        if m.steps_per_rev < 1:
            bad("motor.steps_per_rev", f"{dp}.motor.steps_per_rev", "must be >= 1")
        curve = m.torque_speed_curve
        if not curve:
            bad("motor.curve.empty", f"{dp}.motor.torque_speed_curve",
                "curve needs at least one point")
        else:
            if abs(curve[0][0]) > 1e-12 or abs(curve[0][1] - m.holding_torque) > 1e-12:
                bad("motor.curve.origin", f"{dp}.motor.torque_speed_curve",
                    "curve must start at (0, holding_torque)")
            rates = [p[0] for p in curve]
            torqs = [p[1] for p in curve]
            if any(b <= a for a, b in zip(rates, rates[1:])):
                bad("motor.curve.rates", f"{dp}.motor.torque_speed_curve",
                    "rates must be strictly increasing")
            if any(b > a + 1e-12 for a, b in zip(torqs, torqs[1:])):
                bad("motor.curve.increasing", f"{dp}.motor.torque_speed_curve",
                    "torque must be non-increasing with rate")

        for k, s in enumerate(d.stages):
            sp = f"{dp}.stages[{k}] (TransmissionStage)"
            if s.kind not in STAGE_KINDS:
                bad("stage.kind", sp, f"unknown stage kind {s.kind!r}")
            if not s.ratio > 0:
                bad("stage.ratio", sp, "ratio must be > 0")
            is_capstan = s.kind in ("capstan_rotating", "capstan_stationary")
            if is_capstan and s.geometry is None:
                bad("stage.capstan.geometry_missing", sp,
                    "capstan stages require geometry")
            if not is_capstan and s.geometry is not None:
                bad("stage.capstan.geometry_unexpected", sp,
                    "geometry only belongs on capstan stages")
            if is_capstan and s.geometry is not None:
                g = s.geometry
                gp = f"{dp}.stages[{k}].geometry"
                expect_mode = "rotating" if s.kind == "capstan_rotating" else "stationary"
                if g.mode != expect_mode:
                    bad("stage.capstan.mode_mismatch", gp,
                        f"geometry mode {g.mode!r} vs stage kind {s.kind!r}")
                if not (g.pulley_diameter > g.sheave_diameter > 0):
                    bad("capstan.diameters", gp,
                        "need pulley_diameter > sheave_diameter > 0")
                if not g.cable_thickness > 0:
                    bad("capstan.thickness", gp, "cable thickness must be > 0")
                if g.tolerance < 0:
                    bad("capstan.tolerance", gp, "tolerance must be >= 0")
                if (g.pulley_diameter > g.sheave_diameter > 0
                        and g.mode == expect_mode):
                    ratio_geom = drivetrain.capstan_reduction(g)
                    if abs(ratio_geom - s.ratio) > 1e-9:
                        bad("stage.capstan.ratio_mismatch", sp,
                            f"stage ratio {s.ratio!r} differs from geometry-derived "
                            f"{ratio_geom!r} by more than 1e-9")

    mm = arm.mass_model
    drive_ids = {d.joint_index for d in arm.drives}
    for i, link in enumerate(mm.links):
        lp = f"mass_model.links[{i}] (MassModel)"
        if link.mass < 0:
            bad("mass.negative", lp, "link mass must be >= 0")
        if not 0 <= link.frame <= 6:
            bad("mass.frame.range", lp, f"frame {link.frame} outside 0..6")
    for i, pl in enumerate(mm.motors):
        pp = f"mass_model.motors[{i}] (MassModel)"
        if pl.drive not in drive_ids:
            bad("mass.motor_placement.drive", pp, f"no drive {pl.drive}")
        if not 0 <= pl.frame <= 6:
            bad("mass.frame.range", pp, f"frame {pl.frame} outside 0..6")
    if mm.payload < 0:
        bad("mass.negative", "mass_model.payload (MassModel)", "payload must be >= 0")
    if not mm.gravity > 0:
        bad("mass.gravity", "mass_model.gravity", "gravity must be > 0")
    if mm.reference_total is not None and len(arm.drives) == 6 and not v:
        total = total_modeled_mass(arm)
        lo, hi = 0.9 * mm.reference_total, 1.1 * mm.reference_total
        if not lo <= total <= hi:
            bad("mass.total_band", "mass_model (MassModel)",
                f"structural+motor mass {total:.5f} kg outside 10% of the "
                f"reference total {mm.reference_total} kg")
    return v


def total_modeled_mass(arm: ArmDescription) -> float:
    """Sum of structural link masses and placed motor masses (kg)."""
    total = sum(p.mass for p in arm.mass_model.links)
    for pl in arm.mass_model.motors:
        total += arm.drive(pl.drive).motor.mass
    return total


# --------------------------------------------------------------------------
# array views used by the numeric modules
# --------------------------------------------------------------------------

def dh_params(arm: ArmDescription) -> np.ndarray:
    """(6, 4) float64 array of [theta_offset, d, a_prev, alpha_prev] rows."""
    return np.array(
        [[r.theta_offset, r.d, r.a_prev, r.alpha_prev] for r in arm.dh],
        dtype=np.float64,
    )


def limits_array(arm: ArmDescription) -> np.ndarray:
    """(6, 2) [min, max] in radians."""
    return np.array([[l.min, l.max] for l in arm.limits], dtype=np.float64)


def within_limits(arm: ArmDescription, q, tol: float = 1e-12) -> bool:
    """True when every joint angle lies inside its limit range."""
    q = np.asarray(q, dtype=float)
    lim = limits_array(arm)
    return bool(np.all(q >= lim[:, 0] - tol) and np.all(q <= lim[:, 1] + tol))
