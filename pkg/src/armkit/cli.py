"""Command-line interface: every analysis as a subcommand.

Angles cross this boundary in degrees and are converted to radians
immediately; lengths are meters except where a flag says otherwise
(capstan geometry is entered in millimeters, matching how such hardware
is specified). Output files are only written when ``--out DIR`` is given;
a ``manifest.json`` recording the subcommand, arm source, seed, full argv,
and the SHA-256 of every written file lands next to them, and
:func:`replay` re-executes a manifest bit-exactly.

Exit codes (also in the README): 0 success, 2 usage, 3 arm-config,
4 computation, 5 resource limit, 6 BOM data, 7 output I/O.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from . import bom as bom_mod
from . import drivetrain, kinematics, statics, steppersim, svgplot
from ._version import __version__
from .errors import (
    BomDataError,
    ComputationError,
    ConfigError,
    OutputError,
    ResourceLimitError,
)
from .kinematics import (
    IKOptions,
    Pose,
    REFERENCE_NOMINAL_REACH_M,
    REFERENCE_RADIAL_REACH_M,
)
from .model import ENV_ARM_CONFIG, resolve_arm

MANIFEST_SCHEMA = "armkit.run/1"
MANIFEST_NAME = "manifest.json"

EXIT_CODES = {
    "ok": 0,
    "usage": 2,
    "config": 3,
    "computation": 4,
    "resource": 5,
    "bom-data": 6,
    "output": 7,
}

SUBCOMMANDS = ("fk", "ik", "jacobian", "workspace", "reach", "capstan",
               "torque-table", "resolution", "payload", "repeat-sim", "bom")

_SVG_CAPABLE = ("workspace", "repeat-sim")


class CliUsageError(Exception):
    """Flag combination or value the parser alone cannot reject."""


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def _floats(text: str, n: Optional[int], what: str) -> np.ndarray:
    try:
        vals = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise CliUsageError(f"{what}: expected comma-separated numbers, "
                            f"got {text!r}") from None
    if n is not None and vals.size != n:
        raise CliUsageError(f"{what}: expected {n} values, got {vals.size}")
    return vals


def _ints(text: str, n: Optional[int], what: str) -> Tuple[int, ...]:
    vals = _floats(text, n, what)
    out = tuple(int(v) for v in vals)
    if any(o != v for o, v in zip(out, vals)):
        raise CliUsageError(f"{what}: expected integers, got {text!r}")
    return out


def _rpy_matrix(rpy_deg: np.ndarray) -> np.ndarray:
    """ZYX convention: R = Rz(yaw) @ Ry(pitch) @ Rx(roll)."""
    r, p, y = (math.radians(v) for v in rpy_deg)
    cr, sr = math.cos(r), math.sin(r)
    cp, sp = math.cos(p), math.sin(p)
    cy, sy = math.cos(y), math.sin(y)
    rz = np.array([[cy, -sy, 0], [sy, cy, 0], [0, 0, 1.0]])
    ry = np.array([[cp, 0, sp], [0, 1.0, 0], [-sp, 0, cp]])
    rx = np.array([[1.0, 0, 0], [0, cr, -sr], [0, sr, cr]])
    return rz @ ry @ rx


def _csv_row(values) -> str:
    return ",".join(repr(float(v)) for v in values)


class _Outputs:
    """Collects output files for one run and records their hashes."""

    def __init__(self, directory: str):
        self.dir = Path(directory)
        try:
            self.dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OutputError(f"cannot create output dir {directory}: {exc}")
        self.records: List[dict] = []

    def write(self, name: str, text: str) -> None:
        try:
            (self.dir / name).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OutputError(f"cannot write {self.dir / name}: {exc}")
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        self.records.append({"path": name, "sha256": digest})

    def write_manifest(self, subcommand: str, arm_source: str, seed: int,
                       argv: List[str]) -> None:
        doc = {
            "schema": MANIFEST_SCHEMA,
            "toolkit_version": __version__,
            "subcommand": subcommand,
            "arm_config": arm_source,
            "seed": seed,
            "argv": list(argv),
            "outputs": self.records,
        }
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        try:
            (self.dir / MANIFEST_NAME).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OutputError(f"cannot write manifest: {exc}")


# --------------------------------------------------------------------------
# subcommand handlers: return stdout text, append files to ``out``
# --------------------------------------------------------------------------

def _handle_fk(args, arm, out):
    q = np.radians(_floats(args.q, 6, "--q"))
    pose = kinematics.forward_kinematics(arm, q)
    x, y, z = (float(v) for v in pose.position)
    lines = [f"q_deg: {args.q}",
             f"position_m: {x!r} {y!r} {z!r}",
             "rotation:"]
    for row in pose.orientation:
        lines.append("  " + " ".join(repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if out is not None:
        if args.format == "csv":
            out.write("fk.csv", "x_m,y_m,z_m\n" + _csv_row(pose.position) + "\n")
        else:
            out.write("fk.txt", text)
    return text


def _handle_ik(args, arm, out):
    target = Pose(position=_floats(args.target, 3, "--target"),
                  orientation=_rpy_matrix(_floats(args.rpy, 3, "--rpy")))
    q0 = (np.radians(_floats(args.q0, 6, "--q0")) if args.q0
          else np.zeros(6))
    opts = IKOptions(max_iters=args.max_iters, restarts=args.restarts,
                     restart_seed=args.seed)
    q = kinematics.inverse_kinematics(arm, target, q0, opts)
    reached = kinematics.forward_kinematics(arm, q)
    err = float(np.linalg.norm(reached.position - target.position))
    q_deg = np.degrees(q)
    lines = [
        "q_deg: " + " ".join(repr(float(v)) for v in q_deg),
        "position_m: " + " ".join(repr(float(v)) for v in reached.position),
        f"position_error_m: {err!r}",
    ]
    text = "\n".join(lines) + "\n"
    if out is not None:
        if args.format == "csv":
            out.write("ik.csv", "q1_deg,q2_deg,q3_deg,q4_deg,q5_deg,q6_deg\n"
                      + _csv_row(q_deg) + "\n")
        else:
            out.write("ik.txt", text)
    return text


def _handle_jacobian(args, arm, out):
    q = np.radians(_floats(args.q, 6, "--q"))
    J = kinematics.jacobian(arm, q)
    lines = [f"q_deg: {args.q}",
             "jacobian (rows: vx vy vz wx wy wz; columns: joints 1-6):"]
    for row in J:
        lines.append("  " + " ".join(repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if out is not None:
        if args.format == "csv":
            out.write("jacobian.csv",
                      "\n".join(_csv_row(row) for row in J) + "\n")
        else:
            out.write("jacobian.txt", text)
    return text


def _sample_cloud(args, arm):
    steps = _ints(args.per_joint_steps, 6, "--per-joint-steps")
    return kinematics.sample_workspace(arm, steps, mode=args.mode,
                                       samples=args.samples, seed=args.seed)


def _reach_summary(args, arm, cloud) -> str:
    dist, radial = kinematics.max_reach(cloud)
    span = kinematics.azimuth_span(cloud, shell_fraction=args.shell_fraction)
    below = kinematics.below_base_fraction(cloud)
    min_z = float(np.min(cloud.points[:, 2]))
    n = cloud.points.shape[0]
    recipe = (f"grid steps={','.join(map(str, cloud.per_joint_steps))}"
              if cloud.mode == "grid" else f"quasi seed={cloud.seed}")
    d_nom = 100.0 * (radial / REFERENCE_NOMINAL_REACH_M - 1.0)
    d_rad = 100.0 * (radial / REFERENCE_RADIAL_REACH_M - 1.0)
    lines = [
        f"samples: {n} ({recipe})",
        f"max_reach_m: {dist!r}",
        f"max_radial_reach_m: {radial!r}",
        f"min_z_m: {min_z!r}",
        f"below_base_fraction: {below!r}",
        f"azimuth_span_deg (outer shell >= {args.shell_fraction:g} of max "
        f"radial): {span!r}",
        f"note: the recorded reach figures disagree with each other "
        f"(nominal {REFERENCE_NOMINAL_REACH_M} m vs {REFERENCE_RADIAL_REACH_M} m "
        f"quoted with the payload test); computed max radial {radial:.5f} m "
        f"is {d_nom:+.1f}% of the former and {d_rad:+.1f}% of the latter.",
    ]
    return "\n".join(lines) + "\n"


def _handle_workspace(args, arm, out):
    cloud = _sample_cloud(args, arm)
    text = _reach_summary(args, arm, cloud)
    if out is not None:
        out.write("workspace.txt", text)
        if args.format == "csv":
            rows = ["x_m,y_m,z_m"]
            rows += [_csv_row(p) for p in cloud.points]
            out.write("workspace.csv", "\n".join(rows) + "\n")
        elif args.format == "svg":
            out.write("workspace.svg", svgplot.workspace_svg(cloud.points))
    return text


def _handle_reach(args, arm, out):
    cloud = _sample_cloud(args, arm)
    text = _reach_summary(args, arm, cloud)
    if out is not None:
        if args.format == "csv":
            dist, radial = kinematics.max_reach(cloud)
            rows = ["metric,value",
                    f"max_reach_m,{dist!r}",
                    f"max_radial_reach_m,{radial!r}",
                    f"nominal_reference_m,{REFERENCE_NOMINAL_REACH_M!r}",
                    f"radial_reference_m,{REFERENCE_RADIAL_REACH_M!r}"]
            out.write("reach.csv", "\n".join(rows) + "\n")
        else:
            out.write("reach.txt", text)
    return text


def _handle_capstan(args, arm, out):
    from .model import CapstanGeometry

    geom = CapstanGeometry(sheave_diameter=args.small_diameter * 1e-3,
                           pulley_diameter=args.large_diameter * 1e-3,
                           cable_thickness=args.cable_thickness * 1e-3,
                           tolerance=args.tolerance * 1e-3,
                           mode=args.mode)
    gamma = drivetrain.capstan_reduction(geom)
    windings = drivetrain.windings_required(gamma, args.output_range)
    height = drivetrain.sheave_height(geom, gamma)
    spacing = drivetrain.sheave_spacing(geom.cable_thickness)
    lines = [
        f"mode: {args.mode}",
        f"reduction_ratio: {gamma!r}",
        f"windings_for_{args.output_range:g}_deg: {windings!r}",
        f"sheave_height_mm: {height * 1e3!r}",
        f"groove_spacing_mm: {spacing * 1e3!r}",
    ]
    text = "\n".join(lines) + "\n"
    if out is not None:
        if args.format == "csv":
            rows = ["metric,value",
                    f"reduction_ratio,{gamma!r}",
                    f"windings,{windings!r}",
                    f"sheave_height_mm,{height * 1e3!r}",
                    f"groove_spacing_mm,{spacing * 1e3!r}"]
            out.write("capstan.csv", "\n".join(rows) + "\n")
        else:
            out.write("capstan.txt", text)
    return text


def _handle_torque_table(args, arm, out):
    rows = drivetrain.torque_table(arm)
    header = (f"{'joint':>5} {'motor':<14} {'mechanism':<16} "
              f"{'reduction':>9} {'holding':>8} {'max_torque':>10} "
              f"{'listed':>8}  note")
    lines = [header]
    for r in rows:
        listed = "" if r.listed_max_torque is None else f"{r.listed_max_torque:g}"
        lines.append(
            f"{r.joint_index:>5} {r.motor:<14} {r.mechanism:<16} "
            f"{r.total_reduction:>9.4f} {r.holding_torque:>8.3f} "
            f"{r.max_joint_torque:>10.5f} {listed:>8}  {r.annotation or ''}"
        )
    text = "\n".join(lines) + "\n"
    if out is not None:
        if args.format == "csv":
            rows_csv = ["joint,motor,mechanism,total_reduction,"
                        "holding_torque_nm,max_joint_torque_nm,"
                        "listed_max_torque_nm,annotation"]
            for r in rows:
                listed = "" if r.listed_max_torque is None else repr(
                    r.listed_max_torque)
                note = (r.annotation or "").replace(",", ";")
                rows_csv.append(
                    f"{r.joint_index},{r.motor},{r.mechanism.replace(',', ';')},"
                    f"{r.total_reduction!r},{r.holding_torque!r},"
                    f"{r.max_joint_torque!r},{listed},{note}")
            out.write("torque_table.csv", "\n".join(rows_csv) + "\n")
        else:
            out.write("torque_table.txt", text)
    return text


def _handle_resolution(args, arm, out):
    rows = drivetrain.resolution_table(arm)
    lines = [f"{'joint':>5} {'reduction':>9} {'deg_per_microstep':>18}"]
    for j, red, deg in rows:
        lines.append(f"{j:>5} {red:>9.4f} {deg:>18.6f}")
    text = "\n".join(lines) + "\n"
    if out is not None:
        if args.format == "csv":
            rows_csv = ["joint,total_reduction,deg_per_microstep"]
            rows_csv += [f"{j},{red!r},{deg!r}" for j, red, deg in rows]
            out.write("resolution.csv", "\n".join(rows_csv) + "\n")
        else:
            out.write("resolution.txt", text)
    return text


def _handle_payload(args, arm, out):
    sweep_joints = _ints(args.sweep_joints, None, "--sweep-joints")
    limit_joints = _ints(args.limit_joints, None, "--limit-joints")
    if args.policy == "fixed":
        if not args.q:
            raise CliUsageError("--policy fixed requires --q")
        q = np.radians(_floats(args.q, 6, "--q"))
        report = statics.static_report(arm, q, payload=args.payload_kg)
        result = statics.max_payload(arm, q, constraint_joints=limit_joints)
        lines = [f"pose_deg: {args.q}", f"payload_kg: {args.payload_kg:g}",
                 f"{'joint':>5} {'required':>10} {'available':>10} "
                 f"{'utilization':>11}"]
        for j in range(6):
            lines.append(f"{j + 1:>5} {report.required[j]:>10.5f} "
                         f"{report.available[j]:>10.5f} "
                         f"{report.utilization[j]:>11.5f}")
        lines.append(f"limiting_joint: {report.limiting_joint}")
        lines.append(f"max_payload_kg_at_pose: {result.mass!r} "
                     f"(limiting joint {result.limiting_joint}, "
                     f"utilization {result.utilization:.5f})")
    else:
        result = statics.max_payload(arm, "worst_case_sweep",
                                     grid_deg=args.grid_deg,
                                     sweep_joints=sweep_joints,
                                     constraint_joints=limit_joints)
        pose_deg = ",".join(f"{math.degrees(v):g}" for v in result.pose)
        lines = [
            f"policy: worst_case_sweep (grid {args.grid_deg:g} deg over "
            f"joints {','.join(map(str, sweep_joints))}, others at 0; "
            f"budgets checked on joints "
            f"{','.join(map(str, limit_joints))})",
            f"max_payload_kg: {result.mass!r}",
            f"limiting_joint: {result.limiting_joint}",
            f"limiting_utilization: {result.utilization!r}",
            f"binding_pose_deg: {pose_deg}",
        ]
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write("payload.txt", text)
        if args.format == "csv" and args.policy != "fixed":
            poses, caps, limiting = statics.sweep_payload_caps(
                arm, grid_deg=args.grid_deg, sweep_joints=sweep_joints,
                constraint_joints=limit_joints)
            rows = ["q1_deg,q2_deg,q3_deg,q4_deg,q5_deg,q6_deg,"
                    "cap_kg,limiting_joint"]
            for p, c, lj in zip(poses, caps, limiting):
                rows.append(_csv_row(np.degrees(p)) + f",{c!r},{lj}")
            out.write("payload_sweep.csv", "\n".join(rows) + "\n")
    return text


def _handle_repeat_sim(args, arm, out):
    speeds = _floats(args.speeds, None, "--speeds")
    if (args.sigma0_mm is None) != (args.k_mm_s_per_step is None):
        raise CliUsageError("--sigma0-mm and --k-mm-s-per-step go together")
    if args.sigma0_mm is not None:
        noise = steppersim.NoiseModel(sigma0=args.sigma0_mm * 1e-3,
                                      k=args.k_mm_s_per_step * 1e-3)
    else:
        noise = steppersim.default_noise()
    probe = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0),
             "z": (0.0, 0.0, 1.0), "norm": None}[args.probe]
    result = steppersim.repeatability_experiment(
        arm, speeds=tuple(float(s) for s in speeds),
        cycles_per_speed=args.cycles, noise=noise, seed=args.seed,
        payload=args.payload_kg, probe=probe)
    lines = [
        f"noise: sigma0={noise.sigma0 * 1e3:g} mm, "
        f"k={noise.k * 1e3:g} mm per step/s (calibrated anchors, "
        f"not independent predictions)",
        f"cycles_per_speed: {args.cycles}  seed: {args.seed}",
        f"{'speed':>8} {'std_mm':>12}",
    ]
    for speed, std in zip(result.speeds, result.stds):
        lines.append(f"{speed:>8g} {std * 1e3:>12.6f}")
    lines.append(f"grand_mean_abs_deviation_mm: {result.grand_mean * 1e3!r}")
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write("repeat_sim.txt", text)
        if args.format == "csv":
            out.write("repeat_sim.csv", steppersim.result_to_csv(result))
        elif args.format == "svg":
            labels = [f"{s:g}" for s in result.speeds]
            data = [d * 1e3 for d in result.deviations]
            out.write("repeat_sim.svg",
                      svgplot.box_plot_svg(labels, data, "deviation (mm)"))
    return text


def _handle_bom(args, arm, out):
    if args.file:
        bill = bom_mod.load_bom(args.file, batch_size=args.batch)
    else:
        bill = bom_mod.default_bom()
        if args.batch != bill.batch_size:
            bill = bom_mod.BillOfMaterials(lines=bill.lines,
                                           batch_size=args.batch)
    total = bom_mod.batch_total(bill)
    per_arm = bom_mod.per_arm_cost(bill)
    fil = bom_mod.filament_report(bill)
    cable = bom_mod.cable_budget(bom_mod.CABLE_LENGTHS_MM, bill.batch_size)

    lines = []
    for cat, sub in bom_mod.category_subtotals(bill).items():
        lines.append(f"{cat}: ${bom_mod.format_usd(sub)}")
    lines.append(f"batch_total_usd ({bill.batch_size} arms): "
                 f"{bom_mod.format_usd(total)}")
    lines.append(f"per_arm_usd: {bom_mod.format_usd(per_arm)}")
    spool_note = ""
    if fil.mismatch:
        spool_note = (f" -- parts list orders {fil.listed_spools}, "
                      f"short of the ceiling rule")
    lines.append(
        f"filament: {fil.grams_per_arm:g} g/arm x {fil.batch} arms -> "
        f"{fil.computed_spools} x {fil.spool_grams:g} g spools{spool_note}")
    ft = float(cable.total_ft)
    lines.append(
        f"cable: {','.join(f'{v:g}' for v in bom_mod.CABLE_LENGTHS_MM)} mm "
        f"per arm x {bill.batch_size} -> {float(cable.total_mm):g} mm "
        f"({ft:.3f} ft)")
    text = "\n".join(lines) + "\n"
    if out is not None:
        if args.format == "csv":
            rows = ["category,subtotal_usd"]
            for cat, sub in bom_mod.category_subtotals(bill).items():
                rows.append(f"{cat.replace(',', ';')},{bom_mod.format_usd(sub)}")
            rows.append(f"batch_total,{bom_mod.format_usd(total)}")
            rows.append(f"per_arm,{bom_mod.format_usd(per_arm)}")
            out.write("bom.csv", "\n".join(rows) + "\n")
        else:
            out.write("bom.txt", text)
    return text


_HANDLERS = {
    "fk": _handle_fk,
    "ik": _handle_ik,
    "jacobian": _handle_jacobian,
    "workspace": _handle_workspace,
    "reach": _handle_reach,
    "capstan": _handle_capstan,
    "torque-table": _handle_torque_table,
    "resolution": _handle_resolution,
    "payload": _handle_payload,
    "repeat-sim": _handle_repeat_sim,
    "bom": _handle_bom,
}

_NEEDS_ARM = {name: name not in ("capstan", "bom") for name in SUBCOMMANDS}


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="armkit",
        description="Design and analysis toolkit for a 6-DoF cable/capstan "
                    "driven desktop arm.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                metavar="{" + ",".join(SUBCOMMANDS) + "}")

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.add_argument("--arm", metavar="PATH", default=None,
                        help="arm description YAML (default: "
                             f"${ENV_ARM_CONFIG} or the built-in arm)")
        sp.add_argument("--seed", type=int, default=0,
                        help="seed for stochastic steps (default 0)")
        sp.add_argument("--out", metavar="DIR", default=None,
                        help="write output files and manifest.json here "
                             "(default: stdout only)")
        sp.add_argument("--format", choices=("text", "csv", "svg"),
                        default="text",
                        help="artifact format when --out is given")
        return sp

    sp = add("fk", "forward kinematics of one joint vector")
    sp.add_argument("--q", required=True, metavar="D1,...,D6",
                    help="joint angles, degrees")

    sp = add("ik", "inverse kinematics to a position + roll/pitch/yaw target")
    sp.add_argument("--target", required=True, metavar="X,Y,Z",
                    help="tool position target, meters")
    sp.add_argument("--rpy", required=True, metavar="R,P,Y",
                    help="tool orientation target, ZYX roll/pitch/yaw degrees")
    sp.add_argument("--q0", default=None, metavar="D1,...,D6",
                    help="starting joint angles, degrees (default zeros)")
    sp.add_argument("--max-iters", type=int, default=200,
                    help="iterations per attempt (default 200)")
    sp.add_argument("--restarts", type=int, default=12,
                    help="seeded restarts after the first attempt (default 12)")

    sp = add("jacobian", "geometric Jacobian at one joint vector")
    sp.add_argument("--q", required=True, metavar="D1,...,D6",
                    help="joint angles, degrees")

    for name, help_ in (("workspace",
                         "sample the reachable workspace and report metrics"),
                        ("reach", "reach metrics of a workspace sweep")):
        sp = add(name, help_)
        sp.add_argument("--per-joint-steps", default="25,25,25,5,5,5",
                        metavar="N1,...,N6",
                        help="grid steps per joint (default 25,25,25,5,5,5 "
                             "= 1953125 samples)")
        sp.add_argument("--mode", choices=("grid", "quasi"), default="grid",
                        help="sampling mode (default grid)")
        sp.add_argument("--samples", type=int, default=None,
                        help="sample count for quasi mode")
        sp.add_argument("--shell-fraction", type=float,
                        default=kinematics.DEFAULT_SHELL_FRACTION,
                        help="outer-shell cut for the azimuth span "
                             "(default %(default)s)")

    sp = add("capstan", "capstan stage design numbers from diameters")
    sp.add_argument("--small-diameter", type=float, required=True,
                    metavar="MM", help="driven sheave diameter, mm")
    sp.add_argument("--large-diameter", type=float, required=True,
                    metavar="MM", help="output pulley diameter, mm")
    sp.add_argument("--mode", choices=("rotating", "stationary"),
                    default="rotating",
                    help="pulley rotates with the output (rotating) or is "
                         "fixed while the sheave orbits (stationary)")
    sp.add_argument("--cable-thickness", type=float, default=1.0,
                    metavar="MM", help="cable thickness, mm (default 1.0)")
    sp.add_argument("--tolerance", type=float, default=2.0, metavar="MM",
                    help="sheave height clearance, mm (default 2.0)")
    sp.add_argument("--output-range", type=float, default=360.0,
                    metavar="DEG",
                    help="output travel for the winding count (default 360)")

    add("torque-table", "per-joint reduction and torque budget table")
    add("resolution", "degrees per microstep for every joint")

    sp = add("payload", "static payload capacity against the torque budget")
    sp.add_argument("--policy", choices=("worst", "fixed"), default="worst",
                    help="worst-case sweep (default) or a fixed pose")
    sp.add_argument("--q", default=None, metavar="D1,...,D6",
                    help="pose for --policy fixed, degrees")
    sp.add_argument("--payload-kg", type=float, default=0.0,
                    help="payload for the fixed-pose load report (default 0)")
    sp.add_argument("--grid-deg", type=float, default=statics.SWEEP_GRID_DEG,
                    help="sweep grid pitch, degrees (default %(default)s)")
    sp.add_argument("--sweep-joints", default="2,3,5", metavar="J,...",
                    help="joints swept in the worst-case search "
                         "(default 2,3,5)")
    sp.add_argument("--limit-joints", default="1,2,3,4,5,6", metavar="J,...",
                    help="joints whose torque budgets constrain the answer "
                         "(default all six; 2,3 isolates the shoulder/elbow "
                         "budget as a diagnostic)")

    sp = add("repeat-sim", "Monte-Carlo repeatability experiment")
    sp.add_argument("--speeds", default="500,1000,1500,2000,2500",
                    metavar="S1,...", help="motor step rates, steps/s")
    sp.add_argument("--cycles", type=int, default=10,
                    help="motion cycles per speed (default 10)")
    sp.add_argument("--sigma0-mm", type=float, default=None,
                    help="jitter std at zero rate, mm (default: calibrated)")
    sp.add_argument("--k-mm-s-per-step", type=float, default=None,
                    help="jitter std slope, mm per step/s "
                         "(default: calibrated)")
    sp.add_argument("--payload-kg", type=float, default=0.0,
                    help="carried payload, kg (default 0)")
    sp.add_argument("--probe", choices=("x", "y", "z", "norm"), default="x",
                    help="deviation measurement axis (default x, like a "
                         "dial indicator; norm = 3D distance)")

    sp = add("bom", "bill-of-materials rollup")
    sp.add_argument("--file", default=None, metavar="PATH",
                    help="BOM CSV (default: the shipped parts list)")
    sp.add_argument("--batch", type=int, default=25,
                    help="arms the quantities cover (default 25)")

    return parser


# --------------------------------------------------------------------------
# entry points
# --------------------------------------------------------------------------

def run(argv: Optional[List[str]] = None) -> int:
    """Execute one CLI invocation; returns the exit code (never raises)."""
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else EXIT_CODES["usage"]

    try:
        if args.format == "svg" and args.subcommand not in _SVG_CAPABLE:
            raise CliUsageError(
                f"--format svg is only available for "
                f"{', '.join(_SVG_CAPABLE)}")
        arm = None
        arm_source = "n/a"
        if _NEEDS_ARM[args.subcommand]:
            arm, arm_source = resolve_arm(args.arm)
        out = _Outputs(args.out) if args.out else None
        text = _HANDLERS[args.subcommand](args, arm, out)
        sys.stdout.write(text)
        if out is not None:
            out.write_manifest(args.subcommand, arm_source, args.seed, argv)
        return EXIT_CODES["ok"]
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CODES["usage"]
    except ConfigError as exc:
        print(f"arm config error: {exc}", file=sys.stderr)
        return EXIT_CODES["config"]
    except BomDataError as exc:
        print(f"BOM data error: {exc}", file=sys.stderr)
        return EXIT_CODES["bom-data"]
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_CODES["resource"]
    except OutputError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_CODES["output"]
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_CODES["output"]
    except (ComputationError, ValueError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_CODES["computation"]


def replay(manifest_path, out_dir: Optional[str] = None) -> int:
    """Re-run a recorded manifest; identical inputs give identical bytes.

    Args:
        manifest_path: path to a ``manifest.json`` written by :func:`run`.
        out_dir: redirect outputs (defaults to the manifest's own --out).
    """
    with open(manifest_path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") != MANIFEST_SCHEMA:
        raise ConfigError(f"unrecognized manifest schema {doc.get('schema')!r}")
    argv = list(doc["argv"])
    if out_dir is not None:
        if "--out" in argv:
            argv[argv.index("--out") + 1] = str(out_dir)
        else:
            argv += ["--out", str(out_dir)]
    return run(argv)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
