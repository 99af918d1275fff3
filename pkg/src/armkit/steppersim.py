"""Monte-Carlo simulation of microstepped motion cycles.

Models three effects on top of the rigid kinematics:

* quantization of every joint move to whole microsteps (with residue carry,
  so repeated legs do not accumulate rounding drift),
* missed steps when the gravity torque required at the commanded pose
  exceeds the motor's torque-speed-curve budget at the commanded rate,
* per-cycle positional jitter whose std grows affinely with step rate,
  sigma(v) = sigma0 + k*v, calibrated against bench measurements.

The jitter model is a calibration, not a physical claim: the default anchors
(0.286 mm at 500 steps/s, 0.587 mm at 2500 steps/s) come from dial-indicator
measurements of a real build and are used to pin sigma0 and k, so simulated
spreads at those rates are fitted, not independently predicted.

Deviations are measured as signed displacement along a fixed probe axis,
mimicking a dial indicator; pass ``probe=None`` for the full 3D norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import drivetrain, statics
from .errors import DegenerateFitError
from .kinematics import fk_frames
from .model import ArmDescription, limits_array

#: Measured (step rate, deviation std in meters) anchor points used to
#: calibrate the default noise model.
DEFAULT_CALIBRATION: Tuple[Tuple[float, float], ...] = (
    (500.0, 0.286e-3),
    (2500.0, 0.587e-3),
)

#: Step-rate ladder for the repeatability experiment (motor steps/s).
DEFAULT_SPEEDS: Tuple[float, ...] = (500.0, 1000.0, 1500.0, 2000.0, 2500.0)

#: Reference and excursion poses (radians) for the default out-and-back cycle.
DEFAULT_REFERENCE_Q = tuple(math.radians(v) for v in (0, 30, -30, 0, -30, 0))
DEFAULT_TARGET_Q = tuple(math.radians(v) for v in (25, 60, -60, 15, -60, 10))

#: Dial-indicator probe direction (base-frame +x).
DEFAULT_PROBE = (1.0, 0.0, 0.0)

MARGIN_RULES = ("proportional", "full_stall")


@dataclass(frozen=True)
class NoiseModel:
    """Affine step-rate noise plus the missed-step margin rule.

    ``sigma(v) = sigma0 + k * v`` is the std (meters) of the per-cycle
    positional jitter at motor step rate ``v``. ``margin_rule`` selects how
    torque overload converts to missed steps: ``"proportional"`` drops the
    deficit fraction of the leg's steps, ``"full_stall"`` drops the whole leg.
    """

    sigma0: float
    k: float
    margin_rule: str = "proportional"

    def __post_init__(self):
        if self.sigma0 < 0 or self.k < 0:
            raise ValueError("noise parameters must be non-negative")
        if self.margin_rule not in MARGIN_RULES:
            raise ValueError(f"margin_rule must be one of {MARGIN_RULES}")

    def sigma(self, rate: float) -> float:
        return self.sigma0 + self.k * rate


ZERO_NOISE = NoiseModel(sigma0=0.0, k=0.0)


def default_noise() -> NoiseModel:
    """Noise model calibrated to the default measurement anchors."""
    return calibrate_noise(DEFAULT_CALIBRATION)


@dataclass(frozen=True)
class MotionCycle:
    """Out-and-back joint trajectory.

    ``waypoints`` is a sequence of (joint target in radians, commanded motor
    step rate in steps/s) legs executed from ``reference``; when
    ``return_to_reference`` is set a final leg back to ``reference`` at the
    last commanded rate is appended.
    """

    reference: Tuple[float, ...]
    waypoints: Tuple[Tuple[Tuple[float, ...], float], ...]
    return_to_reference: bool = True

    def legs(self):
        """Expanded (target q, rate) legs including the return move."""
        out = [(np.asarray(q, dtype=float), float(rate))
               for q, rate in self.waypoints]
        if self.return_to_reference and out:
            out.append((np.asarray(self.reference, dtype=float), out[-1][1]))
        return out


def default_cycle(rate: float) -> MotionCycle:
    """Single-excursion cycle between the default reference/target poses."""
    return MotionCycle(reference=DEFAULT_REFERENCE_Q,
                       waypoints=((DEFAULT_TARGET_Q, float(rate)),),
                       return_to_reference=True)


@dataclass(frozen=True)
class CycleResult:
    deviation: float        # m, signed along the probe axis (or 3D norm)
    missed_steps: int       # whole microsteps dropped across all legs/joints
    final_q: np.ndarray     # achieved joint angles (radians)


@dataclass(frozen=True)
class RepeatabilityResult:
    speeds: Tuple[float, ...]
    deviations: Tuple[np.ndarray, ...]  # per speed, one deviation per cycle
    stds: np.ndarray                    # per speed, ddof=1 (m)
    grand_mean: float                   # mean |deviation| over all cycles (m)
    seed: int


def _validate_cycle(arm: ArmDescription, cycle: MotionCycle) -> None:
    lim = limits_array(arm)
    for q, rate in cycle.legs():
        if rate <= 0:
            raise ValueError("commanded step rates must be > 0")
        if q.shape != (6,):
            raise ValueError("cycle targets must have six joint angles")
        if np.any(q < lim[:, 0] - 1e-12) or np.any(q > lim[:, 1] + 1e-12):
            raise ValueError("cycle target outside joint limits")


def simulate_cycle(arm: ArmDescription,
                   cycle: MotionCycle,
                   payload: float = 0.0,
                   noise: NoiseModel = ZERO_NOISE,
                   seed=0,
                   probe: Optional[Sequence[float]] = DEFAULT_PROBE
                   ) -> CycleResult:
    """Execute one cycle and measure the end deviation from the reference.

    Each leg's joint moves are quantized to whole microsteps against a
    running per-joint step tally, so rounding residue carries between legs
    and the commanded total never drifts more than half a microstep from the
    exact trajectory. At each leg the gravity torque required at the leg
    target is compared to the torque available at the commanded rate;
    overloads drop whole microsteps per the margin rule, always against the
    direction of motion. The final pose's displacement from the reference
    pose is measured along ``probe`` (or as a 3D norm when ``probe`` is
    None) and a single seeded jitter draw at the last leg's rate is added.
    """
    _validate_cycle(arm, cycle)
    rng = np.random.default_rng(seed)

    micro = drivetrain.microstep_sizes(arm)  # rad per microstep, (6,)
    ref = np.asarray(cycle.reference, dtype=float)
    commanded = np.zeros(6, dtype=np.int64)  # whole microsteps from reference
    lost = np.zeros(6, dtype=np.int64)       # signed missed steps
    missed_total = 0
    legs = cycle.legs()

    for target, rate in legs:
        exact_total = (target - ref) / micro
        n_leg = np.rint(exact_total).astype(np.int64) - commanded
        commanded += n_leg

        required = np.abs(statics.gravity_torques(arm, target, payload))
        avail = np.array([
            drivetrain.available_joint_torque(arm.drive(j), rate)
            for j in range(1, 7)
        ])
        for j in range(6):
            steps = int(abs(n_leg[j]))
            if steps == 0 or required[j] <= avail[j]:
                continue
            if noise.margin_rule == "full_stall" or avail[j] <= 0:
                miss = steps
            else:
                deficit = 1.0 - avail[j] / required[j]
                miss = min(steps, int(math.ceil(steps * deficit)))
            missed_total += miss
            lost[j] += miss * (1 if n_leg[j] > 0 else -1)

    achieved = ref + micro * (commanded - lost)
    delta = fk_frames(arm, achieved)[6][:3, 3] - fk_frames(arm, ref)[6][:3, 3]

    sigma = noise.sigma(legs[-1][1]) if legs else 0.0
    if probe is not None:
        axis = np.asarray(probe, dtype=float)
        axis = axis / np.linalg.norm(axis)
        deviation = float(delta @ axis) + sigma * rng.standard_normal()
    else:
        jitter = sigma / math.sqrt(3.0) * rng.standard_normal(3)
        deviation = float(np.linalg.norm(delta + jitter))
    return CycleResult(deviation=deviation, missed_steps=missed_total,
                       final_q=achieved)


def repeatability_experiment(arm: ArmDescription,
                             speeds: Sequence[float] = DEFAULT_SPEEDS,
                             cycles_per_speed: int = 10,
                             noise: Optional[NoiseModel] = None,
                             seed: int = 0,
                             payload: float = 0.0,
                             cycle_factory=default_cycle,
                             probe: Optional[Sequence[float]] = DEFAULT_PROBE
                             ) -> RepeatabilityResult:
    """Seeded Monte-Carlo sweep of :func:`simulate_cycle` over a speed ladder.

    Every (speed, cycle) pair gets an independent child seed spawned from
    ``seed`` by index, so results are bit-identical regardless of execution
    order or worker count. Cycles restart from the reference pose each time
    (the quantization offset is therefore identical within a speed and the
    spread comes from the jitter model plus any missed steps).

    Args:
        speeds: motor step rates (steps/s); must be non-empty.
        cycles_per_speed: Monte-Carlo cycles per speed; must be >= 2 so the
            sample std is defined.
        noise: jitter model; defaults to the calibrated :func:`default_noise`.
        cycle_factory: maps a rate to the :class:`MotionCycle` to execute.
    """
    if len(speeds) == 0:
        raise ValueError("speeds must be non-empty")
    if cycles_per_speed < 2:
        raise ValueError("cycles_per_speed must be >= 2")
    if noise is None:
        noise = default_noise()

    all_devs = []
    for si, speed in enumerate(speeds):
        cyc = cycle_factory(speed)
        devs = np.empty(cycles_per_speed)
        for ci in range(cycles_per_speed):
            child = np.random.SeedSequence(entropy=seed, spawn_key=(si, ci))
            devs[ci] = simulate_cycle(arm, cyc, payload=payload, noise=noise,
                                      seed=child, probe=probe).deviation
        all_devs.append(devs)

    stds = np.array([np.std(d, ddof=1) for d in all_devs])
    grand = float(np.mean(np.abs(np.concatenate(all_devs))))
    return RepeatabilityResult(speeds=tuple(float(s) for s in speeds),
                               deviations=tuple(all_devs), stds=stds,
                               grand_mean=grand, seed=seed)


def calibrate_noise(samples: Sequence[Tuple[float, float]],
                    margin_rule: str = "proportional") -> NoiseModel:
    """Least-squares fit of ``sigma(v) = sigma0 + k*v`` to (rate, std) pairs.

    Args:
        samples: at least two (step rate, deviation std in meters) pairs.

    Raises:
        DegenerateFitError: fewer than two samples, or all rates equal, so
            the affine coefficients are not identifiable.

    Negative fitted coefficients (possible when the data trend downward) are
    clamped to zero to keep the model a valid std.
    """
    pts = [(float(v), float(s)) for v, s in samples]
    if len(pts) < 2:
        raise DegenerateFitError("need at least two (rate, std) samples")
    rates = np.array([p[0] for p in pts])
    stds = np.array([p[1] for p in pts])
    if np.ptp(rates) == 0.0:
        raise DegenerateFitError("all sample rates are equal; slope is "
                                 "unidentifiable")
    design = np.column_stack([np.ones_like(rates), rates])
    (sigma0, k), *_ = np.linalg.lstsq(design, stds, rcond=None)
    return NoiseModel(sigma0=max(float(sigma0), 0.0),
                      k=max(float(k), 0.0), margin_rule=margin_rule)


def result_to_csv(result: RepeatabilityResult) -> str:
    """CSV rows (speed, cycle index, deviation in mm) for export."""
    lines = ["speed_steps_per_s,cycle,deviation_mm"]
    for speed, devs in zip(result.speeds, result.deviations):
        for ci, d in enumerate(devs):
            lines.append(f"{speed!r},{ci},{float(d) * 1e3!r}")
    return "\n".join(lines) + "\n"
