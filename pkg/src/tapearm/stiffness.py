"""Bending-moment models for the back-to-back bistable tape pair.

Pinching flattens both tapes over a short region, turning each cross section
into a thin rectangle whose bending moment is linear in curvature. The
unpinched pair resists bending with a stiff ramp up to a peak moment, then
relaxes onto the fold-propagation plateau; the back-to-back arrangement makes
that curve odd-symmetric in the bending angle.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .model import DEFAULT_TAPE, TAPE_COUNT, TapeProperties

#: Reference pair calibration: the bench pair peaks at 0.654 N*m while the
#: pinched joint needs only 0.055 N*m at that same angle. The angle where the
#: peak occurs and the plateau fraction are configuration choices, not
#: measured values.
UNPINCHED_PEAK_MOMENT = 0.654
PINCHED_MOMENT_AT_PEAK = 0.055
DEFAULT_PEAK_ANGLE = math.radians(10.0)
DEFAULT_PROPAGATION_FRACTION = 0.1

MOMENT_CSV_HEADER = "theta_rad,moment_Nm"


class CalibrationError(ValueError):
    """Moment-curve fit failed or the data cannot constrain the model."""


@dataclass(frozen=True)
class FlattenedSection:
    """Rectangular cross section of a tape flattened by the pinch rollers.

    The flattened width equals the unrolled cross-section arc, so the second
    moment of area is (transverse_radius * subtended_angle) * t^3 / 12.
    """

    width: float            # m
    thickness: float        # m
    elastic_modulus: float  # Pa

    def __post_init__(self):
        if not (self.width > 0 and self.thickness > 0 and self.elastic_modulus > 0):
            raise ValueError("FlattenedSection dimensions and modulus must be positive")

    @classmethod
    def from_tape(cls, tape: TapeProperties) -> "FlattenedSection":
        return cls(width=tape.transverse_radius * tape.subtended_angle,
                   thickness=tape.thickness,
                   elastic_modulus=tape.elastic_modulus)

    @property
    def second_moment(self) -> float:
        """Second moment of area of the flattened rectangle, m^4."""
        return self.width * self.thickness ** 3 / 12.0


@dataclass(frozen=True)
class PinchJointModel:
    """Pinched tapes as a torsional spring over the flattened bend region.

    The bend angle distributes over the flattened length, kappa = theta / Lp,
    so the joint moment is tape_count * E * I * theta / Lp.
    """

    section: FlattenedSection
    bend_region_length: float = 0.01  # m, roller contact scale
    tape_count: int = TAPE_COUNT

    def __post_init__(self):
        if not self.bend_region_length > 0:
            raise ValueError("bend_region_length must be positive")
        if self.tape_count < 1:
            raise ValueError("tape_count must be at least 1")

    @property
    def stiffness(self) -> float:
        """Torsional stiffness k = tape_count * E * I / Lp, N*m/rad."""
        return (self.tape_count * self.section.elastic_modulus *
                self.section.second_moment / self.bend_region_length)

    @classmethod
    def calibrated(cls, section: FlattenedSection, reference_angle: float,
                   reference_moment: float, tape_count: int = TAPE_COUNT) -> "PinchJointModel":
        """Solve the bend-region length so moment(reference_angle) == reference_moment."""
        if not (reference_angle > 0 and reference_moment > 0):
            raise ValueError("reference angle and moment must be positive")
        lp = (tape_count * section.elastic_modulus * section.second_moment *
              reference_angle / reference_moment)
        return cls(section=section, bend_region_length=lp, tape_count=tape_count)

    def moment(self, theta: float) -> float:
        return self.stiffness * theta


@dataclass(frozen=True)
class UnpinchedPairModel:
    """Odd moment-angle curve of the unpinched back-to-back pair.

    Linear ramp from the origin to (peak_angle, peak_moment), then an
    exponential relaxation onto the propagation plateau with angular scale
    ``decay_angle``. The ramp slope is peak_moment / peak_angle so the curve
    is continuous at the peak, which is its single positive-side maximum.
    """

    peak_moment: float             # N*m
    peak_angle: float              # rad
    propagation_moment: float      # N*m, post-fold plateau
    decay_angle: float | None = None  # rad, relaxation scale; peak_angle when omitted

    def __post_init__(self):
        if self.decay_angle is None:
            object.__setattr__(self, "decay_angle", self.peak_angle)
        if not self.peak_angle > 0:
            raise ValueError("peak_angle must be positive")
        if not 0.0 < self.propagation_moment < self.peak_moment:
            raise ValueError("need 0 < propagation_moment < peak_moment")
        if not self.decay_angle > 0:
            raise ValueError("decay_angle must be positive")

    @property
    def pre_peak_stiffness(self) -> float:
        """Ramp slope, N*m/rad."""
        return self.peak_moment / self.peak_angle

    def moment(self, theta: float) -> float:
        magnitude = abs(theta)
        if magnitude <= self.peak_angle:
            value = self.pre_peak_stiffness * magnitude
        else:
            value = (self.propagation_moment +
                     (self.peak_moment - self.propagation_moment) *
                     math.exp(-(magnitude - self.peak_angle) / self.decay_angle))
        return math.copysign(value, theta)


@dataclass(frozen=True)
class SingleTapeModel:
    """One tape with independent peak/plateau parameters per bending sense.

    Positive angles follow the opposite-sense branch (stiff peak, then a fold
    forms), negative angles the compliant equal-sense branch. The symmetric
    pair model is the special case of equal branches.
    """

    opposite_sense: UnpinchedPairModel
    equal_sense: UnpinchedPairModel

    def moment(self, theta: float) -> float:
        branch = self.opposite_sense if theta >= 0 else self.equal_sense
        return branch.moment(theta)


def flattened_moment(section: FlattenedSection, kappa: float) -> float:
    """Moment of one flattened tape at longitudinal curvature kappa: E I kappa."""
    return section.elastic_modulus * section.second_moment * kappa


def pinched_joint_moment(model: PinchJointModel, theta: float) -> float:
    """Joint moment of the pinched pair at bend angle theta; odd and linear."""
    return model.moment(theta)


def unpinched_pair_moment(model: UnpinchedPairModel, theta: float) -> float:
    """Moment of the unpinched pair at bend angle theta."""
    return model.moment(theta)


def peak_ratio(pinched: PinchJointModel, unpinched: UnpinchedPairModel,
               theta_ref: float) -> float:
    """Pinched moment at theta_ref over the unpinched curve's maximum."""
    if not theta_ref > 0:
        raise ValueError("theta_ref must be positive")
    return pinched.moment(theta_ref) / unpinched.peak_moment


def moment_angle_curve(model, theta_min: float, theta_max: float, n: int) -> np.ndarray:
    """Sample (theta, moment) at n evenly spaced angles; returns shape (n, 2)."""
    if n < 2:
        raise ValueError("need at least 2 samples")
    thetas = np.linspace(theta_min, theta_max, n)
    return np.column_stack([thetas, [model.moment(t) for t in thetas]])


def write_moment_csv(path, samples) -> None:
    """Write a (theta, moment) table with the standard two-column header."""
    with open(path, "w", newline="") as fh:
        fh.write(MOMENT_CSV_HEADER + "\n")
        for theta, moment in samples:
            fh.write(f"{float(theta)!r},{float(moment)!r}\n")


def read_moment_csv(path) -> np.ndarray:
    """Read a table written by write_moment_csv; returns shape (n, 2)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != MOMENT_CSV_HEADER.split(","):
            raise ValueError(f"unexpected header {header!r}")
        rows = [(float(theta), float(moment)) for theta, moment in reader]
    return np.array(rows)


@dataclass(frozen=True)
class CalibrationResult:
    """Fitted pair model plus the residual norm of the fit."""

    model: UnpinchedPairModel
    residual_norm: float  # N*m, sqrt of the squared-residual sum


def _design_matrix(angles: np.ndarray, peak_angle: float, decay_angle: float) -> np.ndarray:
    """Basis for the two linear coefficients (peak and plateau moments)."""
    ramp = angles <= peak_angle
    exponent = np.where(ramp, 0.0, -(angles - peak_angle) / decay_angle)
    decay = np.exp(exponent)
    phi_peak = np.where(ramp, angles / peak_angle, decay)
    phi_prop = np.where(ramp, 0.0, 1.0 - decay)
    return np.column_stack([phi_peak, phi_prop])


def calibrate_unpinched(samples) -> CalibrationResult:
    """Least-squares fit of the odd pair model to (angle, moment) samples.

    Samples may cover both signs; odd symmetry folds them onto the positive
    half-axis. The fit separates the two linear coefficients (solved exactly
    per candidate shape) from the two nonlinear shape parameters (peak and
    decay angles, optimized in log space from several starts).

    Raises CalibrationError for degenerate data: fewer than 4 samples, all
    samples at one angle, or no sample past the torque peak.
    """
    points = [(float(a), float(m)) for a, m in samples]
    if len(points) < 4:
        raise CalibrationError(f"need at least 4 samples, got {len(points)}")
    angles = np.array([abs(a) for a, _ in points])
    moments = np.array([m if a >= 0 else -m for a, m in points])
    if np.ptp(angles) == 0.0:
        raise CalibrationError("all samples share one angle; the curve shape is unconstrained")
    peak_guess = float(angles[int(np.argmax(moments))])
    if peak_guess >= float(np.max(angles)):
        raise CalibrationError("no sample past the torque peak; the plateau is unconstrained")
    if peak_guess <= 0.0:
        raise CalibrationError("torque peak at zero angle; the ramp is unconstrained")

    def solve_linear(peak_angle, decay_angle):
        design = _design_matrix(angles, peak_angle, decay_angle)
        coeffs, *_ = np.linalg.lstsq(design, moments, rcond=None)
        return coeffs, design @ coeffs - moments

    def residuals(u):
        return solve_linear(math.exp(u[0]), math.exp(u[1]))[1]

    best = None
    for decay_guess in (0.5 * peak_guess, peak_guess, 2.0 * peak_guess):
        fit = least_squares(residuals, np.log([peak_guess, decay_guess]),
                            method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if best is None or fit.cost < best.cost:
            best = fit
    peak_angle = math.exp(best.x[0])
    decay_angle = math.exp(best.x[1])
    coeffs, residual = solve_linear(peak_angle, decay_angle)
    peak_moment, propagation_moment = float(coeffs[0]), float(coeffs[1])
    if not (math.isfinite(peak_moment) and math.isfinite(propagation_moment)
            and 0.0 < propagation_moment < peak_moment):
        raise CalibrationError("fit converged to a degenerate model "
                               f"(peak={peak_moment:.6g}, plateau={propagation_moment:.6g})")
    model = UnpinchedPairModel(peak_moment=peak_moment, peak_angle=peak_angle,
                               propagation_moment=propagation_moment,
                               decay_angle=decay_angle)
    return CalibrationResult(model=model, residual_norm=float(np.linalg.norm(residual)))


def default_models(tape: TapeProperties = DEFAULT_TAPE) -> tuple[PinchJointModel, UnpinchedPairModel]:
    """Pinched and unpinched pair models anchored to the reference bench pair.

    Both models produce their anchor moments at DEFAULT_PEAK_ANGLE: the
    unpinched curve peaks at 0.654 N*m there, and the pinched joint's bend
    region is sized so it needs 0.055 N*m at the same angle.
    """
    section = FlattenedSection.from_tape(tape)
    pinched = PinchJointModel.calibrated(section, DEFAULT_PEAK_ANGLE, PINCHED_MOMENT_AT_PEAK)
    unpinched = UnpinchedPairModel(
        peak_moment=UNPINCHED_PEAK_MOMENT,
        peak_angle=DEFAULT_PEAK_ANGLE,
        propagation_moment=DEFAULT_PROPAGATION_FRACTION * UNPINCHED_PEAK_MOMENT,
    )
    return pinched, unpinched
