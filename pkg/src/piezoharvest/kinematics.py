"""Harmonic-motion arithmetic, magnitude conventions and the MIL-STD-167-1A
vibratory-displacement compliance check.

Everything is SI internally (m, m/s^2, m/s, Hz).  Sinusoid magnitudes carry an
explicit convention, zero-to-peak amplitude or peak-to-peak, as data.  Source
material in this domain freely mixes mm, g-units and Vpp, and silent factor-of-2
mistakes are the dominant failure mode, so the convention is never implied.

For simple harmonic motion at frequency F the magnitudes are linked by

    D = A / (2 pi F)^2        V = A / (2 pi F)

which hold in either convention as long as it is applied consistently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import DomainError

# m/s^2 per g-unit
STANDARD_GRAVITY = 9.80665


class Convention(Enum):
    """How a sinusoid magnitude is quoted."""

    AMPLITUDE = "amplitude"  # zero-to-peak
    PEAK_TO_PEAK = "peak_to_peak"


def _require_finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class Frequency:
    hertz: float

    def __post_init__(self):
        _require_finite("frequency", self.hertz)
        if self.hertz <= 0.0:
            raise DomainError(f"frequency must be positive, got {self.hertz!r} Hz")

    @property
    def omega(self) -> float:
        """Angular frequency, rad/s."""
        return 2.0 * math.pi * self.hertz


class _Magnitude:
    """Shared validation for nonnegative sinusoid magnitudes."""

    def __post_init__(self):
        _require_finite(type(self).__name__.lower(), self.value)
        if self.value < 0.0:
            raise DomainError(
                f"{type(self).__name__.lower()} magnitude must be >= 0, got {self.value!r}"
            )
        if not isinstance(self.convention, Convention):
            raise DomainError(f"bad convention {self.convention!r}")

    @classmethod
    def amplitude(cls, value: float):
        return cls(value, Convention.AMPLITUDE)

    @classmethod
    def peak_to_peak(cls, value: float):
        return cls(value, Convention.PEAK_TO_PEAK)


@dataclass(frozen=True)
class Acceleration(_Magnitude):
    value: float  # m/s^2
    convention: Convention = Convention.AMPLITUDE


@dataclass(frozen=True)
class Displacement(_Magnitude):
    value: float  # m
    convention: Convention = Convention.AMPLITUDE


@dataclass(frozen=True)
class Velocity(_Magnitude):
    value: float  # m/s
    convention: Convention = Convention.AMPLITUDE


def g_to_ms2(g_value: float) -> float:
    """Convert an acceleration in g-units to m/s^2 (1 g = 9.80665 m/s^2)."""
    _require_finite("acceleration", g_value)
    return g_value * STANDARD_GRAVITY


def displacement_from_acceleration(a: Acceleration, f: Frequency) -> Displacement:
    """D = A / (2 pi F)^2, preserving the input convention."""
    return Displacement(a.value / f.omega**2, a.convention)


def acceleration_from_displacement(d: Displacement, f: Frequency) -> Acceleration:
    """A = D * (2 pi F)^2, preserving the input convention."""
    return Acceleration(d.value * f.omega**2, d.convention)


def velocity_from_acceleration(a: Acceleration, f: Frequency) -> Velocity:
    """V = A / (2 pi F), preserving the input convention."""
    return Velocity(a.value / f.omega, a.convention)


def convert_convention(x, target: Convention):
    """Re-express a magnitude in the requested convention.

    peak-to-peak is exactly twice zero-to-peak, so the round trip is exact in
    floating point.  Identity when already in the target convention.
    """
    if x.convention is target:
        return x
    if target is Convention.PEAK_TO_PEAK:
        return replace(x, value=x.value * 2.0, convention=target)
    return replace(x, value=x.value / 2.0, convention=target)


class MilStdBand(Enum):
    """MIL-STD-167-1A environmental-vibration frequency bands."""

    BAND_4_15 = "4-15 Hz"
    BAND_16_25 = "16-25 Hz"
    BAND_26_33 = "26-33 Hz"
    OUT_OF_RANGE = "out of range"


# (f_low Hz, f_high Hz, single-amplitude limit m, band).  The published table
# lists integer ranges with gaps (15 -> 16, 25 -> 26); the standard covers a
# continuum, so the bands are treated as [4, 15], (15, 25], (25, 33] and every
# frequency in [4, 33] falls in exactly one band.
MIL_STD_167_LIMITS = (
    (4.0, 15.0, 0.762e-3, MilStdBand.BAND_4_15),
    (15.0, 25.0, 0.508e-3, MilStdBand.BAND_16_25),
    (25.0, 33.0, 0.254e-3, MilStdBand.BAND_26_33),
)


@dataclass(frozen=True)
class ComplianceVerdict:
    band: MilStdBand
    limit_single_amplitude: float | None  # m; None when out of range
    single_amplitude: float  # m, the checked motion as zero-to-peak
    compliant: bool


def mil_std_check(f: Frequency, d: Displacement) -> ComplianceVerdict:
    """Check a sinusoidal displacement against the MIL-STD-167-1A limits.

    The displacement is converted to single amplitude (zero-to-peak)
    internally.  A frequency outside [4, 33] Hz yields an out-of-range,
    non-compliant verdict rather than an error.
    """
    single = convert_convention(d, Convention.AMPLITUDE).value
    for f_low, f_high, limit, band in MIL_STD_167_LIMITS:
        if band is MilStdBand.BAND_4_15:
            inside = f_low <= f.hertz <= f_high
        else:
            inside = f_low < f.hertz <= f_high
        if inside:
            return ComplianceVerdict(band, limit, single, single <= limit)
    return ComplianceVerdict(MilStdBand.OUT_OF_RANGE, None, single, False)


@dataclass(frozen=True)
class VibrationProfile:
    """Sinusoidal base excitation.

    Exactly one magnitude (displacement or acceleration, both peak-to-peak) is
    given; the other is derived through D = A / (2 pi F)^2 so the pair is
    always consistent.  `given` records which one is primary so later edits
    (e.g. frequency sweeps) rederive the right companion.
    """

    frequency: float  # Hz
    base_displacement_pp: float  # m
    base_acceleration_pp: float  # m/s^2
    given: str  # "displacement" | "acceleration"
    waveform: str = "sinusoid"

    def __post_init__(self):
        if self.waveform != "sinusoid":
            raise DomainError(f"unsupported waveform {self.waveform!r}")
        if self.given not in ("displacement", "acceleration"):
            raise DomainError(f"bad primary magnitude {self.given!r}")
        f = Frequency(self.frequency)
        _require_finite("base displacement", self.base_displacement_pp)
        _require_finite("base acceleration", self.base_acceleration_pp)
        if self.base_displacement_pp < 0.0 or self.base_acceleration_pp < 0.0:
            raise DomainError("base motion magnitudes must be >= 0")
        derived = self.base_acceleration_pp / f.omega**2
        if abs(derived - self.base_displacement_pp) > 1e-9 * max(
            self.base_displacement_pp, derived, 1e-30
        ):
            raise DomainError(
                "displacement and acceleration are inconsistent with "
                "D = A / (2 pi F)^2; construct via from_displacement_pp or "
                "from_acceleration_pp"
            )

    @classmethod
    def from_displacement_pp(cls, frequency: float, displacement_pp: float) -> "VibrationProfile":
        d = Displacement.peak_to_peak(displacement_pp)
        a = acceleration_from_displacement(d, Frequency(frequency))
        return cls(frequency, displacement_pp, a.value, "displacement")

    @classmethod
    def from_acceleration_pp(cls, frequency: float, acceleration_pp: float) -> "VibrationProfile":
        a = Acceleration.peak_to_peak(acceleration_pp)
        d = displacement_from_acceleration(a, Frequency(frequency))
        return cls(frequency, d.value, acceleration_pp, "acceleration")

    @property
    def base_displacement_amplitude(self) -> float:
        """Zero-to-peak base displacement, m."""
        return 0.5 * self.base_displacement_pp

    def displacement(self) -> Displacement:
        return Displacement.peak_to_peak(self.base_displacement_pp)

    def compliance(self) -> ComplianceVerdict:
        return mil_std_check(Frequency(self.frequency), self.displacement())
