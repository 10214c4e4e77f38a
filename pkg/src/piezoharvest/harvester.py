"""Lumped single-degree-of-freedom model of a base-excited piezoelectric
cantilever.

Mechanics
---------
The beam tip moves relative to its vibrating base like a damped SDOF
oscillator in the relative coordinate z = x_tip - y_base:

    z'' + 2 zeta w_n z' + w_n^2 z = -y_base''

For sinusoidal base motion y = Y sin(w t) the steady-state relative amplitude
is the classic base-excitation response

    |Z| = r^2 Y / sqrt((1 - r^2)^2 + (2 zeta r)^2),    r = w / w_n,

finite at resonance (|Z| = Y / (2 zeta) at r = 1).  Adding tip mass lowers the
natural frequency through the lumped-stiffness law
f_loaded = f_unloaded * sqrt(m_eff / (m_eff + m_tip)).

Electrical output
-----------------
Open-circuit electrode voltage is proportional to the relative tip
displacement (gain_v, V/m).  Measured output compresses noticeably as drive
amplitude grows, so the linear voltage passes through a soft saturation

    v = v_sat * tanh(v_lin / v_sat)

(v_sat = inf disables it) and is finally hard-clipped at the electrode
rating.  gain_v and v_sat are the two free parameters fitted by `calibrate`
from measured peak-to-peak voltages; masses and damping are not fitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import least_squares

from .errors import CalibrationError, ConfigurationError, DomainError
from .kinematics import Convention, Displacement, Frequency, VibrationProfile

# Default integration resolution: steps per drive period.
STEPS_PER_PERIOD = 200
# Coarsest acceptable resolution for the fixed-step integrator.
MIN_STEPS_PER_PERIOD = 50
# Transient is considered settled after this many damping time constants
# (envelope decays as exp(-zeta w_n t); 20 time constants ~ 2e-9 residual).
SETTLING_TIME_CONSTANTS = 20.0


@dataclass(frozen=True)
class HarvesterParams:
    """Electromechanical parameters of one cantilever harvester."""

    f_unloaded: float  # Hz, resonance of the bare beam (no tip mass)
    m_eff: float  # kg, effective modal mass of the bare beam
    m_tip: float  # kg, added tip mass (0 disables tuning)
    zeta: float  # damping ratio, 0 < zeta < 1
    gain_v: float  # V per m of relative tip displacement, open circuit
    v_sat: float  # V, soft-saturation amplitude; math.inf disables
    c_piezo: float  # F, electrode capacitance (carried for the power stage)
    v_rating: float  # V, absolute electrode voltage rating

    def __post_init__(self):
        if not (math.isfinite(self.f_unloaded) and self.f_unloaded > 0.0):
            raise DomainError(f"f_unloaded must be positive, got {self.f_unloaded!r}")
        if not (math.isfinite(self.m_eff) and self.m_eff > 0.0):
            raise DomainError(f"m_eff must be positive, got {self.m_eff!r}")
        if not (math.isfinite(self.m_tip) and self.m_tip >= 0.0):
            raise DomainError(f"m_tip must be >= 0, got {self.m_tip!r}")
        if not (0.0 < self.zeta < 1.0):
            raise DomainError(f"zeta must be in (0, 1), got {self.zeta!r}")
        if not (math.isfinite(self.gain_v) and self.gain_v > 0.0):
            raise DomainError(f"gain_v must be positive, got {self.gain_v!r}")
        if not self.v_sat > 0.0:  # inf allowed
            raise DomainError(f"v_sat must be positive, got {self.v_sat!r}")
        if not (math.isfinite(self.c_piezo) and self.c_piezo > 0.0):
            raise DomainError(f"c_piezo must be positive, got {self.c_piezo!r}")
        if not (math.isfinite(self.v_rating) and self.v_rating > 0.0):
            raise DomainError(f"v_rating must be positive, got {self.v_rating!r}")


@dataclass(frozen=True)
class PiezoWaveform:
    """Uniformly sampled voltage trace."""

    dt: float  # s
    samples: np.ndarray  # V

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise DomainError(f"dt must be positive, got {self.dt!r}")
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float))

    @property
    def duration(self) -> float:
        return (len(self.samples) - 1) * self.dt

    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) * self.dt


class OpenCircuitVpp(NamedTuple):
    vpp: float  # V peak-to-peak
    rating_clipped: bool  # True when the electrode rating truncated the output


def loaded_resonance(p: HarvesterParams) -> Frequency:
    """Resonance with the tip mass attached.

    f = f_unloaded * sqrt(m_eff / (m_eff + m_tip)); identity for m_tip = 0.
    """
    return Frequency(p.f_unloaded * math.sqrt(p.m_eff / (p.m_eff + p.m_tip)))


def steady_state_tip_displacement(p: HarvesterParams, base: VibrationProfile) -> Displacement:
    """Steady-state relative tip amplitude (zero-to-peak) for sinusoidal base motion."""
    r = base.frequency / loaded_resonance(p).hertz
    y_amp = base.base_displacement_amplitude
    mag = r * r / math.hypot(1.0 - r * r, 2.0 * p.zeta * r)
    return Displacement(mag * y_amp, Convention.AMPLITUDE)


def _saturate(v_linear: float, v_sat: float) -> float:
    if math.isinf(v_sat):
        return v_linear
    return v_sat * math.tanh(v_linear / v_sat)


def open_circuit_vpp(p: HarvesterParams, base: VibrationProfile) -> OpenCircuitVpp:
    """Open-circuit output voltage, peak-to-peak, for sinusoidal base motion.

    Linear gain, then soft saturation, then a hard clip at the electrode
    rating; the clip is reported via the flag.
    """
    v_linear = p.gain_v * steady_state_tip_displacement(p, base).value
    v_amp = _saturate(v_linear, p.v_sat)
    clipped = v_amp > p.v_rating
    return OpenCircuitVpp(2.0 * min(v_amp, p.v_rating), clipped)


def settling_time(p: HarvesterParams) -> float:
    """Time for the start-up transient to decay to numerical irrelevance, s."""
    omega_n = loaded_resonance(p).omega
    return SETTLING_TIME_CONSTANTS / (p.zeta * omega_n)


def simulate_waveform(
    p: HarvesterParams,
    base: VibrationProfile,
    duration: float,
    dt: float | None = None,
) -> PiezoWaveform:
    """Time-domain open-circuit voltage trace from a fixed-step RK4 integration.

    Integrates z'' + 2 zeta w_n z' + w_n^2 z = -y'' from rest and maps the
    relative displacement through the same saturation/clip chain as
    `open_circuit_vpp`.  After the transient has settled (see
    `settling_time`) the sampled peak-to-peak voltage matches the closed-form
    value within 1%; that agreement is this module's primary numerical check.

    dt defaults to 1/(200 f); anything coarser than 1/(50 f) is rejected.
    """
    if not (math.isfinite(duration) and duration > 0.0):
        raise DomainError(f"duration must be positive, got {duration!r}")
    f_drive = base.frequency
    if dt is None:
        dt = 1.0 / (STEPS_PER_PERIOD * f_drive)
    if dt <= 0.0 or not math.isfinite(dt):
        raise ConfigurationError(f"dt must be positive, got {dt!r}")
    if dt > 1.0 / (MIN_STEPS_PER_PERIOD * f_drive):
        raise ConfigurationError(
            f"dt = {dt:g} s is too coarse for {f_drive:g} Hz drive; "
            f"need dt <= {1.0 / (MIN_STEPS_PER_PERIOD * f_drive):g} s"
        )

    omega_n = loaded_resonance(p).omega
    omega_d = 2.0 * math.pi * f_drive
    y_amp = base.base_displacement_amplitude
    force = y_amp * omega_d * omega_d  # -y'' = Y w^2 sin(w t)
    two_zw = 2.0 * p.zeta * omega_n
    wn2 = omega_n * omega_n

    n_steps = int(round(duration / dt))
    zs = np.empty(n_steps + 1)
    zs[0] = 0.0
    z = 0.0
    v = 0.0
    t = 0.0
    sin = math.sin
    for k in range(1, n_steps + 1):
        a1 = force * sin(omega_d * t) - two_zw * v - wn2 * z
        z2 = z + 0.5 * dt * v
        v2 = v + 0.5 * dt * a1
        a2 = force * sin(omega_d * (t + 0.5 * dt)) - two_zw * v2 - wn2 * z2
        z3 = z + 0.5 * dt * v2
        v3 = v + 0.5 * dt * a2
        a3 = force * sin(omega_d * (t + 0.5 * dt)) - two_zw * v3 - wn2 * z3
        z4 = z + dt * v3
        v4 = v + dt * a3
        a4 = force * sin(omega_d * (t + dt)) - two_zw * v4 - wn2 * z4
        z += dt / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        t = k * dt
        zs[k] = z

    volts = p.gain_v * zs
    if math.isfinite(p.v_sat):
        volts = p.v_sat * np.tanh(volts / p.v_sat)
    np.clip(volts, -p.v_rating, p.v_rating, out=volts)
    return PiezoWaveform(dt, volts)


def settled_vpp(w: PiezoWaveform, settle_time: float) -> float:
    """Peak-to-peak voltage over the samples at t >= settle_time."""
    start = int(math.ceil(settle_time / w.dt))
    if start >= len(w.samples):
        raise ConfigurationError(
            f"settle_time {settle_time:g} s leaves no samples in a "
            f"{w.duration:g} s trace"
        )
    tail = w.samples[start:]
    return float(tail.max() - tail.min())


@dataclass(frozen=True)
class CalibrationResult:
    params: HarvesterParams
    residuals: tuple  # per-observation |model - measured| / measured
    max_residual: float


def calibrate(
    p0: HarvesterParams,
    observations: Sequence[tuple[VibrationProfile, float]],
    max_nfev: int = 200,
) -> CalibrationResult:
    """Fit gain_v (and v_sat, when identifiable) to measured Vpp observations.

    One observation fixes gain_v alone, leaving p0.v_sat in place (exact fit).
    Two or more observations fit (gain_v, v_sat) jointly by bounded least
    squares on relative errors.  Deterministic for fixed p0 and observations.
    Mechanical parameters (masses, damping) are never touched.
    """
    if len(observations) == 0:
        raise DomainError("calibration needs at least one observation")
    tip_amps = []
    target_amps = []
    for prof, vpp in observations:
        if not (math.isfinite(vpp) and vpp > 0.0):
            raise DomainError(f"measured Vpp must be positive, got {vpp!r}")
        z = steady_state_tip_displacement(p0, prof).value
        if z <= 0.0:
            raise DomainError("observation with zero base motion cannot constrain the fit")
        amp = 0.5 * vpp
        if amp >= p0.v_rating:
            raise DomainError(
                f"measured amplitude {amp:g} V is at or above the {p0.v_rating:g} V "
                "rating; the clipped model cannot reproduce it"
            )
        tip_amps.append(z)
        target_amps.append(amp)

    if len(observations) == 1:
        z, amp = tip_amps[0], target_amps[0]
        if math.isinf(p0.v_sat):
            gain = amp / z
        else:
            if amp >= p0.v_sat:
                raise CalibrationError(
                    f"measured amplitude {amp:g} V exceeds the fixed saturation "
                    f"{p0.v_sat:g} V",
                    best_residual=(amp - p0.v_sat) / amp,
                )
            gain = p0.v_sat * math.atanh(amp / p0.v_sat) / z
        fitted = replace(p0, gain_v=gain)
        residuals = _residuals(fitted, observations)
        return CalibrationResult(fitted, residuals, max(residuals))

    z_arr = np.asarray(tip_amps)
    a_arr = np.asarray(target_amps)

    def rel_errors(x):
        gain, sat = x
        return (sat * np.tanh(gain * z_arr / sat) - a_arr) / a_arr

    gain0 = p0.gain_v
    sat0 = p0.v_sat if math.isfinite(p0.v_sat) else 2.0 * float(a_arr.max())
    fit = least_squares(
        rel_errors,
        x0=[gain0, sat0],
        bounds=([1e-12, 1e-12], [np.inf, np.inf]),
        max_nfev=max_nfev,
    )
    best = float(np.max(np.abs(rel_errors(fit.x))))
    if not fit.success:
        raise CalibrationError(
            f"calibration did not converge within {max_nfev} evaluations "
            f"(best max residual {best:.3g})",
            best_residual=best,
        )
    fitted = replace(p0, gain_v=float(fit.x[0]), v_sat=float(fit.x[1]))
    residuals = _residuals(fitted, observations)
    return CalibrationResult(fitted, residuals, max(residuals))


def _residuals(p: HarvesterParams, observations) -> tuple:
    out = []
    for prof, vpp in observations:
        model = open_circuit_vpp(p, prof).vpp
        out.append(abs(model - vpp) / vpp)
    return tuple(out)
