"""Behavioral model of the rectifier/regulator board.

Full-wave rectification with two diode drops and a protective input shunt
clamp, a regulated low-voltage output with a setpoint tolerance band, and the
charging-current law that the regulator enforces into the storage element.
Switching ripple, quiescent draw and start-up behavior are deliberately not
modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .harvester import PiezoWaveform


@dataclass(frozen=True)
class ConstantCurrent:
    """Charge at a fixed current until the output band top is reached."""

    i_cc: float  # A

    def __post_init__(self):
        if not (math.isfinite(self.i_cc) and self.i_cc > 0.0):
            raise DomainError(f"i_cc must be positive, got {self.i_cc!r}")


@dataclass(frozen=True)
class ConstantPower:
    """Deliver a fixed input power; current rises as 1/v at low cap voltage,
    bounded by the v_floor divisor to keep the law finite near 0 V."""

    p_in: float  # W
    efficiency: float = 1.0
    v_floor: float = 0.3  # V

    def __post_init__(self):
        if not (math.isfinite(self.p_in) and self.p_in > 0.0):
            raise DomainError(f"p_in must be positive, got {self.p_in!r}")
        if not (0.0 < self.efficiency <= 1.0):
            raise DomainError(f"efficiency must be in (0, 1], got {self.efficiency!r}")
        if not (math.isfinite(self.v_floor) and self.v_floor > 0.0):
            raise DomainError(f"v_floor must be positive, got {self.v_floor!r}")


ChargingModel = Union[ConstantCurrent, ConstantPower]


@dataclass(frozen=True)
class PowerStageParams:
    v_shunt_clamp: float  # V, input protection threshold
    v_out_setpoint: float  # V
    v_out_band: tuple  # (V_lo, V_hi) around the setpoint
    charging: ChargingModel
    diode_drop: float = 0.3  # V per bridge leg

    def __post_init__(self):
        lo, hi = self.v_out_band
        if not (lo <= self.v_out_setpoint <= hi):
            raise DomainError(
                f"setpoint {self.v_out_setpoint!r} outside band [{lo!r}, {hi!r}]"
            )
        if not self.v_shunt_clamp > self.v_out_setpoint:
            raise DomainError("shunt clamp must sit above the output setpoint")
        if self.diode_drop < 0.0:
            raise DomainError(f"diode_drop must be >= 0, got {self.diode_drop!r}")
        if not isinstance(self.charging, (ConstantCurrent, ConstantPower)):
            raise DomainError(f"unknown charging model {self.charging!r}")

    @property
    def v_band_top(self) -> float:
        return self.v_out_band[1]


def rectify(w: PiezoWaveform, diode_drop: float, v_shunt_clamp: float) -> PiezoWaveform:
    """Full-wave rectification: |v| minus two diode drops, clamped by the shunt.

    Output samples are nonnegative and never exceed the clamp.
    """
    out = np.abs(w.samples) - 2.0 * diode_drop
    np.maximum(out, 0.0, out=out)
    np.minimum(out, v_shunt_clamp, out=out)
    return PiezoWaveform(w.dt, out)


def rectified_peak(vpp: float, diode_drop: float, v_shunt_clamp: float) -> float:
    """Peak of the rectified output for a sinusoid of the given Vpp."""
    return min(max(0.5 * vpp - 2.0 * diode_drop, 0.0), v_shunt_clamp)


def stable_output_current(v_out: float, r_load: float) -> float:
    """Ohm's law at the regulated output: I = V / R."""
    if not (math.isfinite(r_load) and r_load > 0.0):
        raise DomainError(f"load resistance must be positive, got {r_load!r}")
    return v_out / r_load


def output_power(v_out: float, r_load: float) -> float:
    """Power into a resistive load at the regulated output: P = V^2 / R."""
    if not (math.isfinite(r_load) and r_load > 0.0):
        raise DomainError(f"load resistance must be positive, got {r_load!r}")
    return v_out * v_out / r_load


def law_current(model: ChargingModel, v_cap: float) -> float:
    """Raw charging current of a law, before the band-top cutoff."""
    if isinstance(model, ConstantCurrent):
        return model.i_cc
    return model.efficiency * model.p_in / max(v_cap, model.v_floor)


def charging_current(v_cap: float, params: PowerStageParams) -> float:
    """Current pushed into the storage element at cap voltage v_cap.

    Zero at and above the output band top (the regulator stops charging);
    otherwise the configured law.  Nonnegative and nonincreasing in v_cap.
    """
    if v_cap < 0.0:
        raise DomainError(f"v_cap must be >= 0, got {v_cap!r}")
    if v_cap >= params.v_band_top:
        return 0.0
    return law_current(params.charging, v_cap)
