"""Supercapacitor charge bookkeeping: ideal-capacitor integration (Q = C V),
time-to-voltage queries and the half-capacity metric."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError
from .power_stage import ChargingModel, ConstantCurrent, law_current

# Observed flat-top of the measured charge curves; the nominal setpoint is
# 1.8 V but the recorded curves level off near 1.9 V.
V_FULL_DEFAULT = 1.9


@dataclass(frozen=True)
class SupercapState:
    capacitance: float  # F
    v_rating: float  # V
    v_now: float = 0.0  # V
    leakage_current: float = 0.0  # A
    esr: float = 0.0  # ohm; reserved for pulse-load studies, unused here

    def __post_init__(self):
        if not (math.isfinite(self.capacitance) and self.capacitance > 0.0):
            raise DomainError(f"capacitance must be positive, got {self.capacitance!r}")
        if not (math.isfinite(self.v_rating) and self.v_rating > 0.0):
            raise DomainError(f"v_rating must be positive, got {self.v_rating!r}")
        if not (0.0 <= self.v_now <= self.v_rating):
            raise DomainError(
                f"v_now must lie in [0, {self.v_rating!r}], got {self.v_now!r}"
            )
        if self.leakage_current < 0.0 or self.esr < 0.0:
            raise DomainError("leakage_current and esr must be >= 0")


def step_charge(s: SupercapState, i_in: float, dt: float) -> SupercapState:
    """One forward-Euler charge step: dV = (i_in - leakage) dt / C.

    The voltage is clamped to [0, v_rating]; the rating is never exceeded no
    matter what the charging law does.
    """
    if dt <= 0.0:
        raise DomainError(f"dt must be positive, got {dt!r}")
    if i_in < 0.0:
        raise DomainError(f"i_in must be >= 0, got {i_in!r}")
    v = s.v_now + (i_in - s.leakage_current) * dt / s.capacitance
    v = min(max(v, 0.0), s.v_rating)
    return replace(s, v_now=v)


def _check_target(s: SupercapState, v_target: float, v_cutoff: float) -> None:
    if not math.isfinite(v_target) or v_target < s.v_now:
        raise DomainError(
            f"target voltage {v_target!r} must be finite and >= v_now {s.v_now!r}"
        )
    reachable = min(s.v_rating, v_cutoff)
    if v_target > reachable:
        raise DomainError(
            f"target {v_target!r} V is unreachable: charging stops at {reachable!r} V"
        )


def time_to_voltage(
    s: SupercapState,
    law: ChargingModel,
    v_target: float,
    v_cutoff: float = math.inf,
    dt: float = 1.0,
) -> float:
    """Seconds to charge from v_now to v_target under the given law.

    Constant current has the closed form t = C (v_target - v_now) / (i - leak);
    other laws are step-integrated with linear interpolation at the crossing.
    Returns inf when the net current cannot raise the voltage.  A target above
    min(v_rating, v_cutoff) is unreachable and raises.
    """
    _check_target(s, v_target, v_cutoff)
    if v_target == s.v_now:
        return 0.0
    if isinstance(law, ConstantCurrent):
        net = law.i_cc - s.leakage_current
        if net <= 0.0:
            return math.inf
        return s.capacitance * (v_target - s.v_now) / net
    return time_to_voltage_integrated(s, law, v_target, v_cutoff=v_cutoff, dt=dt)


def time_to_voltage_integrated(
    s: SupercapState,
    law: ChargingModel,
    v_target: float,
    v_cutoff: float = math.inf,
    dt: float = 1.0,
) -> float:
    """Step-integrated variant of `time_to_voltage`, usable with any law.

    Also serves as the independent cross-check of the constant-current closed
    form (agreement within 0.1% at dt = 1 s for the currents of interest).
    """
    _check_target(s, v_target, v_cutoff)
    if v_target == s.v_now:
        return 0.0
    state = s
    t = 0.0
    while True:
        i_in = 0.0 if state.v_now >= v_cutoff else law_current(law, state.v_now)
        nxt = step_charge(state, i_in, dt)
        if nxt.v_now <= state.v_now:
            return math.inf
        if nxt.v_now >= v_target:
            return t + dt * (v_target - state.v_now) / (nxt.v_now - state.v_now)
        state = nxt
        t += dt


def half_capacity_time(
    s: SupercapState,
    law: ChargingModel,
    v_full: float = V_FULL_DEFAULT,
    v_cutoff: float = math.inf,
    dt: float = 1.0,
) -> float:
    """Time to store half the charge held at the full-curve voltage.

    Q = C V is linear in V, so half charge means half of v_full; v_full
    defaults to the observed 1.9 V flat-top.  Requires a fully discharged
    starting state.
    """
    if s.v_now != 0.0:
        raise DomainError("half-capacity time is defined from a discharged cap")
    if v_full > s.v_rating:
        raise DomainError(f"v_full {v_full!r} exceeds the {s.v_rating!r} V rating")
    return time_to_voltage(s, law, 0.5 * v_full, v_cutoff=v_cutoff, dt=dt)
