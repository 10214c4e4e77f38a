"""Scenario, observation and parameter files (TOML) and charge-curve CSV.

Scenario file layout, all values SI unless the key carries one of the
convenience suffixes (_mm for millimeters, _g for g-units on accelerations and
grams on masses, _ua for microamps, _kohm for kiloohms):

    name = "A"

    [profile]
    frequency = 23.5                 # Hz
    base_displacement_pp_mm = 0.210  # or base_acceleration_pp_g = 0.52

    [harvester]
    f_unloaded = 178.0
    m_eff_g = 0.30156512242324957
    m_tip_g = 17.0
    zeta = 0.05
    gain_v = 15623.296619654924
    v_sat = 13.52957816078483        # inf disables the soft saturation
    c_piezo = 1.9e-7
    v_rating = 120.0

    [power_stage]
    v_shunt_clamp = 20.0
    v_out_setpoint = 1.8
    v_out_band = [1.71, 1.89]
    diode_drop = 0.3

    [power_stage.charging]
    model = "constant_current"       # or "constant_power"
    i_cc_ua = 168.22429906542055     # constant_current
    # p_in = 3.8e-4                  # constant_power, with efficiency, v_floor

    [load]
    kind = "supercapacitor"          # or "resistor" / "duty_cycled"

    [load.supercapacitor]
    capacitance = 1.2
    v_rating = 2.7
    v_initial = 0.0
    leakage_current_ua = 0.0
    esr = 0.0

    [sim]
    duration = 16200.0
    dt = 1.0
    record_interval = 10.0

Exactly one of base_displacement_pp / base_acceleration_pp may be given (the
other is derived).  Unknown keys are an error; parsing collects every problem
before failing so a bad file is reported in one pass.

Observation files for calibration hold repeated [[observation]] tables with
frequency, one base magnitude and the measured vpp.

Curve CSV: header `t_s,v_cap_V,i_out_A,p_out_W`, one row per record interval,
plain decimal-point formatting.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import DomainError, ValidationError
from .harvester import HarvesterParams
from .kinematics import STANDARD_GRAVITY, VibrationProfile
from .power_stage import ConstantCurrent, ConstantPower, PowerStageParams
from .scenario import (
    ChargeCurve,
    DutyCycledLoad,
    ResistorLoad,
    Scenario,
    SimConfig,
    SupercapacitorLoad,
)
from .storage import SupercapState

CSV_HEADER = ("t_s", "v_cap_V", "i_out_A", "p_out_W")

# canonical field -> accepted keys with their SI multipliers
_MM = 1e-3
_GRAM = 1e-3
_UA = 1e-6
_KOHM = 1e3

_PROFILE_KEYS = {
    "frequency": {"frequency": 1.0},
    "base_displacement_pp": {"base_displacement_pp": 1.0, "base_displacement_pp_mm": _MM},
    "base_acceleration_pp": {
        "base_acceleration_pp": 1.0,
        "base_acceleration_pp_g": STANDARD_GRAVITY,
    },
}

_HARVESTER_KEYS = {
    "f_unloaded": {"f_unloaded": 1.0},
    "m_eff": {"m_eff": 1.0, "m_eff_g": _GRAM},
    "m_tip": {"m_tip": 1.0, "m_tip_g": _GRAM},
    "zeta": {"zeta": 1.0},
    "gain_v": {"gain_v": 1.0},
    "v_sat": {"v_sat": 1.0},
    "c_piezo": {"c_piezo": 1.0},
    "v_rating": {"v_rating": 1.0},
}

_POWER_KEYS = {
    "v_shunt_clamp": {"v_shunt_clamp": 1.0},
    "v_out_setpoint": {"v_out_setpoint": 1.0},
    "diode_drop": {"diode_drop": 1.0},
}

_CHARGING_KEYS = {
    "i_cc": {"i_cc": 1.0, "i_cc_ua": _UA},
    "p_in": {"p_in": 1.0},
    "efficiency": {"efficiency": 1.0},
    "v_floor": {"v_floor": 1.0},
}

_SUPERCAP_KEYS = {
    "capacitance": {"capacitance": 1.0},
    "v_rating": {"v_rating": 1.0},
    "v_initial": {"v_initial": 1.0},
    "leakage_current": {"leakage_current": 1.0, "leakage_current_ua": _UA},
    "esr": {"esr": 1.0},
}

_RESISTOR_KEYS = {
    "resistance": {"resistance": 1.0, "resistance_kohm": _KOHM},
}

_DUTY_KEYS = {
    "active_current": {"active_current": 1.0, "active_current_ua": _UA},
    "idle_current": {"idle_current": 1.0, "idle_current_ua": _UA},
    "period": {"period": 1.0},
    "duty": {"duty": 1.0},
}

_SIM_KEYS = {
    "duration": {"duration": 1.0},
    "dt": {"dt": 1.0},
    "record_interval": {"record_interval": 1.0},
}


class _SectionReader:
    """Pulls typed values out of one TOML table, tracking problems and
    rejecting unknown or doubly-specified keys."""

    def __init__(self, name: str, table: dict, problems: list):
        self.name = name
        self.table = dict(table)
        self.problems = problems

    def number(self, canonical: str, variants: dict, required: bool = True):
        hits = [k for k in variants if k in self.table]
        if len(hits) > 1:
            self.problems.append(
                f"[{self.name}] {canonical} given more than once ({', '.join(hits)})"
            )
            for k in hits:
                self.table.pop(k)
            return None
        if not hits:
            if required:
                self.problems.append(f"[{self.name}] missing {canonical}")
            return None
        key = hits[0]
        raw = self.table.pop(key)
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            self.problems.append(f"[{self.name}] {key} must be a number, got {raw!r}")
            return None
        return float(raw) * variants[key]

    def string(self, key: str, required: bool = True):
        if key not in self.table:
            if required:
                self.problems.append(f"[{self.name}] missing {key}")
            return None
        raw = self.table.pop(key)
        if not isinstance(raw, str):
            self.problems.append(f"[{self.name}] {key} must be a string, got {raw!r}")
            return None
        return raw

    def pair(self, key: str):
        if key not in self.table:
            self.problems.append(f"[{self.name}] missing {key}")
            return None
        raw = self.table.pop(key)
        if (
            not isinstance(raw, list)
            or len(raw) != 2
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in raw)
        ):
            self.problems.append(f"[{self.name}] {key} must be a pair of numbers")
            return None
        return (float(raw[0]), float(raw[1]))

    def subtable(self, key: str):
        raw = self.table.pop(key, None)
        if raw is None:
            return None
        if not isinstance(raw, dict):
            self.problems.append(f"[{self.name}] {key} must be a table")
            return None
        return raw

    def finish(self):
        for key in self.table:
            self.problems.append(f"[{self.name}] unknown key {key!r}")


def _build(problems: list, ctor, /, **kwargs):
    if problems or any(v is None for v in kwargs.values()):
        return None
    try:
        return ctor(**kwargs)
    except DomainError as exc:
        problems.append(str(exc))
        return None


def _parse_profile(table: dict, problems: list) -> Optional[VibrationProfile]:
    sec = _SectionReader("profile", table, problems)
    freq = sec.number("frequency", _PROFILE_KEYS["frequency"])
    disp = sec.number("base_displacement_pp", _PROFILE_KEYS["base_displacement_pp"], required=False)
    accel = sec.number(
        "base_acceleration_pp", _PROFILE_KEYS["base_acceleration_pp"], required=False
    )
    sec.finish()
    if disp is None and accel is None:
        problems.append("[profile] needs base_displacement_pp or base_acceleration_pp")
        return None
    if disp is not None and accel is not None:
        problems.append(
            "[profile] give exactly one of base_displacement_pp / "
            "base_acceleration_pp; the other is derived"
        )
        return None
    if problems or freq is None:
        return None
    try:
        if disp is not None:
            return VibrationProfile.from_displacement_pp(freq, disp)
        return VibrationProfile.from_acceleration_pp(freq, accel)
    except DomainError as exc:
        problems.append(f"[profile] {exc}")
        return None


def _parse_harvester(table: dict, problems: list) -> Optional[HarvesterParams]:
    sec = _SectionReader("harvester", table, problems)
    kwargs = {name: sec.number(name, variants) for name, variants in _HARVESTER_KEYS.items()}
    sec.finish()
    return _build(problems, HarvesterParams, **kwargs)


def _parse_power_stage(table: dict, problems: list) -> Optional[PowerStageParams]:
    sec = _SectionReader("power_stage", table, problems)
    clamp = sec.number("v_shunt_clamp", _POWER_KEYS["v_shunt_clamp"])
    setpoint = sec.number("v_out_setpoint", _POWER_KEYS["v_out_setpoint"])
    band = sec.pair("v_out_band")
    drop = sec.number("diode_drop", _POWER_KEYS["diode_drop"])
    charging_tbl = sec.subtable("charging")
    sec.finish()
    if charging_tbl is None:
        problems.append("[power_stage] missing [power_stage.charging]")
        return None
    charging = _parse_charging(charging_tbl, problems)
    if problems or None in (clamp, setpoint, band, drop, charging):
        return None
    try:
        return PowerStageParams(
            v_shunt_clamp=clamp,
            v_out_setpoint=setpoint,
            v_out_band=band,
            charging=charging,
            diode_drop=drop,
        )
    except DomainError as exc:
        problems.append(f"[power_stage] {exc}")
        return None


def _parse_charging(table: dict, problems: list):
    sec = _SectionReader("power_stage.charging", table, problems)
    model = sec.string("model")
    if model == "constant_current":
        i_cc = sec.number("i_cc", _CHARGING_KEYS["i_cc"])
        sec.finish()
        return _build(problems, ConstantCurrent, i_cc=i_cc)
    if model == "constant_power":
        p_in = sec.number("p_in", _CHARGING_KEYS["p_in"])
        eff = sec.number("efficiency", _CHARGING_KEYS["efficiency"], required=False)
        v_floor = sec.number("v_floor", _CHARGING_KEYS["v_floor"], required=False)
        sec.finish()
        kwargs = {"p_in": p_in}
        if eff is not None:
            kwargs["efficiency"] = eff
        if v_floor is not None:
            kwargs["v_floor"] = v_floor
        if problems or p_in is None:
            return None
        return _build(problems, ConstantPower, **kwargs)
    if model is not None:
        problems.append(f"[power_stage.charging] unknown model {model!r}")
    return None


def _parse_load(table: dict, problems: list):
    sec = _SectionReader("load", table, problems)
    kind = sec.string("kind")
    sub = {k: sec.subtable(k) for k in ("supercapacitor", "resistor", "duty_cycled")}
    sec.finish()
    given = [k for k, v in sub.items() if v is not None]
    if kind is None:
        return None
    if kind not in sub:
        problems.append(f"[load] unknown kind {kind!r}")
        return None
    if given and given != [kind]:
        problems.append(f"[load] kind is {kind!r} but sections {given} were given")
        return None
    detail = sub[kind] or {}
    if kind == "resistor":
        rsec = _SectionReader("load.resistor", detail, problems)
        ohms = rsec.number("resistance", _RESISTOR_KEYS["resistance"])
        rsec.finish()
        return _build(problems, ResistorLoad, resistance=ohms)
    if kind == "duty_cycled":
        dsec = _SectionReader("load.duty_cycled", detail, problems)
        kwargs = {name: dsec.number(name, variants) for name, variants in _DUTY_KEYS.items()}
        dsec.finish()
        return _build(problems, DutyCycledLoad, **kwargs)
    csec = _SectionReader("load.supercapacitor", detail, problems)
    cap = csec.number("capacitance", _SUPERCAP_KEYS["capacitance"])
    v_rating = csec.number("v_rating", _SUPERCAP_KEYS["v_rating"])
    v_initial = csec.number("v_initial", _SUPERCAP_KEYS["v_initial"], required=False)
    leak = csec.number("leakage_current", _SUPERCAP_KEYS["leakage_current"], required=False)
    esr = csec.number("esr", _SUPERCAP_KEYS["esr"], required=False)
    csec.finish()
    state = _build(
        problems,
        SupercapState,
        capacitance=cap,
        v_rating=v_rating,
        v_now=0.0 if v_initial is None else v_initial,
        leakage_current=0.0 if leak is None else leak,
        esr=0.0 if esr is None else esr,
    )
    return None if state is None else SupercapacitorLoad(state)


def _parse_sim(table: dict, problems: list) -> Optional[SimConfig]:
    sec = _SectionReader("sim", table, problems)
    duration = sec.number("duration", _SIM_KEYS["duration"])
    dt = sec.number("dt", _SIM_KEYS["dt"], required=False)
    rec = sec.number("record_interval", _SIM_KEYS["record_interval"], required=False)
    sec.finish()
    if problems or duration is None:
        return None
    kwargs = {"duration": duration}
    if dt is not None:
        kwargs["dt"] = dt
    if rec is not None:
        kwargs["record_interval"] = rec
    return SimConfig(**kwargs)


def scenario_from_dict(doc: dict) -> Scenario:
    """Build a scenario from parsed TOML, reporting every problem at once."""
    problems: list = []
    doc = dict(doc)
    name = doc.pop("name", None)
    if not isinstance(name, str) or not name:
        problems.append("top level: missing or empty name")
    sections = {}
    for key, parser in (
        ("profile", _parse_profile),
        ("harvester", _parse_harvester),
        ("power_stage", _parse_power_stage),
        ("load", _parse_load),
        ("sim", _parse_sim),
    ):
        table = doc.pop(key, None)
        if not isinstance(table, dict):
            problems.append(f"missing [{key}] section")
            sections[key] = None
        else:
            sections[key] = parser(table, problems)
    for key in doc:
        problems.append(f"top level: unknown key {key!r}")
    if problems:
        raise ValidationError(problems)
    return Scenario(
        name=name,
        profile=sections["profile"],
        harvester=sections["harvester"],
        power_stage=sections["power_stage"],
        load=sections["load"],
        sim=sections["sim"],
    )


def load_scenario(path) -> Scenario:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    return scenario_from_dict(doc)


def load_observations(path) -> list:
    """Read [(VibrationProfile, measured_vpp), ...] from an observation file.

    An otherwise valid file with no [[observation]] entries yields an empty
    list; callers decide whether that is acceptable.
    """
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    problems: list = []
    rows = doc.pop("observation", [])
    for key in doc:
        problems.append(f"top level: unknown key {key!r}")
    if not isinstance(rows, list):
        problems.append("[[observation]] entries are malformed")
        raise ValidationError(problems)
    out = []
    for idx, row in enumerate(rows, start=1):
        if not isinstance(row, dict):
            problems.append(f"observation {idx}: not a table")
            continue
        sec = _SectionReader(f"observation {idx}", row, problems)
        freq = sec.number("frequency", _PROFILE_KEYS["frequency"])
        disp = sec.number(
            "base_displacement_pp", _PROFILE_KEYS["base_displacement_pp"], required=False
        )
        accel = sec.number(
            "base_acceleration_pp", _PROFILE_KEYS["base_acceleration_pp"], required=False
        )
        vpp = sec.number("vpp", {"vpp": 1.0})
        sec.finish()
        if (disp is None) == (accel is None):
            problems.append(
                f"observation {idx}: give exactly one of base_displacement_pp / "
                "base_acceleration_pp"
            )
            continue
        if problems or freq is None or vpp is None:
            continue
        try:
            if disp is not None:
                prof = VibrationProfile.from_displacement_pp(freq, disp)
            else:
                prof = VibrationProfile.from_acceleration_pp(freq, accel)
        except DomainError as exc:
            problems.append(f"observation {idx}: {exc}")
            continue
        out.append((prof, vpp))
    if problems:
        raise ValidationError(problems)
    return out


def format_harvester_params(p: HarvesterParams) -> str:
    """Render harvester parameters as a [harvester] TOML table."""
    lines = ["[harvester]"]
    for f in (
        "f_unloaded",
        "m_eff",
        "m_tip",
        "zeta",
        "gain_v",
        "v_sat",
        "c_piezo",
        "v_rating",
    ):
        value = getattr(p, f)
        lines.append(f"{f} = {'inf' if math.isinf(value) else repr(value)}")
    return "\n".join(lines) + "\n"


def load_harvester_params(path) -> HarvesterParams:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    problems: list = []
    table = doc.pop("harvester", None)
    for key in doc:
        problems.append(f"top level: unknown key {key!r}")
    if not isinstance(table, dict):
        problems.append("missing [harvester] section")
        raise ValidationError(problems)
    params = _parse_harvester(table, problems)
    if problems:
        raise ValidationError(problems)
    return params


def format_curve_csv(curve: ChargeCurve) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for t, v, i, p in curve.rows():
        writer.writerow([f"{t:.10g}", f"{v:.10g}", f"{i:.10g}", f"{p:.10g}"])
    return buf.getvalue()


def write_curve_csv(curve: ChargeCurve, path) -> None:
    text = format_curve_csv(curve)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def read_curve_csv(path) -> ChargeCurve:
    """Load a curve written by write_curve_csv (rows only, no summary)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_HEADER:
            raise ValidationError([f"bad curve header {header!r}"])
        cols = [[], [], [], []]
        for row in reader:
            if len(row) != 4:
                raise ValidationError([f"bad curve row {row!r}"])
            for col, cell in zip(cols, row):
                col.append(float(cell))
    return ChargeCurve(*(np.array(c) for c in cols))
