"""Command-line front end.

Subcommands: simulate, sweep, comply, convert, calibrate, scenarios.
Exit codes: 0 success, 1 runtime/validation failure, 2 non-compliant,
3 out of the compliance table's range, 64 usage error.  All printed physical
values carry unit (and pp/amp convention) suffixes in their keys and are
rounded to 4 significant digits.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import (
    CalibrationError,
    ComparisonError,
    ConfigurationError,
    DomainError,
    ValidationError,
)
from .harvester import HarvesterParams, calibrate, open_circuit_vpp
from .kinematics import (
    Acceleration,
    Convention,
    Displacement,
    Frequency,
    MilStdBand,
    acceleration_from_displacement,
    displacement_from_acceleration,
    g_to_ms2,
    mil_std_check,
    velocity_from_acceleration,
)
from .scenario import (
    SCENARIO_REFERENCES,
    builtin_scenario,
    operating_point,
    run,
    sweep,
    with_charging_model,
)
from .scenario_io import (
    format_curve_csv,
    format_harvester_params,
    load_harvester_params,
    load_observations,
    load_scenario,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NONCOMPLIANT = 2
EXIT_OUT_OF_RANGE = 3
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with BSD-style usage exits instead of the default code 2."""

    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return f"{x:.4g}"


def _emit(pairs) -> None:
    for key, value in pairs:
        print(f"{key}: {value}")


def _conv_suffix(conv: Convention) -> str:
    return "pp" if conv is Convention.PEAK_TO_PEAK else "amp"


def _build_parser() -> _Parser:
    parser = _Parser(prog="piezoharvest", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario and print its summary")
    src = sim.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=["A", "B"], help="built-in scenario id")
    src.add_argument("--scenario", metavar="PATH", help="scenario TOML file")
    sim.add_argument("--out", metavar="CSV", help="write the charge curve here")
    sim.add_argument(
        "--model",
        choices=["constant_current", "constant_power"],
        help="override the charging law",
    )

    sw = sub.add_parser("sweep", help="rerun a scenario across parameter values")
    src = sw.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=["A", "B"])
    src.add_argument("--scenario", metavar="PATH")
    sw.add_argument("--param", required=True, metavar="DOTTED.PATH",
                    help="numeric scenario field, e.g. power_stage.charging.i_cc")
    sw.add_argument("--values", required=True,
                    help="comma-separated SI values, e.g. 168.2e-6,211.8e-6")
    sw.add_argument("--out", metavar="CSV", help="write the sweep table here")
    sw.add_argument("--model", choices=["constant_current", "constant_power"])

    comp = sub.add_parser("comply", help="check a motion against MIL-STD-167-1A")
    comp.add_argument("--freq", type=float, required=True, help="Hz")
    comp.add_argument("--disp", type=float, required=True, help="mm")
    comp.add_argument("--convention", choices=["pp", "amp"], default="pp")

    conv = sub.add_parser("convert", help="harmonic-motion unit conversions")
    conv.add_argument("--accel", metavar="VALUE[g|ms2]",
                      help="source acceleration, e.g. 0.52g or 5.1ms2 (default m/s^2)")
    conv.add_argument("--disp", metavar="VALUE[mm|m]",
                      help="source displacement, e.g. 0.405mm (default mm)")
    conv.add_argument("--freq", type=float, required=True, help="Hz")
    conv.add_argument("--to", dest="target", choices=["accel", "disp", "vel"],
                      required=True)
    conv.add_argument("--convention", choices=["pp", "amp"], default="pp")

    cal = sub.add_parser("calibrate", help="fit gain_v/v_sat to measured Vpp data")
    cal.add_argument("--observations", required=True, metavar="PATH")
    cal.add_argument("--out", metavar="PATH", help="write fitted [harvester] TOML here")
    cal.add_argument("--initial", metavar="PATH",
                     help="starting harvester parameters ([harvester] TOML)")

    sub.add_parser("scenarios", help="list the built-in scenarios")
    return parser


def _load_source_scenario(args):
    if args.builtin:
        s = builtin_scenario(args.builtin)
    else:
        s = load_scenario(args.scenario)
    if getattr(args, "model", None):
        s = with_charging_model(s, args.model)
    return s


def _minutes(seconds):
    return "unreached" if seconds is None else _fmt(seconds / 60.0)


def _cmd_simulate(args) -> int:
    s = _load_source_scenario(args)
    curve = run(s)
    op = operating_point(s)
    csv_text = format_curve_csv(curve)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(csv_text)
    summary = curve.summary
    _emit(
        [
            ("scenario", s.name),
            ("vpp_V", _fmt(op.vpp)),
            ("rating_clipped", "yes" if op.rating_clipped else "no"),
            ("rect_peak_V", _fmt(op.rect_peak)),
            ("powered", "yes" if op.powered else "no"),
            ("stable_current_uA", _fmt(op.stable_current * 1e6)),
            ("output_power_mW", _fmt(op.output_power * 1e3)),
            ("t_half_min", _minutes(summary.t_half_capacity)),
            ("t_full_min", _minutes(summary.t_full)),
            ("final_v_V", _fmt(summary.final_v)),
            ("avg_current_uA", _fmt(summary.avg_current * 1e6)),
        ]
    )
    if args.out:
        print(f"curve_csv: {args.out}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    s = _load_source_scenario(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"bad --values: {exc}") from None
    table = sweep(s, args.param, values)
    lines = ["param,value,t_half_min,t_full_min,final_v_V,avg_current_uA"]
    for value, summary in table:
        lines.append(
            ",".join(
                [
                    args.param,
                    _fmt(value),
                    _minutes(summary.t_half_capacity),
                    _minutes(summary.t_full),
                    _fmt(summary.final_v),
                    _fmt(summary.avg_current * 1e6),
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    print(text, end="")
    return EXIT_OK


def _cmd_comply(args) -> int:
    conv = Convention.PEAK_TO_PEAK if args.convention == "pp" else Convention.AMPLITUDE
    verdict = mil_std_check(Frequency(args.freq), Displacement(args.disp * 1e-3, conv))
    limit = verdict.limit_single_amplitude
    _emit(
        [
            ("frequency_hz", _fmt(args.freq)),
            ("band", verdict.band.value),
            ("limit_single_amplitude_mm", "n/a" if limit is None else _fmt(limit * 1e3)),
            ("single_amplitude_mm", _fmt(verdict.single_amplitude * 1e3)),
            ("compliant", "yes" if verdict.compliant else "no"),
        ]
    )
    if verdict.band is MilStdBand.OUT_OF_RANGE:
        return EXIT_OUT_OF_RANGE
    return EXIT_OK if verdict.compliant else EXIT_NONCOMPLIANT


def _parse_suffixed(text: str, suffixes: dict, default: str) -> tuple:
    """Split '0.52g' into (0.52, 'g'); bare numbers take the default unit."""
    unit = default
    body = text.strip()
    for suffix in sorted(suffixes, key=len, reverse=True):
        if body.endswith(suffix):
            unit = suffix
            body = body[: -len(suffix)]
            break
    try:
        return float(body), unit
    except ValueError:
        raise _UsageError(f"cannot parse magnitude {text!r}") from None


def _cmd_convert(args) -> int:
    if (args.accel is None) == (args.disp is None):
        raise _UsageError("give exactly one of --accel / --disp")
    conv = Convention.PEAK_TO_PEAK if args.convention == "pp" else Convention.AMPLITUDE
    tag = _conv_suffix(conv)
    freq = Frequency(args.freq)
    if args.accel is not None:
        value, unit = _parse_suffixed(args.accel, {"g": None, "ms2": None}, "ms2")
        accel = Acceleration(g_to_ms2(value) if unit == "g" else value, conv)
    else:
        value, unit = _parse_suffixed(args.disp, {"mm": None, "m": None}, "mm")
        disp = Displacement(value * (1e-3 if unit == "mm" else 1.0), conv)
        accel = acceleration_from_displacement(disp, freq)

    if args.target == "disp":
        disp = displacement_from_acceleration(accel, freq)
        _emit([(f"displacement_{tag}_mm", _fmt(disp.value * 1e3))])
    elif args.target == "accel":
        _emit(
            [
                (f"acceleration_{tag}_ms2", _fmt(accel.value)),
                (f"acceleration_{tag}_g", _fmt(accel.value / g_to_ms2(1.0))),
            ]
        )
    else:
        vel = velocity_from_acceleration(accel, freq)
        _emit([(f"velocity_{tag}_ms", _fmt(vel.value))])
    return EXIT_OK


# Starting point for calibration runs: the tip-loaded bench harvester with the
# voltage chain unfitted (linear, unit-scale gain).
def _default_initial_params() -> HarvesterParams:
    from .scenario import TUNED_HARVESTER

    return HarvesterParams(
        f_unloaded=TUNED_HARVESTER.f_unloaded,
        m_eff=TUNED_HARVESTER.m_eff,
        m_tip=TUNED_HARVESTER.m_tip,
        zeta=TUNED_HARVESTER.zeta,
        gain_v=1e4,
        v_sat=float("inf"),
        c_piezo=TUNED_HARVESTER.c_piezo,
        v_rating=TUNED_HARVESTER.v_rating,
    )


def _cmd_calibrate(args) -> int:
    observations = load_observations(args.observations)
    if not observations:
        raise _UsageError(
            f"{args.observations}: needs at least one [[observation]] entry"
        )
    p0 = load_harvester_params(args.initial) if args.initial else _default_initial_params()
    result = calibrate(p0, observations)
    pairs = [
        ("gain_v_V_per_m", _fmt(result.params.gain_v)),
        ("v_sat_V", _fmt(result.params.v_sat)),
    ]
    for idx, ((prof, measured), residual) in enumerate(
        zip(observations, result.residuals), start=1
    ):
        model = open_circuit_vpp(result.params, prof).vpp
        pairs.append((f"obs{idx}_measured_vpp_V", _fmt(measured)))
        pairs.append((f"obs{idx}_model_vpp_V", _fmt(model)))
        pairs.append((f"obs{idx}_residual_pct", _fmt(residual * 100.0)))
    pairs.append(("max_residual_pct", _fmt(result.max_residual * 100.0)))
    _emit(pairs)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(format_harvester_params(result.params))
        print(f"params_toml: {args.out}")
    return EXIT_OK


def _cmd_scenarios(args) -> int:
    for sid, ref in SCENARIO_REFERENCES.items():
        s = builtin_scenario(sid)
        print(
            f"{sid}: {s.profile.frequency:g} Hz, "
            f"{s.profile.base_displacement_pp * 1e3:g} mm pp base motion, "
            f"{ref.load_ohms / 1e3:g} kohm matched load, "
            f"{_fmt(s.power_stage.charging.i_cc * 1e6)} uA stable current, "
            f"measured {ref.vpp:g} Vpp"
        )
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "comply": _cmd_comply,
    "convert": _cmd_convert,
    "calibrate": _cmd_calibrate,
    "scenarios": _cmd_scenarios,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        for violation in exc.violations:
            print(f"error: {violation}", file=sys.stderr)
        return EXIT_ERROR
    except (DomainError, ConfigurationError, ComparisonError, CalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
