"""Harmonic-motion arithmetic and the shipboard vibration compliance check.

Walks through the conversions between acceleration, displacement and velocity
for sinusoidal motion, the zero-to-peak vs peak-to-peak conventions, and the
MIL-STD-167-1A displacement limits that the two bench operating points must
respect.
"""

from piezoharvest import (
    Acceleration,
    Convention,
    Displacement,
    Frequency,
    convert_convention,
    displacement_from_acceleration,
    g_to_ms2,
    mil_std_check,
    velocity_from_acceleration,
)

DRIVE = Frequency(23.5)

print("Conversions at the 23.5 Hz operating frequency")
print("----------------------------------------------")
for g_pp in (0.52, 0.98):
    a = Acceleration.peak_to_peak(g_to_ms2(g_pp))
    d = displacement_from_acceleration(a, DRIVE)
    v = velocity_from_acceleration(a, DRIVE)
    print(
        f"  {g_pp:4.2f} g pp = {a.value:7.4f} m/s^2 pp"
        f"  ->  {d.value * 1e3:6.4f} mm pp displacement,"
        f"  {v.value * 1e3:6.3f} mm/s pp velocity"
    )

print()
print("The same displacement in both conventions")
print("------------------------------------------")
d_pp = Displacement.peak_to_peak(0.405e-3)
d_amp = convert_convention(d_pp, Convention.AMPLITUDE)
print(f"  {d_pp.value * 1e3:.3f} mm peak-to-peak = {d_amp.value * 1e3:.4f} mm zero-to-peak")

print()
print("MIL-STD-167-1A single-amplitude limits by band")
print("-----------------------------------------------")
for hz in (4.0, 10.0, 15.0, 16.0, 25.0, 26.0, 33.0):
    verdict = mil_std_check(Frequency(hz), Displacement.amplitude(0.1e-3))
    print(f"  {hz:5.1f} Hz: band {verdict.band.value:9s}"
          f" limit {verdict.limit_single_amplitude * 1e3:.3f} mm")

print()
print("Verdicts for the two bench motions (both at 23.5 Hz)")
print("-----------------------------------------------------")
for name, mm_pp in (("A", 0.210), ("B", 0.405)):
    verdict = mil_std_check(DRIVE, Displacement.peak_to_peak(mm_pp * 1e-3))
    print(
        f"  scenario {name}: {mm_pp:.3f} mm pp ="
        f" {verdict.single_amplitude * 1e3:.4f} mm single amplitude"
        f" vs {verdict.limit_single_amplitude * 1e3:.3f} mm limit ->"
        f" {'COMPLIANT' if verdict.compliant else 'NON-COMPLIANT'}"
    )

print()
print("Out-of-table frequencies are a verdict, not an error")
print("-----------------------------------------------------")
verdict = mil_std_check(Frequency(40.0), Displacement.amplitude(0.05e-3))
print(f"  40.0 Hz: band {verdict.band.value!r}, compliant = {verdict.compliant}")
