"""Rectifier/regulator behavior: full-wave rectification with the input shunt
clamp, the stable regulated operating points, and the two charging laws."""

import numpy as np

from piezoharvest import (
    ConstantPower,
    PiezoWaveform,
    builtin_scenario,
    charging_current,
    law_current,
    output_power,
    rectify,
    simulate_waveform,
    stable_output_current,
)

print("Rectifying the scenario A piezo waveform (diode drop 0.3 V, clamp 20 V)")
print("------------------------------------------------------------------------")
s = builtin_scenario("A")
wave = simulate_waveform(s.harvester, s.profile, duration=3.0)
rect = rectify(wave, diode_drop=0.3, v_shunt_clamp=20.0)
print(f"  input swing:  [{wave.samples.min():+7.3f}, {wave.samples.max():+7.3f}] V")
print(f"  rectified:    [{rect.samples.min():+7.3f}, {rect.samples.max():+7.3f}] V")

big = PiezoWaveform(wave.dt, 3.0 * wave.samples)
clamped = rectify(big, diode_drop=0.3, v_shunt_clamp=20.0)
flat = float(np.mean(clamped.samples == 20.0)) * 100.0
print(f"  3x drive would peak at {abs(big.samples).max() - 0.6:.1f} V;"
      f" the shunt holds it at 20 V ({flat:.1f}% of samples on the clamp)")

print()
print("Stable regulated output at the two bench potentiometer settings")
print("----------------------------------------------------------------")
for name, ohms, band in (("A", 10.7e3, (165, 169)), ("B", 8.5e3, (209, 213))):
    i = stable_output_current(1.8, ohms)
    p = output_power(1.8, ohms)
    inside = band[0] <= i * 1e6 <= band[1]
    print(f"  scenario {name}: 1.8 V over {ohms / 1e3:4.1f} kohm ->"
          f" {i * 1e6:6.1f} uA (measured band {band[0]}-{band[1]} uA:"
          f" {'inside' if inside else 'OUTSIDE'}), {p * 1e3:.3f} mW")

print()
print("Charging laws into a supercapacitor")
print("------------------------------------")
params = builtin_scenario("B").power_stage
print(f"  constant current {params.charging.i_cc * 1e6:.1f} uA,"
      f" cutoff at the band top {params.v_band_top} V:")
for v in (0.0, 0.5, 1.0, 1.5, 1.88, 1.89, 2.0):
    print(f"    v_cap = {v:4.2f} V -> {charging_current(v, params) * 1e6:6.1f} uA")

cp = ConstantPower(p_in=1.8 * params.charging.i_cc, efficiency=1.0, v_floor=0.3)
print(f"  constant power {cp.p_in * 1e3:.3f} mW (floor {cp.v_floor} V):"
      " current falls as the cap fills")
for v in (0.0, 0.3, 0.95, 1.5, 1.88):
    print(f"    v_cap = {v:4.2f} V -> {law_current(cp, v) * 1e6:6.1f} uA")
