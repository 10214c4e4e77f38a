"""Cantilever harvester model: tip-mass tuning, frequency response, saturation
and the time-domain waveform against the closed-form steady state."""

from dataclasses import replace

from piezoharvest import (
    VibrationProfile,
    builtin_scenario,
    loaded_resonance,
    open_circuit_vpp,
    settled_vpp,
    settling_time,
    simulate_waveform,
    steady_state_tip_displacement,
)

p = builtin_scenario("A").harvester

print("Tip-mass tuning of the 178 Hz bare beam")
print("----------------------------------------")
for m_tip_g in (0.0, 1.0, 5.0, 10.0, 17.0, 30.0):
    tuned = replace(p, m_tip=m_tip_g * 1e-3)
    print(f"  m_tip = {m_tip_g:5.1f} g -> f_loaded = {loaded_resonance(tuned).hertz:7.2f} Hz")
print(f"  (the bench build: 17 g lands the resonance at "
      f"{loaded_resonance(p).hertz:.2f} Hz, right on the 23.5 Hz drive)")

print()
print("Frequency response at the scenario A base motion (0.210 mm pp)")
print("---------------------------------------------------------------")
f_res = loaded_resonance(p).hertz
for ratio in (0.5, 0.8, 0.95, 1.0, 1.05, 1.2, 2.0):
    base = VibrationProfile.from_displacement_pp(ratio * f_res, 0.210e-3)
    z = steady_state_tip_displacement(p, base)
    out = open_circuit_vpp(p, base)
    print(f"  f/f_res = {ratio:4.2f}: tip amplitude {z.value * 1e3:7.4f} mm,"
          f" open-circuit {out.vpp:6.2f} Vpp")

print()
print("Soft saturation: output compresses as the base motion grows")
print("-------------------------------------------------------------")
for mm_pp in (0.105, 0.210, 0.405, 0.810):
    base = VibrationProfile.from_displacement_pp(f_res, mm_pp * 1e-3)
    out = open_circuit_vpp(p, base)
    print(f"  {mm_pp:5.3f} mm pp -> {out.vpp:6.2f} Vpp"
          f"{'  (rating clipped)' if out.rating_clipped else ''}")
print(f"  doubling 0.210 -> 0.405 mm raises the output only "
      f"{open_circuit_vpp(p, VibrationProfile.from_displacement_pp(f_res, 0.405e-3)).vpp / open_circuit_vpp(p, VibrationProfile.from_displacement_pp(f_res, 0.210e-3)).vpp:.3f}x,"
      " matching the measured sub-linearity")

print()
print("Fixed-step RK4 waveform vs the closed form")
print("-------------------------------------------")
base = builtin_scenario("A").profile
settle = settling_time(p)
wave = simulate_waveform(p, base, duration=settle + 5.0 / base.frequency)
vpp_sim = settled_vpp(wave, settle)
vpp_cf = open_circuit_vpp(p, base).vpp
print(f"  transient settles in ~{settle:.2f} s; trace holds {len(wave.samples)} samples")
print(f"  post-settling Vpp from the trace: {vpp_sim:.4f} V")
print(f"  closed-form steady state:         {vpp_cf:.4f} V")
print(f"  relative deviation:               {abs(vpp_sim - vpp_cf) / vpp_cf:.2e}")

peak = max(abs(float(wave.samples.min())), float(wave.samples.max()))
print(f"  peak electrode voltage {peak:.2f} V, comfortably inside the +-120 V rating")
