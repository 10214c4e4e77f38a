import math

import pytest
from scipy.optimize import brentq

from piezoharvest.errors import CalibrationError, ConfigurationError, DomainError
from piezoharvest.harvester import (
    HarvesterParams,
    calibrate,
    loaded_resonance,
    open_circuit_vpp,
    settled_vpp,
    settling_time,
    simulate_waveform,
    steady_state_tip_displacement,
)
from piezoharvest.kinematics import VibrationProfile


def make_params(**overrides):
    base = dict(
        f_unloaded=178.0,
        m_eff=3.0e-4,
        m_tip=0.017,
        zeta=0.05,
        gain_v=1.5e4,
        v_sat=math.inf,
        c_piezo=190e-9,
        v_rating=120.0,
    )
    base.update(overrides)
    return HarvesterParams(**base)


def profile_for(params, r, y_amp):
    """Sinusoidal base motion at frequency ratio r with zero-to-peak amplitude y_amp."""
    f = r * loaded_resonance(params).hertz
    return VibrationProfile.from_displacement_pp(f, 2.0 * y_amp)


class TestLoadedResonance:
    def test_no_tip_mass_is_identity(self):
        p = make_params(m_tip=0.0)
        assert loaded_resonance(p).hertz == 178.0

    def test_equal_masses_give_sqrt2(self):
        p = make_params(m_eff=0.017, m_tip=0.017)
        assert loaded_resonance(p).hertz == pytest.approx(178.0 / math.sqrt(2.0), rel=1e-15)

    def test_m_eff_that_tunes_to_drive_frequency(self):
        # independent root-find on the tip-mass law: which m_eff puts the
        # 17 g loaded beam at 23.5 Hz?
        m_eff = brentq(
            lambda m: 178.0 * math.sqrt(m / (m + 0.017)) - 23.5, 1e-7, 1e-2, xtol=1e-18
        )
        assert m_eff == pytest.approx(3.0156512242324955e-4, rel=1e-10)
        p = make_params(m_eff=m_eff)
        assert loaded_resonance(p).hertz == pytest.approx(23.5, rel=1e-12)

    def test_monotone_decreasing_in_tip_mass(self):
        f_light = loaded_resonance(make_params(m_tip=0.005)).hertz
        f_heavy = loaded_resonance(make_params(m_tip=0.020)).hertz
        assert f_heavy < f_light < 178.0

    def test_rejects_bad_masses(self):
        with pytest.raises(DomainError):
            make_params(m_eff=0.0)
        with pytest.raises(DomainError):
            make_params(m_tip=-1e-3)


class TestSteadyStateTipDisplacement:
    def test_quasi_static_limit(self):
        p = make_params()
        z = steady_state_tip_displacement(p, profile_for(p, 0.01, 1e-3))
        assert z.value < 1.1e-7  # ~ r^2 * Y

    def test_resonance_amplification(self):
        p = make_params(zeta=0.05)
        z = steady_state_tip_displacement(p, profile_for(p, 1.0, 0.105e-3))
        assert z.value == pytest.approx(0.105e-3 / (2.0 * 0.05), rel=1e-12)
        assert z.value == pytest.approx(1.05e-3, rel=1e-12)

    def test_sqrt2_crossover(self):
        # by hand: r^2 / |1 - r^2| = 2 at r = sqrt(2) as damping vanishes
        p = make_params(zeta=1e-9)
        z = steady_state_tip_displacement(p, profile_for(p, math.sqrt(2.0), 1e-3))
        assert z.value == pytest.approx(2e-3, rel=1e-9)


class TestOpenCircuitVpp:
    def test_zero_excitation(self):
        p = make_params()
        out = open_circuit_vpp(p, profile_for(p, 1.0, 0.0))
        assert out.vpp == 0.0
        assert not out.rating_clipped

    def test_linear_when_unsaturated(self):
        p = make_params(gain_v=1e4, v_sat=math.inf)
        base = profile_for(p, 1.0, 0.105e-3)
        out = open_circuit_vpp(p, base)
        assert out.vpp == pytest.approx(2.0 * 1e4 * 1.05e-3, rel=1e-12)

    def test_saturation_compresses(self):
        p_lin = make_params(gain_v=1e4, v_sat=math.inf)
        p_sat = make_params(gain_v=1e4, v_sat=5.0)
        base = profile_for(p_lin, 1.0, 0.105e-3)
        assert open_circuit_vpp(p_sat, base).vpp < open_circuit_vpp(p_lin, base).vpp
        assert open_circuit_vpp(p_sat, base).vpp < 2.0 * 5.0

    def test_rating_clip_flagged(self):
        p = make_params(gain_v=1e7, v_sat=math.inf, v_rating=120.0)
        out = open_circuit_vpp(p, profile_for(p, 1.0, 0.105e-3))
        assert out.rating_clipped
        assert out.vpp == 2.0 * 120.0


class TestResonancePeak:
    @pytest.mark.parametrize("zeta", [0.02, 0.05, 0.1])
    def test_peak_sits_at_loaded_resonance(self, zeta):
        # grid search at 1% frequency resolution; the argmax may land one
        # step above f_loaded (the exact peak is at r = 1/sqrt(1 - 2 zeta^2))
        p = make_params(zeta=zeta, v_sat=10.0)
        f_loaded = loaded_resonance(p).hertz
        ratios = [0.5 + 0.01 * k for k in range(101)]
        best = max(
            ratios,
            key=lambda r: open_circuit_vpp(p, profile_for(p, r, 0.105e-3)).vpp,
        )
        assert abs(best - 1.0) <= 0.01 + 1e-12


class TestSimulateWaveform:
    def test_zero_base_motion_stays_at_rest(self):
        p = make_params()
        w = simulate_waveform(p, profile_for(p, 1.0, 0.0), duration=0.1)
        assert (w.samples == 0.0).all()

    def test_matches_closed_form_at_resonance(self):
        p = make_params(zeta=0.05, gain_v=1.5e4, v_sat=13.5)
        base = profile_for(p, 1.0, 0.105e-3)
        settle = settling_time(p)
        w = simulate_waveform(p, base, duration=settle + 5.0 / base.frequency)
        vpp = settled_vpp(w, settle)
        expected = open_circuit_vpp(p, base).vpp
        assert vpp == pytest.approx(expected, rel=0.01)

    def test_dt_refinement_converges(self):
        p = make_params()
        base = profile_for(p, 1.0, 0.105e-3)
        settle = settling_time(p)
        dur = settle + 5.0 / base.frequency
        dt = 1.0 / (200.0 * base.frequency)
        coarse = settled_vpp(simulate_waveform(p, base, dur, dt), settle)
        fine = settled_vpp(simulate_waveform(p, base, dur, dt / 2.0), settle)
        assert abs(fine - coarse) / fine < 1e-3

    def test_rejects_coarse_dt(self):
        p = make_params()
        base = profile_for(p, 1.0, 1e-4)
        with pytest.raises(ConfigurationError):
            simulate_waveform(p, base, duration=1.0, dt=1.0 / (10.0 * base.frequency))

    def test_samples_respect_rating(self):
        p = make_params(gain_v=1e7, v_sat=math.inf, v_rating=50.0)
        base = profile_for(p, 1.0, 0.105e-3)
        w = simulate_waveform(p, base, duration=settling_time(p))
        assert (abs(w.samples) <= 50.0 + 1e-12).all()


def tanh_fit_oracle(z1, z2, a1, a2):
    """Independent bisection solve of s*tanh(g z/s) = a at two points.

    Reduce to tanh(k u)/tanh(u) = a2/a1 with u = g z1/s, k = z2/z1, then
    bisect: the ratio falls monotonically from k (u -> 0) toward 1 (u -> inf).
    """
    k = z2 / z1
    ratio = a2 / a1
    lo, hi = 1e-9, 60.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.tanh(k * mid) / math.tanh(mid) > ratio:
            lo = mid
        else:
            hi = mid
    u = 0.5 * (lo + hi)
    v_sat = a1 / math.tanh(u)
    gain = u * v_sat / z1
    return gain, v_sat


# Frozen output of tanh_fit_oracle for the two bench observations
# (0.210 / 0.405 mm pp at 23.5 Hz -> 22.66 / 26.56 Vpp), zeta = 0.05.
GOLDEN_GAIN_V = 15623.296619654924
GOLDEN_V_SAT = 13.52957816078483


class TestCalibrate:
    def bench_setup(self):
        q = (23.5 / 178.0) ** 2
        p0 = make_params(m_eff=0.017 * q / (1.0 - q), gain_v=1e4, v_sat=math.inf)
        obs = [
            (VibrationProfile.from_displacement_pp(23.5, 0.210e-3), 22.66),
            (VibrationProfile.from_displacement_pp(23.5, 0.405e-3), 26.56),
        ]
        return p0, obs

    def test_golden_fixture_matches_oracle(self):
        gain, v_sat = tanh_fit_oracle(1.05e-3, 2.025e-3, 11.33, 13.28)
        assert gain == pytest.approx(GOLDEN_GAIN_V, rel=1e-9)
        assert v_sat == pytest.approx(GOLDEN_V_SAT, rel=1e-9)

    def test_two_point_bench_fit(self):
        p0, obs = self.bench_setup()
        result = calibrate(p0, obs)
        assert result.params.gain_v == pytest.approx(GOLDEN_GAIN_V, rel=1e-6)
        assert result.params.v_sat == pytest.approx(GOLDEN_V_SAT, rel=1e-6)
        assert result.max_residual < 0.02
        for (prof, measured) in obs:
            assert open_circuit_vpp(result.params, prof).vpp == pytest.approx(
                measured, rel=0.02
            )

    def test_single_observation_exact_linear_fit(self):
        p0, obs = self.bench_setup()
        result = calibrate(p0, obs[:1])
        # one unknown, one equation: gain = measured amplitude / |Z|
        assert result.params.gain_v == pytest.approx(11.33 / 1.05e-3, rel=1e-12)
        assert result.params.v_sat == math.inf
        assert result.max_residual < 1e-12

    def test_round_trip_recovery(self):
        p0, obs = self.bench_setup()
        truth = HarvesterParams(
            f_unloaded=p0.f_unloaded,
            m_eff=p0.m_eff,
            m_tip=p0.m_tip,
            zeta=p0.zeta,
            gain_v=1.8e4,
            v_sat=11.0,
            c_piezo=p0.c_piezo,
            v_rating=p0.v_rating,
        )
        synthetic = [
            (prof, open_circuit_vpp(truth, prof).vpp)
            for prof, _ in obs
        ]
        result = calibrate(p0, synthetic)
        assert result.params.gain_v == pytest.approx(1.8e4, rel=1e-3)
        assert result.params.v_sat == pytest.approx(11.0, rel=1e-3)
        assert result.max_residual < 1e-6

    def test_mechanical_params_untouched(self):
        p0, obs = self.bench_setup()
        result = calibrate(p0, obs)
        assert result.params.m_eff == p0.m_eff
        assert result.params.zeta == p0.zeta

    def test_no_observations_rejected(self):
        p0, _ = self.bench_setup()
        with pytest.raises(DomainError):
            calibrate(p0, [])

    def test_zero_motion_observation_rejected(self):
        p0, _ = self.bench_setup()
        still = VibrationProfile.from_displacement_pp(23.5, 0.0)
        with pytest.raises(DomainError):
            calibrate(p0, [(still, 10.0)])

    def test_target_above_fixed_saturation_fails(self):
        p0, obs = self.bench_setup()
        p_fixed = HarvesterParams(
            f_unloaded=p0.f_unloaded,
            m_eff=p0.m_eff,
            m_tip=p0.m_tip,
            zeta=p0.zeta,
            gain_v=1e4,
            v_sat=5.0,
            c_piezo=p0.c_piezo,
            v_rating=p0.v_rating,
        )
        with pytest.raises(CalibrationError) as err:
            calibrate(p_fixed, obs[:1])
        assert err.value.best_residual is not None
