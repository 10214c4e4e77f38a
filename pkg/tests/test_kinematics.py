import math

import pytest

from piezoharvest.errors import DomainError
from piezoharvest.kinematics import (
    Acceleration,
    Convention,
    Displacement,
    Frequency,
    MilStdBand,
    STANDARD_GRAVITY,
    VibrationProfile,
    acceleration_from_displacement,
    convert_convention,
    displacement_from_acceleration,
    g_to_ms2,
    mil_std_check,
    velocity_from_acceleration,
)

F_DRIVE = Frequency(23.5)


def eq1_displacement(a_ms2, f_hz):
    # hand evaluation of D = A / (2 pi F)^2, the oracle for the conversions
    return a_ms2 / (2.0 * math.pi * f_hz) ** 2


class TestGConversion:
    def test_one_g(self):
        assert g_to_ms2(1.0) == 9.80665

    def test_zero(self):
        assert g_to_ms2(0.0) == 0.0

    def test_direct_multiplication(self):
        assert g_to_ms2(0.52) == pytest.approx(5.09946, abs=5e-6)
        assert g_to_ms2(0.52) == 0.52 * STANDARD_GRAVITY

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            g_to_ms2(math.nan)
        with pytest.raises(DomainError):
            g_to_ms2(math.inf)


class TestDisplacementFromAcceleration:
    def test_one_g_pp_at_drive_frequency(self):
        a = Acceleration.peak_to_peak(9.80665)
        d = displacement_from_acceleration(a, F_DRIVE)
        assert d.convention is Convention.PEAK_TO_PEAK
        assert d.value == pytest.approx(eq1_displacement(9.80665, 23.5), rel=1e-15)
        assert d.value * 1e3 == pytest.approx(0.4498, abs=5e-5)

    def test_zero(self):
        d = displacement_from_acceleration(Acceleration.peak_to_peak(0.0), F_DRIVE)
        assert d.value == 0.0

    def test_scenario_a_acceleration(self):
        # 0.52 g pp at 23.5 Hz; the bench instead measured 0.210 mm pp, about
        # 11% away from the harmonic relation (probe placement, IMU error).
        a = Acceleration.peak_to_peak(g_to_ms2(0.52))
        d = displacement_from_acceleration(a, F_DRIVE)
        assert d.value == pytest.approx(eq1_displacement(g_to_ms2(0.52), 23.5), rel=1e-15)
        assert d.value * 1e3 == pytest.approx(0.2339, abs=5e-5)
        assert abs(d.value - 0.210e-3) / 0.210e-3 < 0.12

    def test_amplitude_convention_preserved(self):
        a = Acceleration.amplitude(2.0)
        d = displacement_from_acceleration(a, F_DRIVE)
        assert d.convention is Convention.AMPLITUDE

    def test_non_positive_frequency_rejected(self):
        with pytest.raises(DomainError):
            Frequency(0.0)
        with pytest.raises(DomainError):
            Frequency(-5.0)


class TestAccelerationFromDisplacement:
    def test_inverse_of_previous_example(self):
        d = Displacement.peak_to_peak(eq1_displacement(9.80665, 23.5))
        a = acceleration_from_displacement(d, F_DRIVE)
        assert a.value == pytest.approx(9.80665, rel=1e-12)

    def test_zero(self):
        a = acceleration_from_displacement(Displacement.peak_to_peak(0.0), F_DRIVE)
        assert a.value == 0.0

    def test_round_trip_identity(self):
        a = Acceleration.peak_to_peak(3.7)
        f = Frequency(12.25)
        back = acceleration_from_displacement(displacement_from_acceleration(a, f), f)
        assert back.value == pytest.approx(a.value, rel=1e-12)


class TestVelocityFromAcceleration:
    def test_unit_case(self):
        v = velocity_from_acceleration(Acceleration.amplitude(2.0 * math.pi), Frequency(1.0))
        assert v.value == pytest.approx(1.0, rel=1e-15)

    def test_zero(self):
        assert velocity_from_acceleration(Acceleration.amplitude(0.0), F_DRIVE).value == 0.0

    def test_scenario_a_value(self):
        v = velocity_from_acceleration(Acceleration.peak_to_peak(5.09946), F_DRIVE)
        assert v.value == pytest.approx(5.09946 / (2.0 * math.pi * 23.5), rel=1e-15)
        assert v.value == pytest.approx(0.03454, abs=5e-6)
        assert v.convention is Convention.PEAK_TO_PEAK


class TestConvertConvention:
    def test_amplitude_to_pp(self):
        d = convert_convention(Displacement.amplitude(0.508e-3), Convention.PEAK_TO_PEAK)
        assert d.value == pytest.approx(1.016e-3, rel=1e-15)

    def test_pp_to_amplitude(self):
        d = convert_convention(Displacement.peak_to_peak(0.210e-3), Convention.AMPLITUDE)
        assert d.value == pytest.approx(0.105e-3, rel=1e-15)

    def test_identity(self):
        a = Acceleration.amplitude(1.25)
        assert convert_convention(a, Convention.AMPLITUDE) is a

    def test_double_conversion_exact(self):
        d = Displacement.amplitude(0.3e-3)
        back = convert_convention(
            convert_convention(d, Convention.PEAK_TO_PEAK), Convention.AMPLITUDE
        )
        assert back.value == d.value


class TestMilStdCheck:
    def test_scenario_a_compliant(self):
        v = mil_std_check(F_DRIVE, Displacement.peak_to_peak(0.210e-3))
        assert v.compliant
        assert v.band is MilStdBand.BAND_16_25
        assert v.limit_single_amplitude == 0.508e-3
        assert v.single_amplitude == pytest.approx(0.105e-3)

    def test_scenario_b_compliant(self):
        v = mil_std_check(F_DRIVE, Displacement.peak_to_peak(0.405e-3))
        assert v.compliant
        assert v.limit_single_amplitude == 0.508e-3
        assert v.single_amplitude == pytest.approx(0.2025e-3)

    def test_below_range(self):
        v = mil_std_check(Frequency(3.0), Displacement.amplitude(1e-6))
        assert v.band is MilStdBand.OUT_OF_RANGE
        assert not v.compliant
        assert v.limit_single_amplitude is None

    @pytest.mark.parametrize(
        "hertz,limit_mm",
        [(4.0, 0.762), (15.0, 0.762), (15.000001, 0.508), (16.0, 0.508),
         (25.0, 0.508), (26.0, 0.254), (33.0, 0.254)],
    )
    def test_band_boundaries(self, hertz, limit_mm):
        v = mil_std_check(Frequency(hertz), Displacement.amplitude(0.1e-3))
        assert v.limit_single_amplitude == pytest.approx(limit_mm * 1e-3, rel=1e-12)

    def test_just_above_table(self):
        v = mil_std_check(Frequency(33.000001), Displacement.amplitude(0.1e-3))
        assert v.band is MilStdBand.OUT_OF_RANGE

    def test_limit_is_inclusive(self):
        at_limit = mil_std_check(Frequency(10.0), Displacement.amplitude(0.762e-3))
        assert at_limit.compliant
        over = mil_std_check(Frequency(10.0), Displacement.amplitude(0.7620001e-3))
        assert not over.compliant

    def test_convention_invariance(self):
        pp = mil_std_check(F_DRIVE, Displacement.peak_to_peak(0.4e-3))
        amp = mil_std_check(F_DRIVE, Displacement.amplitude(0.2e-3))
        assert pp == amp


class TestVibrationProfile:
    def test_from_displacement_derives_acceleration(self):
        p = VibrationProfile.from_displacement_pp(23.5, 0.210e-3)
        assert p.given == "displacement"
        assert p.base_acceleration_pp == pytest.approx(
            0.210e-3 * (2.0 * math.pi * 23.5) ** 2, rel=1e-15
        )

    def test_from_acceleration_derives_displacement(self):
        p = VibrationProfile.from_acceleration_pp(23.5, g_to_ms2(0.52))
        assert p.given == "acceleration"
        assert p.base_displacement_pp == pytest.approx(
            eq1_displacement(g_to_ms2(0.52), 23.5), rel=1e-15
        )

    def test_inconsistent_pair_rejected(self):
        with pytest.raises(DomainError):
            VibrationProfile(23.5, 0.210e-3, 99.0, "displacement")

    def test_zero_motion_allowed(self):
        p = VibrationProfile.from_displacement_pp(23.5, 0.0)
        assert p.base_acceleration_pp == 0.0

    def test_compliance_helper(self):
        assert VibrationProfile.from_displacement_pp(23.5, 0.405e-3).compliance().compliant
