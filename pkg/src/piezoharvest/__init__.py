"""Simulation toolkit for a low-frequency piezoelectric vibration energy
harvesting chain: harmonic base excitation, tip-loaded cantilever harvester,
rectifier/regulator and supercapacitor storage, with MIL-STD-167-1A
displacement compliance checking."""

from .errors import (
    CalibrationError,
    ComparisonError,
    ConfigurationError,
    DomainError,
    ValidationError,
)
from .harvester import (
    CalibrationResult,
    HarvesterParams,
    OpenCircuitVpp,
    PiezoWaveform,
    calibrate,
    loaded_resonance,
    open_circuit_vpp,
    settled_vpp,
    settling_time,
    simulate_waveform,
    steady_state_tip_displacement,
)
from .kinematics import (
    STANDARD_GRAVITY,
    Acceleration,
    ComplianceVerdict,
    Convention,
    Displacement,
    Frequency,
    MilStdBand,
    Velocity,
    VibrationProfile,
    acceleration_from_displacement,
    convert_convention,
    displacement_from_acceleration,
    g_to_ms2,
    mil_std_check,
    velocity_from_acceleration,
)
from .power_stage import (
    ConstantCurrent,
    ConstantPower,
    PowerStageParams,
    charging_current,
    law_current,
    output_power,
    rectified_peak,
    rectify,
    stable_output_current,
)
from .scenario import (
    ChargeCurve,
    CompareMetrics,
    CurveSummary,
    DutyCycledLoad,
    MeasuredReference,
    OperatingPoint,
    ResistorLoad,
    SCENARIO_REFERENCES,
    Scenario,
    SimConfig,
    SupercapacitorLoad,
    builtin_scenario,
    compare,
    crossing_time,
    operating_point,
    run,
    sweep,
    with_charging_model,
)
from .scenario_io import (
    format_curve_csv,
    load_observations,
    load_scenario,
    read_curve_csv,
    write_curve_csv,
)
from .storage import (
    SupercapState,
    V_FULL_DEFAULT,
    half_capacity_time,
    step_charge,
    time_to_voltage,
    time_to_voltage_integrated,
)

__version__ = "0.1.0"
