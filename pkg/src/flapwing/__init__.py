"""Simulation and design search for resonant flapping-wing stroke and pitch transmissions."""
from .analysis import (SimSummary, cycle_amplitudes, extremum_offsets, fundamental, phase_lag,
                       resonance_curve, steady_amplitude, summarize)
from .design import (pivot_stiffness, pivot_stress_check, solve_resonant_mass,
                     solve_stroke_design)
from .integrator import IntegrationConfig, PeriodScaledConfig, convergence_order, integrate
from .model import (REFERENCE_PIVOT, PitchParams, PivotSpec, SimState, StrokeParams, Topology,
                    Trajectory, ValidationError, natural_frequency, validate_pitch_params,
                    validate_stroke_params)
from .pitch import (PITCH_DESIGN_POINT, pitch_natural_frequency, pitch_rhs,
                    pitch_torque_decomposition, simulate_pitch)
from .stroke import (DESIGN_POINT, StrokeDrive, calibrate_damping, inertial_force,
                     inertial_torque, simulate_stroke, stroke_rhs)

__version__ = "0.1.0"
