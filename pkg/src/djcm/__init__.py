"""Deformed Jaynes-Cummings model: closed-form dynamics and nonclassicality witnesses.

A two-level atom, initially excited, interacts with a single cavity mode
prepared in a coherent state through f-deformed ladder operators. The
package evaluates the field state left in the cavity and its photon
statistics, quadrature squeezing and phase-space functions.
"""

from .deform import DeformationKind, ModelParams, eval_f, g_commutator, h_detuning, parse_deformation
from .dynamics import (
    FieldState,
    amplitude_excited,
    amplitude_ground,
    evolve,
    manifold_frequencies,
    phi_stable,
    truncation_level,
)
from .errors import (
    DJCMError,
    GridTooLarge,
    IndexOrderTooHigh,
    MagnitudeOverflow,
    OrderOverflow,
    OutOfRange,
    StepTooLarge,
    TruncationTooLarge,
    VacuumState,
    WeakCouplingWarning,
)
from .moments import (
    WitnessRecord,
    antibunching_d1,
    level_occupation,
    mandel_q,
    moment,
    photon_number_dist,
    squeezing,
    witness_record,
)
from .oracle import OdeSettings, propagate_manifold, propagate_state
from .phasespace import GridSpec, PhaseSpaceField, displaced_number_overlap, eval_grid, husimi_q, wigner
from .sweep import SweepSpec, default_figure_specs, figure_panels, run_sweep

__version__ = "0.1.0"
