"""Quantum state transfer through spin rings in the one-particle sector."""
from .encoding import (
    WavepacketSpec,
    broadening_second_order,
    broadening_third_order,
    cube_root_packet,
    design_packet,
    gaussian_packet,
    packet_in_sites,
)
from .errors import (
    BudgetUnattainableError,
    ConfigError,
    DegenerateStateError,
    NoPropagationError,
    SizeMismatchError,
    SpinwireError,
)
from .evolution import PropagationTrace, evolve, evolve_many, propagator_submatrix, run_trace, translate
from .fidelity import (
    ChannelReport,
    average_fidelity,
    channel_report,
    decoded_density_matrix,
    fidelity,
    kraus_pair,
    min_capture_for,
    qubit_rate_lower_bound,
)
from .optimal_encoding import OptimalEncoding, optimal_amplitudes, optimize_arrival
from .ring_model import (
    DispersionRelation,
    HamiltonianSpec,
    arrival_time,
    dispersion_derivative,
    dispersion_from_spec,
    group_velocity,
    heisenberg,
    max_group_velocity,
    omega,
)
from .state import (
    OccupationGraph,
    OneParticleState,
    SiteWindow,
    alice_window,
    bob_window,
    capture_probability,
    centre_of_mass,
    from_momentum,
    occupation_graph,
    schmidt_decompose,
    site_basis,
    to_momentum,
    twisted_w,
    width,
)

__version__ = "0.1.0"
