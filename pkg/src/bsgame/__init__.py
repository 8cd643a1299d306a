"""Base-station selection and sharing games: utilities, equilibria and experiments."""

from .channel import ChannelMatrix, NetworkParams, draw_channels, load_config, params_from_snr
from .core import check_exact_potential, mai, potential, sinr, utilities, utility
from .limits import (
    empirical_fractions,
    mixed_potential,
    mixed_utility,
    no_fully_mixed_ne_2x2,
    nonatomic_equilibrium_fractions,
    nonatomic_potential,
)
from .metrics import braess_compare, efficiency_selection, network_se, sweep_poa_pos
from .selection import (
    adjacency_matrices,
    best_response_selection,
    enumerate_ne,
    graph_distance,
    max_ne_bound,
    run_selection_dynamics,
)
from .sharing import kkt_residual, run_sharing_dynamics, water_fill

__version__ = "0.1.0"
