"""Eigenvector-guided neighbor selection for consensus networks.

The library builds reduced interaction networks in which every agent keeps
only the neighbors whose state changes more slowly than its own, verifies
the reachability and convergence-rate guarantees of the construction, and
provides the distributed, data-driven counterpart in which agents rank
their neighbors from sampled trajectories alone.
"""

__version__ = "0.1.0"

from .graphs import (Arc, DirectedNetwork, Edge, GraphError, LeaderLink,
                     Network, SemiAutonomousConfig, augmented_signed_network,
                     diameter, gauge_matrix, is_connected, laplacian,
                     perturbed_laplacian, reduced_laplacian, signed_laplacian,
                     signed_perturbed_laplacian, signed_reduced_laplacian,
                     structural_balance_partition)
from .spectral import (EigenPair, SpectralError, entry_ratio, fiedler_pair,
                       jacobi_eigh, principal_pair_perturbed,
                       principal_pair_signed, sign_normalize,
                       smallest_eigenpairs)
from .blocks import (BlockDecomposition, ClassificationError,
                     FiedlerClassification, block_cut_tree, classify_fiedler)
from .selection import (ffn_san, fiedler_lower_bound, fsn_fan, fsn_san,
                        fsn_signed_san, reachable_from, reachable_from_inputs,
                        reduced_spectrum, reduced_symmetric_fiedler,
                        tree_diameter_bound)
from .dynamics import (SimulationConfig, SimulationError, Trajectory,
                       empirical_rate, fan_fsn_consensus_value, simulate,
                       steady_state_san)
from .tempo import (TempoError, TempoEstimate, TempoReport,
                    first_component_ratio, g_ratio_series, run_algorithm1,
                    run_distributed_fan_tree, tempo_limit_from_eigvec,
                    tempo_limit_oracle)
from .netfile import (FIXTURE_NAMES, NetworkFileError, emit_trajectory,
                      load_fixture, parse_arc_file, parse_network_file,
                      parse_trajectory, serialize_arcs, serialize_network)
