"""Self-stabilizing in-network leader selection on trees.

Submodules: :mod:`.graph` (graphs and tree families), :mod:`.variance`
(steady-state variances and resistance distance), :mod:`.oracle`
(brute-force ground truth), :mod:`.protocol` (per-agent update rules and
rounds), :mod:`.harness` (scenarios, sweeps, Monte Carlo) and :mod:`.cli`.
"""

from .errors import GraphError, GuardError, InvariantViolation, LeadselError, NumericalError
from .graph import (
    Graph,
    broom_graph,
    build_graph,
    enumerate_labeled_trees,
    graph_distance,
    is_connected,
    is_tree,
    path_graph,
    random_tree,
    read_edge_list,
    star_graph,
)
from .harness import (
    DynamicsEstimate,
    RunReport,
    Scenario,
    TopologyChange,
    convergence_sweep,
    detect_stabilization,
    enum_check,
    run,
    simulate_dynamics,
)
from .kernels import BACKEND
from .oracle import (
    LeaderSelectionResult,
    Measure,
    SupermodularityWitness,
    check_supermodularity,
    exhaustive_leader_selection,
    tree_centers,
    tree_medians,
)
from .protocol import (
    AgentState,
    InducedDigraph,
    Mode,
    NetworkState,
    induced_digraph,
    initial_state,
    leader_transfer_decision,
    step_round,
    update_h,
    update_h_weighted,
    update_s,
)
from .variance import (
    LaplacianDecomposition,
    VarianceProfile,
    build_laplacian,
    max_variance,
    resistance_distance,
    steady_state_variances,
    total_variance,
)

__version__ = "0.1.0"

__all__ = [
    "AgentState",
    "BACKEND",
    "DynamicsEstimate",
    "Graph",
    "GraphError",
    "GuardError",
    "InducedDigraph",
    "InvariantViolation",
    "LaplacianDecomposition",
    "LeaderSelectionResult",
    "LeadselError",
    "Measure",
    "Mode",
    "NetworkState",
    "NumericalError",
    "RunReport",
    "Scenario",
    "SupermodularityWitness",
    "TopologyChange",
    "VarianceProfile",
    "broom_graph",
    "build_graph",
    "build_laplacian",
    "check_supermodularity",
    "convergence_sweep",
    "detect_stabilization",
    "enum_check",
    "enumerate_labeled_trees",
    "exhaustive_leader_selection",
    "graph_distance",
    "induced_digraph",
    "initial_state",
    "is_connected",
    "is_tree",
    "leader_transfer_decision",
    "max_variance",
    "path_graph",
    "random_tree",
    "read_edge_list",
    "resistance_distance",
    "run",
    "simulate_dynamics",
    "star_graph",
    "steady_state_variances",
    "step_round",
    "total_variance",
    "tree_centers",
    "tree_medians",
    "update_h",
    "update_h_weighted",
    "update_s",
    "__version__",
]
