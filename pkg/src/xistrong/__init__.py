"""Disconnection Game simulation: local graph enrichment against node corruption."""

from ._backend import BACKEND
from .game import (
    CorruptionPlan,
    GameConfig,
    GameOutcome,
    MetricsOver,
    Strategy,
    measure,
    plan_corruption,
    plan_random_failures,
    plan_targeted,
    play_game,
    xi_strength,
)
from .graph import (
    ComponentLabeling,
    Graph,
    InvalidNodeError,
    add_edge,
    bfs_components,
    connected_components,
    degrees,
    largest_component_fraction,
    remove_nodes,
)
from .ingest import (
    BaSpec,
    TheoremInstanceSpec,
    build_theorem_instance,
    generate_ba,
    load_snap_edgelist,
)
from .privacy import PrivacyParams, dp_guarantee, paalec_params
from .protocols import (
    EnrichmentResult,
    ProtocolConfig,
    ProtocolKind,
    default_fat_count,
    run_2sff,
    run_a3f,
    select_fat_nodes,
    select_participants,
)

__version__ = "0.1.0"
