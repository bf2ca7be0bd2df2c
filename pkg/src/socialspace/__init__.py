"""socialspace: a community social-space engine.

Models a community's acquaintance graph with per-edge trust that evolves
from co-rating agreement, finds the best adviser for a knowledge
category by flooding queries through the graph, and renders social
qualities as force fields a probe point can feel, integrated with a
fourth-order Runge-Kutta stepper.
"""

from .community import (
    CHANNELS,
    GENDERS,
    Community,
    CommunityError,
    DocumentError,
    MemberProfile,
    Rating,
    UnknownIdError,
    ValidationError,
    canonical_json,
    load_community,
)
from .config import EngineConfig, load_config
from .engine import Engine, SimulationSession, trust_between
from .haptics import (
    STIFFNESS_LEVELS,
    FieldConfig,
    FieldGrid,
    GridSpec,
    PoleAssignment,
    ProbeState,
    SceneGeometry,
    TactileObject,
    TactileScene,
    feedback_force,
    map_social_to_tactile,
    sample_field,
    select_pole,
    step_dynamics,
    viscosity_at,
)
from .recommender import (
    DEFAULT_CHANNEL_POLICY,
    AdviserEntry,
    ChannelRule,
    ProxyDescriptor,
    Recommendation,
    UserContext,
    aggregate_scores,
    filter_feasible,
    rank_responses,
    recommend,
    select_proxy,
)
from .routing import (
    GatherResult,
    Query,
    Response,
    SnapshotMismatchError,
    annotate_trust,
    gather,
)
from .scenario import ScenarioSpec, generate_document, generate_scenario
from .trust import (
    TrustParams,
    WeightedResponse,
    co_rate_update,
    hat_transform,
    path_trust,
    response_weights,
    trust_value,
)

__version__ = "0.1.0"
