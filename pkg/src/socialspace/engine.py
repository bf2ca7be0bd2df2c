"""The engine: one community behind a command queue, plus session state.

All mutations funnel through a single lock and swap in a fresh immutable
snapshot, which readers pick up without locking anything; a read issued
after a mutation has been acknowledged therefore always reflects it.
When a data path is configured, every accepted mutation atomically
rewrites the community document.

The engine also keeps the per-query gather traces (so the interface can
show why an adviser was proposed) and the probe simulation sessions.
"""

from __future__ import annotations

import os
import threading
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .community import Community, UnknownIdError, ValidationError
from .config import EngineConfig
from .haptics import (
    FieldGrid,
    GridSpec,
    PoleAssignment,
    ProbeState,
    SceneGeometry,
    TactileScene,
    _social_terms,
    feedback_force,
    map_social_to_tactile,
    sample_field,
    select_pole,
    step_dynamics,
)
from .recommender import (
    ProxyDescriptor,
    Recommendation,
    UserContext,
    rank_responses,
    select_proxy,
)
from .routing import GatherResult, gather
from .trust import path_trust, trust_value

__all__ = ["Engine", "SimulationSession", "SimulationRecord", "trust_between"]


def trust_between(community: Community, origin: int, member: int) -> float:
    """Trust of origin toward any member: product along the breadth-first
    shortest certified path (lowest-id first), 1 for the origin itself,
    0.5 (no information) when no path exists."""
    if origin == member:
        return 1.0
    parents: dict[int, int] = {origin: origin}
    queue = deque([origin])
    while queue:
        node = queue.popleft()
        if node == member:
            break
        for nb in community.neighbors(node):
            if nb not in parents:
                parents[nb] = node
                queue.append(nb)
    if member not in parents:
        return 0.5
    trusts = []
    node = member
    while node != origin:
        parent = parents[node]
        trusts.append(trust_value(community.edge_trust_raw(parent, node)))
        node = parent
    return path_trust(trusts)


@dataclass
class SimulationRecord:
    t: float
    rho: tuple[float, float, float]
    rho_dot: tuple[float, float, float]
    f_h: tuple[float, float, float]
    f_a: tuple[float, float, float]
    lam: float
    pole: int | None

    def to_payload(self) -> dict:
        return {
            "t": self.t,
            "rho": list(self.rho),
            "rho_dot": list(self.rho_dot),
            "f_h": list(self.f_h),
            "f_a": list(self.f_a),
            "lam": self.lam,
            "pole": self.pole,
        }


@dataclass
class SimulationSession:
    """One probe simulation: scene, config, and the integrated state."""

    session_id: str
    scene: TactileScene
    config: EngineConfig
    state: ProbeState
    active_pole: int | None = None
    time_since_switch: float = field(default=0.0)
    records: list[SimulationRecord] = field(default_factory=list)

    def step(self, hip, dt: float) -> SimulationRecord:
        cfg = self.config.field
        poles = select_pole(self.scene, hip, cfg.trust_threshold)
        if poles.pole_member != self.active_pole:
            self.active_pole = poles.pole_member
            self.time_since_switch = 0.0
        if cfg.pole_switch_ramp > 0:
            scale = min(1.0, self.time_since_switch / cfg.pole_switch_ramp)
        else:
            scale = 1.0
        self.state = step_dynamics(self.state, hip, poles, cfg, dt, field_scale=scale)
        self.time_since_switch += dt
        record = self._record(poles, scale)
        self.records.append(record)
        return record

    def _record(self, poles: PoleAssignment, scale: float) -> SimulationRecord:
        cfg = self.config.field
        f_h = feedback_force(self.state.rho - self.state.hip, self.state.rho_dot, cfg)
        f_a, lam = _social_terms(self.state.rho, poles, cfg, scale)
        return SimulationRecord(
            t=self.state.t,
            rho=tuple(float(v) for v in self.state.rho),
            rho_dot=tuple(float(v) for v in self.state.rho_dot),
            f_h=tuple(float(v) for v in f_h),
            f_a=tuple(float(v) for v in f_a),
            lam=float(lam),
            pole=poles.pole_member,
        )


class Engine:
    """Single community, serialized writes, snapshot reads."""

    def __init__(self, config: EngineConfig, community: Community):
        self.config = config
        self._community = community.validate()
        self._write_lock = threading.Lock()
        self._traces: dict[str, tuple[GatherResult, Recommendation]] = {}
        self._sessions: dict[str, SimulationSession] = {}

    # -- snapshot reads --------------------------------------------------

    def snapshot(self) -> Community:
        return self._community

    # -- serialized mutations ----------------------------------------------

    def _commit(self, community: Community) -> None:
        self._community = community
        if self.config.data_path:
            _atomic_write(self.config.data_path, community.to_document())

    def submit_ratings(self, batch) -> tuple[int, int]:
        """Apply one rating batch; returns (new tick, trust updates applied)."""
        with self._write_lock:
            community, updates = self._community.with_rating_batch(
                batch, self.config.trust
            )
            self._commit(community)
            return community.tick, updates

    def certify(self, i: int, j: int) -> bool:
        """Register a certification intent; True once the edge exists."""
        with self._write_lock:
            community = self._community.certify_edge(i, j)
            self._commit(community)
            return community.has_edge(i, j)

    def set_location(self, member_id: int, location) -> None:
        with self._write_lock:
            self._commit(self._community.with_location(member_id, location))

    def set_reachable(self, member_id: int, reachable: bool) -> None:
        with self._write_lock:
            self._commit(self._community.with_reachable(member_id, reachable))

    def set_friend_declaration(self, member_id: int, declared_by: int,
                               declared: bool) -> None:
        with self._write_lock:
            self._commit(self._community.with_friend_declaration(
                member_id, declared_by, declared
            ))

    # -- queries -----------------------------------------------------------

    def recommend(self, ctx: UserContext, query_id: str | None = None) -> Recommendation:
        community = self.snapshot()
        community.require_category(ctx.category)
        if isinstance(ctx.user, ProxyDescriptor):
            origin = select_proxy(ctx.user, community)
        else:
            origin = community.require_member(ctx.user).member_id
        result = gather(community, origin, ctx.category,
                        hop_limit=self.config.hop_limit, query_id=query_id)
        recommendation = rank_responses(
            result, ctx, community, self.config.trust, self.config.channel_policy
        )
        self._traces[result.query_id] = (result, recommendation)
        return recommendation

    def trace(self, query_id: str) -> GatherResult:
        try:
            return self._traces[query_id][0]
        except KeyError:
            raise UnknownIdError(f"unknown query id {query_id!r}") from None

    def recommendation(self, query_id: str) -> Recommendation:
        try:
            return self._traces[query_id][1]
        except KeyError:
            raise UnknownIdError(f"unknown query id {query_id!r}") from None

    # -- tactile space -------------------------------------------------------

    def scene_for(self, query_id: str, geometry: SceneGeometry = SceneGeometry()) -> TactileScene:
        """Tactile scene for a past query: top-3 advisers are the
        recommended members, their trust taken from the origin's view."""
        recommendation = self.recommendation(query_id)
        community = self.snapshot()
        recommended = [entry.member_id for entry in recommendation.top3]
        trust_to_user = {
            m: trust_between(community, recommendation.origin, m) for m in recommended
        }
        return map_social_to_tactile(community, recommended, trust_to_user, geometry)

    def field_grid(self, query_id: str, hip, spec: GridSpec) -> tuple[FieldGrid, PoleAssignment]:
        scene = self.scene_for(query_id)
        cfg = self.config.field
        poles = select_pole(scene, hip, cfg.trust_threshold)
        return sample_field(scene, poles, cfg, spec), poles

    # -- probe simulation ------------------------------------------------------

    def start_session(self, session_id: str, query_id: str, hip) -> SimulationSession:
        if session_id in self._sessions:
            raise ValidationError(f"session {session_id!r} already exists")
        session = SimulationSession(
            session_id=session_id,
            scene=self.scene_for(query_id),
            config=self.config,
            state=ProbeState.at_rest(np.asarray(hip, dtype=float)),
        )
        self._sessions[session_id] = session
        return session

    def step_session(self, session_id: str, hips, dt: float) -> list[SimulationRecord]:
        try:
            session = self._sessions[session_id]
        except KeyError:
            raise UnknownIdError(f"unknown session id {session_id!r}") from None
        return [session.step(np.asarray(h, dtype=float), dt) for h in hips]


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as handle:
        handle.write(text)
    os.replace(tmp, path)
