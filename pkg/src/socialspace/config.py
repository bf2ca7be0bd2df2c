"""Engine configuration: trust parameters, field constants, channel policy."""

from __future__ import annotations

import json
import dataclasses
from dataclasses import dataclass
from typing import Mapping

from .community import DocumentError
from .haptics import FieldConfig
from .recommender import DEFAULT_CHANNEL_POLICY, URGENCIES, ChannelRule
from .trust import TrustParams

__all__ = ["EngineConfig", "load_config"]


@dataclass(frozen=True)
class EngineConfig:
    trust: TrustParams = TrustParams()
    field: FieldConfig = FieldConfig()
    channel_policy: Mapping[str, ChannelRule] = dataclasses.field(
        default_factory=lambda: dict(DEFAULT_CHANNEL_POLICY)
    )
    hop_limit: int | None = None
    data_path: str | None = None
    host: str = "127.0.0.1"
    port: int = 8800

    def __post_init__(self):
        # TrustParams / FieldConfig validate their own ranges on construction
        for urgency in URGENCIES:
            if urgency not in self.channel_policy:
                raise ValueError(f"channel policy misses urgency {urgency!r}")
        if self.hop_limit is not None and self.hop_limit < 1:
            raise ValueError(f"hop_limit must be positive, got {self.hop_limit}")

    def to_payload(self) -> dict:
        return {
            "trust": {
                "gamma": self.trust.gamma,
                "beta": self.trust.beta,
                "clamp_epsilon": self.trust.clamp_epsilon,
            },
            "field": {
                "mass": self.field.mass,
                "k_h": self.field.k_h,
                "b_h": self.field.b_h,
                "k_a": self.field.k_a,
                "c_a": self.field.c_a,
                "d_a": self.field.d_a,
                "trust_threshold": self.field.trust_threshold,
                "social_distance": self.field.social_distance,
                "cutoff_width": self.field.cutoff_width,
                "epsilon_force": self.field.epsilon_force,
                "pole_switch_ramp": self.field.pole_switch_ramp,
            },
            "channel_policy": {
                urgency: {
                    "requires_reachable": rule.requires_reachable,
                    "allowed_channels": sorted(rule.allowed_channels),
                }
                for urgency, rule in sorted(self.channel_policy.items())
            },
            "hop_limit": self.hop_limit,
        }


def load_config(source: str | None = None) -> EngineConfig:
    """Build an EngineConfig from a JSON text (None means all defaults)."""
    if source is None:
        return EngineConfig()
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed config: {exc}") from None
    trust = TrustParams(**doc.get("trust", {}))
    fieldcfg = FieldConfig(**doc.get("field", {}))
    policy = dict(DEFAULT_CHANNEL_POLICY)
    for urgency, rule in doc.get("channel_policy", {}).items():
        policy[urgency] = ChannelRule(
            requires_reachable=bool(rule["requires_reachable"]),
            allowed_channels=frozenset(rule["allowed_channels"]),
        )
    return EngineConfig(
        trust=trust,
        field=fieldcfg,
        channel_policy=policy,
        hop_limit=doc.get("hop_limit"),
        data_path=doc.get("data_path"),
        host=doc.get("host", "127.0.0.1"),
        port=int(doc.get("port", 8800)),
    )
