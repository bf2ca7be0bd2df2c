"""Turn gathered responses into an actionable adviser list.

Pipeline: resolve the asking user to an agent (a proxy is picked for
non-members by profile similarity), flood the network for the requested
category, weight the responses by path trust, drop candidates the user
cannot actually approach (unreachable, no common language, channel
incompatible with the urgency), then fold the surviving weighted rates
into one score per candidate and keep the top three net-positive ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .community import Community, ValidationError
from .routing import GatherResult, annotate_trust, gather
from .trust import TrustParams, WeightedResponse

__all__ = [
    "URGENCIES", "ChannelRule", "DEFAULT_CHANNEL_POLICY",
    "ProxyDescriptor", "UserContext", "AdviserEntry", "Recommendation",
    "select_proxy", "filter_feasible", "aggregate_scores", "rank_responses",
    "recommend",
]

URGENCIES = ("immediate", "today", "whenever")

ALL_CHANNELS = frozenset(("email", "face_to_face", "instant_message"))


@dataclass(frozen=True)
class ChannelRule:
    """Feasibility rule for one urgency level."""

    requires_reachable: bool
    allowed_channels: frozenset[str]


# immediate contact needs the member to be reachable right now over a
# synchronous channel; looser urgencies accept any channel
DEFAULT_CHANNEL_POLICY: Mapping[str, ChannelRule] = {
    "immediate": ChannelRule(True, frozenset(("face_to_face", "instant_message"))),
    "today": ChannelRule(False, ALL_CHANNELS),
    "whenever": ChannelRule(False, ALL_CHANNELS),
}


@dataclass(frozen=True)
class ProxyDescriptor:
    """Self-description of a non-member user, matched against profiles."""

    gender: str | None = None
    grade: int | None = None
    languages: frozenset[str] = frozenset()
    declared_interests: frozenset[str] = frozenset()

    def __post_init__(self):
        if (self.gender is None and self.grade is None
                and not self.languages and not self.declared_interests):
            raise ValidationError("proxy descriptor must populate at least one field")


@dataclass(frozen=True)
class UserContext:
    user: int | ProxyDescriptor
    category: str
    urgency: str = "whenever"
    user_languages: frozenset[str] = frozenset(("en",))
    beta_override: float | None = None

    def __post_init__(self):
        if self.urgency not in URGENCIES:
            raise ValidationError(f"unknown urgency {self.urgency!r}")
        if not self.user_languages:
            raise ValidationError("user_languages must be non-empty")


@dataclass(frozen=True)
class AdviserEntry:
    """One ranked candidate with the responses that produced the score."""

    member_id: int
    score: float
    sources: tuple[WeightedResponse, ...]
    reachable_ok: bool = True
    language_ok: bool = True
    channel_ok: bool = True


@dataclass(frozen=True)
class Recommendation:
    query_id: str
    origin: int
    category: str
    ranked: tuple[AdviserEntry, ...]

    @property
    def top3(self) -> tuple[AdviserEntry, ...]:
        """The first (at most) three net-positively rated advisers."""
        return tuple(e for e in self.ranked if e.score > 0)[:3]


def select_proxy(
    descriptor: ProxyDescriptor,
    community: Community,
    weights: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0),
) -> int:
    """Pick the member whose profile is most similar to the descriptor.

    Similarity is a weighted sum of: gender match (0/1), grade proximity
    1/(1+|dgrade|), language Jaccard overlap, and Jaccard overlap of the
    declared interests with the categories the member has rated.
    Unpopulated descriptor fields contribute nothing; ties go to the
    lowest member id.
    """
    if not community.members:
        raise ValidationError("cannot select a proxy in an empty community")
    w_gender, w_grade, w_lang, w_interest = weights
    best_id, best_score = None, -1.0
    for member_id in sorted(community.members):
        profile = community.members[member_id]
        score = 0.0
        if descriptor.gender is not None and descriptor.gender == profile.gender:
            score += w_gender
        if descriptor.grade is not None:
            score += w_grade / (1.0 + abs(descriptor.grade - profile.grade))
        if descriptor.languages:
            score += w_lang * _jaccard(descriptor.languages, profile.languages)
        if descriptor.declared_interests:
            score += w_interest * _jaccard(
                descriptor.declared_interests, community.rated_categories(member_id)
            )
        if score > best_score:
            best_id, best_score = member_id, score
    return best_id


def filter_feasible(
    responses: Sequence[WeightedResponse],
    ctx: UserContext,
    community: Community,
    policy: Mapping[str, ChannelRule] = DEFAULT_CHANNEL_POLICY,
) -> list[WeightedResponse]:
    """Drop responses whose subject the user cannot approach.

    A subject survives if it is reachable when the urgency demands it,
    shares a language with the user, and offers a channel allowed for
    the urgency.  Surviving weights are renormalized to sum to 1.
    """
    rule = policy[ctx.urgency]
    kept = [r for r in responses
            if all(_feasibility(community, r.subject, ctx, rule))]
    if not kept:
        return []
    total = sum(r.weight for r in kept)
    return [
        WeightedResponse(r.responder, r.subject, r.rate, r.path_trust,
                         r.weight / total, r.path)
        for r in kept
    ]


def _feasibility(community, subject, ctx, rule) -> tuple[bool, bool, bool]:
    profile = community.require_member(subject)
    reachable_ok = profile.reachable or not rule.requires_reachable
    language_ok = bool(profile.languages & ctx.user_languages)
    channel_ok = bool(profile.available_channels & rule.allowed_channels)
    return reachable_ok, language_ok, channel_ok


def aggregate_scores(responses: Sequence[WeightedResponse]) -> dict[int, float]:
    """Net score per subject: sum of weights of +1 rates minus -1 rates."""
    scores: dict[int, float] = {}
    for r in responses:
        scores[r.subject] = scores.get(r.subject, 0.0) + r.weight * r.rate
    return scores


def rank_responses(
    result: GatherResult,
    ctx: UserContext,
    community: Community,
    params: TrustParams,
    policy: Mapping[str, ChannelRule] = DEFAULT_CHANNEL_POLICY,
) -> Recommendation:
    """Weight, filter, and rank an already-gathered response set."""
    if ctx.beta_override is not None:
        params = params.with_beta(ctx.beta_override)
    weighted = annotate_trust(result, community, params)
    feasible = filter_feasible(weighted, ctx, community, policy)
    scores = aggregate_scores(feasible)
    by_subject: dict[int, list[WeightedResponse]] = {}
    for r in feasible:
        by_subject.setdefault(r.subject, []).append(r)
    ranked = tuple(
        AdviserEntry(
            member_id=subject,
            score=scores[subject],
            sources=tuple(by_subject[subject]),
        )
        for subject in sorted(scores, key=lambda s: (-scores[s], s))
    )
    return Recommendation(
        query_id=result.query_id,
        origin=result.origin,
        category=ctx.category,
        ranked=ranked,
    )


def recommend(
    ctx: UserContext,
    community: Community,
    params: TrustParams,
    policy: Mapping[str, ChannelRule] = DEFAULT_CHANNEL_POLICY,
    hop_limit: int | None = None,
    query_id: str | None = None,
) -> Recommendation:
    """Full recommendation pipeline for one user request.

    Deterministic: candidates are ranked by score descending with ties
    broken by ascending member id, and only net-positively rated
    candidates can enter the top three.
    """
    community.require_category(ctx.category)
    if isinstance(ctx.user, ProxyDescriptor):
        origin = select_proxy(ctx.user, community)
    else:
        origin = community.require_member(ctx.user).member_id
    result = gather(
        community, origin, ctx.category, hop_limit=hop_limit, query_id=query_id
    )
    return rank_responses(result, ctx, community, params, policy)


def _jaccard(a: frozenset, b: frozenset) -> float:
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)
