"""Seeded synthetic community generator.

Produces communities at the prototype scale (43 members, 19 knowledge
categories by default) with a choice of acquaintance-graph models, a
tunable rating density, and optionally one planted expert per category
who is guaranteed strictly more positive ratings in that category than
anyone else (with a margin of two, so the lead survives a vote or two
going missing).  Everything is driven by one numpy PCG64 stream, so a
given spec yields a byte-identical document every time.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .community import CHANNELS, Community, MemberProfile, Rating, ValidationError

__all__ = ["ScenarioSpec", "generate_scenario", "generate_document", "DEFAULT_BOUNDS"]

DEFAULT_BOUNDS = ((0.0, 0.0, 0.0), (20.0, 15.0, 3.0))

GRAPH_MODELS = ("small_world", "random", "clustered")

# class / specialized-topic / campus-life labels; the remainder are
# numbered topics
_BASE_LABELS = (
    "Math", "Java programming", "Events", "Networking", "Databases",
    "Algorithms", "Statistics", "English writing", "Presentations",
    "Lab equipment", "Career advice", "Thesis formatting",
)

_EXTRA_LANGUAGES = ("ja", "fr", "de", "es", "zh")


@dataclass(frozen=True)
class ScenarioSpec:
    member_count: int = 43
    category_count: int = 19
    graph_model: str = "small_world"
    graph_params: Mapping[str, float] = field(default_factory=dict)
    ratings_density: float = 0.25
    planted_experts: Mapping[str, int] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.member_count < 0 or self.category_count < 0:
            raise ValidationError("member_count and category_count must be >= 0")
        if self.graph_model not in GRAPH_MODELS:
            raise ValidationError(f"unknown graph model {self.graph_model!r}")
        if not 0.0 <= self.ratings_density <= 1.0:
            raise ValidationError("ratings_density must be in [0, 1]")


def category_ids(count: int) -> list[str]:
    return [f"c{k:02d}" for k in range(count)]


def generate_scenario(spec: ScenarioSpec) -> Community:
    """Generate one community; deterministic for a given spec."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n = spec.member_count

    categories = {
        cid: (_BASE_LABELS[k] if k < len(_BASE_LABELS) else f"Topic {k:02d}")
        for k, cid in enumerate(category_ids(spec.category_count))
    }
    if spec.planted_experts:
        for cid, expert in spec.planted_experts.items():
            if cid not in categories:
                raise ValidationError(f"planted expert for unknown category {cid!r}")
            if not 0 <= expert < n:
                raise ValidationError(
                    f"planted expert id {expert} out of range for {n} members"
                )
            if n < 2:
                raise ValidationError("planted experts need at least two members")

    members = {}
    for m in range(n):
        x = round(float(rng.uniform(DEFAULT_BOUNDS[0][0], DEFAULT_BOUNDS[1][0])), 2)
        y = round(float(rng.uniform(DEFAULT_BOUNDS[0][1], DEFAULT_BOUNDS[1][1])), 2)
        position = (x, y, 0.0)
        languages = {"en"}
        if rng.random() < 0.3:
            languages.add(str(rng.choice(_EXTRA_LANGUAGES)))
        members[m] = MemberProfile(
            member_id=m,
            name=f"Member {m:02d}",
            gender="F" if rng.random() < 0.5 else "M",
            grade=int(rng.integers(1, 5)),
            permanent_location=position,
            current_location=position,
            reachable=True,
            available_channels=frozenset(CHANNELS),
            languages=frozenset(languages),
        )

    edges = {pair: 0.0 for pair in _generate_edges(rng, n, spec)}

    # friend declarations drive the friendliness metric; keep counts spread
    for m in range(n):
        k = int(rng.integers(0, min(9, n)))
        declarers = _choice_without(rng, n, exclude={m}, size=min(k, n - 1))
        if declarers:
            members[m] = replace(members[m], friend_declared_by=frozenset(declarers))

    ratings: dict[tuple[int, str], dict[int, Rating]] = {}

    def add_rating(rater: int, subject: int, category: str, value: int) -> bool:
        held = ratings.setdefault((rater, category), {})
        if subject in held or len(held) >= 3:
            return False
        held[subject] = Rating(rater, subject, category, value, 0)
        return True

    for cid in sorted(categories):
        expert = (spec.planted_experts or {}).get(cid)
        positive_counts: dict[int, int] = {}
        if expert is not None:
            n_expert_raters = min(6, n - 1)
            raters = _choice_without(rng, n, exclude={expert}, size=n_expert_raters)
            for r in raters:
                add_rating(r, expert, cid, +1)
            cap_others = max(0, n_expert_raters - 2)
        else:
            cap_others = None
        p_rater = spec.ratings_density * 0.5
        for rater in range(n):
            if rng.random() >= p_rater:
                continue
            n_subjects = int(rng.integers(1, 4))
            exclude = {rater} if expert is None else {rater, expert}
            if len(exclude) >= n:
                continue
            subjects = _choice_without(rng, n, exclude=exclude, size=n_subjects)
            for subject in subjects:
                value = +1 if rng.random() < 0.8 else -1
                if value > 0 and cap_others is not None \
                        and positive_counts.get(subject, 0) >= cap_others:
                    continue
                if add_rating(rater, subject, cid, value) and value > 0:
                    positive_counts[subject] = positive_counts.get(subject, 0) + 1

    community = Community(
        members=members,
        categories=categories,
        ratings=ratings,
        edges=edges,
        certifications=frozenset(),
        bounds=DEFAULT_BOUNDS,
        tick=0,
    ).validate()

    if spec.planted_experts:
        _check_planted(community, spec.planted_experts)
    return community


def generate_document(spec: ScenarioSpec) -> str:
    return generate_scenario(spec).to_document()


def _check_planted(community: Community, planted: Mapping[str, int]) -> None:
    for cid, expert in planted.items():
        counts: dict[int, int] = {}
        for (rater, category), held in community.ratings.items():
            if category != cid:
                continue
            for subject, rating in held.items():
                if rating.value > 0:
                    counts[subject] = counts.get(subject, 0) + 1
        expert_count = counts.get(expert, 0)
        rival_max = max((c for s, c in counts.items() if s != expert), default=0)
        if expert_count <= rival_max:
            raise ValidationError(
                f"planted expert {expert} in {cid!r} has {expert_count} positive "
                f"ratings, rival has {rival_max}"
            )


def _choice_without(rng, n: int, exclude: set[int], size: int) -> list[int]:
    pool = [m for m in range(n) if m not in exclude]
    size = min(size, len(pool))
    if size == 0:
        return []
    picked = rng.choice(len(pool), size=size, replace=False)
    return sorted(pool[int(k)] for k in picked)


def _generate_edges(rng, n: int, spec: ScenarioSpec) -> set[tuple[int, int]]:
    params = dict(spec.graph_params)
    edges: set[tuple[int, int]] = set()

    def add(i: int, j: int):
        if i != j:
            edges.add((min(i, j), max(i, j)))

    if n < 2:
        return edges
    if spec.graph_model == "small_world":
        k = int(params.get("k", 4))
        rewire_p = float(params.get("rewire_p", 0.1))
        half = max(1, k // 2)
        for i in range(n):
            for step in range(1, half + 1):
                add(i, (i + step) % n)
        rewired = set()
        for (a, b) in sorted(edges):
            if rng.random() < rewire_p:
                target = int(rng.integers(0, n))
                if target != a and (min(a, target), max(a, target)) not in edges:
                    rewired.add((a, b))
                    add(a, target)
        edges -= rewired
    elif spec.graph_model == "random":
        p = float(params.get("edge_p", 0.12))
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    add(i, j)
    else:  # clustered
        groups = max(1, int(params.get("groups", 4)))
        p_in = float(params.get("p_in", 0.5))
        p_out = float(params.get("p_out", 0.03))
        membership = [m % groups for m in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                p = p_in if membership[i] == membership[j] else p_out
                if rng.random() < p:
                    add(i, j)

    _connect_components(edges, n)
    return edges


def _connect_components(edges: set[tuple[int, int]], n: int) -> None:
    """Chain-link disconnected components through their lowest-id nodes."""
    adjacency: dict[int, set[int]] = {m: set() for m in range(n)}
    for a, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen: set[int] = set()
    roots = []
    for start in range(n):
        if start in seen:
            continue
        roots.append(start)
        stack = [start]
        seen.add(start)
        while stack:
            node = stack.pop()
            for nb in adjacency[node]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
    for a, b in zip(roots, roots[1:]):
        edges.add((min(a, b), max(a, b)))
