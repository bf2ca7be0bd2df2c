import dataclasses

import pytest

from socialspace import Community, MemberProfile, Rating


def build_community(
    n=5,
    edges=(),
    categories=("c",),
    ratings=(),
    bounds=((0.0, 0.0, 0.0), (20.0, 15.0, 3.0)),
    profiles=None,
):
    """Small hand-built community for unit tests.

    edges: (i, j) or (i, j, trust_state) tuples.
    ratings: (rater, subject, category, value) tuples, tick 0.
    profiles: {member_id: {field: value}} overrides.
    """
    members = {
        m: MemberProfile(member_id=m, name=f"member-{m}") for m in range(n)
    }
    for m, overrides in (profiles or {}).items():
        members[m] = dataclasses.replace(members[m], **overrides)
    edge_map = {}
    for edge in edges:
        i, j, *rest = edge
        edge_map[(min(i, j), max(i, j))] = float(rest[0]) if rest else 0.0
    rating_map = {}
    for rater, subject, category, value in ratings:
        held = rating_map.setdefault((rater, category), {})
        held[subject] = Rating(rater, subject, category, value, 0)
    return Community(
        members=members,
        categories={c: c for c in categories},
        ratings=rating_map,
        edges=edge_map,
        bounds=bounds,
    ).validate()


@pytest.fixture
def community_factory():
    return build_community
