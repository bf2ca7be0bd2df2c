"""Query flooding over the acquaintance graph.

A query starts at the origin member and spreads along certified edges.
An agent that holds at least one rating in the requested category answers
with all of its rated (subject, rate) pairs and stops the flood there; an
agent holding none forwards the query to every neighbor except the one it
came from.  Each agent processes the query at most once, so the flood
visits each directed edge at most once and always terminates.

The real protocol is asynchronous; here arrivals follow a fixed
breadth-first schedule (FIFO by hop count, neighbors in ascending id
order), which pins down the winning arrival path and makes every run
reproducible.  Responses retrace the winning path in reverse, and their
path trust is the product of the normalized edge trusts along it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .community import Community
from .trust import TrustParams, WeightedResponse, path_trust, response_weights, trust_value

__all__ = ["Query", "Response", "GatherResult", "SnapshotMismatchError",
           "gather", "annotate_trust"]


class SnapshotMismatchError(Exception):
    """A response path references an edge missing from the snapshot."""


@dataclass(frozen=True)
class Query:
    query_id: str
    origin: int
    category: str
    path: tuple[int, ...]
    hop_limit: int | None = None

    def __post_init__(self):
        if not self.path or self.path[0] != self.origin:
            raise ValueError("query path must begin at the origin")
        if len(self.path) != len(set(self.path)):
            raise ValueError("query path repeats an agent")
        if self.hop_limit is not None and self.hop_limit < 1:
            raise ValueError(f"hop_limit must be positive, got {self.hop_limit}")


@dataclass(frozen=True)
class Response:
    query_id: str
    responder: int
    subject: int
    rate: int
    return_path: tuple[int, ...]  # responder first, origin last
    path_trust: float


@dataclass(frozen=True)
class GatherResult:
    query_id: str
    origin: int
    category: str
    responses: tuple[Response, ...]
    agents_visited: int
    messages_sent: int
    paths: tuple[tuple[int, ...], ...] = field(default=())  # winning arrival paths


def gather(
    community: Community,
    origin: int,
    category: str,
    hop_limit: int | None = None,
    query_id: str | None = None,
) -> GatherResult:
    """Simulate one flood and collect the responses.

    The origin relays the query to its neighbors and never answers it
    itself.  ``hop_limit`` bounds the path length in edges (None means
    unbounded).  Deterministic: identical snapshots give identical
    results.
    """
    community.require_member(origin)
    community.require_category(category)
    if query_id is None:
        query_id = f"q-{origin}-{category}"
    query = Query(query_id=query_id, origin=origin, category=category,
                  path=(origin,), hop_limit=hop_limit)

    processed: set[int] = {origin}
    responses: list[Response] = []
    winning_paths: list[tuple[int, ...]] = []
    messages = 0
    queue: deque[tuple[int, int, tuple[int, ...]]] = deque()
    for nb in community.neighbors(origin):
        messages += 1
        queue.append((nb, origin, query.path + (nb,)))

    while queue:
        agent, sender, path = queue.popleft()
        if agent in processed:
            continue  # repeated arrival: ignored
        assert len(path) == len(set(path)), "arrival path revisits an agent"
        processed.add(agent)
        winning_paths.append(path)
        held = community.ratings_held(agent, category)
        if held:
            trusts = [
                trust_value(community.edge_trust_raw(path[k], path[k + 1]))
                for k in range(len(path) - 1)
            ]
            p_trust = path_trust(trusts)
            return_path = tuple(reversed(path))
            for rating in held:
                responses.append(Response(
                    query_id=query.query_id,
                    responder=agent,
                    subject=rating.subject,
                    rate=rating.value,
                    return_path=return_path,
                    path_trust=p_trust,
                ))
            continue  # respond, do not forward
        if query.hop_limit is not None and len(path) - 1 >= query.hop_limit:
            continue
        for nb in community.neighbors(agent):
            if nb == sender:
                continue
            messages += 1
            queue.append((nb, agent, path + (nb,)))

    return GatherResult(
        query_id=query.query_id,
        origin=origin,
        category=category,
        responses=tuple(responses),
        agents_visited=len(processed),
        messages_sent=messages,
        paths=tuple(winning_paths),
    )


def annotate_trust(
    result: GatherResult,
    community: Community,
    params: TrustParams,
) -> list[WeightedResponse]:
    """Recompute path trusts from the snapshot and weight the response set.

    Output is sorted by weight descending, ties by ascending responder
    then subject id.  A path edge missing from the snapshot means the
    snapshot does not match the gather and is a hard failure.
    """
    if not result.responses:
        return []
    trusts = []
    for response in result.responses:
        arrival = tuple(reversed(response.return_path))
        edge_values = []
        for k in range(len(arrival) - 1):
            i, j = arrival[k], arrival[k + 1]
            if not community.has_edge(i, j):
                raise SnapshotMismatchError(
                    f"edge ({i}, {j}) on the path of query {result.query_id!r} "
                    f"is missing from the snapshot"
                )
            edge_values.append(trust_value(community.edge_trust_raw(i, j)))
        trusts.append(path_trust(edge_values))
    weights = response_weights(trusts, params)
    annotated = [
        WeightedResponse(
            responder=r.responder,
            subject=r.subject,
            rate=r.rate,
            path_trust=t,
            weight=w,
            path=tuple(reversed(r.return_path)),
        )
        for r, t, w in zip(result.responses, trusts, weights)
    ]
    annotated.sort(key=lambda wr: (-wr.weight, wr.responder, wr.subject))
    return annotated
