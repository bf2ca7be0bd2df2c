import random

import networkx as nx
import pytest

from socialspace import (
    SnapshotMismatchError,
    TrustParams,
    annotate_trust,
    gather,
)

from conftest import build_community

P = TrustParams()


def flood_oracle(n, edges, ratings, origin, category):
    """Independent responder-set oracle.

    A member u responds iff u != origin, u holds a rating in the
    category, and some path origin -> u has only rating-free interior
    nodes (responders absorb the query, everyone else forwards it).
    Computed by reachability over the rating-free subgraph.
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((i, j) for (i, j, *_) in edges)
    rated = {r for (r, s, c, v) in ratings if c == category}
    allowed = (set(graph) - rated) | {origin}
    reach = nx.node_connected_component(graph.subgraph(allowed), origin)
    expected = set()
    for (r, s, c, v) in ratings:
        if c != category or r == origin:
            continue
        if any(nb in reach for nb in graph.neighbors(r)):
            expected.add((r, s))
    return expected


def random_instance(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 12)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < rng.uniform(0.1, 0.6)]
    ratings = []
    seen = set()
    for _ in range(rng.randint(0, 2 * n)):
        r, s = rng.randrange(n), rng.randrange(n)
        if r == s or (r, s) in seen:
            continue
        if sum(1 for (rr, ss, *_ ) in seen | {(r, s)} if rr == r) > 3:
            continue
        seen.add((r, s))
        ratings.append((r, s, "c", rng.choice([-1, 1])))
    origin = rng.randrange(n)
    return n, edges, ratings, origin


class TestGatherExamples:
    def test_star_graph_one_rated_leaf(self):
        # origin 0 at the center, leaves 1..3, leaf 2 holds one rating
        com = build_community(
            n=5, edges=[(0, 1), (0, 2), (0, 3)],
            ratings=[(2, 4, "c", 1)],
        )
        result = gather(com, 0, "c")
        assert len(result.responses) == 1
        assert result.responses[0].responder == 2
        assert result.responses[0].subject == 4
        assert result.agents_visited == 4

    def test_isolated_origin(self):
        com = build_community(n=3)
        result = gather(com, 0, "c")
        assert result.responses == ()
        assert result.agents_visited == 1
        assert result.messages_sent == 0

    def test_triangle_all_rated(self):
        # everyone holds a rating; both neighbors respond exactly once
        com = build_community(
            n=4, edges=[(0, 1), (1, 2), (0, 2)],
            ratings=[(0, 3, "c", 1), (1, 3, "c", 1), (2, 3, "c", 1)],
        )
        result = gather(com, 0, "c")
        assert len(result.responses) == 2
        assert {r.responder for r in result.responses} == {1, 2}

    def test_origin_ratings_excluded(self):
        com = build_community(n=3, edges=[(0, 1)], ratings=[(0, 2, "c", 1)])
        assert gather(com, 0, "c").responses == ()

    def test_response_paths_and_trust(self):
        # chain 0 - 1 - 2 with known edge trusts; responder at the end
        com = build_community(
            n=4, edges=[(0, 1, 0.6), (1, 2, 0.0)],
            ratings=[(2, 3, "c", 1)],
        )
        result = gather(com, 0, "c")
        (response,) = result.responses
        assert response.return_path == (2, 1, 0)
        assert response.path_trust == pytest.approx(0.8 * 0.5)

    def test_hop_limit(self):
        com = build_community(
            n=4, edges=[(0, 1), (1, 2), (2, 3)], ratings=[(3, 0, "c", 1)],
        )
        assert len(gather(com, 0, "c").responses) == 1
        assert gather(com, 0, "c", hop_limit=2).responses == ()
        assert len(gather(com, 0, "c", hop_limit=3).responses) == 1

    def test_multiple_ratings_one_responder(self):
        com = build_community(
            n=5, edges=[(0, 1)],
            ratings=[(1, 2, "c", 1), (1, 3, "c", -1)],
        )
        result = gather(com, 0, "c")
        assert [(r.subject, r.rate) for r in result.responses] == [(2, 1), (3, -1)]
        assert len({r.path_trust for r in result.responses}) == 1


class TestGatherProperties:
    def test_oracle_equivalence_on_random_graphs(self):
        for seed in range(300):
            n, edges, ratings, origin = random_instance(seed)
            com = build_community(n=n, edges=edges, ratings=ratings)
            result = gather(com, origin, "c")
            got = {(r.responder, r.subject) for r in result.responses}
            assert got == flood_oracle(n, edges, ratings, origin, "c"), (
                f"seed {seed}: {got} vs oracle"
            )
            assert result.messages_sent <= 2 * len(com.edges)
            visited = [p[-1] for p in result.paths]
            assert len(visited) == len(set(visited))

    def test_no_return_path_through_another_responder(self):
        for seed in range(120):
            n, edges, ratings, origin = random_instance(seed)
            com = build_community(n=n, edges=edges, ratings=ratings)
            result = gather(com, origin, "c")
            responders = {r.responder for r in result.responses}
            for r in result.responses:
                interior = set(r.return_path[1:-1])
                assert not interior & responders

    def test_determinism(self):
        for seed in (1, 17, 99):
            n, edges, ratings, origin = random_instance(seed)
            com = build_community(n=n, edges=edges, ratings=ratings)
            assert gather(com, origin, "c") == gather(com, origin, "c")

    def test_unknown_origin_and_category(self):
        com = build_community(n=2)
        with pytest.raises(Exception, match="unknown member"):
            gather(com, 9, "c")
        with pytest.raises(Exception, match="unknown category"):
            gather(com, 0, "nope")


class TestAnnotateTrust:
    def test_two_responses_weighted(self):
        # paths with trust products 0.75 and 0.5
        com = build_community(
            n=4, edges=[(0, 1, 0.5), (0, 2, 0.0)],
            ratings=[(1, 3, "c", 1), (2, 3, "c", 1)],
        )
        result = gather(com, 0, "c")
        weighted = annotate_trust(result, com, P)
        assert weighted[0].path_trust == pytest.approx(0.75)
        assert weighted[0].weight == pytest.approx(0.6339745962155613, abs=1e-9)
        assert weighted[1].weight == pytest.approx(0.36602540378443865, abs=1e-9)

    def test_single_response_weight_one(self):
        com = build_community(n=3, edges=[(0, 1)], ratings=[(1, 2, "c", 1)])
        weighted = annotate_trust(gather(com, 0, "c"), com, P)
        assert [w.weight for w in weighted] == [1.0]

    def test_beta_zero_uniform(self):
        com = build_community(
            n=5, edges=[(0, 1), (0, 2), (0, 3)],
            ratings=[(1, 4, "c", 1), (2, 4, "c", 1), (3, 4, "c", -1)],
        )
        weighted = annotate_trust(gather(com, 0, "c"), com, TrustParams(beta=0.0))
        assert all(w.weight == pytest.approx(1 / 3) for w in weighted)

    def test_missing_edge_is_hard_failure(self):
        com = build_community(n=3, edges=[(0, 1)], ratings=[(1, 2, "c", 1)])
        result = gather(com, 0, "c")
        stale = build_community(n=3, ratings=[(1, 2, "c", 1)])
        with pytest.raises(SnapshotMismatchError):
            annotate_trust(result, stale, P)

    def test_sorted_by_weight_then_responder(self):
        com = build_community(
            n=6, edges=[(0, 1, 0.5), (0, 2, 0.5), (0, 3, -0.5)],
            ratings=[(3, 4, "c", 1), (1, 4, "c", 1), (2, 5, "c", -1)],
        )
        weighted = annotate_trust(gather(com, 0, "c"), com, P)
        assert [w.responder for w in weighted] == [1, 2, 3]
