"""Command-line front end: gen / query / simulate / field / serve."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .community import CommunityError, canonical_json, load_community
from .config import EngineConfig, load_config
from .engine import Engine, SimulationSession
from .haptics import GridSpec, ProbeState, map_social_to_tactile, sample_field, select_pole
from .recommender import UserContext
from .scenario import ScenarioSpec, category_ids, generate_document

__all__ = ["main"]


def _vec3(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z got {text!r}")
    return tuple(float(p) for p in parts)


def _shape(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected nx,ny,nz got {text!r}")
    return tuple(int(p) for p in parts)


def _planted(text: str, member_count: int, category_count: int):
    if text == "auto":
        return {
            cid: (7 * k + 3) % member_count
            for k, cid in enumerate(category_ids(category_count))
        }
    planted = {}
    for item in text.split(","):
        cid, _, member = item.partition("=")
        if not _:
            raise argparse.ArgumentTypeError(f"expected cat=member got {item!r}")
        planted[cid.strip()] = int(member)
    return planted


def _load(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return load_community(handle.read())


def _engine(args) -> EngineConfig:
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as handle:
            return load_config(handle.read())
    return EngineConfig()


def cmd_gen(args) -> int:
    planted = None
    if args.planted:
        planted = _planted(args.planted, args.members, args.categories)
    spec = ScenarioSpec(
        member_count=args.members,
        category_count=args.categories,
        graph_model=args.graph,
        ratings_density=args.density,
        planted_experts=planted,
        seed=args.seed,
    )
    document = generate_document(spec)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(document)
    else:
        sys.stdout.write(document)
    return 0


def cmd_query(args) -> int:
    community = _load(args.community)
    config = _engine(args)
    engine = Engine(config, community)
    ctx = UserContext(
        user=args.origin,
        category=args.category,
        urgency=args.urgency,
        user_languages=frozenset(args.languages.split(",")),
        beta_override=args.beta,
    )
    recommendation = engine.recommend(ctx, query_id=args.query_id)
    if not recommendation.ranked:
        print("no adviser found")
        return 0
    top3 = {e.member_id for e in recommendation.top3}
    print(f"advisers for category {args.category} (origin {recommendation.origin}):")
    print(f"{'rank':<6}{'member':<8}{'name':<22}{'score':>10}  sources")
    for rank, entry in enumerate(recommendation.ranked, start=1):
        marker = "*" if entry.member_id in top3 else " "
        name = community.members[entry.member_id].name
        print(f"{marker}{rank:<5}{entry.member_id:<8}{name:<22}"
              f"{entry.score:>10.4f}  {len(entry.sources)} response(s)")
    return 0


def cmd_simulate(args) -> int:
    community = _load(args.community)
    config = _engine(args)
    with open(args.trajectory, "r", encoding="utf-8") as handle:
        trajectory = json.load(handle)
    records = trajectory.get("records")
    if not isinstance(records, list) or len(records) < 1:
        raise CommunityError("trajectory file must carry a non-empty 'records' list")

    if args.origin is not None and args.category:
        engine = Engine(config, community)
        ctx = UserContext(user=args.origin, category=args.category)
        engine.recommend(ctx, query_id="cli-sim")
        scene = engine.scene_for("cli-sim")
    else:
        scene = map_social_to_tactile(community, recommended=(), trust_to_user={})

    t0, *hip0 = records[0]
    session = SimulationSession(
        session_id="cli",
        scene=scene,
        config=config,
        state=ProbeState.at_rest(np.asarray(hip0, dtype=float)),
    )
    out = []
    t_prev = float(t0)
    for rec in records[1:]:
        t, *hip = rec
        dt = float(t) - t_prev
        if dt <= 0:
            raise CommunityError(f"trajectory timestamps must increase (at t={t})")
        out.append(session.step(np.asarray(hip, dtype=float), dt).to_payload())
        t_prev = float(t)
    payload = canonical_json({"records": out})
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def cmd_field(args) -> int:
    from .api import field_payload

    community = _load(args.community)
    config = _engine(args)
    engine = Engine(config, community)
    ctx = UserContext(user=args.origin, category=args.category)
    engine.recommend(ctx, query_id="cli-field")
    lo, hi = community.bounds
    spec = GridSpec(
        min_corner=args.min if args.min else lo,
        max_corner=args.max if args.max else hi,
        shape=args.grid,
    )
    grid, poles = engine.field_grid("cli-field", args.hip, spec)
    payload = canonical_json(field_payload(grid, poles))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def cmd_serve(args) -> int:
    from .api import serve

    community = _load(args.community)
    config = _engine(args)
    if args.host or args.port or args.data_path:
        from dataclasses import replace
        config = replace(
            config,
            host=args.host or config.host,
            port=args.port or config.port,
            data_path=args.data_path or config.data_path,
        )
    serve(config, community, ui_dir=args.ui)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="socialspace",
        description="community social-space engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic community document")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--members", type=int, default=43)
    p.add_argument("--categories", type=int, default=19)
    p.add_argument("--graph", choices=("small_world", "random", "clustered"),
                   default="small_world")
    p.add_argument("--density", type=float, default=0.25)
    p.add_argument("--planted", default=None,
                   help="'auto' or comma-separated cat=member pairs")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("query", help="recommend advisers for a category")
    p.add_argument("--community", required=True)
    p.add_argument("--origin", type=int, required=True)
    p.add_argument("--category", required=True)
    p.add_argument("--urgency", choices=("immediate", "today", "whenever"),
                   default="whenever")
    p.add_argument("--languages", default="en")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--query-id", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("simulate", help="integrate a probe trajectory")
    p.add_argument("--community", required=True)
    p.add_argument("--trajectory", required=True,
                   help="JSON file with records [[t, x, y, z], ...]")
    p.add_argument("--origin", type=int, default=None)
    p.add_argument("--category", default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("field", help="sample the force field on a grid")
    p.add_argument("--community", required=True)
    p.add_argument("--origin", type=int, required=True)
    p.add_argument("--category", required=True)
    p.add_argument("--hip", type=_vec3, required=True)
    p.add_argument("--grid", type=_shape, default=(20, 15, 1))
    p.add_argument("--min", type=_vec3, default=None)
    p.add_argument("--max", type=_vec3, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--community", required=True)
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--data-path", default=None)
    p.add_argument("--ui", default=None,
                   help="directory with the built frontend, mounted at /ui")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CommunityError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
