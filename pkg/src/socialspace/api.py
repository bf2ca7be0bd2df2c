"""HTTP service exposing the engine.

All request and response bodies use the same canonical JSON rendering as
the community document, and responses carry no timestamps or server-made
identifiers (query ids and session ids come from the caller), so
identical state plus identical request always produces byte-identical
bytes on the wire.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request, Response

from .community import (
    Community,
    CommunityError,
    DocumentError,
    MemberProfile,
    UnknownIdError,
    ValidationError,
    canonical_json,
)
from .config import EngineConfig
from .engine import Engine, SimulationRecord
from .haptics import FieldGrid, GridSpec, PoleAssignment
from .recommender import Recommendation, ProxyDescriptor, UserContext
from .routing import GatherResult, SnapshotMismatchError
from .trust import trust_value

__all__ = ["create_app", "serve"]


def _json_response(payload, status: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status,
        media_type="application/json",
    )


def _error(code: str, message: str, status: int) -> Response:
    return _json_response({"error": {"code": code, "message": message}}, status)


def member_payload(p: MemberProfile) -> dict:
    return {
        "member_id": p.member_id,
        "name": p.name,
        "gender": p.gender,
        "grade": p.grade,
        "permanent_location": list(p.permanent_location),
        "current_location": (
            None if p.current_location is None else list(p.current_location)
        ),
        "reachable": p.reachable,
        "available_channels": sorted(p.available_channels),
        "languages": sorted(p.languages),
        "friend_declared_by": sorted(p.friend_declared_by),
    }


def recommendation_payload(r: Recommendation) -> dict:
    return {
        "query_id": r.query_id,
        "origin": r.origin,
        "category": r.category,
        "ranked": [
            {
                "member_id": e.member_id,
                "score": e.score,
                "sources": [
                    {
                        "responder": s.responder,
                        "subject": s.subject,
                        "rate": s.rate,
                        "path_trust": s.path_trust,
                        "weight": s.weight,
                        "path": list(s.path),
                    }
                    for s in e.sources
                ],
            }
            for e in r.ranked
        ],
        "top3": [e.member_id for e in r.top3],
    }


def trace_payload(g: GatherResult) -> dict:
    return {
        "query_id": g.query_id,
        "origin": g.origin,
        "category": g.category,
        "agents_visited": g.agents_visited,
        "messages_sent": g.messages_sent,
        "paths": [list(p) for p in g.paths],
        "responses": [
            {
                "responder": r.responder,
                "subject": r.subject,
                "rate": r.rate,
                "path_trust": r.path_trust,
                "return_path": list(r.return_path),
            }
            for r in g.responses
        ],
    }


def field_payload(grid: FieldGrid, poles: PoleAssignment) -> dict:
    nx, ny, nz = grid.spec.shape
    return {
        "grid": {
            "min": list(grid.spec.min_corner),
            "max": list(grid.spec.max_corner),
            "shape": [nx, ny, nz],
        },
        "pole": {
            "member": poles.pole_member,
            "sign": poles.pole_sign,
            "position": (
                None if poles.pole_position is None else list(poles.pole_position)
            ),
            "focus": (
                None if poles.focus_position is None else list(poles.focus_position)
            ),
        },
        # row-major (x outermost) flattening of the sampled boxes
        "force": [[float(v) for v in f] for f in grid.force.reshape(-1, 3)],
        "viscosity": [float(v) for v in grid.viscosity.reshape(-1)],
    }


def _parse_user_context(body: dict) -> UserContext:
    user = body.get("user")
    if isinstance(user, dict):
        user = ProxyDescriptor(
            gender=user.get("gender"),
            grade=user.get("grade"),
            languages=frozenset(user.get("languages", ())),
            declared_interests=frozenset(user.get("declared_interests", ())),
        )
    elif isinstance(user, int):
        pass
    else:
        raise ValidationError("user must be a member id or a proxy descriptor")
    return UserContext(
        user=user,
        category=str(body["category"]),
        urgency=body.get("urgency", "whenever"),
        user_languages=frozenset(body.get("user_languages", ("en",))),
        beta_override=body.get("beta_override"),
    )


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="socialspace", docs_url=None, redoc_url=None)

    @app.exception_handler(CommunityError)
    async def _community_error(request, exc):
        if isinstance(exc, UnknownIdError):
            return _error("unknown_id", str(exc), 404)
        if isinstance(exc, DocumentError):
            return _error("document", str(exc), 400)
        return _error("validation", str(exc), 422)

    @app.exception_handler(SnapshotMismatchError)
    async def _snapshot_error(request, exc):
        return _error("snapshot_mismatch", str(exc), 409)

    async def _body(request: Request) -> dict:
        raw = await request.body()
        try:
            body = json.loads(raw) if raw else {}
        except json.JSONDecodeError as exc:
            raise DocumentError(f"malformed request body: {exc}") from None
        if not isinstance(body, dict):
            raise DocumentError("request body must be a JSON object")
        return body

    @app.get("/config")
    async def get_config():
        return _json_response(engine.config.to_payload())

    @app.get("/members")
    async def list_members():
        community = engine.snapshot()
        return _json_response({
            "tick": community.tick,
            "members": [member_payload(p) for _, p in sorted(community.members.items())],
        })

    @app.get("/categories")
    async def list_categories():
        community = engine.snapshot()
        return _json_response({
            "categories": [
                {"category_id": cid, "label": label}
                for cid, label in sorted(community.categories.items())
            ],
        })

    @app.get("/graph")
    async def get_graph():
        community = engine.snapshot()
        return _json_response({
            "tick": community.tick,
            "edges": [
                {"a": a, "b": b, "trust_state": t_raw, "trust": trust_value(t_raw)}
                for (a, b), t_raw in sorted(community.edges.items())
            ],
        })

    @app.get("/members/{member_id}")
    async def get_member(member_id: int):
        community = engine.snapshot()
        profile = community.require_member(member_id)
        return _json_response({
            "member": member_payload(profile),
            "friendliness": community.friendliness(member_id),
            "socializability": community.socializability(member_id),
            "neighbors": list(community.neighbors(member_id)),
        })

    @app.post("/members/{member_id}/location")
    async def set_location(member_id: int, request: Request):
        body = await _body(request)
        engine.set_location(member_id, body.get("current_location"))
        return _json_response({"member": member_payload(
            engine.snapshot().require_member(member_id))})

    @app.post("/members/{member_id}/reachable")
    async def set_reachable(member_id: int, request: Request):
        body = await _body(request)
        if "reachable" not in body:
            raise ValidationError("body must carry 'reachable'")
        engine.set_reachable(member_id, bool(body["reachable"]))
        return _json_response({"member": member_payload(
            engine.snapshot().require_member(member_id))})

    @app.post("/members/{member_id}/friends")
    async def set_friend(member_id: int, request: Request):
        body = await _body(request)
        if "declared_by" not in body:
            raise ValidationError("body must carry 'declared_by'")
        engine.set_friend_declaration(
            member_id, int(body["declared_by"]), bool(body.get("declared", True))
        )
        return _json_response({"member": member_payload(
            engine.snapshot().require_member(member_id))})

    @app.post("/certifications")
    async def certify(request: Request):
        body = await _body(request)
        if "from" not in body or "to" not in body:
            raise ValidationError("body must carry 'from' and 'to'")
        i, j = int(body["from"]), int(body["to"])
        created = engine.certify(i, j)
        return _json_response({"from": i, "to": j, "edge_created": created})

    @app.post("/ratings")
    async def submit_ratings(request: Request):
        body = await _body(request)
        entries = body.get("ratings")
        if not isinstance(entries, list) or not entries:
            raise ValidationError("body must carry a non-empty 'ratings' list")
        batch = []
        for rec in entries:
            try:
                batch.append((int(rec["rater"]), int(rec["subject"]),
                              str(rec["category"]), int(rec["value"])))
            except (KeyError, TypeError, ValueError):
                raise ValidationError(f"malformed rating entry {rec!r}") from None
        tick, updates = engine.submit_ratings(batch)
        return _json_response({"tick": tick, "trust_updates": updates})

    @app.post("/recommendations")
    async def post_recommendation(request: Request):
        body = await _body(request)
        if "category" not in body:
            raise ValidationError("body must carry 'category'")
        ctx = _parse_user_context(body)
        recommendation = engine.recommend(ctx, query_id=body.get("query_id"))
        return _json_response(recommendation_payload(recommendation))

    @app.get("/queries/{query_id}")
    async def get_trace(query_id: str):
        return _json_response(trace_payload(engine.trace(query_id)))

    @app.post("/field")
    async def post_field(request: Request):
        body = await _body(request)
        for key in ("query_id", "hip", "grid"):
            if key not in body:
                raise ValidationError(f"body must carry {key!r}")
        grid = body["grid"]
        try:
            spec = GridSpec(
                min_corner=tuple(float(v) for v in grid["min"]),
                max_corner=tuple(float(v) for v in grid["max"]),
                shape=tuple(int(v) for v in grid["shape"]),
            )
        except (KeyError, TypeError, ValueError):
            raise ValidationError(f"malformed grid spec {grid!r}") from None
        if any(s < 1 for s in spec.shape):
            raise ValidationError(f"degenerate grid shape {spec.shape}")
        field, poles = engine.field_grid(body["query_id"], body["hip"], spec)
        return _json_response(field_payload(field, poles))

    @app.post("/simulation/start")
    async def simulation_start(request: Request):
        body = await _body(request)
        for key in ("session_id", "query_id", "hip"):
            if key not in body:
                raise ValidationError(f"body must carry {key!r}")
        session = engine.start_session(
            str(body["session_id"]), str(body["query_id"]), body["hip"]
        )
        return _json_response({
            "session_id": session.session_id,
            "t": session.state.t,
            "rho": [float(v) for v in session.state.rho],
            "rho_dot": [float(v) for v in session.state.rho_dot],
        })

    @app.post("/simulation/step")
    async def simulation_step(request: Request):
        body = await _body(request)
        for key in ("session_id", "hips", "dt"):
            if key not in body:
                raise ValidationError(f"body must carry {key!r}")
        dt = float(body["dt"])
        if dt <= 0:
            raise ValidationError(f"dt must be positive, got {dt}")
        records = engine.step_session(str(body["session_id"]), body["hips"], dt)
        return _json_response({"records": [r.to_payload() for r in records]})

    return app


def serve(config: EngineConfig, community: Community,
          ui_dir: str | None = None) -> None:
    """Run the service until interrupted; optionally host the UI at /ui."""
    import uvicorn

    engine = Engine(config, community)
    app = create_app(engine)
    if ui_dir:
        from starlette.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
