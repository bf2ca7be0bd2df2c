"""Community data model: member profiles, categories, ratings, social graph.

The community is held as an immutable snapshot; every mutating operation
returns a new snapshot, which is what makes the single-writer /
multi-reader engine trivial to get right.  Persistence is a canonical
JSON document (sorted keys, two-space indent, trailing newline) so that
saving and re-loading is byte-stable.

Acquaintance edges come into existence only through mutual certification:
each side registers an intent, and the edge (with raw trust 0) appears
once both directions are present.  Ratings are binary (+1/-1), capped at
three distinct subjects per rater and category, and each accepted batch
advances the shared tick and feeds the per-edge trust update for every
newly co-rated (subject, category) pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .trust import TrustParams, co_rate_update

SCHEMA_VERSION = 1

GENDERS = ("F", "M", "unspecified")
CHANNELS = ("email", "face_to_face", "instant_message")

Vec3 = tuple[float, float, float]


class CommunityError(Exception):
    """Base class for community data errors."""


class DocumentError(CommunityError):
    """The community document is malformed (not parseable into records)."""


class ValidationError(CommunityError):
    """A record violates a community invariant; the record is named."""


class UnknownIdError(ValidationError):
    """An operation referenced a member or category that does not exist."""


@dataclass(frozen=True)
class MemberProfile:
    member_id: int
    name: str
    gender: str = "unspecified"
    grade: int = 0
    permanent_location: Vec3 = (0.0, 0.0, 0.0)
    current_location: Vec3 | None = None
    reachable: bool = True
    available_channels: frozenset[str] = frozenset(CHANNELS)
    languages: frozenset[str] = frozenset(("en",))
    friend_declared_by: frozenset[int] = frozenset()

    def position(self) -> Vec3 | None:
        """Where the member is displayed: current location, else permanent."""
        return self.current_location if self.current_location is not None else self.permanent_location


@dataclass(frozen=True)
class Rating:
    rater: int
    subject: int
    category: str
    value: int
    tick: int = 0


@dataclass(frozen=True)
class Community:
    """One immutable snapshot of the whole community state."""

    members: Mapping[int, MemberProfile] = field(default_factory=dict)
    categories: Mapping[str, str] = field(default_factory=dict)  # id -> label
    # (rater, category) -> {subject: Rating}
    ratings: Mapping[tuple[int, str], Mapping[int, Rating]] = field(default_factory=dict)
    # (lo, hi) -> raw trust in [-1, 1]
    edges: Mapping[tuple[int, int], float] = field(default_factory=dict)
    # pending one-sided certification intents, directed (from, to)
    certifications: frozenset[tuple[int, int]] = frozenset()
    bounds: tuple[Vec3, Vec3] = ((0.0, 0.0, 0.0), (20.0, 15.0, 3.0))
    tick: int = 0

    # -- derived metrics ------------------------------------------------

    def require_member(self, member_id: int) -> MemberProfile:
        try:
            return self.members[member_id]
        except KeyError:
            raise UnknownIdError(f"unknown member id {member_id}") from None

    def require_category(self, category_id: str) -> str:
        try:
            return self.categories[category_id]
        except KeyError:
            raise UnknownIdError(f"unknown category id {category_id!r}") from None

    def has_edge(self, i: int, j: int) -> bool:
        return _edge_key(i, j) in self.edges

    def edge_trust_raw(self, i: int, j: int) -> float:
        return self.edges[_edge_key(i, j)]

    def neighbors(self, member_id: int) -> tuple[int, ...]:
        self.require_member(member_id)
        out = []
        for (a, b) in self.edges:
            if a == member_id:
                out.append(b)
            elif b == member_id:
                out.append(a)
        return tuple(sorted(out))

    def friendliness(self, member_id: int) -> int:
        """Number of members who declared this member a friend."""
        return len(self.require_member(member_id).friend_declared_by)

    def socializability(self, member_id: int) -> int:
        """Number of contacts in the member's personal network (graph degree)."""
        return len(self.neighbors(member_id))

    def ratings_held(self, member_id: int, category_id: str) -> tuple[Rating, ...]:
        """The (subject, rate) knowledge this member holds in one category,
        sorted by subject id."""
        held = self.ratings.get((member_id, category_id), {})
        return tuple(held[s] for s in sorted(held))

    def rated_categories(self, member_id: int) -> frozenset[str]:
        return frozenset(c for (r, c) in self.ratings if r == member_id)

    # -- mutations (return a new snapshot) ------------------------------

    def certify_edge(self, i: int, j: int) -> "Community":
        """Register a one-sided certification intent from i to j.

        The undirected edge appears, with raw trust 0, once both
        directions have been registered.  Re-registering either side or
        certifying an existing edge is a no-op.
        """
        self.require_member(i)
        self.require_member(j)
        if i == j:
            raise ValidationError(f"self-loop: member {i} cannot certify itself")
        if self.has_edge(i, j):
            return self
        intents = set(self.certifications)
        intents.add((i, j))
        if (j, i) in intents:
            intents.discard((i, j))
            intents.discard((j, i))
            edges = dict(self.edges)
            edges[_edge_key(i, j)] = 0.0
            return replace(self, edges=edges, certifications=frozenset(intents))
        return replace(self, certifications=frozenset(intents))

    def with_location(self, member_id: int, location: Vec3 | None) -> "Community":
        profile = self.require_member(member_id)
        if location is not None:
            location = _as_vec3(location, f"location of member {member_id}")
            if not _inside(location, self.bounds):
                raise ValidationError(
                    f"current_location {location} of member {member_id} "
                    f"is outside the scene bounds {self.bounds}"
                )
        members = dict(self.members)
        members[member_id] = replace(profile, current_location=location)
        return replace(self, members=members)

    def with_reachable(self, member_id: int, reachable: bool) -> "Community":
        profile = self.require_member(member_id)
        members = dict(self.members)
        members[member_id] = replace(profile, reachable=bool(reachable))
        return replace(self, members=members)

    def with_friend_declaration(self, member_id: int, declared_by: int,
                                declared: bool = True) -> "Community":
        profile = self.require_member(member_id)
        self.require_member(declared_by)
        if declared_by == member_id:
            raise ValidationError(
                f"member {member_id} cannot declare themselves a friend"
            )
        friends = set(profile.friend_declared_by)
        (friends.add if declared else friends.discard)(declared_by)
        members = dict(self.members)
        members[member_id] = replace(profile, friend_declared_by=frozenset(friends))
        return replace(self, members=members)

    def with_rating_batch(
        self,
        batch: Iterable[tuple[int, int, str, int]],
        params: TrustParams,
    ) -> tuple["Community", int]:
        """Ingest one batch of (rater, subject, category, value) ratings.

        The whole batch is validated first and applied atomically: the
        shared tick advances by one, the new ratings are stamped with it,
        and every edge whose two endpoints newly co-rate some (subject,
        category) pair receives exactly one trust update, in ascending
        (edge, subject, category) order.  Returns the new snapshot and
        the number of trust updates applied.
        """
        entries = [tuple(e) for e in batch]
        seen: set[tuple[int, int, str]] = set()
        for entry in entries:
            if len(entry) != 4:
                raise ValidationError(f"malformed rating entry {entry!r}")
            rater, subject, category, value = entry
            self.require_member(rater)
            self.require_member(subject)
            self.require_category(category)
            if value not in (-1, 1):
                raise ValidationError(
                    f"rating value must be -1 or +1, got {value!r} "
                    f"(rater {rater}, subject {subject}, category {category!r})"
                )
            if rater == subject:
                raise ValidationError(
                    f"member {rater} cannot rate themselves (category {category!r})"
                )
            key = (rater, subject, category)
            if key in seen:
                raise ValidationError(f"duplicate rating in batch: {key}")
            seen.add(key)
        # the 3-subject cap is checked against the post-batch state
        by_rater_cat: dict[tuple[int, str], set[int]] = {}
        for rater, subject, category, _ in entries:
            existing = set(self.ratings.get((rater, category), {}))
            subjects = by_rater_cat.setdefault((rater, category), existing)
            subjects.add(subject)
            if len(subjects) > 3:
                raise ValidationError(
                    f"rating cap exceeded: rater {rater} would rate "
                    f"{len(subjects)} distinct subjects in category {category!r}"
                )

        new_tick = self.tick + 1
        ratings = {key: dict(held) for key, held in self.ratings.items()}
        changed: list[tuple[int, int, str, int]] = []
        for rater, subject, category, value in entries:
            held = ratings.setdefault((rater, category), {})
            old = held.get(subject)
            if old is not None and old.value == value:
                continue  # identical re-submission: no event
            held[subject] = Rating(rater, subject, category, value, new_tick)
            changed.append((rater, subject, category, value))

        # one update per (edge, subject, category) newly co-rated this tick
        pending: dict[tuple[int, int, int, str], tuple[int, int]] = {}
        for rater, subject, category, value in changed:
            for other in self.neighbors(rater):
                counterpart = ratings.get((other, category), {}).get(subject)
                if counterpart is None or other == subject:
                    continue
                lo, hi = _edge_key(rater, other)
                pending[(lo, hi, subject, category)] = (
                    value,
                    counterpart.value,
                )
        edges = dict(self.edges)
        for (lo, hi, subject, category) in sorted(pending):
            r_i, r_j = pending[(lo, hi, subject, category)]
            edges[(lo, hi)] = co_rate_update(edges[(lo, hi)], r_i, r_j, params)

        frozen = {key: dict(held) for key, held in ratings.items()}
        new = replace(self, ratings=frozen, edges=edges, tick=new_tick)
        return new, len(pending)

    # -- validation ------------------------------------------------------

    def validate(self) -> "Community":
        for member_id, profile in self.members.items():
            if profile.member_id != member_id:
                raise ValidationError(
                    f"member record keyed {member_id} carries id {profile.member_id}"
                )
            if profile.gender not in GENDERS:
                raise ValidationError(
                    f"member {member_id}: unknown gender {profile.gender!r}"
                )
            unknown = set(profile.available_channels) - set(CHANNELS)
            if unknown:
                raise ValidationError(
                    f"member {member_id}: unknown channels {sorted(unknown)}"
                )
            if member_id in profile.friend_declared_by:
                raise ValidationError(
                    f"member {member_id} appears in their own friend_declared_by"
                )
            for declarer in profile.friend_declared_by:
                if declarer not in self.members:
                    raise ValidationError(
                        f"member {member_id}: friend declaration by unknown member {declarer}"
                    )
            if profile.current_location is not None and not _inside(
                profile.current_location, self.bounds
            ):
                raise ValidationError(
                    f"member {member_id}: current_location "
                    f"{profile.current_location} outside scene bounds"
                )
        for (a, b), t_raw in self.edges.items():
            if a == b:
                raise ValidationError(f"self-loop: edge ({a}, {b})")
            if a > b:
                raise ValidationError(f"edge ({a}, {b}) not stored in canonical order")
            if a not in self.members or b not in self.members:
                raise ValidationError(f"dangling edge ({a}, {b})")
            if not -1.0 <= t_raw <= 1.0:
                raise ValidationError(
                    f"edge ({a}, {b}): trust state {t_raw} outside [-1, 1]"
                )
        for (i, j) in self.certifications:
            if i == j:
                raise ValidationError(f"self-loop: certification ({i}, {j})")
            if i not in self.members or j not in self.members:
                raise ValidationError(f"certification ({i}, {j}) names unknown member")
        for (rater, category), held in self.ratings.items():
            if rater not in self.members:
                raise ValidationError(f"rating by unknown member {rater}")
            if category not in self.categories:
                raise ValidationError(
                    f"rating by member {rater} in unknown category {category!r}"
                )
            if len(held) > 3:
                raise ValidationError(
                    f"rating cap exceeded: rater {rater} rates {len(held)} "
                    f"distinct subjects in category {category!r}"
                )
            for subject, rating in held.items():
                if subject == rater:
                    raise ValidationError(
                        f"member {rater} rates themselves in category {category!r}"
                    )
                if subject not in self.members:
                    raise ValidationError(
                        f"rating of unknown subject {subject} by member {rater}"
                    )
                if rating.value not in (-1, 1):
                    raise ValidationError(
                        f"rating value must be -1 or +1, got {rating.value!r} "
                        f"(rater {rater}, subject {subject}, category {category!r})"
                    )
                if rating.tick < 0:
                    raise ValidationError(
                        f"negative rating tick (rater {rater}, subject {subject})"
                    )
        if self.tick < 0:
            raise ValidationError(f"negative community tick {self.tick}")
        return self

    # -- persistence -----------------------------------------------------

    def to_document(self) -> str:
        """Serialize to the canonical community document (byte-stable)."""
        doc = {
            "schema_version": SCHEMA_VERSION,
            "bounds": {"min": list(self.bounds[0]), "max": list(self.bounds[1])},
            "tick": self.tick,
            "members": [
                {
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
                for _, p in sorted(self.members.items())
            ],
            "categories": [
                {"category_id": cid, "label": label}
                for cid, label in sorted(self.categories.items())
            ],
            "ratings": [
                {
                    "rater": r.rater,
                    "subject": r.subject,
                    "category": r.category,
                    "value": r.value,
                    "tick": r.tick,
                }
                for r in sorted(
                    (r for held in self.ratings.values() for r in held.values()),
                    key=lambda r: (r.rater, r.category, r.subject),
                )
            ],
            "certifications": [
                {"from": i, "to": j} for (i, j) in sorted(self.certifications)
            ],
            "edges": [
                {"a": a, "b": b, "trust_state": t}
                for (a, b), t in sorted(self.edges.items())
            ],
        }
        return canonical_json(doc)


def _edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def _inside(p: Vec3, bounds: tuple[Vec3, Vec3]) -> bool:
    lo, hi = bounds
    return all(lo[k] <= p[k] <= hi[k] for k in range(3))


def _as_vec3(value, what: str) -> Vec3:
    try:
        x, y, z = value
        return (float(x), float(y), float(z))
    except (TypeError, ValueError):
        raise DocumentError(f"{what}: expected a 3-vector, got {value!r}") from None


def canonical_json(obj) -> str:
    """Canonical rendering shared by documents and API bodies."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_community(source: str | bytes) -> Community:
    """Parse and validate a community document.

    Raises DocumentError for malformed input and ValidationError for
    records violating an invariant; invalid documents are rejected,
    never repaired.
    """
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError(f"document is not UTF-8: {exc}") from None
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("malformed document: top level must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {version!r}")

    def section(name: str) -> list:
        value = doc.get(name, [])
        if not isinstance(value, list):
            raise DocumentError(f"section {name!r} must be a list")
        return value

    try:
        raw_bounds = doc.get("bounds", {})
        bounds = (
            _as_vec3(raw_bounds.get("min", (0, 0, 0)), "bounds.min"),
            _as_vec3(raw_bounds.get("max", (20, 15, 3)), "bounds.max"),
        )
        members: dict[int, MemberProfile] = {}
        for rec in section("members"):
            member_id = int(rec["member_id"])
            if member_id in members:
                raise ValidationError(f"duplicate member id {member_id}")
            current = rec.get("current_location")
            members[member_id] = MemberProfile(
                member_id=member_id,
                name=str(rec.get("name", f"member-{member_id}")),
                gender=str(rec.get("gender", "unspecified")),
                grade=int(rec.get("grade", 0)),
                permanent_location=_as_vec3(
                    rec.get("permanent_location", (0, 0, 0)),
                    f"permanent_location of member {member_id}",
                ),
                current_location=(
                    None if current is None
                    else _as_vec3(current, f"current_location of member {member_id}")
                ),
                reachable=bool(rec.get("reachable", True)),
                available_channels=frozenset(rec.get("available_channels", CHANNELS)),
                languages=frozenset(rec.get("languages", ("en",))),
                friend_declared_by=frozenset(
                    int(m) for m in rec.get("friend_declared_by", ())
                ),
            )
        categories: dict[str, str] = {}
        for rec in section("categories"):
            cid = str(rec["category_id"])
            if cid in categories:
                raise ValidationError(f"duplicate category id {cid!r}")
            categories[cid] = str(rec.get("label", cid))
        ratings: dict[tuple[int, str], dict[int, Rating]] = {}
        for rec in section("ratings"):
            rating = Rating(
                rater=int(rec["rater"]),
                subject=int(rec["subject"]),
                category=str(rec["category"]),
                value=int(rec["value"]),
                tick=int(rec.get("tick", 0)),
            )
            held = ratings.setdefault((rating.rater, rating.category), {})
            if rating.subject in held:
                raise ValidationError(
                    f"duplicate rating (rater {rating.rater}, subject "
                    f"{rating.subject}, category {rating.category!r})"
                )
            held[rating.subject] = rating
        certifications = set()
        for rec in section("certifications"):
            certifications.add((int(rec["from"]), int(rec["to"])))
        edges: dict[tuple[int, int], float] = {}
        for rec in section("edges"):
            a, b = int(rec["a"]), int(rec["b"])
            if a == b:
                raise ValidationError(f"self-loop: edge ({a}, {b})")
            key = _edge_key(a, b)
            if key in edges:
                raise ValidationError(f"duplicate edge ({a}, {b})")
            edges[key] = float(rec.get("trust_state", 0.0))
        tick = int(doc.get("tick", 0))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CommunityError):
            raise
        raise DocumentError(f"malformed document: {exc!r}") from None

    community = Community(
        members=members,
        categories=categories,
        ratings=ratings,
        edges=edges,
        certifications=frozenset(certifications),
        bounds=bounds,
        tick=tick,
    )
    return community.validate()
