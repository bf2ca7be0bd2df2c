"""Force-field model of the social space.

Members become solid spheres whose tactile coefficients encode social
metrics: stiffness falls with friendliness (friendlier feels softer,
quantized to the three discriminable levels 75/200/350 N/m), surface
friction rises with socializability, a radial viscosity field surrounds
a recommended-but-unfriendly member, and a single attraction or
repulsion pole sits on the recommended member nearest the probe (attract
above the 0.5 trust threshold, repel below).

The probe is a point mass driven by the pole spring and braked by the
viscosity field, coupled to the externally supplied probe position (HIP)
through a spring-damper:

    m p'' + lam(p - p1) p' = F_a(p - p0) - F_h(t)
    F_h(t) = k_h (p - hip) + b_h (p' - hip')
    lam(d) = c_a / (1 + d_a d^2)

integrated with a classic fourth-order Runge-Kutta step; the HIP is held
constant within a step.  All social forces and the viscosity fade to
zero through a C1 ramp ending at the 2 m social distance, so members
farther away exert nothing measurable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .community import Community

__all__ = [
    "STIFFNESS_LEVELS", "FieldConfig", "SceneGeometry", "TactileObject",
    "TactileScene", "PoleAssignment", "ProbeState", "GridSpec", "FieldGrid",
    "map_social_to_tactile", "select_pole", "viscosity_at", "feedback_force",
    "step_dynamics", "sample_field",
]

# soft / average / hard contact stiffness, N/m
STIFFNESS_LEVELS = (75.0, 200.0, 350.0)


@dataclass(frozen=True)
class FieldConfig:
    """Physical constants of the probe dynamics and the social fields."""

    mass: float = 0.1              # probe point mass, kg
    k_h: float = 200.0             # HIP coupling spring, N/m
    b_h: float = 5.0               # HIP coupling damper, N*s/m
    k_a: float = 5.0               # attraction/repulsion gain, N/m
    c_a: float = 15.0              # viscosity peak, kg/s
    d_a: float = 3.5               # viscosity falloff, 1/m^2
    trust_threshold: float = 0.5   # attract above, repel below
    social_distance: float = 2.0   # m; fields are negligible beyond
    cutoff_width: float = 0.2      # m; ramp from full to zero ends at social_distance
    epsilon_force: float = 1e-3    # N; negligibility bound
    pole_switch_ramp: float = 0.0  # s; >0 fades fields back in after a pole switch

    def __post_init__(self):
        for name in ("mass", "c_a", "d_a", "social_distance", "cutoff_width",
                     "epsilon_force"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        # the coupling and pole gains may be zero (pure-decay configurations)
        for name in ("k_h", "b_h", "k_a", "pole_switch_ramp"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if not 0.0 <= self.trust_threshold <= 1.0:
            raise ValueError(f"trust_threshold must be in [0, 1], got {self.trust_threshold}")
        if self.cutoff_width > self.social_distance:
            raise ValueError("cutoff_width cannot exceed social_distance")

    def cutoff(self, distance):
        """C1 attenuation: 1 inside the ramp start, 0 beyond social_distance.

        Smoothstep between (social_distance - cutoff_width) and
        social_distance; accepts scalars or arrays.
        """
        start = self.social_distance - self.cutoff_width
        u = np.clip((np.asarray(distance, dtype=float) - start) / self.cutoff_width,
                    0.0, 1.0)
        return 1.0 - u * u * (3.0 - 2.0 * u)


@dataclass(frozen=True)
class SceneGeometry:
    """How members are placed and sized in the tactile space."""

    radius: float = 0.3       # sphere radius, m
    mu_min: float = 0.2       # friction range endpoints
    mu_max: float = 1.0


@dataclass(frozen=True)
class TactileObject:
    member_id: int
    position: tuple[float, float, float]
    radius: float
    stiffness: float           # N/m, one of STIFFNESS_LEVELS
    friction: float
    is_recommended: bool
    trust_to_user: float
    friendliness_raw: int
    socializability_raw: int
    has_viscosity_focus: bool  # recommended and bottom-tercile friendliness

    def pole_sign(self, threshold: float) -> int:
        """+1 attract, -1 repel, 0 at exactly the threshold."""
        if not self.is_recommended:
            return 0
        if self.trust_to_user > threshold:
            return 1
        if self.trust_to_user < threshold:
            return -1
        return 0


@dataclass(frozen=True)
class TactileScene:
    objects: tuple[TactileObject, ...]
    bounds: tuple[tuple[float, float, float], tuple[float, float, float]]


@dataclass(frozen=True)
class PoleAssignment:
    """At most one attraction/repulsion pole and one viscosity focus."""

    pole_member: int | None = None
    pole_position: tuple[float, float, float] | None = None
    pole_sign: int = 0                    # +1 attract, -1 repel
    focus_position: tuple[float, float, float] | None = None

    @property
    def empty(self) -> bool:
        return self.pole_position is None and self.focus_position is None


@dataclass(frozen=True)
class ProbeState:
    rho: np.ndarray       # mass point position, m
    rho_dot: np.ndarray   # mass point velocity, m/s
    hip: np.ndarray       # probe input position, m
    t: float = 0.0

    @classmethod
    def at_rest(cls, hip) -> "ProbeState":
        hip = np.asarray(hip, dtype=float)
        return cls(rho=hip.copy(), rho_dot=np.zeros(3), hip=hip, t=0.0)


def map_social_to_tactile(
    community: Community,
    recommended: Iterable[int],
    trust_to_user: Mapping[int, float],
    geometry: SceneGeometry = SceneGeometry(),
) -> TactileScene:
    """Build the tactile scene for the members of the community.

    Stiffness: members ranked by friendliness are split into terciles
    mapped hard-to-soft onto 350/200/75 N/m.  Friction: socializability
    min-max scaled onto [mu_min, mu_max].  A viscosity focus marks each
    recommended member whose friendliness falls in the bottom tercile.
    Members with no position are excluded with a warning.
    """
    recommended = set(recommended)
    placed = []
    for member_id in sorted(community.members):
        position = community.members[member_id].position()
        if position is None:
            warnings.warn(f"member {member_id} has no position; excluded from scene")
            continue
        placed.append((member_id, position))
    if not placed:
        return TactileScene(objects=(), bounds=community.bounds)

    n = len(placed)
    friendliness = {m: community.friendliness(m) for m, _ in placed}
    socializability = {m: community.socializability(m) for m, _ in placed}
    # rank ascending by friendliness (ties by id); tercile 0 = least friendly
    by_friendliness = sorted(placed, key=lambda mp: (friendliness[mp[0]], mp[0]))
    tercile = {m: (3 * rank) // n for rank, (m, _) in enumerate(by_friendliness)}
    stiffness_of = {0: STIFFNESS_LEVELS[2], 1: STIFFNESS_LEVELS[1], 2: STIFFNESS_LEVELS[0]}

    s_values = [socializability[m] for m, _ in placed]
    s_min, s_max = min(s_values), max(s_values)

    def friction(s: int) -> float:
        if s_max == s_min:
            return (geometry.mu_min + geometry.mu_max) / 2.0
        f = (s - s_min) / (s_max - s_min)
        return geometry.mu_min + f * (geometry.mu_max - geometry.mu_min)

    objects = tuple(
        TactileObject(
            member_id=m,
            position=position,
            radius=geometry.radius,
            stiffness=stiffness_of[tercile[m]],
            friction=friction(socializability[m]),
            is_recommended=m in recommended,
            trust_to_user=float(trust_to_user.get(m, 0.5)),
            friendliness_raw=friendliness[m],
            socializability_raw=socializability[m],
            has_viscosity_focus=(m in recommended and tercile[m] == 0),
        )
        for m, position in placed
    )
    return TactileScene(objects=objects, bounds=community.bounds)


def select_pole(scene: TactileScene, hip, threshold: float = 0.5) -> PoleAssignment:
    """Assign the pole from the recommended member nearest to the HIP.

    That member supplies the attraction/repulsion pole (sign by its
    trust against the threshold) and, if it carries one, the viscosity
    focus.  Ties go to the lowest member id; with nothing recommended
    the assignment is empty and the field is zero.
    """
    hip = np.asarray(hip, dtype=float)
    candidates = [o for o in scene.objects if o.is_recommended]
    if not candidates:
        return PoleAssignment()
    nearest = min(
        candidates,
        key=lambda o: (float(np.linalg.norm(np.asarray(o.position) - hip)), o.member_id),
    )
    sign = nearest.pole_sign(threshold)
    return PoleAssignment(
        pole_member=nearest.member_id,
        pole_position=nearest.position if sign != 0 else None,
        pole_sign=sign,
        focus_position=nearest.position if nearest.has_viscosity_focus else None,
    )


def viscosity_at(p, focus, cfg: FieldConfig) -> float:
    """Radial viscosity lam = c_a / (1 + d_a |p - focus|^2); 0 without focus."""
    if focus is None:
        return 0.0
    d2 = float(np.sum((np.asarray(p, dtype=float) - np.asarray(focus, dtype=float)) ** 2))
    return cfg.c_a / (1.0 + cfg.d_a * d2)


def feedback_force(delta_rho, delta_rho_dot, cfg: FieldConfig) -> np.ndarray:
    """Spring-damper coupling force F_h = k_h * drho + b_h * drho_dot."""
    return cfg.k_h * np.asarray(delta_rho, dtype=float) \
        + cfg.b_h * np.asarray(delta_rho_dot, dtype=float)


def _social_terms(pos, poles: PoleAssignment, cfg: FieldConfig, scale: float):
    """Attraction force and viscosity at one point, cutoff applied."""
    force = np.zeros(3)
    if poles.pole_position is not None and poles.pole_sign != 0:
        r = pos - np.asarray(poles.pole_position, dtype=float)
        att = float(cfg.cutoff(np.linalg.norm(r))) * scale
        # attract: toward the pole; repel: away from it
        force = -poles.pole_sign * cfg.k_a * r * att
    lam = 0.0
    if poles.focus_position is not None:
        d = float(np.linalg.norm(pos - np.asarray(poles.focus_position, dtype=float)))
        lam = viscosity_at(pos, poles.focus_position, cfg) * float(cfg.cutoff(d)) * scale
    return force, lam


def step_dynamics(
    state: ProbeState,
    hip,
    poles: PoleAssignment,
    cfg: FieldConfig,
    dt: float,
    field_scale: float = 1.0,
) -> ProbeState:
    """One RK4 step of the probe dynamics with the HIP held constant.

    ``field_scale`` in [0, 1] attenuates the social terms; the
    simulation session uses it to fade fields back in after a pole
    switch.  Raises on a non-finite state.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    hip = np.asarray(hip, dtype=float)
    y = np.concatenate([state.rho, state.rho_dot])
    if not np.all(np.isfinite(y)) or not np.all(np.isfinite(hip)):
        raise FloatingPointError("probe state is not finite")

    def deriv(y):
        pos, vel = y[:3], y[3:]
        f_h = feedback_force(pos - hip, vel, cfg)
        f_a, lam = _social_terms(pos, poles, cfg, field_scale)
        acc = (f_a - f_h - lam * vel) / cfg.mass
        return np.concatenate([vel, acc])

    k1 = deriv(y)
    k2 = deriv(y + 0.5 * dt * k1)
    k3 = deriv(y + 0.5 * dt * k2)
    k4 = deriv(y + dt * k3)
    y_next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(y_next)):
        raise FloatingPointError("probe state diverged")
    return ProbeState(rho=y_next[:3], rho_dot=y_next[3:], hip=hip, t=state.t + dt)


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned sampling grid: shape cells per axis across the box."""

    min_corner: tuple[float, float, float]
    max_corner: tuple[float, float, float]
    shape: tuple[int, int, int]

    def points(self) -> np.ndarray:
        if any(n < 1 for n in self.shape):
            raise ValueError(f"degenerate grid shape {self.shape}")
        axes = [
            np.linspace(self.min_corner[k], self.max_corner[k], self.shape[k])
            if self.shape[k] > 1 else np.array([self.min_corner[k]])
            for k in range(3)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True)
class FieldGrid:
    spec: GridSpec
    force: np.ndarray      # (nx, ny, nz, 3)
    viscosity: np.ndarray  # (nx, ny, nz)


def sample_field(
    scene: TactileScene,
    poles: PoleAssignment,
    cfg: FieldConfig,
    spec: GridSpec,
    field_scale: float = 1.0,
) -> FieldGrid:
    """Evaluate the force field and viscosity over a grid.

    At each point: the pole spring force (cutoff applied) plus, inside a
    member sphere, a normal contact force of that member's stiffness
    times the penetration depth.  Pure function of its inputs.
    """
    points = spec.points()
    force = np.zeros_like(points)
    lam = np.zeros(len(points))

    if poles.pole_position is not None and poles.pole_sign != 0:
        r = points - np.asarray(poles.pole_position, dtype=float)
        d = np.linalg.norm(r, axis=1)
        att = cfg.cutoff(d) * field_scale
        force += -poles.pole_sign * cfg.k_a * r * att[:, None]
    if poles.focus_position is not None:
        d = np.linalg.norm(points - np.asarray(poles.focus_position, dtype=float), axis=1)
        lam = cfg.c_a / (1.0 + cfg.d_a * d * d) * cfg.cutoff(d) * field_scale

    for obj in scene.objects:
        delta = points - np.asarray(obj.position, dtype=float)
        dist = np.linalg.norm(delta, axis=1)
        inside = (dist < obj.radius) & (dist > 0)
        if np.any(inside):
            pen = obj.radius - dist[inside]
            normal = delta[inside] / dist[inside, None]
            force[inside] += obj.stiffness * pen[:, None] * normal

    nx, ny, nz = spec.shape
    return FieldGrid(
        spec=spec,
        force=force.reshape(nx, ny, nz, 3),
        viscosity=lam.reshape(nx, ny, nz),
    )
