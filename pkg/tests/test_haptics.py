import math

import numpy as np
import pytest

from socialspace import (
    FieldConfig,
    GridSpec,
    PoleAssignment,
    ProbeState,
    SceneGeometry,
    TactileObject,
    TactileScene,
    feedback_force,
    map_social_to_tactile,
    sample_field,
    select_pole,
    step_dynamics,
    viscosity_at,
)

from conftest import build_community


def obj(member_id, position, recommended=False, trust=0.5, radius=0.3,
        stiffness=200.0, focus=False):
    return TactileObject(
        member_id=member_id, position=position, radius=radius,
        stiffness=stiffness, friction=0.5, is_recommended=recommended,
        trust_to_user=trust, friendliness_raw=0, socializability_raw=0,
        has_viscosity_focus=focus,
    )


def scene_of(*objects):
    return TactileScene(objects=tuple(objects),
                        bounds=((-50.0, -50.0, -50.0), (50.0, 50.0, 50.0)))


def decay_config(lam, mass=0.1):
    """No feedback, no cutoff in range, near-constant viscosity lam."""
    return FieldConfig(mass=mass, k_h=0.0, b_h=0.0, k_a=0.0,
                       c_a=lam, d_a=1e-12, social_distance=1e6)


FOCUS_AT_ORIGIN = PoleAssignment(focus_position=(0.0, 0.0, 0.0))


def run_decay(lam, dt, t_end, v0=1.0):
    cfg = decay_config(lam)
    state = ProbeState(rho=np.zeros(3), rho_dot=np.array([v0, 0.0, 0.0]),
                       hip=np.zeros(3))
    steps = round(t_end / dt)
    for _ in range(steps):
        state = step_dynamics(state, state.hip, FOCUS_AT_ORIGIN, cfg, dt)
    return state


class TestViscosity:
    CFG = FieldConfig(c_a=15.0, d_a=3.5)

    def test_peak_at_focus(self):
        assert viscosity_at((1.0, 2.0, 0.0), (1.0, 2.0, 0.0), self.CFG) == 15.0

    def test_calibrated_social_distance_value(self):
        # c_a=15, d_a=3.5 span 15 kg/s at the focus down to 1 kg/s at 2 m
        lam = viscosity_at((2.0, 0.0, 0.0), (0.0, 0.0, 0.0), self.CFG)
        assert lam == pytest.approx(1.0, abs=1e-9)

    def test_vanishes_at_infinity(self):
        lam = viscosity_at((1e4, 0.0, 0.0), (0.0, 0.0, 0.0), self.CFG)
        assert lam < 1e-6

    def test_no_focus_means_zero(self):
        assert viscosity_at((0.0, 0.0, 0.0), None, self.CFG) == 0.0


class TestFeedbackForce:
    def test_zero_at_rest(self):
        f = feedback_force(np.zeros(3), np.zeros(3), FieldConfig())
        assert np.all(f == 0)

    def test_hard_spring_displacement(self):
        cfg = FieldConfig(k_h=350.0, b_h=0.0)
        f = feedback_force(np.array([0.01, 0.0, 0.0]), np.zeros(3), cfg)
        assert f == pytest.approx([3.5, 0.0, 0.0])

    def test_linear_in_displacement(self):
        cfg = FieldConfig(k_h=123.0, b_h=0.0)
        d = np.array([0.02, -0.01, 0.005])
        assert feedback_force(2 * d, np.zeros(3), cfg) == pytest.approx(
            2 * feedback_force(d, np.zeros(3), cfg)
        )

    def test_damper_term(self):
        cfg = FieldConfig(k_h=0.0, b_h=4.0)
        f = feedback_force(np.zeros(3), np.array([0.0, 0.5, 0.0]), cfg)
        assert f == pytest.approx([0.0, 2.0, 0.0])


class TestStepDynamics:
    def test_equilibrium_without_fields(self):
        cfg = FieldConfig()
        hip = np.array([1.0, 2.0, 0.5])
        state = ProbeState.at_rest(hip)
        out = step_dynamics(state, hip, PoleAssignment(), cfg, 1e-3)
        assert np.all(out.rho == hip)
        assert np.all(out.rho_dot == 0)

    def test_damped_decay_matches_analytic(self):
        # m v' = -lam v  =>  v(t) = v0 exp(-lam t / m); lam/m = 5 /s
        state = run_decay(lam=0.5, dt=1e-3, t_end=1.0)
        expected = math.exp(-5.0)
        assert abs(state.rho_dot[0] - expected) / expected < 1e-6

    def test_rk4_error_scales_as_fourth_order(self):
        expected = math.exp(-5.0)
        errors = [abs(run_decay(0.5, dt, 1.0).rho_dot[0] - expected)
                  for dt in (4e-3, 2e-3, 1e-3)]
        r1, r2 = errors[0] / errors[1], errors[1] / errors[2]
        assert 12 < r1 < 20
        assert 12 < r2 < 20

    def test_kinetic_energy_dissipates(self):
        cfg = decay_config(lam=1.5)
        rng = np.random.default_rng(0)
        for _ in range(20):
            state = ProbeState(rho=rng.normal(size=3) * 0.3,
                               rho_dot=rng.normal(size=3),
                               hip=np.zeros(3))
            energy = float(state.rho_dot @ state.rho_dot)
            for _ in range(50):
                state = step_dynamics(state, state.hip, FOCUS_AT_ORIGIN, cfg, 1e-3)
                new_energy = float(state.rho_dot @ state.rho_dot)
                assert new_energy <= energy + 1e-15
                energy = new_energy

    def test_attraction_converges_to_pole(self):
        # k_a/m = 10 /s^2, lam/m = 2 /s: distance shrinks below 1% by t=5
        cfg = FieldConfig(mass=0.1, k_h=0.0, b_h=0.0, k_a=1.0,
                          c_a=0.2, d_a=1e-12, social_distance=1e6)
        pole = PoleAssignment(pole_member=1, pole_position=(0.0, 0.0, 0.0),
                              pole_sign=+1, focus_position=(0.0, 0.0, 0.0))
        d0 = 0.5

        def run(dt):
            state = ProbeState.at_rest(np.array([d0, 0.0, 0.0]))
            for _ in range(round(5.0 / dt)):
                state = step_dynamics(state, state.hip, pole, cfg, dt)
            return float(np.linalg.norm(state.rho))

        coarse, reference = run(1e-3), run(1e-4)
        assert coarse / d0 < 0.01
        assert reference / d0 < 0.01
        assert abs(coarse - reference) < 1e-6

    def test_repulsion_pushes_away(self):
        cfg = FieldConfig(k_h=0.0, b_h=0.0, k_a=1.0)
        pole = PoleAssignment(pole_member=1, pole_position=(0.0, 0.0, 0.0),
                              pole_sign=-1)
        state = ProbeState(rho=np.array([0.5, 0.0, 0.0]), rho_dot=np.zeros(3),
                           hip=np.array([0.5, 0.0, 0.0]))
        state = step_dynamics(state, state.hip, pole, cfg, 1e-2)
        assert state.rho[0] > 0.5

    def test_fields_negligible_beyond_social_distance(self):
        cfg = FieldConfig(k_h=0.0, b_h=0.0, k_a=5.0)
        pole = PoleAssignment(pole_member=1, pole_position=(0.0, 0.0, 0.0),
                              pole_sign=+1, focus_position=(0.0, 0.0, 0.0))
        # probe 3 m from the only recommended member
        state = ProbeState(rho=np.array([3.0, 0.0, 0.0]), rho_dot=np.zeros(3),
                           hip=np.array([3.0, 0.0, 0.0]))
        out = step_dynamics(state, state.hip, pole, cfg, 1e-3)
        assert np.all(out.rho == state.rho)  # zero force: nothing moves
        assert viscosity_at(state.rho, pole.focus_position, cfg) \
            * cfg.cutoff(3.0) == 0.0

    def test_rejects_nonfinite_state(self):
        cfg = FieldConfig()
        state = ProbeState(rho=np.array([np.nan, 0.0, 0.0]),
                           rho_dot=np.zeros(3), hip=np.zeros(3))
        with pytest.raises(FloatingPointError):
            step_dynamics(state, state.hip, PoleAssignment(), cfg, 1e-3)

    def test_rejects_bad_dt(self):
        state = ProbeState.at_rest(np.zeros(3))
        with pytest.raises(ValueError):
            step_dynamics(state, state.hip, PoleAssignment(), FieldConfig(), 0.0)


class TestSelectPole:
    def test_nearest_recommended_supplies_pole(self):
        scene = scene_of(
            obj(1, (0.5, 0.0, 0.0), recommended=True, trust=0.8),
            obj(2, (1.5, 0.0, 0.0), recommended=True, trust=0.8),
        )
        poles = select_pole(scene, (0.0, 0.0, 0.0))
        assert poles.pole_member == 1
        assert poles.pole_sign == +1

    def test_no_recommended_means_empty(self):
        scene = scene_of(obj(1, (0.5, 0.0, 0.0)))
        assert select_pole(scene, (0.0, 0.0, 0.0)).empty

    def test_tie_breaks_to_lower_id(self):
        scene = scene_of(
            obj(9, (1.0, 0.0, 0.0), recommended=True),
            obj(3, (-1.0, 0.0, 0.0), recommended=True),
        )
        assert select_pole(scene, (0.0, 0.0, 0.0)).pole_member == 3

    def test_low_trust_repels(self):
        scene = scene_of(obj(1, (0.5, 0.0, 0.0), recommended=True, trust=0.4))
        assert select_pole(scene, (0.0, 0.0, 0.0)).pole_sign == -1

    def test_threshold_trust_gives_no_pole_sign(self):
        scene = scene_of(obj(1, (0.5, 0.0, 0.0), recommended=True, trust=0.5))
        poles = select_pole(scene, (0.0, 0.0, 0.0))
        assert poles.pole_sign == 0
        assert poles.pole_position is None

    def test_focus_comes_only_from_nearest(self):
        scene = scene_of(
            obj(1, (0.5, 0.0, 0.0), recommended=True, trust=0.9, focus=False),
            obj(2, (5.0, 0.0, 0.0), recommended=True, trust=0.9, focus=True),
        )
        poles = select_pole(scene, (0.0, 0.0, 0.0))
        assert poles.pole_member == 1
        assert poles.focus_position is None

    def test_at_most_one_pole_and_one_focus(self):
        scene = scene_of(
            *(obj(m, (float(m), 0.0, 0.0), recommended=True, trust=0.9, focus=True)
              for m in range(1, 6))
        )
        poles = select_pole(scene, (0.0, 0.0, 0.0))
        assert poles.pole_member == 1
        assert poles.pole_position == (1.0, 0.0, 0.0)
        assert poles.focus_position == (1.0, 0.0, 0.0)


class TestSocialToTactile:
    def community_with_friendliness(self):
        # friend-declaration sets of sizes 0..5 across six members
        sets = [frozenset(), {1}, {1, 3}, {1, 2, 4}, {1, 2, 3, 5}, {0, 1, 2, 3, 4}]
        profiles = {
            m: {"friend_declared_by": frozenset(d for d in sets[m] if d != m),
                "current_location": (float(m), 1.0, 0.0)}
            for m in range(6)
        }
        return build_community(n=6, edges=[(0, 1), (1, 2), (2, 3)],
                               profiles=profiles)

    def test_terciles_emit_exactly_three_levels(self):
        com = self.community_with_friendliness()
        scene = map_social_to_tactile(com, recommended=(), trust_to_user={})
        levels = sorted({o.stiffness for o in scene.objects})
        assert levels == [75.0, 200.0, 350.0]
        by_id = {o.member_id: o for o in scene.objects}
        assert by_id[0].stiffness == 350.0  # least friendly: hard
        assert by_id[5].stiffness == 75.0   # friendliest: soft

    def test_friction_scales_with_socializability(self):
        com = self.community_with_friendliness()
        scene = map_social_to_tactile(com, recommended=(), trust_to_user={})
        by_id = {o.member_id: o for o in scene.objects}
        # degree: 0,3 have 1 and 2; 4,5 isolated; 1,2 have 2
        assert by_id[1].friction == by_id[2].friction
        assert by_id[4].friction == by_id[5].friction
        assert by_id[1].friction > by_id[4].friction

    def test_viscosity_focus_only_on_recommended_bottom_tercile(self):
        com = self.community_with_friendliness()
        scene = map_social_to_tactile(com, recommended=(0, 5), trust_to_user={})
        by_id = {o.member_id: o for o in scene.objects}
        assert by_id[0].has_viscosity_focus      # recommended + unfriendly
        assert not by_id[5].has_viscosity_focus  # recommended + friendly
        assert not by_id[1].has_viscosity_focus  # unfriendly, not recommended

    def test_trust_threshold_decides_pole_sign(self):
        com = self.community_with_friendliness()
        scene = map_social_to_tactile(
            com, recommended=(2, 3), trust_to_user={2: 0.4, 3: 0.6}
        )
        by_id = {o.member_id: o for o in scene.objects}
        assert by_id[2].pole_sign(0.5) == -1
        assert by_id[3].pole_sign(0.5) == +1

    def test_members_positioned_from_current_or_permanent(self):
        com = build_community(n=2, profiles={
            0: {"current_location": (3.0, 3.0, 0.0),
                "permanent_location": (1.0, 1.0, 0.0)},
            1: {"permanent_location": (2.0, 2.0, 0.0)},
        })
        scene = map_social_to_tactile(com, recommended=(), trust_to_user={})
        by_id = {o.member_id: o for o in scene.objects}
        assert by_id[0].position == (3.0, 3.0, 0.0)
        assert by_id[1].position == (2.0, 2.0, 0.0)


class TestSampleField:
    def test_zero_far_from_everything(self):
        scene = scene_of(obj(1, (0.0, 0.0, 0.0), recommended=True, trust=0.9))
        poles = select_pole(scene, (0.0, 0.0, 0.0))
        spec = GridSpec((5.0, 5.0, 0.0), (6.0, 6.0, 0.0), (3, 3, 1))
        grid = sample_field(scene, poles, FieldConfig(), spec)
        assert np.all(grid.force == 0)
        assert np.all(grid.viscosity == 0)

    def test_force_zero_at_pole_position(self):
        scene = scene_of(obj(1, (0.0, 0.0, 0.0), recommended=True, trust=0.9,
                             radius=1e-6))
        poles = select_pole(scene, (0.0, 0.0, 0.0))
        spec = GridSpec((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), (1, 1, 1))
        grid = sample_field(scene, poles, FieldConfig(), spec)
        assert np.all(grid.force == 0)

    def test_contact_force_inside_sphere(self):
        scene = scene_of(obj(1, (0.0, 0.0, 0.0), stiffness=75.0, radius=0.3))
        spec = GridSpec((0.29, 0.0, 0.0), (0.29, 0.0, 0.0), (1, 1, 1))
        grid = sample_field(scene, PoleAssignment(), FieldConfig(), spec)
        f = grid.force[0, 0, 0]
        assert np.linalg.norm(f) == pytest.approx(75.0 * 0.01, rel=1e-9)
        assert f[0] > 0  # outward

    def test_deterministic(self):
        scene = scene_of(
            obj(1, (0.0, 0.0, 0.0), recommended=True, trust=0.9, focus=True),
            obj(2, (1.0, 1.0, 0.0), stiffness=350.0),
        )
        poles = select_pole(scene, (0.2, 0.0, 0.0))
        spec = GridSpec((-2.0, -2.0, 0.0), (2.0, 2.0, 0.0), (16, 16, 1))
        a = sample_field(scene, poles, FieldConfig(), spec)
        b = sample_field(scene, poles, FieldConfig(), spec)
        assert a.force.tobytes() == b.force.tobytes()
        assert a.viscosity.tobytes() == b.viscosity.tobytes()

    def test_degenerate_grid_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            GridSpec((0.0, 0.0, 0.0), (1.0, 1.0, 1.0), (0, 4, 4)).points()
