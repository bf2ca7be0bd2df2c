"""Integrate the probe point through the social field.

First verifies the integrator against the analytic damped point (pure
viscous decay), then drops the probe near an attracting adviser and
plots how it spirals in, braked by the viscosity field.
"""

import math
import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from socialspace import FieldConfig, PoleAssignment, ProbeState, step_dynamics

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# -- damped decay vs analytic -----------------------------------------
cfg = FieldConfig(mass=0.1, k_h=0.0, b_h=0.0, k_a=0.0,
                  c_a=0.5, d_a=1e-12, social_distance=1e6)
poles = PoleAssignment(focus_position=(0.0, 0.0, 0.0))
state = ProbeState(rho=np.zeros(3), rho_dot=np.array([1.0, 0.0, 0.0]),
                   hip=np.zeros(3))
dt = 1e-3
for _ in range(1000):
    state = step_dynamics(state, state.hip, poles, cfg, dt)
analytic = math.exp(-5.0)
print("pure viscous decay, viscosity/mass = 5 per second:")
print(f"  integrated v(1s) = {state.rho_dot[0]:.12f}")
print(f"  analytic   v(1s) = {analytic:.12f}")
print(f"  relative error   = {abs(state.rho_dot[0] - analytic) / analytic:.2e}\n")

# -- attraction toward an adviser -------------------------------------
cfg = FieldConfig(mass=0.1, k_h=0.0, b_h=0.0, k_a=1.0, c_a=2.0, d_a=3.5)
pole = PoleAssignment(pole_member=7, pole_position=(0.0, 0.0, 0.0),
                      pole_sign=+1, focus_position=(0.0, 0.0, 0.0))
state = ProbeState.at_rest(np.array([1.2, 0.9, 0.0]))
trace = [state.rho.copy()]
times = [0.0]
for _ in range(6000):
    state = step_dynamics(state, state.hip, pole, cfg, dt)
    trace.append(state.rho.copy())
    times.append(state.t)
trace = np.array(trace)
distances = np.linalg.norm(trace, axis=1)
print("attraction toward a trusted adviser at the origin:")
print(f"  start distance {distances[0]:.3f} m -> {distances[-1]:.4f} m at t = {times[-1]:.1f} s")

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
axes[0].plot(trace[:, 0], trace[:, 1])
axes[0].plot(0, 0, "r*", markersize=12, label="adviser (pole)")
axes[0].plot(*trace[0, :2], "ko", label="start")
axes[0].legend()
axes[0].set(title="probe path in the plane", xlabel="x, m", ylabel="y, m",
            aspect="equal")
axes[1].semilogy(times, distances)
axes[1].set(title="distance to the pole", xlabel="t, s", ylabel="|rho - pole|, m")
fig.tight_layout()
fig.savefig(OUT / "probe_simulation.png", dpi=120)
print(f"\nplot saved to {OUT / 'probe_simulation.png'}")
