"""Render the social force field around recommended members.

Two advisers are recommended: a trusted one (attraction pole) and an
unfriendly low-trust one (viscosity focus + repulsion when nearest).
Samples the field on a plane and saves a heatmap of the viscosity with
force arrows overlaid, showing the fade-out at the 2 m social distance.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from socialspace import (
    FieldConfig,
    GridSpec,
    TactileObject,
    TactileScene,
    sample_field,
    select_pole,
)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def adviser(member_id, position, trust, focus):
    return TactileObject(
        member_id=member_id, position=position, radius=0.3, stiffness=200.0,
        friction=0.5, is_recommended=True, trust_to_user=trust,
        friendliness_raw=0, socializability_raw=0, has_viscosity_focus=focus,
    )


scene = TactileScene(
    objects=(
        adviser(1, (3.0, 5.0, 0.0), trust=0.9, focus=False),   # trusted
        adviser(2, (7.5, 5.0, 0.0), trust=0.3, focus=True),    # unfriendly
    ),
    bounds=((0.0, 0.0, 0.0), (10.0, 10.0, 1.0)),
)
cfg = FieldConfig()  # c_a=15, d_a=3.5: viscosity 15 at the focus, 1 at 2 m

for hip in ((3.5, 5.0, 0.0), (7.0, 5.0, 0.0)):
    poles = select_pole(scene, hip, cfg.trust_threshold)
    sign = {1: "attract", -1: "repel", 0: "none"}[poles.pole_sign]
    print(f"probe at {hip}: nearest recommended member {poles.pole_member}, "
          f"pole {sign}, viscosity focus "
          f"{'yes' if poles.focus_position else 'no'}")

spec = GridSpec((0.0, 0.0, 0.0), (10.0, 10.0, 0.0), (60, 60, 1))
poles = select_pole(scene, (7.0, 5.0, 0.0), cfg.trust_threshold)
grid = sample_field(scene, poles, cfg, spec)

xs = np.linspace(0, 10, 60)
lam = grid.viscosity[:, :, 0].T  # x horizontal, y vertical
force = grid.force[:, :, 0, :]

fig, ax = plt.subplots(figsize=(7, 6))
im = ax.imshow(lam, origin="lower", extent=(0, 10, 0, 10), cmap="magma")
fig.colorbar(im, ax=ax, label="viscosity, kg/s")
step = 4
ax.quiver(
    xs[::step].repeat(len(xs[::step])).reshape(-1),
    np.tile(xs[::step], len(xs[::step])),
    force[::step, ::step, 0].T.reshape(-1),
    force[::step, ::step, 1].T.reshape(-1),
    color="cyan", width=0.003,
)
for o in scene.objects:
    ax.plot(*o.position[:2], "wo", markersize=8)
    ax.annotate(f"member {o.member_id}", o.position[:2],
                textcoords="offset points", xytext=(8, 8), color="white")
circle = plt.Circle(scene.objects[1].position[:2], cfg.social_distance,
                    fill=False, color="white", ls="--", lw=0.8)
ax.add_patch(circle)
ax.set(title="viscosity field and repulsion arrows around member 2\n"
             "(dashed: 2 m social distance, fields vanish outside)",
       xlabel="x, m", ylabel="y, m")
fig.tight_layout()
fig.savefig(OUT / "force_field.png", dpi=120)
print(f"\nplot saved to {OUT / 'force_field.png'}")
print(f"peak viscosity {grid.viscosity.max():.2f} kg/s; "
      f"max |force| {np.linalg.norm(grid.force.reshape(-1, 3), axis=1).max():.2f} N")
