"""How edge trust moves when two acquaintances co-rate other members.

Walks one edge through a history of agreements and disagreements and
shows the slow-up / fast-down asymmetry, then sweeps the memory factor
to show how it shapes the equilibrium.  Saves a plot to demos/output/.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from socialspace import TrustParams, co_rate_update, trust_value

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = TrustParams(gamma=0.7)

print("One edge, starting from no information (raw trust 0, T = 0.5).")
print("Each event is a pair of binary rates about the same third member.\n")

history = [(+1, +1)] * 6 + [(+1, -1)] * 2 + [(+1, +1)] * 4
t_raw = 0.0
trace = [t_raw]
for step, (r_i, r_j) in enumerate(history, start=1):
    t_raw = co_rate_update(t_raw, r_i, r_j, params)
    trace.append(t_raw)
    kind = "agree   " if r_i * r_j > 0 else "DISAGREE"
    print(f"tick {step:2d}  {kind}  raw trust {t_raw:+.4f}   T = {trust_value(t_raw):.4f}")

print("\nSix agreements build trust gradually; two disagreements undo most"
      "\nof it at once; rebuilding takes several more agreements.\n")

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
axes[0].plot(range(len(trace)), [trust_value(t) for t in trace], marker="o")
axes[0].axhline(0.5, color="gray", lw=0.5)
axes[0].set(title="agree x6, disagree x2, agree x4",
            xlabel="rating tick", ylabel="trust T")

for gamma in (0.55, 0.7, 0.9):
    p = TrustParams(gamma=gamma)
    t_raw, ys = 0.0, [0.5]
    for _ in range(30):
        t_raw = co_rate_update(t_raw, 1, 1, p)
        ys.append(trust_value(t_raw))
    axes[1].plot(ys, label=f"memory {gamma}")
axes[1].legend()
axes[1].set(title="pure agreement, varying memory factor",
            xlabel="rating tick", ylabel="trust T")
fig.tight_layout()
fig.savefig(OUT / "trust_dynamics.png", dpi=120)
print(f"plot saved to {OUT / 'trust_dynamics.png'}")
