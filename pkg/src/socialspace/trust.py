"""Edge trust dynamics and response weighting.

Trust between acquainted members is a single scalar per edge, stored in
raw form ``T_raw`` in [-1, 1] and exposed in normalized form ``T`` in
[0, 1].  Agreement when two members rate the same third member moves the
raw value up slowly and down quickly (for memory > 0.5), which is the
asymmetry observed in real social networks.  Responses gathered from the
network are weighted by a softmax over a log-odds transform of the path
trust, so the sharpness parameter interpolates between "ignore trust"
(beta = 0) and "strongly prefer trusted paths" (beta = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "TrustParams",
    "WeightedResponse",
    "co_rate_update",
    "trust_value",
    "path_trust",
    "hat_transform",
    "response_weights",
]


@dataclass(frozen=True)
class TrustParams:
    """Parameters of the trust update and response weighting.

    gamma: memory factor in (0, 1); > 0.5 gives slow-up/fast-down dynamics.
    beta: weight sharpness in [0, 1].
    clamp_epsilon: guard band keeping the log-odds transform finite.
    """

    gamma: float = 0.7
    beta: float = 1.0
    clamp_epsilon: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must be in (0, 1), got {self.gamma}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")
        if not 0.0 < self.clamp_epsilon < 0.5:
            raise ValueError(
                f"clamp_epsilon must be in (0, 0.5), got {self.clamp_epsilon}"
            )

    def with_beta(self, beta: float) -> "TrustParams":
        return TrustParams(self.gamma, beta, self.clamp_epsilon)


@dataclass(frozen=True)
class WeightedResponse:
    """One gathered response annotated with its path trust and weight."""

    responder: int
    subject: int
    rate: int
    path_trust: float
    weight: float
    path: tuple[int, ...] = ()


def co_rate_update(t_raw: float, r_i: int, r_j: int, params: TrustParams) -> float:
    """Advance the raw trust of one edge after a new co-rating.

    ``r_i`` and ``r_j`` are the two members' binary rates (+1/-1) of the
    same third member; their product decides the branch:

        r_k > 0:  gamma * T_raw + (1 - gamma) * r_k
        r_k < 0:  (1 - gamma) * T_raw + gamma * r_k

    Both branches are convex combinations of points in [-1, 1], so the
    result stays in [-1, 1].
    """
    if r_i not in (-1, 1) or r_j not in (-1, 1):
        raise ValueError(f"rates must be -1 or +1, got {r_i}, {r_j}")
    r_k = r_i * r_j
    assert r_k != 0, "binary rates cannot produce a zero co-rate"
    g = params.gamma
    if r_k > 0:
        return g * t_raw + (1.0 - g) * r_k
    return (1.0 - g) * t_raw + g * r_k


def trust_value(t_raw: float) -> float:
    """Map raw trust in [-1, 1] to the normalized value T = (1 + T_raw) / 2."""
    return (1.0 + t_raw) / 2.0


def path_trust(edge_trusts: Sequence[float]) -> float:
    """Trust between two members along a path: product of the edge values.

    An empty path means the two endpoints coincide, for which the trust
    is 1 by convention.
    """
    return math.prod(edge_trusts)


def hat_transform(t: float, params: TrustParams) -> float:
    """Log-odds transform of a trust value.

        T_hat = 1/2 * ln((1 + 2(T - 0.5)) / (1 - 2(T - 0.5)))

    which is atanh(2T - 1).  T is clamped to
    [clamp_epsilon, 1 - clamp_epsilon] first so the endpoints stay
    finite; the transform is odd around T = 0.5.
    """
    eps = params.clamp_epsilon
    t = min(max(t, eps), 1.0 - eps)
    return math.atanh(2.0 * t - 1.0)


def response_weights(path_trusts: Sequence[float], params: TrustParams) -> list[float]:
    """Softmax weights over the transformed path trusts of one response set.

        w_j = exp(beta * T_hat_j) / sum_k exp(beta * T_hat_k)

    Weights sum to 1 and preserve the ordering of the trusts.  Computed
    shift-invariantly (max subtracted) for numerical stability.
    """
    if len(path_trusts) == 0:
        raise ValueError("response set must be non-empty")
    z = np.array([params.beta * hat_transform(t, params) for t in path_trusts])
    z -= z.max()
    w = np.exp(z)
    w /= w.sum()
    return w.tolist()
