"""Deterministic sample streams: low-discrepancy for small dimension, seeded
uniform otherwise; ball sampling by rejection from the bounding box.

Every stream is a pure function of its arguments, so identical plans expand
to identical sample sequences (the reproducibility contract of the checkers).
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np
from scipy.stats import qmc

__all__ = [
    "unit_points",
    "box_points",
    "ball_points",
    "ball_pairs",
    "simplex_weights",
]

_LOW_DISCREPANCY_MAX_DIM = 3


def unit_points(dim: int, count: int, seed: int, base_dim: int | None = None) -> np.ndarray:
    """Points in [0,1)^dim. Halton (unscrambled, skipping the origin) when the
    underlying problem dimension is <= 3, otherwise seeded uniform.

    base_dim is the problem dimension driving the choice; dim may be larger
    (pair streams draw 2n coordinates at once).
    """
    decider = dim if base_dim is None else base_dim
    if decider <= _LOW_DISCREPANCY_MAX_DIM:
        h = qmc.Halton(d=dim, scramble=False)
        h.fast_forward(1)  # the unscrambled sequence starts at the origin
        return h.random(count)
    rng = np.random.default_rng(seed)
    return rng.random((count, dim))


def box_points(box: np.ndarray, count: int, seed: int) -> np.ndarray:
    """Sample a box given as an (n, 2) array of [lo, hi] rows."""
    box = np.asarray(box, dtype=float)
    n = box.shape[0]
    u = unit_points(n, count, seed)
    return box[:, 0] + u * (box[:, 1] - box[:, 0])


def _reject_to_ball(points: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    d = np.linalg.norm(points - center, axis=1)
    return points[d <= radius]


def ball_points(
    center: np.ndarray,
    radius: float,
    count: int,
    seed: int,
    domain: np.ndarray | None = None,
) -> np.ndarray:
    """count points in the closed ball B(center, radius), by rejection from the
    bounding box (clipped to the domain box when one is given)."""
    center = np.asarray(center, dtype=float)
    n = center.shape[0]
    box = np.stack([center - radius, center + radius], axis=1)
    if domain is not None:
        domain = np.asarray(domain, dtype=float)
        box[:, 0] = np.maximum(box[:, 0], domain[:, 0])
        box[:, 1] = np.minimum(box[:, 1], domain[:, 1])
    out = np.empty((0, n))
    offset = 0
    # fixed-size draws keep the stream deterministic regardless of acceptance
    chunk = max(2 * count, 64)
    while out.shape[0] < count:
        u = unit_points(n, offset + chunk, seed)[offset:]
        offset += chunk
        pts = box[:, 0] + u * (box[:, 1] - box[:, 0])
        out = np.vstack([out, _reject_to_ball(pts, center, radius)])
        if offset > 1000 * max(count, 1):
            raise RuntimeError("ball rejection sampling failed to make progress")
    return out[:count]


def ball_pairs(
    center: np.ndarray,
    radius: float,
    count: int,
    seed: int,
    domain: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """count pairs (x, y), both in B(center, radius); a 2n-dimensional stream
    split in half, pairs accepted only when both halves land in the ball."""
    center = np.asarray(center, dtype=float)
    n = center.shape[0]
    box = np.stack([center - radius, center + radius], axis=1)
    if domain is not None:
        domain = np.asarray(domain, dtype=float)
        box[:, 0] = np.maximum(box[:, 0], domain[:, 0])
        box[:, 1] = np.minimum(box[:, 1], domain[:, 1])
    lo = np.concatenate([box[:, 0], box[:, 0]])
    span = np.concatenate([box[:, 1] - box[:, 0], box[:, 1] - box[:, 0]])
    xs = np.empty((0, n))
    ys = np.empty((0, n))
    offset = 0
    chunk = max(3 * count, 64)
    while xs.shape[0] < count:
        u = unit_points(2 * n, offset + chunk, seed, base_dim=n)[offset:]
        offset += chunk
        pts = lo + u * span
        x, y = pts[:, :n], pts[:, n:]
        ok = (np.linalg.norm(x - center, axis=1) <= radius) & (
            np.linalg.norm(y - center, axis=1) <= radius
        )
        xs = np.vstack([xs, x[ok]])
        ys = np.vstack([ys, y[ok]])
        if offset > 1000 * max(count, 1):
            raise RuntimeError("pair rejection sampling failed to make progress")
    return xs[:count], ys[:count]


def simplex_weights(k: int, depth: int) -> np.ndarray:
    """Convex-weight grid over k vertices: all lambda with components i/depth.

    Pure vertices come first (so vertex certificates are found before mixtures);
    the remaining grid points follow in lexicographic order.
    """
    if k == 1:
        return np.ones((1, 1))
    depth = max(1, int(depth))
    vertices = np.eye(k)
    rows = []
    for combo in combinations_with_replacement(range(k), depth):
        lam = np.bincount(combo, minlength=k) / depth
        if np.max(lam) == 1.0:
            continue  # pure vertex already listed
        rows.append(lam)
    if rows:
        return np.vstack([vertices, np.array(rows)])
    return vertices
