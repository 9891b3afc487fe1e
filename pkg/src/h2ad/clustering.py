"""True-solution class selection across groups, and weighted fusion.

Every group contributes a candidate set that holds one estimate of the true
direction plus spurious aliases.  The true estimates agree across groups
(they all scatter around the source), while aliases of different groups do
not, because the subarray sizes differ.  The selectors below pick one
candidate per group so that the picks agree.

Ties are broken toward the lowest group index, then the smallest angle:
candidate arrays are sorted ascending and every search keeps the first
minimum in lexicographic index order.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .rootmusic import CandidateSet


class Method(str, enum.Enum):
    WGMD = "wgmd"
    WLMD = "wlmd"
    ALW_K_MEANS = "alw_kmeans"
    IMPROVED_DBSCAN = "improved_dbscan"


class SelectionFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class TrueClassSelection:
    angles: np.ndarray
    indices: tuple[int, ...]
    method: Method
    success: bool = True

    @classmethod
    def failed(cls, q: int, method: Method) -> "TrueClassSelection":
        return cls(np.full(q, np.nan), (-1,) * q, method, success=False)


@dataclass(frozen=True)
class FusedEstimate:
    angle: float
    weights: np.ndarray


def _as_lists(candidates) -> list[np.ndarray]:
    out = []
    for c in candidates:
        a = np.asarray(c.angles if isinstance(c, CandidateSet) else c, dtype=float)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("every candidate set must be a non-empty 1-D sequence")
        if np.any(np.diff(a) < 0):
            a = np.sort(a)
        out.append(a)
    if len(out) < 2:
        raise ValueError("at least two groups are required")
    return out


def _selection(sets, idx, method) -> TrueClassSelection:
    idx = tuple(int(i) for i in idx)
    return TrueClassSelection(np.array([s[i] for s, i in zip(sets, idx)]), idx, method)


def chain_cost(angles) -> float:
    """Sum of squared differences between adjacent groups' picks."""
    a = np.asarray(angles, dtype=float)
    return float(np.sum(np.diff(a) ** 2))


def wgmd_exhaustive(candidates) -> TrueClassSelection:
    """Reference WGMD: enumerate every combination of one candidate per group."""
    sets = _as_lists(candidates)
    best, best_idx = np.inf, None
    for idx in itertools.product(*(range(len(s)) for s in sets)):
        cost = sum((sets[q][idx[q]] - sets[q + 1][idx[q + 1]]) ** 2 for q in range(len(sets) - 1))
        if cost < best:
            best, best_idx = cost, idx
    return _selection(sets, best_idx, Method.WGMD)


def wgmd(candidates) -> TrueClassSelection:
    """Weighted global minimum distance over the group chain.

    Minimizes ``sum_q (theta_q - theta_{q+1})^2`` by dynamic programming:
    a backward pass computes the optimal cost-to-go of every candidate, and
    a forward pass picks the lowest-index candidate attaining it.
    """
    sets = _as_lists(candidates)
    q_count = len(sets)
    togo = [None] * q_count
    togo[-1] = np.zeros(len(sets[-1]))
    for q in range(q_count - 2, -1, -1):
        step = (sets[q][:, None] - sets[q + 1][None, :]) ** 2 + togo[q + 1][None, :]
        togo[q] = step.min(axis=1)
    idx = [int(np.argmin(togo[0]))]
    for q in range(1, q_count):
        prev = sets[q - 1][idx[-1]]
        idx.append(int(np.argmin((prev - sets[q]) ** 2 + togo[q])))
    return _selection(sets, idx, Method.WGMD)


def _closest_pair(a: np.ndarray, b: np.ndarray) -> tuple[int, int]:
    d = (a[:, None] - b[None, :]) ** 2
    i, j = np.unravel_index(np.argmin(d), d.shape)
    return int(i), int(j)


def wlmd(candidates, weights=None) -> TrueClassSelection:
    """Weighted local minimum distance.

    Groups are paired consecutively ``(1, 2), (3, 4), ...`` and each pair
    keeps its closest cross pair.  For odd ``Q`` the last three groups form
    a triple: the first two are paired as usual and the third takes its
    candidate nearest the weighted mean of that pair.
    """
    sets = _as_lists(candidates)
    q_count = len(sets)
    w = np.full(q_count, 1.0 / q_count) if weights is None else np.asarray(weights, dtype=float)
    idx = [0] * q_count
    paired = q_count if q_count % 2 == 0 else q_count - 1
    for q in range(0, paired, 2):
        idx[q], idx[q + 1] = _closest_pair(sets[q], sets[q + 1])
    if q_count % 2:
        a, b, c = q_count - 3, q_count - 2, q_count - 1
        anchor = (w[a] * sets[a][idx[a]] + w[b] * sets[b][idx[b]]) / (w[a] + w[b])
        idx[c] = int(np.argmin((sets[c] - anchor) ** 2))
    return _selection(sets, idx, Method.WLMD)


def alw_kmeans(candidates, weights, sizes: Sequence[int] | None = None) -> tuple[TrueClassSelection, float]:
    """Accelerated local weighted k-means.

    The two groups with the fewest antennas per subarray (``sizes``; defaults
    to the candidate counts) seed the estimate with their closest pair.  The
    remaining groups, in ascending size, each take the candidate nearest the
    running weighted mean, which is then updated.  Returns the selection and
    the final running mean (the fused estimate).
    """
    sets = _as_lists(candidates)
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(sets),):
        raise ValueError("one weight per group is required")
    sizes = [len(s) for s in sets] if sizes is None else list(sizes)
    order = sorted(range(len(sets)), key=lambda q: (sizes[q], q))
    idx = [0] * len(sets)
    a, b = order[0], order[1]
    idx[a], idx[b] = _closest_pair(sets[a], sets[b])
    total = w[a] + w[b]
    estimate = (w[a] * sets[a][idx[a]] + w[b] * sets[b][idx[b]]) / total
    for q in order[2:]:
        idx[q] = int(np.argmin((sets[q] - estimate) ** 2))
        estimate = (total * estimate + w[q] * sets[q][idx[q]]) / (total + w[q])
        total += w[q]
    return _selection(sets, idx, Method.ALW_K_MEANS), float(estimate)


def polar_embedding(angles, degrees: bool = False) -> np.ndarray:
    """Map each angle to the plane point ``|theta| e^{j theta}`` as (x, y) rows."""
    t = np.asarray(angles, dtype=float)
    r = np.abs(np.rad2deg(t)) if degrees else np.abs(t)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def dbscan(dist: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    """DBSCAN labels from a precomputed distance matrix (-1 marks noise).

    A point is core when at least ``min_pts`` points, itself included, lie
    within ``eps``.  Clusters are connected components of the core graph;
    border points join the cluster of their lowest-index core neighbour.
    """
    near = dist <= eps
    core = near.sum(axis=1) >= min_pts
    labels = np.full(dist.shape[0], -1)
    if not core.any():
        return labels
    core_idx = np.flatnonzero(core)
    n_comp, comp = connected_components(near[np.ix_(core_idx, core_idx)], directed=False)
    labels[core_idx] = comp
    border = np.flatnonzero(~core & near[:, core].any(axis=1))
    for p in border:
        labels[p] = comp[np.argmax(near[p, core_idx])]
    return labels


def improved_dbscan(
    candidates, max_iterations: int = 20, degrees: bool = False
) -> TrueClassSelection:
    """DBSCAN on the polar embedding with a bisected neighbourhood radius.

    ``minPts`` is the group count.  The radius starts at half the smallest
    spacing inside the largest candidate set (so two candidates of one group
    cannot be neighbours) and is bisected: too large a cluster shrinks it,
    too small grows it.  Success needs a largest cluster of exactly one
    candidate per group.  A largest cluster of the right size but with a
    repeated group ends the search unsuccessfully.
    """
    sets = _as_lists(candidates)
    q_count = len(sets)
    angles = np.concatenate(sets)
    group = np.concatenate([np.full(len(s), q) for q, s in enumerate(sets)])
    offsets = np.concatenate([[0], np.cumsum([len(s) for s in sets])])
    pts = polar_embedding(angles, degrees)
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))

    largest = int(np.argmax([len(s) for s in sets]))
    block = slice(offsets[largest], offsets[largest + 1])
    inner = dist[block, block]
    if inner.shape[0] > 1:
        upper = float(inner[np.triu_indices(inner.shape[0], 1)].min())
    else:
        upper = float(dist.max())
    lower = 0.0

    for _ in range(max_iterations):
        eps = (upper + lower) / 2
        labels = dbscan(dist, eps, q_count)
        members = _largest_cluster(labels, dist)
        n = members.size
        if n == q_count and np.unique(group[members]).size == q_count:
            members = members[np.argsort(group[members])]
            idx = [int(m - offsets[group[m]]) for m in members]
            return _selection(sets, idx, Method.IMPROVED_DBSCAN)
        if n > q_count:
            upper = eps
        elif n < q_count:
            lower = eps
        else:
            break
    return TrueClassSelection.failed(q_count, Method.IMPROVED_DBSCAN)


def _largest_cluster(labels: np.ndarray, dist: np.ndarray) -> np.ndarray:
    """Members of the largest cluster; ties go to the most compact one."""
    ids = np.unique(labels[labels >= 0])
    if ids.size == 0:
        return np.array([], dtype=int)
    best_key, best = None, None
    for c in ids:
        m = np.flatnonzero(labels == c)
        key = (-m.size, float(dist[np.ix_(m, m)].max()), int(m[0]))
        if best_key is None or key < best_key:
            best_key, best = key, m
    return best


def fuse(selection: TrueClassSelection, weights) -> FusedEstimate:
    """Weighted mean of the selected angles."""
    if not selection.success:
        raise SelectionFailed(f"cannot fuse a failed {selection.method.value} selection")
    w = np.asarray(weights, dtype=float)
    if w.shape != selection.angles.shape:
        raise ValueError("one weight per group is required")
    return FusedEstimate(float(np.dot(w, selection.angles)), w)


def select(method: Method | str, candidates, weights, sizes=None, **options) -> TrueClassSelection:
    """Run one selector by name."""
    method = Method(method)
    if method is Method.WGMD:
        return wgmd(candidates)
    if method is Method.WLMD:
        return wlmd(candidates, weights)
    if method is Method.ALW_K_MEANS:
        return alw_kmeans(candidates, weights, sizes)[0]
    return improved_dbscan(candidates, **options)
