"""End-to-end single-trial estimator: snapshots -> candidates -> class -> fusion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array import ArrayConfig
from .clustering import FusedEstimate, Method, TrueClassSelection, alw_kmeans, fuse, select
from .crlb import information_weights
from .rootmusic import CandidateSet, group_candidates
from .signal import SimulationConfig, SnapshotBatch


@dataclass(frozen=True)
class Estimate:
    selection: TrueClassSelection
    fused: FusedEstimate | None
    candidates: tuple[CandidateSet, ...]

    @property
    def success(self) -> bool:
        return self.fused is not None

    @property
    def angle(self) -> float:
        return self.fused.angle if self.fused is not None else float("nan")


def candidate_sets(batch: SnapshotBatch) -> tuple[CandidateSet, ...]:
    return tuple(group_candidates(y, batch.array, q) for q, y in enumerate(batch.outputs))


def estimate_doa(
    array: ArrayConfig,
    candidates: tuple[CandidateSet, ...],
    method: Method | str,
    weights: np.ndarray,
    **options,
) -> Estimate:
    """Classify precomputed candidate sets and fuse the picks."""
    method = Method(method)
    sizes = [g.antennas_per_subarray for g in array.groups]
    if method is Method.ALW_K_MEANS:
        selection, _ = alw_kmeans(candidates, weights, sizes)
    else:
        selection = select(method, candidates, weights, sizes, **options)
    fused = fuse(selection, weights) if selection.success else None
    return Estimate(selection, fused, candidates)


def estimate(batch: SnapshotBatch, method: Method | str, sim: SimulationConfig | None = None, **options) -> Estimate:
    """Full pipeline on one batch, with weights from the closed-form CRLBs."""
    weights = information_weights(batch.array, sim or batch.sim)
    return estimate_doa(batch.array, candidate_sets(batch), method, weights, **options)


def nearest_candidates(candidates, theta: float) -> tuple[int, ...]:
    """Index of the candidate closest to ``theta`` in every set."""
    return tuple(int(np.argmin(np.abs(np.asarray(c.angles) - theta))) for c in candidates)
