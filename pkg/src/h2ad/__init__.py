"""DOA estimation with heterogeneous hybrid analog-digital (H2AD) arrays."""

from .array import ArrayConfig, GroupConfig, reference_config, steering_vector, subarray_gain, virtual_steering_vector
from .clustering import Method, TrueClassSelection, fuse, improved_dbscan, alw_kmeans, wgmd, wlmd
from .crlb import PowerModel, aggregate_crlb, crlb_group, energy_efficiency, fim_group, fusion_weights
from .pipeline import candidate_sets, estimate, estimate_doa
from .rootmusic import CandidateSet, expand_candidates, root_music_electrical_angle
from .signal import SimulationConfig, SnapshotBatch, synthesize

__all__ = [
    "ArrayConfig", "GroupConfig", "reference_config", "steering_vector", "subarray_gain",
    "virtual_steering_vector", "Method", "TrueClassSelection", "fuse", "improved_dbscan",
    "alw_kmeans", "wgmd", "wlmd", "PowerModel", "aggregate_crlb", "crlb_group",
    "energy_efficiency", "fim_group", "fusion_weights", "candidate_sets", "estimate",
    "estimate_doa", "CandidateSet", "expand_candidates", "root_music_electrical_angle",
    "SimulationConfig", "SnapshotBatch", "synthesize",
]
