"""Baseband snapshot synthesis for a single far-field narrowband source."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .array import ArrayConfig, subarray_gain, virtual_steering_vector


class SignalModel(str, enum.Enum):
    UNIT_MODULUS_RANDOM_PHASE = "unit_modulus_random_phase"
    COMPLEX_GAUSSIAN = "complex_gaussian"


@dataclass(frozen=True)
class SimulationConfig:
    """Scenario parameters.

    ``snr_db`` is the per-antenna ratio of signal to noise power.  Noise power
    is fixed at 1 so the signal power equals the linear SNR.  ``noiseless``
    switches the noise off entirely (the infinite-SNR limit); the nominal SNR
    is still used for analytic bounds and fusion weights.
    """

    true_angle: float
    snapshot_count: int = 100
    snr_db: float = 0.0
    signal_model: SignalModel = SignalModel.UNIT_MODULUS_RANDOM_PHASE
    rng_seed: int = 0
    noiseless: bool = False

    def __post_init__(self):
        if int(self.snapshot_count) != self.snapshot_count or self.snapshot_count < 1:
            raise ValueError(f"snapshot_count must be >= 1, got {self.snapshot_count}")
        if not np.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite")
        if abs(self.true_angle) > np.pi / 2 + 1e-12:
            raise ValueError("true_angle outside [-pi/2, pi/2]")
        object.__setattr__(self, "signal_model", SignalModel(self.signal_model))

    @property
    def snr(self) -> float:
        """Linear SNR (signal power over noise power)."""
        return 10.0 ** (self.snr_db / 10.0)

    @property
    def noise_power(self) -> float:
        return 0.0 if self.noiseless else 1.0


@dataclass(frozen=True)
class SnapshotBatch:
    outputs: tuple[np.ndarray, ...]
    array: ArrayConfig
    sim: SimulationConfig

    def __post_init__(self):
        if len(self.outputs) != self.array.group_count:
            raise ValueError("one output matrix per group is required")
        for y, g in zip(self.outputs, self.array.groups):
            if y.shape != (g.subarray_count, self.sim.snapshot_count):
                raise ValueError(
                    f"group output shape {y.shape} does not match "
                    f"({g.subarray_count}, {self.sim.snapshot_count})"
                )


def _source_waveform(rng: np.random.Generator, sim: SimulationConfig) -> np.ndarray:
    n = sim.snapshot_count
    if sim.signal_model is SignalModel.UNIT_MODULUS_RANDOM_PHASE:
        s = np.exp(2j * np.pi * rng.random(n))
    else:
        s = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    return np.sqrt(sim.snr) * s


def group_signal_term(array: ArrayConfig, q: int, theta: float) -> np.ndarray:
    """Noiseless response ``g_q a_Mq(theta) / sqrt(M_q)`` of group ``q``."""
    m = array.group(q).antennas_per_subarray
    return subarray_gain(array, q, theta) * virtual_steering_vector(array, q, theta) / np.sqrt(m)


def synthesize(
    array: ArrayConfig,
    sim: SimulationConfig,
    seed: np.random.SeedSequence | int | None = None,
) -> SnapshotBatch:
    """Draw one batch of group outputs.

    A single source waveform drives every group.  Signal and noise come from
    separate children of ``seed`` (``sim.rng_seed`` when omitted), so the
    waveform does not depend on the geometry or the noise draw.
    """
    if seed is None:
        seed = sim.rng_seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    signal_seq, noise_seq = (
        np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key + (i,)) for i in (0, 1)
    )
    s = _source_waveform(np.random.default_rng(signal_seq), sim)
    noise_rng = np.random.default_rng(noise_seq)
    sigma = np.sqrt(sim.noise_power / 2)
    outputs = []
    for q, g in enumerate(array.groups):
        y = np.outer(group_signal_term(array, q, sim.true_angle), s)
        if sim.noise_power > 0:
            shape = (g.subarray_count, sim.snapshot_count)
            y = y + sigma * (noise_rng.standard_normal(shape) + 1j * noise_rng.standard_normal(shape))
        outputs.append(y)
    return SnapshotBatch(tuple(outputs), array, sim)


def analytic_covariance(array: ArrayConfig, q: int, theta: float, snr: float) -> np.ndarray:
    """Model covariance of group ``q``: ``snr |g|^2 / M_q a a^H + I``."""
    b = group_signal_term(array, q, theta)
    return snr * np.outer(b, b.conj()) + np.eye(b.size)
