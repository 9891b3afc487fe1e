"""Heterogeneous hybrid analog-digital (H2AD) array geometry.

The full array is a uniform linear array of ``M`` antennas split into ``Q``
groups.  Group ``q`` holds ``K_q`` subarrays of ``M_q`` adjacent antennas, each
subarray summed in analog into one RF chain.  Seen from baseband, group ``q``
is a ``K_q``-element virtual ULA with spacing ``M_q * d``.

Lengths are in wavelengths (``wavelength`` is 1 by default) and angles in
radians.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class GroupConfig:
    subarray_count: int
    antennas_per_subarray: int

    def __post_init__(self):
        if int(self.subarray_count) != self.subarray_count or self.subarray_count < 2:
            raise ValueError(
                f"subarray_count must be an integer >= 2, got {self.subarray_count}"
            )
        if (
            int(self.antennas_per_subarray) != self.antennas_per_subarray
            or self.antennas_per_subarray < 1
        ):
            raise ValueError(
                "antennas_per_subarray must be a positive integer, "
                f"got {self.antennas_per_subarray}"
            )

    @property
    def antenna_count(self) -> int:
        return self.subarray_count * self.antennas_per_subarray


@dataclass(frozen=True)
class ArrayConfig:
    """Array geometry.

    Args:
        groups: Group layouts in array order (left to right).
        element_spacing: Antenna spacing ``d`` in the same unit as
            ``wavelength``.  Defaults to half a wavelength.
        wavelength: Carrier wavelength; only ``d / wavelength`` matters.
        allow_homogeneous: Permit repeated ``M_q`` values.  Needed for the
            conventional sub-connected and fully-digital baselines.
    """

    groups: tuple[GroupConfig, ...]
    element_spacing: float = 0.5
    wavelength: float = 1.0
    allow_homogeneous: bool = False
    allow_wide_spacing: bool = field(default=False, repr=False)

    def __post_init__(self):
        groups = tuple(
            g if isinstance(g, GroupConfig) else GroupConfig(*g) for g in self.groups
        )
        object.__setattr__(self, "groups", groups)
        if not groups:
            raise ValueError("at least one group is required")
        if self.wavelength <= 0 or self.element_spacing <= 0:
            raise ValueError("element_spacing and wavelength must be positive")
        if (
            not self.allow_wide_spacing
            and self.element_spacing > self.wavelength / 2 + 1e-15
        ):
            raise ValueError(
                "element_spacing exceeds half a wavelength; pass "
                "allow_wide_spacing=True to permit element-level ambiguity"
            )
        sizes = [g.antennas_per_subarray for g in groups]
        if not self.allow_homogeneous and len(set(sizes)) != len(sizes):
            raise ValueError(
                f"subarray sizes must be pairwise distinct, got {sizes}; "
                "pass allow_homogeneous=True for baseline arrays"
            )

    @classmethod
    def from_sizes(cls, subarray_counts, antennas_per_subarray, **kwargs):
        """Build from parallel sequences ``K = (K_1..K_Q)``, ``M = (M_1..M_Q)``.

        A scalar ``subarray_counts`` is broadcast to every group.
        """
        sizes = list(antennas_per_subarray)
        if np.isscalar(subarray_counts):
            counts = [int(subarray_counts)] * len(sizes)
        else:
            counts = list(subarray_counts)
        if len(counts) != len(sizes):
            raise ValueError("subarray_counts and antennas_per_subarray differ in length")
        return cls(tuple(GroupConfig(k, m) for k, m in zip(counts, sizes)), **kwargs)

    @property
    def group_count(self) -> int:
        return len(self.groups)

    @property
    def antenna_count(self) -> int:
        return sum(g.antenna_count for g in self.groups)

    @property
    def rf_chain_count(self) -> int:
        return sum(g.subarray_count for g in self.groups)

    @property
    def spacing(self) -> float:
        """Element spacing in wavelengths."""
        return self.element_spacing / self.wavelength

    def group(self, q: int) -> GroupConfig:
        """Group ``q`` (0-based)."""
        if not 0 <= q < len(self.groups):
            raise IndexError(f"group index {q} out of range [0, {len(self.groups)})")
        return self.groups[q]


def _check_angle(theta):
    theta = np.asarray(theta, dtype=float)
    if np.any(np.abs(theta) > np.pi / 2 + _ANGLE_TOL) or np.any(~np.isfinite(theta)):
        raise ValueError("angle outside the field of view [-pi/2, pi/2]")
    return theta


def steering_vector(config: ArrayConfig, q: int, theta: float) -> np.ndarray:
    """Element-level manifold of group ``q``: ``exp(j 2 pi n d sin(theta))``."""
    g = config.group(q)
    theta = _check_angle(theta)
    n = np.arange(g.antenna_count)
    return np.exp(2j * np.pi * config.spacing * n * np.sin(theta))


def virtual_steering_vector(config: ArrayConfig, q: int, theta) -> np.ndarray:
    """Manifold of the ``K_q``-element virtual array of group ``q``.

    ``theta`` may be an array; the result then has shape ``(K_q, len(theta))``.
    """
    g = config.group(q)
    theta = _check_angle(theta)
    k = np.arange(g.subarray_count)
    phase = 2 * np.pi * config.spacing * g.antennas_per_subarray * np.sin(theta)
    return np.exp(1j * np.multiply.outer(k, phase))


def subarray_gain(config: ArrayConfig, q: int, theta: float) -> complex:
    """Gain of one all-ones analog combiner of group ``q`` toward ``theta``.

    Geometric-series closed form, written as a Dirichlet kernel
    ``exp(j (M-1) phi / 2) sin(M phi / 2) / sin(phi / 2)`` for accuracy near
    the removable singularity.  Exactly ``M_q`` where ``phi`` is a multiple
    of ``2 pi``.
    """
    g = config.group(q)
    theta = float(_check_angle(theta))
    m = g.antennas_per_subarray
    phase = 2 * np.pi * config.spacing * np.sin(theta)
    half = np.sin(phase / 2)
    if abs(half) < 1e-9:
        return subarray_gain_direct(config, q, theta)
    return complex(np.exp(0.5j * (m - 1) * phase) * np.sin(m * phase / 2) / half)


def subarray_gain_direct(config: ArrayConfig, q: int, theta: float) -> complex:
    """Direct summation of the subarray gain (reference for the closed form)."""
    g = config.group(q)
    theta = float(_check_angle(theta))
    phase = 2 * np.pi * config.spacing * np.sin(theta)
    return complex(np.sum(np.exp(1j * phase * np.arange(g.antennas_per_subarray))))


def subarray_gain_derivative(config: ArrayConfig, q: int, theta: float) -> complex:
    """Weighted sum ``sum_m (m-1) d exp(j 2 pi (m-1) d sin(theta))``.

    This is ``d g / d(2 pi sin(theta)) / j``; it enters the closed-form FIM.
    """
    g = config.group(q)
    theta = float(_check_angle(theta))
    m = np.arange(g.antennas_per_subarray)
    phase = 2 * np.pi * config.spacing * np.sin(theta)
    return complex(np.sum(m * config.spacing * np.exp(1j * phase * m)))


def reference_config(**kwargs) -> ArrayConfig:
    """The reference geometry: Q=3, K=16, M=(7, 11, 13), half-wavelength."""
    return ArrayConfig.from_sizes(16, (7, 11, 13), **kwargs)
