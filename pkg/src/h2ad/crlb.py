"""Closed-form Fisher information, CRLB, fusion weights and energy efficiency.

Per group the model covariance is ``R_q = gamma b b^H + I`` with
``b = g_q a_Mq(theta) / sqrt(M_q)``.  For this rank-one model the Fisher
information about ``theta`` (signal and noise powers known) is

    FIM_q = 8 pi^2 gamma^2 cos^2(theta) / (lambda^2 M_q (gamma K_q |g|^2 + M_q)^2)
            * [ |g|^4 (K_q nu - mu^2) (gamma K_q |g|^2 + M_q)
                + M_q K_q^2 (|g|^2 |G|^2 - Re((G^* g)^2)) ]

with ``mu = d M_q K_q (K_q - 1) / 2``, ``nu = d^2 M_q^2 K_q (K_q - 1)(2 K_q - 1) / 6``
and ``G = sum_m (m - 1) d exp(j 2 pi (m - 1) d sin(theta))``.  Groups are
independent, so the array FIM is the sum over groups.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array import ArrayConfig, GroupConfig, subarray_gain, subarray_gain_derivative
from .signal import SimulationConfig


class DegenerateGeometryError(ValueError):
    """The Fisher information is zero or negative for this geometry/angle."""


@dataclass(frozen=True)
class FimInputs:
    group_index: int
    true_angle: float
    snr: float
    subarray_count: int
    antennas_per_subarray: int
    gain: complex
    gain_moment: complex
    mu: float
    nu: float
    spacing: float

    @property
    def antenna_count(self) -> int:
        return self.subarray_count * self.antennas_per_subarray

    @property
    def aperture_spread(self) -> float:
        """``K nu - mu^2`` in wavelengths squared (always > 0 for K >= 2)."""
        return self.spacing**2 * (self.subarray_count * self.nu - self.mu**2)


def fim_inputs(array: ArrayConfig, sim: SimulationConfig, q: int, snr: float | None = None) -> FimInputs:
    g = array.group(q)
    k, m = g.subarray_count, g.antennas_per_subarray
    return FimInputs(
        group_index=q,
        true_angle=sim.true_angle,
        snr=sim.snr if snr is None else snr,
        subarray_count=k,
        antennas_per_subarray=m,
        gain=subarray_gain(array, q, sim.true_angle),
        gain_moment=subarray_gain_derivative(array, q, sim.true_angle),
        # kept in units of d; the d^2 factor is applied in aperture_spread
        mu=m * k * (k - 1) / 2,
        nu=m**2 * k * (k - 1) * (2 * k - 1) / 6,
        spacing=array.spacing,
    )


def _fim_without_cos2(p: FimInputs) -> float:
    k, m, gamma = p.subarray_count, p.antennas_per_subarray, p.snr
    g2 = abs(p.gain) ** 2
    load = gamma * k * g2 + m
    cross = g2 * abs(p.gain_moment) ** 2 - np.real((np.conj(p.gain_moment) * p.gain) ** 2)
    bracket = g2**2 * p.aperture_spread * load + m * k**2 * cross
    if bracket < -1e-9 * max(1.0, abs(g2**2 * p.aperture_spread * load)):
        raise DegenerateGeometryError(f"negative information bracket {bracket:g} for group {p.group_index}")
    return 8 * np.pi**2 * gamma**2 * max(bracket, 0.0) / (m * load**2)


def fim_group(array: ArrayConfig, sim: SimulationConfig, q: int) -> float:
    """Per-snapshot Fisher information of group ``q`` about the DOA (rad^-2)."""
    p = fim_inputs(array, sim, q)
    return float(np.cos(sim.true_angle) ** 2 * _fim_without_cos2(p))


def crlb_group(array: ArrayConfig, sim: SimulationConfig, q: int) -> float:
    """``1 / (N FIM_q)`` in rad^2."""
    fim = fim_group(array, sim, q)
    if fim <= 0:
        raise DegenerateGeometryError(f"group {q} carries no information at this angle")
    return 1.0 / (sim.snapshot_count * fim)


def fusion_weights(crlbs) -> np.ndarray:
    """Inverse-variance weights ``w_q = CRLB_q^-1 / sum CRLB^-1``."""
    c = np.asarray(crlbs, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("expected a non-empty 1-D sequence")
    if np.any(~(c > 0)):
        raise ValueError("CRLB values must be positive")
    inv = 1.0 / c
    return inv / inv.sum()


def information_weights(array: ArrayConfig, sim: SimulationConfig) -> np.ndarray:
    """Fusion weights for the pipeline.

    Identical to ``fusion_weights`` of the group CRLBs.  The common
    ``cos^2(theta) / N`` factor is dropped first, which keeps the weights
    defined at endfire where every CRLB is infinite.
    """
    info = np.array([_fim_without_cos2(fim_inputs(array, sim, q)) for q in range(array.group_count)])
    if not np.any(info > 0):
        raise DegenerateGeometryError("no group carries information")
    return info / info.sum()


def aggregate_crlb(array: ArrayConfig, sim: SimulationConfig) -> float:
    """``1 / (N sum_q FIM_q)`` in rad^2."""
    total = sum(fim_group(array, sim, q) for q in range(array.group_count))
    if total <= 0:
        raise DegenerateGeometryError("no group carries information at this angle")
    return 1.0 / (sim.snapshot_count * total)


def fused_mse(crlbs, weights=None) -> float:
    """``sum w_q^2 CRLB_q``; optimal weights by default."""
    c = np.asarray(crlbs, dtype=float)
    w = fusion_weights(c) if weights is None else np.asarray(weights, dtype=float)
    return float(np.sum(w**2 * c))


@dataclass(frozen=True)
class PowerModel:
    """Component powers in watts.

    Defaults are representative figures only.  Every RF chain carries one
    RF front end and one ADC; every antenna carries one LNA and one phase
    shifter.
    """

    rf_chain: float = 0.040
    adc: float = 0.010
    lna: float = 0.020
    phase_shifter: float = 0.010
    baseband: float = 0.200

    def total(self, array: ArrayConfig) -> float:
        return (
            array.rf_chain_count * (self.rf_chain + self.adc)
            + array.antenna_count * (self.lna + self.phase_shifter)
            + self.baseband
        )


def energy_efficiency(array: ArrayConfig, sim: SimulationConfig, power: PowerModel | None = None) -> float:
    """``CRLB^-1/2 / P_all`` with the CRLB in degrees^2 (1/degree/W)."""
    power = power or PowerModel()
    crlb_deg2 = np.rad2deg(np.rad2deg(aggregate_crlb(array, sim)))
    total = power.total(array)
    if total <= 0:
        raise ValueError("total power must be positive")
    return float(crlb_deg2**-0.5 / total)


@dataclass(frozen=True)
class CrlbReport:
    fim: np.ndarray
    crlb: np.ndarray
    weights: np.ndarray
    aggregate_crlb: float
    predicted_mse: float
    energy_efficiency: float


def crlb_report(array: ArrayConfig, sim: SimulationConfig, power: PowerModel | None = None) -> CrlbReport:
    fim = np.array([fim_group(array, sim, q) for q in range(array.group_count)])
    crlb = 1.0 / (sim.snapshot_count * fim)
    weights = fusion_weights(crlb)
    return CrlbReport(
        fim=fim,
        crlb=crlb,
        weights=weights,
        aggregate_crlb=aggregate_crlb(array, sim),
        predicted_mse=fused_mse(crlb, weights),
        energy_efficiency=energy_efficiency(array, sim, power),
    )


def baseline_arrays(array: ArrayConfig) -> dict[str, ArrayConfig]:
    """The heterogeneous array and its two special-case baselines.

    ``homogeneous`` keeps every group's subarray count and gives all groups
    the mean subarray size (rounded when the antenna total does not divide
    evenly).  ``fully_digital`` keeps every group's antennas with one RF
    chain per antenna.
    """
    chains = array.rf_chain_count
    size = max(1, round(array.antenna_count / chains))
    kwargs = dict(element_spacing=array.element_spacing, wavelength=array.wavelength, allow_homogeneous=True)
    return {
        "h2ad": array,
        "homogeneous": ArrayConfig(
            tuple(GroupConfig(g.subarray_count, size) for g in array.groups), **kwargs
        ),
        "fully_digital": ArrayConfig(
            tuple(GroupConfig(g.antenna_count, 1) for g in array.groups), **kwargs
        ),
    }
