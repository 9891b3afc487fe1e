"""Per-group root-MUSIC and phase-ambiguity candidate expansion.

Each group sees the source through a virtual ULA whose spacing ``M_q d`` is
several half-wavelengths, so root-MUSIC only pins down the electrical angle
``xi_q = 2 pi M_q d sin(theta)`` modulo ``2 pi``.  Every physical angle that
is congruent to it becomes a candidate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array import ArrayConfig, virtual_steering_vector


class EstimationError(RuntimeError):
    """Raised when a group estimate cannot be formed for a trial."""


@dataclass(frozen=True)
class CovarianceEstimate:
    matrix: np.ndarray
    snapshot_count: int


@dataclass(frozen=True)
class NoiseSubspace:
    basis: np.ndarray
    eigenvalues: np.ndarray

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


@dataclass(frozen=True)
class CandidateSet:
    group_index: int
    electrical_angle: float
    angles: np.ndarray

    def __len__(self):
        return len(self.angles)


def sample_covariance(y: np.ndarray) -> CovarianceEstimate:
    """``R = Y Y^H / N``, symmetrized to remove rounding asymmetry."""
    y = np.asarray(y)
    if y.ndim != 2 or y.shape[1] < 1:
        raise ValueError("expected a (channels, snapshots) matrix with N >= 1")
    n = y.shape[1]
    r = y @ y.conj().T / n
    return CovarianceEstimate((r + r.conj().T) / 2, n)


def noise_subspace(cov: CovarianceEstimate | np.ndarray, source_count: int = 1) -> NoiseSubspace:
    """Eigenvectors of the ``K - source_count`` smallest eigenvalues."""
    r = cov.matrix if isinstance(cov, CovarianceEstimate) else np.asarray(cov)
    k = r.shape[0]
    if k < source_count + 1:
        raise ValueError("need at least source_count + 1 channels")
    if not np.all(np.isfinite(r)):
        raise EstimationError("covariance has non-finite entries")
    try:
        w, v = np.linalg.eigh(r)
    except np.linalg.LinAlgError as exc:
        raise EstimationError(str(exc)) from exc
    return NoiseSubspace(v[:, : k - source_count], w[: k - source_count])


def root_music_polynomial(projector: np.ndarray) -> np.ndarray:
    """Coefficients of ``z^(K-1) a(z)^H V a(z)``, highest power first.

    The coefficient of ``z^l`` in ``a^H V a`` is the sum of the ``l``-th
    diagonal of ``V`` (``l > 0`` above the main diagonal).
    """
    k = projector.shape[0]
    return np.array(
        [np.trace(projector, offset=l) for l in range(k - 1, -k, -1)], dtype=complex
    )


def polynomial_roots(coeffs: np.ndarray) -> np.ndarray:
    """All roots via eigenvalues of the companion matrix of the monic polynomial.

    Leading coefficients that are negligible relative to the largest one are
    dropped (those roots sit at infinity).  Trailing zeros give roots at 0.
    """
    c = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0:
        raise EstimationError("zero polynomial")
    nz = np.flatnonzero(np.abs(c) > 1e-14 * scale)
    lead, tail = nz[0], nz[-1]
    zeros_at_origin = len(c) - 1 - tail
    c = c[lead : tail + 1]
    deg = len(c) - 1
    if deg < 1:
        return np.zeros(zeros_at_origin, dtype=complex)
    companion = np.zeros((deg, deg), dtype=complex)
    companion[0, :] = -c[1:] / c[0]
    companion[1:, :-1] = np.eye(deg - 1)
    roots = np.linalg.eigvals(companion)
    return np.concatenate([roots, np.zeros(zeros_at_origin, dtype=complex)])


def root_music_electrical_angle(subspace: NoiseSubspace | np.ndarray, tol: float = 1e-6) -> float:
    """Electrical angle of the root nearest the unit circle, in ``(-pi, pi]``.

    Only roots with ``|z| <= 1 + tol`` are eligible; the reciprocal partner of
    each (same argument) is outside.  Ties in distance go to the root whose
    direction has the smaller noise-subspace projection.
    """
    basis = subspace.basis if isinstance(subspace, NoiseSubspace) else np.asarray(subspace)
    k = basis.shape[0]
    if k < 2:
        raise ValueError("root-MUSIC needs at least two virtual elements")
    v = basis @ basis.conj().T
    roots = polynomial_roots(root_music_polynomial(v))
    roots = roots[np.isfinite(roots)]
    eligible = roots[np.abs(roots) <= 1 + tol]
    if eligible.size == 0:
        raise EstimationError("no root on or inside the unit circle")
    dist = np.abs(1 - np.abs(eligible))
    close = eligible[dist <= dist.min() + 1e-12]
    if close.size > 1:
        steer = np.exp(1j * np.outer(np.arange(k), np.angle(close)))
        proj = np.linalg.norm(basis.conj().T @ steer, axis=0)
        close = close[np.argsort(proj, kind="stable")]
    root = close[0]
    # A noiseless subspace gives a double root on the circle, which the
    # companion eigenvalues only resolve to ~sqrt(eps); refine it as a
    # simple root of the derivative.
    others = roots[np.abs(roots - root) > 0]
    if others.size and np.min(np.abs(others - root)) < 1e-4 and abs(1 - abs(root)) < 1e-4:
        root = _refine_double_root(root_music_polynomial(v), root)
    xi = float(np.angle(root))
    return np.pi if xi == -np.pi else xi


def _refine_double_root(coeffs: np.ndarray, z: complex, iterations: int = 8) -> complex:
    d1 = np.polyder(coeffs)
    d2 = np.polyder(d1)
    for _ in range(iterations):
        den = np.polyval(d2, z)
        if den == 0:
            break
        step = np.polyval(d1, z) / den
        z = z - step
        if abs(step) < 1e-16:
            break
    return z


def expand_candidates(xi: float, config: ArrayConfig, q: int) -> CandidateSet:
    """Every angle whose electrical angle on group ``q`` is congruent to ``xi``.

    The direction sines ``u_j = (xi / (2 pi) + j) / (M_q d)`` are spaced
    ``1 / (M_q d)`` apart; all of them in ``[-1, 1]`` are kept, except that
    ``u = 1`` is dropped when ``u = -1`` is congruent to it (both describe
    the same endfire phase), so a half-wavelength array yields exactly
    ``M_q`` candidates.
    """
    m = config.group(q).antennas_per_subarray
    aperture = m * config.spacing
    frac = xi / (2 * np.pi)
    j = np.arange(np.ceil(-aperture - frac - 1e-12), np.floor(aperture - frac + 1e-12) + 1)
    u = (frac + j) / aperture
    u = np.clip(u[np.abs(u) <= 1 + 1e-12], -1.0, 1.0)
    if u.size > 1 and u[0] == -1.0 and u[-1] == 1.0 and abs(2 * aperture - round(2 * aperture)) < 1e-9:
        u = u[:-1]
    return CandidateSet(q, float(xi), np.arcsin(u))


def music_pseudospectrum(basis: np.ndarray, config: ArrayConfig, q: int, thetas) -> np.ndarray:
    """Grid MUSIC spectrum ``1 / ||U_N^H a(theta)||^2`` on the virtual array."""
    a = virtual_steering_vector(config, q, np.asarray(thetas))
    return 1.0 / np.sum(np.abs(basis.conj().T @ a) ** 2, axis=0)


def group_candidates(y: np.ndarray, config: ArrayConfig, q: int) -> CandidateSet:
    """Snapshots of one group to its candidate set."""
    subspace = noise_subspace(sample_covariance(y))
    return expand_candidates(root_music_electrical_angle(subspace), config, q)
