"""Deterministic outcome models for spin-1/2 direction observables.

Two outcome rules for the beable matching a direction observable
b . sigma: the original one tied to the special state (1, 0), and the
reformulated one driven by the state's Bloch vector, which reproduces
quantum means and variances for every state.  The subensemble split
demonstrating the loss of ensemble homogeneity lives here as well.

The single hidden variable is uniform on (-1/2, 1/2) throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import sign_pm

__all__ = [
    "HvMoments",
    "HomogeneitySplit",
    "bell_outcome_original",
    "bell_original_mean_analytic",
    "bell_outcome_modified",
    "hv_statistics",
    "outcome_probabilities",
    "homogeneity_split",
]


def _direction(vec) -> tuple[np.ndarray, float]:
    b = np.asarray(vec, dtype=float).reshape(-1)
    if b.shape != (3,):
        raise ValueError("direction must have three components")
    mag = float(np.linalg.norm(b))
    if mag == 0.0:
        raise ValueError("direction must be nonzero")
    return b, mag


def _bloch(vec) -> np.ndarray:
    e = np.asarray(vec, dtype=float).reshape(-1)
    if e.shape != (3,):
        raise ValueError("Bloch vector must have three components")
    if np.linalg.norm(e) > 1.0 + 1e-10:
        raise ValueError("Bloch vector must have length at most 1")
    return e


def bell_outcome_original(direction, hidden):
    """Original deterministic rule for the outcome of b . S.

    The tie-breaking component is b_z, falling back to b_x then b_y when
    earlier ones vanish; the result is always +|b| or -|b| and averages
    to b_z over the flat hidden variable.
    """
    b, mag = _direction(direction)
    bx, by, bz = b
    pick = bz if bz != 0.0 else (bx if bx != 0.0 else by)
    hs = np.asarray(hidden, dtype=float)
    out = mag * sign_pm(hs * mag + 0.5 * abs(bz)) * sign_pm(pick)
    return float(out) if np.ndim(hidden) == 0 else out


def bell_original_mean_analytic(direction) -> float:
    """Closed-form flat-ensemble average of the original rule.

    The thresholded sign factor averages to |b_z| / |b|, so the mean is
    |b_z| times the sign of the tie-breaking component.
    """
    b, mag = _direction(direction)
    bx, by, bz = b
    pick = bz if bz != 0.0 else (bx if bx != 0.0 else by)
    return mag * (abs(bz) / mag) * sign_pm(pick)


def bell_outcome_modified(direction, bloch, hidden):
    """Bloch-vector outcome rule: +|b| sign(b.e) above the threshold
    hidden value -|b.e| / (2|b|) and the negative below it."""
    b, mag = _direction(direction)
    e = _bloch(bloch)
    overlap = float(np.dot(b, e))
    hs = np.asarray(hidden, dtype=float)
    out = mag * sign_pm(overlap) * sign_pm(hs + abs(overlap) / (2.0 * mag))
    return float(out) if np.ndim(hidden) == 0 else out


@dataclass(frozen=True)
class HvMoments:
    mean: float
    variance: float


def hv_statistics(direction, bloch) -> HvMoments:
    """Exact flat-ensemble mean and variance of the modified rule:
    mean b.e and variance |b|^2 - (b.e)^2, matching the quantum values
    for any state with that Bloch vector."""
    b, mag = _direction(direction)
    e = _bloch(bloch)
    overlap = float(np.dot(b, e))
    return HvMoments(mean=overlap, variance=mag * mag - overlap * overlap)


def outcome_probabilities(direction, bloch) -> tuple[float, float]:
    """Probabilities of the outcomes +|b| and -|b| under the modified
    rule; their difference is b.e / |b|."""
    b, mag = _direction(direction)
    e = _bloch(bloch)
    overlap = float(np.dot(b, e))
    p_plus = 0.5 + overlap / (2.0 * mag)
    return p_plus, 1.0 - p_plus


@dataclass(frozen=True)
class HomogeneitySplit:
    """Subensemble averages of offset + b . S over the two sides of the
    outcome threshold, with the subensemble weights."""

    mean_plus: float
    mean_minus: float
    whole: float
    weight_plus: float
    weight_minus: float
    split_point: float


def homogeneity_split(offset, direction, bloch) -> HomogeneitySplit:
    """Split the flat hidden-variable ensemble at the outcome threshold.

    On the upper part the beable is constant at offset + |b| sign(b.e),
    on the lower part constant at the mirrored value, so the two
    subensemble means always differ by 2|b| even though the whole
    ensemble reproduces offset + b.e.  The boundary point joins the
    upper part.
    """
    b, mag = _direction(direction)
    e = _bloch(bloch)
    overlap = float(np.dot(b, e))
    split = -abs(overlap) / (2.0 * mag)
    side = sign_pm(overlap)
    return HomogeneitySplit(
        mean_plus=float(offset + mag * side),
        mean_minus=float(offset - mag * side),
        whole=float(offset + overlap),
        weight_plus=0.5 - split,
        weight_minus=0.5 + split,
        split_point=split,
    )
