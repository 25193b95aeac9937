"""Dispersion of the Kochen-Specker constraint in the square-outcome model.

Quantum mechanically Sx^2 + Sy^2 + Sz^2 is twice the identity for
spin 1, hence dispersion free in every state.  The deterministic model
assigns each squared spin component the outcome (1 - s_i)/2 where the
three sign functions share a single flat hidden variable and carry the
slot probabilities of the common eigenbasis.  The ensemble average of
the sum is always exactly 2, but the second moment has a closed form
ranging from 4 to 6, so the model is generically dispersive.

A deformed constraint with outcomes {2, 2 - eps, 2 + eps} makes the
dispersion arbitrarily small but never zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import PowerLawDistribution, SignFunctionSpec, sign_pm
from .oracle import QuantumState, simultaneous_eigenbasis
from .spin_one import CaseAssignment, OutcomeFormula, solve_coefficients

__all__ = [
    "KsModel",
    "DeformedKsModel",
    "DeformedMoments",
    "ks_sign_specs",
    "ks_square_outcomes",
    "ks_average",
    "ks_cross_term",
    "ks_second_moment",
    "ks_dispersion",
    "ks_model_from_state",
    "dispersion_scan",
    "deformed_outcomes",
    "deformed_statistics",
    "deformed_square_formula",
]

#: The flat distribution of the single shared hidden variable.
SHARED_HIDDEN = PowerLawDistribution(0, 1.0)


def _simplex(probabilities) -> tuple[float, float, float]:
    probs = tuple(float(p) for p in probabilities)
    if len(probs) != 3:
        raise ValueError("expected three probabilities")
    if any(p < -1e-10 or p > 1.0 + 1e-10 for p in probs):
        raise ValueError("probabilities must lie in [0, 1]")
    if abs(sum(probs) - 1.0) > 1e-10:
        raise ValueError("probabilities must sum to 1")
    return probs


@dataclass(frozen=True)
class KsModel:
    """Slot probabilities (p1, p2, p3) of the zero outcome for the three
    squared spin components, bound to the common-eigenbasis slots."""

    probabilities: tuple[float, float, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probabilities", _simplex(self.probabilities))


def ks_sign_specs(model: KsModel) -> tuple[SignFunctionSpec, ...]:
    """The three prefactored sign functions, biased by 2*p_i - 1, that
    drive the squared outcomes off the one shared hidden variable."""
    return tuple(
        SignFunctionSpec(2.0 * p - 1.0, n=0, norm=1.0, include_sign_prefactor=True)
        for p in model.probabilities
    )


def ks_square_outcomes(model: KsModel, hidden):
    """Outcomes of the three squared spin components at a shared hidden
    value, each (1 - sign)/2 in {0, 1}."""
    return tuple(0.5 * (1.0 - spec.evaluate(hidden)) for spec in ks_sign_specs(model))


def ks_average(model: KsModel) -> float:
    """Ensemble mean of the constraint sum: the per-component means
    1 - p_i telescope to exactly 2 on the simplex."""
    p1, p2, p3 = model.probabilities
    return (1.0 - p1) + (1.0 - p2) + (1.0 - p3)


def _cross_term(bi, bj):
    # E[(1-s_i)(1-s_j)]/4 with a shared hidden variable; the product of
    # the two sign functions averages to sign(bi) sign(bj) (1 - ||bi|-|bj||).
    product = (1.0 - np.abs(np.abs(bi) - np.abs(bj))) * sign_pm(bi) * sign_pm(bj)
    return 0.25 * (1.0 - bi - bj + product)


def ks_cross_term(p_i: float, p_j: float) -> float:
    """Closed-form shared-variable mean of the product of two squared
    outcomes with zero-outcome probabilities p_i, p_j."""
    return float(_cross_term(2.0 * float(p_i) - 1.0, 2.0 * float(p_j) - 1.0))


def ks_second_moment(model: KsModel) -> float:
    """Closed form: 4 + (1 + sum of pairwise sign-product means) / 2.

    Equals the moment-by-moment route: the fourth moments reduce to the
    second ones (outcomes are 0/1), contributing sum(1 - p_i) = 2, plus
    twice the three cross terms.
    """
    b = [2.0 * p - 1.0 for p in model.probabilities]
    pair_sum = sum(
        (1.0 - abs(abs(b[i]) - abs(b[j]))) * sign_pm(b[i]) * sign_pm(b[j])
        for i in range(3)
        for j in range(i + 1, 3)
    )
    return 4.0 + 0.5 * (1.0 + pair_sum)


def ks_dispersion(model: KsModel) -> float:
    """Variance of the constraint sum; the mean is exactly 2, so this is
    the second moment minus 4, ranging over [0, 2]."""
    return ks_second_moment(model) - 4.0


def ks_model_from_state(state: QuantumState) -> KsModel:
    """Slot probabilities of a spin-1 state against the common eigenbasis
    of the three squared spin components."""
    if state.dim != 3:
        raise ValueError("the constraint model needs a spin-1 (3-dimensional) state")
    slots = {"p1": 0.0, "p2": 0.0, "p3": 0.0}
    for row in simultaneous_eigenbasis():
        weight = float(np.real(row.vector.conj() @ state.rho @ row.vector))
        slots[row.probability_slot] = max(weight, 0.0)
    total = slots["p1"] + slots["p2"] + slots["p3"]
    return KsModel((slots["p1"] / total, slots["p2"] / total, slots["p3"] / total))


def dispersion_scan(step: float = 0.01, include_extremes: bool = True) -> np.ndarray:
    """Dispersion over a regular simplex grid, as rows (p1, p2, p3, value).

    ``include_extremes`` appends the centroid, the only point where the
    maximum 2 is attained; no regular decimal grid contains it.
    """
    if not 0.0 < step <= 0.5:
        raise ValueError("step must lie in (0, 0.5]")
    count = int(round(1.0 / step))
    points = []
    for i in range(count + 1):
        for j in range(count - i + 1):
            p1 = i * step
            p2 = j * step
            points.append((p1, p2, 1.0 - p1 - p2))
    if include_extremes:
        points.append((1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0))
    grid = np.asarray(points)
    b = 2.0 * grid - 1.0
    pair_sum = np.zeros(len(grid))
    for i in range(3):
        for j in range(i + 1, 3):
            prod = (1.0 - np.abs(np.abs(b[:, i]) - np.abs(b[:, j]))) * sign_pm(b[:, i]) * sign_pm(b[:, j])
            pair_sum += prod
    dispersion = 0.5 * (1.0 + pair_sum)
    return np.column_stack([grid, dispersion])


@dataclass(frozen=True)
class DeformedKsModel:
    """Three-outcome model {2 + eps, 2, 2 - eps} with probabilities
    (p_plus, p_zero, p_minus)."""

    eps: float
    probabilities: tuple[float, float, float]

    def __post_init__(self) -> None:
        if not self.eps > 0.0:
            raise ValueError("eps must be positive")
        object.__setattr__(self, "probabilities", _simplex(self.probabilities))


def deformed_outcomes(model: DeformedKsModel) -> tuple[float, float, float]:
    """The outcomes paired with (p_plus, p_zero, p_minus)."""
    return (2.0 + model.eps, 2.0, 2.0 - model.eps)


@dataclass(frozen=True)
class DeformedMoments:
    mean: float
    second_moment: float
    variance: float


def deformed_statistics(model: DeformedKsModel) -> DeformedMoments:
    """Closed-form moments of the deformed constraint.

    With d = p_plus - p_minus and s = p_plus + p_minus: mean 2 + eps*d,
    second moment 4 + 4*eps*d + eps^2*s, variance eps^2*(s - d^2); the
    variance scales as eps^2, small but never zero while s > 0.
    """
    p_plus, _, p_minus = model.probabilities
    diff = p_plus - p_minus
    both = p_plus + p_minus
    eps = model.eps
    return DeformedMoments(
        mean=2.0 + eps * diff,
        second_moment=4.0 + 4.0 * eps * diff + eps * eps * both,
        variance=eps * eps * (both - diff * diff),
    )


def deformed_square_formula() -> OutcomeFormula:
    """Coefficient structure (3/4, -1/4, 1/4, 1/4) of the squared spin
    component in the deformed model.

    This is the four-pattern solve for the spectrum (1, 0, 1) under the
    assignment whose pattern puts the zero outcome at (+, -); it carries
    no sign-function realisation of its own.
    """
    assignment = CaseAssignment("I")
    values = (1.0, 0.0, 1.0)
    return OutcomeFormula(
        values=values,
        coefficients=solve_coefficients(assignment, values),
        assignment=assignment,
    )
