"""
Rényi entropies (in bits) and the closed-form bounds built from them.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .core.error_handler import ArgumentError, DomainError
from .tensor_core import DensityMatrix, SchmidtSpectrum

SPECTRUM_SUM_TOL = 1e-9
NEGATIVE_CLAMP = 1e-12


@dataclass(frozen=True)
class RenyiOrder:
    """Rényi order p > 1."""

    p: float

    def __post_init__(self) -> None:
        if not isinstance(self.p, int | float) or isinstance(self.p, bool):
            raise ArgumentError(f"Rényi order must be a real number, got {self.p!r}", argument="p")
        if not math.isfinite(self.p) or self.p <= 1:
            raise ArgumentError(f"Rényi order must satisfy p > 1, got {self.p!r}", argument="p")
        object.__setattr__(self, "p", float(self.p))

    def __float__(self) -> float:
        return self.p


def _order(p: float | RenyiOrder) -> float:
    return p.p if isinstance(p, RenyiOrder) else RenyiOrder(p).p


@dataclass(frozen=True)
class EntropyBoundPair:
    """C bounds one copy from below, c bounds two copies from above; c < 2C breaks additivity."""

    C: float
    c: float

    def __post_init__(self) -> None:
        for name, value in (("C", self.C), ("c", self.c)):
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be finite and non-negative, got {value!r}")

    @property
    def margin(self) -> float:
        return 2 * self.C - self.c

    @property
    def breaks(self) -> bool:
        return self.margin > 0


def renyi_entropy(spectrum: Sequence[float] | np.ndarray, p: float | RenyiOrder) -> float:
    """(1/(1−p)) log₂ Σ λᵢᵖ for a probability vector λ."""
    order = _order(p)
    lam = np.asarray(spectrum, dtype=np.float64).reshape(-1)
    if lam.size == 0:
        raise DomainError("spectrum is empty")
    if np.any(lam < -NEGATIVE_CLAMP):
        raise DomainError(f"spectrum has a negative entry {float(lam.min())!r}")
    lam = np.clip(lam, 0.0, None)
    total = float(lam.sum())
    if abs(total - 1.0) > SPECTRUM_SUM_TOL:
        raise DomainError(f"spectrum sums to {total!r}, expected 1", details={"sum": total})
    # + 0.0 turns -0.0 (pure states) into 0.0
    return float(np.log2(np.sum(lam**order)) / (1.0 - order)) + 0.0


def renyi_entropy_of_state(rho: DensityMatrix, p: float | RenyiOrder) -> float:
    return renyi_entropy(rho.spectrum(), p)


def renyi_entropy_of_schmidt(spectrum: SchmidtSpectrum, p: float | RenyiOrder) -> float:
    """Entropy of either reduced state of a unit vector with the given Schmidt coefficients."""
    return renyi_entropy(spectrum.squared(), p)


def entropy_upper_from_mu1(mu1sq: float, p: float | RenyiOrder) -> float:
    """(p/(1−p)) log₂ μ₁², an upper bound on S_p of a state whose largest eigenvalue is μ₁²."""
    order = _order(p)
    if not 0 < mu1sq <= 1 + 1e-12:
        raise DomainError(f"mu1sq must lie in (0, 1], got {mu1sq!r}", details={"mu1sq": mu1sq})
    return order / (1.0 - order) * math.log2(min(mu1sq, 1.0)) + 0.0


def lower_bound_C(A: float, p: float | RenyiOrder) -> float:  # noqa: N802
    """(1/(1−p)) log₂[(1−A)^p + A^p]: S_p of the two-point majorant (A, 1−A)."""
    order = _order(p)
    if not 0 < A < 1:
        raise DomainError(f"A must lie in (0, 1), got {A!r}", details={"A": A})
    return math.log2((1 - A) ** order + A**order) / (1.0 - order) + 0.0


def majorant_spectrum(A: float, size: int) -> np.ndarray:
    """(max{A, 1−A}, min{A, 1−A}, 0, ...) of length ``size``.

    Any spectrum whose largest entry is at most max{A, 1−A} with A ≥ ½ is majorized by it.
    """
    if not 0 < A < 1:
        raise DomainError(f"A must lie in (0, 1), got {A!r}")
    if size < 2:
        raise ArgumentError(f"size must be >= 2, got {size}", argument="size")
    out = np.zeros(size)
    out[0], out[1] = max(A, 1 - A), min(A, 1 - A)
    return out
