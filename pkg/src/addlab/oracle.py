"""
Multi-start numerical oracles over product states and subspace vectors.

``max_product_overlap`` / ``min_product_overlap`` extremize f(x, y) = ‖P(x ⊗ y)‖² by alternating
eigen-steps: with y fixed, f is the quadratic form of the partial contraction A_y, so the best x
is an extreme eigenvector of A_y, and symmetrically for y. Every half-step is optimal for its
block, so f is monotone along a restart.

Restart ``k`` draws its starting point from ``np.random.default_rng([seed, k])``; restarts are
independent and may run on a thread pool, results are merged by restart index.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import isqrt, prod
from typing import Any, Literal, TypeVar

import numpy as np

from .core.config import OracleConfig
from .core.error_handler import ArgumentError, DomainError
from .core.logging import get_logger
from .entropy import RenyiOrder, renyi_entropy
from .subspaces import sum_representation_basis
from .tensor_core import SubspaceBasis, TensorVector, projector, random_unit_vector, schmidt_batch

logger = get_logger("oracle")

PROJECTOR_TOL = 1e-10
_TINY = 1e-300

T = TypeVar("T")


@dataclass(frozen=True, eq=False)
class OracleEstimate:
    """Best value over restarts, with the direction in which it bounds the true extremum."""

    value: float
    best_witness: TensorVector
    restarts_converged: int
    iterations_used: int
    restarts: int
    bound: Literal["lower", "upper"]
    spread: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "bound": self.bound,
            "restarts": self.restarts,
            "restarts_converged": self.restarts_converged,
            "iterations_used": self.iterations_used,
            "spread": self.spread,
            "best_witness": {
                "dims": list(self.best_witness.dims),
                "re": self.best_witness.coefficients.real.tolist(),
                "im": self.best_witness.coefficients.imag.tolist(),
            },
        }


@dataclass
class AscentTrace:
    """One restart of the alternating scheme; ``history`` holds f after every half-step."""

    value: float
    x: np.ndarray
    y: np.ndarray
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list)


@dataclass
class _RestartResult:
    value: float
    witness: TensorVector
    iterations: int
    converged: bool


def _check_projector(P: np.ndarray, dims: Sequence[int] | None) -> tuple[int, int]:
    P = np.asarray(P)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ArgumentError(f"projector must be square, got shape {P.shape}", argument="P")
    if dims is None:
        side = isqrt(P.shape[0])
        if side * side != P.shape[0]:
            raise ArgumentError(f"cannot infer (d, d) factors from side {P.shape[0]}; pass dims", argument="dims")
        dims = (side, side)
    if len(dims) != 2 or prod(dims) != P.shape[0]:
        raise ArgumentError(f"dims {tuple(dims)} do not factor side {P.shape[0]}", argument="dims")
    hermitian = float(np.max(np.abs(P - P.conj().T)))
    idempotent = float(np.max(np.abs(P @ P - P)))
    if hermitian > PROJECTOR_TOL or idempotent > PROJECTOR_TOL:
        raise DomainError(
            "operator is not an orthogonal projector",
            details={"hermitian_residual": hermitian, "idempotent_residual": idempotent},
        )
    return int(dims[0]), int(dims[1])


def _extreme_eigenvector(a: np.ndarray, maximize: bool) -> np.ndarray:
    _, vectors = np.linalg.eigh((a + a.conj().T) / 2)
    return vectors[:, -1] if maximize else vectors[:, 0]


def _overlap(p4: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    return float(np.real(np.einsum("abce,a,b,c,e->", p4, x.conj(), y.conj(), x, y)))


def alternating_ascent(
    P: np.ndarray,
    dims: Sequence[int],
    x0: np.ndarray,
    y0: np.ndarray,
    maximize: bool = True,
    max_iterations: int = 500,
    tolerance: float = 1e-10,
) -> AscentTrace:
    """Alternate extreme-eigenvector updates of x and y until the relative change drops below ``tolerance``."""
    d_a, d_b = int(dims[0]), int(dims[1])
    p4 = np.asarray(P, dtype=np.complex128).reshape(d_a, d_b, d_a, d_b)
    x = np.asarray(x0, dtype=np.complex128) / np.linalg.norm(x0)
    y = np.asarray(y0, dtype=np.complex128) / np.linalg.norm(y0)
    value = _overlap(p4, x, y)
    history = [value]
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        previous = value
        x = _extreme_eigenvector(np.einsum("abce,b,e->ac", p4, y.conj(), y), maximize)
        history.append(_overlap(p4, x, y))
        y = _extreme_eigenvector(np.einsum("abce,a,c->be", p4, x.conj(), x), maximize)
        value = _overlap(p4, x, y)
        history.append(value)
        if abs(value - previous) <= tolerance * max(abs(previous), _TINY):
            converged = True
            break
    return AscentTrace(value=value, x=x, y=y, iterations=iterations, converged=converged, history=history)


def _run_restarts(cfg: OracleConfig, task: Callable[[np.random.Generator], T]) -> list[T]:
    def run(index: int) -> T:
        return task(np.random.default_rng([cfg.seed, index]))

    if cfg.workers > 1 and cfg.restarts > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(run, range(cfg.restarts)))
    return [run(index) for index in range(cfg.restarts)]


def _merge(results: list[_RestartResult], maximize: bool, operation: str) -> OracleEstimate:
    values = np.array([r.value for r in results])
    best_index = int(np.argmax(values) if maximize else np.argmin(values))
    best = results[best_index]
    for index, result in enumerate(results):
        logger.debug(
            f"{operation} restart {index}",
            restart=index,
            value=result.value,
            iterations=result.iterations,
            converged=result.converged,
        )
    return OracleEstimate(
        value=float(best.value),
        best_witness=best.witness,
        restarts_converged=sum(r.converged for r in results),
        iterations_used=sum(r.iterations for r in results),
        restarts=len(results),
        bound="lower" if maximize else "upper",
        spread=float(abs(best.value - np.median(values))),
    )


def _product_extremum(
    P: np.ndarray, cfg: OracleConfig, dims: Sequence[int] | None, maximize: bool, operation: str
) -> OracleEstimate:
    cfg.validate()
    d_a, d_b = _check_projector(P, dims)
    started = time.perf_counter()

    def task(rng: np.random.Generator) -> _RestartResult:
        x0 = random_unit_vector((d_a,), rng).coefficients
        y0 = random_unit_vector((d_b,), rng).coefficients
        trace = alternating_ascent(P, (d_a, d_b), x0, y0, maximize, cfg.max_iterations, cfg.tolerance)
        witness = TensorVector.from_factors(trace.x, trace.y)
        return _RestartResult(trace.value, witness, trace.iterations, trace.converged)

    estimate = _merge(_run_restarts(cfg, task), maximize, operation)
    logger.log_operation(
        operation,
        success=True,
        duration=time.perf_counter() - started,
        value=estimate.value,
        restarts_converged=estimate.restarts_converged,
        dims=[d_a, d_b],
    )
    return estimate


def max_product_overlap(P: np.ndarray, cfg: OracleConfig, dims: Sequence[int] | None = None) -> OracleEstimate:
    """sup over unit x, y of ‖P(x ⊗ y)‖²; the value is a lower estimate of the supremum."""
    return _product_extremum(P, cfg, dims, maximize=True, operation="max_product_overlap")


def min_product_overlap(P: np.ndarray, cfg: OracleConfig, dims: Sequence[int] | None = None) -> OracleEstimate:
    """inf over unit x, y of ‖P(x ⊗ y)‖²; the value is an upper estimate of the infimum."""
    return _product_extremum(P, cfg, dims, maximize=False, operation="min_product_overlap")


def estimate_Md(d: int, cfg: OracleConfig) -> OracleEstimate:  # noqa: N802
    """M_d = inf ‖P_L(x ⊗ y)‖², using the sum-representation basis of L."""
    if d < 2:
        raise ArgumentError(f"d must be >= 2, got {d}", argument="d")
    return min_product_overlap(projector(sum_representation_basis(d)), cfg, (d, d))


def max_schmidt_in_subspace(W: SubspaceBasis, cfg: OracleConfig) -> OracleEstimate:
    """max over unit ξ ∈ span W of μ₁²(ξ), which equals sup ‖P_W(x ⊗ y)‖²."""
    if len(W.ambient_dims) != 2:
        raise ArgumentError(f"subspace must live in a bipartite space, got dims {W.ambient_dims}", argument="W")
    return max_product_overlap(projector(W), cfg, W.ambient_dims)


def _batch_entropy(states: np.ndarray, d_k: int, d_e: int, p: float) -> np.ndarray:
    singular = schmidt_batch(states, d_k, d_e)
    return np.log2(np.sum((singular**2) ** p, axis=1)) / (1.0 - p)


def min_output_entropy_search(W: SubspaceBasis, p: float | RenyiOrder, cfg: OracleConfig) -> OracleEstimate:
    """Upper estimate of min over unit w ∈ span W of S_p(Tr_E |w⟩⟨w|).

    Gauss-Seidel pattern search on the 2·dim W real coordinates of the (re-normalized) coefficient
    vector: each coordinate tries ±step, the step halves after a sweep without improvement, and a
    restart ends when the step falls below 1e-8 or after ``max_iterations`` sweeps.
    """
    order = float(p) if isinstance(p, RenyiOrder) else RenyiOrder(p).p
    cfg.validate()
    if W.dim == 0:
        raise ArgumentError("subspace is empty", argument="W")
    if len(W.ambient_dims) != 2:
        raise ArgumentError(f"subspace must live in a bipartite space, got dims {W.ambient_dims}", argument="W")
    q = W.matrix()
    residual = W.orthonormality_residual()
    if residual > PROJECTOR_TOL:
        raise DomainError(f"basis is not orthonormal (residual {residual:.3e})")
    d_k, d_e = W.ambient_dims
    m = W.dim
    started = time.perf_counter()

    def states_of(coefficients: np.ndarray) -> np.ndarray:
        c = coefficients / np.linalg.norm(coefficients, axis=-1, keepdims=True)
        return c @ q.T

    def task(rng: np.random.Generator) -> _RestartResult:
        z = random_unit_vector((m,), rng).coefficients
        coords = np.concatenate([z.real, z.imag])
        value = float(_batch_entropy(states_of(z[None, :]), d_k, d_e, order)[0])
        step = 0.1
        sweeps = 0
        converged = False
        while sweeps < cfg.max_iterations:
            sweeps += 1
            improved = False
            for j in range(2 * m):
                trial = np.tile(coords, (2, 1))
                trial[0, j] += step
                trial[1, j] -= step
                candidates = trial[:, :m] + 1j * trial[:, m:]
                if np.any(np.linalg.norm(candidates, axis=1) == 0.0):
                    continue
                values = _batch_entropy(states_of(candidates), d_k, d_e, order)
                k = int(np.argmin(values))
                if values[k] < value:
                    value = float(values[k])
                    coords = trial[k]
                    improved = True
            if not improved:
                step /= 2
                if step < 1e-8:
                    converged = True
                    break
        c = coords[:m] + 1j * coords[m:]
        w = TensorVector(states_of(c[None, :])[0], (d_k, d_e))
        return _RestartResult(value, w, sweeps, converged)

    results = _run_restarts(cfg, task)
    estimate = _merge(results, maximize=False, operation="min_output_entropy_search")
    best_state = estimate.best_witness.coefficients.reshape(d_k, d_e)
    exact = renyi_entropy(np.linalg.svd(best_state, compute_uv=False) ** 2, order)
    estimate = OracleEstimate(
        value=exact,
        best_witness=estimate.best_witness,
        restarts_converged=estimate.restarts_converged,
        iterations_used=estimate.iterations_used,
        restarts=estimate.restarts,
        bound="upper",
        spread=estimate.spread,
    )
    logger.log_operation(
        "min_output_entropy_search",
        success=True,
        duration=time.perf_counter() - started,
        value=estimate.value,
        dim_W=m,
        p=order,
    )
    return estimate
