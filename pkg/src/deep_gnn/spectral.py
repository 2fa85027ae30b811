"""Infinite-depth limits of the propagation operators and their numerical checks.

For a connected graph both operators converge under repeated application:

    Â⊕ᵏ -> Π⊕,  every row equal to d̃ / Σ d̃
    Â⊙ᵏ -> Π⊙,  Π⊙[i, j] = sqrt(d̃ᵢ d̃ⱼ) / Σ d̃

The speed is governed by |λ₂|, the largest eigenvalue magnitude besides 1.
Everything here works on dense n×n matrices and is capped at n = 2000.
"""

from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np

from .errors import ConfigError, ConvergenceError, DisconnectedGraphError, ShapeError, VerificationError
from .graph import Graph, OperatorKind, PropagationOperator, connected_components, normalize, propagate
from .observability import logger

DENSE_LIMIT = 2000
CORRESPONDENCE_LIMIT = 200
IDENTITY_TOL = 1e-8
CORRESPONDENCE_TOL = 1e-6


@dataclass
class LimitMatrix:
    """Dense limit Π of Âᵏ as k grows."""
    kind: OperatorKind
    dense: np.ndarray


@dataclass
class ConvergenceResult:
    """Outcome of repeated multiplication towards the limit."""

    kind: OperatorKind
    tol: float
    k_converge: Optional[int]
    residuals: list[float] = field(default_factory=list)  # residuals[k-1] = ‖Âᵏ − Π‖_F

    @property
    def converged(self) -> bool:
        return self.k_converge is not None


@dataclass
class Lambda2Estimate:
    """Power-iteration estimate of |λ₂| with its final two-step residual."""
    value: float
    residual: float
    iterations: int


@dataclass
class SpectralReport:
    """Eigen-identity residuals, |λ₂| and the convergence step for one operator."""

    kind: str
    eigenvalue_one_residuals: dict[str, float]
    lambda2_abs: float
    k_converge: Optional[int]
    tol: float

    def to_dict(self) -> dict:
        return asdict(self)


def _require_connected(graph: Graph, what: str):
    labels = connected_components(graph)
    if labels.max() > 0:
        raise DisconnectedGraphError(
            f"{what} requires a connected graph, found {labels.max() + 1} components; "
            f"apply it per component (see limit_by_components)"
        )


def _require_dense_size(n: int, limit: int = DENSE_LIMIT):
    if n > limit:
        raise ShapeError(f"dense spectral computations are capped at n={limit}, got n={n}")


def limit_row_avg(graph: Graph) -> LimitMatrix:
    """Limit of the row-averaging operator: identical rows d̃ / Σ d̃."""
    _require_connected(graph, "limit_row_avg")
    _require_dense_size(graph.n)
    deg = graph.degrees_tilde.astype(np.float64)
    pi = deg / deg.sum()
    return LimitMatrix(OperatorKind.ROW_AVG, np.tile(pi, (graph.n, 1)))


def limit_symmetric(graph: Graph) -> LimitMatrix:
    """Limit of the symmetric operator: sqrt(d̃) sqrt(d̃)ᵀ / Σ d̃."""
    _require_connected(graph, "limit_symmetric")
    _require_dense_size(graph.n)
    deg = graph.degrees_tilde.astype(np.float64)
    root = np.sqrt(deg)
    return LimitMatrix(OperatorKind.SYMMETRIC, np.outer(root, root) / deg.sum())


def limit_for(graph: Graph, kind: OperatorKind | str) -> LimitMatrix:
    kind = OperatorKind(kind)
    return limit_row_avg(graph) if kind is OperatorKind.ROW_AVG else limit_symmetric(graph)


def limit_by_components(graph: Graph, kind: OperatorKind | str) -> np.ndarray:
    """
    Limit of Âᵏ for a possibly disconnected graph.

    Each component converges on its own, so the limit is block structured:
    the closed form is applied with degree sums taken per component.
    """
    kind = OperatorKind(kind)
    _require_dense_size(graph.n)
    labels = connected_components(graph)
    deg = graph.degrees_tilde.astype(np.float64)
    dense = np.zeros((graph.n, graph.n))

    for comp in range(labels.max() + 1):
        nodes = np.flatnonzero(labels == comp)
        d = deg[nodes]
        if kind is OperatorKind.ROW_AVG:
            block = np.tile(d / d.sum(), (len(nodes), 1))
        else:
            block = np.outer(np.sqrt(d), np.sqrt(d)) / d.sum()
        dense[np.ix_(nodes, nodes)] = block
    return dense


def operator_power(op: PropagationOperator, k: int) -> np.ndarray:
    """Dense Âᵏ by k sparse-dense products."""
    _require_dense_size(op.n)
    power = np.eye(op.n)
    for _ in range(k):
        power = propagate(op, power)
    return power


def power_converge(
    op: PropagationOperator,
    limit: LimitMatrix,
    tol: float = 1e-6,
    max_k: int = 5000,
) -> ConvergenceResult:
    """
    Smallest k ≤ max_k with ‖Âᵏ − Π‖_F < tol.

    Non-convergence within max_k is reported through `k_converge=None`
    with the full residual sequence, not raised.
    """
    if tol <= 0:
        raise ConfigError(f"tol must be positive, got {tol}")
    _require_connected(op.graph, "power_converge")
    _require_dense_size(op.n)

    power = np.eye(op.n)
    residuals: list[float] = []
    for k in range(1, max_k + 1):
        power = propagate(op, power)
        residual = float(np.linalg.norm(power - limit.dense, ord="fro"))
        residuals.append(residual)
        if residual < tol:
            logger.debug(f"{op.kind.value}: converged at k={k} (residual {residual:.3e})")
            return ConvergenceResult(op.kind, tol, k, residuals)

    logger.warning(f"{op.kind.value}: no convergence within {max_k} steps "
                   f"(last residual {residuals[-1]:.3e})")
    return ConvergenceResult(op.kind, tol, None, residuals)


def _dominant_pair(op: PropagationOperator) -> tuple[np.ndarray, np.ndarray]:
    """
    Right eigenvector and inner-product weights for eigenvalue 1.

    Â⊕ is self-adjoint under ⟨x, y⟩ = xᵀ D̃ y, Â⊙ under the plain inner
    product, so power iteration can treat both the same way.
    """
    deg = op.graph.degrees_tilde.astype(np.float64)
    if op.kind is OperatorKind.ROW_AVG:
        vec, weights = np.ones(op.n), deg
    else:
        vec, weights = np.sqrt(deg), np.ones(op.n)
    vec = vec / np.sqrt(np.sum(weights * vec * vec))
    return vec, weights


def second_eigenvalue(
    op: PropagationOperator,
    rtol: float = 1e-6,
    max_iter: int = 100_000,
    seed: int = 0,
) -> Lambda2Estimate:
    """
    Estimate |λ₂| by power iteration on Â deflated by its eigenvalue-1 pair.

    The deflated map B = Â − v vᵀW has spectrum {0, λ₂, ..., λₙ}; iterating
    x <- Bx / ‖Bx‖ drives ‖Bx‖ to |λ₂|. Convergence is declared when the
    two-step residual ‖B²x − μ²x‖ falls below rtol·μ².

    Raises:
        ConvergenceError: when max_iter is reached, with the last residual
    """
    _require_connected(op.graph, "second_eigenvalue")
    _require_dense_size(op.n)

    vec, weights = _dominant_pair(op)

    def deflated(x: np.ndarray) -> np.ndarray:
        ax = propagate(op, x[:, None])[:, 0]
        return ax - vec * np.sum(weights * vec * x)

    def wnorm(x: np.ndarray) -> float:
        return float(np.sqrt(np.sum(weights * x * x)))

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(op.n)
    x = x - vec * np.sum(weights * vec * x)
    if wnorm(x) == 0.0:
        return Lambda2Estimate(0.0, 0.0, 0)
    x /= wnorm(x)

    residual = np.inf
    for iteration in range(1, max_iter + 1):
        bx = deflated(x)
        mu = wnorm(bx)
        if mu < 1e-14:
            return Lambda2Estimate(0.0, 0.0, iteration)  # Â is rank one (e.g. complete graphs)
        residual = wnorm(deflated(bx) - mu * mu * x)
        if residual <= rtol * mu * mu:
            return Lambda2Estimate(mu, residual, iteration)
        x = bx / mu

    raise ConvergenceError(
        f"second_eigenvalue did not converge in {max_iter} iterations (residual {residual:.3e})"
    )


def _dense_lambda2(graph: Graph) -> float:
    """|λ₂| from the symmetric eigendecomposition of Â⊙ (both operators share it)."""
    eigvals = np.linalg.eigvalsh(normalize(graph, OperatorKind.SYMMETRIC).to_dense())
    top = int(np.argmax(eigvals))
    rest = np.delete(np.abs(eigvals), top)
    return float(rest.max()) if len(rest) else 0.0


def verify_unit_eigenpairs(graph: Graph, tol: float = IDENTITY_TOL) -> dict[str, float]:
    """
    Check that 1 is an eigenvalue of both operators with the known eigenvectors,
    and that every other eigenvalue has magnitude below 1.

    Identities (e the all-ones row vector):
        Â⊕ eᵀ = eᵀ,        (e D̃) Â⊕ = e D̃,
        Â⊙ D̃^½ eᵀ = D̃^½ eᵀ,  (e D̃^½) Â⊙ = e D̃^½

    Returns:
        residual 2-norm per identity, plus `lambda2_abs`

    Raises:
        VerificationError: listing every identity whose residual exceeds tol
    """
    _require_connected(graph, "verify_unit_eigenpairs")
    _require_dense_size(graph.n)

    row = normalize(graph, OperatorKind.ROW_AVG)
    sym = normalize(graph, OperatorKind.SYMMETRIC)
    deg = graph.degrees_tilde.astype(np.float64)[:, None]
    ones = np.ones_like(deg)
    root = np.sqrt(deg)

    residuals = {
        "rowavg_right": float(np.linalg.norm(propagate(row, ones) - ones)),
        "rowavg_left": float(np.linalg.norm(propagate(row, deg, transpose=True) - deg)),
        "symmetric_right": float(np.linalg.norm(propagate(sym, root) - root)),
        "symmetric_left": float(np.linalg.norm(propagate(sym, root, transpose=True) - root)),
    }
    lambda2 = _dense_lambda2(graph)

    broken = [f"{name} (residual {value:.3e})" for name, value in residuals.items() if value > tol]
    if lambda2 >= 1.0:
        broken.append(f"|lambda2| = {lambda2:.6f} is not below 1")
    if broken:
        raise VerificationError("eigenvalue-1 identities failed: " + ", ".join(broken))

    residuals["lambda2_abs"] = lambda2
    return residuals


def verify_eigenpair_correspondence(graph: Graph, tol: float = CORRESPONDENCE_TOL) -> float:
    """
    Check that every eigenpair (λ, v) of Â⊙ maps to an eigenpair (λ, D̃^-½ v) of Â⊕.

    Returns:
        the largest residual ‖Â⊕u − λu‖ over all eigenpairs, u normalized

    Raises:
        VerificationError: naming the eigenvalue whose residual exceeds tol
    """
    _require_connected(graph, "verify_eigenpair_correspondence")
    _require_dense_size(graph.n, CORRESPONDENCE_LIMIT)

    sym = normalize(graph, OperatorKind.SYMMETRIC).to_dense()
    row = normalize(graph, OperatorKind.ROW_AVG)
    eigvals, eigvecs = np.linalg.eigh(sym)

    inv_root = 1.0 / np.sqrt(graph.degrees_tilde.astype(np.float64))
    mapped = inv_root[:, None] * eigvecs
    mapped /= np.linalg.norm(mapped, axis=0, keepdims=True)

    per_pair = np.linalg.norm(propagate(row, mapped) - mapped * eigvals[None, :], axis=0)
    worst = int(np.argmax(per_pair))
    if per_pair[worst] > tol:
        raise VerificationError(
            f"eigenpair correspondence failed for eigenvalue {eigvals[worst]:.6f} "
            f"(residual {per_pair[worst]:.3e})"
        )
    return float(per_pair[worst])


def spectral_report(
    graph: Graph,
    kind: OperatorKind | str,
    tol: float = 1e-6,
    max_k: int = 5000,
) -> SpectralReport:
    """Run every check for one operator kind on a connected graph."""
    kind = OperatorKind(kind)
    identities = verify_unit_eigenpairs(graph)
    lambda2 = identities.pop("lambda2_abs")
    op = normalize(graph, kind)
    result = power_converge(op, limit_for(graph, kind), tol=tol, max_k=max_k)
    return SpectralReport(
        kind=kind.value,
        eigenvalue_one_residuals=identities,
        lambda2_abs=lambda2,
        k_converge=result.k_converge,
        tol=tol,
    )
