"""Independent Volterra-equation oracle for the kinetic solutions.

The kinetic equation N = F - c^nu I^nu N is a linear second-kind Volterra
equation, so it can be solved by causal time stepping without ever touching
Mittag-Leffler code: discretize I^nu with the same product-trapezoid weights
used everywhere else and solve one scalar linear equation per node.  The
closed-form curves are validated against this march; independence holds
because the march never evaluates the series solution, only power functions
and the quadrature.

Singularity handling: for mu < 1 the forcing (t-a)^(mu-1) cannot be
represented by the piecewise-linear interpolant near t = a (the raw march
leaves O(1) errors at the first nodes, far above the verification
tolerances).  The march therefore runs on the peeled remainder G = N - P,
where P collects the first few analytic terms of the solution's expansion
(see kinetics.peeled_source); the peel is algebraically exact, and G is
regular enough for the quadrature to converge.  The same peel is applied
for mu >= 1, where it just sharpens the start-up accuracy.

Picard iteration on the identical discrete system is available both as a
structural cross-check (the successive-substitution construction) and to
confirm that the implicit march solves its own fixed-point equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grids import DomainError, GridMismatchError, UniformGrid
from .kinetics import KineticProblem, SolutionCurve, auto_peel_depth, peeled_source
from .riemann_liouville import QuadratureWeights, build_weights

__all__ = [
    "SCHEMES",
    "OracleConfig",
    "StepSingularError",
    "PicardDivergenceError",
    "solve_volterra",
    "picard_iterate",
]

SCHEMES = ("implicit_product_trapezoid", "picard")

_DIVERGENCE_FACTOR = 1e6


class StepSingularError(ArithmeticError):
    """The per-node linear solve degenerated (cannot occur for valid input)."""


class PicardDivergenceError(ArithmeticError):
    """Iterate norms exploded; indicates a configuration bug."""


@dataclass(frozen=True)
class OracleConfig:
    """Grid plus scheme selection for the oracle solver."""

    grid: UniformGrid
    scheme: str = "implicit_product_trapezoid"
    picard_iterations: int = 50
    peel_depth: int | None = None  # None: choose from (nu, mu)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected {SCHEMES}")
        if self.scheme == "picard" and self.picard_iterations < 1:
            raise ValueError("picard_iterations must be >= 1")
        if self.peel_depth is not None and self.peel_depth < 0:
            raise ValueError("peel_depth must be >= 0")


def _prepare(problem: KineticProblem, cfg: OracleConfig, weights):
    if cfg.grid.a != problem.a:
        raise GridMismatchError(
            f"oracle grid starts at {cfg.grid.a!r} but the problem at {problem.a!r}"
        )
    if weights is None:
        weights = build_weights(cfg.grid, problem.nu)
    elif weights.grid != cfg.grid or weights.nu != problem.nu:
        raise GridMismatchError("precomputed weights do not match grid/problem")
    depth = cfg.peel_depth if cfg.peel_depth is not None else auto_peel_depth(problem)
    if depth * problem.nu + problem.mu_eff - 1.0 < 0.0:
        raise DomainError(
            "peel depth leaves a divergent forcing exponent; increase peel_depth"
        )
    P, G_F = peeled_source(problem, cfg.grid, depth)
    return weights, P, G_F


def _assemble(problem: KineticProblem, cfg: OracleConfig, P, G):
    values = P + G
    singular = problem.mu_eff < 1.0
    if singular:
        values[0] = math.nan
    return SolutionCurve(
        problem=problem,
        grid=cfg.grid,
        values=values,
        method_tag="oracle",
        singular_start=singular,
    )


def solve_volterra(
    problem: KineticProblem,
    cfg: OracleConfig,
    weights: QuadratureWeights | None = None,
) -> SolutionCurve:
    """Solve the kinetic integral equation by implicit time stepping.

    Marches j = 1..n solving (1 + c^nu w[j,j]) G_j = G_F_j - c^nu sum_{k<j}
    w[j,k] G_k, one scalar solve per node (the lower-triangular Volterra
    structure needs no global matrix).  For scheme="picard" this dispatches
    to picard_iterate.
    """
    if cfg.scheme == "picard":
        return picard_iterate(problem, cfg, weights=weights)
    weights, P, G_F = _prepare(problem, cfg, weights)
    w = weights.w
    cn = problem.rate_factor
    n = cfg.grid.n
    G = np.zeros(n + 1)
    G[0] = G_F[0]
    for j in range(1, n + 1):
        denom = 1.0 + cn * w[j, j]
        if not denom > 0.0 or not math.isfinite(denom):
            raise StepSingularError(
                f"degenerate step at node {j}: 1 + c^nu w[j,j] = {denom!r}"
            )
        G[j] = (G_F[j] - cn * float(np.dot(w[j, :j], G[:j]))) / denom
    return _assemble(problem, cfg, P, G)


def picard_iterate(
    problem: KineticProblem,
    cfg: OracleConfig,
    weights: QuadratureWeights | None = None,
) -> SolutionCurve:
    """Successive substitution on the same discrete system.

    G^(0) = G_F, G^(i+1) = G_F - c^nu W G^(i).  On a fixed grid the discrete
    Volterra operator is strictly lower triangular plus a small diagonal, so
    the iterates converge to the implicit-march solution; the alarm fires
    only when the iterate norm grows by more than a factor of 1e6, which
    signals a configuration bug rather than mathematical divergence.
    """
    if cfg.scheme != "picard":
        raise ValueError("picard_iterate requires scheme='picard'")
    weights, P, G_F = _prepare(problem, cfg, weights)
    W = weights.w
    cn = problem.rate_factor
    G = G_F.copy()
    base_norm = max(1.0, float(np.max(np.abs(G_F))))
    for _ in range(cfg.picard_iterations):
        G = G_F - cn * (W @ G)
        G[0] = G_F[0]
        norm = float(np.max(np.abs(G)))
        if norm > _DIVERGENCE_FACTOR * base_norm:
            raise PicardDivergenceError(
                f"iterate norm {norm:.3e} exceeds {_DIVERGENCE_FACTOR:.0e} x "
                f"the forcing norm {base_norm:.3e}"
            )
    return _assemble(problem, cfg, P, G)
