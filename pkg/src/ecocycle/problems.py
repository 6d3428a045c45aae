"""Problem abstraction: bounded objectives, constraints, and FE accounting.

Every optimizer in this package consumes the same `Problem` contract: a box,
an objective, and an optional ordered list of inequality constraints with the
convention g_i(x) <= 0 meaning satisfied. Evaluation counting is explicit so
budgets are enforced at the only place function values can be produced.

Objectives and constraints must accept arrays of shape (..., D) and return
values of shape (...), i.e. they are vectorized over leading axes. All
functions shipped with this package follow that contract; `batchable` wraps a
scalar-only callable when needed.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional, Sequence

import numpy as np

# Feasibility tolerance: engineering optima sit on active constraints, so an
# exact zero violation is numerically unreachable.
TOL_FEAS = 1e-8


class BudgetExhausted(Exception):
    """Raised when a function evaluation is requested with no budget left."""


class DimensionMismatch(ValueError):
    """Raised when a point's length does not match the problem dimension."""


def as_point(x, dim: int) -> np.ndarray:
    """Validate and convert a single point to a float array of length dim."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != dim:
        raise DimensionMismatch(
            f"expected a point of length {dim}, got shape {arr.shape}"
        )
    return arr


@dataclasses.dataclass(frozen=True)
class Bounds:
    """Box constraints: lower[j] < upper[j] for every dimension j."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size < 1:
            raise ValueError("lower and upper must be 1-d arrays of equal length >= 1")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> np.ndarray:
        """Componentwise-inside test, reduced over the last axis."""
        x = np.asarray(x, dtype=float)
        return np.all((x >= self.lower) & (x <= self.upper), axis=-1)

    @classmethod
    def symmetric(cls, half_width: float, dim: int) -> "Bounds":
        return cls(np.full(dim, -half_width), np.full(dim, half_width))

    @classmethod
    def uniform(cls, low: float, high: float, dim: int) -> "Bounds":
        return cls(np.full(dim, low), np.full(dim, high))


@dataclasses.dataclass(frozen=True)
class Problem:
    """A bounded minimization problem with optional inequality constraints.

    objective maps (..., D) arrays to (...) values. constraints is an ordered
    tuple of g_i with the same vectorization contract; g_i(x) <= 0 means
    satisfied. noise, when present, draws one additive objective term per
    evaluation from the caller's RNG stream (classic F7 is the only shipped
    user); such problems report noisy = True.
    """

    name: str
    dim: int
    bounds: Bounds
    objective: Callable[[np.ndarray], np.ndarray]
    constraints: tuple = ()
    known_optimum: Optional[float] = None
    noise: Optional[Callable[[np.random.Generator, int], np.ndarray]] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.bounds.dim != self.dim:
            raise ValueError("bounds dimension does not match problem dim")
        object.__setattr__(self, "constraints", tuple(self.constraints))

    @property
    def noisy(self) -> bool:
        return self.noise is not None


@dataclasses.dataclass(frozen=True)
class Evaluation:
    """Objective value plus aggregate constraint violation at one point."""

    value: float
    violation: float = 0.0

    def __post_init__(self):
        if self.violation < 0:
            raise ValueError("violation must be nonnegative")

    @property
    def feasible(self) -> bool:
        return self.violation <= TOL_FEAS


@dataclasses.dataclass
class EvalBudget:
    """Function evaluation counter with a hard ceiling."""

    max_fes: int
    used: int = 0

    def __post_init__(self):
        if self.max_fes < 1:
            raise ValueError("max_fes must be a positive integer")

    @property
    def remaining(self) -> int:
        return self.max_fes - self.used

    def charge_one(self) -> None:
        if self.used >= self.max_fes:
            raise BudgetExhausted(f"budget of {self.max_fes} evaluations exhausted")
        self.used += 1

    def charge_up_to(self, n: int) -> int:
        """Debit up to n evaluations; returns how many were granted (>= 1)."""
        if self.remaining <= 0:
            raise BudgetExhausted(f"budget of {self.max_fes} evaluations exhausted")
        granted = min(n, self.remaining)
        self.used += granted
        return granted


def violation_of(problem: Problem, x: np.ndarray) -> np.ndarray:
    """Aggregate violation sum(max(0, g_i(x))) for (..., D) input.

    Non-finite constraint values (division blowups at box corners) are
    treated as infinitely violated rather than propagating NaN into
    comparisons.
    """
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape[:-1], dtype=float)
    for g in problem.constraints:
        gv = np.asarray(g(x), dtype=float)
        gv = np.where(np.isnan(gv), np.inf, gv)
        total = total + np.maximum(gv, 0.0)
    return total


def evaluate(
    problem: Problem,
    x,
    budget: EvalBudget,
    rng: Optional[np.random.Generator] = None,
) -> Evaluation:
    """Evaluate one point, debiting exactly one FE regardless of constraints."""
    point = as_point(x, problem.dim)
    budget.charge_one()
    value = float(problem.objective(point))
    if problem.noise is not None:
        if rng is None:
            raise ValueError(f"{problem.name} is noisy; an RNG stream is required")
        value += float(problem.noise(rng, 1)[0])
    viol = float(violation_of(problem, point)) if problem.constraints else 0.0
    return Evaluation(value=value, violation=viol)


def evaluate_batch(
    problem: Problem,
    xs: np.ndarray,
    budget: EvalBudget,
    rng: Optional[np.random.Generator] = None,
) -> tuple[int, np.ndarray, np.ndarray]:
    """Evaluate up to budget.remaining rows of xs, one FE per row.

    Returns (granted, values, violations) where granted may be smaller than
    len(xs) when the budget truncates the batch. Raises BudgetExhausted when
    nothing remains at all.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 2 or xs.shape[1] != problem.dim:
        raise DimensionMismatch(
            f"expected (n, {problem.dim}) batch, got shape {xs.shape}"
        )
    granted = budget.charge_up_to(xs.shape[0])
    rows = xs[:granted]
    values = np.asarray(problem.objective(rows), dtype=float)
    if problem.noise is not None:
        if rng is None:
            raise ValueError(f"{problem.name} is noisy; an RNG stream is required")
        values = values + problem.noise(rng, granted)
    if problem.constraints:
        viols = violation_of(problem, rows)
    else:
        viols = np.zeros(granted, dtype=float)
    return granted, values, viols


def compare(a: Evaluation, b: Evaluation) -> int:
    """Feasibility-first ordering: -1 if a is better, +1 if b is, 0 on a tie.

    A feasible point beats an infeasible one; two feasible points compare by
    objective value; two infeasible points compare by total violation. Exact
    equality on the deciding key is a tie.
    """
    if a.feasible != b.feasible:
        return -1 if a.feasible else 1
    key_a, key_b = (a.value, b.value) if a.feasible else (a.violation, b.violation)
    if key_a < key_b:
        return -1
    if key_a > key_b:
        return 1
    return 0


def compare_batch(
    values_a: np.ndarray,
    viols_a: np.ndarray,
    values_b: np.ndarray,
    viols_b: np.ndarray,
) -> np.ndarray:
    """Vectorized compare over aligned arrays; returns -1/0/+1 per element."""
    feas_a = viols_a <= TOL_FEAS
    feas_b = viols_b <= TOL_FEAS
    key_a = np.where(feas_a, values_a, viols_a)
    key_b = np.where(feas_b, values_b, viols_b)
    # Explicit comparisons rather than sign(a - b): inf - inf would poison
    # the result with NaN when both sides are infinitely violated.
    out = np.where(key_a < key_b, -1, np.where(key_a > key_b, 1, 0))
    out = np.where(feas_a & ~feas_b, -1, out)
    out = np.where(~feas_a & feas_b, 1, out)
    return out


def argsort_by_compare(values: np.ndarray, viols: np.ndarray) -> np.ndarray:
    """Stable ascending order under compare (best first)."""
    feas_class = np.where(viols <= TOL_FEAS, 0.0, 1.0)
    metric = np.where(viols <= TOL_FEAS, values, viols)
    return np.lexsort((metric, feas_class))


def sample_uniform(bounds: Bounds, n: int, rng: np.random.Generator) -> np.ndarray:
    """n independent uniform points in the box, one fresh draw per coordinate."""
    return bounds.lower + rng.random((n, bounds.dim)) * bounds.span


def clamp_or_resample(x, bounds: Bounds, rng: np.random.Generator) -> np.ndarray:
    """Return x unchanged when inside the box, else a fresh uniform sample.

    The repair is all-or-nothing: a single out-of-range coordinate triggers a
    full re-initialization of the whole vector (per-dimension fresh uniforms).
    """
    point = as_point(x, bounds.dim)
    if bool(bounds.contains(point)):
        return point
    return bounds.lower + rng.random(bounds.dim) * bounds.span


def resample_outside(xs: np.ndarray, bounds: Bounds, rng: np.random.Generator) -> np.ndarray:
    """Batch form of clamp_or_resample over the rows of xs."""
    xs = np.asarray(xs, dtype=float)
    inside = bounds.contains(xs)
    if inside.all():
        return xs
    out = xs.copy()
    k = int(np.count_nonzero(~inside))
    out[~inside] = bounds.lower + rng.random((k, bounds.dim)) * bounds.span
    return out


def batchable(f: Callable[[np.ndarray], float]) -> Callable[[np.ndarray], np.ndarray]:
    """Adapt a scalar-only objective to the (..., D) -> (...) contract."""

    def wrapped(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            return np.float64(f(x))
        return np.apply_along_axis(f, -1, x)

    return wrapped
