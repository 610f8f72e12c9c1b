"""End-to-end pipeline: correlation targets -> convexity matrix -> samples.

A :class:`SamplingPlan` is compiled once per job:

1. every pair's correlation extremes (rho_minus, rho_plus) are computed and
   memoized;
2. each target rho_ij is converted to its convexity weight
   lambda_ij = (rho_ij - rho-) / (rho+ - rho-), the position of the target
   inside its achievable interval;
3. a fair-coin Bernoulli recipe realizing (lambda_ij) as a concurrence
   matrix is selected: closed-form pmfs for n in {2, 3, 4}, an exact
   LP witness pmf for 5 <= n <= 12.

Drawing one vector then costs one uniform U, one recipe draw B, and n
quantile evaluations:

    X_i = F_i^{-1}(U B_i + (1 - U)(1 - B_i)),

i.e. coordinate i uses U when B_i = 1 and the antithetic 1 - U otherwise.
Each X_i is an even mixture of F_i^{-1}(U) and F_i^{-1}(1 - U), so marginals
are preserved exactly, and Corr(X_i, X_j) = lambda_ij rho+ + (1-lambda_ij) rho-.

One U is shared by the whole vector; only the agreement pattern of B decides
which coordinates ride it forwards or backwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bernoulli_joint as bj
from .bernoulli_joint import (
    AlphaInterval,
    ConcurrenceMatrix,
    JointPMF,
    _check_symmetric_matrix,
)
from .bounds import CorrelationExtremes, corr_extremes
from .errors import (
    CapacityError,
    DomainError,
    InfeasibleError,
    UnachievableCorrelationError,
)
from .marginals import MarginalSpec, quantile
from .oracle import lp_feasible

#: slack when checking a target correlation against its extremes
RHO_SLACK = 1e-9

# For fair-coin marginals the probability that two coordinates agree equals
# the convexity weight of their correlation, so the two matrix types coincide.
ConvexityMatrix = ConcurrenceMatrix


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric unit-diagonal matrix of target correlations in [-1, 1]."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        checked = _check_symmetric_matrix(self.entries, -1.0, 1.0, "correlation matrix")
        object.__setattr__(self, "entries", checked)

    @classmethod
    def from_lower_triangle(cls, values, n: int) -> "CorrelationMatrix":
        """Build from the strict lower triangle, row-major ([r21, r31, r32, ...])."""
        vals = [float(v) for v in values]
        if len(vals) != n * (n - 1) // 2:
            raise DomainError(
                f"need {n * (n - 1) // 2} lower-triangle entries for n={n}, got {len(vals)}"
            )
        m = np.eye(n)
        k = 0
        for i in range(1, n):
            for j in range(i):
                m[i, j] = m[j, i] = vals[k]
                k += 1
        return cls(m)

    @classmethod
    def filled(cls, n: int, value: float) -> "CorrelationMatrix":
        m = np.full((n, n), float(value))
        np.fill_diagonal(m, 1.0)
        return cls(m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def entry(self, i: int, j: int) -> float:
        return float(self.entries[i, j])


@dataclass(frozen=True)
class BernoulliRecipe:
    """Compiled fair-coin vector source: a pmf over {0,1}^n plus its cdf."""

    kind: str  # "bivariate" | "trivariate" | "quadrivariate" | "oracle_pmf"
    pmf: JointPMF
    alpha: float | None
    alpha_interval: AlphaInterval | None
    cdf: np.ndarray

    @classmethod
    def from_pmf(cls, kind: str, pmf: JointPMF,
                 alpha: float | None = None,
                 alpha_interval: AlphaInterval | None = None) -> "BernoulliRecipe":
        cdf = np.cumsum(pmf.probs)
        cdf[-1] = 1.0
        cdf.flags.writeable = False
        return cls(kind, pmf, alpha, alpha_interval, cdf)


@dataclass(frozen=True)
class SamplingPlan:
    """Everything needed to draw vectors: marginals, extremes, lambdas, recipe."""

    marginals: tuple[MarginalSpec, ...]
    target_corr: CorrelationMatrix
    extremes: tuple[tuple[CorrelationExtremes | None, ...], ...]
    lam: ConvexityMatrix
    recipe: BernoulliRecipe | None
    feasible: bool
    diagnostics: str

    @property
    def n(self) -> int:
        return len(self.marginals)

    def pair_extremes(self, i: int, j: int) -> CorrelationExtremes:
        ext = self.extremes[min(i, j)][max(i, j)]
        assert ext is not None
        return ext


@dataclass(frozen=True)
class SampleBatch:
    """A reproducible block of samples: values plus the stream that made them."""

    count: int
    n: int
    values: np.ndarray
    seed: int
    stream_id: int


def convexity_from_correlation(rho: float, ext: CorrelationExtremes) -> float:
    """Position of a target correlation inside its achievable interval.

    Returns lambda in [0, 1] with lambda*rho_plus + (1-lambda)*rho_minus =
    rho.  Raises :class:`UnachievableCorrelationError` when rho lies outside
    [rho_minus, rho_plus] (with 1e-9 slack).  A degenerate interval accepts
    only the common value and maps it to lambda = 1/2.
    """
    rho = float(rho)
    if ext.degenerate:
        if abs(rho - ext.rho_plus) > RHO_SLACK:
            raise UnachievableCorrelationError(
                f"extremes are degenerate at {ext.rho_plus:.9f}; target {rho:.9f} differs",
                rho, ext.rho_minus, ext.rho_plus,
            )
        return 0.5
    if not ext.contains(rho, RHO_SLACK):
        raise UnachievableCorrelationError(
            f"target correlation {rho:.9f} is outside the achievable interval "
            f"[{ext.rho_minus:.9f}, {ext.rho_plus:.9f}]",
            rho, ext.rho_minus, ext.rho_plus,
        )
    lam = (rho - ext.rho_minus) / (ext.rho_plus - ext.rho_minus)
    return min(1.0, max(0.0, lam))


def pairwise_extremes(
    marginals,
) -> tuple[tuple[CorrelationExtremes | None, ...], ...]:
    """Upper-triangular table of correlation extremes, memoized per pair."""
    ms = tuple(marginals)
    n = len(ms)
    cache: dict[tuple, CorrelationExtremes] = {}
    table: list[list[CorrelationExtremes | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            key = tuple(sorted((_marginal_key(ms[i]), _marginal_key(ms[j]))))
            if key not in cache:
                cache[key] = corr_extremes(ms[i], ms[j])
            table[i][j] = cache[key]
    return tuple(tuple(row) for row in table)


def _marginal_key(m: MarginalSpec):
    return (m.family, m.params, m.values or (), m.weights or ())


def build_plan(
    marginals,
    target_corr: CorrelationMatrix,
    alpha: float | None = None,
) -> SamplingPlan:
    """Compile a plan for the given marginals and target correlation matrix.

    Raises :class:`UnachievableCorrelationError` if any pairwise target falls
    outside its extremes.  A concurrence-infeasible lambda matrix does not
    raise: the returned plan has ``feasible=False`` and ``diagnostics``
    naming the violated inequality.
    """
    ms = tuple(marginals)
    _check_dimension(len(ms), target_corr.n)
    ext = pairwise_extremes(ms)
    lam = np.eye(len(ms))
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            lam[i, j] = lam[j, i] = convexity_from_correlation(
                target_corr.entry(i, j), ext[i][j]
            )
    return _finish_plan(ms, target_corr, ext, ConvexityMatrix(lam), alpha)


def build_plan_from_concurrence(
    marginals,
    concurrence: ConcurrenceMatrix,
    alpha: float | None = None,
) -> SamplingPlan:
    """Compile a plan from a convexity/concurrence matrix given directly.

    The implied target correlations lambda*rho+ + (1-lambda)*rho- are filled
    in for reporting and verification.
    """
    ms = tuple(marginals)
    _check_dimension(len(ms), concurrence.n)
    ext = pairwise_extremes(ms)
    corr = np.eye(len(ms))
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            lam = concurrence.entry(i, j)
            e = ext[i][j]
            corr[i, j] = corr[j, i] = lam * e.rho_plus + (1.0 - lam) * e.rho_minus
    return _finish_plan(ms, CorrelationMatrix(corr), ext, concurrence, alpha)


def _check_dimension(n_marginals: int, n_matrix: int) -> None:
    if n_marginals != n_matrix:
        raise DomainError(
            f"{n_marginals} marginals but a {n_matrix}x{n_matrix} target matrix"
        )
    if n_marginals < 2:
        raise DomainError("need at least 2 marginals")
    if n_marginals > 12:
        raise CapacityError(
            "n > 12 is not supported: closed-form recipes cover n <= 4 and the "
            "exact feasibility oracle scales to 4096 atoms (n = 12); split the "
            "problem or reduce the dimension"
        )


def _finish_plan(ms, target, ext, lam: ConvexityMatrix, alpha: float | None) -> SamplingPlan:
    n = len(ms)
    e = lam.entries
    recipe = None
    feasible = True
    diagnostics = "feasible"

    if n == 2:
        recipe = BernoulliRecipe.from_pmf("bivariate", bj.bivariate_pmf(e[0, 1]))
    elif n == 3:
        s = e[0, 1] + e[0, 2] + e[1, 2]
        m = min(e[0, 1], e[0, 2], e[1, 2])
        if not bj.trivariate_feasible(e[0, 1], e[0, 2], e[1, 2]):
            feasible = False
            if s < 1.0:
                diagnostics = (
                    f"infeasible concurrence matrix: lambda12 + lambda13 + lambda23 "
                    f"= {s:.6f} < 1"
                )
            else:
                diagnostics = (
                    f"infeasible concurrence matrix: lambda12 + lambda13 + lambda23 "
                    f"= {s:.6f} > 1 + 2*min(lambda) = {1.0 + 2.0 * m:.6f}"
                )
        else:
            interval = bj.trivariate_alpha_interval(e[0, 1], e[0, 2], e[1, 2])
            a = interval.midpoint if alpha is None else _checked_alpha(alpha, interval)
            pmf = bj.trivariate_pmf(e[0, 1], e[0, 2], e[1, 2], a)
            recipe = BernoulliRecipe.from_pmf("trivariate", pmf, a, interval)
    elif n == 4:
        interval = bj.quadrivariate_alpha_interval(lam)
        if not interval.feasible:
            feasible = False
            diagnostics = (
                f"infeasible concurrence matrix: alpha lower bound {interval.lo:.6f} "
                f"(from 4-cycle sums) exceeds upper bound {interval.hi:.6f} "
                f"(from the minimum triangle sum)"
            )
        else:
            a = interval.midpoint if alpha is None else _checked_alpha(alpha, interval)
            pmf = bj.quadrivariate_lifted_pmf(lam, a)
            recipe = BernoulliRecipe.from_pmf("quadrivariate", pmf, a, interval)
    else:
        bad = bj.violated_principal_submatrix(lam)
        if bad is not None:
            feasible = False
            coords = ", ".join(str(i + 1) for i in bad)
            diagnostics = (
                f"infeasible concurrence matrix: principal submatrix on coordinates "
                f"({coords}) fails its closed-form existence test"
            )
        else:
            witness = lp_feasible([0.5] * n, lam)
            if witness.feasible:
                recipe = BernoulliRecipe.from_pmf("oracle_pmf", witness.pmf)
            else:
                feasible = False
                diagnostics = f"infeasible concurrence matrix: {witness.certificate}"

    return SamplingPlan(
        marginals=ms,
        target_corr=target,
        extremes=ext,
        lam=lam,
        recipe=recipe,
        feasible=feasible,
        diagnostics=diagnostics,
    )


def _checked_alpha(alpha: float, interval: AlphaInterval) -> float:
    a = float(alpha)
    if not interval.contains(a):
        raise InfeasibleError(
            f"alpha={a} is outside the feasible interval "
            f"[{interval.lo:.9f}, {interval.hi:.9f}]"
        )
    return a


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def sample_vector(plan: SamplingPlan, rng: np.random.Generator) -> np.ndarray:
    """Draw one vector from a feasible plan.

    Draw order is fixed (one open-interval uniform U, then the recipe draw),
    so a given generator state always yields the same vector.
    """
    _require_feasible(plan)
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    atom = int(np.searchsorted(plan.recipe.cdf, rng.random(), side="right"))
    out = np.empty(plan.n)
    for i, m in enumerate(plan.marginals):
        bit = (atom >> (plan.n - 1 - i)) & 1
        out[i] = quantile(m, u if bit else 1.0 - u)
    return out


def sample_batch(plan: SamplingPlan, count: int, seed: int, stream_id: int = 0) -> SampleBatch:
    """Draw ``count`` vectors reproducibly.

    The generator is PCG64 keyed by hashing (seed, stream_id) through
    numpy's SeedSequence, so equal keys reproduce the batch bit-exactly and
    distinct stream ids give independent streams safe to generate in
    parallel.
    """
    _require_feasible(plan)
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    seed = int(seed)
    stream_id = int(stream_id)
    if seed < 0 or stream_id < 0:
        raise DomainError("seed and stream_id must be nonnegative integers")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=[seed, stream_id]))
    values = _batch_values(plan, int(count), rng)
    values.flags.writeable = False
    return SampleBatch(int(count), plan.n, values, seed, stream_id)


def _batch_values(plan: SamplingPlan, count: int, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(count)
    zero = u == 0.0
    while zero.any():
        u[zero] = rng.random(int(zero.sum()))
        zero = u == 0.0
    atoms = np.searchsorted(plan.recipe.cdf, rng.random(count), side="right")
    n = plan.n
    out = np.empty((count, n))
    for i, m in enumerate(plan.marginals):
        bits = (atoms >> (n - 1 - i)) & 1
        w = np.where(bits == 1, u, 1.0 - u)
        out[:, i] = quantile(m, w)
    return out


def _require_feasible(plan: SamplingPlan) -> None:
    if not plan.feasible or plan.recipe is None:
        raise InfeasibleError(f"plan is not feasible: {plan.diagnostics}")
