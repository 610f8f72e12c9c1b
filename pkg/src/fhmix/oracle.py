"""Brute-force feasibility oracle over the 2^n-atom probability simplex.

``lp_feasible`` decides whether any joint law on {0,1}^n has the requested
marginal probabilities and concurrence matrix, by phase-1 simplex on the
equality system

    sum(pi) = 1,   sum_{atoms with bit i} pi = p_i,
    sum_{atoms with bit i == bit j} pi = lambda_ij,   pi >= 0.

Two arithmetic modes:

* exact   - fractions.Fraction tableau with Bland's rule; verdicts and the
            witness are exact.  Chosen automatically when every input is a
            rational with small denominator (or any non-float rational).
* float   - numpy tableau, Dantzig rule with a Bland fallback; the phase-1
            optimum is compared against 1e-9 and any witness is re-verified
            against the constraints at that tolerance.

The oracle is deliberately independent of the closed-form constructions it
is used to check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bernoulli_joint import ConcurrenceMatrix, JointPMF, atom_bits, _bit_table
from .errors import CapacityError, DomainError, InvalidMatrixError, NumericalError

MAX_DIMENSION = 12

#: residual tolerance for float verdicts and witness re-verification
FLOAT_TOL = 1e-9
_PIVOT_TOL = 1e-11
#: auto mode uses exact arithmetic when all denominators stay below this
_EXACT_DENOM_LIMIT = 10 ** 6


@dataclass(frozen=True)
class FeasibilityWitness:
    """Verdict of :func:`lp_feasible`, with a pmf or a violation description."""

    feasible: bool
    pmf: JointPMF | None
    certificate: str | None
    max_residual: float
    mode: str

    def __bool__(self) -> bool:
        return self.feasible


def lp_feasible(marginal_probs, conc: ConcurrenceMatrix, mode: str = "auto") -> FeasibilityWitness:
    """Decide existence of a joint law with the given marginals and concurrences.

    ``marginal_probs`` holds P(bit i = 1) for each coordinate; entries of
    ``conc`` are the pairwise agreement probabilities.  Dimensions above 12
    (4096 atoms) raise :class:`CapacityError`.
    """
    probs = list(marginal_probs)
    n = len(probs)
    if n != conc.n:
        raise InvalidMatrixError(
            f"{n} marginal probabilities for a {conc.n}x{conc.n} concurrence matrix"
        )
    if n < 1:
        raise DomainError("need at least one coordinate")
    if n > MAX_DIMENSION:
        raise CapacityError(
            f"n={n} exceeds the oracle bound {MAX_DIMENSION} (2^n atoms get too large)"
        )
    for i, p in enumerate(probs):
        if not 0 <= p <= 1:
            raise DomainError(f"marginal probability {i + 1} = {p!r} not in [0, 1]")

    rhs_values = [1] + probs + [conc.entry(i, j) for i in range(n) for j in range(i + 1, n)]
    if mode not in ("auto", "exact", "float"):
        raise DomainError(f"unknown mode {mode!r}")
    use_exact = mode == "exact" or (mode == "auto" and _all_small_rationals(rhs_values))

    A, names = _constraint_system(n)
    if use_exact:
        return _solve_exact(A, rhs_values, names, n)
    return _solve_float(A, rhs_values, names, n)


def pushforward(pmf: JointPMF, atom_map) -> JointPMF:
    """Exact image of ``pmf`` under a total map on atoms.

    ``atom_map`` takes a bit tuple and returns a bit tuple (all outputs must
    share one length, which fixes the result dimension).
    """
    images = [tuple(int(b) for b in atom_map(atom_bits(k, pmf.n))) for k in range(2 ** pmf.n)]
    m = len(images[0])
    if any(len(img) != m for img in images):
        raise DomainError("atom map must produce bit tuples of one common length")
    out = np.zeros(2 ** m)
    for k, img in enumerate(images):
        idx = 0
        for b in img:
            if b not in (0, 1):
                raise DomainError(f"atom map produced non-bit value {b!r}")
            idx = (idx << 1) | b
        out[idx] += pmf.probs[k]
    return JointPMF(m, out)


# ---------------------------------------------------------------------------
# constraint system
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _constraint_system(n: int) -> tuple[np.ndarray, tuple[str, ...]]:
    bits = _bit_table(n)
    rows = [np.ones(2 ** n)]
    names = ["total mass"]
    for i in range(n):
        rows.append((bits[:, i] == 1).astype(float))
        names.append(f"marginal {i + 1}")
    for i in range(n):
        for j in range(i + 1, n):
            rows.append((bits[:, i] == bits[:, j]).astype(float))
            names.append(f"concurrence ({i + 1},{j + 1})")
    A = np.array(rows)
    A.flags.writeable = False
    return A, tuple(names)


def _all_small_rationals(values) -> bool:
    for v in values:
        if isinstance(v, float) and Fraction(v).denominator > _EXACT_DENOM_LIMIT:
            return False
    return True


# ---------------------------------------------------------------------------
# float path
# ---------------------------------------------------------------------------

def _solve_float(A: np.ndarray, rhs_values, names, n: int) -> FeasibilityWitness:
    b = np.array([float(v) for v in rhs_values])
    value, x, y = _phase1_float(A, b)
    if value <= FLOAT_TOL:
        probs = np.clip(x, 0.0, None)
        probs /= probs.sum()
        pmf = JointPMF(n, probs)
        residual = float(np.abs(A @ pmf.probs - b).max())
        if residual > FLOAT_TOL:
            raise NumericalError(
                f"witness re-verification failed: residual {residual:.3g} > {FLOAT_TOL}"
            )
        return FeasibilityWitness(True, pmf, None, residual, "float")
    return FeasibilityWitness(False, None, _certificate(value, y, names), value, "float")


def _phase1_float(A: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Minimize total artificial slack; returns (optimum, atom vector, duals)."""
    m, N = A.shape
    T = np.zeros((m + 1, N + m + 1))
    T[:m, :N] = A
    T[:m, N:N + m] = np.eye(m)
    T[:m, -1] = b
    # reduced-cost row under the artificial basis (price vector all ones)
    T[m, :N] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(N, N + m))

    if not _simplex_iterate(T, basis, bland=False, max_iter=60 * (m + 2)):
        # rare stall/cycle: rebuild and rerun with Bland's rule (terminates)
        T[:m, :N] = A
        T[:m, N:N + m] = np.eye(m)
        T[:m, -1] = b
        T[m, :] = 0.0
        T[m, :N] = -A.sum(axis=0)
        T[m, -1] = -b.sum()
        basis = list(range(N, N + m))
        if not _simplex_iterate(T, basis, bland=True, max_iter=500 * (N + m)):
            raise NumericalError("phase-1 simplex failed to terminate")

    value = -T[m, -1]
    x = np.zeros(N)
    for row, col in enumerate(basis):
        if col < N:
            x[col] = T[row, -1]
    y = 1.0 - T[m, N:N + m]
    return value, x, y


def _simplex_iterate(T: np.ndarray, basis: list[int], bland: bool, max_iter: int) -> bool:
    m = T.shape[0] - 1
    for _ in range(max_iter):
        red = T[m, :-1]
        if bland:
            neg = np.nonzero(red < -_PIVOT_TOL)[0]
            if neg.size == 0:
                return True
            j = int(neg[0])
        else:
            j = int(red.argmin())
            if red[j] >= -_PIVOT_TOL:
                return True
        col = T[:m, j]
        pos = np.nonzero(col > _PIVOT_TOL)[0]
        if pos.size == 0:
            raise NumericalError("phase-1 simplex reports an unbounded column")
        ratios = T[pos, -1] / col[pos]
        best = ratios.min()
        ties = pos[ratios <= best + 1e-12 * (1.0 + abs(best))]
        r = int(min(ties, key=lambda k: basis[k]))
        _pivot(T, r, j)
        basis[r] = j
    return False


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    pr = T[r] / T[r, j]
    factor = T[:, j].copy()
    T -= np.outer(factor, pr)
    T[r] = pr


# ---------------------------------------------------------------------------
# exact path
# ---------------------------------------------------------------------------

def _solve_exact(A: np.ndarray, rhs_values, names, n: int) -> FeasibilityWitness:
    m, N = A.shape
    b = [_to_fraction(v) for v in rhs_values]
    zero, one = Fraction(0), Fraction(1)

    rows = []
    for i in range(m):
        row = [one if A[i, j] else zero for j in range(N)]
        row += [one if k == i else zero for k in range(m)]
        row.append(b[i])
        rows.append(row)
    obj = [-sum(rows[i][j] for i in range(m)) for j in range(N)]
    obj += [zero] * m
    obj.append(-sum(b))
    rows.append(obj)
    basis = list(range(N, N + m))

    for _ in range(2000 * (N + m)):
        red = rows[m]
        j = next((k for k in range(N + m) if red[k] < zero), None)
        if j is None:
            break
        pivots = [(rows[i][-1] / rows[i][j], basis[i], i)
                  for i in range(m) if rows[i][j] > zero]
        if not pivots:
            raise NumericalError("exact phase-1 simplex reports an unbounded column")
        _, _, r = min(pivots)
        prow = rows[r]
        piv = prow[j]
        prow = [v / piv for v in prow]
        rows[r] = prow
        for i in range(m + 1):
            if i != r and rows[i][j] != zero:
                f = rows[i][j]
                rows[i] = [v - f * w for v, w in zip(rows[i], prow)]
        basis[r] = j
    else:
        raise NumericalError("exact phase-1 simplex failed to terminate")

    value = -rows[m][-1]
    if value == zero:
        x = [zero] * N
        for row, col in enumerate(basis):
            if col < N:
                x[col] = rows[row][-1]
        pmf = JointPMF(n, np.array([float(v) for v in x]))
        return FeasibilityWitness(True, pmf, None, 0.0, "exact")
    y = [one - rows[m][N + i] for i in range(m)]
    yf = np.array([float(v) for v in y])
    return FeasibilityWitness(False, None, _certificate(float(value), yf, names),
                              float(value), "exact")


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(float(v))


def _certificate(violation: float, y: np.ndarray, names) -> str:
    """Human-readable Farkas-style description of an infeasible system."""
    weights = sorted(
        ((abs(w), name, w) for w, name in zip(y, names) if abs(w) > 1e-9),
        reverse=True,
    )
    combo = ", ".join(f"{w:+.4g} x [{name}]" for _, name, w in weights[:6])
    return (
        f"no distribution satisfies the constraints; minimum total violation "
        f"{violation:.6g}. Certificate combination: {combo}"
    )
