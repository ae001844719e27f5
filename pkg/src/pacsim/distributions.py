"""Parameter laws of the model and closed-form limit quantities.

Two laws parametrise everything: the candidate-count law R (finite support on
{1, 2, ...}) and the fitness law F on [0, 1].  From R we get the derived
constants, the offspring generating function of the dual tree, extinction
probabilities, the two-colour urn fixed point and the exact leaf-count
distribution of the dual tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

_PROB_TOL = 1e-12
FIXED_POINT_TOL = 1e-12


@dataclass(frozen=True)
class RDistribution:
    """Finite-support law of the candidate count R >= 1."""

    values: tuple[int, ...]
    probs: tuple[float, ...]
    kind: str = "pmf"

    def __post_init__(self):
        if len(self.values) != len(self.probs) or not self.values:
            raise ValueError("pmf must be a nonempty list of (value, prob) pairs")
        if any(int(v) != v or v < 1 for v in self.values):
            raise ValueError("R takes values in {1, 2, ...}")
        if len(set(self.values)) != len(self.values):
            raise ValueError("duplicate values in pmf")
        if any(p <= 0 or p > 1 for p in self.probs):
            raise ValueError("probabilities must lie in (0, 1]")
        if abs(sum(self.probs) - 1.0) > _PROB_TOL:
            raise ValueError(f"probabilities sum to {sum(self.probs)}, not 1")

    @classmethod
    def deterministic(cls, r: int) -> "RDistribution":
        return cls((int(r),), (1.0,), kind="deterministic")

    @classmethod
    def two_point(cls, v1: int, p1: float, v2: int) -> "RDistribution":
        return cls((int(v1), int(v2)), (p1, 1.0 - p1), kind="two_point")

    @classmethod
    def from_pmf(cls, pmf: Sequence[tuple[int, float]]) -> "RDistribution":
        return cls(tuple(int(v) for v, _ in pmf), tuple(p for _, p in pmf))

    @property
    def mean(self) -> float:
        return float(sum(v * p for v, p in zip(self.values, self.probs)))

    @property
    def second_moment(self) -> float:
        return float(sum(v * v * p for v, p in zip(self.values, self.probs)))

    @property
    def max_value(self) -> int:
        return max(self.values)

    def pgf(self, x: float) -> float:
        """M_R(x) = sum_r P[R=r] x^r."""
        return float(sum(p * x**v for v, p in zip(self.values, self.probs)))


@dataclass(frozen=True)
class FitnessDistribution:
    """Fitness law: uniform on [0,1] (graph mode) or two-point on {0,1}."""

    kind: str = "uniform01"
    p1: float = 0.5  # P[F = 1], two_point only

    def __post_init__(self):
        if self.kind not in ("uniform01", "two_point"):
            raise ValueError(f"unknown fitness kind {self.kind!r}")
        if self.kind == "two_point" and not 0.0 < self.p1 < 1.0:
            raise ValueError("two_point requires P[F=1] in (0, 1)")

    @property
    def is_continuous(self) -> bool:
        return self.kind == "uniform01"

    def cdf(self, a: float) -> float:
        if self.kind == "uniform01":
            return min(max(a, 0.0), 1.0)
        # two_point: mass 1-p1 at 0, p1 at 1
        if a < 0.0:
            return 0.0
        return 1.0 if a >= 1.0 else 1.0 - self.p1


@dataclass(frozen=True)
class ModelConstants:
    """Constants derived from R (and the affine activity alpha).

    beta and xi are only meaningful in the supercritical regime zeta > 1;
    outside it xi is carried as None.
    """

    zeta: float
    beta: float
    theta: float
    xi: Optional[float]
    alpha: float = 0.0


def model_constants(R: RDistribution, alpha: float = 0.0) -> ModelConstants:
    zeta = R.mean / 2.0
    beta = (R.mean - 2.0) / R.mean
    theta = (R.second_moment + 2.0) / 2.0
    xi = R.second_moment + 2.0 * zeta * theta / (zeta - 1.0) if zeta > 1.0 else None
    return ModelConstants(zeta=zeta, beta=beta, theta=theta, xi=xi, alpha=alpha)


def offspring_pgf(R: RDistribution, alpha: float, s: float) -> float:
    """Generating function of the dual-tree offspring law.

    f(s) = (1+alpha)/(2+alpha) + 1/(2+alpha) * sum_r P[R=r] s^r
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s={s} outside [0, 1]")
    if alpha < 0.0:
        raise ValueError("alpha must be >= 0")
    return (1.0 + alpha) / (2.0 + alpha) + R.pgf(s) / (2.0 + alpha)


def _smallest_fixed_point(f, tol: float = FIXED_POINT_TOL) -> float:
    """Smallest root of s = f(s) on [0,1] for convex nondecreasing f.

    Monotone iteration from 0 approaches the smallest root q* from below;
    a bisection polish on [iterate, 1] pins it to absolute tolerance.  The
    bisection invariant uses convexity: f(s) > s iff s < q* on [0, 1).
    """
    q = 0.0
    for _ in range(100_000):
        q_next = f(q)
        if q_next - q < tol:
            q = q_next
            break
        q = q_next
    lo, hi = q, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > mid:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def extinction_prob(R: RDistribution, alpha: float = 0.0, rooting: str = "cue_root") -> float:
    """Extinction probability of the dual tree.

    generic_root: the tree starts from one individual reproducing with the
    offspring law; returns the smallest fixed point q of its pgf.
    cue_root: the root has R children (each heading a generic tree);
    returns M_R(q).  Survival probability is 1 minus the returned value.
    """
    if R.mean <= 2.0 + alpha:
        # (sub)critical: q = 1 exactly; bisection cannot separate the
        # tangential fixed point from the identity in double precision
        q = 1.0
    else:
        q = _smallest_fixed_point(lambda s: offspring_pgf(R, alpha, s))
    if rooting == "generic_root":
        return q
    if rooting == "cue_root":
        return R.pgf(q)
    raise ValueError(f"unknown rooting {rooting!r}")


def two_color_fixed_point(R: RDistribution, lam: float, tol: float = FIXED_POINT_TOL) -> float:
    """Unique root in [0,1] of g(nu) = M_R((nu + lam)/2) - nu.

    lam is the probability that a fresh source ball has colour 0.  g(0) > 0
    and g(1) < 0, and g has at most one turning point, so plain bisection
    converges to the unique root.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda={lam} outside (0, 1)")

    def g(nu: float) -> float:
        return R.pgf((nu + lam) / 2.0) - nu

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


@dataclass
class LeafCountDistribution:
    """Truncated leaf-count pmf of the dual tree plus unaccounted mass.

    probs[i] = P[L = i+1] for i+1 <= Lmax.  `tail` is 1 - sum(probs): it
    bundles the truncation remainder with the genuinely infinite-tree mass.
    """

    probs: np.ndarray
    tail: float
    rooting: str = "cue_root"

    def items(self):
        return [(i + 1, float(p)) for i, p in enumerate(self.probs)]

    @property
    def total_finite_mass(self) -> float:
        return float(self.probs.sum())

    def pgf(self, x: float) -> float:
        """sum_l P[L=l] x^l over the truncated support."""
        powers = x ** np.arange(1, len(self.probs) + 1)
        return float(np.dot(self.probs, powers))


def leaf_count_dist(
    R: RDistribution,
    alpha: float = 0.0,
    rooting: str = "cue_root",
    Lmax: int = 2000,
    tol: float = 1e-12,
) -> LeafCountDistribution:
    """Exact (truncated) distribution of the dual tree's leaf count.

    Dynamic programme on the generic-root pmf a, iterating
        a <- p0 * e1 + sum_r p_r * conv_power(a, r)
    to a fixed point; cue_root finishes with the R-fold convolution mixture.
    The iteration is monotone from below, so successive total-variation
    change < tol certifies convergence of every retained entry.
    """
    if Lmax < 1:
        raise ValueError("Lmax must be >= 1")
    if rooting not in ("generic_root", "cue_root"):
        raise ValueError(f"unknown rooting {rooting!r}")
    p0 = (1.0 + alpha) / (2.0 + alpha)
    p_r = {v: p / (2.0 + alpha) for v, p in zip(R.values, R.probs)}

    def conv_powers(a: np.ndarray, rmax: int) -> dict[int, np.ndarray]:
        out = {1: a}
        for r in range(2, rmax + 1):
            out[r] = np.convolve(out[r - 1], a)[: Lmax + 1]
        return out

    a = np.zeros(Lmax + 1)  # index = leaf count, entry 0 unused
    for _ in range(100_000):
        powers = conv_powers(a, R.max_value)
        a_next = np.zeros(Lmax + 1)
        a_next[1] = p0
        for r, pr in p_r.items():
            a_next[: Lmax + 1] += pr * powers[r][: Lmax + 1]
        if np.abs(a_next - a).sum() < tol:
            a = a_next
            break
        a = a_next

    if rooting == "generic_root":
        probs = a[1:]
    else:
        powers = conv_powers(a, R.max_value)
        b = np.zeros(Lmax + 1)
        for r, pr in zip(R.values, R.probs):
            b[: Lmax + 1] += pr * powers[r][: Lmax + 1]
        probs = b[1:]
    return LeafCountDistribution(probs=probs, tail=float(1.0 - probs.sum()), rooting=rooting)
