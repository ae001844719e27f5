"""Closed-form reference curves and deterministic inequality suites.

Everything here is double precision and pure; comparisons that sit exactly on
an inequality boundary in real arithmetic carry a small relative roundoff
guard (documented per function).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

_REL_GUARD = 1e-9  # roundoff slack for boundary-tight product brackets


def ode_y(t: float, A: float, zeta: float) -> float:
    """Logistic flow y' = 2*zeta*y*(1-y) started at y(0) = A in [0, 1]."""
    if not 0.0 <= A <= 1.0:
        raise ValueError("A must lie in [0, 1]")
    y = A / (A - (A - 1.0) * np.exp(-2.0 * zeta * t))
    return float(min(max(y, 0.0), 1.0))


def t_of_s(s: float, c: float, C: float) -> float:
    """Window-time reparametrisation: s in [0,1] -> t in [0, log(C/c)]."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("s must lie in [0, 1]")
    if not 0.0 < c < C:
        raise ValueError("need 0 < c < C")
    return float(np.log(C / (C - s * (C - c))))


def prop_bound(s: float, c: float, C: float, zeta: float) -> float:
    """Lower-bound curve for the rescaled backward occupation process."""
    if not 0.0 <= s <= 1.0 or not 0.0 < c < C:
        raise ValueError("invalid window parameters")
    return float(zeta / (zeta + np.exp(c / C) * (C - s * (C - c)) ** (2.0 * zeta)))


@dataclass(frozen=True)
class GammaSequence:
    """Named absolutely-summable perturbation families for the product bracket."""

    kind: str = "zero"          # "zero" or "inverse_square"
    scale: float = 1.0

    def values(self, k: int, n: int) -> np.ndarray:
        j = np.arange(k, n + 1, dtype=np.float64)
        if self.kind == "zero":
            return np.zeros_like(j)
        if self.kind == "inverse_square":
            return self.scale / (j * j)
        raise ValueError(f"unknown gamma family {self.kind!r}")


@dataclass
class ProductBracket:
    product: float
    lower: float
    upper: float
    ok: bool
    asserted: bool  # False when the precondition 2*alpha + 1 < k <= n fails


def product_with_bounds(alpha: float, gamma: GammaSequence, k: int, n: int) -> ProductBracket:
    """prod_{j=k}^{n} (1 + alpha/j + gamma_j) with its two-sided bracket.

    With gamma == 0 the bracket is
        (n/k)^a (1 - (a + a^2)/k)  <=  product  <=  (n/k)^a (1 + 1/n)^a,
    asserted only when 2*alpha + 1 < k <= n.  Nonzero gamma widens both sides
    by exp(-S) and exp(S), S = sum_{j=k}^{n} |gamma_j|.  The upper bound is
    an equality for alpha = 1 in real arithmetic, hence the roundoff guard.
    """
    if alpha < 0.0:
        raise ValueError("alpha must be >= 0")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    j = np.arange(k, n + 1, dtype=np.float64)
    g = gamma.values(k, n)
    product = float(np.prod(1.0 + alpha / j + g))
    base = (n / k) ** alpha
    lower = base * (1.0 - (alpha + alpha * alpha) / k)
    upper = base * (1.0 + 1.0 / n) ** alpha
    s_abs = float(np.abs(g).sum())
    lower *= np.exp(-s_abs)
    upper *= np.exp(s_abs)
    asserted = (2.0 * alpha + 1.0) < k
    guard = _REL_GUARD * max(abs(product), 1.0)
    ok = (lower - guard <= product <= upper + guard) if asserted else True
    return ProductBracket(product=product, lower=float(lower), upper=float(upper),
                          ok=bool(ok), asserted=asserted)


def marked_boxes(r: int, a: int, b: int, rng: np.random.Generator, size: int | None = None):
    """Throw r balls uniformly into a boxes (first b marked); count newly
    occupied unmarked boxes.  With `size`, returns an array of independent
    counts (one row of r throws per sample)."""
    if not (1 <= b < a) or r < 1:
        raise ValueError("need 1 <= b < a and r >= 1")
    if size is None:
        boxes = rng.integers(0, a, size=r)
        return int(len(np.unique(boxes[boxes >= b])))
    boxes = rng.integers(0, a, size=(size, r))
    counts = np.zeros(size, dtype=np.int64)
    for m in range(b, a):
        counts += (boxes == m).any(axis=1)
    return counts


def marked_boxes_exact(r: int, a: int, b: int) -> tuple[np.ndarray, float]:
    """Exact pmf and mean by enumerating all a**r placements (a**r <= 1e7)."""
    if not (1 <= b < a) or r < 1:
        raise ValueError("need 1 <= b < a and r >= 1")
    if a**r > 10_000_000:
        raise ValueError(f"a**r = {a**r} exceeds the exact-mode limit 1e7")
    pmf = np.zeros(r + 1)
    w = a ** (-float(r))
    for placement in itertools.product(range(a), repeat=r):
        occupied = {box for box in placement if box >= b}
        pmf[len(occupied)] += w
    mean = float(np.dot(pmf, np.arange(r + 1)))
    return pmf, mean


def marked_boxes_mean(r: int, a: int, b: int) -> float:
    """Closed-form mean: (a-b) * (1 - (1 - 1/a)^r), by linearity over boxes."""
    return (a - b) * (1.0 - (1.0 - 1.0 / a) ** r)


def g_mean_step(g: int, k: int, zeta: float) -> float:
    """One-step conditional mean of the with-multiplicity backward count:
    g - g/(k+1) + 2*zeta*(1 - (1 - 1/(2k+2))**g)."""
    if g < 0 or k < 0:
        raise ValueError("need g >= 0 and k >= 0")
    return g - g / (k + 1.0) + 2.0 * zeta * (1.0 - (1.0 - 1.0 / (2.0 * (k + 1.0))) ** g)
