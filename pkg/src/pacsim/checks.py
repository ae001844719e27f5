"""Deterministic verification suites, shared by `pacsim check` and the tests.

Each suite returns (ok, detail).  They are exact (no statistical tolerance
beyond documented roundoff guards) and fast enough to run on every build.
"""

from __future__ import annotations

import math

import numpy as np

from .core import SimConfig, run_forward
from .distributions import RDistribution
from .genealogy import backward_dual, color_duality_check
from .refmath import GammaSequence, marked_boxes, marked_boxes_exact, marked_boxes_mean, ode_y


def product_bracket_grid(alphas=(0.5, 1.0, 2.0), kmax=100, nmax=10_000) -> tuple[bool, str]:
    """Exhaustive two-sided bracket check for prod (1 + alpha/j) over the grid
    alpha in alphas, 2*alpha+1 < k <= kmax, k <= n <= nmax.

    The textbook upper bound (n/k)^a (1+1/n)^a is provably false for a < 1
    (counterexample: a=1/2, k=n=3 gives 7/6 > 2/sqrt(3)); for such a the
    suite asserts the corrected bound (n/k)^a exp(a/k) instead, which follows
    from sum_{j=k}^{n} 1/j <= 1/k + log(n/k).  The lower bound and the a >= 1
    upper bound hold as stated.
    """
    guard = 1e-9
    checked = 0
    for alpha in alphas:
        kmin = math.floor(2 * alpha + 1) + 1
        for k in range(kmin, kmax + 1):
            j = np.arange(k, nmax + 1, dtype=np.float64)
            prods = np.cumprod(1.0 + alpha / j)
            ns = j
            base = (ns / k) ** alpha
            lower = base * (1.0 - (alpha + alpha * alpha) / k)
            if alpha >= 1.0:
                upper = base * (1.0 + 1.0 / ns) ** alpha
            else:
                upper = base * np.exp(alpha / k)
            g = guard * np.maximum(np.abs(prods), 1.0)
            bad = (prods < lower - g) | (prods > upper + g)
            if bad.any():
                n_bad = int(ns[bad.argmax()])
                return False, f"bracket fails at alpha={alpha} k={k} n={n_bad}"
            checked += len(j)
    return True, f"{checked} (alpha,k,n) points (corrected upper for alpha<1)"


def marked_boxes_suite(rmax=4, amax=6, sampler_trials=40_000, seed=20) -> tuple[bool, str]:
    """Enumeration vs closed-form mean, the two-sided mean bounds, and the
    sampler against enumeration at 3 sigma (fixed substream per case)."""
    cases = 0
    for a in range(2, amax + 1):
        for b in range(1, a):
            for r in range(1, rmax + 1):
                rng = np.random.Generator(np.random.PCG64([seed, r, a, b]))
                pmf, mean = marked_boxes_exact(r, a, b)
                if abs(mean - marked_boxes_mean(r, a, b)) > 1e-12:
                    return False, f"exact vs closed form at (r,a,b)=({r},{a},{b})"
                lo = r * (1.0 - b / a - r / a)
                hi = r * (1.0 - b / a)
                if not (lo - 1e-12 <= mean <= hi + 1e-12):
                    return False, f"mean bounds at (r,a,b)=({r},{a},{b})"
                draws = marked_boxes(r, a, b, rng, size=sampler_trials)
                sd = float(np.sqrt(np.dot(pmf, (np.arange(r + 1) - mean) ** 2)))
                if abs(draws.mean() - mean) > 3.0 * max(sd, 1e-9) / np.sqrt(sampler_trials):
                    return False, f"sampler mean at (r,a,b)=({r},{a},{b})"
                cases += 1
    return True, f"{cases} (r,a,b) cases"


def duality_replay(n=2_000, seeds=range(5)) -> tuple[bool, str]:
    """Exact per-path identities on fresh traces: colour duality, the
    G-recursion, and H[k] <= G[k+1]."""
    R = RDistribution.deterministic(3)
    for seed in seeds:
        trace = run_forward(SimConfig(n=n, R=R, seed=seed, record_genealogy=True))
        if not color_duality_check(trace, n):
            return False, f"duality fails at seed={seed}"
        d = backward_dual(trace, n)
        if not np.array_equal(d.G[:-1], d.G[1:] - d.A[:-1] + d.B[:-1]):
            return False, f"G-recursion fails at seed={seed}"
        if not np.all(d.H[:-1] <= d.G[1:]):
            return False, f"H > G[k+1] at seed={seed}"
    return True, f"{len(list(seeds))} traces, n={n}"


def ode_residual(points=1_000) -> tuple[bool, str]:
    """Centered finite differences of the logistic solution against its
    vector field, relative error < 1e-6."""
    h = 1e-4
    worst = 0.0
    for zeta in (1.1, 1.5, 2.5):
        for A in (0.1, 0.5, 0.9):
            ts = np.linspace(0.0, 2.0, points // 9 + 1)[1:]
            for t in ts:
                fd = (ode_y(t + h, A, zeta) - ode_y(t - h, A, zeta)) / (2 * h)
                y = ode_y(t, A, zeta)
                rhs = 2.0 * zeta * y * (1.0 - y)
                rel = abs(fd - rhs) / max(abs(rhs), 1e-300)
                worst = max(worst, rel)
                if rel > 1e-6:
                    return False, f"residual {rel:.2e} at zeta={zeta} A={A} t={t:.3f}"
    return True, f"worst relative residual {worst:.2e}"


ALL_SUITES = {
    "product_bracket_grid": product_bracket_grid,
    "marked_boxes": marked_boxes_suite,
    "duality_replay": duality_replay,
    "ode_residual": ode_residual,
}


def run_all(verbose_print=None) -> bool:
    ok_all = True
    for name, suite in ALL_SUITES.items():
        ok, detail = suite()
        ok_all &= ok
        if verbose_print is not None:
            verbose_print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return ok_all
