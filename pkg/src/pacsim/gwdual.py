"""Sampling the dual branching tree and estimating the limiting colour law.

Trees are simulated at generation granularity only: per generation, the
number of leaves is binomial and the surviving individuals' offspring counts
are a multinomial over the support of R, so the cost per tree is O(depth)
regardless of population size.  Only the leaf count and the running colour
maximum survive a sample; the maximum of L i.i.d. fitness draws is sampled
from its exact conditional law given L (one uniform per finished tree).

Sampling is blocked: block b of a run uses the substream derived from
(seed, b), so ensembles merge identically for any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .distributions import (FitnessDistribution, LeafCountDistribution,
                            RDistribution, leaf_count_dist)
from .rng import generator

DEFAULT_GEN_CAP = 200
DEFAULT_POP_CAP = 1_000_000
_BLOCK = 8192


@dataclass
class GWOutcome:
    """One sampled dual tree."""

    survived: bool
    L: int                      # leaf count, valid when not survived
    leaf_color_max: float       # max leaf colour, valid when not survived


@dataclass
class MuEstimate:
    """Limiting colour measure on a grid, plus the atom at 1."""

    grid: np.ndarray
    cdf: np.ndarray
    atom1: float
    reps: int
    caps: tuple[int, int]
    stderr: np.ndarray
    atom1_stderr: float = 0.0
    tail_mass: float = 0.0      # truncation remainder (exact mode only)


def _offspring_probs(R: RDistribution, alpha: float) -> tuple[float, np.ndarray, np.ndarray]:
    p0 = (1.0 + alpha) / (2.0 + alpha)
    vals = np.asarray(R.values, dtype=np.int64)
    pr = np.asarray(R.probs) / (2.0 + alpha)
    return p0, vals, pr


def _max_colour_given_L(F: FitnessDistribution, L, u):
    """Sample max of L i.i.d. F draws via inverse CDF, vectorised over trees."""
    if F.kind == "uniform01":
        return u ** (1.0 / L)
    lam = 1.0 - F.p1
    return (u >= lam**L).astype(float)


def sample_tree(R: RDistribution, alpha: float, rooting: str, F: FitnessDistribution,
                caps: tuple[int, int], rng: np.random.Generator) -> GWOutcome:
    """Simulate one dual tree (generation counts only)."""
    gen_cap, pop_cap = caps
    if gen_cap < 1 or pop_cap < 1:
        raise ValueError("caps must be positive")
    p0, vals, pr = _offspring_probs(R, alpha)
    if rooting == "cue_root":
        z = int(rng.choice(vals, p=np.asarray(R.probs)))
    elif rooting == "generic_root":
        z = 1
    else:
        raise ValueError(f"unknown rooting {rooting!r}")
    leaves = 0
    for _ in range(gen_cap):
        if z == 0:
            break
        if z >= pop_cap:
            return GWOutcome(survived=True, L=0, leaf_color_max=0.0)
        counts = rng.multinomial(z, np.concatenate(([p0], pr)))
        leaves += int(counts[0])
        z = int(counts[1:] @ vals)
    if z > 0:
        return GWOutcome(survived=True, L=0, leaf_color_max=0.0)
    u = rng.random()
    cmax = float(_max_colour_given_L(F, np.float64(leaves), u))
    return GWOutcome(survived=False, L=leaves, leaf_color_max=cmax)


def _sample_block(R, F, alpha, rooting, m, caps, rng):
    """Vectorised block of m trees -> (survived mask, L, colour max)."""
    gen_cap, pop_cap = caps
    p0, vals, pr = _offspring_probs(R, alpha)
    pvec = np.concatenate(([p0], pr))
    if rooting == "cue_root":
        z = rng.choice(vals, p=np.asarray(R.probs), size=m).astype(np.int64)
    else:
        z = np.ones(m, dtype=np.int64)
    leaves = np.zeros(m, dtype=np.int64)
    survived = np.zeros(m, dtype=bool)
    for _ in range(gen_cap):
        survived |= z >= pop_cap
        active = (z > 0) & ~survived
        if not active.any():
            break
        counts = rng.multinomial(np.where(active, z, 0), pvec)
        leaves += counts[:, 0]
        z = np.where(active, counts[:, 1:] @ vals, z)
    survived |= z > 0
    dead = ~survived
    cmax = np.zeros(m)
    u = rng.random(m)  # one colour draw per tree, used only for dead ones
    if dead.any():
        cmax[dead] = _max_colour_given_L(F, leaves[dead].astype(float), u[dead])
    return survived, leaves, cmax


def mu_limit(R: RDistribution, F: FitnessDistribution, alpha: float = 0.0,
             rooting: str = "cue_root", grid: Optional[Sequence[float]] = None,
             reps: int = 100_000, caps: tuple[int, int] = (DEFAULT_GEN_CAP, DEFAULT_POP_CAP),
             seed: int = 1) -> MuEstimate:
    """Monte-Carlo estimate of the limiting colour measure.

    cdf(a) = F(a)/2 + P[tree dies and max leaf colour <= a]/2, plus the atom
    at a = 1; atom1 = survival fraction / 2.  Standard errors are binomial on
    the Monte-Carlo half.
    """
    grid = np.asarray(grid if grid is not None else np.linspace(0.0, 1.0, 101))
    if grid.min() < 0.0 or grid.max() > 1.0:
        raise ValueError("grid must lie in [0, 1]")
    n_surv = 0
    counts_le = np.zeros(len(grid), dtype=np.int64)
    done = 0
    block_id = 0
    while done < reps:
        m = min(_BLOCK, reps - done)
        rng = generator(seed, block_id)
        survived, _, cmax = _sample_block(R, F, alpha, rooting, m, caps, rng)
        n_surv += int(survived.sum())
        dead_cols = np.sort(cmax[~survived])
        counts_le += np.searchsorted(dead_cols, grid, side="right")
        done += m
        block_id += 1
    p_le = counts_le / reps
    p_surv = n_surv / reps
    f_half = np.array([F.cdf(a) for a in grid]) / 2.0
    cdf = f_half + p_le / 2.0
    atom1 = p_surv / 2.0
    cdf = cdf + np.where(grid >= 1.0, atom1, 0.0)
    stderr = 0.5 * np.sqrt(p_le * (1.0 - p_le) / reps)
    atom1_stderr = 0.5 * float(np.sqrt(p_surv * (1.0 - p_surv) / reps))
    return MuEstimate(grid=grid, cdf=cdf, atom1=atom1, reps=reps, caps=caps,
                      stderr=stderr, atom1_stderr=atom1_stderr)


def mu_limit_exact(R: RDistribution, F: FitnessDistribution, alpha: float = 0.0,
                   rooting: str = "cue_root", grid: Optional[Sequence[float]] = None,
                   Lmax: int = 2000) -> MuEstimate:
    """Deterministic evaluation of the limiting colour measure via the
    truncated leaf-count distribution; truncation bias <= tail_mass / 2."""
    grid = np.asarray(grid if grid is not None else np.linspace(0.0, 1.0, 101))
    leafs = leaf_count_dist(R, alpha=alpha, rooting=rooting, Lmax=Lmax)
    f_vals = np.array([F.cdf(a) for a in grid])
    ell = np.arange(1, Lmax + 1)
    # sum_l P[L=l] F(a)^l per grid point
    finite_part = np.array([float(np.dot(leafs.probs, fa**ell)) if fa > 0.0
                            else 0.0 for fa in f_vals])
    atom1 = 0.5 * (1.0 - leafs.total_finite_mass)
    cdf = 0.5 * f_vals + 0.5 * finite_part + np.where(grid >= 1.0, atom1, 0.0)
    return MuEstimate(grid=grid, cdf=cdf, atom1=atom1, reps=0, caps=(0, 0),
                      stderr=np.zeros(len(grid)), tail_mass=leafs.tail)
