"""Empirical measurements on forward runs.

All functions are pure read-only passes over immutable traces (or duals) and
may run concurrently across replicates and checkpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import UrnTrace, graph_view
from .genealogy import BackwardDual, FounderIndex, founders
from .refmath import ode_y, prop_bound, t_of_s

DEFAULT_GRID = tuple(np.round(np.linspace(0.0, 1.0, 101), 10))
DEFAULT_EPS = (0.1, 0.05, 0.02, 0.01)


@dataclass
class MeasureSnapshot:
    """Colour measure, condensation mass and hub data at one checkpoint."""

    t: int
    grid: np.ndarray
    mu_cdf: np.ndarray          # proportion of balls with colour <= a
    eps_list: tuple[float, ...]
    eps_mass: np.ndarray        # proportion of balls with colour in [1-eps, 1]
    ell: np.ndarray             # top degree share among fitness-[1-eps,1] vertices
    hub_vertex: int
    hub_birth: int
    hub_share: float
    nu: Optional[float] = None  # colour-0 cue fraction (two-colour mode only)


def snapshot(trace: UrnTrace, t: int, grid: Sequence[float] = DEFAULT_GRID,
             eps_list: Sequence[float] = DEFAULT_EPS) -> MeasureSnapshot:
    if t > trace.n:
        raise ValueError(f"t={t} beyond trace horizon {trace.n}")
    grid = np.asarray(grid)
    nballs = trace.ball_count(t)
    cols = trace.ball_colours(nballs)
    cols_sorted = np.sort(cols)
    mu_cdf = np.searchsorted(cols_sorted, grid, side="right") / nballs

    gv = graph_view(trace, t)
    hub_vertex, hub_birth, hub_share = gv.hub()

    eps_arr = np.asarray(eps_list)
    eps_mass = np.array([(cols >= 1.0 - e).mean() for e in eps_arr])
    ell = np.empty(len(eps_arr))
    for i, e in enumerate(eps_arr):
        in_band = gv.fitness >= 1.0 - e
        ell[i] = gv.degree[in_band].max() / nballs if in_band.any() else 0.0

    nu = None
    if trace.config.F.kind == "two_point":
        nu = float((trace.cue_col[: trace.pairs_at_time(t)] == 0.0).mean())

    return MeasureSnapshot(t=t, grid=grid, mu_cdf=mu_cdf,
                           eps_list=tuple(eps_arr), eps_mass=eps_mass, ell=ell,
                           hub_vertex=hub_vertex, hub_birth=hub_birth,
                           hub_share=hub_share, nu=nu)


def two_color_trajectory(trace: UrnTrace, checkpoints: Sequence[int]) -> list[tuple[int, float]]:
    """nu_t = colour-0 cue fraction at each checkpoint (two-point F only)."""
    if trace.config.F.kind != "two_point":
        raise ValueError("two-colour trajectory requires a two_point fitness law")
    is_zero = np.concatenate(([0], np.cumsum(trace.cue_col == 0.0)))
    out = []
    for t in checkpoints:
        p = trace.pairs_at_time(t)
        out.append((t, float(is_zero[p]) / p))
    return out


def early_fittest_family(trace: UrnTrace, C: float,
                         index: Optional[FounderIndex] = None) -> tuple[int, float, int, float]:
    """Fittest source among the first C*n^beta steps and its family size.

    Returns (k_n, fitness of s_{k_n}, S_n, S_n / |U_n|).  Requires a
    supercritical candidate law (mean > 2, so the window exponent is > 0).
    """
    mean_r = trace.config.R.mean
    if mean_r <= 2.0:
        raise ValueError("window exponent requires E[R] > 2")
    beta = (mean_r - 2.0) / mean_r
    n = trace.n
    w = min(int(np.floor(C * n**beta)), n)
    k_n = int(np.argmax(trace.step_f[: w + 1]))
    if index is None:
        index = founders(trace, [n])
    # first source pair born at step k_n (the step's sources share the colour)
    pair_kn = int(np.searchsorted(trace.step_of_pair, k_n, side="left"))
    s_n = int(index.family_size[n][pair_kn])
    return k_n, float(trace.step_f[k_n]), s_n, s_n / trace.ball_count(n)


def hub_track(trace: UrnTrace, checkpoints: Sequence[int]) -> list[dict]:
    """Max-degree vertex per checkpoint plus the running leader-switch count.

    Ties break to the smallest vertex index; a switch is counted whenever the
    hub identity changes between consecutive checkpoints.
    """
    rows = []
    switches = 0
    prev = None
    for t in checkpoints:
        gv = graph_view(trace, t)
        v, birth, share = gv.hub()
        if prev is not None and v != prev:
            switches += 1
        prev = v
        rows.append({"t": t, "hub_vertex": v, "hub_birth": birth,
                     "degree_share": share, "switches_so_far": switches})
    return rows


@dataclass
class FluidRow:
    s: float
    k: int
    Yn: float
    t_of_s: float
    y_ref: float
    lower_bound: float


def fluid_table(dual: BackwardDual, n: int, c: float, C: float, zeta: float,
                points: int = 101) -> list[FluidRow]:
    """Rescaled backward occupation vs the logistic reference, over the window.

    Reference curve is seeded from the observed value at s = 0 (the window
    entry); the lower_bound column carries the unconditional theoretical
    curve.
    """
    if zeta <= 1.0:
        raise ValueError("fluid window requires E[R] > 2")
    if not 0.0 < c < C:
        raise ValueError("need 0 < c < C")
    beta = (zeta - 1.0) / zeta
    nbeta = n**beta
    if c * nbeta < 1.0:
        raise ValueError("window too small: c * n^beta < 1")
    s_grid = np.linspace(0.0, 1.0, points)
    rows = []
    A = None
    for s in s_grid:
        k = int(round(C * nbeta - s * (C - c) * nbeta))
        k = min(max(k, 0), dual.kt)
        yn = float(dual.H[k]) / (2.0 * k + 2.0)
        if A is None:
            A = yn
        t = t_of_s(float(s), c, C)
        rows.append(FluidRow(s=float(s), k=k, Yn=yn, t_of_s=t,
                             y_ref=ode_y(t, A, zeta),
                             lower_bound=prop_bound(float(s), c, C, zeta)))
    return rows
