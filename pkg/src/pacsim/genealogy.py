"""Forward family bookkeeping and the time-reversed dual of a terminal cue.

Conventions for the initial pair: the cue of pair 0 has the source of pair 0
as its single potential parent (the trace does not record a candidate list
for it), so the dual treats its gain term as zero and marks ball 0 whenever
ball 1 is a member.  The exact recursion G[k] = G[k+1] - A[k] + B[k] holds
for every k below the terminal index under this convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .core import UrnTrace


@dataclass
class FounderIndex:
    """Per-ball founding source and family sizes at checkpoints.

    founder[b] is the ball id (even) of the source heading b's ancestral
    line.  family_size[t][m] counts members at time t of the family founded
    by the source of pair m.
    """

    founder: np.ndarray
    family_size: dict[int, np.ndarray]

    def family_of(self, source_ball: int, t: int) -> int:
        return int(self.family_size[t][source_ball >> 1])


def founders(trace: UrnTrace, checkpoints: Sequence[int]) -> FounderIndex:
    """One forward pass assigning founders via parent links."""
    founder = np.zeros(2 * trace.n_pairs, dtype=np.int64)
    _kernels.founder_pass(trace.parent, trace.n_pairs, founder)
    family_size = {}
    for t in checkpoints:
        nballs = trace.ball_count(t)
        family_size[t] = np.bincount(founder[:nballs] >> 1, minlength=trace.pairs_at_time(t))
    return FounderIndex(founder=founder, family_size=family_size)


@dataclass
class BackwardDual:
    """Counts of the potential-ancestor process of one terminal cue.

    Indexed by pair k = 0..kt (kt = terminal pair): G with multiplicity,
    H without, A the loss term, B the gain term, N the source-hit count.
    member flags the potential-ancestor set over ball ids 0..2*kt+1.
    """

    kt: int
    member: np.ndarray
    H: np.ndarray
    G: np.ndarray
    A: np.ndarray
    B: np.ndarray
    N: np.ndarray

    def n_sum(self, i: int, i2: int) -> int:
        """Source hits with multiplicity over source pairs i..i2."""
        return int(self.N[i:i2 + 1].sum())


def terminal_pair(trace: UrnTrace, n: int) -> int:
    """Pair index of the last cue added at step n."""
    if n < 0 or n > trace.n:
        raise ValueError(f"n={n} outside [0, {trace.n}]")
    return trace.pairs_at_time(n) - 1


def backward_dual(trace: UrnTrace, n: int) -> BackwardDual:
    """Single backward sweep computing the dual of the step-n cue ball.

    Runtime O(total candidate draws up to n), memory O(n).
    """
    if not trace.has_genealogy:
        raise ValueError("backward_dual needs a trace with record_genealogy on")
    kt = terminal_pair(trace, n)
    member = np.zeros(2 * kt + 2, dtype=np.uint8)
    seen = np.zeros(2 * kt + 2, dtype=np.uint8)
    A = np.zeros(kt + 1, dtype=np.int64)
    B = np.zeros(kt + 1, dtype=np.int64)
    N = np.zeros(kt + 1, dtype=np.int64)
    gdiff = np.zeros(kt + 2, dtype=np.int64)
    hdiff = np.zeros(kt + 2, dtype=np.int64)
    _kernels.backward_dual_pass(kt, trace.r_of_pair, trace.cand_off, trace.cand_pool,
                                member, seen, A, B, N, gdiff, hdiff)
    G = np.cumsum(gdiff)[: kt + 1]
    H = np.cumsum(hdiff)[: kt + 1]
    return BackwardDual(kt=kt, member=member, H=H, G=G, A=A, B=B, N=N)


@dataclass
class LayerProfile:
    """Backward generation layers of a terminal cue's potential ancestry.

    W[k] = |k-th generation| (distinct balls), K = first generation whose
    construction revealed a repeated candidate draw (math.inf when none),
    sources_cum[k] = number of distinct source balls seen in layers 0..k.
    """

    W: list[int]
    K: float
    sources_cum: list[int]


def generation_layers(trace: UrnTrace, n: int, kmax: int) -> LayerProfile:
    """Breadth-first layers of distinct potential ancestors of the step-n cue."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    if not trace.has_genealogy:
        raise ValueError("generation_layers needs a trace with record_genealogy on")
    kt = terminal_pair(trace, n)
    drawn = np.zeros(2 * kt + 2, dtype=bool)       # ball was drawn by an expanded cue
    expanded = np.zeros(kt + 1, dtype=bool)        # cue pair already contributed its draws
    source_seen = np.zeros(kt + 1, dtype=bool)
    W = [1]
    sources_cum = [0]
    K = math.inf
    frontier_cues = np.array([kt], dtype=np.int64)
    for k in range(1, kmax + 1):
        draws = []
        for m in frontier_cues:
            if expanded[m]:
                # same physical draws as before: layer content only
                draws.append(trace.candidates(m) if m > 0 else np.array([0], dtype=np.int64))
                continue
            expanded[m] = True
            cand = trace.candidates(m) if m > 0 else np.array([0], dtype=np.int64)
            draws.append(cand)
            for ball in cand:
                if drawn[ball]:
                    if math.isinf(K):
                        K = k
                else:
                    drawn[ball] = True
        if not draws:
            W.append(0)
            sources_cum.append(sources_cum[-1])
            break
        layer = np.unique(np.concatenate(draws))
        W.append(len(layer))
        src = layer[layer % 2 == 0] >> 1
        source_seen[src] = True
        sources_cum.append(int(source_seen.sum()))
        frontier_cues = layer[layer % 2 == 1] >> 1
        if len(layer) == 0:
            break
    return LayerProfile(W=W, K=K, sources_cum=sources_cum)


def color_duality_check(trace: UrnTrace, n: int) -> bool:
    """Exact identity: forward colour of the step-n cue equals the maximum
    colour among source balls in its potential-ancestor set."""
    dual = backward_dual(trace, n)
    kt = dual.kt
    member_sources = np.nonzero(dual.member[0::2])[0]
    if member_sources.size == 0:
        return False
    src_cols = trace.step_f[trace.step_of_pair[member_sources]]
    return bool(src_cols.max() == trace.cue_col[kt])
