"""Forward simulation of the urn process with full genealogy recording.

Each time step j adds V_j (source, cue) pairs.  Ball ids encode pairs: ball
2m is the source and 2m+1 the cue of pair m, with pair 0 the two half-edges
of the initial self-loop.  A cue draws R candidate balls independently from
the urn as it stood before its step began; it copies the colour of the
fittest candidate, while each source is coloured by the fresh fitness of its
step.  Candidate draws weight sources by activity 1+alpha and cues by 1.

Traces are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .distributions import FitnessDistribution, RDistribution
from .rng import derive_stream_seed


@dataclass(frozen=True)
class SimConfig:
    n: int
    R: RDistribution
    F: FitnessDistribution = FitnessDistribution("uniform01")
    alpha: float = 0.0
    V: RDistribution = RDistribution.deterministic(1)
    seed: int = 1
    record_genealogy: bool = False
    checkpoints: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.alpha < 0.0:
            raise ValueError("alpha must be >= 0")
        if any(t < 1 or t > self.n for t in self.checkpoints):
            raise ValueError("checkpoints must lie in [1, n]")


class UrnTrace:
    """Flat-array record of one forward run.

    Per pair m: r_of_pair[m] candidate draws, parent[m] (chosen ball id),
    cue_col[m] (colour of the cue ball).  step_f[j] is the fitness drawn at
    step j (step_f[0] colours the initial pair).  When genealogy is recorded,
    cand_pool[cand_off[m]:cand_off[m+1]] lists pair m's candidate ball ids in
    draw order.
    """

    def __init__(self, config: SimConfig, n_pairs, r_of_pair, parent, cue_col,
                 step_f, step_of_pair, pairs_at, cand_off, cand_pool, tie_events):
        self.config = config
        self.n = config.n
        self.n_pairs = int(n_pairs)
        self.r_of_pair = r_of_pair
        self.parent = parent
        self.cue_col = cue_col
        self.step_f = step_f
        self.step_of_pair = step_of_pair
        self.pairs_at = pairs_at
        self.cand_off = cand_off
        self.cand_pool = cand_pool
        self.tie_events = int(tie_events)
        self._vertex_cache: Optional[np.ndarray] = None

    @property
    def has_genealogy(self) -> bool:
        return self.cand_pool is not None

    def pairs_at_time(self, t: int) -> int:
        return int(self.pairs_at[t])

    def ball_count(self, t: int) -> int:
        """|U_t|: number of balls after step t."""
        return 2 * self.pairs_at_time(t)

    def candidates(self, m: int) -> np.ndarray:
        if not self.has_genealogy:
            raise ValueError("trace was run with record_genealogy off")
        return self.cand_pool[self.cand_off[m]:self.cand_off[m + 1]]

    def ball_colours(self, upto_ball: Optional[int] = None) -> np.ndarray:
        """Colours of balls 0..upto_ball-1 (all balls by default, even count)."""
        nb_ = 2 * self.n_pairs if upto_ball is None else upto_ball
        if nb_ % 2:
            raise ValueError("balls come in pairs; upto_ball must be even")
        cols = np.empty(nb_)
        cols[0::2] = self.step_f[self.step_of_pair[: nb_ // 2]]
        cols[1::2] = self.cue_col[: nb_ // 2]
        return cols

    def colour_of(self, ball: int) -> float:
        m = ball >> 1
        if ball & 1:
            return float(self.cue_col[m])
        return float(self.step_f[self.step_of_pair[m]])


def run_forward(config: SimConfig) -> UrnTrace:
    """Run the urn forward for config.n steps; deterministic given the seed."""
    r_values = np.asarray(config.R.values, dtype=np.int64)
    r_cum = np.cumsum(np.asarray(config.R.probs))
    v_values = np.asarray(config.V.values, dtype=np.int64)
    v_cum = np.cumsum(np.asarray(config.V.probs))

    n = config.n
    max_pairs = 1 + n * int(v_values.max())
    r_of_pair = np.zeros(max_pairs, dtype=np.int64)
    parent = np.zeros(max_pairs, dtype=np.int64)
    cue_col = np.zeros(max_pairs, dtype=np.float64)
    step_f = np.zeros(n + 1, dtype=np.float64)
    step_of_pair = np.zeros(max_pairs, dtype=np.int64)
    pairs_at = np.zeros(n + 1, dtype=np.int64)
    cand_off = np.zeros(max_pairs + 1, dtype=np.int64)
    if config.record_genealogy:
        cand_pool = np.zeros(max_pairs * int(r_values.max()), dtype=np.int64)
    else:
        cand_pool = np.zeros(1, dtype=np.int64)

    stream = derive_stream_seed(config.seed, 0)
    n_pairs, pool_len, tie_events = _kernels.sim_forward(
        n, r_values, r_cum, v_values, v_cum, float(config.alpha),
        config.F.kind == "two_point", float(config.F.p1),
        np.uint64(stream), config.record_genealogy,
        r_of_pair, parent, cue_col, step_f, step_of_pair, pairs_at,
        cand_off, cand_pool,
    )

    return UrnTrace(
        config=config,
        n_pairs=n_pairs,
        r_of_pair=r_of_pair[:n_pairs],
        parent=parent[:n_pairs],
        cue_col=cue_col[:n_pairs],
        step_f=step_f,
        step_of_pair=step_of_pair[:n_pairs],
        pairs_at=pairs_at,
        cand_off=cand_off[:n_pairs + 1],
        cand_pool=cand_pool[:pool_len] if config.record_genealogy else None,
        tie_events=tie_events,
    )


def select_parent(candidates: Sequence[int], colours: np.ndarray, rng: np.random.Generator) -> int:
    """Pick the fittest candidate; ties broken uniformly at random.

    `colours` is indexable by ball id.  Mirrors the choice rule used inside
    the forward loop.
    """
    cand = np.asarray(candidates, dtype=np.int64)
    if cand.size == 0:
        raise ValueError("empty candidate list")
    cols = np.asarray(colours)[cand]
    best = cols.max()
    ties = cand[cols == best]
    if ties.size == 1:
        return int(ties[0])
    return int(ties[rng.integers(ties.size)])


@dataclass
class GraphView:
    """Vertex-level view of the urn at a checkpoint time t."""

    t: int
    vertex_of: np.ndarray   # ball id -> vertex index, balls alive at t
    degree: np.ndarray      # per-vertex degree at t
    fitness: np.ndarray     # per-vertex fitness

    @property
    def n_vertices(self) -> int:
        return len(self.degree)

    def hub(self) -> tuple[int, int, float]:
        """(vertex, birth step, degree share); ties -> smallest vertex index."""
        v = int(np.argmax(self.degree))
        return v, v, float(self.degree[v]) / float(self.degree.sum())


def graph_view(trace: UrnTrace, t: int) -> GraphView:
    """Reconstruct vertex memberships and degrees at time t <= n."""
    if t > trace.n:
        raise ValueError(f"t={t} beyond trace horizon {trace.n}")
    full_vertex = _vertex_array(trace)
    nballs = trace.ball_count(t)
    vertex_of = full_vertex[:nballs]
    degree = np.bincount(vertex_of, minlength=t + 1)
    fitness = trace.step_f[: t + 1]
    return GraphView(t=t, vertex_of=vertex_of, degree=degree, fitness=fitness)


def _vertex_array(trace: UrnTrace) -> np.ndarray:
    """vertex index per ball (cached on the trace)."""
    cached = getattr(trace, "_vertex_cache", None)
    if cached is None:
        cached = np.zeros(2 * trace.n_pairs, dtype=np.int64)
        _kernels.vertex_pass(trace.parent, trace.step_of_pair, trace.n_pairs, cached)
        trace._vertex_cache = cached
    return cached
