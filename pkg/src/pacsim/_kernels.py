"""Jitted inner loops: forward urn simulation and genealogy sweeps.

The forward loop consumes a raw splitmix64 stream (the jitted twin of
rng.smix_next) in a fixed, documented order per time step:

    V_j | for each new pair: R, parents left-to-right, tie-break (only when
    the fittest candidate is not unique) | F_j

One uniform is consumed per inverse-CDF draw even for deterministic laws, so
the stream layout does not depend on parameter values.  F_0 (the colour of the
initial source ball) is the first uniform of the stream.
"""

from __future__ import annotations

import numba as nb
import numpy as np

_GOLDEN = nb.uint64(0x9E3779B97F4A7C15)
_MIX1 = nb.uint64(0xBF58476D1CE4E5B9)
_MIX2 = nb.uint64(0x94D049BB133111EB)
_U53 = 1.0 / 9007199254740992.0


@nb.njit(nb.types.UniTuple(nb.uint64, 2)(nb.uint64), inline="always")
def _next_raw(state):
    state = state + _GOLDEN
    z = state
    z = (z ^ (z >> nb.uint64(30))) * _MIX1
    z = (z ^ (z >> nb.uint64(27))) * _MIX2
    z = z ^ (z >> nb.uint64(31))
    return state, z


@nb.njit(inline="always")
def _next_uniform(state):
    state, z = _next_raw(state)
    return state, (z >> nb.uint64(11)) * _U53


@nb.njit(inline="always")
def _inv_cdf(values, cum, u):
    # linear scan; supports are tiny
    for i in range(cum.shape[0]):
        if u < cum[i]:
            return values[i]
    return values[cum.shape[0] - 1]


@nb.njit(cache=True, nogil=True)
def sim_forward(
    n,
    r_values,
    r_cum,
    v_values,
    v_cum,
    alpha,
    fit_two_point,
    fit_p1,
    seed,
    record_pool,
    # outputs, preallocated to worst case
    r_of_pair,
    parent,
    cue_col,
    step_f,
    step_of_pair,
    pairs_at,
    cand_off,
    cand_pool,
):
    state = nb.uint64(seed)
    p_src = (1.0 + alpha) / (2.0 + alpha)
    max_r = 0
    for i in range(r_values.shape[0]):
        if r_values[i] > max_r:
            max_r = r_values[i]
    cand_buf = np.empty(max_r, dtype=np.int64)
    col_buf = np.empty(max_r, dtype=np.float64)
    tie_buf = np.empty(max_r, dtype=np.int64)

    # initial pair: s_0 (ball 0) and c_0 (ball 1), both coloured F_0
    state, u = _next_uniform(state)
    f0 = u if not fit_two_point else (1.0 if u < fit_p1 else 0.0)
    step_f[0] = f0
    r_of_pair[0] = 0
    parent[0] = 0
    cue_col[0] = f0
    step_of_pair[0] = 0
    pairs_at[0] = 1
    cand_off[0] = 0
    cand_off[1] = 0

    npairs = 1
    pool_len = 0
    tie_events = 0

    for j in range(1, n + 1):
        pairs_before = npairs
        state, u = _next_uniform(state)
        vj = _inv_cdf(v_values, v_cum, u)

        for _ in range(vj):
            state, u = _next_uniform(state)
            r = _inv_cdf(r_values, r_cum, u)

            best = -1.0
            nties = 0
            for l in range(r):
                state, u = _next_uniform(state)
                if u < p_src:
                    idx = int((u / p_src) * pairs_before)
                    if idx >= pairs_before:  # guard roundoff at the boundary
                        idx = pairs_before - 1
                    ball = 2 * idx
                    col = step_f[step_of_pair[idx]]
                else:
                    idx = int(((u - p_src) / (1.0 - p_src)) * pairs_before)
                    if idx >= pairs_before:
                        idx = pairs_before - 1
                    ball = 2 * idx + 1
                    col = cue_col[idx]
                cand_buf[l] = ball
                col_buf[l] = col
                if col > best:
                    best = col

            k = 0
            for l in range(r):
                if col_buf[l] == best:
                    tie_buf[k] = cand_buf[l]
                    k += 1
            if k == 1:
                chosen = tie_buf[0]
            else:
                tie_events += 1
                state, u = _next_uniform(state)
                pick = int(u * k)
                if pick >= k:
                    pick = k - 1
                chosen = tie_buf[pick]

            m = npairs
            r_of_pair[m] = r
            parent[m] = chosen
            cue_col[m] = best
            step_of_pair[m] = j
            if record_pool:
                for l in range(r):
                    cand_pool[pool_len + l] = cand_buf[l]
                pool_len += r
            cand_off[m + 1] = pool_len
            npairs += 1

        state, u = _next_uniform(state)
        fj = u if not fit_two_point else (1.0 if u < fit_p1 else 0.0)
        step_f[j] = fj
        pairs_at[j] = npairs

    return npairs, pool_len, tie_events


@nb.njit(cache=True, nogil=True)
def founder_pass(parent, npairs, founder):
    """founder[ball] = ball id of the source heading its ancestral line."""
    for m in range(npairs):
        founder[2 * m] = 2 * m
        founder[2 * m + 1] = founder[parent[m]]


@nb.njit(cache=True, nogil=True)
def vertex_pass(parent, step_of_pair, npairs, vertex):
    """vertex[ball] = index of the vertex the half-edge is attached to."""
    for m in range(npairs):
        vertex[2 * m] = step_of_pair[m]
        vertex[2 * m + 1] = vertex[parent[m]]


@nb.njit(cache=True, nogil=True)
def backward_dual_pass(kt, r_of_pair, cand_off, cand_pool, member, seen, a, b_arr, n_arr, gdiff, hdiff):
    """Single backward sweep over pairs kt..1 for the dual of cue ball kt.

    Marks the potential-ancestor set in `member` and accumulates, per draw by
    a member cue, difference-array contributions for the with-multiplicity
    count G and the without-multiplicity count H, plus the per-pair loss (a),
    gain (b) and source-hit (n) counts.
    """
    member[2 * kt + 1] = 1
    for k in range(kt, 0, -1):
        if member[2 * k + 1] == 1:
            b_arr[k] = r_of_pair[k]
            for t in range(cand_off[k], cand_off[k + 1]):
                ball = cand_pool[t]
                i = ball >> 1
                member[ball] = 1
                gdiff[i + 1] += 1
                gdiff[k + 1] -= 1
                a[i] += 1
                if ball & 1 == 0:
                    n_arr[i] += 1
                if seen[ball] == 0:
                    seen[ball] = 1
                    hdiff[i] += 1
                    hdiff[k] -= 1
    if member[1] == 1:  # c_0 inherits from s_0 (its only potential parent)
        member[0] = 1
