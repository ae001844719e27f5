"""Acceptance suite: one test per criterion, statistical targets at desk scale.

Defaults unless a criterion states otherwise: R identically 3, uniform
fitness, alpha = 0, single edge per step, >= 20 replicates, 3-sigma-hat
tolerances.  Two sub-claims that contradict provable limits are carried as
strict xfails with the measured numbers printed (see notes/decisions.md in
the build notes for the analysis): the product-bracket upper bound at
alpha = 1/2 and the near-1 colour-mass dichotomy read through mu_n.
"""

import math

import numpy as np
import pytest

from conftest import record_criterion

from pacsim import checks
from pacsim.analytics import early_fittest_family, hub_track, snapshot
from pacsim.cli import main
from pacsim.core import SimConfig, run_forward
from pacsim.distributions import (FitnessDistribution, RDistribution,
                                  model_constants, two_color_fixed_point)
from pacsim.genealogy import backward_dual, color_duality_check
from pacsim.gwdual import mu_limit, mu_limit_exact
from pacsim.refmath import GammaSequence, product_with_bounds

R1 = RDistribution.deterministic(1)
R2 = RDistribution.deterministic(2)
R3 = RDistribution.deterministic(3)
UNI = FitnessDistribution("uniform01")
GOLDEN_Q = (math.sqrt(5.0) - 1.0) / 2.0

GRID = np.linspace(0.0, 1.0, 101)
CHECKPOINTS = (1_000, 10_000, 100_000)


# ------------------------------------------------------------------ ensembles

@pytest.fixture(scope="session")
def forward_ensembles():
    """Mean colour-measure curves and near-1 masses for the four model
    variants of the dichotomy battery; 20 seeds each, n = 1e5."""
    out = {}
    for label, R, alpha in (("R3", R3, 0.0), ("R1", R1, 0.0),
                            ("R2", R2, 0.0), ("R3a", R3, 1.5)):
        curves = {t: [] for t in CHECKPOINTS}
        eps_mass = {t: [] for t in CHECKPOINTS}
        ell = {t: [] for t in CHECKPOINTS}
        for s in range(20):
            tr = run_forward(SimConfig(n=CHECKPOINTS[-1], R=R, alpha=alpha,
                                       seed=417_000 + s))
            for t in CHECKPOINTS:
                snap = snapshot(tr, t, grid=GRID, eps_list=(0.02,))
                curves[t].append(snap.mu_cdf)
                eps_mass[t].append(snap.eps_mass[0])
                ell[t].append(snap.ell[0])
        out[label] = {
            "mu": {t: np.mean(curves[t], axis=0) for t in CHECKPOINTS},
            "eps": {t: float(np.mean(eps_mass[t])) for t in CHECKPOINTS},
            "ell": {t: float(np.mean(ell[t])) for t in CHECKPOINTS},
        }
    return out


@pytest.fixture(scope="session")
def backward_ensemble():
    """200 genealogy replicates at n = 1e5 with their terminal duals."""
    n = 100_000
    k = round(13.0 * n ** (1.0 / 3.0))
    gk, hk, nsum = [], [], []
    for rep in range(200):
        tr = run_forward(SimConfig(n=n, R=R3, seed=91_000 + rep,
                                   record_genealogy=True))
        d = backward_dual(tr, n)
        gk.append(d.G[k] / k)
        hk.append(d.H[k] / k)
        nsum.append(int(d.N[k:].sum()))
    return n, k, np.array(gk), np.array(hk), np.array(nsum, dtype=float)


# ------------------------------------------------------------------ A1

def test_a1_exact_suites():
    n, traces = 10_000, 50
    for seed in range(traces):
        tr = run_forward(SimConfig(n=n, R=R3, seed=230_000 + seed,
                                   record_genealogy=True))
        d = backward_dual(tr, n)
        assert np.array_equal(d.G[:-1], d.G[1:] - d.A[:-1] + d.B[:-1]), seed
        assert color_duality_check(tr, n), seed

    ok_b, det_b = checks.product_bracket_grid()
    ok_m, det_m = checks.marked_boxes_suite()
    ok_o, det_o = checks.ode_residual()
    ok = ok_b and ok_m and ok_o
    record_criterion(
        "A1", ok,
        f"G-recursion+duality exact on {traces} traces (n={n}); bracket {det_b}; "
        f"boxes {det_m}; ode {det_o}")
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="the stated product upper bound (n/k)^a (1+1/n)^a is provably false "
           "for a < 1: at a=1/2, k=n=3 the product is 7/6 and (7/6)^2 = 49/36 "
           "> 48/36 = (upper bound)^2; the corrected bound (n/k)^a e^{a/k} "
           "holds on the whole grid and is enforced in A1")
def test_a1_product_bracket_as_specified():
    bad = 0
    for alpha in (0.5, 1.0, 2.0):
        kmin = math.floor(2 * alpha + 1) + 1
        for k in range(kmin, 101):
            for n in (k, k + 1, 2 * k, 100, 10_000):
                if n < k:
                    continue
                res = product_with_bounds(alpha, GammaSequence("zero"), k, n)
                bad += not res.ok
    print(f"A1-literal: {bad} bracket violations on the spot grid")
    assert bad == 0


# ------------------------------------------------------------------ A2

def test_a2_extinction_and_fixed_points():
    reps = 100_000
    cue = mu_limit(R3, UNI, rooting="cue_root", reps=reps, seed=52)
    gen = mu_limit(R3, UNI, rooting="generic_root", reps=reps, seed=53)
    surv_cue, surv_gen = 2 * cue.atom1, 2 * gen.atom1
    t_cue, t_gen = 1.0 - GOLDEN_Q**3, 1.0 - GOLDEN_Q

    nu = two_color_fixed_point(R3, 0.5)
    lo, hi = 0.0, 1.0
    for _ in range(100):  # independent plain bisection oracle
        mid = 0.5 * (lo + hi)
        if ((mid + 0.5) / 2.0) ** 3 - mid > 0:
            lo = mid
        else:
            hi = mid
    oracle = 0.5 * (lo + hi)

    ok = (abs(surv_cue - t_cue) <= 0.005 and abs(surv_gen - t_gen) <= 0.005
          and abs(nu - 0.01731) <= 1e-5 and abs(nu - oracle) <= 1e-9)
    record_criterion(
        "A2", ok,
        f"survival cue {surv_cue:.5f} (target {t_cue:.5f}), generic {surv_gen:.5f} "
        f"(target {t_gen:.5f}); nu*(1/2) {nu:.7f} vs oracle {oracle:.7f}")
    assert ok


# ------------------------------------------------------------------ A3

def test_a3_rooting_resolution_and_limit_law(forward_ensembles):
    # two-colour urn pins the cue-rooted reading
    F2 = FitnessDistribution("two_point", p1=0.5)
    nus = []
    for s in range(20):
        tr = run_forward(SimConfig(n=100_000, R=R3, F=F2, seed=512_000 + s))
        p = tr.pairs_at_time(100_000)
        nus.append(float(np.mean(tr.cue_col[:p] == 0.0)))
    nu_bar = float(np.mean(nus))
    nu_target = two_color_fixed_point(R3, 0.5)

    exact = mu_limit_exact(R3, UNI, rooting="cue_root", grid=GRID, Lmax=2000)
    mid_target = exact.cdf[50]
    mu_mean = forward_ensembles["R3"]["mu"]
    mid = mu_mean[100_000][50]

    kdist = {t: float(np.max(np.abs(mu_mean[t] - exact.cdf))) for t in CHECKPOINTS}
    ok = (abs(nu_bar - nu_target) <= 0.02
          and abs(mid - mid_target) <= 0.03
          and kdist[100_000] < 0.45
          and kdist[1_000] > kdist[10_000] > kdist[100_000])
    record_criterion(
        "A3", ok,
        f"mean nu_n {nu_bar:.5f} (cue-rooted target {nu_target:.5f}); "
        f"mu_n([0,.5]) {mid:.4f} (target {mid_target:.4f}); Kolmogorov "
        f"{kdist[1_000]:.3f} > {kdist[10_000]:.3f} > {kdist[100_000]:.3f} < 0.45")
    assert ok


# ------------------------------------------------------------------ A4

def test_a4_supercritical_mass(forward_ensembles):
    e = forward_ensembles["R3"]["eps"][100_000]
    ok = e > 0.05
    record_criterion("A4", ok,
                     f"near-1 mass (eps=0.02) at n=1e5: {e:.4f} > 0.05 for R=3; "
                     "subcritical legs recorded by the companion and xfail tests")
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="for R=2 the proven colour-measure limit puts mass "
           "(1 - 0.98)/2 + (q3(0.98) gap)/2 ~ 0.141 in [0.98, 1], and the "
           "affine variant ~0.17, both above 0.02 and increasing in n; for "
           "R=1 every ball's colour is exactly uniform so the mean equals "
           "0.02; the stated sub-claims cannot hold")
def test_a4_condensation_dichotomy_as_specified(forward_ensembles):
    e = forward_ensembles
    n_hi, n_mid = 100_000, 10_000
    legs = {
        "R3>0.05": e["R3"]["eps"][n_hi] > 0.05,
        "R1<0.02": e["R1"]["eps"][n_hi] < 0.02,
        "R1 decreasing": e["R1"]["eps"][n_hi] < e["R1"]["eps"][n_mid],
        "R2<0.02": e["R2"]["eps"][n_hi] < 0.02,
        "R2 decreasing": e["R2"]["eps"][n_hi] < e["R2"]["eps"][n_mid],
        "R3a<0.02": e["R3a"]["eps"][n_hi] < 0.02,
        "R3a decreasing": e["R3a"]["eps"][n_hi] < e["R3a"]["eps"][n_mid],
    }
    detail = {k: round(e[lab]["eps"][n_hi], 4)
              for k, lab in (("R3", "R3"), ("R1", "R1"), ("R2", "R2"), ("R3a", "R3a"))}
    print(f"A4-literal mu-masses at n=1e5: {detail}; legs: {legs}")
    assert all(legs.values())


def test_a4_companion_extensive_condensation_dichotomy(forward_ensembles):
    # the top-degree-share statistic realises the intended dichotomy at the
    # E[R] > 2 + alpha threshold
    e = forward_ensembles
    n_hi, n_mid = 100_000, 10_000
    ok = (e["R3"]["ell"][n_hi] > 0.05
          and all(e[lab]["ell"][n_hi] < 0.03 for lab in ("R1", "R2", "R3a"))
          and all(e[lab]["ell"][n_hi] < e[lab]["ell"][n_mid]
                  for lab in ("R1", "R2", "R3a")))
    record_criterion(
        "A4b", ok,
        "top-share dichotomy at n=1e5: R3 {:.3f} > 0.05; R1 {:.4f}, R2 {:.4f}, "
        "R3+a1.5 {:.4f} all < 0.03 and decreasing".format(
            e["R3"]["ell"][n_hi], e["R1"]["ell"][n_hi], e["R2"]["ell"][n_hi],
            e["R3a"]["ell"][n_hi]))
    assert ok


# ------------------------------------------------------------------ A5

def test_a5_r1_colour_law_is_uniform(forward_ensembles):
    mu = forward_ensembles["R1"]["mu"][100_000]
    kdist = float(np.max(np.abs(mu - GRID)))
    ok = kdist < 0.02
    record_criterion("A5", ok, f"R=1 Kolmogorov distance from uniform: {kdist:.4f} < 0.02")
    assert ok


# ------------------------------------------------------------------ A6

def test_a6_backward_asymptotics(backward_ensemble):
    n, k, gk, hk, nsum = backward_ensemble
    consts = model_constants(R3)
    zeta, xi, beta, C = consts.zeta, consts.xi, consts.beta, 13.0
    upper = 2 * zeta / C**zeta
    lower = upper * (1.0 - xi / (8 * zeta * C**zeta))

    def inside(x):
        sem = x.std(ddof=1) / math.sqrt(len(x))
        return lower - 3 * sem <= x.mean() <= upper + 3 * sem, sem

    ok_g, sem_g = inside(gk)
    ok_h, sem_h = inside(hk)
    n_bound = 1.3 * n**beta / (beta * C ** (zeta - 1.0))
    ok_n = nsum.mean() <= n_bound
    ok = ok_g and ok_h and ok_n
    record_criterion(
        "A6", ok,
        f"k={k}: mean G/k {gk.mean():.4f}, H/k {hk.mean():.4f} in "
        f"[{lower:.4f},{upper:.4f}] +/- 3sem ({sem_g:.4f}); "
        f"mean source hits {nsum.mean():.1f} <= {n_bound:.1f}")
    assert ok


# ------------------------------------------------------------------ A7

def test_a7_extensive_condensation_trend():
    shares = {}
    for n in (10_000, 100_000):
        vals = [early_fittest_family(
            run_forward(SimConfig(n=n, R=R3, seed=67_000 + s)), C=13.0)[3]
            for s in range(50)]
        shares[n] = float(np.mean(vals))
    births = {}
    for n in (10_000, 1_000_000):
        vals = [hub_track(run_forward(SimConfig(n=n, R=R3, seed=68_000 + s)),
                          [n])[0]["hub_birth"] for s in range(20)]
        births[n] = float(np.median(vals))
    ok = (shares[100_000] >= 0.5 * shares[10_000]
          and births[1_000_000] > births[10_000])
    record_criterion(
        "A7", ok,
        f"mean family share {shares[100_000]:.4f} @1e5 vs {shares[10_000]:.4f} @1e4 "
        f"(ratio {shares[100_000]/shares[10_000]:.2f} >= 0.5); hub birth median "
        f"{births[10_000]:.0f} @1e4 -> {births[1_000_000]:.0f} @1e6")
    assert ok


# ------------------------------------------------------------------ A8

def test_a8_byte_determinism(tmp_path):
    specs = [
        (["simulate", "--set", "model.n=2000", "--replicates", "4", "--seed", "3"],
         ("measures.csv", "condensation.csv", "hub.csv", "family.csv")),
        (["backward", "--set", "model.n=1500", "--replicates", "3", "--seed", "5"],
         ("backward.csv", "fluid.csv")),
        (["gw", "--set", "gw.reps=30000", "--seed", "7"], ("gw_mu.csv",)),
    ]
    ok = True
    for i, (argv, names) in enumerate(specs):
        dirs = [tmp_path / f"{i}_{tag}" for tag in ("a", "b", "t8")]
        assert main(argv + ["--threads", "1", "--out", str(dirs[0])]) == 0
        assert main(argv + ["--threads", "1", "--out", str(dirs[1])]) == 0
        assert main(argv + ["--threads", "8", "--out", str(dirs[2])]) == 0
        for name in names:
            blobs = [(d / name).read_bytes() for d in dirs]
            ok &= blobs[0] == blobs[1] == blobs[2]
    record_criterion("A8", ok, "byte-identical CSVs across reruns and thread counts "
                               "(simulate, backward, gw)")
    assert ok
