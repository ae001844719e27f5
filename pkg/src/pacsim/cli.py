"""Command-line interface: subcommand dispatch, ensemble orchestration and
deterministic CSV emission.

Subcommands: simulate | backward | gw | twocolor | theory | check.
Replicates may run on a thread pool; rows are always merged in replicate
order, so outputs are byte-identical for any thread count.  Exit codes:
0 success, 1 check-suite failure, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import checks
from .analytics import early_fittest_family, fluid_table, snapshot, two_color_trajectory
from .config import ConfigError, RunConfig, load_config
from .core import SimConfig, run_forward
from .distributions import extinction_prob, model_constants, two_color_fixed_point
from .genealogy import backward_dual
from .gwdual import mu_limit
from .refmath import ode_y, prop_bound, t_of_s
from .rng import derive_stream_seed

SCHEMAS = {
    "measures.csv": "seed,t,a,mu_cdf",
    "condensation.csv": "seed,t,eps,eps_mass,ell",
    "hub.csv": "seed,t,hub_vertex,hub_birth,degree_share,switches_so_far",
    "family.csv": "seed,n,C,k_n,fitness_kn,S_n,share",
    "twocolor.csv": "seed,t,nu",
    "fluid.csv": "seed,n,c,C,s,k,Yn,t_of_s,y_ref,lower_bound",
    "backward.csv": "seed,n,k,H,G,A,B,N",
    "gw_mu.csv": "a,mu_cdf,stderr",
}


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.9g}"


def _write_csv(path: Path, name: str, rows: Iterable[Iterable]) -> None:
    with open(path / name, "w", newline="\n") as fh:
        fh.write(SCHEMAS[name] + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _write_manifest(cfg: RunConfig, out: Path) -> None:
    (out / "manifest.txt").write_text(cfg.manifest_text())


def _replicate_seeds(cfg: RunConfig) -> list[int]:
    return [derive_stream_seed(cfg.seed, rep) for rep in range(cfg.replicates)]


def _run_replicates(cfg: RunConfig, worker: Callable[[int, int], dict]) -> list[dict]:
    """worker(rep, rep_seed) -> row bundle; results returned in replicate order."""
    seeds = _replicate_seeds(cfg)
    if cfg.threads <= 1:
        return [worker(rep, s) for rep, s in enumerate(seeds)]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        futures = [pool.submit(worker, rep, s) for rep, s in enumerate(seeds)]
        return [f.result() for f in futures]


def cmd_simulate(cfg: RunConfig) -> int:
    cfg.validate()
    R, F, V = cfg.r_distribution(), cfg.f_distribution(), cfg.v_distribution()
    pts, grid, eps = cfg.checkpoints(), cfg.grid(), cfg.eps_list()
    _, C = cfg.window
    supercritical = R.mean > 2.0

    def worker(rep: int, rep_seed: int) -> dict:
        trace = run_forward(SimConfig(n=cfg.n, R=R, F=F, alpha=cfg.alpha, V=V,
                                      seed=rep_seed, checkpoints=tuple(pts)))
        measures, cond, hub = [], [], []
        switches = 0
        prev_hub = None
        for t in pts:
            snap = snapshot(trace, t, grid=grid, eps_list=eps)
            measures.extend((rep_seed, t, a, m) for a, m in zip(grid, snap.mu_cdf))
            cond.extend((rep_seed, t, e, em, el)
                        for e, em, el in zip(eps, snap.eps_mass, snap.ell))
            if prev_hub is not None and snap.hub_vertex != prev_hub:
                switches += 1
            prev_hub = snap.hub_vertex
            hub.append((rep_seed, t, snap.hub_vertex, snap.hub_birth,
                        snap.hub_share, switches))
        family = []
        if supercritical:
            k_n, f_kn, s_n, share = early_fittest_family(trace, C)
            family.append((rep_seed, cfg.n, C, k_n, f_kn, s_n, share))
        return {"measures": measures, "cond": cond, "hub": hub, "family": family}

    results = _run_replicates(cfg, worker)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out, "measures.csv", (r for res in results for r in res["measures"]))
    _write_csv(out, "condensation.csv", (r for res in results for r in res["cond"]))
    _write_csv(out, "hub.csv", (r for res in results for r in res["hub"]))
    _write_csv(out, "family.csv", (r for res in results for r in res["family"]))
    _write_manifest(cfg, out)
    return 0


def cmd_backward(cfg: RunConfig) -> int:
    cfg.validate()
    R, F, V = cfg.r_distribution(), cfg.f_distribution(), cfg.v_distribution()
    n_list = cfg.n_list()
    c, C = cfg.window
    consts = model_constants(R, cfg.alpha)
    fluid_ok = R.mean > 2.0 and c * min(n_list) ** consts.beta >= 1.0

    def worker(rep: int, rep_seed: int) -> dict:
        trace = run_forward(SimConfig(n=cfg.n, R=R, F=F, alpha=cfg.alpha, V=V,
                                      seed=rep_seed, record_genealogy=True))
        back, fluid = [], []
        for n in n_list:
            d = backward_dual(trace, n)
            back.extend((rep_seed, n, k, d.H[k], d.G[k], d.A[k], d.B[k], d.N[k])
                        for k in range(d.kt + 1))
            if fluid_ok:
                fluid.extend((rep_seed, n, c, C, row.s, row.k, row.Yn,
                              row.t_of_s, row.y_ref, row.lower_bound)
                             for row in fluid_table(d, n, c, C, consts.zeta,
                                                    points=cfg.grid_points))
        return {"back": back, "fluid": fluid}

    results = _run_replicates(cfg, worker)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out, "backward.csv", (r for res in results for r in res["back"]))
    _write_csv(out, "fluid.csv", (r for res in results for r in res["fluid"]))
    _write_manifest(cfg, out)
    return 0


def cmd_twocolor(cfg: RunConfig) -> int:
    cfg.validate()
    F = cfg.f_distribution()
    if F.kind != "two_point":
        raise ConfigError("twocolor requires model.F.kind=two_point")
    R, V = cfg.r_distribution(), cfg.v_distribution()
    pts = cfg.checkpoints()

    def worker(rep: int, rep_seed: int) -> dict:
        trace = run_forward(SimConfig(n=cfg.n, R=R, F=F, alpha=cfg.alpha, V=V,
                                      seed=rep_seed))
        return {"rows": [(rep_seed, t, nu)
                         for t, nu in two_color_trajectory(trace, pts)]}

    results = _run_replicates(cfg, worker)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out, "twocolor.csv", (r for res in results for r in res["rows"]))
    _write_manifest(cfg, out)
    return 0


def cmd_gw(cfg: RunConfig) -> int:
    cfg.validate()
    est = mu_limit(cfg.r_distribution(), cfg.f_distribution(), alpha=cfg.alpha,
                   rooting=cfg.gw_rooting, grid=cfg.grid(), reps=cfg.gw_reps,
                   caps=cfg.gw_caps, seed=cfg.seed)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "gw_mu.csv", "w", newline="\n") as fh:
        fh.write(SCHEMAS["gw_mu.csv"] + "\n")
        for a, m, se in zip(est.grid, est.cdf, est.stderr):
            fh.write(f"{_fmt(a)},{_fmt(m)},{_fmt(se)}\n")
        fh.write(f"ATOM1,{_fmt(est.atom1)},{_fmt(est.atom1_stderr)}\n")
    _write_manifest(cfg, out)
    return 0


def cmd_theory(cfg: RunConfig, stream=None) -> int:
    cfg.validate()
    stream = stream if stream is not None else sys.stdout
    R = cfg.r_distribution()
    consts = model_constants(R, cfg.alpha)
    c, C = cfg.window
    w = stream.write
    w("quantity,x,value\n")
    w(f"zeta,,{_fmt(consts.zeta)}\n")
    w(f"beta,,{_fmt(consts.beta)}\n")
    w(f"theta,,{_fmt(consts.theta)}\n")
    w(f"xi,,{_fmt(consts.xi) if consts.xi is not None else 'NA'}\n")
    w(f"q,,{_fmt(extinction_prob(R, cfg.alpha, 'generic_root'))}\n")
    w(f"q_cue,,{_fmt(extinction_prob(R, cfg.alpha, 'cue_root'))}\n")
    for lam in (0.1, 0.25, 0.5, 0.75, 0.9):
        w(f"nu_star,{_fmt(lam)},{_fmt(two_color_fixed_point(R, lam))}\n")
    if consts.zeta > 1.0:
        a0 = consts.zeta / (4.0 * C**consts.zeta)
        for s in np.linspace(0.0, 1.0, 21):
            w(f"prop_bound,{_fmt(s)},{_fmt(prop_bound(float(s), c, C, consts.zeta))}\n")
        for s in np.linspace(0.0, 1.0, 21):
            t = t_of_s(float(s), c, C)
            w(f"ode,{_fmt(t)},{_fmt(ode_y(t, a0, consts.zeta))}\n")
    return 0


def cmd_check(cfg: RunConfig) -> int:
    cfg.validate()
    ok = checks.run_all(verbose_print=print)
    return 0 if ok else 1


_COMMANDS = {
    "simulate": cmd_simulate,
    "backward": cmd_backward,
    "gw": cmd_gw,
    "twocolor": cmd_twocolor,
    "theory": cmd_theory,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=None)
    common.add_argument("--out", metavar="DIR", default=None)
    common.add_argument("--seed", type=int, default=None, metavar="U64")
    common.add_argument("--replicates", type=int, default=None, metavar="N")
    common.add_argument("--threads", type=int, default=None, metavar="N")
    common.add_argument("--set", action="append", default=[], metavar="key=value")
    parser = argparse.ArgumentParser(prog="pacsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config, args.set)
    if args.out is not None:
        cfg.set("out.dir", args.out)
    if args.seed is not None:
        cfg.set("run.seed", str(args.seed))
    if args.replicates is not None:
        cfg.set("run.replicates", str(args.replicates))
    if args.threads is not None:
        cfg.set("run.threads", str(args.threads))
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return _COMMANDS[args.command](cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
