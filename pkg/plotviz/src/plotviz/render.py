"""Publication-style static figures from pacsim CSV outputs.

Rendering is a pure function of the CSV bytes and the figure spec: a fixed
style, no timestamps, no randomness, so identical inputs give pixel-identical
images.  Input files are validated against the documented schemas before
anything is drawn; a mismatch raises SchemaError naming the offending column.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

# the consumed external interface: exact column order per producer file
SCHEMAS = {
    "measures": ["seed", "t", "a", "mu_cdf"],
    "condensation": ["seed", "t", "eps", "eps_mass", "ell"],
    "hub": ["seed", "t", "hub_vertex", "hub_birth", "degree_share", "switches_so_far"],
    "twocolor": ["seed", "t", "nu"],
    "fluid": ["seed", "n", "c", "C", "s", "k", "Yn", "t_of_s", "y_ref", "lower_bound"],
    "gw_mu": ["a", "mu_cdf", "stderr"],
}

KINDS = ("mu_convergence", "atom_mass", "fluid", "hub_share", "twocolor")

# inputs per kind: required schema first, then optional overlays
_KIND_INPUTS = {
    "mu_convergence": (["measures"], ["gw_mu"]),
    "atom_mass": (["condensation"], []),
    "fluid": (["fluid"], []),
    "hub_share": (["hub"], []),
    "twocolor": (["twocolor"], []),
}

_STYLE = {
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "svg.hashsalt": "pacviz",
}


class SchemaError(Exception):
    """Input CSV header does not match any documented schema."""


@dataclass
class FigureSpec:
    inputs: list[str]
    kind: str
    output: str
    manifest: Optional[str] = None
    title: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


@dataclass
class Table:
    name: str
    columns: dict[str, np.ndarray]

    def __getitem__(self, col: str) -> np.ndarray:
        return self.columns[col]


def _classify_header(path: str, header: list[str]) -> str:
    for name, cols in SCHEMAS.items():
        if header == cols:
            return name
    # closest schema by shared prefix, to name the offending column
    best, best_len = None, -1
    for name, cols in SCHEMAS.items():
        k = 0
        for a, b in zip(header, cols):
            if a != b:
                break
            k += 1
        if k > best_len:
            best, best_len = name, k
    cols = SCHEMAS[best]
    if best_len < len(cols):
        want = cols[best_len]
        got = header[best_len] if best_len < len(header) else "<missing>"
        raise SchemaError(f"{path}: column {best_len + 1} is {got!r}, "
                          f"expected {want!r} (schema {best!r})")
    raise SchemaError(f"{path}: {len(header)} columns, expected {len(cols)} "
                      f"(schema {best!r})")


def load_table(path: str) -> Table:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        name = _classify_header(path, header)
        raw = list(reader)
    columns: dict[str, np.ndarray] = {}
    for i, col in enumerate(header):
        vals = [row[i] for row in raw]
        if name == "gw_mu" and col == "a":
            # the atom row carries the sentinel 'ATOM1' in this column
            columns[col] = np.array(vals, dtype=object)
        else:
            columns[col] = np.array([float(v) for v in vals])
    return Table(name=name, columns=columns)


def _route_inputs(spec: FigureSpec) -> dict[str, Table]:
    required, optional = _KIND_INPUTS[spec.kind]
    tables: dict[str, Table] = {}
    for path in spec.inputs:
        t = load_table(path)
        if t.name in tables:
            raise ValueError(f"duplicate {t.name} input: {path}")
        if t.name not in required + optional:
            raise ValueError(f"{path}: schema {t.name!r} is not used by "
                             f"kind {spec.kind!r}")
        tables[t.name] = t
    for name in required:
        if name not in tables:
            raise ValueError(f"kind {spec.kind!r} needs a {name} CSV")
    return tables


def _manifest_hash(spec: FigureSpec) -> str:
    path = spec.manifest
    if path is None:
        guess = Path(spec.inputs[0]).parent / "manifest.txt"
        path = str(guess) if guess.exists() else None
    if path is None:
        return "none"
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:12]


def _per_seed(table: Table):
    seeds = np.unique(table["seed"])
    for s in seeds:
        yield s, table["seed"] == s


def _draw_mu_convergence(ax, tables):
    m = tables["measures"]
    ts = np.unique(m["t"])
    for t in ts:
        sel = m["t"] == t
        grid = np.unique(m["a"][sel])
        mean = [m["mu_cdf"][sel & (m["a"] == a)].mean() for a in grid]
        ax.plot(grid, mean, label=f"t={int(t)}")
    gw = tables.get("gw_mu")
    if gw is not None:
        body = gw["a"] != "ATOM1"
        a = gw["a"][body].astype(float)
        cdf = gw["mu_cdf"][body]
        ax.plot(a, cdf, "k--", lw=1.8, label="limit")
        atom = float(gw["mu_cdf"][~body][0]) if (~body).any() else 0.0
        if atom > 0:
            ax.vlines(1.0, 1.0 - atom, 1.0, colors="k", lw=3.5, label="atom at 1")
    ax.set_xlabel("fitness a")
    ax.set_ylabel("colour mass on [0, a]")
    ax.legend(fontsize=8)


def _draw_atom_mass(ax, tables):
    c = tables["condensation"]
    for eps in np.unique(c["eps"]):
        sel = c["eps"] == eps
        ts = np.unique(c["t"][sel])
        mass = [c["eps_mass"][sel & (c["t"] == t)].mean() for t in ts]
        ell = [c["ell"][sel & (c["t"] == t)].mean() for t in ts]
        line, = ax.plot(ts, mass, marker="o", ms=3, label=f"mass, eps={eps:g}")
        ax.plot(ts, ell, ls="--", color=line.get_color(), label=f"top share, eps={eps:g}")
    ax.set_xscale("log")
    ax.set_xlabel("time")
    ax.set_ylabel("mean mass near fitness 1")
    ax.legend(fontsize=7)


def _draw_fluid(ax, tables):
    f = tables["fluid"]
    first = True
    for s, sel in _per_seed(f):
        order = np.argsort(f["s"][sel])
        xs = f["s"][sel][order]
        ax.plot(xs, f["Yn"][sel][order], color="C0", alpha=0.6,
                label="observed" if first else None)
        ax.plot(xs, f["y_ref"][sel][order], color="C1", alpha=0.6,
                label="logistic reference" if first else None)
        ax.plot(xs, f["lower_bound"][sel][order], color="C2", ls="--", alpha=0.6,
                label="lower bound" if first else None)
        first = False
    ax.set_xlabel("window position s")
    ax.set_ylabel("occupied fraction")
    ax.legend(fontsize=8)


def _draw_hub_share(ax, tables):
    h = tables["hub"]
    for s, sel in _per_seed(h):
        order = np.argsort(h["t"][sel])
        ax.plot(h["t"][sel][order], h["degree_share"][sel][order],
                alpha=0.7, lw=1.0)
    ax.set_xscale("log")
    ax.set_xlabel("time")
    ax.set_ylabel("hub degree share")


def _draw_twocolor(ax, tables):
    tc = tables["twocolor"]
    for s, sel in _per_seed(tc):
        order = np.argsort(tc["t"][sel])
        ax.plot(tc["t"][sel][order], tc["nu"][sel][order], alpha=0.7, lw=1.0)
    ax.set_xscale("log")
    ax.set_xlabel("time")
    ax.set_ylabel("colour-0 cue fraction")


_DRAWERS = {
    "mu_convergence": _draw_mu_convergence,
    "atom_mass": _draw_atom_mass,
    "fluid": _draw_fluid,
    "hub_share": _draw_hub_share,
    "twocolor": _draw_twocolor,
}


def render(spec: FigureSpec) -> str:
    """Render the figure; returns the output path."""
    tables = _route_inputs(spec)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        _DRAWERS[spec.kind](ax, tables)
        ax.set_title(spec.title or spec.kind.replace("_", " "))
        fig.text(0.99, 0.01, f"manifest {_manifest_hash(spec)}",
                 ha="right", va="bottom", fontsize=6, color="0.4")
        fig.tight_layout()
        fig.savefig(spec.output, metadata={"Software": "pacviz"})
        plt.close(fig)
    return spec.output
