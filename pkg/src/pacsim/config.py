"""Plain-text key=value run configuration.

A config file is a sequence of `key=value` lines ('#' starts a comment).
Unknown keys are hard errors.  Every run writes a manifest echoing the fully
resolved configuration (including a format-version key), and re-running from
a manifest reproduces the outputs byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .distributions import FitnessDistribution, RDistribution

FORMAT_VERSION = "1"


class ConfigError(Exception):
    pass


_DEFAULTS: dict[str, str] = {
    "format.version": FORMAT_VERSION,
    "model.n": "1000",
    "model.R.kind": "deterministic",
    "model.R.value": "3",
    "model.R.pmf": "",
    "model.F.kind": "uniform01",
    "model.F.p1": "0.5",
    "model.alpha": "0",
    "model.V.kind": "deterministic",
    "model.V.value": "1",
    "run.seed": "1",
    "run.replicates": "1",
    "run.threads": "1",
    "run.checkpoints": "",
    "out.dir": "out",
    "grid.points": "101",
    "eps.list": "0.1,0.05,0.02,0.01",
    "window.c": "0.5",
    "window.C": "13",
    "gw.reps": "100000",
    "gw.gen_cap": "200",
    "gw.pop_cap": "1000000",
    "gw.rooting": "cue_root",
    "backward.n_list": "",
}


@dataclass
class RunConfig:
    """Fully resolved configuration (raw strings plus typed accessors)."""

    raw: dict[str, str] = field(default_factory=lambda: dict(_DEFAULTS))

    def set(self, key: str, value: str) -> None:
        if key not in _DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
        self.raw[key] = value

    def _int(self, key: str, minimum: Optional[int] = None) -> int:
        try:
            v = int(self.raw[key])
        except ValueError as e:
            raise ConfigError(f"{key}: not an integer: {self.raw[key]!r}") from e
        if minimum is not None and v < minimum:
            raise ConfigError(f"{key}: must be >= {minimum}")
        return v

    def _float(self, key: str) -> float:
        try:
            return float(self.raw[key])
        except ValueError as e:
            raise ConfigError(f"{key}: not a number: {self.raw[key]!r}") from e

    @property
    def n(self) -> int:
        return self._int("model.n", 1)

    @property
    def seed(self) -> int:
        return self._int("run.seed", 0)

    @property
    def replicates(self) -> int:
        return self._int("run.replicates", 1)

    @property
    def threads(self) -> int:
        return self._int("run.threads", 1)

    @property
    def out_dir(self) -> Path:
        return Path(self.raw["out.dir"])

    @property
    def alpha(self) -> float:
        a = self._float("model.alpha")
        if a < 0:
            raise ConfigError("model.alpha: must be >= 0")
        return a

    @property
    def window(self) -> tuple[float, float]:
        c, C = self._float("window.c"), self._float("window.C")
        if not 0 < c < C:
            raise ConfigError("window: need 0 < window.c < window.C")
        return c, C

    @property
    def grid_points(self) -> int:
        return self._int("grid.points", 2)

    @property
    def gw_reps(self) -> int:
        return self._int("gw.reps", 1)

    @property
    def gw_caps(self) -> tuple[int, int]:
        return self._int("gw.gen_cap", 1), self._int("gw.pop_cap", 1)

    @property
    def gw_rooting(self) -> str:
        r = self.raw["gw.rooting"]
        if r not in ("cue_root", "generic_root"):
            raise ConfigError(f"gw.rooting: unknown rooting {r!r}")
        return r

    def _parse_pmf(self, text: str) -> list[tuple[int, float]]:
        out = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                v, p = part.split(":")
                out.append((int(v), float(p)))
            except ValueError as e:
                raise ConfigError(f"bad pmf entry {part!r} (want value:prob)") from e
        return out

    def _distribution(self, prefix: str) -> RDistribution:
        kind = self.raw[f"{prefix}.kind"]
        try:
            if kind == "deterministic":
                return RDistribution.deterministic(self._int(f"{prefix}.value", 1))
            if kind in ("pmf", "two_point"):
                pmf_key = f"{prefix}.pmf"
                if pmf_key not in self.raw:
                    raise ConfigError(f"{prefix}.kind={kind} requires {pmf_key}")
                pmf = self._parse_pmf(self.raw[pmf_key])
                if kind == "two_point" and len(pmf) != 2:
                    raise ConfigError(f"{prefix}.pmf: two_point needs exactly 2 atoms")
                if not pmf:
                    raise ConfigError(f"{pmf_key} is empty")
                return RDistribution.from_pmf(pmf)
        except ValueError as e:
            raise ConfigError(f"{prefix}: {e}") from e
        raise ConfigError(f"{prefix}.kind: unknown kind {kind!r}")

    def r_distribution(self) -> RDistribution:
        return self._distribution("model.R")

    def v_distribution(self) -> RDistribution:
        if self.raw["model.V.kind"] != "deterministic":
            raise ConfigError("model.V.kind: only deterministic V is configurable")
        try:
            return RDistribution.deterministic(self._int("model.V.value", 1))
        except ValueError as e:
            raise ConfigError(f"model.V: {e}") from e

    def f_distribution(self) -> FitnessDistribution:
        kind = self.raw["model.F.kind"]
        try:
            if kind == "uniform01":
                return FitnessDistribution("uniform01")
            if kind == "two_point":
                return FitnessDistribution("two_point", p1=self._float("model.F.p1"))
        except ValueError as e:
            raise ConfigError(f"model.F: {e}") from e
        raise ConfigError(f"model.F.kind: unknown kind {kind!r}")

    def checkpoints(self) -> list[int]:
        """Configured checkpoints, or powers of 10 up to n (plus n) by default."""
        text = self.raw["run.checkpoints"].strip()
        n = self.n
        if text:
            try:
                pts = sorted({int(x) for x in text.split(",") if x.strip()})
            except ValueError as e:
                raise ConfigError(f"run.checkpoints: {e}") from e
            if not pts or pts[0] < 1 or pts[-1] > n:
                raise ConfigError("run.checkpoints: must lie in [1, n]")
            return pts
        pts = []
        t = 1
        while t <= n:
            pts.append(t)
            t *= 10
        if pts[-1] != n:
            pts.append(n)
        return pts

    def grid(self) -> list[float]:
        p = self.grid_points
        return [round(i / (p - 1), 12) for i in range(p)]

    def eps_list(self) -> list[float]:
        try:
            out = [float(x) for x in self.raw["eps.list"].split(",") if x.strip()]
        except ValueError as e:
            raise ConfigError(f"eps.list: {e}") from e
        if not out or any(not 0 < e <= 1 for e in out):
            raise ConfigError("eps.list: values must lie in (0, 1]")
        return out

    def n_list(self) -> list[int]:
        text = self.raw["backward.n_list"].strip()
        if not text:
            return [self.n]
        try:
            out = sorted({int(x) for x in text.split(",") if x.strip()})
        except ValueError as e:
            raise ConfigError(f"backward.n_list: {e}") from e
        if not out or out[0] < 1 or out[-1] > self.n:
            raise ConfigError("backward.n_list: must lie in [1, model.n]")
        return out

    def validate(self) -> None:
        """Force evaluation of every typed accessor."""
        if self.raw["format.version"] != FORMAT_VERSION:
            raise ConfigError(f"format.version: expected {FORMAT_VERSION}")
        self.r_distribution()
        self.v_distribution()
        self.f_distribution()
        self.checkpoints()
        self.grid()
        self.eps_list()
        self.n_list()
        self.window
        self.alpha
        _ = (self.seed, self.replicates, self.threads,
             self.gw_reps, self.gw_caps, self.gw_rooting)

    def manifest_text(self) -> str:
        lines = [f"{k}={self.raw[k]}" for k in sorted(self.raw)]
        return "\n".join(lines) + "\n"


def parse_config_text(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    cfg = base if base is not None else RunConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        cfg.set(key.strip(), value.strip())
    return cfg


def load_config(path: Optional[str], overrides: list[str]) -> RunConfig:
    """defaults < config file < --set overrides (in the order given)."""
    cfg = RunConfig()
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        cfg = parse_config_text(text, cfg)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        cfg.set(key.strip(), value.strip())
    return cfg
