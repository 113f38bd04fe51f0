"""Monte Carlo harness comparing LFP, RP and IP over traffic instances on rings.

Every random draw comes from ``SeedSequence(seed, spawn_key=(n, instance,
test, purpose))``, so a cell's outcome depends only on its coordinates and
the master seed, never on scheduling.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .bounds import phi_cycle
from .errors import ConfigError, FormatError
from .packing import _first_fit_colors, intelligent_packing, lfp_order, rp_colors
from .pathsys import PathSystem, route_demands, shortest_system_cycle
from .topology import cycle
from .traffic import MODELS, generate

SCHEMES = ("lfp", "rp", "ip")
DEMANDS, TIES, LFP, RP = range(4)

DESK = (100, 100)
FULL = (100, 10_000)


@dataclass(frozen=True)
class ExperimentConfig:
    sizes: tuple[int, ...]
    model: str = "uniform"
    schemes: tuple[str, ...] = ("lfp", "rp")
    instances: int = DESK[0]
    tests: int = DESK[1]
    seed: int = 0
    tie_policy: str | None = None
    rp_redraw: bool = False
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        object.__setattr__(self, "schemes", tuple(s.lower() for s in self.schemes))
        object.__setattr__(self, "model", self.model.replace("-", "_"))
        if not self.sizes:
            raise ConfigError("no cycle sizes given")
        if min(self.sizes) < 3:
            raise ConfigError("cycle sizes must be >= 3")
        if self.model not in MODELS:
            raise ConfigError(f"unknown traffic model {self.model!r}")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad or not self.schemes:
            raise ConfigError(f"schemes must be drawn from {SCHEMES}, got {self.schemes}")
        if self.instances < 1 or self.tests < 1:
            raise ConfigError("instances and tests must both be >= 1")
        if self.seed < 0:
            raise ConfigError("master seed must be non-negative")
        if self.tie_policy not in (None, "alternating", "random"):
            raise ConfigError(f"unknown tie policy {self.tie_policy!r}")
        if "ip" in self.schemes:
            if self.model != "uniform":
                raise ConfigError("IP needs uniform traffic")
            even = [n for n in self.sizes if n % 2 == 0]
            if even:
                raise ConfigError(f"IP needs odd cycles, got {even}")

    @property
    def ties(self) -> str:
        """Antipodal tie rule in force: alternating for uniform traffic, random otherwise."""
        if self.tie_policy is not None:
            return self.tie_policy
        return "alternating" if self.model == "uniform" else "random"

    def echo(self) -> dict:
        d = asdict(self)
        d["sizes"] = list(self.sizes)
        d["schemes"] = list(self.schemes)
        d["tie_policy"] = self.ties
        del d["workers"]
        return d


@dataclass(frozen=True)
class Cell:
    n: int
    model: str
    scheme: str
    mean: float
    std: float
    min: int
    max: int
    phi: int | None
    samples: int


@dataclass(frozen=True)
class Report:
    config: dict
    cells: tuple[Cell, ...] = field(default=())

    def cell(self, n: int, scheme: str) -> Cell:
        for c in self.cells:
            if c.n == n and c.scheme == scheme:
                return c
        raise KeyError((n, scheme))

    def mean(self, n: int, scheme: str) -> float:
        return self.cell(n, scheme).mean


def stream(seed: int, n: int, instance: int, test: int, purpose: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n, instance, test, purpose)))


@lru_cache(maxsize=64)
def _ip_total(n: int) -> int:
    return intelligent_packing(n)[0].total


def _route(cfg: ExperimentConfig, n: int, demands, rng) -> PathSystem:
    if cfg.model == "uniform":
        return shortest_system_cycle(n, cfg.ties, rng)
    return route_demands(cycle(n), demands, cfg.ties, rng)


def run_instance(cfg: ExperimentConfig, n: int, instance: int) -> dict[str, np.ndarray]:
    """Totals per scheme for every test of one traffic instance."""
    demands = generate(cfg.model, n, stream(cfg.seed, n, instance, 0, DEMANDS))
    per_test_routing = n % 2 == 0 and cfg.ties == "random"
    system = None if per_test_routing else _route(cfg, n, demands, None)
    out = {s: np.empty(cfg.tests, dtype=np.int64) for s in cfg.schemes}
    for t in range(cfg.tests):
        if per_test_routing:
            system = _route(cfg, n, demands, stream(cfg.seed, n, instance, t, TIES))
        for s in cfg.schemes:
            if s == "lfp":
                order = lfp_order(system, stream(cfg.seed, n, instance, t, LFP))
                out[s][t] = _first_fit_colors(system, order).max()
            elif s == "rp":
                out[s][t] = rp_colors(system, stream(cfg.seed, n, instance, t, RP), cfg.rp_redraw).max()
            else:
                out[s][t] = _ip_total(n)
    return out


def _run_size(cfg: ExperimentConfig, n: int) -> dict[str, np.ndarray]:
    parts = [run_instance(cfg, n, i) for i in range(cfg.instances)]
    return {s: np.concatenate([p[s] for p in parts]) for s in cfg.schemes}


def _summarize(cfg: ExperimentConfig, n: int, totals: dict[str, np.ndarray]) -> list[Cell]:
    phi = phi_cycle(n) if cfg.model == "uniform" else None
    cells = []
    for s in cfg.schemes:
        x = totals[s]
        std = float(np.std(x, ddof=1)) if len(x) > 1 else 0.0
        cells.append(Cell(n, cfg.model, s, float(np.mean(x)), std, int(x.min()), int(x.max()), phi, len(x)))
    return cells


def run_experiment(cfg: ExperimentConfig, raw: bool = False):
    """Run every (n, instance, test) cell and aggregate per (n, scheme).

    With ``raw`` also return the per-size sample arrays.
    """
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_run_size, [cfg] * len(cfg.sizes), cfg.sizes))
    else:
        results = [_run_size(cfg, n) for n in cfg.sizes]
    cells = [c for n, tot in zip(cfg.sizes, results) for c in _summarize(cfg, n, tot)]
    report = Report(cfg.echo(), tuple(cells))
    return (report, dict(zip(cfg.sizes, results))) if raw else report


# -- output --------------------------------------------------------------------

CSV_HEADER = ("n", "model", "scheme", "mean", "std", "min", "max", "phi")


def emit_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in report.cells:
        w.writerow([c.n, c.model, c.scheme, f"{c.mean:.2f}", f"{c.std:.2f}", c.min, c.max,
                    "" if c.phi is None else c.phi])
    return buf.getvalue()


def emit_json(report: Report) -> str:
    doc = {"config": report.config, "cells": [asdict(c) for c in report.cells]}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse_json(text: str) -> Report:
    try:
        doc = json.loads(text)
        return Report(doc["config"], tuple(Cell(**c) for c in doc["cells"]))
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"not a report: {exc}") from None
