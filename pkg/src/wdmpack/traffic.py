"""Demand generators: uniform, full-random and quasi-random traffic."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, InvalidSizeError

MODELS = ("uniform", "full_random", "quasi_random")


@dataclass(frozen=True)
class DemandSet:
    """Unordered demand pairs ``(a, b)`` with ``a < b``, in generation order."""
    node_count: int
    demands: tuple[tuple[int, int], ...]
    model: str
    seed: int | None = None

    def __len__(self):
        return len(self.demands)

    def __iter__(self):
        return iter(self.demands)

    def as_array(self) -> np.ndarray:
        return np.array(self.demands, dtype=np.int64).reshape(-1, 2)


def _check(n: int):
    if n < 2:
        raise InvalidSizeError(f"traffic needs n >= 2 nodes, got {n}")


def _pairs(n: int) -> np.ndarray:
    a, b = np.triu_indices(n, k=1)
    return np.stack([a, b], axis=1).astype(np.int64)


def random_pairs(n: int, count: int, rng) -> np.ndarray:
    """``count`` distinct-endpoint pairs drawn uniformly with replacement."""
    rng = np.random.default_rng(rng)
    return _pairs(n)[rng.integers(0, n * (n - 1) // 2, size=count)]


def _demand_set(n, arr, model, seed) -> DemandSet:
    return DemandSet(n, tuple(map(tuple, arr.tolist())), model, seed)


def uniform(n: int) -> DemandSet:
    _check(n)
    return _demand_set(n, _pairs(n), "uniform", None)


def full_random(n: int, seed=None) -> DemandSet:
    _check(n)
    return _demand_set(n, random_pairs(n, n * n, seed), "full_random", _seed_tag(seed))


def quasi_random(n: int, seed=None) -> DemandSet:
    _check(n)
    arr = np.concatenate([_pairs(n), random_pairs(n, n, seed)])
    return _demand_set(n, arr, "quasi_random", _seed_tag(seed))


def generate(model: str, n: int, seed=None) -> DemandSet:
    model = model.replace("-", "_")
    if model == "uniform":
        return uniform(n)
    if model == "full_random":
        return full_random(n, seed)
    if model == "quasi_random":
        return quasi_random(n, seed)
    raise FormatError(f"unknown traffic model {model!r}")


def _seed_tag(seed):
    return seed if isinstance(seed, int) else None


# -- file format --------------------------------------------------------------

def format_demands(ds: DemandSet) -> str:
    seed = "-" if ds.seed is None else str(ds.seed)
    return f"{ds.node_count} {ds.model} {seed}\n" + "".join(f"{a} {b}\n" for a, b in ds.demands)


def parse_demands(text: str) -> DemandSet:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 3:
        raise FormatError("first line must be `n model seed`")
    n_tok, model, seed_tok = rows[0]
    if model not in MODELS:
        raise FormatError(f"unknown traffic model {model!r}")
    try:
        n = int(n_tok)
        seed = None if seed_tok == "-" else int(seed_tok)
        pairs = [(int(r[0]), int(r[1])) for r in rows[1:] if len(r) == 2 or _bad(r)]
    except ValueError as exc:
        raise FormatError(f"bad demand file: {exc}") from None
    out = []
    for a, b in pairs:
        if a == b or not (0 <= a < n and 0 <= b < n):
            raise FormatError(f"bad demand {a} {b} on {n} nodes")
        out.append((min(a, b), max(a, b)))
    return DemandSet(n, tuple(out), model, seed)


def _bad(row):
    raise FormatError(f"expected `a b`, got {' '.join(row)!r}")


def load_demands(path: str | Path) -> DemandSet:
    return parse_demands(Path(path).read_text())
