"""Seeded random sampling with per-check substreams.

Every verification check draws its points from a substream derived from the
run seed and the check's name, so adding or reordering checks never shifts
the samples of the others and reports stay byte-stable across runs.
"""

from __future__ import annotations

import hashlib
from typing import Callable, Sequence

import numpy as np

from .errors import OutOfDomain
from .jets import Point2

Box = tuple[float, float, float, float]  # (xlo, xhi, ylo, yhi)


def substream(seed: int, name: str) -> np.random.Generator:
    """Independent generator for the named check under the given seed."""
    tag = int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:8], "big")
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag]))


def sample_box(rng: np.random.Generator, n: int, box: Box) -> list[Point2]:
    xlo, xhi, ylo, yhi = box
    xs = rng.uniform(xlo, xhi, size=n)
    ys = rng.uniform(ylo, yhi, size=n)
    return [Point2(float(x), float(y)) for x, y in zip(xs, ys)]


def sample_domain(
    rng: np.random.Generator,
    n: int,
    box: Box,
    predicate: Callable[[Point2], bool],
    max_tries: int = 200,
) -> list[Point2]:
    """Rejection-sample n points of the box satisfying the predicate."""
    out: list[Point2] = []
    for _ in range(max_tries):
        need = n - len(out)
        if need <= 0:
            break
        for p in sample_box(rng, max(2 * need, 8), box):
            if predicate(p):
                out.append(p)
                if len(out) == n:
                    break
    if len(out) < n:
        raise OutOfDomain(
            f"could not draw {n} in-domain points from box {box}; "
            f"got {len(out)}"
        )
    return out


def uniform(rng: np.random.Generator, lo: float, hi: float, n: int) -> list[float]:
    return [float(v) for v in rng.uniform(lo, hi, size=n)]
