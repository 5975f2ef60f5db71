"""Functional graphs with a fixed in-degree sequence.

A graph is stored as its image array, ``image[v] == f(v)``.  Uniform sampling
from the set of mappings with in-degrees ``d`` shuffles the slot list in which
vertex ``i`` appears ``d[i]`` times: each mapping corresponds to exactly one
arrangement of that multiset, and a uniform shuffle is uniform over distinct
arrangements.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .degrees import DegreeSequence
from .errors import SixLengthError
from .rng import as_generator


class FunctionalGraph:
    """Mapping ``f: {0..n-1} -> {0..n-1}``, immutable."""

    def __init__(self, image: Iterable[int]):
        arr = np.array(list(image) if not isinstance(image, np.ndarray) else image,
                       dtype=np.int64)
        n = arr.size
        if arr.ndim != 1 or n == 0:
            raise SixLengthError("image must be a non-empty 1-d sequence")
        if arr.min() < 0 or arr.max() >= n:
            raise SixLengthError("image values must lie in [0, n)")
        arr.setflags(write=False)
        self._image = arr

    @property
    def n(self) -> int:
        return int(self._image.size)

    @property
    def image(self) -> np.ndarray:
        return self._image

    def __call__(self, v: int) -> int:
        return int(self._image[v])

    def in_degrees(self) -> np.ndarray:
        return np.bincount(self._image, minlength=self.n)

    def degree_sequence(self) -> DegreeSequence:
        return DegreeSequence(self.in_degrees())

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self._image)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionalGraph):
            return NotImplemented
        return np.array_equal(self._image, other._image)

    def __hash__(self) -> int:
        return hash(self._image.tobytes())

    def __repr__(self) -> str:
        if self.n <= 12:
            return f"FunctionalGraph({list(self.as_tuple())})"
        return f"FunctionalGraph(n={self.n})"


@dataclass(frozen=True)
class WalkLengths:
    """Six-length, tail-length and cycle-length of a start vertex."""

    six: int
    tail: int

    @property
    def cycle(self) -> int:
        return self.six - self.tail

    def __iter__(self):
        return iter((self.six, self.tail, self.cycle))


def sample_uniform(ds: DegreeSequence, rng=None) -> FunctionalGraph:
    """Uniform element of the mappings with in-degree sequence ``ds``."""
    slots = np.repeat(np.arange(ds.n, dtype=np.int64), ds.array)
    return FunctionalGraph(as_generator(rng).permutation(slots))


def iterate(g: FunctionalGraph, v: int, k: int) -> int:
    """``f^k(v)``; ``k == 0`` returns ``v``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    image = g.image
    for _ in range(k):
        v = image[v]
    return int(v)


def walk_lengths(g: FunctionalGraph, v: int) -> WalkLengths:
    image = g.image
    seen: dict[int, int] = {}
    x = int(v)
    while x not in seen:
        seen[x] = len(seen)
        x = int(image[x])
    return WalkLengths(six=len(seen), tail=seen[x])


def all_walk_lengths(image: Sequence[int]) -> list[tuple[int, int]]:
    """(six, tail) for every start vertex of a small mapping, plain lists."""
    out = []
    for v in range(len(image)):
        seen = {}
        x = v
        while x not in seen:
            seen[x] = len(seen)
            x = image[x]
        out.append((len(seen), seen[x]))
    return out


def _lazy_walk(bounds: list[int], n: int, v: int, gen: np.random.Generator,
               chunk: int) -> tuple[int, int]:
    # Sparse Fisher-Yates over the virtual slot array [0, n): position t is
    # fixed at draw t, so only swapped-out values need remembering.
    swapped: dict[int, int] = {}
    on_path = {v: 0}
    t = 0
    while True:
        width = min(chunk, n - t)
        draws = gen.integers(0, n - np.arange(t, t + width)).tolist()
        for off in draws:
            r = t + off
            slot = swapped.get(r, r)
            if r != t:
                swapped[r] = swapped.get(t, t)
            t += 1
            u = bisect_right(bounds, slot)
            hit = on_path.get(u)
            if hit is not None:
                return t, hit
            on_path[u] = t
        chunk *= 2


def _default_chunk(ds: DegreeSequence) -> int:
    # about one scale length of draws per request
    ex = int((ds.array.astype(np.int64) ** 2).sum()) - ds.n
    if ex <= 0:
        return 64
    return max(16, min(4096, int((ds.n * ds.n / ex) ** 0.5)))


def sample_walk_lazy(ds: DegreeSequence, v: int, rng=None) -> WalkLengths:
    """Walk from ``v`` in a uniform random mapping without building it.

    Each step reveals ``f`` at the current vertex by drawing one of the still
    unconsumed slots uniformly; the walk stops at the first vertex already on
    the path.  Expected cost is proportional to the six-length.
    """
    gen = as_generator(rng)
    six, tail = _lazy_walk(ds.slot_bounds, ds.n, int(v), gen, _default_chunk(ds))
    return WalkLengths(six, tail)


def sample_walks_lazy(ds: DegreeSequence, v: int, size: int, rng=None) -> np.ndarray:
    """``size`` independent lazy walks from ``v``; array of shape (size, 2) = (six, tail)."""
    gen = as_generator(rng)
    bounds, n, chunk = ds.slot_bounds, ds.n, _default_chunk(ds)
    out = np.empty((size, 2), dtype=np.int64)
    for i in range(size):
        out[i] = _lazy_walk(bounds, n, int(v), gen, chunk)
    return out


def sample_walks_full(ds: DegreeSequence, v: int, size: int, rng=None) -> np.ndarray:
    """Same as :func:`sample_walks_lazy` but materializing every graph."""
    gen = as_generator(rng)
    out = np.empty((size, 2), dtype=np.int64)
    for i in range(size):
        w = walk_lengths(sample_uniform(ds, gen), v)
        out[i] = (w.six, w.tail)
    return out


def write_graph_csv(g: FunctionalGraph, path: str | Path, header: Sequence[str] = ()) -> None:
    """Edge list ``v,f(v)`` with 1-indexed vertices."""
    with open(path, "w") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        for v, fv in enumerate(g.image.tolist()):
            fh.write(f"{v + 1},{fv + 1}\n")


def read_graph_csv(path: str | Path) -> FunctionalGraph:
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            a, b = line.split(",")[:2]
            try:
                pairs.append((int(a), int(b)))
            except ValueError:
                continue  # header row
    pairs.sort()
    if [p[0] for p in pairs] != list(range(1, len(pairs) + 1)):
        raise SixLengthError("graph file must list every vertex 1..n exactly once")
    return FunctionalGraph([b - 1 for _, b in pairs])
