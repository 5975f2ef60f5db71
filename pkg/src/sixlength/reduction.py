"""Contraction of degree-1 vertices, its randomized inverse, and the Polya urn
that links the six-length of the contracted graph to the original one.

The reduced size is ``n_hat = floor((n sigma2)^(4/3))`` where
``n sigma2 = sum_j (d_j - 1)^2``.  When ``n_hat < n`` the ``n - n_hat``
lowest-numbered degree-1 vertices other than ``w`` are contracted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .degrees import DegreeSequence, stats
from .errors import NotEnoughDegreeOneVertices, RegimeNotApplicable, SixLengthError
from .graph import FunctionalGraph, sample_walks_lazy
from .rng import as_generator


def icbrt(x: int) -> int:
    """Largest integer ``m`` with ``m**3 <= x``."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if x < 2:
        return x
    # integer Newton iteration from an upper bound; decreases monotonically
    m = 1 << -(-x.bit_length() // 3)
    while True:
        nxt = (2 * m + x // (m * m)) // 3
        if nxt >= m:
            break
        m = nxt
    while m**3 > x:
        m -= 1
    while (m + 1) ** 3 <= x:
        m += 1
    return m


def reduced_size(ds: DegreeSequence) -> int:
    """``floor((n sigma2)^(4/3))`` in exact integer arithmetic."""
    ex = stats(ds).excess
    return icbrt(ex**4)


@dataclass(frozen=True)
class ReductionPlan:
    n_hat: int
    removed: tuple[int, ...]
    kept: tuple[int, ...]

    @property
    def active(self) -> bool:
        return bool(self.removed)


def plan_reduction(ds: DegreeSequence, w: int) -> ReductionPlan:
    """Choose the contracted vertices: ascending ids with degree 1, skipping ``w``."""
    n = ds.n
    n_hat = reduced_size(ds)
    if n_hat >= n:
        return ReductionPlan(n_hat, (), tuple(range(n)))
    k = n - n_hat
    eligible = [v for v, d in enumerate(ds.degrees) if d == 1 and v != w]
    if len(eligible) < k:
        raise NotEnoughDegreeOneVertices(
            f"need {k} degree-1 vertices other than w={w}, only {len(eligible)} exist")
    removed = tuple(eligible[:k])
    gone = set(removed)
    kept = tuple(v for v in range(n) if v not in gone)
    return ReductionPlan(n_hat, removed, kept)


@dataclass(frozen=True)
class ReductionResult:
    reduced: FunctionalGraph
    kept: tuple[int, ...]        # kept[i] is the original id of reduced vertex i
    n_hat: int
    reduced_degrees: DegreeSequence
    w: int                       # original id of the protected vertex
    n_original: int

    @property
    def active(self) -> bool:
        return len(self.kept) < self.n_original

    @property
    def w_reduced(self) -> int:
        return self.kept.index(self.w)

    def label_rows(self) -> list[tuple[int, int]]:
        """``(original_id, reduced_id)`` pairs, 1-indexed."""
        return [(orig + 1, i + 1) for i, orig in enumerate(self.kept)]

    def write_label_map(self, path, header: Sequence[str] = ()) -> None:
        with open(path, "w") as fh:
            for line in header:
                fh.write(f"# {line}\n")
            fh.write("original_id,reduced_id\n")
            for a, b in self.label_rows():
                fh.write(f"{a},{b}\n")


def w_reduce(g: FunctionalGraph, ds: DegreeSequence, w: int) -> ReductionResult:
    """Contract ``n - n_hat`` degree-1 vertices of ``g`` (never ``w``).

    A contracted vertex carrying a loop is simply deleted; otherwise its
    in-edge ``x -> v`` and out-edge ``v -> y`` become ``x -> y``.
    """
    if not np.array_equal(g.in_degrees(), ds.array):
        raise SixLengthError("graph in-degrees do not match the degree sequence")
    plan = plan_reduction(ds, w)
    if not plan.active:
        return ReductionResult(g, plan.kept, plan.n_hat, ds, w, ds.n)
    f = g.image.tolist()
    pred: dict[int, int] = {}
    for x, y in enumerate(f):
        if ds.degrees[y] == 1:
            pred[y] = x
    for v in plan.removed:
        y = f[v]
        if y == v:
            continue  # isolated loop: delete edge and vertex
        x = pred[v]
        f[x] = y
        if ds.degrees[y] == 1:
            pred[y] = x
    index = {orig: i for i, orig in enumerate(plan.kept)}
    reduced = FunctionalGraph([index[f[orig]] for orig in plan.kept])
    rd = DegreeSequence([ds.degrees[orig] for orig in plan.kept])
    return ReductionResult(reduced, plan.kept, plan.n_hat, rd, w, ds.n)


def n_extend(g: FunctionalGraph, n: int, rng=None,
             labels: Sequence[int] | None = None) -> FunctionalGraph:
    """Re-inflate ``g`` to a mapping on ``{0..n-1}``.

    ``labels[i]`` is the label of vertex ``i`` of ``g`` (default ``i``).  Missing
    labels are added in increasing order; each becomes a loop with probability
    ``1/(|E|+1)``, otherwise a uniformly chosen edge ``x -> y`` is subdivided
    into ``x -> new -> y``.
    """
    gen = as_generator(rng)
    labels = list(range(g.n)) if labels is None else [int(x) for x in labels]
    if len(set(labels)) != len(labels) or max(labels) >= n:
        raise SixLengthError("labels must be distinct and lie in [0, n)")
    f = [-1] * n
    sources = list(labels)
    for i, lab in enumerate(labels):
        f[lab] = labels[int(g.image[i])]
    present = set(labels)
    missing = [x for x in range(n) if x not in present]
    if not missing:
        return FunctionalGraph(f)
    choices = gen.integers(0, len(sources) + 1 + np.arange(len(missing))).tolist()
    for w, c in zip(missing, choices):
        if c == len(sources):
            f[w] = w
        else:
            x = sources[c]
            f[w] = f[x]
            f[x] = w
        sources.append(w)
    return FunctionalGraph(f)


def extension_law(g: FunctionalGraph, n: int,
                  labels: Sequence[int] | None = None) -> dict[tuple[int, ...], Fraction]:
    """Exact output law of :func:`n_extend` by walking every choice sequence."""
    labels = list(range(g.n)) if labels is None else [int(x) for x in labels]
    f0 = [-1] * n
    for i, lab in enumerate(labels):
        f0[lab] = labels[int(g.image[i])]
    present = set(labels)
    missing = [x for x in range(n) if x not in present]
    law: dict[tuple[int, ...], Fraction] = {}

    def rec(f, sources, idx, prob):
        if idx == len(missing):
            key = tuple(f)
            law[key] = law.get(key, Fraction(0)) + prob
            return
        w = missing[idx]
        p = prob / (len(sources) + 1)
        h = list(f)
        h[w] = w
        rec(h, sources + [w], idx + 1, p)
        for x in sources:
            h = list(f)
            h[w] = f[x]
            h[x] = w
            rec(h, sources + [w], idx + 1, p)

    rec(f0, list(labels), 0, Fraction(1))
    return law


# ---------------------------------------------------------------------------
# Polya urn

@dataclass(frozen=True)
class UrnState:
    red: int
    blue: int
    steps_taken: int = 0


def urn_step(u: UrnState, rng=None) -> UrnState:
    """Draw a ball and return it with one more of the same colour."""
    gen = as_generator(rng)
    if gen.integers(0, u.red + u.blue) < u.red:
        return UrnState(u.red + 1, u.blue, u.steps_taken + 1)
    return UrnState(u.red, u.blue + 1, u.steps_taken + 1)


def _check_urn(a: int, b: int) -> None:
    if a < 0 or b < 0 or a + b < 1:
        raise ValueError("need a, b >= 0 and a + b >= 1")


def urn_run(n: int, a: int, b: int, rng=None) -> int:
    """Number of red balls after ``n`` draws from an ``(a, b)`` urn."""
    _check_urn(a, b)
    gen = as_generator(rng)
    if n == 0:
        return a
    draws = gen.integers(0, a + b + np.arange(n)).tolist()
    red = a
    for u in draws:
        if u < red:
            red += 1
    return red


def urn_run_many(n: int, a, b, rng=None, size: int | None = None) -> np.ndarray:
    """Vectorized :func:`urn_run` over independent urns (``a``, ``b`` broadcast)."""
    gen = as_generator(rng)
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if size is not None:
        a = np.broadcast_to(a, (size,))
        b = np.broadcast_to(b, (size,))
    a, b = np.broadcast_arrays(a, b)
    if (a < 0).any() or (b < 0).any() or (a + b < 1).any():
        raise ValueError("need a, b >= 0 and a + b >= 1")
    red = a.copy()
    total = a + b
    for t in range(n):
        red += gen.integers(0, total + t) < red
    return red


def urn_mean(n: int, a: int, b: int) -> float:
    """``a (1 + n/(a+b))``."""
    return a * (1 + n / (a + b))


def urn_tail_bound(n: int, a: int, b: int, t: float) -> float:
    """Bound on ``P(|R - mu| >= t mu)``: ``2 exp(-t^2 a^2 / (8(a+b)))`` clamped to 1."""
    if t <= 0:
        raise ValueError("t must be positive")
    return min(1.0, 2 * math.exp(-t * t * a * a / (8 * (a + b))))


# ---------------------------------------------------------------------------
# coupling

def coupled_six_length(ds: DegreeSequence, w: int, rng=None, size: int | None = None):
    """Six-length of ``w`` sampled through the reduced graph and the urn.

    Draws the six-length ``s`` of ``w`` in a random mapping with the reduced
    degree sequence, then runs ``n - n_hat`` urn steps from ``s`` red and
    ``n_hat + 1 - s`` blue balls.  Falls back to direct sampling when no
    reduction is needed.
    """
    gen = as_generator(rng)
    if stats(ds).sigma2 == 0:
        raise RegimeNotApplicable("coupling needs sigma2 > 0")
    plan = plan_reduction(ds, w)
    m = 1 if size is None else size
    if not plan.active:
        out = sample_walks_lazy(ds, w, m, gen)[:, 0]
    else:
        rd = DegreeSequence([ds.degrees[v] for v in plan.kept])
        wr = plan.kept.index(w)
        s = sample_walks_lazy(rd, wr, m, gen)[:, 0]
        n_hat = rd.n
        out = urn_run_many(ds.n - n_hat, s, n_hat + 1 - s, gen)
    return int(out[0]) if size is None else out
