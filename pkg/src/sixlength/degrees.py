"""In-degree sequences: validation, summary statistics, assumption diagnostics
and fixture generators.

Vertices are 0-indexed in the Python API.  Text files use one degree per line
in vertex order, so line ``i`` (1-indexed) holds the degree of vertex ``i-1``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InfeasibleParams, NegativeDegree, SumMismatch
from .rng import as_generator


class DegreeSequence:
    """A validated in-degree sequence ``d`` with ``sum(d) == len(d)``.

    Immutable; the backing array is read-only.
    """

    def __init__(self, d: Iterable[int]):
        arr = np.array(list(d) if not isinstance(d, np.ndarray) else d, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise SumMismatch("degree sequence must be a non-empty 1-d sequence")
        if (arr < 0).any():
            j = int(np.flatnonzero(arr < 0)[0])
            raise NegativeDegree(f"d[{j}] = {int(arr[j])} < 0")
        total = int(arr.sum())
        if total != arr.size:
            raise SumMismatch(f"sum(d) = {total} but n = {arr.size}")
        arr.setflags(write=False)
        self._d = arr

    @property
    def n(self) -> int:
        return int(self._d.size)

    @property
    def array(self) -> np.ndarray:
        return self._d

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """Degrees as Python ints (for exact arithmetic)."""
        return tuple(int(x) for x in self._d)

    @cached_property
    def slot_bounds(self) -> list[int]:
        """Cumulative degrees: vertex ``i`` owns slots ``[b[i]-d[i], b[i])``."""
        return np.cumsum(self._d).tolist()

    @cached_property
    def value_counts(self) -> dict[int, int]:
        """Multiplicity of each distinct degree value."""
        counts = np.bincount(self._d)
        return {int(c): int(m) for c, m in enumerate(counts) if m}

    def __getitem__(self, v: int) -> int:
        return int(self._d[v])

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.degrees)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DegreeSequence):
            return NotImplemented
        return np.array_equal(self._d, other._d)

    def __hash__(self) -> int:
        return hash(self._d.tobytes())

    def __repr__(self) -> str:
        if self.n <= 12:
            return f"DegreeSequence({list(self.degrees)})"
        return f"DegreeSequence(n={self.n}, delta={int(self._d.max())})"


def make_degree_sequence(d: Iterable[int]) -> DegreeSequence:
    """Validate ``d`` against ``sum(d) == n`` and non-negativity."""
    return DegreeSequence(d)


@dataclass(frozen=True)
class DegreeStats:
    n: int
    delta: int
    m2: int
    m3: int
    sigma2: Fraction
    num_deg1: int
    num_deg0: int

    @property
    def sigma2_float(self) -> float:
        return float(self.sigma2)

    @property
    def excess(self) -> int:
        """``n * sigma2 == sum((d_j - 1)**2)``, always an integer."""
        return self.m2 - self.n

    @property
    def scale(self) -> float:
        """Natural length scale ``sqrt(n / sigma2)`` (inf when sigma2 == 0)."""
        if self.sigma2 == 0:
            return math.inf
        return math.sqrt(self.n / self.sigma2_float)


def stats(ds: DegreeSequence) -> DegreeStats:
    counts = ds.value_counts
    m2 = sum(c * c * m for c, m in counts.items())
    m3 = sum(c**3 * m for c, m in counts.items())
    return DegreeStats(
        n=ds.n,
        delta=max(counts),
        m2=m2,
        m3=m3,
        sigma2=Fraction(m2, ds.n) - 1,
        num_deg1=counts.get(1, 0),
        num_deg0=counts.get(0, 0),
    )


@dataclass(frozen=True)
class Condition:
    """Finite-n diagnostic for one asymptotic condition.

    ``ratio`` is lhs/rhs; the condition's family statement asks for it to go
    to 0 (``want="small"``) or to infinity (``want="large"``), or stay bounded.
    """

    name: str
    lhs: float
    rhs: float
    ratio: float
    want: str
    degenerate: bool = False


@dataclass(frozen=True)
class AssumptionReport:
    n: int
    sigma2: float
    delta: int
    conditions: tuple[Condition, ...]

    def __getitem__(self, name: str) -> Condition:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def rows(self) -> list[dict]:
        return [
            dict(condition=c.name, lhs=c.lhs, rhs=c.rhs, ratio=c.ratio, want=c.want,
                 degenerate=c.degenerate)
            for c in self.conditions
        ]


def _ratio(a: float, b: float) -> float:
    if b == 0:
        return math.inf if a > 0 else math.nan
    return a / b


def check_assumptions(ds: DegreeSequence) -> AssumptionReport:
    """Evaluate the growth conditions on sigma2 and Delta at this single n.

    Purely diagnostic.  Each entry compares the two sides of an o/omega/O
    statement; only the trend of the ratio across a family is meaningful.
    """
    st = stats(ds)
    n = st.n
    s2 = st.sigma2_float
    ns2 = float(st.excess)
    logn = math.log(n) if n > 1 else 0.0
    root = math.sqrt(ns2)
    root_b = math.sqrt(ns2 / logn**3) if logn > 0 else math.inf
    flat = s2 == 0
    conds = (
        Condition("A1_upper", s2, n, _ratio(s2, n), "small"),
        Condition("A1_lower", s2, 1 / n, ns2, "large", degenerate=flat),
        Condition("A2", st.delta, root, _ratio(st.delta, root), "small", degenerate=flat),
        Condition("B1_upper", s2, n / logn**3 if logn else math.inf,
                  _ratio(s2 * logn**3, n), "small"),
        Condition("B1_lower", s2, 1 / n, ns2, "large", degenerate=flat),
        Condition("B2", st.delta, root_b, _ratio(st.delta, root_b), "small", degenerate=flat),
        Condition("A_plus", s2, logn / n ** (1 / 3), _ratio(s2 * n ** (1 / 3), logn),
                  "large", degenerate=flat),
        Condition("A_minus", s2, logn**2 / n ** (1 / 3), _ratio(s2 * n ** (1 / 3), logn**2),
                  "bounded"),
    )
    return AssumptionReport(n=n, sigma2=s2, delta=st.delta, conditions=conds)


GENERATORS = ("two_zero", "permutation", "binary_mix", "multinomial", "custom")


def generate(kind: str, n: int, params: Mapping | None = None, rng=None) -> DegreeSequence:
    """Build a test-fixture degree sequence.

    ``two_zero``     n/2 twos and n/2 zeros (n even).
    ``permutation``  all ones.
    ``binary_mix``   ``params={"twos": a, "threes": b}``; zeros are added to
                     balance the sum (``a + 2b`` of them) and ones fill the rest.
                     Explicit ``zeros``/``ones`` are checked, not trusted.
    ``multinomial``  in-degrees of a uniform random mapping (n balls, n boxes).
    ``custom``       ``params={"degrees": [...]}``.

    With ``rng=None`` the deterministic generators return the canonical
    arrangement (larger degrees first); with an rng the positions are shuffled.
    """
    params = dict(params or {})
    if n < 1:
        raise InfeasibleParams("n must be positive")
    if kind == "two_zero":
        if n % 2:
            raise InfeasibleParams("two_zero needs even n")
        d = np.array([2] * (n // 2) + [0] * (n // 2), dtype=np.int64)
    elif kind == "permutation":
        d = np.ones(n, dtype=np.int64)
    elif kind == "binary_mix":
        twos = int(params.get("twos", 0))
        threes = int(params.get("threes", 0))
        zeros = twos + 2 * threes
        ones = n - zeros - twos - threes
        if min(twos, threes, ones) < 0:
            raise InfeasibleParams(f"binary_mix twos={twos} threes={threes} does not fit n={n}")
        for key, val in (("zeros", zeros), ("ones", ones)):
            if key in params and int(params[key]) != val:
                raise InfeasibleParams(f"{key}={params[key]} inconsistent with sum(d) == n")
        d = np.array([3] * threes + [2] * twos + [1] * ones + [0] * zeros, dtype=np.int64)
    elif kind == "multinomial":
        gen = as_generator(rng)
        return DegreeSequence(gen.multinomial(n, np.full(n, 1.0 / n)))
    elif kind == "custom":
        d = np.asarray(params["degrees"], dtype=np.int64)
        if d.size != n:
            raise InfeasibleParams(f"custom degrees have length {d.size}, expected {n}")
    else:
        raise InfeasibleParams(f"unknown generator {kind!r}; choose from {GENERATORS}")
    if rng is not None and kind != "custom":
        d = as_generator(rng).permutation(d)
    return DegreeSequence(d)


def parse_generator_spec(spec: str, n: int | None, rng=None) -> DegreeSequence:
    """Resolve ``file:path``, ``generator:kind[:k=v,...]`` or a bare path.

    Generated sequences keep the canonical arrangement unless the string sets
    ``shuffle=1``; ``rng`` drives the shuffle and the multinomial draw.
    """
    if spec.startswith("generator:"):
        body = spec[len("generator:"):]
        kind, _, rest = body.partition(":")
        params: dict = {}
        for item in filter(None, rest.split(",")):
            key, _, val = item.partition("=")
            params[key.strip()] = int(val)
        if n is None:
            raise InfeasibleParams("generator specs need n")
        shuffle = bool(params.pop("shuffle", 0))
        return generate(kind, n, params, rng if shuffle or kind == "multinomial" else None)
    path = spec[len("file:"):] if spec.startswith("file:") else spec
    return read_degrees(path)


def read_degrees(path: str | Path) -> DegreeSequence:
    """Read a one-integer-per-line file, or the first column of a CSV.

    Lines starting with ``#`` and a non-numeric header row are skipped.
    """
    values = []
    with open(path, newline="") as fh:
        for row in csv.reader(line for line in fh if not line.lstrip().startswith("#")):
            if not row or not row[0].strip():
                continue
            cell = row[0].strip()
            try:
                values.append(int(cell))
            except ValueError:
                if values:
                    raise
    return DegreeSequence(values)


def write_degrees(ds: DegreeSequence, path: str | Path, header: Sequence[str] = (),
                  column: str | None = None) -> None:
    """One integer per line; with ``column`` a named CSV column is written instead."""
    with open(path, "w") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        if column:
            fh.write(f"{column}\n")
        fh.write("\n".join(str(x) for x in ds.degrees))
        fh.write("\n")
