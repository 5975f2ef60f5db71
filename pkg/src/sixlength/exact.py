"""Exact law of the six-length and of (six-length, tail-length).

Two backends:

``rational``
    Python integers and ``Fraction``.  ``e_k(d)`` by the one-pass recurrence,
    ``g(k) = k! e_k / <n>_k`` and the survival recursion
    ``P(SL > k) = g(k) - k d_v / (n-k+1) * P(SL > k-1)``.

``float``
    The survival recursion multiplies its error by ``k d_v / (n-k+1)`` at each
    step, which exceeds 1 past ``k ~ n/2``, so the floating backend does not
    use it.  It evaluates the equivalent all-positive form
    ``P(SL > k) = k! e_k(d without v) / <n>_k`` through the normalized
    quantity ``a_j[k] = e_k(d_1..d_j) / C(j, k)``, which obeys

        a_j[k] = (1 - k/j) a_{j-1}[k] + (k/j) d_j a_{j-1}[k-1]

    and is carried in log space.  ``g(k) = a_n[k]`` and
    ``P(SL > k) = a'_{n-1}[k] (n-k)/n`` where ``a'`` skips vertex ``v``.
    Every update is a weighted log-sum-exp of two terms, so relative error
    grows at most linearly in ``n``.  Results are clamped to [0, 1] and the
    number of clamped entries is reported on the table.

Brute-force enumeration over all multiset permutations of the slot list is the
independent oracle.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .degrees import DegreeSequence, stats
from .errors import BudgetExceeded, OracleLimitExceeded
from .graph import all_walk_lengths

RATIONAL_LIMIT = 500
ENUMERATION_BUDGET = 10**7
BACKENDS = ("rational", "float")


def falling(n: int, k: int) -> int:
    """``<n>_k = n (n-1) ... (n-k+1)``."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


def default_kmax(ds: DegreeSequence) -> int:
    """``ceil(8 sqrt(n / sigma2))`` capped at ``n - 1``."""
    st = stats(ds)
    if st.sigma2 == 0:
        return ds.n - 1
    return min(ds.n - 1, math.ceil(8 * math.sqrt(ds.n / st.sigma2_float)))


def _check_backend(backend: str, n: int, limit: int) -> None:
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    if backend == "rational" and n > limit:
        raise OracleLimitExceeded(f"rational backend limited to n <= {limit}, got n={n}")


# ---------------------------------------------------------------------------
# elementary symmetric polynomials and g

def elementary_symmetric_prefix(ds: DegreeSequence, K: int, backend: str = "rational",
                                limit: int = RATIONAL_LIMIT) -> list:
    """``e[k] = sum_{i1<...<ik} prod d_ij`` for ``k = 0..K``.

    Rational backend returns exact ints; float backend returns ``log e[k]``
    (``-inf`` where ``e[k] == 0``).
    """
    if not 0 <= K <= ds.n:
        raise ValueError("need 0 <= K <= n")
    _check_backend(backend, ds.n, limit)
    if backend == "rational":
        e = [1] + [0] * K
        top = 0
        for d in ds.degrees:
            if d == 0:
                continue
            top = min(top + 1, K)
            for k in range(top, 0, -1):
                e[k] += d * e[k - 1]
        return e
    le = np.full(K + 1, -np.inf)
    le[0] = 0.0
    for d in ds.degrees:
        if d == 0:
            continue
        le[1:] = np.logaddexp(le[1:], math.log(d) + le[:-1])
    return le.tolist()


def _normalized_log_esp(degrees: Sequence[int], K: int) -> np.ndarray:
    """``log(e_k(degrees) / C(m, k))`` for ``k = 0..K``, ``m = len(degrees)``."""
    la = np.full(K + 1, -np.inf)
    la[0] = 0.0
    ks = np.arange(1, K + 1, dtype=float)
    with np.errstate(divide="ignore"):
        for j, d in enumerate(degrees, start=1):
            top = min(j, K)
            kk = ks[:top]
            keep = np.log1p(-kk / j) + la[1:top + 1]
            if d:
                grow = np.log(kk * (d / j)) + la[0:top]
                la[1:top + 1] = np.logaddexp(keep, grow)
            else:
                la[1:top + 1] = keep
    return la


def g_table(ds: DegreeSequence, K: int, backend: str = "rational",
            limit: int = RATIONAL_LIMIT) -> list:
    """``g[k] = k! e_k(d) / <n>_k`` for ``k = 0..K``."""
    n = ds.n
    if not 0 <= K <= n:
        raise ValueError("need 0 <= K <= n")
    _check_backend(backend, n, limit)
    if backend == "rational":
        e = elementary_symmetric_prefix(ds, K, "rational", limit)
        return [Fraction(math.factorial(k) * e[k], falling(n, k)) for k in range(K + 1)]
    return np.exp(_normalized_log_esp(ds.degrees, K)).tolist()


# ---------------------------------------------------------------------------
# survival

@dataclass(frozen=True)
class SurvivalTable:
    """``surv[k] = P(SL_n(v) > k)`` for ``k = 0..K``."""

    v: int
    n: int
    surv: tuple
    backend: str
    clamped: int = 0

    @property
    def kmax(self) -> int:
        return len(self.surv) - 1

    def pmf(self) -> list:
        """``P(SL = k)`` for ``k = 1..K`` (index 0 is unused and 0)."""
        s = self.surv
        return [0 * s[0]] + [s[k - 1] - s[k] for k in range(1, len(s))]

    def mean(self):
        """``E[SL] = sum_k P(SL > k)``; exact only when the table reaches ``n-1``."""
        if self.backend == "rational":
            return sum(self.surv, Fraction(0))
        return math.fsum(self.surv)

    def cdf(self, k) -> float:
        """``P(SL <= k)`` for integer ``k`` (1 beyond the table when it is complete)."""
        k = int(math.floor(k))
        if k < 0:
            return 0.0
        if k > self.kmax:
            return 1.0 if self.kmax >= self.n - 1 else math.nan
        return 1.0 - float(self.surv[k])

    def to_csv(self, path, header: Sequence[str] = ()) -> None:
        with open(path, "w") as fh:
            for line in header:
                fh.write(f"# {line}\n")
            fh.write("k,surv\n")
            for k, s in enumerate(self.surv):
                fh.write(f"{k},{_fmt(s)}\n")

    def to_text(self) -> str:
        """Structured text; rationals are rendered ``p/q``."""
        lines = [f"n {self.n}", f"v {self.v}", f"backend {self.backend}",
                 f"kmax {self.kmax}"]
        lines += [f"surv {k} {_fmt(s)}" for k, s in enumerate(self.surv)]
        return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def survival(ds: DegreeSequence, v: int, K: int | None = None, backend: str = "rational",
             limit: int = RATIONAL_LIMIT) -> SurvivalTable:
    """Exact survival function of the six-length of ``v``.

    ``K`` defaults to :func:`default_kmax`.  Entries with ``k >= n`` are 0.
    """
    n = ds.n
    if K is None:
        K = default_kmax(ds)
    if not 0 <= K <= n:
        raise ValueError("need 0 <= K <= n")
    _check_backend(backend, n, limit)
    dv = ds[v]
    Kc = min(K, n - 1)
    if backend == "rational":
        g = g_table(ds, Kc, "rational", limit)
        surv = [Fraction(1)]
        for k in range(1, Kc + 1):
            surv.append(g[k] - Fraction(k * dv, n - k + 1) * surv[k - 1])
        surv += [Fraction(0)] * (K - Kc)
        return SurvivalTable(v, n, tuple(surv), backend)
    others = ds.degrees[:v] + ds.degrees[v + 1:]
    la = _normalized_log_esp(others, Kc)
    k = np.arange(Kc + 1)
    s = np.exp(la) * ((n - k) / n)
    bad = int(((s < 0) | (s > 1)).sum())
    s = np.clip(s, 0.0, 1.0)
    s = np.concatenate([s, np.zeros(K - Kc)])
    return SurvivalTable(v, n, tuple(s.tolist()), backend, clamped=bad)


def sandwich_bounds(ds: DegreeSequence, v: int, k: int, backend: str = "rational",
                    limit: int = RATIONAL_LIMIT):
    """Bounds on ``P(SL > k)`` from ``g(k)`` and ``g(k+1)``, ``1 <= k <= n-1``."""
    n = ds.n
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n-1")
    g = g_table(ds, k + 1, backend, limit)
    dv = ds[v]
    if backend == "rational":
        lower = Fraction(n - k, n - k + (k + 1) * dv) * g[k + 1]
        upper = Fraction(n - k + 1, n - k + 1 + k * dv) * g[k]
    else:
        lower = (n - k) / (n - k + (k + 1) * dv) * g[k + 1]
        upper = (n - k + 1) / (n - k + 1 + k * dv) * g[k]
    return lower, upper


# ---------------------------------------------------------------------------
# joint law

@dataclass(frozen=True)
class JointLaw:
    """``rows[k][j] = P(SL = k, TL = j)`` for ``1 <= k <= K``, ``0 <= j < k``.

    ``rows[0]`` is empty so that ``rows[k]`` indexes by six-length.
    """

    v: int
    n: int
    rows: tuple

    @property
    def kmax(self) -> int:
        return len(self.rows) - 1

    def prob(self, k: int, j: int):
        if 1 <= k <= self.kmax and 0 <= j < k:
            return self.rows[k][j]
        return 0

    def six_pmf(self) -> list:
        return [sum(r, 0 * self.rows[1][0]) if r else 0 for r in self.rows]

    def total(self):
        return sum(sum(r) for r in self.rows if r)

    def items(self) -> Iterator[tuple[int, int, object]]:
        for k, r in enumerate(self.rows):
            for j, p in enumerate(r):
                yield k, j, p

    def __eq__(self, other) -> bool:
        if not isinstance(other, JointLaw):
            return NotImplemented
        return self.n == other.n and self.v == other.v and _rows_equal(self.rows, other.rows)

    __hash__ = None

    def to_csv(self, path, header: Sequence[str] = ()) -> None:
        with open(path, "w") as fh:
            for line in header:
                fh.write(f"# {line}\n")
            fh.write("six,tail,prob\n")
            for k, j, p in self.items():
                fh.write(f"{k},{j},{_fmt(p)}\n")

    def to_text(self) -> str:
        lines = [f"n {self.n}", f"v {self.v}", f"kmax {self.kmax}"]
        lines += [f"p {k} {j} {_fmt(p)}" for k, j, p in self.items()]
        return "\n".join(lines) + "\n"


def _rows_equal(a, b) -> bool:
    # trailing all-zero rows are not significant
    def trim(rows):
        rows = list(rows)
        while rows and rows[-1] and all(p == 0 for p in rows[-1]):
            rows.pop()
        return rows
    a, b = trim(a), trim(b)
    return len(a) == len(b) and all(list(x) == list(y) for x, y in zip(a, b))


def joint_law(ds: DegreeSequence, v: int, K: int | None = None, backend: str = "rational",
              limit: int = RATIONAL_LIMIT) -> JointLaw:
    """Joint law built from the survival table.

    ``P(SL = k, TL = 0) = d_v / (n-k+1) * P(SL > k-1)``; the remaining mass of
    ``P(SL = k)`` is split evenly over ``TL in 1..k-1``.
    """
    n = ds.n
    if K is None:
        K = n
    if not 1 <= K <= n:
        raise ValueError("need 1 <= K <= n")
    tab = survival(ds, v, K, backend, limit)
    s = tab.surv
    dv = ds[v]
    rows: list = [()]
    for k in range(1, K + 1):
        if backend == "rational":
            p0 = Fraction(dv, n - k + 1) * s[k - 1]
            rest = s[k - 1] - s[k] - p0
            rows.append((p0,) + (rest / (k - 1),) * (k - 1) if k > 1 else (p0,))
        else:
            p0 = dv / (n - k + 1) * s[k - 1]
            rest = max(s[k - 1] - s[k] - p0, 0.0)
            rows.append((p0,) + (rest / (k - 1),) * (k - 1) if k > 1 else (p0,))
    return JointLaw(v, n, tuple(rows))


# ---------------------------------------------------------------------------
# brute force

def multiset_permutations(items: Sequence) -> Iterator[tuple]:
    """All distinct orderings of ``items`` in lexicographic order."""
    a = sorted(items)
    m = len(a)
    while True:
        yield tuple(a)
        i = m - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = m - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def family_size(ds: DegreeSequence) -> int:
    """``n! / prod d_i!``."""
    out = math.factorial(ds.n)
    for d in ds.degrees:
        out //= math.factorial(d)
    return out


def enumerate_functions(ds: DegreeSequence, budget: int = ENUMERATION_BUDGET) -> Iterator[tuple]:
    size = family_size(ds)
    if size > budget:
        raise BudgetExceeded(f"{size} functions exceed the enumeration budget {budget}")
    slots = [i for i, d in enumerate(ds.degrees) for _ in range(d)]
    return multiset_permutations(slots)


def walk_counts(ds: DegreeSequence, budget: int = ENUMERATION_BUDGET) -> tuple[list[Counter], int]:
    """Per start vertex, the number of functions with each (six, tail)."""
    counts = [Counter() for _ in range(ds.n)]
    total = 0
    for image in enumerate_functions(ds, budget):
        total += 1
        for v, st in enumerate(all_walk_lengths(image)):
            counts[v][st] += 1
    return counts, total


def law_from_counts(counter: Counter, total: int, v: int, n: int) -> JointLaw:
    rows = [()]
    for k in range(1, n + 1):
        rows.append(tuple(Fraction(counter.get((k, j), 0), total) for j in range(k)))
    return JointLaw(v, n, tuple(rows))


def brute_force_oracle(ds: DegreeSequence, v: int, budget: int = ENUMERATION_BUDGET) -> JointLaw:
    """Exact joint law of (six, tail) at ``v`` by counting every mapping."""
    counter: Counter = Counter()
    total = 0
    for image in enumerate_functions(ds, budget):
        total += 1
        seen = {}
        x = v
        while x not in seen:
            seen[x] = len(seen)
            x = image[x]
        counter[(len(seen), seen[x])] += 1
    return law_from_counts(counter, total, v, ds.n)


def brute_force_all(ds: DegreeSequence, budget: int = ENUMERATION_BUDGET) -> list[JointLaw]:
    """Oracle laws for every start vertex from a single enumeration."""
    counts, total = walk_counts(ds, budget)
    return [law_from_counts(c, total, v, ds.n) for v, c in enumerate(counts)]
