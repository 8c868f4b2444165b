"""The graph inverse semigroup as path pairs.

Nonzero elements are pairs ``(alpha, beta)`` of finite paths with a common
range vertex; the idempotent ``(alpha, alpha)`` is identified with ``alpha``
and a vertex ``v`` with ``(v, v)``.  ``ZERO`` is the zero element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numba
import numpy as np

from .graph import FinitePath, Graph, GraphError, enumerate_paths

__all__ = [
    "ZERO",
    "Zero",
    "PathPair",
    "pair",
    "idempotent",
    "multiply",
    "involute",
    "idempotent_meet",
    "in_Sn",
    "enumerate_elements",
    "product_table",
    "verify_inverse_semigroup",
    "InverseSemigroupReport",
]


class Zero:
    """The zero of the semigroup.  Use the ``ZERO`` singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO"

    def __str__(self):
        return "z"

    def __reduce__(self):
        return (Zero, ())


ZERO = Zero()


@dataclass(frozen=True, slots=True)
class PathPair:
    alpha: FinitePath
    beta: FinitePath
    graph: Graph = field(compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.alpha.end != self.beta.end:
            raise GraphError(f"r({self.alpha}) != r({self.beta})")

    @property
    def is_idempotent(self) -> bool:
        return self.alpha == self.beta

    def __str__(self):
        return f"({self.alpha},{self.beta})"


Element = Union[PathPair, Zero]


def pair(g: Graph, alpha: FinitePath, beta: FinitePath) -> PathPair:
    return PathPair(alpha, beta, g)


def idempotent(g: Graph, alpha: FinitePath) -> PathPair:
    return PathPair(alpha, alpha, g)


def _same_graph(s: PathPair, t: PathPair):
    if s.graph is not t.graph and s.graph != t.graph:
        raise GraphError("path pairs over different graphs")


def multiply(s: Element, t: Element) -> Element:
    if s is ZERO or t is ZERO:
        return ZERO
    _same_graph(s, t)
    b1, a2 = s.beta, t.alpha
    if b1.is_prefix_of(a2):
        # (alpha, alpha')(alpha' mu, beta') = (alpha mu, beta')
        return PathPair(s.alpha + a2.strip_prefix(b1), t.beta, s.graph)
    if a2.is_prefix_of(b1):
        # (alpha, alpha' mu)(alpha', beta) = (alpha, beta mu)
        return PathPair(s.alpha, t.beta + b1.strip_prefix(a2), s.graph)
    return ZERO


def involute(s: Element) -> Element:
    if s is ZERO:
        return ZERO
    return PathPair(s.beta, s.alpha, s.graph)


def idempotent_meet(a: Union[FinitePath, Zero], b: Union[FinitePath, Zero]):
    """Product of two idempotents given as paths: the longer one if comparable."""
    if a is ZERO or b is ZERO:
        return ZERO
    if b.is_prefix_of(a):
        return a
    if a.is_prefix_of(b):
        return b
    return ZERO


def in_Sn(s: Element, n: int) -> bool:
    """Membership in the subsemigroup of pairs (alpha mu, beta mu), l(alpha)=l(beta)<=n."""
    if s is ZERO:
        return True
    a, b = s.alpha, s.beta
    if len(a) != len(b):
        return False
    if len(a) <= n:
        return True
    return a.edges[n:] == b.edges[n:]


def enumerate_elements(g: Graph, max_len: int, cutoff: int) -> list:
    """Pairs with components of length <= max_len and indices < cutoff, then ZERO."""
    paths = enumerate_paths(g, None, max_len, cutoff)
    out = [PathPair(a, b, g) for a in paths for b in paths if a.end == b.end]
    out.append(ZERO)
    return out


def product_table(elements: list, product: Callable = multiply):
    """Square table of products; entries are elements (not indices)."""
    return [[product(s, t) for t in elements] for s in elements]


@numba.njit(cache=True)
def _associativity_kernel(table, n, max_hits):
    # Entries >= n are products outside the element set; such triples are skipped.
    hits = np.empty((max_hits, 3), dtype=np.int64)
    count = 0
    skipped = 0
    for i in range(n):
        for j in range(n):
            st = table[i, j]
            if st >= n:
                skipped += n
                continue
            for k in range(n):
                tu = table[j, k]
                if tu >= n:
                    skipped += 1
                    continue
                if table[st, k] != table[i, tu]:
                    if count < max_hits:
                        hits[count, 0] = i
                        hits[count, 1] = j
                        hits[count, 2] = k
                    count += 1
    return hits[:min(count, max_hits)], count, skipped


@dataclass
class InverseSemigroupReport:
    elements: int
    triples_checked: int = 0
    triples_skipped: int = 0
    associativity_violations: list = field(default_factory=list)
    inverse_uniqueness_violations: list = field(default_factory=list)
    truncated: Optional[str] = None

    @property
    def ok(self) -> bool:
        return (not self.associativity_violations
                and not self.inverse_uniqueness_violations)

    def to_json(self) -> dict:
        return {
            "elements": self.elements,
            "triples_checked": self.triples_checked,
            "triples_skipped": self.triples_skipped,
            "associativity_violations": [[str(x) for x in v]
                                         for v in self.associativity_violations],
            "inverse_uniqueness_violations": [[str(x) for x in v]
                                              for v in self.inverse_uniqueness_violations],
            "truncated": self.truncated,
        }


def verify_inverse_semigroup(g: Graph, max_len: int, cutoff: int,
                             product: Callable = multiply,
                             star: Callable = involute,
                             max_elements: int = 4000,
                             max_violations: int = 50) -> InverseSemigroupReport:
    """Exhaustively check associativity and uniqueness of inverses.

    The element set is ``enumerate_elements(g, max_len, cutoff)``.  A triple is
    skipped when ``st`` or ``tu`` falls outside the set; the count is reported.
    ``product``/``star`` can be swapped out for mutation testing.
    """
    elems = enumerate_elements(g, max_len, cutoff)
    report = InverseSemigroupReport(len(elems))
    if len(elems) > max_elements:
        report.truncated = (f"{len(elems)} elements exceed the limit of "
                            f"{max_elements}; only the first {max_elements} checked")
        elems = elems[:max_elements]
        report.elements = len(elems)
    n = len(elems)
    index = {x: i for i, x in enumerate(elems)}
    extra: dict = {}
    outside: list = []

    def ident(x):
        i = index.get(x)
        if i is not None:
            return i
        i = extra.get(x)
        if i is None:
            i = n + len(outside)
            extra[x] = i
            outside.append(x)
        return i

    table = np.empty((n, n), dtype=np.int64)
    for i, s in enumerate(elems):
        row = table[i]
        for j, t in enumerate(elems):
            row[j] = ident(product(s, t))

    def element(i):
        return elems[i] if i < n else outside[i - n]

    table = table.astype(np.int32) if n + len(outside) < 2**31 else table
    hits, count, skipped = _associativity_kernel(table, n, max_violations)
    report.triples_skipped = int(skipped)
    report.triples_checked = n ** 3 - report.triples_skipped
    for i, j, k in hits:
        report.associativity_violations.append(
            (elems[i], elems[j], elems[k],
             element(table[table[i, j], k]), element(table[i, table[j, k]])))

    cols = np.arange(n)
    for i, s in enumerate(elems):
        st = table[i]
        inside = st < n
        ok = np.zeros(n, dtype=bool)
        st_in = st[inside]
        ok[inside] = (table[st_in, i] == i) & (table[cols[inside], st_in] == cols[inside])
        for j in np.nonzero(~inside)[0]:
            t, st_el = elems[j], outside[st[j] - n]
            ok[j] = product(st_el, s) == s and product(t, st_el) == t
        found = [elems[j] for j in np.nonzero(ok)[0]]
        if found != [star(s)]:
            report.inverse_uniqueness_violations.append((s, found))
            if len(report.inverse_uniqueness_violations) >= max_violations:
                break
    return report
