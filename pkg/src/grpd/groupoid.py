"""Units and elements of the universal groupoid and the path groupoid.

A unit is a finite path (``Finite``), an eventually periodic infinite path in
canonical lasso form (``Lasso``), or the sentinel ``ZERO_UNIT``.  Groupoid
elements are triples ``(x, k, y)`` with x and y tail-equivalent with lag k.

Cylinder sets ``D_{base; excluded...}`` are the basic open sets of the unit
space; membership and emptiness in X = Y_inf u Z are decidable here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .graph import EdgeRef, FinitePath, Graph, GraphError, OMEGA
from .semigroup import ZERO

__all__ = [
    "Finite",
    "Lasso",
    "ZERO_UNIT",
    "GroupoidError",
    "GroupoidElement",
    "CylinderSet",
    "BasicSet",
    "lasso",
    "finite",
    "in_X",
    "extends",
    "shift",
    "prepend",
    "unit_edges",
    "element",
    "element_valid",
    "compose",
    "inverse",
    "act",
    "isotropy_trivial",
    "cylinder_member",
    "cylinder_empty_in_X",
    "ExtensionFamily",
    "TruncationFamily",
    "ConstantFamily",
    "converges_to",
    "element_pairs",
    "in_pair_set",
    "separating_sets",
    "basic_member",
    "basic_disjoint",
    "render_unit",
    "render_element",
    "parse_unit",
    "units_in_X",
    "canonical_elements",
    "free_witness",
]


class GroupoidError(GraphError):
    pass


@dataclass(frozen=True, slots=True)
class Finite:
    path: FinitePath

    @property
    def start(self) -> str:
        return self.path.start

    def __str__(self):
        return str(self.path)


@dataclass(frozen=True, slots=True)
class Lasso:
    """prefix . cycle^infinity in canonical form; build with :func:`lasso`."""

    start: str
    prefix: tuple
    cycle: tuple

    def edge(self, i: int) -> EdgeRef:
        p = len(self.prefix)
        if i < p:
            return self.prefix[i]
        return self.cycle[(i - p) % len(self.cycle)]

    def __str__(self):
        return render_unit(self)


class _ZeroUnit:
    __slots__ = ()

    def __repr__(self):
        return "ZERO_UNIT"

    def __str__(self):
        return "z"


ZERO_UNIT = _ZeroUnit()

Unit = Union[Finite, Lasso, _ZeroUnit]


def finite(p: FinitePath) -> Finite:
    return Finite(p)


def _primitive_root(cycle: tuple) -> tuple:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            return cycle[:d]
    return cycle


def lasso(g: Graph, prefix, cycle) -> Lasso:
    """Canonical lasso for prefix . cycle^infinity.

    ``prefix`` is a FinitePath or a sequence of edges; ``cycle`` is a nonempty
    closed sequence of edges (or a FinitePath) starting where prefix ends.  The
    cycle is reduced to its primitive root and trailing prefix edges are rolled
    into the cycle, so equal infinite paths get equal lassos.
    """
    if isinstance(prefix, FinitePath):
        prefix_start = prefix.start
        prefix = prefix.edges
    else:
        prefix_start = None
        prefix = tuple(EdgeRef(*e) for e in prefix)
    if isinstance(cycle, FinitePath):
        cycle = cycle.edges
    cycle = tuple(EdgeRef(*e) for e in cycle)
    if not cycle:
        raise GroupoidError("a lasso needs a nonempty cycle")
    cyc = g.path(cycle)
    if cyc.start != cyc.end:
        raise GroupoidError(f"cycle {cyc} is not closed")
    if prefix:
        pre = g.path(prefix)
        if pre.end != cyc.start:
            raise GroupoidError(f"prefix {pre} does not end where the cycle starts")
    elif prefix_start is not None and prefix_start != cyc.start:
        raise GroupoidError("prefix vertex is not on the cycle")
    return _canonical(g, prefix, cycle)


def _canonical(g: Graph, prefix: tuple, cycle: tuple) -> Lasso:
    cycle = _primitive_root(cycle)
    while prefix and prefix[-1] == cycle[-1]:
        prefix = prefix[:-1]
        cycle = (cycle[-1],) + cycle[:-1]
    first = prefix[0] if prefix else cycle[0]
    return Lasso(g.source(first), prefix, cycle)


def unit_start(x: Unit) -> str:
    return x.start


def unit_edges(x: Unit, n: int) -> Optional[tuple]:
    """The first n edges of x, or None if x is finite and shorter."""
    if isinstance(x, Finite):
        if n > len(x.path.edges):
            return None
        return x.path.edges[:n]
    return tuple(x.edge(i) for i in range(n))


def extends(x: Unit, p: FinitePath) -> bool:
    """Whether x = p . gamma for some gamma."""
    if x is ZERO_UNIT:
        return False
    if isinstance(x, Finite):
        return p.is_prefix_of(x.path)
    return x.start == p.start and unit_edges(x, len(p.edges)) == p.edges


def in_X(g: Graph, x: Unit) -> bool:
    if isinstance(x, Lasso):
        return True
    if isinstance(x, Finite):
        return g.is_infinite_emitter(x.path.end)
    return False


def shift(g: Graph, x: Unit, n: int) -> Unit:
    """Drop the first n edges of x."""
    if isinstance(x, Finite):
        edges = x.path.edges
        if n > len(edges):
            raise GroupoidError(f"cannot shift {x} by {n}")
        if n == len(edges):
            return Finite(g.vertex_path(x.path.end))
        return Finite(g.path(edges[n:]))
    p = len(x.prefix)
    if n <= p:
        rest = x.prefix[n:]
        first = rest[0] if rest else x.cycle[0]
        return Lasso(g.source(first), rest, x.cycle)
    m = (n - p) % len(x.cycle)
    cyc = x.cycle[m:] + x.cycle[:m]
    return Lasso(g.source(cyc[0]), (), cyc)


def prepend(g: Graph, p: FinitePath, x: Unit) -> Unit:
    """The unit p . x."""
    if p.end != x.start:
        raise GroupoidError(f"cannot prepend {p} to {x}")
    if isinstance(x, Finite):
        return Finite(p + x.path)
    return _canonical(g, p.edges + x.prefix, x.cycle)


def _unroll(x: Unit, n: int) -> tuple:
    if isinstance(x, Finite):
        return x.path.edges[:n]
    return tuple(x.edge(i) for i in range(n))


# -- groupoid elements ---------------------------------------------------------


def element_valid(x: Unit, k: int, y: Unit) -> bool:
    """Whether (x, k, y) = (alpha gamma, l(alpha) - l(beta), beta gamma)."""
    if x is ZERO_UNIT or y is ZERO_UNIT:
        return x is y and k == 0
    if isinstance(x, Finite) and isinstance(y, Finite):
        return x.path.end == y.path.end and k == len(x.path) - len(y.path)
    if isinstance(x, Lasso) and isinstance(y, Lasso):
        if len(x.cycle) != len(y.cycle):
            return False
        # past both prefixes, with x_{n+k} = y_n
        b = max(len(y.prefix), len(x.prefix) - k, -k, 0)
        a = b + k
        period = len(x.cycle)
        return all(x.edge(a + i) == y.edge(b + i) for i in range(period))
    return False


@dataclass(frozen=True, slots=True)
class GroupoidElement:
    x: Unit
    k: int
    y: Unit

    @property
    def range(self) -> Unit:
        return self.x

    @property
    def source(self) -> Unit:
        return self.y

    def __str__(self):
        return render_element(self)


def element(x: Unit, k: int, y: Unit) -> GroupoidElement:
    if not element_valid(x, k, y):
        raise GroupoidError(f"({x} | {k} | {y}) is not a groupoid element")
    return GroupoidElement(x, k, y)


def unit_element(x: Unit) -> GroupoidElement:
    return GroupoidElement(x, 0, x)


def compose(a: GroupoidElement, b: GroupoidElement) -> GroupoidElement:
    if a.y != b.x:
        raise GroupoidError(f"{a} and {b} are not composable")
    return GroupoidElement(a.x, a.k + b.k, b.y)


def inverse(a: GroupoidElement) -> GroupoidElement:
    return GroupoidElement(a.y, -a.k, a.x)


def act(s, x: Unit) -> Optional[Unit]:
    """Right action x . s of a semigroup element on a unit; None when undefined."""
    if x is ZERO_UNIT:
        return ZERO_UNIT
    if s is ZERO:
        return None
    if not extends(x, s.alpha):
        return None
    g = s.graph
    gamma = shift(g, x, len(s.alpha.edges))
    return prepend(g, s.beta, gamma)


def isotropy_trivial(g: Graph, x: Unit):
    """(True, None) for trivial isotropy at x, else (False, k) with k != 0."""
    if not in_X(g, x):
        raise GroupoidError(f"{x} is not in X")
    if isinstance(x, Finite):
        return True, None
    k = len(x.cycle)
    assert element_valid(x, k, x)
    return False, k


# -- cylinder sets ---------------------------------------------------------------


def _path_key(p: FinitePath):
    return (len(p.edges), p.start, tuple((e.bundle, e.index) for e in p.edges))


@dataclass(frozen=True)
class CylinderSet:
    base: FinitePath
    excluded: tuple = ()

    def __post_init__(self):
        ex = tuple(sorted(set(self.excluded), key=_path_key))
        for p in ex:
            if not (self.base.is_prefix_of(p) and len(p) > len(self.base)):
                raise GroupoidError(f"excluded path {p} does not strictly extend {self.base}")
        object.__setattr__(self, "excluded", ex)

    def __str__(self):
        if not self.excluded:
            return f"D[{self.base}]"
        return f"D[{self.base}; " + ", ".join(str(p) for p in self.excluded) + "]"


def cylinder_member(c: CylinderSet, x: Unit) -> bool:
    return extends(x, c.base) and not any(extends(x, p) for p in c.excluded)


def _cycle_at(g: Graph, t: str) -> Optional[FinitePath]:
    """A shortest closed path through t using index-0 edges."""
    best = None
    for b in g.out_bundles(t):
        e = EdgeRef(b.id, 0)
        rest = g.shortest_path(b.target, {t})
        if rest is not None:
            cyc = g.path((e,) + rest.edges)
            if best is None or len(cyc) < len(best):
                best = cyc
    return best


def free_witness(g: Graph, p: FinitePath) -> Optional[Unit]:
    """Some unit of X extending p, ignoring exclusions; None if there is none."""
    if g.is_infinite_emitter(p.end):
        return Finite(p)
    cyclic = {t for t in g.vertices if _cycle_at(g, t) is not None}
    targets = set(g.infinite_emitters()) | cyclic
    q = g.shortest_path(p.end, targets)
    if q is None:
        return None
    stem = p + q
    if g.is_infinite_emitter(stem.end):
        return Finite(stem)
    return lasso(g, stem, _cycle_at(g, stem.end))


def cylinder_empty_in_X(g: Graph, c: CylinderSet):
    """Decide whether C meets X; returns (empty, witness)."""
    depth = max((len(p) for p in c.excluded), default=0)

    def search(p: FinitePath):
        if any(q.is_prefix_of(p) for q in c.excluded):
            return None
        if g.is_infinite_emitter(p.end):
            return Finite(p)
        if len(p) >= depth or not any(p.is_prefix_of(q) for q in c.excluded):
            return free_witness(g, p)
        for e in g.edges_from(p.end):
            w = search(g.extend(p, e))
            if w is not None:
                return w
        return None

    w = search(c.base)
    return w is None, w


# -- convergence -----------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionFamily:
    """Terms y . b[i_n] . rest_n; i_n = n, or n mod period when period is set."""

    prefix: FinitePath
    bundle: str
    period: Optional[int] = None


@dataclass(frozen=True)
class TruncationFamily:
    """Terms: the first n edges of a lasso."""

    unit: Lasso


@dataclass(frozen=True)
class ConstantFamily:
    unit: Unit


def converges_to(g: Graph, family, target: Unit) -> bool:
    if isinstance(family, ConstantFamily):
        return family.unit == target
    if isinstance(family, TruncationFamily):
        return family.unit == target
    if isinstance(family, ExtensionFamily):
        b = g.bundle(family.bundle)
        if b.source != family.prefix.end:
            raise GroupoidError(f"bundle {b.id} does not leave {family.prefix.end}")
        if family.period is None:
            if b.multiplicity != OMEGA:
                raise GroupoidError(f"index sequence n is unbounded but bundle "
                                    f"{b.id} has {b.multiplicity} edges")
            # wandering first edge after the prefix: the limit is the prefix
            return target == Finite(family.prefix)
        if family.period < 1 or family.period > b.multiplicity:
            raise GroupoidError("period out of range for the bundle")
        # some edge b[i] recurs, so the terms stay in D_{y b[i]}, which omits y;
        # subsequences through different b[i] have disjoint neighbourhoods
        return False
    raise GroupoidError(f"unknown family {family!r}")


# -- basic sets A_{alpha,beta} and Hausdorff separation -------------------------------


def in_pair_set(g: Graph, a: GroupoidElement, alpha: FinitePath, beta: FinitePath) -> bool:
    """Whether a lies in A_{alpha,beta} = {(alpha gamma, l(alpha)-l(beta), beta gamma)}."""
    if a.x is ZERO_UNIT:
        return False
    if a.k != len(alpha) - len(beta):
        return False
    if not (extends(a.x, alpha) and extends(a.y, beta)):
        return False
    return shift(g, a.x, len(alpha)) == shift(g, a.y, len(beta))


@dataclass(frozen=True)
class BasicSet:
    """A_{alpha,beta}, or A_{alpha,beta} minus A_{minus} when minus is set."""

    alpha: FinitePath
    beta: FinitePath
    minus: Optional[tuple] = None

    def __str__(self):
        s = f"A({self.alpha},{self.beta})"
        if self.minus:
            s += f" \\ A({self.minus[0]},{self.minus[1]})"
        return s


def basic_member(g: Graph, a: GroupoidElement, b: BasicSet) -> bool:
    if not in_pair_set(g, a, b.alpha, b.beta):
        return False
    return b.minus is None or not in_pair_set(g, a, *b.minus)


def _pair_extends(p, q) -> bool:
    """Whether p = (alpha mu, beta mu) for q = (alpha, beta)."""
    (pa, pb), (qa, qb) = p, q
    if not (qa.is_prefix_of(pa) and qb.is_prefix_of(pb)):
        return False
    return pa.edges[len(qa):] == pb.edges[len(qb):]


def _pair_meet(p, q):
    """A_p n A_q is A_p, A_q or empty; return the pair or None."""
    if len(p[0]) - len(p[1]) != len(q[0]) - len(q[1]):
        return None
    if _pair_extends(p, q):
        return p
    if _pair_extends(q, p):
        return q
    return None


def basic_disjoint(u: BasicSet, v: BasicSet) -> bool:
    m = _pair_meet((u.alpha, u.beta), (v.alpha, v.beta))
    if m is None:
        return True
    # A_m is inside the union of the removed sets iff m extends one of them
    return any(r is not None and _pair_extends(m, r) for r in (u.minus, v.minus))


def element_pairs(g: Graph, a: GroupoidElement, depth: int) -> list:
    """Pairs (alpha, beta) with a in A_{alpha,beta}, alpha no longer than depth."""
    out = []
    for i in range(max(a.k, 0), depth + 1):
        j = i - a.k
        xs = unit_edges(a.x, i)
        ys = unit_edges(a.y, j)
        if xs is None or ys is None:
            break
        alpha = g.path(xs, start=a.x.start) if xs else g.vertex_path(a.x.start)
        beta = g.path(ys, start=a.y.start) if ys else g.vertex_path(a.y.start)
        if in_pair_set(g, a, alpha, beta):
            out.append((alpha, beta))
    return out


def _depth(a: GroupoidElement) -> int:
    d = abs(a.k)
    for x in (a.x, a.y):
        if isinstance(x, Finite):
            d += len(x.path)
        else:
            d += len(x.prefix) + 2 * len(x.cycle)
    return d


def separating_sets(g: Graph, a: GroupoidElement, b: GroupoidElement):
    """Disjoint basic sets (U, V) with a in U and b in V, for a != b.

    Candidate sets come from the chains of pairs (alpha, beta) whose A-set
    contains each element; nested candidates are split by removing the
    smaller set.  Returns None if no separation is found.
    """
    if a == b:
        raise GroupoidError("elements are equal")
    depth = max(_depth(a), _depth(b)) * 2 + 2
    pa = _pairs_cached(g, a, depth)
    pb = _pairs_cached(g, b, depth)
    # the smallest sets around each element usually settle it at once
    candidates = [(pa[-1], pb[-1])] if pa and pb else []
    candidates += [(p, q) for p in pa for q in pb]
    for p, q in candidates:
        m = _pair_meet(p, q)
        if m is None:
            return BasicSet(*p), BasicSet(*q)
        if m == q and not in_pair_set(g, a, *q):
            return BasicSet(p[0], p[1], q), BasicSet(*q)
        if m == p and not in_pair_set(g, b, *p):
            return BasicSet(*p), BasicSet(q[0], q[1], p)
    return None


@lru_cache(maxsize=8192)
def _pairs_cached(g: Graph, a: GroupoidElement, depth: int) -> tuple:
    return tuple(element_pairs(g, a, depth))


# -- notation --------------------------------------------------------------------------


def render_unit(x: Unit) -> str:
    if x is ZERO_UNIT:
        return "z"
    if isinstance(x, Finite):
        return str(x.path)
    pre = ".".join(str(e) for e in x.prefix)
    return pre + "(" + ".".join(str(e) for e in x.cycle) + ")^w"


def render_element(a: GroupoidElement) -> str:
    return f"({render_unit(a.x)} | {a.k} | {render_unit(a.y)})"


def parse_unit(g: Graph, text: str) -> Unit:
    from .notation import parse_path

    text = text.strip()
    if text == "z":
        return ZERO_UNIT
    if text.endswith(")^w"):
        head, _, cyc = text[:-3].partition("(")
        cycle = parse_path(g, cyc)
        if head:
            return lasso(g, parse_path(g, head.rstrip(".")), cycle)
        return lasso(g, (), cycle)
    return Finite(parse_path(g, text))


# -- samples -------------------------------------------------------------------------------


def units_in_X(g: Graph, max_prefix: int, max_cycle: int, cutoff: int) -> list:
    """Finite units in X of length <= max_prefix and lassos prefix . cycle^w."""
    from .graph import enumerate_paths

    prefixes = enumerate_paths(g, None, max_prefix, cutoff)
    cycles = [c for c in enumerate_paths(g, None, max_cycle, cutoff)
              if c.edges and c.start == c.end]
    units = {Finite(p) for p in prefixes if g.is_infinite_emitter(p.end)}
    for p in prefixes:
        for c in cycles:
            if c.start == p.end:
                units.add(lasso(g, p, c))
    return sorted(units, key=lambda x: (render_unit(x), x.start))


def canonical_elements(g: Graph, max_len: int, cutoff: int, tails: list) -> list:
    """Every (alpha gamma, l(alpha) - l(beta), beta gamma) for pairs with l <= max_len."""
    from .graph import enumerate_paths

    paths = enumerate_paths(g, None, max_len, cutoff)
    by_start: dict = {}
    for t in tails:
        by_start.setdefault(t.start, []).append(t)
    out = set()
    for a in paths:
        for b in paths:
            if a.end != b.end:
                continue
            for t in by_start.get(a.end, []):
                out.add(GroupoidElement(prepend(g, a, t), len(a) - len(b), prepend(g, b, t)))
    return sorted(out, key=render_element)
