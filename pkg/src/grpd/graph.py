"""Finite presentations of countable directed graphs.

A graph has finitely many vertices and finitely many edge *bundles*.  A bundle
is a family of parallel edges with a common source and range; its multiplicity
is a positive integer or ``OMEGA`` (countably many edges).  Omega bundles are
how a finite description reaches vertices that emit infinitely many edges.

Individual edges are ``EdgeRef(bundle, index)`` and paths are ``FinitePath``.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union

__all__ = [
    "OMEGA",
    "Bundle",
    "EdgeRef",
    "FinitePath",
    "Graph",
    "GraphError",
    "GraphParseError",
    "VertexClass",
    "classify_vertex",
    "reachable",
    "enumerate_paths",
    "parse_graph",
    "format_graph",
]

OMEGA = math.inf
"""Multiplicity of a bundle with countably infinitely many edges."""

Multiplicity = Union[int, float]

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")
_RESERVED = {"z", "vertex", "edge", "edges", "omega"}


class GraphError(ValueError):
    """Raised for malformed graphs, unknown vertices and foreign edges."""


class GraphParseError(GraphError):
    def __init__(self, lineno: int, reason: str):
        self.lineno = lineno
        self.reason = reason
        super().__init__(f"line {lineno}: {reason}")


def format_multiplicity(m: Multiplicity):
    return "omega" if m == OMEGA else int(m)


@dataclass(frozen=True)
class Bundle:
    id: str
    source: str
    target: str
    multiplicity: Multiplicity = 1

    @property
    def is_omega(self) -> bool:
        return self.multiplicity == OMEGA


class EdgeRef(NamedTuple):
    bundle: str
    index: int

    def __str__(self):
        return f"{self.bundle}[{self.index}]"


@dataclass(frozen=True, slots=True)
class FinitePath:
    """A finite path; a vertex is the path of length 0 with no edges.

    ``start`` and ``end`` are the source and range vertices.  Construct through
    :meth:`Graph.path` or :meth:`Graph.vertex_path` so composability is checked.
    """

    start: str
    edges: tuple = ()
    end: str = ""

    def __len__(self):
        return len(self.edges)

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def is_prefix_of(self, other: "FinitePath") -> bool:
        n = len(self.edges)
        return (self.start == other.start and n <= len(other.edges)
                and other.edges[:n] == self.edges)

    def comparable(self, other: "FinitePath") -> bool:
        return self.is_prefix_of(other) or other.is_prefix_of(self)

    def __add__(self, other: "FinitePath") -> "FinitePath":
        if self.end != other.start:
            raise GraphError(f"cannot concatenate {self} and {other}: "
                             f"{self.end} != {other.start}")
        return FinitePath(self.start, self.edges + other.edges, other.end)

    def strip_prefix(self, prefix: "FinitePath") -> "FinitePath":
        """Return mu with ``self == prefix + mu``; prefix must be a prefix."""
        if not prefix.is_prefix_of(self):
            raise GraphError(f"{prefix} is not an initial segment of {self}")
        return FinitePath(prefix.end, self.edges[len(prefix.edges):], self.end)

    def __str__(self):
        if not self.edges:
            return self.start
        return ".".join(str(e) for e in self.edges)


@dataclass(frozen=True)
class VertexClass:
    vertex: str
    infinite: bool
    is_sink: bool

    @property
    def label(self) -> str:
        return "Vinf" if self.infinite else "Vf"


@dataclass(frozen=True, eq=True)
class Graph:
    vertices: tuple
    bundles: tuple
    _by_id: dict = field(init=False, repr=False, compare=False, hash=False)
    _out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        bundles = tuple(self.bundles)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "bundles", bundles)
        if len(set(vertices)) != len(vertices):
            raise GraphError("duplicate vertex")
        by_id = {}
        for b in bundles:
            if b.id in by_id:
                raise GraphError(f"duplicate bundle id {b.id!r}")
            if b.id in vertices:
                raise GraphError(f"bundle id {b.id!r} clashes with a vertex name")
            for end in (b.source, b.target):
                if end not in vertices:
                    raise GraphError(f"bundle {b.id!r} uses undeclared vertex {end!r}")
            m = b.multiplicity
            if not (m == OMEGA or (isinstance(m, int) and m >= 1)):
                raise GraphError(f"bundle {b.id!r} has invalid multiplicity {m!r}")
            by_id[b.id] = b
        out = {v: [] for v in vertices}
        for b in sorted(bundles, key=lambda b: b.id):
            out[b.source].append(b)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_out", {v: tuple(bs) for v, bs in out.items()})

    def __hash__(self):
        return hash((self.vertices, self.bundles))

    # -- lookups -----------------------------------------------------------

    def bundle(self, bundle_id: str) -> Bundle:
        try:
            return self._by_id[bundle_id]
        except KeyError:
            raise GraphError(f"unknown bundle {bundle_id!r}") from None

    def check_vertex(self, v: str) -> str:
        if v not in self._out:
            raise GraphError(f"unknown vertex {v!r}")
        return v

    def check_edge(self, e: EdgeRef) -> EdgeRef:
        b = self.bundle(e.bundle)
        if not (0 <= e.index < b.multiplicity):
            raise GraphError(f"edge {e} out of range for multiplicity "
                             f"{format_multiplicity(b.multiplicity)}")
        return e

    def source(self, e: EdgeRef) -> str:
        return self._by_id[e.bundle].source

    def target(self, e: EdgeRef) -> str:
        return self._by_id[e.bundle].target

    def out_bundles(self, v: str) -> tuple:
        return self._out[self.check_vertex(v)]

    def out_degree(self, v: str) -> Multiplicity:
        return sum((b.multiplicity for b in self.out_bundles(v)), 0)

    def is_infinite_emitter(self, v: str) -> bool:
        return self.out_degree(v) == OMEGA

    def is_sink(self, v: str) -> bool:
        return not self.out_bundles(v)

    def sinks(self) -> list:
        return [v for v in self.vertices if self.is_sink(v)]

    def infinite_emitters(self) -> list:
        return [v for v in self.vertices if self.is_infinite_emitter(v)]

    def successors(self, v: str) -> list:
        """Distinct range vertices of edges leaving ``v``, in bundle order."""
        seen = []
        for b in self.out_bundles(v):
            if b.target not in seen:
                seen.append(b.target)
        return seen

    def edges_from(self, v: str, cutoff: Optional[int] = None) -> list:
        """Edges leaving ``v`` with index below ``cutoff`` (all finite ones if None)."""
        result = []
        for b in self.out_bundles(v):
            limit = b.multiplicity if cutoff is None else min(b.multiplicity, cutoff)
            if limit == OMEGA:
                raise GraphError(f"bundle {b.id!r} is infinite; give an index cutoff")
            result.extend(EdgeRef(b.id, i) for i in range(int(limit)))
        return result

    def edges(self, cutoff: Optional[int] = None) -> list:
        """Edges with index below ``cutoff`` in (bundle-id, index) order."""
        out = []
        for b in sorted(self.bundles, key=lambda b: b.id):
            limit = b.multiplicity if cutoff is None else min(b.multiplicity, cutoff)
            if limit == OMEGA:
                raise GraphError(f"bundle {b.id!r} is infinite; give an index cutoff")
            out.extend(EdgeRef(b.id, i) for i in range(int(limit)))
        return out

    def edge_enumeration(self) -> Iterator[EdgeRef]:
        """A genuine enumeration e1, e2, ... of every edge of the graph.

        Round i lists the i-th edge of each bundle (bundle-id order), so an
        omega bundle never starves the bundles after it.
        """
        bundles = sorted(self.bundles, key=lambda b: b.id)
        i = 0
        while True:
            live = [b for b in bundles if i < b.multiplicity]
            if not live:
                return
            for b in live:
                yield EdgeRef(b.id, i)
            i += 1

    # -- paths -------------------------------------------------------------

    def vertex_path(self, v: str) -> FinitePath:
        self.check_vertex(v)
        return FinitePath(v, (), v)

    def path(self, edges: Sequence, start: Optional[str] = None) -> FinitePath:
        """Build a path from a sequence of edges (``EdgeRef`` or ``(bundle, i)``)."""
        edges = tuple(EdgeRef(*e) for e in edges)
        if not edges:
            if start is None:
                raise GraphError("an empty path needs a start vertex")
            return self.vertex_path(start)
        for e in edges:
            self.check_edge(e)
        for a, b in zip(edges, edges[1:]):
            if self.target(a) != self.source(b):
                raise GraphError(f"edges {a} and {b} do not compose")
        s = self.source(edges[0])
        if start is not None and start != s:
            raise GraphError(f"path starts at {s}, not {start}")
        return FinitePath(s, edges, self.target(edges[-1]))

    def extend(self, p: FinitePath, e: EdgeRef) -> FinitePath:
        if self.source(e) != p.end:
            raise GraphError(f"edge {e} does not leave {p.end}")
        return FinitePath(p.start, p.edges + (e,), self.target(e))

    def reachable_set(self, v: str) -> set:
        """All vertices w with v >= w (v included)."""
        self.check_vertex(v)
        seen = {v}
        todo = deque([v])
        while todo:
            u = todo.popleft()
            for w in self.successors(u):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def shortest_path(self, v: str, targets: Iterable, avoid: Iterable = ()) -> Optional[FinitePath]:
        """A shortest path from ``v`` to a vertex of ``targets``, using index-0 edges.

        Vertices in ``avoid`` are never entered.  Returns None if unreachable.
        """
        targets = set(targets)
        avoid = set(avoid)
        start = self.vertex_path(v)
        if v in targets:
            return start
        prev = {v: None}
        todo = deque([v])
        while todo:
            u = todo.popleft()
            for b in self.out_bundles(u):
                w = b.target
                if w in prev or w in avoid:
                    continue
                prev[w] = (u, EdgeRef(b.id, 0))
                if w in targets:
                    edges = []
                    x = w
                    while prev[x] is not None:
                        x, e = prev[x]
                        edges.append(e)
                    return self.path(reversed(edges))
                todo.append(w)
        return None


# -- operations ---------------------------------------------------------------


def classify_vertex(g: Graph, v: str) -> VertexClass:
    g.check_vertex(v)
    return VertexClass(v, g.is_infinite_emitter(v), g.is_sink(v))


def reachable(g: Graph, v: str, w: str) -> bool:
    g.check_vertex(w)
    return w in g.reachable_set(v)


def _edge_key(e: EdgeRef):
    return (e.bundle, e.index)


def enumerate_paths(g: Graph, start: Optional[str] = None, max_len: int = 1,
                    index_cutoff: int = 1) -> list:
    """All paths of length <= max_len over edges with index < index_cutoff.

    Ordered by length, then lexicographically by (bundle-id, index) of the
    edges; length-0 paths follow the declared vertex order.
    """
    if max_len < 0 or index_cutoff < 1:
        raise GraphError("need max_len >= 0 and index_cutoff >= 1")
    starts = list(g.vertices) if start is None else [g.check_vertex(start)]
    layer = [g.vertex_path(v) for v in starts]
    result = list(layer)
    for _ in range(max_len):
        nxt = []
        for p in layer:
            for e in g.edges_from(p.end, index_cutoff):
                nxt.append(FinitePath(p.start, p.edges + (e,), g.target(e)))
        nxt.sort(key=lambda p: tuple(_edge_key(e) for e in p.edges))
        result.extend(nxt)
        layer = nxt
    return result


# -- text format ----------------------------------------------------------------

_EDGES_RE = re.compile(
    r"^(edges?)\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)(?:\s+x\s+(\S+))?$")


def _check_name(name: str, lineno: int, what: str):
    if not _NAME_RE.match(name) or name in _RESERVED:
        raise GraphParseError(lineno, f"invalid {what} name {name!r}")


def parse_graph(text: str) -> Graph:
    """Parse the line-oriented graph format.

    ::

        vertex v
        edges c : v -> v x omega
        edge e : v -> v
    """
    vertices: list = []
    bundles: list = []
    seen_ids: dict = {}
    uses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "vertex":
            parts = line.split()
            if len(parts) != 2:
                raise GraphParseError(lineno, "expected 'vertex <name>'")
            _check_name(parts[1], lineno, "vertex")
            if parts[1] in vertices:
                raise GraphParseError(lineno, f"duplicate vertex {parts[1]!r}")
            vertices.append(parts[1])
            continue
        m = _EDGES_RE.match(line)
        if not m:
            raise GraphParseError(lineno, f"cannot parse {line!r}")
        kind, bid, src, dst, mult = m.groups()
        _check_name(bid, lineno, "bundle")
        if kind == "edge":
            if mult is not None:
                raise GraphParseError(lineno, "'edge' takes no multiplicity; use 'edges'")
            mult_v: Multiplicity = 1
        else:
            if mult is None:
                raise GraphParseError(lineno, "'edges' needs 'x <multiplicity>'")
            if mult == "omega":
                mult_v = OMEGA
            elif mult.isdigit() and int(mult) >= 1:
                mult_v = int(mult)
            else:
                raise GraphParseError(lineno, f"bad multiplicity {mult!r}")
        if bid in seen_ids:
            raise GraphParseError(lineno, f"duplicate bundle id {bid!r}")
        seen_ids[bid] = lineno
        bundles.append(Bundle(bid, src, dst, mult_v))
        uses.append((lineno, bid, src, dst))
    for lineno, bid, src, dst in uses:
        for v in (src, dst):
            if v not in vertices:
                raise GraphParseError(lineno, f"undeclared vertex {v!r}")
        if bid in vertices:
            raise GraphParseError(lineno, f"bundle id {bid!r} clashes with a vertex")
    if not vertices:
        raise GraphParseError(0, "graph has no vertices")
    return Graph(tuple(vertices), tuple(bundles))


def format_graph(g: Graph) -> str:
    lines = [f"vertex {v}" for v in g.vertices]
    for b in g.bundles:
        if b.multiplicity == 1:
            lines.append(f"edge {b.id} : {b.source} -> {b.target}")
        else:
            lines.append(f"edges {b.id} : {b.source} -> {b.target} x "
                         f"{format_multiplicity(b.multiplicity)}")
    return "\n".join(lines) + "\n"


def bouquet(n: Multiplicity, vertex: str = "v", bundle: str = "c") -> Graph:
    """One vertex with a bundle of n loops (the graph of the Cuntz algebra O_n)."""
    return Graph((vertex,), (Bundle(bundle, vertex, vertex, n),))


def all_sink_free_graphs(max_vertices: int, max_bundles: int,
                         multiplicities: Sequence) -> Iterator[Graph]:
    """Every sink-free graph on 1..max_vertices vertices with 1..max_bundles bundles.

    Bundles are generated as multisets of (source, target, multiplicity), so
    graphs differing only by bundle names are produced once.
    """
    from itertools import combinations_with_replacement

    for n in range(1, max_vertices + 1):
        vs = tuple(f"v{i + 1}" for i in range(n))
        kinds = list(product(range(n), range(n), range(len(multiplicities))))
        for k in range(1, max_bundles + 1):
            for combo in combinations_with_replacement(kinds, k):
                if len({s for s, _, _ in combo}) != n:
                    continue
                bundles = tuple(
                    Bundle(f"b{j}", vs[s], vs[t], multiplicities[m])
                    for j, (s, t, m) in enumerate(combo))
                yield Graph(vs, bundles)
