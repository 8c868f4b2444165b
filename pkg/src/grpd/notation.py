"""Token notation shared by the CLI and JSON reports.

Edges are ``bundle[i]``; a multiplicity-1 bundle may also be written bare.
Finite paths are dot-joined edge tokens (a vertex stands for itself), lassos
are ``prefix(cycle)^w`` and groupoid elements ``(x | k | y)``.
"""

import re

from .graph import EdgeRef, FinitePath, Graph, GraphError

_EDGE_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_']*)(?:\[(\d+)\])?(\*)?$")


class NotationError(GraphError):
    pass


def parse_edge_token(g: Graph, tok: str):
    """Return (EdgeRef, starred) for an edge token, or None if it is not one."""
    m = _EDGE_RE.match(tok)
    if not m:
        return None
    name, idx, star = m.groups()
    if name in g.vertices or name == "z":
        return None
    try:
        b = g.bundle(name)
    except GraphError:
        raise NotationError(f"unknown token {tok!r}") from None
    if idx is None:
        if b.multiplicity != 1:
            raise NotationError(f"bundle {name!r} has several edges; write {name}[i]")
        idx = 0
    e = g.check_edge(EdgeRef(name, int(idx)))
    return e, bool(star)


def parse_path(g: Graph, text: str) -> FinitePath:
    text = text.strip()
    if text in g.vertices:
        return g.vertex_path(text)
    edges = []
    for tok in text.split("."):
        parsed = parse_edge_token(g, tok.strip())
        if parsed is None or parsed[1]:
            raise NotationError(f"bad path token {tok!r}")
        edges.append(parsed[0])
    return g.path(edges)


def render_path(p: FinitePath) -> str:
    return str(p)


def render_multiplicity(m):
    from .graph import format_multiplicity

    return format_multiplicity(m)
