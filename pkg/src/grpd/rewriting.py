"""Generators and relations for the graph inverse semigroup.

Words are tuples of letters over V, E, E* and z.  Rewriting uses the relation
list (i)-(iv) oriented left to right, completed with ``v v -> v`` and
``e* e -> r(e)``; without those two rules ``vv`` and ``e*e`` are irreducible
and the normal forms ``z`` / ``alpha beta*`` are not reached.

Every rule rewrites a factor of two letters to a single letter, so each step
shortens the word and rewriting terminates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Callable, Optional

from .graph import EdgeRef, Graph, GraphError
from .notation import NotationError, parse_edge_token
from .semigroup import ZERO, PathPair, multiply

__all__ = [
    "Vertex",
    "Edge",
    "EdgeStar",
    "Z",
    "ALL_RULES",
    "RewriteError",
    "parse_word",
    "render_word",
    "rewrite",
    "normal_form",
    "words_equal",
    "phi",
    "letter_image",
    "enumerate_words",
    "verify_phi_isomorphism",
    "PhiReport",
]


@dataclass(frozen=True, slots=True)
class Vertex:
    v: str

    def __str__(self):
        return self.v


@dataclass(frozen=True, slots=True)
class Edge:
    e: EdgeRef

    def __str__(self):
        return str(self.e)


@dataclass(frozen=True, slots=True)
class EdgeStar:
    e: EdgeRef

    def __str__(self):
        return f"{self.e}*"


class _Z:
    __slots__ = ()

    def __repr__(self):
        return "Z"

    def __str__(self):
        return "z"


Z = _Z()

# R0 zero, R1 vertex absorption, R2 non-composable, R3 e*f, R4 vv, R5 e*e
ALL_RULES = frozenset({"R0", "R1", "R2", "R3", "R4", "R5"})


class RewriteError(GraphError):
    pass


def letter_source(g: Graph, a) -> str:
    if isinstance(a, Vertex):
        return a.v
    if isinstance(a, Edge):
        return g.source(a.e)
    return g.target(a.e)


def letter_range(g: Graph, a) -> str:
    if isinstance(a, Vertex):
        return a.v
    if isinstance(a, Edge):
        return g.target(a.e)
    return g.source(a.e)


def _check_letter(g: Graph, a):
    if a is Z:
        return
    if isinstance(a, Vertex):
        g.check_vertex(a.v)
    elif isinstance(a, (Edge, EdgeStar)):
        g.check_edge(a.e)
    else:
        raise RewriteError(f"not a letter: {a!r}")


def check_word(g: Graph, word) -> tuple:
    word = tuple(word)
    if not word:
        raise RewriteError("words are nonempty")
    for a in word:
        _check_letter(g, a)
    return word


def parse_word(g: Graph, text: str) -> tuple:
    letters = []
    for tok in text.split():
        if tok == "z":
            letters.append(Z)
        elif tok in g.vertices:
            letters.append(Vertex(tok))
        else:
            parsed = parse_edge_token(g, tok)
            if parsed is None:
                raise NotationError(f"unknown token {tok!r}")
            e, star = parsed
            letters.append(EdgeStar(e) if star else Edge(e))
    return check_word(g, letters)


def render_word(word) -> str:
    return " ".join(str(a) for a in word)


def reduce_pair(g: Graph, a, b, rules=ALL_RULES):
    """The single letter that the factor ``a b`` rewrites to, or None."""
    if a is Z or b is Z:
        return Z if "R0" in rules else None
    if "R2" in rules and letter_range(g, a) != letter_source(g, b):
        return Z
    if isinstance(a, Vertex):
        if isinstance(b, Vertex):
            # composable, so a == b
            return a if "R4" in rules else None
        return b if "R1" in rules else None
    if isinstance(b, Vertex):
        return a if "R1" in rules else None
    if isinstance(a, EdgeStar) and isinstance(b, Edge):
        if a.e == b.e:
            return Vertex(g.target(a.e)) if "R5" in rules else None
        return Z if "R3" in rules else None
    return None


def rewrite(g: Graph, word, strategy: str = "leftmost", rules=ALL_RULES,
            trace: Optional[list] = None) -> tuple:
    """Rewrite to an irreducible word.

    ``strategy`` picks the redex: ``leftmost`` or ``rightmost``.  Every step
    must shorten the word; a step that does not raises ``RewriteError``.
    """
    word = list(check_word(g, word))
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    while True:
        positions = range(len(word) - 1)
        if strategy == "rightmost":
            positions = reversed(positions)
        for i in positions:
            c = reduce_pair(g, word[i], word[i + 1], rules)
            if c is not None:
                before = len(word)
                word[i:i + 2] = [c]
                if len(word) >= before:
                    raise RewriteError("rewriting step did not shorten the word")
                if trace is not None:
                    trace.append(tuple(word))
                break
        else:
            return tuple(word)


def decode(g: Graph, word):
    """Read an irreducible word as ZERO or the pair (alpha, beta) of alpha beta*.

    Raises ``RewriteError`` when the word is not of that shape.
    """
    if word == (Z,):
        return ZERO
    if len(word) == 1 and isinstance(word[0], Vertex):
        p = g.vertex_path(word[0].v)
        return PathPair(p, p, g)
    k = 0
    while k < len(word) and isinstance(word[k], Edge):
        k += 1
    stars = word[k:]
    if not all(isinstance(a, EdgeStar) for a in stars):
        raise RewriteError(f"irreducible word {render_word(word)!r} is not of the form alpha beta*")
    try:
        if k:
            alpha = g.path([a.e for a in word[:k]])
        else:
            alpha = g.vertex_path(g.target(stars[0].e))
        if stars:
            beta = g.path([a.e for a in reversed(stars)])
        else:
            beta = g.vertex_path(alpha.end)
        return PathPair(alpha, beta, g)
    except GraphError as exc:
        raise RewriteError(f"irreducible word {render_word(word)!r} does not "
                           f"decode: {exc}") from None


def normal_form(g: Graph, word, strategy: str = "leftmost", rules=ALL_RULES):
    """ZERO, or the ``PathPair`` (alpha, beta) encoding the normal form alpha beta*."""
    return decode(g, rewrite(g, word, strategy, rules))


def words_equal(g: Graph, w1, w2, rules=ALL_RULES) -> bool:
    return rewrite(g, w1, rules=rules) == rewrite(g, w2, rules=rules)


def letter_image(g: Graph, a):
    if a is Z:
        return ZERO
    if isinstance(a, Vertex):
        p = g.vertex_path(a.v)
        return PathPair(p, p, g)
    e = g.path([a.e])
    r = g.vertex_path(e.end)
    if isinstance(a, Edge):
        return PathPair(e, r, g)
    return PathPair(r, e, g)


def phi(g: Graph, word, product: Callable = multiply):
    """Product in the path-pair model of the images of the letters."""
    word = check_word(g, word)
    acc = letter_image(g, word[0])
    for a in word[1:]:
        acc = product(acc, letter_image(g, a))
    return acc


def alphabet(g: Graph, cutoff: int) -> list:
    letters = [Vertex(v) for v in g.vertices]
    edges = g.edges(cutoff)
    letters += [Edge(e) for e in edges]
    letters += [EdgeStar(e) for e in edges]
    letters.append(Z)
    return letters


def enumerate_words(g: Graph, max_len: int, cutoff: int):
    letters = alphabet(g, cutoff)
    for n in range(1, max_len + 1):
        yield from cartesian(letters, repeat=n)


@dataclass
class PhiReport:
    words: int = 0
    normal_form_violations: list = field(default_factory=list)
    class_violations: list = field(default_factory=list)
    homomorphism_violations: list = field(default_factory=list)
    confluence_violations: list = field(default_factory=list)
    truncated: Optional[str] = None

    @property
    def ok(self) -> bool:
        return not (self.normal_form_violations or self.class_violations
                    or self.homomorphism_violations or self.confluence_violations)

    def to_json(self) -> dict:
        def words(vs):
            return [[render_word(w) if isinstance(w, tuple) else str(w) for w in v]
                    for v in vs]

        return {
            "words": self.words,
            "normal_form_violations": words(self.normal_form_violations),
            "class_violations": words(self.class_violations),
            "homomorphism_violations": words(self.homomorphism_violations),
            "confluence_violations": words(self.confluence_violations),
            "truncated": self.truncated,
        }


def verify_phi_isomorphism(g: Graph, max_word_len: int, cutoff: int,
                           rules=ALL_RULES, max_words: int = 500_000,
                           max_violations: int = 50) -> PhiReport:
    """Exhaustive comparison of rewriting against the path-pair model.

    Over all words of length <= max_word_len: (a) phi(w) equals the decoded
    normal form; (b) the partitions of words by phi value and by normal form
    coincide; (c) phi(w1 w2) = phi(w1) phi(w2) for every split of every word;
    and leftmost and rightmost rewriting agree.
    """
    report = PhiReport()
    by_phi: dict = {}
    by_nf: dict = {}
    phis: dict = {}

    def note(lst, item):
        if len(lst) < max_violations:
            lst.append(item)

    decoded: dict = {}
    for w in enumerate_words(g, max_word_len, cutoff):
        if report.words >= max_words:
            report.truncated = f"stopped after {max_words} words"
            break
        report.words += 1
        p = phi(g, w)
        phis[w] = p
        left = rewrite(g, w, "leftmost", rules)
        right = rewrite(g, w, "rightmost", rules)
        if left != right:
            note(report.confluence_violations, (w, left, right))
        try:
            nf = decode(g, left)
        except RewriteError:
            nf = None
        decoded[w] = nf
        if nf != p:
            note(report.normal_form_violations, (w, left, p))
        by_phi.setdefault(p, set()).add(left)
        by_nf.setdefault(left, set()).add(p)
        for i in range(1, len(w)):
            u, v = w[:i], w[i:]
            prod = multiply(phis[u], phis[v])
            if prod != p:
                note(report.homomorphism_violations, (u, v, p, prod))
            nu, nv = decoded[u], decoded[v]
            if nu is not None and nv is not None and multiply(nu, nv) != nf:
                note(report.homomorphism_violations, (u, v, nf, multiply(nu, nv)))
    # phi(w1) = phi(w2) iff the words have the same normal form
    for p, nfs in by_phi.items():
        if len(nfs) > 1:
            note(report.class_violations, (p,) + tuple(sorted(nfs, key=render_word)))
    for nf, ps in by_nf.items():
        if len(ps) > 1:
            note(report.class_violations, (nf,) + tuple(sorted(ps, key=str)))
    return report
