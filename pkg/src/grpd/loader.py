"""Reading graph files, with a fallback to the bundled corpus."""

from pathlib import Path

from .graph import Graph, GraphError, parse_graph

CORPUS_DIR = Path(__file__).parent / "corpus"


def corpus_names() -> list:
    return sorted(p.stem for p in CORPUS_DIR.glob("*.graph"))


def corpus_graph(name: str) -> Graph:
    path = CORPUS_DIR / f"{name}.graph"
    if not path.exists():
        raise GraphError(f"no corpus graph named {name!r}; have {corpus_names()}")
    return parse_graph(path.read_text())


def load_graph(location: str) -> Graph:
    """Parse the graph file at ``location``.

    A path that does not exist but whose stem names a corpus graph (for example
    ``examples/o2.graph``) loads the bundled copy.
    """
    path = Path(location)
    if path.exists():
        return parse_graph(path.read_text())
    stem = path.stem
    if (CORPUS_DIR / f"{stem}.graph").exists():
        return corpus_graph(stem)
    raise FileNotFoundError(f"no such graph file: {location}")
