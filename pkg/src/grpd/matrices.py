"""Sparse exact integer matrices stored as a map of columns."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable


class IntMatrix:
    """An ``rows x cols`` integer matrix; ``data[j]`` maps row -> nonzero entry of column j."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data=None):
        self.rows = rows
        self.cols = cols
        self.data = {}
        for j, col in (data or {}).items():
            col = {i: int(x) for i, x in col.items() if x}
            if col:
                self.data[j] = col

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def diagonal(cls, entries: Iterable) -> "IntMatrix":
        entries = list(entries)
        n = len(entries)
        return cls(n, n, {i: {i: x} for i, x in enumerate(entries) if x})

    def entry(self, i: int, j: int) -> int:
        return self.data.get(j, {}).get(i, 0)

    def _check_shape(self, other: "IntMatrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_shape(other)
        out = {j: dict(c) for j, c in self.data.items()}
        for j, col in other.data.items():
            tgt = out.setdefault(j, {})
            for i, x in col.items():
                tgt[i] = tgt.get(i, 0) + x
        return IntMatrix(self.rows, self.cols, out)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         {j: {i: -x for i, x in c.items()} for j, c in self.data.items()})

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = {}
        for j, col in other.data.items():
            acc: dict = {}
            for k, y in col.items():
                for i, x in self.data.get(k, {}).items():
                    acc[i] = acc.get(i, 0) + x * y
            out[j] = acc
        return IntMatrix(self.rows, other.cols, out)

    @property
    def T(self) -> "IntMatrix":
        out: dict = {}
        for j, col in self.data.items():
            for i, x in col.items():
                out.setdefault(i, {})[j] = x
        return IntMatrix(self.cols, self.rows, out)

    adjoint = T  # real entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(
            (j, tuple(sorted(c.items()))) for j, c in self.data.items()))))

    def is_zero(self) -> bool:
        return not self.data

    def nnz(self) -> int:
        return sum(len(c) for c in self.data.values())

    def restrict_columns(self, keep: Iterable) -> "IntMatrix":
        """Zero out every column not in ``keep``."""
        keep = set(keep)
        return IntMatrix(self.rows, self.cols,
                         {j: c for j, c in self.data.items() if j in keep})

    def nonzero_columns(self) -> list:
        return sorted(self.data)

    def nonzero_rows(self) -> list:
        return sorted({i for c in self.data.values() for i in c})

    def rank(self) -> int:
        """Rank over the rationals by Gaussian elimination."""
        rows: list = []
        for col in self.data.values():
            rows.append({i: Fraction(x) for i, x in col.items()})
        # eliminate on the transpose (columns as vectors); rank is the same
        pivots: dict = {}
        rank = 0
        for vec in rows:
            vec = dict(vec)
            while vec:
                p = min(vec)
                if p not in pivots:
                    pivots[p] = vec
                    rank += 1
                    break
                base = pivots[p]
                factor = vec[p] / base[p]
                for i, x in base.items():
                    y = vec.get(i, 0) - factor * x
                    if y:
                        vec[i] = y
                    else:
                        vec.pop(i, None)
        return rank

    def to_dense(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in self.data.items():
            for i, x in col.items():
                out[i][j] = x
        return out

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"
