"""Small exact matrices and dense index arrays.

Entries are any ring elements that support ``+``, ``-`` and ``*``:
:class:`~fractions.Fraction` for numeric work, :class:`MultiPoly` for
symbolic work.  Indices are 0-based throughout.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterator

ZERO = Fraction(0)
ONE = Fraction(1)


def _is_zero(x) -> bool:
    return not x


class Matrix:
    """Square matrix; ``M[i, j]`` is the entry with upper index ``i``, lower ``j``."""

    __slots__ = ("rows", "n")

    def __init__(self, rows):
        rows = tuple(tuple(Fraction(x) if isinstance(x, int) else x for x in r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.rows = rows
        self.n = n

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> Matrix:
        return cls([[ZERO] * n for _ in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: Matrix) -> Matrix:
        n = self.n
        return Matrix(
            [
                [sum((self.rows[i][k] * other.rows[k][j] for k in range(n)), ZERO) for j in range(n)]
                for i in range(n)
            ]
        )

    def __mul__(self, scalar) -> Matrix:
        return Matrix([[x * scalar for x in r] for r in self.rows])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def transpose(self) -> Matrix:
        return Matrix(list(zip(*self.rows)))

    def det(self):
        return _det(self.rows)

    def is_invertible(self) -> bool:
        return not _is_zero(self.det())

    def inverse(self) -> Matrix:
        """Exact inverse; raises :class:`ZeroDivisionError` when singular."""
        n = self.n
        a = [[Fraction(x) for x in r] + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col]), None)
            if pivot is None:
                raise ZeroDivisionError("matrix is singular")
            a[col], a[pivot] = a[pivot], a[col]
            p = a[col][col]
            a[col] = [x / p for x in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return Matrix([r[n:] for r in a])

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix([{body}])"


def _det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = ZERO
    for j in range(n):
        if _is_zero(rows[0][j]):
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


class Tensor:
    """Dense array over ``{0..dim-1}**rank`` with no symmetry assumed."""

    __slots__ = ("dim", "rank", "data")

    def __init__(self, dim: int, rank: int, data: dict[tuple[int, ...], object]):
        self.dim = dim
        self.rank = rank
        self.data = data

    @classmethod
    def from_function(cls, dim: int, rank: int, fn: Callable[..., object]) -> Tensor:
        return cls(dim, rank, {idx: fn(*idx) for idx in itertools.product(range(dim), repeat=rank)})

    @classmethod
    def zeros(cls, dim: int, rank: int) -> Tensor:
        return cls.from_function(dim, rank, lambda *_: ZERO)

    def indices(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.dim), repeat=self.rank)

    def __getitem__(self, idx):
        return self.data[tuple(idx)]

    def items(self):
        return self.data.items()

    def map(self, fn) -> Tensor:
        return Tensor(self.dim, self.rank, {k: fn(v) for k, v in self.data.items()})

    def __add__(self, other: Tensor) -> Tensor:
        return Tensor(self.dim, self.rank, {k: v + other.data[k] for k, v in self.data.items()})

    def __sub__(self, other: Tensor) -> Tensor:
        return Tensor(self.dim, self.rank, {k: v - other.data[k] for k, v in self.data.items()})

    def __mul__(self, scalar) -> Tensor:
        return Tensor(self.dim, self.rank, {k: v * scalar for k, v in self.data.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Tensor) or (self.dim, self.rank) != (other.dim, other.rank):
            return NotImplemented
        return all(_is_zero(v - other.data[k]) for k, v in self.data.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return all(_is_zero(v) for v in self.data.values())

    def permuted(self, order: tuple[int, ...]) -> Tensor:
        """``out[idx] = self[idx[order[0]], idx[order[1]], ...]``."""
        return Tensor(
            self.dim,
            self.rank,
            {idx: self.data[tuple(idx[o] for o in order)] for idx in self.indices()},
        )

    def apply_lower(self, axis: int, m: Matrix) -> Tensor:
        """Transform a covariant axis: ``out[..a..] = sum_b self[..b..] * m[b, a]``."""
        return self._contract(axis, lambda new, old: m.rows[old][new])

    def apply_upper(self, axis: int, m: Matrix) -> Tensor:
        """Transform a contravariant axis: ``out[..a..] = sum_b m[a, b] * self[..b..]``."""
        return self._contract(axis, lambda new, old: m.rows[new][old])

    def _contract(self, axis, coeff) -> Tensor:
        dim = self.dim
        # nonzero (old index, coefficient) pairs for each new index value
        weights = [
            [(b, c) for b in range(dim) for c in (coeff(a, b),) if not _is_zero(c)]
            for a in range(dim)
        ]
        data = self.data
        out = {}
        for idx in self.indices():
            head, tail = idx[:axis], idx[axis + 1 :]
            acc = ZERO
            for b, c in weights[idx[axis]]:
                v = data[head + (b,) + tail]
                if not _is_zero(v):
                    acc = acc + c * v
            out[idx] = acc
        return Tensor(dim, self.rank, out)

    def residual(self, other: Tensor) -> dict[tuple[int, ...], object]:
        """Nonzero componentwise differences ``self - other``."""
        out = {}
        for k, v in self.data.items():
            d = v - other.data[k]
            if not _is_zero(d):
                out[k] = d
        return out

    def __repr__(self):
        return f"Tensor(dim={self.dim}, rank={self.rank})"
