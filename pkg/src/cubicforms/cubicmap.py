"""Cubic maps of the plane, their coefficient tensors and affine compositions.

A cubic map sends ``(x1, x2)`` to ``(y1, y2)`` with each ``y`` a polynomial of
degree at most three.  Only the cubic part enters the invariants; lower
degree terms are carried through compositions unchanged in meaning.

Tensor indices are 0-based: ``F[i, m, n, p]`` holds the coefficient with upper
index ``i + 1`` and lower indices ``m + 1, n + 1, p + 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .polyalg import Monomial, MultiPoly, PolyParseError, parse_rational, poly_parse
from .tensor import ONE, ZERO, Matrix, Tensor

X_VARS = ("x1", "x2")
_X = tuple(MultiPoly.var(v) for v in X_VARS)

# lower index multiset (by count of second-axis indices) -> monomial in x1, x2
_CUBIC_MONOMIALS = tuple(Monomial({"x1": 3 - k, "x2": k}) for k in range(4))
_BINOMIAL = (1, 3, 3, 1)


class MapFormatError(ValueError):
    """Bad map or matrix file; ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class CubicMap:
    y1: MultiPoly
    y2: MultiPoly

    def __post_init__(self):
        for name, p in (("y1", self.y1), ("y2", self.y2)):
            if not isinstance(p, MultiPoly):
                object.__setattr__(self, name, MultiPoly.coerce(p))
                p = getattr(self, name)
            extra = set(p.variables) - set(X_VARS)
            if extra:
                raise ValueError(f"{name} uses variables other than x1, x2: {sorted(extra)}")
            if p.degree() > 3:
                raise ValueError(f"{name} has degree {p.degree()}, which exceeds 3")

    @property
    def components(self) -> tuple[MultiPoly, MultiPoly]:
        return (self.y1, self.y2)

    def __add__(self, other: CubicMap) -> CubicMap:
        return CubicMap(self.y1 + other.y1, self.y2 + other.y2)

    def to_text(self) -> str:
        return f"y1 = {self.y1}\ny2 = {self.y2}\n"


class CoeffTensor(Tensor):
    """The (1,3) tensor of cubic coefficients, symmetric in its lower indices."""

    def __init__(self, data):
        super().__init__(2, 4, data)

    @classmethod
    def from_components(cls, values) -> CoeffTensor:
        """Build from ``values[i][k]``: upper index ``i``, ``k`` lower indices equal to 2.

        ``values[i]`` lists ``(F_111, F_112, F_122, F_222)`` for that row.
        """
        data = {}
        for i in range(2):
            for m in range(2):
                for n in range(2):
                    for p in range(2):
                        v = values[i][m + n + p]
                        data[(i, m, n, p)] = Fraction(v) if isinstance(v, int) else v
        return cls(data)

    @classmethod
    def symbolic(cls) -> CoeffTensor:
        """Eight independent indeterminates ``F1_111 ... F2_222``."""
        return cls.from_components(
            [[MultiPoly.var(f"F{i + 1}_{'1' * (3 - k)}{'2' * k}") for k in range(4)] for i in range(2)]
        )

    @classmethod
    def from_tensor(cls, t: Tensor) -> CoeffTensor:
        return cls(dict(t.data))

    def component(self, i: int, k: int):
        """Entry with upper index ``i`` and ``k`` of the three lower indices equal to 2."""
        return self.data[(i,) + (0,) * (3 - k) + (1,) * k]

    def is_symmetric(self) -> bool:
        for (i, *low), v in self.data.items():
            for perm in permutations(low):
                if v != self.data[(i, *perm)]:
                    return False
        return True

    def __repr__(self):
        rows = [[str(self.component(i, k)) for k in range(4)] for i in range(2)]
        return f"CoeffTensor({rows})"


@dataclass(frozen=True)
class AffineMap:
    """``x -> linear @ x + shift``."""

    linear: Matrix
    shift: tuple = (ZERO, ZERO)

    @classmethod
    def identity(cls) -> AffineMap:
        return cls(Matrix.identity(2))

    def images(self) -> dict[str, MultiPoly]:
        t = self.linear
        return {
            X_VARS[i]: t[i, 0] * _X[0] + t[i, 1] * _X[1] + self.shift[i] for i in range(2)
        }

    def inverse(self) -> AffineMap:
        s = self.linear.inverse()
        a = self.shift
        return AffineMap(s, tuple(-(s[i, 0] * a[0] + s[i, 1] * a[1]) for i in range(2)))


def matrix2(rows) -> Matrix:
    m = Matrix(rows)
    if m.n != 2:
        raise ValueError("expected a 2x2 matrix")
    return m


# -- parsing -------------------------------------------------------------

_LINE = re.compile(r"^\s*(y1|y2|a)\s*=\s*(.*?)\s*$")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def parse_cubic_map(text: str) -> CubicMap:
    """Parse a map file with lines ``y1 = <poly>`` and ``y2 = <poly>``."""
    found: dict[str, MultiPoly] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m or m.group(1) == "a":
            raise MapFormatError(f"expected 'y1 = ...' or 'y2 = ...', got {raw.strip()!r}", lineno)
        name, body = m.groups()
        if name in found:
            raise MapFormatError(f"duplicate component {name}", lineno)
        try:
            poly = poly_parse(body, X_VARS)
        except PolyParseError as exc:
            raise MapFormatError(str(exc), lineno) from exc
        if poly.degree() > 3:
            raise MapFormatError(f"{name} has degree {poly.degree()}, which exceeds 3", lineno)
        found[name] = poly
    for name in ("y1", "y2"):
        if name not in found:
            raise MapFormatError(f"missing component line for {name}")
    return CubicMap(found["y1"], found["y2"])


def parse_matrix(text: str) -> AffineMap:
    """Parse two rows of two rationals, optionally followed by ``a = <r> <r>``."""
    rows = []
    shift = (ZERO, ZERO)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _LINE.match(line)
        if m and m.group(1) == "a":
            if len(rows) != 2:
                raise MapFormatError("shift line must follow the two matrix rows", lineno)
            shift = tuple(_rationals(m.group(2), lineno))
            continue
        if len(rows) == 2:
            raise MapFormatError("unexpected extra line", lineno)
        rows.append(_rationals(line, lineno))
    if len(rows) != 2:
        raise MapFormatError("expected two matrix rows")
    return AffineMap(Matrix(rows), shift)


def _rationals(line: str, lineno: int) -> list[Fraction]:
    parts = line.split()
    if len(parts) != 2:
        raise MapFormatError(f"expected two rationals, got {line!r}", lineno)
    try:
        return [parse_rational(p) for p in parts]
    except PolyParseError as exc:
        raise MapFormatError(str(exc), lineno) from exc


def format_matrix(phi: AffineMap) -> str:
    lines = [" ".join(str(x) for x in row) for row in phi.linear.rows]
    if any(phi.shift):
        lines.append("a = " + " ".join(str(x) for x in phi.shift))
    return "\n".join(lines) + "\n"


# -- tensor extraction and compositions ----------------------------------


def coeff_tensor(f: CubicMap) -> CoeffTensor:
    """Cubic coefficients; mixed monomials are divided by their multiplicity 3."""
    values = [
        [Fraction(y.coeff(_CUBIC_MONOMIALS[k])) / _BINOMIAL[k] for k in range(4)]
        for y in f.components
    ]
    return CoeffTensor.from_components(values)


def cubic_part(f: CubicMap) -> CubicMap:
    return tensor_to_map(coeff_tensor(f))


def tensor_to_map(F: CoeffTensor) -> CubicMap:
    """Homogeneous cubic map with coefficient tensor ``F``."""
    ys = []
    for i in range(2):
        ys.append(
            MultiPoly({_CUBIC_MONOMIALS[k]: _BINOMIAL[k] * F.component(i, k) for k in range(4)})
        )
    return CubicMap(*ys)


def compose_right(ftilde: CubicMap, phi: AffineMap) -> CubicMap:
    """``ftilde o phi``; a singular linear part is allowed."""
    images = phi.images()
    return CubicMap(*(y.subs(images) for y in ftilde.components))


def compose_left(ftilde: CubicMap, phi: AffineMap) -> CubicMap:
    """``phi^{-1} o ftilde``; raises :class:`ZeroDivisionError` for singular ``phi``."""
    inv = phi.inverse()
    s, b = inv.linear, inv.shift
    y1, y2 = ftilde.components
    return CubicMap(*(s[i, 0] * y1 + s[i, 1] * y2 + b[i] for i in range(2)))


def right_compose_tensor(ftilde: Tensor, t: Matrix) -> CoeffTensor:
    """Cubic tensor of ``ftilde o phi`` when ``phi`` has linear part ``t``."""
    out = ftilde
    for axis in (1, 2, 3):
        out = out.apply_lower(axis, t)
    return CoeffTensor.from_tensor(out)


def left_compose_tensor(ftilde: Tensor, s: Matrix) -> CoeffTensor:
    """Cubic tensor of ``phi^{-1} o ftilde``; ``s`` is the inverse of phi's linear part."""
    return CoeffTensor.from_tensor(ftilde.apply_upper(0, s))


def equivalence_tensor(ftilde: Tensor, s1: Matrix, t2: Matrix) -> CoeffTensor:
    """Tensor of ``f`` with ``phi1 o f = ftilde o phi2``; ``s1 = T1^{-1}``, ``t2 = T2``."""
    return left_compose_tensor(right_compose_tensor(ftilde, t2), s1)


def change_coordinates(F: Tensor, s: Matrix) -> CoeffTensor:
    """Components of ``F`` in new coordinates with transition matrix ``s``."""
    t = s.inverse()
    out = F.apply_upper(0, t)
    for axis in (1, 2, 3):
        out = out.apply_lower(axis, s)
    return CoeffTensor.from_tensor(out)


def restore_coordinates(Ftilde: Tensor, s: Matrix) -> CoeffTensor:
    """Inverse of :func:`change_coordinates` for the same transition matrix."""
    t = s.inverse()
    out = Ftilde.apply_upper(0, s)
    for axis in (1, 2, 3):
        out = out.apply_lower(axis, t)
    return CoeffTensor.from_tensor(out)


IDENTITY2 = Matrix([[ONE, ZERO], [ZERO, ONE]])
