"""Exact rationals and sparse multivariate polynomials.

Coefficients are :class:`fractions.Fraction`.  A :class:`MultiPoly` keeps an
integer numerator polynomial over a sorted tuple of variable names plus one
positive common denominator; monomials are packed into Python integers so
the product kernel in :mod:`cubicforms.kernel` works on plain ints.
"""

from __future__ import annotations

import heapq
import math
import re
from fractions import Fraction
from functools import reduce
from numbers import Rational as _RationalABC
from operator import or_
from typing import Iterable, Mapping

from . import kernel

__all__ = [
    "Rational",
    "Monomial",
    "MultiPoly",
    "PolyParseError",
    "NotDivisibleError",
    "parse_rational",
    "poly_parse",
    "poly_add",
    "poly_mul",
    "poly_subst_linear",
    "poly_coeff",
    "var_sort_key",
]

Rational = Fraction

BITS = 16
_MASK = (1 << BITS) - 1
_MAX_DEGREE = _MASK


class PolyParseError(ValueError):
    """Raised for malformed polynomial text."""

    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} (at column {pos + 1})"
        super().__init__(message)


class NotDivisibleError(ArithmeticError):
    pass


def var_sort_key(name: str):
    """Natural ordering for variable names, so ``z2 < z10``."""
    parts = re.split(r"(\d+)", name)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse ``int`` or ``int/int``; a zero denominator is an error."""
    m = re.fullmatch(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*", text)
    if not m:
        raise PolyParseError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise PolyParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


class Monomial:
    """A product of variables with positive exponents.

    Ordering is graded lexicographic with variables in natural name order;
    ``x1**3 > x1**2*x2 > x1*x2**2 > x2**3 > x1**2``.
    """

    __slots__ = ("_powers",)

    def __init__(self, exponents: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        powers = {}
        for name, e in items:
            if not isinstance(e, int) or e < 0:
                raise ValueError(f"exponent of {name} must be a non-negative int")
            if e:
                powers[name] = powers.get(name, 0) + e
        self._powers = tuple(sorted(powers.items(), key=lambda kv: var_sort_key(kv[0])))

    @property
    def exponents(self) -> dict[str, int]:
        return dict(self._powers)

    def degree(self) -> int:
        return sum(e for _, e in self._powers)

    def __getitem__(self, name: str) -> int:
        return dict(self._powers).get(name, 0)

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(list(self._powers) + list(other._powers))

    def _key(self):
        return (-self.degree(), tuple((var_sort_key(v), -e) for v, e in self._powers))

    def __lt__(self, other: Monomial) -> bool:
        # larger in graded-lex means earlier in the descending key
        return self._key() > other._key()

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        return other < self

    def __ge__(self, other):
        return self == other or other < self

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._powers == other._powers

    def __hash__(self):
        return hash(self._powers)

    def __repr__(self):
        return f"Monomial({dict(self._powers)!r})"

    def __str__(self):
        return _format_factors(self._powers, "") or "1"


def _format_factors(powers, sep: str) -> str:
    return sep.join(v if e == 1 else f"{v}^{e}" for v, e in powers)


def _merge_vars(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    if a == b or not b:
        return a
    if not a:
        return b
    return tuple(sorted(set(a) | set(b), key=var_sort_key))


def _repack(terms: dict[int, int], old: tuple[str, ...], new: tuple[str, ...]) -> dict[int, int]:
    if old == new:
        return terms
    # variables absent from ``new`` must have zero exponent in every term
    position = {v: k for k, v in enumerate(new)}
    shifts = [(k * BITS, position[v] * BITS) for k, v in enumerate(old) if v in position]
    out = {}
    for key, c in terms.items():
        nk = 0
        for src, dst in shifts:
            e = (key >> src) & _MASK
            if e:
                nk |= e << dst
        out[nk] = c
    return out


def _unpack(key: int, nvars: int) -> list[int]:
    return [(key >> (k * BITS)) & _MASK for k in range(nvars)]


def _key_degree(key: int, nvars: int) -> int:
    return sum(_unpack(key, nvars))


class MultiPoly:
    """Immutable sparse polynomial with rational coefficients.

    Build one with :meth:`var`, :meth:`const`, :meth:`from_terms` or
    :func:`poly_parse`, then combine with ``+ - * **``.  Integers and
    fractions mix freely with polynomials; floats are rejected.
    """

    __slots__ = ("_vars", "_terms", "_den", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        if not terms:
            self._set((), {}, 1)
            return
        names = set()
        for m in terms:
            names.update(m.exponents)
        vars_ = tuple(sorted(names, key=var_sort_key))
        index = {v: k for k, v in enumerate(vars_)}
        fracs = {}
        for m, c in terms.items():
            c = _as_fraction(c)
            if not c:
                continue
            key = 0
            for v, e in m._powers:
                if e > _MAX_DEGREE:
                    raise OverflowError("exponent too large")
                key |= e << (index[v] * BITS)
            fracs[key] = fracs.get(key, 0) + c
        den = reduce(math.lcm, (f.denominator for f in fracs.values()), 1)
        ints = {k: int(f * den) for k, f in fracs.items() if f}
        self._set(*_normalize(vars_, ints, den))

    def _set(self, vars_, terms, den):
        self._vars = vars_
        self._terms = terms
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, vars_, terms, den) -> MultiPoly:
        p = cls.__new__(cls)
        p._set(*_normalize(vars_, terms, den))
        return p

    # -- constructors -------------------------------------------------

    @classmethod
    def var(cls, name: str) -> MultiPoly:
        return cls._raw((name,), {1: 1}, 1)

    @classmethod
    def const(cls, value) -> MultiPoly:
        c = _as_fraction(value)
        if not c:
            return cls._raw((), {}, 1)
        return cls._raw((), {0: c.numerator}, c.denominator)

    @classmethod
    def from_terms(cls, terms: Mapping[Monomial, object]) -> MultiPoly:
        return cls(terms)

    @classmethod
    def coerce(cls, value) -> MultiPoly:
        if isinstance(value, MultiPoly):
            return value
        return cls.const(value)

    # -- inspection ---------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        n = len(self._vars)
        out = {}
        for key, c in self._terms.items():
            exps = _unpack(key, n)
            out[Monomial(zip(self._vars, exps))] = Fraction(c, self._den)
        return out

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        n = len(self._vars)
        return max((_key_degree(k, n) for k in self._terms), default=-1)

    def is_constant(self) -> bool:
        return not self._vars

    def constant_value(self) -> Fraction:
        if self._vars:
            raise ValueError("polynomial is not constant")
        return Fraction(self._terms.get(0, 0), self._den)

    def coeff(self, monomial: Monomial) -> Fraction:
        index = {v: k for k, v in enumerate(self._vars)}
        key = 0
        for v, e in monomial._powers:
            if v not in index:
                return Fraction(0)
            key |= e << (index[v] * BITS)
        return Fraction(self._terms.get(key, 0), self._den)

    def _sorted_keys(self):
        n = len(self._vars)
        return sorted(
            self._terms,
            key=lambda k: (-_key_degree(k, n), [-e for e in _unpack(k, n)]),
        )

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = self._sorted_keys()[0]
        exps = _unpack(key, len(self._vars))
        return Monomial(zip(self._vars, exps)), Fraction(self._terms[key], self._den)

    # -- arithmetic ---------------------------------------------------

    def _aligned(self, other: MultiPoly):
        vars_ = _merge_vars(self._vars, other._vars)
        return (
            vars_,
            _repack(self._terms, self._vars, vars_),
            _repack(other._terms, other._vars, vars_),
        )

    def __add__(self, other):
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        vars_, a, b = self._aligned(other)
        da, db = self._den, other._den
        den = math.lcm(da, db)
        fa, fb = den // da, den // db
        out = {k: c * fa for k, c in a.items()}
        for k, c in b.items():
            v = out.get(k, 0) + c * fb
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return MultiPoly._raw(vars_, out, den)

    __radd__ = __add__

    def __neg__(self):
        p = MultiPoly.__new__(MultiPoly)
        p._set(self._vars, {k: -c for k, c in self._terms.items()}, self._den)
        return p

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return other + (-self)

    def _scale(self, c: Fraction) -> MultiPoly:
        if not c or not self._terms:
            return MultiPoly._raw((), {}, 1)
        num, den = c.numerator, c.denominator
        return MultiPoly._raw(
            self._vars, {k: v * num for k, v in self._terms.items()}, self._den * den
        )

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                c = _as_fraction(other)
            except TypeError:
                return NotImplemented
            return self._scale(c)
        if not self._terms or not other._terms:
            return MultiPoly._raw((), {}, 1)
        if not other._vars:
            return self._scale(other.constant_value())
        if not self._vars:
            return other._scale(self.constant_value())
        if self.degree() + other.degree() > _MAX_DEGREE:
            raise OverflowError("product degree exceeds packed exponent width")
        vars_, a, b = self._aligned(other)
        prod = kernel.mul_terms(a, b, len(vars_), BITS)
        return MultiPoly._raw(vars_, prod, self._den * other._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if other.is_constant():
                other = other.constant_value()
            else:
                return self.exact_div(other)
        c = _as_fraction(other)
        if not c:
            raise ZeroDivisionError("polynomial division by zero")
        return self._scale(1 / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative int")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return (
            self._vars == other._vars
            and self._den == other._den
            and self._terms == other._terms
        )

    def __hash__(self):
        if self._hash is None:
            if not self._vars:
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self._vars, frozenset(self._terms.items()), self._den))
        return self._hash

    # -- division -----------------------------------------------------

    def exact_div(self, divisor: MultiPoly) -> MultiPoly:
        """Quotient of an exact division; raises :class:`NotDivisibleError`.

        Ordinary multivariate division by a single polynomial.  A single
        polynomial generates its own ideal's Groebner basis, so a leading
        term of the running remainder that the divisor's leading term does
        not divide proves the division is inexact.
        """
        divisor = MultiPoly.coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if not self._terms:
            return self
        vars_, rem, dv = self._aligned(divisor)
        n = len(vars_)

        def order(k):
            return (-_key_degree(k, n), [-e for e in _unpack(k, n)])

        lead_key = min(dv, key=order)
        lead_exps = _unpack(lead_key, n)
        lead_c = dv[lead_key]
        # work on numerators; rescale by the two denominators at the end
        quotient: dict[int, Fraction] = {}
        rem = {k: Fraction(c) for k, c in rem.items()}
        heap = [(order(k), k) for k in rem]
        heapq.heapify(heap)
        while heap:
            _, k = heapq.heappop(heap)
            c = rem.get(k)
            if not c:
                continue
            exps = _unpack(k, n)
            if any(e < le for e, le in zip(exps, lead_exps)):
                raise NotDivisibleError("polynomial is not divisible by the divisor")
            tk = k - lead_key
            tc = c / lead_c
            quotient[tk] = tc
            for dk, dc in dv.items():
                nk = tk + dk
                nv = rem.get(nk, 0) - tc * dc
                if nv:
                    if nk not in rem:
                        heapq.heappush(heap, (order(nk), nk))
                    rem[nk] = nv
                else:
                    rem.pop(nk, None)
        scale = Fraction(divisor._den, self._den)
        den = reduce(math.lcm, ((q * scale).denominator for q in quotient.values()), 1)
        ints = {k: int(q * scale * den) for k, q in quotient.items()}
        return MultiPoly._raw(vars_, ints, den)

    # -- substitution / evaluation ------------------------------------

    def subs(self, mapping: Mapping[str, object]) -> MultiPoly:
        """Replace every variable by a polynomial (or number) and expand."""
        missing = [v for v in self._vars if v not in mapping]
        if missing:
            raise KeyError(f"no substitution given for {', '.join(missing)}")
        n = len(self._vars)
        images = [MultiPoly.coerce(mapping[v]) for v in self._vars]
        powers: list[dict[int, MultiPoly]] = [{} for _ in range(n)]

        def power(k, e):
            cache = powers[k]
            if e not in cache:
                cache[e] = images[k] ** e
            return cache[e]

        total = MultiPoly.const(0)
        for key, c in self._terms.items():
            term = MultiPoly.const(Fraction(c, self._den))
            for k, e in enumerate(_unpack(key, n)):
                if e:
                    term = term * power(k, e)
            total = total + term
        return total

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        missing = [v for v in self._vars if v not in values]
        if missing:
            raise KeyError(f"no value given for {', '.join(missing)}")
        n = len(self._vars)
        xs = [_as_fraction(values[v]) for v in self._vars]
        total = Fraction(0)
        for key, c in self._terms.items():
            t = Fraction(c)
            for x, e in zip(xs, _unpack(key, n)):
                if e:
                    t *= x**e
            total += t
        return total / self._den

    def collect(self, names: Iterable[str]) -> dict[Monomial, MultiPoly]:
        """Group terms by their monomial in ``names``.

        Returns ``{monomial in names: coefficient polynomial in the rest}``.
        """
        names = set(names)
        n = len(self._vars)
        inner = [k for k, v in enumerate(self._vars) if v in names]
        outer = [k for k, v in enumerate(self._vars) if v not in names]
        outer_vars = tuple(self._vars[k] for k in outer)
        groups: dict[tuple, dict[int, int]] = {}
        for key, c in self._terms.items():
            exps = _unpack(key, n)
            head = tuple((self._vars[k], exps[k]) for k in inner if exps[k])
            rest = 0
            for j, k in enumerate(outer):
                if exps[k]:
                    rest |= exps[k] << (j * BITS)
            groups.setdefault(head, {})[rest] = c
        return {
            Monomial(head): MultiPoly._raw(outer_vars, terms, self._den)
            for head, terms in groups.items()
        }

    # -- printing -----------------------------------------------------

    def to_str(self, sep: str = "") -> str:
        """Canonical text: graded-lex descending, re-parseable.

        ``sep`` goes between factors; the default juxtaposes them
        (``3x1^2x2``), ``"*"`` gives ``3*x1^2*x2``.
        """
        if not self._terms:
            return "0"
        n = len(self._vars)
        parts = []
        for key in self._sorted_keys():
            c = Fraction(self._terms[key], self._den)
            exps = _unpack(key, n)
            factors = _format_factors(
                [(v, e) for v, e in zip(self._vars, exps) if e], sep
            )
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = factors
            elif mag.denominator == 1:
                body = f"{mag}{sep}{factors}"
            else:
                body = f"{mag} {factors}" if not sep else f"{mag}{sep}{factors}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MultiPoly({self.to_str('*')!r})"


def _normalize(vars_, terms, den):
    """Lowest terms for the numerator/denominator pair; drop unused variables."""
    if not terms:
        return (), {}, 1
    g = math.gcd(den, *terms.values())
    if g != 1:
        den //= g
        terms = {k: c // g for k, c in terms.items()}
    used = reduce(or_, terms, 0)
    if used and vars_:
        keep = tuple(v for k, v in enumerate(vars_) if (used >> (k * BITS)) & _MASK)
        if len(keep) != len(vars_):
            terms = _repack(terms, vars_, keep)
            vars_ = keep
    elif not used:
        vars_ = ()
    return vars_, terms, den


# -- parsing -----------------------------------------------------------

_WS = re.compile(r"\s*")
_NUMBER = re.compile(r"\d+")
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class _Parser:
    def __init__(self, text: str, allowed: frozenset[str] | None):
        self.text = text
        self.pos = 0
        self.allowed = allowed
        if allowed is not None:
            self.by_length = sorted(allowed, key=len, reverse=True)

    def error(self, message):
        raise PolyParseError(message, self.text, self.pos)

    def skip(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos : self.pos + 1]

    def parse(self) -> MultiPoly:
        terms: dict[Monomial, Fraction] = {}
        first = True
        while True:
            ch = self.peek()
            if not ch:
                if first:
                    self.error("empty polynomial")
                break
            sign = 1
            if not first:
                if ch not in "+-":
                    self.error(f"expected '+' or '-', found {ch!r}")
                sign = -1 if ch == "-" else 1
                self.pos += 1
                ch = self.peek()
            while ch in ("+", "-") and ch:
                if ch == "-":
                    sign = -sign
                self.pos += 1
                ch = self.peek()
            coeff, mono = self.term()
            terms[mono] = terms.get(mono, 0) + sign * coeff
            first = False
        return MultiPoly(terms)

    def term(self) -> tuple[Fraction, Monomial]:
        ch = self.peek()
        coeff = Fraction(1)
        have_coeff = False
        if ch.isdigit():
            coeff = self.rational()
            have_coeff = True
            if self.peek() == "*":
                self.pos += 1
                if not self.peek().isalpha():
                    self.error("expected a variable after '*'")
        factors = []
        while True:
            ch = self.peek()
            if ch.isalpha():
                factors.append(self.factor())
            elif ch == "*" and factors:
                self.pos += 1
                if not self.peek().isalpha():
                    self.error("expected a variable after '*'")
            else:
                break
        if not have_coeff and not factors:
            self.error("expected a coefficient or a variable" if ch else "unexpected end of input")
        return coeff, Monomial(factors)

    def rational(self) -> Fraction:
        m = _NUMBER.match(self.text, self.pos)
        num = int(m.group())
        self.pos = m.end()
        if self.peek() == "/":
            self.pos += 1
            self.skip()
            m = _NUMBER.match(self.text, self.pos)
            if not m:
                self.error("expected an integer denominator")
            den = int(m.group())
            if den == 0:
                self.error("zero denominator in coefficient")
            self.pos = m.end()
            return Fraction(num, den)
        return Fraction(num)

    def factor(self) -> tuple[str, int]:
        name = self.name()
        exp = 1
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            m = _NUMBER.match(self.text, self.pos)
            if not m:
                self.error(f"malformed exponent after {name}^")
            exp = int(m.group())
            if exp > _MAX_DEGREE:
                self.error("exponent too large")
            self.pos = m.end()
        return name, exp

    def name(self) -> str:
        if self.allowed is None:
            m = _IDENT.match(self.text, self.pos)
            self.pos = m.end()
            return m.group()
        for cand in self.by_length:
            if self.text.startswith(cand, self.pos):
                self.pos += len(cand)
                return cand
        m = _IDENT.match(self.text, self.pos)
        self.error(f"unknown variable {m.group()!r}")


def poly_parse(text: str, allowed_vars: Iterable[str] | None = None) -> MultiPoly:
    """Parse polynomial text such as ``"3/2 x1^2 x2 - x2^3"``.

    With ``allowed_vars`` given, variables may be juxtaposed (``x1^2x2``)
    and are matched longest-first; anything else is an unknown variable.
    Without it, identifiers are maximal ``[A-Za-z][A-Za-z0-9_]*`` runs.
    """
    allowed = frozenset(allowed_vars) if allowed_vars is not None else None
    return _Parser(text, allowed).parse()


def poly_add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return MultiPoly.coerce(a) + b


def poly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return MultiPoly.coerce(a) * b


def poly_subst_linear(p: MultiPoly, subst: Mapping[str, object]) -> MultiPoly:
    """Substitute polynomials for variables; linear images are the usual case."""
    return MultiPoly.coerce(p).subs(subst)


def poly_coeff(p: MultiPoly, m: Monomial) -> Fraction:
    return MultiPoly.coerce(p).coeff(m)
