"""The six determinants of a cubic map and its six quartic forms.

Each quartic form is built three independent ways:

* :func:`omega_printed` -- from the closed-form monomial tables,
* :func:`omega_derived` -- by right-composing with a symbolic linear map,
  taking the determinant and dividing out ``z1*z4 - z2*z3``,
* :func:`theorem3_form` -- by contracting the coefficient tensor with the
  2D Levi-Civita pseudotensor and symmetrizing over listed index orders.

The derived construction is canonical.  :func:`discrepancy_report` compares
all three over fully symbolic coefficients.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, fields
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable

from .cubicmap import CoeffTensor, right_compose_tensor
from .polyalg import Monomial, MultiPoly
from .tensor import ZERO, Matrix, Tensor

Z_VARS = ("z1", "z2", "z3", "z4")
FORM_VARIABLES = {
    1: ("z1", "z2"),
    2: Z_VARS,
    3: Z_VARS,
    4: Z_VARS,
    5: Z_VARS,
    6: ("z3", "z4"),
}
G_LABELS = ("1111", "1112", "1122", "1212", "1222", "2222")

# determinant label -> the two coefficient columns, as counts of lower index 2
_G_COLUMNS = {
    "1111": (0, 1),
    "1112": (0, 2),
    "1122": (0, 3),
    "1212": (1, 2),
    "1222": (1, 3),
    "2222": (2, 3),
}

LEVI_CIVITA = ((0, 1), (-1, 0))
EXCHANGE = Matrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])


class DivisionFailure(ArithmeticError):
    """The composed determinant was not divisible by ``det T``."""


@dataclass(frozen=True)
class GSet:
    g1111: object
    g1112: object
    g1122: object
    g1212: object
    g1222: object
    g2222: object

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def as_dict(self) -> dict[str, object]:
        return dict(zip(G_LABELS, self.as_tuple()))

    def __getitem__(self, label: str):
        return getattr(self, "g" + label)

    def scaled(self, c) -> GSet:
        return GSet(*(c * g for g in self.as_tuple()))


def g_determinants(F: Tensor) -> GSet:
    F = F if isinstance(F, CoeffTensor) else CoeffTensor.from_tensor(F)
    vals = []
    for label in G_LABELS:
        a, b = _G_COLUMNS[label]
        vals.append(F.component(0, a) * F.component(1, b) - F.component(0, b) * F.component(1, a))
    return GSet(*vals)


# -- symmetric quartic forms -----------------------------------------------


def multiplicity(idx: Iterable[int]) -> int:
    """Number of distinct orderings of an index multiset."""
    idx = tuple(idx)
    out = factorial(len(idx))
    for v in set(idx):
        out //= factorial(idx.count(v))
    return out


def _exponents_to_index(exps) -> tuple[int, ...]:
    return tuple(k for k, e in enumerate(exps) for _ in range(e))


def _index_to_exponents(idx, n) -> tuple[int, ...]:
    return tuple(idx.count(k) for k in range(n))


class SymTensor4:
    """Fully symmetric rank-4 covariant tensor over 2 or 4 named variables.

    Stores one component per non-decreasing index tuple.  The form it
    represents is the sum over *all* index tuples, so a monomial's
    coefficient is its index multiplicity times the stored component.
    """

    __slots__ = ("variables", "components")

    def __init__(self, variables: tuple[str, ...], components: dict[tuple[int, ...], object]):
        if len(variables) not in (2, 4):
            raise ValueError("a quartic form lives on 2 or 4 variables")
        self.variables = tuple(variables)
        full = {}
        for idx in itertools.combinations_with_replacement(range(len(variables)), 4):
            full[idx] = components.get(idx, ZERO)
        self.components = full

    @property
    def dim(self) -> int:
        return len(self.variables)

    def __getitem__(self, idx):
        return self.components[tuple(sorted(idx))]

    @classmethod
    def zero(cls, variables) -> SymTensor4:
        return cls(variables, {})

    @classmethod
    def from_monomials(cls, variables, coeffs: dict[tuple[int, ...], object]) -> SymTensor4:
        """From ``{exponent vector: coefficient}``; divides by multiplicity."""
        comps = {}
        for exps, c in coeffs.items():
            if sum(exps) != 4:
                raise ValueError(f"monomial {exps} is not quartic")
            idx = _exponents_to_index(exps)
            comps[idx] = c * Fraction(1, multiplicity(idx))
        return cls(variables, comps)

    @classmethod
    def from_poly(cls, poly: MultiPoly, variables) -> SymTensor4:
        """Split a polynomial homogeneous of degree 4 in ``variables``.

        Other variables are treated as coefficients; numeric coefficients
        come back as fractions.
        """
        coeffs = {}
        for mono, c in poly.collect(variables).items():
            exps = tuple(mono[v] for v in variables)
            coeffs[exps] = c.constant_value() if c.is_constant() else c
        return cls.from_monomials(variables, coeffs)

    @classmethod
    def from_tensor(cls, t: Tensor, variables=None, check: bool = True) -> SymTensor4:
        variables = variables or Z_VARS[: t.dim]
        if check:
            for idx, v in t.items():
                if v != t[tuple(sorted(idx))]:
                    raise ValueError(f"tensor is not symmetric at {idx}")
        return cls(variables, {idx: t[idx] for idx in itertools.combinations_with_replacement(range(t.dim), 4)})

    def to_tensor(self) -> Tensor:
        return Tensor.from_function(self.dim, 4, lambda *idx: self[idx])

    def monomial_coefficients(self) -> dict[tuple[int, ...], object]:
        """``{exponent vector over self.variables: coefficient}``, zeros omitted."""
        out = {}
        for idx, c in self.components.items():
            if c:
                out[_index_to_exponents(idx, self.dim)] = multiplicity(idx) * c
        return out

    def coefficients_z(self) -> dict[tuple[int, int, int, int], object]:
        """Monomial coefficients keyed by exponent 4-vectors over ``z1..z4``."""
        pos = [Z_VARS.index(v) for v in self.variables]
        out = {}
        for exps, c in self.monomial_coefficients().items():
            full = [0, 0, 0, 0]
            for p, e in zip(pos, exps):
                full[p] = e
            out[tuple(full)] = c
        return out

    def to_poly(self) -> MultiPoly:
        total = MultiPoly.const(0)
        for exps, c in self.monomial_coefficients().items():
            total = total + MultiPoly({Monomial(zip(self.variables, exps)): 1}) * c
        return total

    def evaluate(self, z):
        return omega_eval(self, z)

    def scaled(self, c) -> SymTensor4:
        return SymTensor4(self.variables, {k: v * c for k, v in self.components.items()})

    def residual(self, other: SymTensor4) -> dict[tuple[int, ...], object]:
        if self.variables != other.variables:
            raise ValueError("forms live on different variables")
        out = {}
        for k, v in self.components.items():
            d = v - other.components[k]
            if d:
                out[k] = d
        return out

    def __eq__(self, other):
        if not isinstance(other, SymTensor4):
            return NotImplemented
        return self.variables == other.variables and not self.residual(other)

    __hash__ = None

    def __repr__(self):
        return f"SymTensor4({self.variables}, {self.to_poly().to_str('*')!r})"


def omega_eval(form: SymTensor4, z):
    """Value of the quartic form at ``z`` (one entry per form variable)."""
    z = tuple(z)
    if len(z) != form.dim:
        raise ValueError(f"expected {form.dim} coordinates, got {len(z)}")
    total = ZERO
    for idx, c in form.components.items():
        if not c:
            continue
        term = c * multiplicity(idx)
        for k in idx:
            term = term * z[k]
        total = total + term
    return total


def evaluate_on_vector(form: SymTensor4, z4) -> object:
    """Evaluate using the form's own coordinates picked out of a 4-vector."""
    return omega_eval(form, [z4[Z_VARS.index(v)] for v in form.variables])


# -- closed-form monomial tables ---------------------------------------------

# q -> [(exponents over z1..z4, {determinant label: integer factor})]
PRINTED_TABLE: dict[int, list[tuple[tuple[int, int, int, int], dict[str, int]]]] = {
    1: [
        ((4, 0, 0, 0), {"1111": 1}),
        ((3, 1, 0, 0), {"1112": 2}),
        ((2, 2, 0, 0), {"1212": 3, "1122": 1}),
        ((1, 3, 0, 0), {"1222": 2}),
        ((0, 4, 0, 0), {"2222": 1}),
    ],
    2: [
        ((3, 0, 1, 0), {"1111": 2}),
        ((3, 0, 0, 1), {"1112": 1}),
        ((2, 1, 1, 0), {"1112": 3}),
        ((2, 1, 0, 1), {"1212": 3, "1122": 1}),
        ((1, 2, 1, 0), {"1212": 3, "1122": 1}),
        ((1, 2, 0, 1), {"1222": 3}),
        ((0, 3, 1, 0), {"2222": 1}),
        ((0, 3, 0, 1), {"2222": 2}),
    ],
    3: [
        ((2, 0, 2, 0), {"1111": 3}),
        ((2, 0, 1, 1), {"1112": 3}),
        ((2, 0, 0, 2), {"1122": 1}),
        ((1, 1, 2, 0), {"1112": 3}),
        ((1, 1, 1, 1), {"1212": 9, "1122": 1}),
        ((1, 1, 0, 2), {"1222": 3}),
        ((0, 2, 2, 0), {"1122": 1}),
        ((0, 2, 1, 1), {"1222": 3}),
        ((0, 2, 0, 2), {"2222": 3}),
    ],
    4: [
        ((2, 0, 2, 0), {"1111": 1}),
        ((2, 0, 1, 1), {"1112": 1}),
        ((2, 0, 0, 2), {"1212": 1}),
        ((1, 1, 2, 0), {"1112": 1}),
        ((1, 1, 1, 1), {"1212": 1, "1122": 1}),
        ((1, 1, 0, 2), {"1222": 1}),
        ((0, 2, 2, 0), {"1212": 1}),
        ((0, 2, 1, 1), {"1222": 1}),
        ((0, 2, 0, 2), {"1222": 1}),
    ],
    5: [
        ((1, 0, 3, 0), {"1111": 2}),
        ((0, 1, 3, 0), {"1112": 1}),
        ((1, 0, 2, 1), {"1112": 3}),
        ((0, 1, 2, 1), {"1212": 3, "1122": 1}),
        ((1, 0, 1, 2), {"1212": 3, "1122": 1}),
        ((0, 1, 1, 2), {"1222": 3}),
        ((1, 0, 0, 3), {"1222": 1}),
        ((0, 1, 0, 3), {"2222": 2}),
    ],
    6: [
        ((0, 0, 4, 0), {"1111": 1}),
        ((0, 0, 3, 1), {"1112": 2}),
        ((0, 0, 2, 2), {"1212": 3, "1122": 1}),
        ((0, 0, 1, 3), {"1222": 2}),
        ((0, 0, 0, 4), {"2222": 1}),
    ],
}


def _check_q(q: int):
    if q not in FORM_VARIABLES:
        raise ValueError(f"form index must be 1..6, got {q}")


def omega_printed(q: int, G: GSet) -> SymTensor4:
    """Quartic form ``q`` from the closed-form monomial table."""
    _check_q(q)
    variables = FORM_VARIABLES[q]
    pos = [Z_VARS.index(v) for v in variables]
    g = G.as_dict()
    coeffs = {}
    for exps, combo in PRINTED_TABLE[q]:
        c = ZERO
        for label, k in combo.items():
            c = c + g[label] * k
        coeffs[tuple(exps[p] for p in pos)] = c
    return SymTensor4.from_monomials(variables, coeffs)


# -- the canonical construction ------------------------------------------------

_ZP = tuple(MultiPoly.var(v) for v in Z_VARS)
# T^1_1 = z1, T^2_1 = z2, T^1_2 = z3, T^2_2 = z4
SYMBOLIC_T = Matrix([[_ZP[0], _ZP[2]], [_ZP[1], _ZP[3]]])
DET_T = _ZP[0] * _ZP[3] - _ZP[1] * _ZP[2]


def _tensor_key(F: Tensor) -> tuple:
    return tuple(F[(i,) + (0,) * (3 - k) + (1,) * k] for i in range(2) for k in range(4))


@lru_cache(maxsize=256)
def _derived_all(key: tuple) -> tuple[SymTensor4, ...]:
    F = right_compose_tensor(CoeffTensor.from_components([key[:4], key[4:]]), SYMBOLIC_T)
    G = g_determinants(F)
    out = []
    for q, label in zip(range(1, 7), G_LABELS):
        det = MultiPoly.coerce(G[label])
        try:
            quotient = det.exact_div(DET_T)
        except ArithmeticError as exc:
            raise DivisionFailure(f"G{label} of the composed map is not divisible by det T") from exc
        out.append(SymTensor4.from_poly(quotient, FORM_VARIABLES[q]))
    return tuple(out)


def omega_derived(q: int, Ftilde: Tensor) -> SymTensor4:
    """Quartic form ``q`` defined through composition with a symbolic linear map.

    With ``T = [[z1, z3], [z2, z4]]`` the determinant ``q`` of ``Ftilde o T``
    is divided exactly by ``det T``; the quotient is the form.
    """
    _check_q(q)
    return _derived_all(_tensor_key(Ftilde))[q - 1]


# -- pseudotensor constructions ------------------------------------------------


def omega_tensor(F: Tensor) -> Tensor:
    """``Omega_imnp = 1/2 sum F^r1_s1im F^r2_s2np d^s1s2 d_r1r2``."""
    d = LEVI_CIVITA
    half = Fraction(1, 2)

    def comp(i, m, n, p):
        acc = ZERO
        for r1, r2, s1, s2 in itertools.product(range(2), repeat=4):
            sign = d[s1][s2] * d[r1][r2]
            if sign:
                acc = acc + sign * (F[(r1, s1, i, m)] * F[(r2, s2, n, p)])
        return acc * half

    return Tensor.from_function(2, 4, comp)


def hat_extend(omega: Tensor) -> Tensor:
    """Zero-pad a dimension-2 tensor to dimension 4."""
    return Tensor.from_function(
        4, 4, lambda *idx: omega[idx] if all(k < 2 for k in idx) else ZERO
    )


def omega_a(F: Tensor) -> Tensor:
    return hat_extend(omega_tensor(F)).apply_lower(3, EXCHANGE) * 2


def omega_c(F: Tensor) -> Tensor:
    return hat_extend(omega_tensor(F)).apply_lower(1, EXCHANGE).apply_lower(3, EXCHANGE)


def omega_b(F: Tensor) -> Tensor:
    hat = hat_extend(omega_tensor(F))
    return omega_c(F) + hat.apply_lower(2, EXCHANGE).apply_lower(3, EXCHANGE) * 2


def omega_d(F: Tensor) -> Tensor:
    hat = hat_extend(omega_tensor(F))
    return hat.apply_lower(1, EXCHANGE).apply_lower(2, EXCHANGE).apply_lower(3, EXCHANGE) * 2


# listed index orders, written as words over the slot names i, m, n, p
SYMMETRIZATION_LISTS = {
    1: "imnp mnip nimp",
    2: "imnp ipmn inpm inmp ipnm impn mpin mnpi pnim pmni nmip npmi",
    3: (
        "imnp ipmn inpm inmp ipnm impn minp mpin mnpi mnip mpni mipn "
        "pimn pnim pmni pmin pnmi pinm nipm nmip npmi npim nmpi nimp"
    ),
    4: "imnp ipmn inpm inmp ipnm impn minp mnpi mpni mipn pmni pinm",
    5: "imnp nimp mnip inmp minp nmip pimn mpin pnim ipnm pmni npmi",
}


def _orders(words: str) -> list[tuple[int, ...]]:
    slot = {"i": 0, "m": 1, "n": 2, "p": 3}
    return [tuple(slot[c] for c in w) for w in words.split()]


def symmetrize_listed(t: Tensor, words: str) -> Tensor:
    """Average of ``t`` over the listed index orders."""
    orders = _orders(words)
    total = None
    for order in orders:
        pt = t.permuted(order)
        total = pt if total is None else total + pt
    return total * Fraction(1, len(orders))


def full_symmetrize(t: Tensor) -> Tensor:
    """Average of ``t`` over all 24 orders of its four indices."""
    total = None
    for order in itertools.permutations(range(4)):
        pt = t.permuted(order)
        total = pt if total is None else total + pt
    return total * Fraction(1, 24)


_INTERMEDIATE = {2: omega_a, 3: omega_b, 4: omega_c, 5: omega_d}


def intermediate_tensor(q: int, F: Tensor) -> Tensor:
    """The unsymmetrized tensor whose symmetrization yields form ``q``."""
    _check_q(q)
    if q in (1, 6):
        return omega_tensor(F)
    return _INTERMEDIATE[q](F)


def theorem3_form(q: int, F: Tensor) -> SymTensor4:
    """Quartic form ``q`` from the Levi-Civita contraction and listed symmetrizations."""
    _check_q(q)
    if q == 6:
        return SymTensor4(("z3", "z4"), theorem3_form(1, F).components)
    sym = symmetrize_listed(intermediate_tensor(q, F), SYMMETRIZATION_LISTS[q])
    return SymTensor4.from_tensor(sym, FORM_VARIABLES[q])


CONSTRUCTIONS = ("derived", "printed", "theorem3")


def quartic_form(q: int, F: Tensor, construction: str = "derived") -> SymTensor4:
    if construction == "derived":
        return omega_derived(q, F)
    if construction == "printed":
        return omega_printed(q, g_determinants(F))
    if construction == "theorem3":
        return theorem3_form(q, F)
    raise ValueError(f"unknown construction {construction!r}")


def all_forms(F: Tensor, construction: str = "derived") -> dict[int, SymTensor4]:
    return {q: quartic_form(q, F, construction) for q in range(1, 7)}


# -- discrepancy report --------------------------------------------------------


@dataclass(frozen=True)
class Discrepancy:
    q: int
    monomial: tuple[int, int, int, int]
    printed: MultiPoly
    derived: MultiPoly
    theorem3: MultiPoly

    def as_json(self) -> dict:
        return {
            "q": self.q,
            "monomial": list(self.monomial),
            "printed": self.printed.to_str("*"),
            "derived": self.derived.to_str("*"),
            "theorem3": self.theorem3.to_str("*"),
        }


def _g_basis():
    F = CoeffTensor.symbolic()
    return {label: MultiPoly.coerce(v) for label, v in g_determinants(F).as_dict().items()}


def in_g_basis(p: MultiPoly) -> str:
    """Rewrite a quadratic coefficient polynomial as a combination of the G's.

    Each G contributes the unique monomial ``F1_<a> F2_<b>`` with ``a`` before
    ``b`` in column order, so reading those coefficients off is exact; the
    rewrite is verified before it is returned.
    """
    basis = _g_basis()
    combo = {}
    total = MultiPoly.const(0)
    for label in G_LABELS:
        a, b = _G_COLUMNS[label]
        mono = Monomial({_fname(0, a): 1, _fname(1, b): 1})
        c = p.coeff(mono)
        if c:
            combo[label] = c
            total = total + basis[label] * c
    if total != p:
        return p.to_str("*")
    if not combo:
        return "0"
    parts = []
    for label, c in combo.items():
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = f"G{label}" if mag == 1 else f"{mag}*G{label}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _fname(i: int, k: int) -> str:
    return f"F{i + 1}_{'1' * (3 - k)}{'2' * k}"


def _compare(a: SymTensor4, b: SymTensor4, c: SymTensor4, q: int) -> list[Discrepancy]:
    ca, cb, cc = a.coefficients_z(), b.coefficients_z(), c.coefficients_z()
    rows = []
    for mono in sorted(set(ca) | set(cb) | set(cc), reverse=True):
        va, vb, vc = (MultiPoly.coerce(x.get(mono, 0)) for x in (ca, cb, cc))
        if va != vb or vb != vc:
            rows.append(Discrepancy(q, mono, va, vb, vc))
    return rows


def discrepancy_report(F: Tensor | None = None, qs: Iterable[int] = range(1, 7)) -> list[Discrepancy]:
    """Monomials where the printed, derived and symmetrized forms disagree.

    ``F`` defaults to fully symbolic coefficients; an empty list means the
    three constructions coincide identically.
    """
    F = CoeffTensor.symbolic() if F is None else F
    G = g_determinants(F)
    rows = []
    for q in qs:
        rows.extend(_compare(omega_printed(q, G), omega_derived(q, F), theorem3_form(q, F), q))
    return rows


def _monomial_text(exps) -> str:
    return str(Monomial(zip(Z_VARS, exps)))


def format_report(rows: list[Discrepancy], qs: Iterable[int] = range(1, 7)) -> str:
    """Plain-text report, one section per form."""
    by_q: dict[int, list[Discrepancy]] = {}
    for r in rows:
        by_q.setdefault(r.q, []).append(r)
    lines = ["# quartic form discrepancies: printed table vs derived vs symmetrized", ""]
    for q in qs:
        section = by_q.get(q, [])
        if not section:
            lines.append(f"omega[{q}]: all three constructions agree")
            continue
        lines.append(f"omega[{q}]: {len(section)} mismatching monomial(s)")
        for r in section:
            lines.append(f"  monomial {_monomial_text(r.monomial)}  exponents {list(r.monomial)}")
            for name in ("printed", "derived", "theorem3"):
                p = getattr(r, name)
                lines.append(f"    {name:<9} {in_g_basis(p):<14} = {p.to_str('*')}")
    return "\n".join(lines) + "\n"


def report_json(rows: list[Discrepancy]) -> str:
    return json.dumps([r.as_json() for r in rows], indent=2) + "\n"
