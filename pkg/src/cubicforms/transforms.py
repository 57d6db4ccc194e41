"""Coordinate changes, pseudotensors and executable checks of the transformation laws.

Every checker returns a :class:`LawResult` whose residuals are exact
componentwise differences; ``passed`` is simply "no residuals".
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cubicmap import (
    CoeffTensor,
    change_coordinates,
    left_compose_tensor,
    restore_coordinates,
    right_compose_tensor,
)
from .invariants import (
    FORM_VARIABLES,
    G_LABELS,
    LEVI_CIVITA,
    SymTensor4,
    all_forms,
    evaluate_on_vector,
    g_determinants,
    omega_derived,
    quartic_form,
)
from .polyalg import MultiPoly
from .tensor import ZERO, Matrix, Tensor


def hat_matrix(s: Matrix) -> Matrix:
    """Block-diagonal 4x4 lift with ``s`` repeated on the diagonal."""
    z = ZERO
    return Matrix(
        [
            [s[0, 0], s[0, 1], z, z],
            [s[1, 0], s[1, 1], z, z],
            [z, z, s[0, 0], s[0, 1]],
            [z, z, s[1, 0], s[1, 1]],
        ]
    )


def _block(m: Matrix) -> Matrix:
    """The repeated 2x2 block of a block-diagonal lift."""
    if m.n == 2:
        return m
    s = Matrix([[m[0, 0], m[0, 1]], [m[1, 0], m[1, 1]]])
    if hat_matrix(s) != m:
        raise ValueError("4x4 transition matrix must be block diagonal with equal blocks")
    return s


@dataclass(frozen=True)
class PseudoSpec:
    """Type ``(r, s)`` and weight of a pseudotensor on dimension 2 or 4.

    Components are stored with the ``r`` contravariant indices first.
    """

    r: int
    s: int
    weight: int = 0
    dim: int = 2

    def __post_init__(self):
        if self.r < 0 or self.s < 0:
            raise ValueError("ranks must be non-negative")
        if self.dim not in (2, 4):
            raise ValueError("dimension must be 2 or 4")


def pseudo_transform(a: Tensor, spec: PseudoSpec, s: Matrix) -> Tensor:
    """Old components from new ones ``a`` under transition matrix ``s``.

    Upper indices are contracted with ``S``, lower with ``T = S^-1``, and the
    result carries ``det(T)**weight`` where ``T`` is the 2x2 inverse even in
    dimension 4.
    """
    if (a.dim, a.rank) != (spec.dim, spec.r + spec.s):
        raise ValueError(
            f"array of dim {a.dim} rank {a.rank} does not match type ({spec.r},{spec.s}) on dim {spec.dim}"
        )
    s2 = _block(s)
    t2 = s2.inverse()
    if spec.dim == 4:
        s_use, t_use = hat_matrix(s2), hat_matrix(t2)
    else:
        s_use, t_use = s2, t2
    out = a
    for axis in range(spec.r):
        out = out.apply_upper(axis, s_use)
    for axis in range(spec.r, spec.r + spec.s):
        out = out.apply_lower(axis, t_use)
    if spec.weight:
        out = out * (t2.det() ** spec.weight)
    return out


def levi_civita() -> Tensor:
    return Tensor.from_function(2, 2, lambda i, j: Fraction(LEVI_CIVITA[i][j]))


def pullback(form: SymTensor4, m: Matrix) -> SymTensor4:
    """Contract every index of ``form`` with ``m`` (``hat(m)`` in dimension 4)."""
    mat = m if form.dim == 2 else hat_matrix(m)
    t = form.to_tensor()
    for axis in range(4):
        t = t.apply_lower(axis, mat)
    return SymTensor4.from_tensor(t, form.variables, check=False)


@dataclass
class LawResult:
    law: str
    passed: bool
    residuals: dict = field(default_factory=dict)

    @classmethod
    def from_residuals(cls, law: str, residuals: dict) -> LawResult:
        residuals = {k: v for k, v in residuals.items() if v}
        return cls(law, not residuals, residuals)


def _collect(prefix: str, res: dict, out: dict):
    for k, v in res.items():
        out[f"{prefix}{list(k) if isinstance(k, tuple) else k}"] = v


def check_tensoriality(F: Tensor, s: Matrix, construction: str = "derived") -> LawResult:
    """Forms of the re-expressed tensor equal the pulled-back forms, componentwise."""
    if not s.is_invertible():
        raise ZeroDivisionError("transition matrix is singular")
    Ft = change_coordinates(F, s)
    before, after = all_forms(F, construction), all_forms(Ft, construction)
    residuals = {}
    for q in range(1, 7):
        _collect(f"omega[{q}]", after[q].residual(pullback(before[q], s)), residuals)
    return LawResult.from_residuals("tensoriality", residuals)


def left_law_check(Ftilde: Tensor, t: Matrix, construction: str = "derived") -> LawResult:
    """Left composition by ``phi^-1``: determinants and forms scale by ``det S``."""
    s = t.inverse()
    det_s = s.det()
    F = left_compose_tensor(Ftilde, s)
    residuals = {}
    g_new, g_old = g_determinants(F), g_determinants(Ftilde)
    for label in G_LABELS:
        d = g_new[label] - det_s * g_old[label]
        if d:
            residuals[f"G{label}"] = d
    new, old = all_forms(F, construction), all_forms(Ftilde, construction)
    for q in range(1, 7):
        _collect(f"omega[{q}]", new[q].residual(old[q].scaled(det_s)), residuals)
    return LawResult.from_residuals("left-composition", residuals)


def right_law_check(
    Ftilde: Tensor, t: Matrix, construction: str = "derived", law: str = "right-composition"
) -> LawResult:
    """Right composition by ``phi``: forms pull back by ``T`` and scale by ``det T``."""
    det_t = t.det()
    F = right_compose_tensor(Ftilde, t)
    new, old = all_forms(F, construction), all_forms(Ftilde, construction)
    residuals = {}
    for q in range(1, 7):
        _collect(f"omega[{q}]", new[q].residual(pullback(old[q], t).scaled(det_t)), residuals)
    return LawResult.from_residuals(law, residuals)


@dataclass
class Thm43Row:
    label: str
    lhs: object
    rhs: object

    @property
    def equal(self) -> bool:
        return not (self.lhs - self.rhs)


def matrix_as_z(t: Matrix) -> tuple:
    """``(z1, z2, z3, z4) = (T^1_1, T^2_1, T^1_2, T^2_2)``: the two columns of ``T``."""
    return (t[0, 0], t[1, 0], t[0, 1], t[1, 1])


def theorem43_check(Ftilde: Tensor, t: Matrix, construction: str = "derived") -> list[Thm43Row]:
    """Determinants of ``Ftilde o T`` against ``det T`` times the forms of ``Ftilde`` at ``T``."""
    F = right_compose_tensor(Ftilde, t)
    lhs = g_determinants(F)
    z = matrix_as_z(t)
    det_t = t.det()
    rows = []
    for q, label in zip(range(1, 7), G_LABELS):
        form = quartic_form(q, Ftilde, construction)
        rows.append(Thm43Row(label, lhs[label], det_t * evaluate_on_vector(form, z)))
    return rows


def theorem43_law(Ftilde: Tensor, t: Matrix, construction: str = "derived") -> LawResult:
    residuals = {f"G{r.label}": r.lhs - r.rhs for r in theorem43_check(Ftilde, t, construction)}
    return LawResult.from_residuals("composition-determinants", residuals)


def symmetrization_law(F: Tensor) -> LawResult:
    """Symmetrized pseudotensor contractions reproduce the canonical forms."""
    residuals = {}
    for q in range(1, 7):
        _collect(
            f"omega[{q}]",
            quartic_form(q, F, "theorem3").residual(quartic_form(q, F, "derived")),
            residuals,
        )
    return LawResult.from_residuals("symmetrization", residuals)


def pseudotensor_law(s: Matrix) -> LawResult:
    d = levi_civita()
    residuals = {}
    _collect("d_lower", pseudo_transform(d, PseudoSpec(0, 2, -1), s).residual(d), residuals)
    _collect("d_upper", pseudo_transform(d, PseudoSpec(2, 0, 1), s).residual(d), residuals)
    return LawResult.from_residuals("pseudotensor", residuals)


def roundtrip_law(F: Tensor, s: Matrix) -> LawResult:
    back = restore_coordinates(change_coordinates(F, s), s)
    return LawResult.from_residuals("coordinate-roundtrip", back.residual(F))


# -- random trials ------------------------------------------------------------


def random_rational(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_coeff_tensor(rng: random.Random, bound: int = 9) -> CoeffTensor:
    return CoeffTensor.from_components(
        [[random_rational(rng, bound) for _ in range(4)] for _ in range(2)]
    )


def random_matrix(rng: random.Random, bound: int = 9) -> Matrix:
    return Matrix([[random_rational(rng, bound) for _ in range(2)] for _ in range(2)])


def random_invertible_matrix(rng: random.Random, bound: int = 9) -> Matrix:
    while True:
        m = random_matrix(rng, bound)
        if m.det():
            return m


def random_singular_matrix(rng: random.Random, bound: int = 9) -> Matrix:
    """Rank at most one: the second row is a multiple of the first."""
    row = [random_rational(rng, bound) for _ in range(2)]
    k = random_rational(rng, bound)
    rows = [row, [k * x for x in row]]
    if rng.random() < 0.5:
        rows.reverse()
    return Matrix(rows)


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


LAWS = (
    "tensoriality",
    "symmetrization",
    "left-composition",
    "right-composition",
    "right-composition-singular",
    "composition-determinants",
    "pseudotensor",
    "coordinate-roundtrip",
)


@dataclass
class TrialRow:
    law: str
    trial: int
    seed: int
    passed: bool
    residual: dict | None = None

    def as_json(self) -> dict:
        row = {"law": self.law, "trial": self.trial, "seed": self.seed, "pass": self.passed}
        if self.residual:
            row["residual"] = {k: str(v) for k, v in self.residual.items()}
        return row


def run_trial(
    trial: int,
    seed: int,
    base: Tensor | None = None,
    construction: str = "derived",
    laws: tuple[str, ...] = LAWS,
) -> list[TrialRow]:
    """One trial of every law, drawing fresh random inputs from ``(seed, trial)``."""
    rng = trial_rng(seed, trial)
    F = base if base is not None else random_coeff_tensor(rng)
    s = random_invertible_matrix(rng)
    t = random_invertible_matrix(rng)
    singular = random_singular_matrix(rng)
    checks: dict[str, Callable[[], LawResult]] = {
        "tensoriality": lambda: check_tensoriality(F, s, construction),
        "symmetrization": lambda: symmetrization_law(F),
        "left-composition": lambda: left_law_check(F, t, construction),
        "right-composition": lambda: right_law_check(F, t, construction),
        "right-composition-singular": lambda: right_law_check(
            F, singular, construction, law="right-composition-singular"
        ),
        "composition-determinants": lambda: theorem43_law(F, t, construction),
        "pseudotensor": lambda: pseudotensor_law(s),
        "coordinate-roundtrip": lambda: roundtrip_law(F, s),
    }
    rows = []
    for law in laws:
        result = checks[law]()
        rows.append(TrialRow(law, trial, seed, result.passed, result.residuals or None))
    return rows


def run_suite(
    trials: int,
    seed: int = 0,
    base: Tensor | None = None,
    construction: str = "derived",
    laws: tuple[str, ...] = LAWS,
) -> list[TrialRow]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rows = []
    for trial in range(trials):
        rows.extend(run_trial(trial, seed, base, construction, laws))
    return rows


# -- symbolic identities ------------------------------------------------------


def symbolic_matrix(prefix: str = "T") -> Matrix:
    """2x2 matrix of indeterminates ``T1_1, T1_2, T2_1, T2_2``."""
    return Matrix(
        [[MultiPoly.var(f"{prefix}{i + 1}_{j + 1}") for j in range(2)] for i in range(2)]
    )


def symbolic_theorem43(Ftilde: Tensor | None = None, compare_with: str = "derived") -> dict[str, bool]:
    """Check the determinant identity with symbolic ``T`` (and symbolic ``Ftilde`` by default).

    For each determinant: ``det T`` must divide it exactly and the quotient
    must equal the form of ``Ftilde`` evaluated at the columns of ``T``.
    """
    Ftilde = CoeffTensor.symbolic() if Ftilde is None else Ftilde
    t = symbolic_matrix()
    det_t = t.det()
    z = matrix_as_z(t)
    lhs = g_determinants(right_compose_tensor(Ftilde, t))
    out = {}
    for q, label in zip(range(1, 7), G_LABELS):
        quotient = MultiPoly.coerce(lhs[label]).exact_div(det_t)
        form = quartic_form(q, Ftilde, compare_with)
        out[label] = quotient == MultiPoly.coerce(evaluate_on_vector(form, z))
    return out


__all__ = [
    "FORM_VARIABLES",
    "LAWS",
    "LawResult",
    "PseudoSpec",
    "Thm43Row",
    "TrialRow",
    "check_tensoriality",
    "hat_matrix",
    "left_law_check",
    "levi_civita",
    "matrix_as_z",
    "omega_derived",
    "pseudo_transform",
    "pullback",
    "random_coeff_tensor",
    "random_invertible_matrix",
    "random_rational",
    "random_singular_matrix",
    "right_law_check",
    "roundtrip_law",
    "run_suite",
    "run_trial",
    "symbolic_matrix",
    "symbolic_theorem43",
    "theorem43_check",
]
