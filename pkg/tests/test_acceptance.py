"""Acceptance criteria, each run at its stated bound with exact arithmetic.

Every test records one PASS/FAIL line, shown in the terminal summary.
"""

import io
import time
from pathlib import Path

from cubicforms.cli import main
from cubicforms.cubicmap import (
    AffineMap,
    CoeffTensor,
    change_coordinates,
    coeff_tensor,
    compose_right,
    parse_cubic_map,
    restore_coordinates,
)
from cubicforms.invariants import (
    _derived_all,
    discrepancy_report,
    evaluate_on_vector,
    format_report,
    g_determinants,
    omega_derived,
    omega_printed,
    quartic_form,
    report_json,
    theorem3_form,
)
from cubicforms.polyalg import poly_parse
from cubicforms.tensor import Matrix
from cubicforms.transforms import (
    check_tensoriality,
    left_law_check,
    matrix_as_z,
    pseudotensor_law,
    random_coeff_tensor,
    random_invertible_matrix,
    random_singular_matrix,
    right_law_check,
    roundtrip_law,
    symbolic_theorem43,
    trial_rng,
)

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).parent / "golden"
Z = ("z1", "z2", "z3", "z4")
F0_TEXT = "y1 = x1^3\ny2 = x2^3\n"


def timed(fn):
    _derived_all.cache_clear()  # no credit for work done by earlier tests
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def failures(check, n, seed, draw):
    bad = []
    for trial in range(n):
        args = draw(trial_rng(seed, trial))
        result = check(*args)
        if not result.passed:
            bad.append((trial, result.residuals))
    return bad


def test_criterion_1_worked_examples(criterion):
    def run():
        F = coeff_tensor(parse_cubic_map(F0_TEXT))
        G = g_determinants(F).as_tuple()
        forms = {q: omega_derived(q, F).to_poly() for q in (1, 3, 4, 6)}
        return G, forms

    (G, forms), elapsed = timed(run)
    expected = {
        1: poly_parse("z1^2z2^2", Z),
        3: poly_parse("z1^2z4^2 + z1z2z3z4 + z2^2z3^2", Z),
        4: poly_parse("z1z2z3z4", Z),
        6: poly_parse("z3^2z4^2", Z),
    }
    ok = G == (0, 0, 1, 0, 0, 0) and forms == expected and elapsed < 1
    assert criterion(1, "f0 determinants and forms", ok, f"{elapsed:.3f} s")


def test_criterion_2_concrete_composition(criterion):
    def run():
        F0 = coeff_tensor(parse_cubic_map(F0_TEXT))
        T = Matrix([[1, 1], [0, 1]])
        lhs = g_determinants(coeff_tensor(compose_right(parse_cubic_map(F0_TEXT), AffineMap(T)))).as_tuple()
        z = matrix_as_z(T)
        rhs = tuple(T.det() * evaluate_on_vector(omega_derived(q, F0), z) for q in range(1, 7))
        return lhs, rhs, z

    (lhs, rhs, z), elapsed = timed(run)
    ok = lhs == (0, 0, 1, 0, 1, 1) and rhs == lhs and z == (1, 0, 1, 1) and elapsed < 1
    assert criterion(2, "composition determinants for f0 and the shear", ok, f"G = ({', '.join(map(str, lhs))}), {elapsed:.3f} s")


def test_criterion_3_symbolic_composition(criterion):
    def run():
        return symbolic_theorem43(), symbolic_theorem43(compare_with="theorem3")

    (derived, symmetrized), elapsed = timed(run)
    ok = all(derived.values()) and all(symmetrized.values()) and elapsed < 60
    assert criterion(3, "symbolic composition identity over 12 indeterminates", ok, f"{elapsed:.2f} s")


def test_criterion_4_tensoriality(criterion):
    def draw(rng):
        return random_coeff_tensor(rng), random_invertible_matrix(rng)

    bad, elapsed = timed(lambda: failures(check_tensoriality, 100, 4, draw))
    ok = not bad and elapsed < 30
    assert criterion(4, "tensoriality, 100 random trials", ok, f"{len(bad)} failures, {elapsed:.2f} s")


def test_criterion_5_symmetrizations(criterion):
    F = CoeffTensor.symbolic()
    G = g_determinants(F)
    first = theorem3_form(1, F) == omega_printed(1, G)
    agree = all(theorem3_form(q, F) == quartic_form(q, F, "derived") for q in range(1, 7))
    rows = discrepancy_report()
    golden = (
        format_report(rows) == (GOLDEN / "discrepancies.txt").read_text()
        and report_json(rows) == (GOLDEN / "discrepancies.json").read_text()
    )
    ok = first and agree and golden
    assert criterion(
        5,
        "first form identity, symmetrized forms adjudicated",
        ok,
        f"{len(rows)} printed-table mismatches in golden report",
    )


def test_criterion_6_composition_laws(criterion):
    def draw(rng):
        return random_coeff_tensor(rng), random_invertible_matrix(rng)

    def draw_singular(rng):
        return random_coeff_tensor(rng), random_singular_matrix(rng)

    left = failures(left_law_check, 100, 61, draw)
    right = failures(right_law_check, 100, 62, draw)
    singular = failures(right_law_check, 10, 63, draw_singular)
    ok = not (left or right or singular)
    detail = f"left {len(left)}, right {len(right)}, singular {len(singular)} failures"
    assert criterion(6, "left and right composition laws", ok, detail)


def test_criterion_7_pseudotensor(criterion):
    bad = failures(pseudotensor_law, 50, 7, lambda rng: (random_invertible_matrix(rng),))
    assert criterion(7, "Levi-Civita pseudotensor and dual invariant, 50 trials", not bad, f"{len(bad)} failures")


def test_criterion_8_round_trips(criterion, tmp_path):
    def draw(rng):
        return random_coeff_tensor(rng), random_invertible_matrix(rng)

    bad = failures(roundtrip_law, 50, 8, draw)
    # the same identity written out directly
    rng = trial_rng(8, 0)
    F, s = draw(rng)
    direct = restore_coordinates(change_coordinates(F, s), s) == F

    src = tmp_path / "m.map"
    src.write_text("y1 = 2x1^3 - 1/2 x1^2x2 + x2^3 - x1\ny2 = x1x2^2 + 3\n")
    (tmp_path / "t.mat").write_text("2 1/3\n-1 5\n")
    (tmp_path / "tinv.mat").write_text("15/31 -1/31\n3/31 6/31\n")

    def cli(*argv):
        out = io.StringIO()
        code = main([str(a) for a in argv], out=out)
        assert code == 0
        return out.getvalue()

    canonical = cli("compose", src, ROOT / "data" / "identity.mat", "--right")
    mid = tmp_path / "mid.map"
    mid.write_text(cli("compose", src, tmp_path / "t.mat", "--right"))
    back = cli("compose", mid, tmp_path / "tinv.mat", "--right")
    ok = not bad and direct and back == canonical
    assert criterion(8, "coordinate and CLI compose round-trips", ok, f"{len(bad)} failures")
