from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicforms.cubicmap import (
    AffineMap,
    CoeffTensor,
    CubicMap,
    MapFormatError,
    change_coordinates,
    coeff_tensor,
    compose_left,
    compose_right,
    cubic_part,
    equivalence_tensor,
    format_matrix,
    left_compose_tensor,
    parse_cubic_map,
    parse_matrix,
    restore_coordinates,
    right_compose_tensor,
    tensor_to_map,
)
from cubicforms.polyalg import MultiPoly, poly_parse
from cubicforms.tensor import Matrix
from cubicforms.transforms import random_coeff_tensor, random_invertible_matrix, random_matrix

from conftest import fractions_st

X = ("x1", "x2")
x1, x2 = MultiPoly.var("x1"), MultiPoly.var("x2")
F0 = CubicMap(x1**3, x2**3)
SHEAR = Matrix([[1, 1], [0, 1]])


def cmap(y1, y2):
    return CubicMap(poly_parse(y1, X), poly_parse(y2, X))


def rng_for(seed):
    import random

    return random.Random(seed)


seeds = st.integers(min_value=0, max_value=10**6)
maps = st.lists(
    st.lists(fractions_st, min_size=10, max_size=10), min_size=2, max_size=2
).map(
    lambda rows: CubicMap(
        *(
            sum(
                (c * x1**a * x2**b for c, (a, b) in zip(row, [(a, d - a) for d in range(4) for a in range(d + 1)])),
                MultiPoly.const(0),
            )
            for row in rows
        )
    )
)


class TestParsing:
    def test_f0(self):
        f = parse_cubic_map("y1 = x1^3 \n y2 = x2^3")
        assert f == F0

    def test_lower_degree_terms_retained(self):
        f = parse_cubic_map("y1 = x1^3 + x1 \n y2 = x2^3 + 5")
        assert f.y1 == x1**3 + x1 and f.y2 == x2**3 + 5

    def test_comments_and_blank_lines(self):
        f = parse_cubic_map("# header\n\ny2 = x2^3  # second\ny1 = x1^3\n")
        assert f == F0

    @pytest.mark.parametrize(
        "text,fragment,lineno",
        [
            ("y1 = x1^4 \n y2 = 0", "degree 4, which exceeds 3", 1),
            ("y1 = x1^3", "missing component line for y2", None),
            ("y1 = x1\ny1 = x2\ny2 = 0", "duplicate", 2),
            ("y1 = x1\ny2 = x3", "unknown variable", 2),
            ("y1 = x1\nz = 3", "expected 'y1 = ...'", 2),
        ],
    )
    def test_errors(self, text, fragment, lineno):
        with pytest.raises(MapFormatError, match=fragment) as info:
            parse_cubic_map(text)
        assert info.value.lineno == lineno

    def test_constructor_checks_degree(self):
        with pytest.raises(ValueError, match="exceeds 3"):
            CubicMap(x1**4, x2)

    def test_matrix_with_shift(self):
        phi = parse_matrix("2 1/3\n-1 5\na = 1 -2\n")
        assert phi.linear == Matrix([[2, Fraction(1, 3)], [-1, 5]])
        assert phi.shift == (1, -2)
        assert parse_matrix(format_matrix(phi)) == phi

    @pytest.mark.parametrize("text", ["1 2\n", "1 2 3\n4 5 6\n", "1 2\n3 4\n5 6\n", "a = 1 1\n1 0\n0 1\n", "1 x\n0 1\n"])
    def test_bad_matrices(self, text):
        with pytest.raises(MapFormatError):
            parse_matrix(text)


class TestCoeffTensor:
    def test_f0(self):
        F = coeff_tensor(F0)
        nonzero = {idx for idx, v in F.items() if v}
        assert nonzero == {(0, 0, 0, 0), (1, 1, 1, 1)}
        assert F[0, 0, 0, 0] == F[1, 1, 1, 1] == 1

    def test_binomial_cube(self):
        F = coeff_tensor(CubicMap((x1 + x2) ** 3, x2**3))
        assert [F.component(0, k) for k in range(4)] == [1, 1, 1, 1]
        assert [F.component(1, k) for k in range(4)] == [0, 0, 0, 1]

    def test_single_mixed_term(self):
        F = coeff_tensor(cmap("3x1^2x2", "0"))
        assert {idx for idx, v in F.items() if v} == {(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0)}
        assert F[0, 1, 0, 0] == 1

    def test_non_integral_division(self):
        F = coeff_tensor(cmap("x1^2x2", "0"))
        assert F.component(0, 1) == Fraction(1, 3)

    def test_lower_degree_terms_ignored(self):
        assert coeff_tensor(cmap("x1^3 + x1 + 1", "x2^3 - x1x2")) == coeff_tensor(F0)

    @given(maps)
    def test_symmetric(self, f):
        assert coeff_tensor(f).is_symmetric()

    @given(maps, maps)
    def test_linear(self, f, g):
        assert coeff_tensor(f + g) == coeff_tensor(f) + coeff_tensor(g)

    @given(maps)
    def test_tensor_to_map_is_cubic_part(self, f):
        c = tensor_to_map(coeff_tensor(f))
        assert c == cubic_part(f)
        for y, yc in zip(f.components, c.components):
            assert all(m.degree() == 3 for m in yc.terms)
            assert all(y.coeff(m) == yc.coeff(m) for m in yc.terms)


class TestComposition:
    def test_right_identity(self):
        assert compose_right(F0, AffineMap.identity()) == F0

    def test_right_shear(self):
        assert compose_right(F0, AffineMap(SHEAR)) == CubicMap((x1 + x2) ** 3, x2**3)

    def test_right_degenerate(self):
        g = compose_right(F0, AffineMap(Matrix.zeros(2), (Fraction(1), Fraction(1))))
        assert g == CubicMap(MultiPoly.const(1), MultiPoly.const(1))

    def test_left_identity(self):
        assert compose_left(F0, AffineMap.identity()) == F0

    def test_left_scaling(self):
        g = compose_left(F0, AffineMap(Matrix([[2, 0], [0, 1]])))
        assert g == CubicMap(Fraction(1, 2) * x1**3, x2**3)

    def test_left_singular(self):
        with pytest.raises(ZeroDivisionError):
            compose_left(F0, AffineMap(Matrix([[1, 0], [0, 0]])))

    def test_left_undoes_affine_shift(self):
        phi = parse_matrix("2 1\n1 1\na = 3 -1\n")
        f = cmap("x1^3 - x2", "x1x2^2 + 4")
        shifted = CubicMap(
            *(phi.linear[i, 0] * f.y1 + phi.linear[i, 1] * f.y2 + phi.shift[i] for i in range(2))
        )
        assert compose_left(shifted, phi) == f

    @settings(max_examples=30, deadline=None)
    @given(maps, seeds)
    def test_right_matches_index_formula(self, f, seed):
        rng = rng_for(seed)
        t = random_matrix(rng)  # singular matrices included
        phi = AffineMap(t, (Fraction(rng.randint(-3, 3)), Fraction(1, rng.randint(1, 4))))
        assert coeff_tensor(compose_right(f, phi)) == right_compose_tensor(coeff_tensor(f), t)

    @settings(max_examples=30, deadline=None)
    @given(maps, seeds)
    def test_left_matches_index_formula(self, f, seed):
        phi = AffineMap(random_invertible_matrix(rng_for(seed)), (Fraction(1), Fraction(-2)))
        s = phi.linear.inverse()
        assert coeff_tensor(compose_left(f, phi)) == left_compose_tensor(coeff_tensor(f), s)

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_two_sided_order_irrelevant(self, seed):
        rng = rng_for(seed)
        Ft = random_coeff_tensor(rng)
        s1, t2 = random_invertible_matrix(rng), random_invertible_matrix(rng)
        left_first = right_compose_tensor(left_compose_tensor(Ft, s1), t2)
        assert left_first == equivalence_tensor(Ft, s1, t2)
        # and the polynomial route agrees with the index route
        phi1, phi2 = AffineMap(s1.inverse()), AffineMap(t2)
        ftilde = tensor_to_map(Ft)
        assert coeff_tensor(compose_left(compose_right(ftilde, phi2), phi1)) == equivalence_tensor(Ft, s1, t2)


class TestCoordinateChange:
    def test_identity(self):
        F = coeff_tensor(cmap("x1^3 - 2x1x2^2", "1/2 x2^3 + x1^2x2"))
        assert change_coordinates(F, Matrix.identity(2)) == F

    def test_swap(self):
        swap = Matrix([[0, 1], [1, 0]])
        # relabelling both variables and components sends f0 to itself
        swapped_both = CubicMap(x1**3, x2**3)
        assert change_coordinates(coeff_tensor(F0), swap) == coeff_tensor(swapped_both)
        # swapping the variables alone is a right composition
        assert right_compose_tensor(coeff_tensor(F0), swap) == coeff_tensor(CubicMap(x2**3, x1**3))

    def test_swap_nontrivial(self):
        swap = Matrix([[0, 1], [1, 0]])
        f = cmap("x1^3 + 3x1x2^2", "2x1^2x2")
        g = cmap("2x1x2^2", "x2^3 + 3x1^2x2")  # components and variables both swapped
        assert change_coordinates(coeff_tensor(f), swap) == coeff_tensor(g)

    def test_is_conjugation(self):
        # new tensor is the tensor of S^-1 o f o S
        rng = rng_for(7)
        F, s = random_coeff_tensor(rng), random_invertible_matrix(rng)
        expected = coeff_tensor(compose_left(compose_right(tensor_to_map(F), AffineMap(s)), AffineMap(s)))
        assert change_coordinates(F, s) == expected

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_round_trip(self, seed):
        rng = rng_for(seed)
        F, s = random_coeff_tensor(rng), random_invertible_matrix(rng)
        assert restore_coordinates(change_coordinates(F, s), s) == F
        assert change_coordinates(restore_coordinates(F, s), s) == F

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_group_action_order(self, seed):
        rng = rng_for(seed)
        F = random_coeff_tensor(rng)
        s1, s2 = random_invertible_matrix(rng), random_invertible_matrix(rng)
        assert change_coordinates(change_coordinates(F, s1), s2) == change_coordinates(F, s1 @ s2)

    def test_singular_rejected(self):
        with pytest.raises(ZeroDivisionError):
            change_coordinates(coeff_tensor(F0), Matrix([[1, 2], [2, 4]]))

    def test_symbolic_entries(self):
        F = CoeffTensor.symbolic()
        assert change_coordinates(F, Matrix([[2, 0], [0, 1]])).component(0, 0) == F.component(0, 0) * 4
