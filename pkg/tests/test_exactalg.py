import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psl2z.exactalg import (
    GF,
    QQ,
    QQ_ZETA,
    FieldError,
    FieldSpec,
    Mat,
    RingMismatchError,
    ScalarParseError,
    ShapeError,
    SingularMatrixError,
    field_make,
    mat_det,
    mat_det_cofactor,
    mat_from_text,
    mat_inverse,
    mat_mul,
    mat_nullspace,
)
from psl2z.symbolic import LAURENT, LaurentPoly

FIELD_SPECS = [QQ, QQ_ZETA, GF(7), GF(2, (1, 1, 1)), GF(3), GF(10007), GF(3, (1, 0, 1)), GF(2, (1, 1, 0, 0, 1))]


def rand_mat(F, n, rng, m=None):
    m = n if m is None else m
    return Mat(F, n, m, [F.random_raw(rng) for _ in range(n * m)])


# --- fields -----------------------------------------------------------------


def test_gf7_has_zeta_two():
    F = field_make(GF(7))
    z = F.zeta()
    assert z == F(2)
    assert z ** 3 == F(1)


def test_q_zeta_relation():
    F = field_make(QQ_ZETA)
    z = F.zeta()
    assert z * z + z + F(1) == F(0)
    assert z ** 3 == F(1)


@pytest.mark.parametrize("p", [4, 6, 1, -3, 9])
def test_non_prime_characteristic_rejected(p):
    with pytest.raises(FieldError):
        FieldSpec(p)


@pytest.mark.parametrize("spec", [FieldSpec(3, (1, 1, 1)), FieldSpec(7, (6, 0, 1)), FieldSpec(0, (-1, 0, 1))])
def test_reducible_extension_rejected(spec):
    # z^2+z+1 = (z-1)^2 mod 3, z^2-1 splits mod 7 and over Q
    with pytest.raises(FieldError):
        field_make(spec)


def test_no_zeta_in_gf5_or_q():
    assert field_make(GF(5)).zeta() is None
    assert field_make(QQ).zeta() is None
    assert field_make(GF(5, (1, 1, 1))).zeta() is not None


def test_mixed_fields_are_errors():
    a = field_make(GF(7))(3)
    b = field_make(GF(11))(3)
    with pytest.raises((RingMismatchError, FieldError, TypeError)):
        a + b


def test_scalar_grammar_roundtrip():
    F = field_make(QQ_ZETA)
    for text in ["-1", "3/2", "z^2", "1+2*z", "0", "z"]:
        x = F.parse(text)
        assert F.parse(x.text()) == x
    assert F.parse("z^2") == F.parse("-1-z")
    with pytest.raises(ScalarParseError):
        F.parse("1/")
    with pytest.raises(ScalarParseError):
        field_make(QQ).parse("z")


def test_inverse_of_zero_raises():
    F = field_make(GF(7))
    with pytest.raises(ZeroDivisionError):
        F(0).inv()


@pytest.mark.parametrize("spec", FIELD_SPECS, ids=lambda s: s.label)
def test_field_axioms_1000_triples(spec):
    F = field_make(spec)
    rng = random.Random(spec.label)
    one = F(1)
    for _ in range(1000):
        a, b, c = F.random(rng), F.random(rng), F.random(rng)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a and a * b == b * a
        assert a * (b + c) == a * b + a * c
        if not a.is_zero():
            assert a * a.inv() == one


@settings(max_examples=200, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50))
def test_rationals_match_fraction(a, b, c, d):
    F = field_make(QQ)
    x, y = F(Fraction(a, b)), F(Fraction(c, d))
    assert (x * y).raw == Fraction(a, b) * Fraction(c, d)
    assert (x - y).raw == Fraction(a, b) - Fraction(c, d)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10006), st.integers(1, 10006))
def test_prime_field_division(a, b):
    F = field_make(GF(10007))
    x, y = F(a), F(b)
    assert (x / y) * y == x


# --- matrices -----------------------------------------------------------------


def test_identity_product_and_x_squared():
    rng = random.Random(1)
    F = field_make(GF(10007))
    M = rand_mat(F, 6, rng)
    assert Mat.identity(F, 6) @ M == M
    X = Mat.from_rows(F, [[0, 1], [1, 0]])
    assert (X @ X).is_identity()


def test_dim6_xy_times_xy_inverse():
    from psl2z.catalog import ParamPair, six_dim_rep

    F = field_make(QQ)
    r = six_dim_rep(ParamPair.of(F, 2, 3))
    XY = r.X @ r.Y
    XYinv = mat_inverse(r.Y) @ r.X
    assert (XY @ XYinv).is_identity()
    assert (mat_mul(r.Y, r.Y @ r.Y)).is_identity()


def test_shape_and_ring_errors():
    F = field_make(QQ)
    G = field_make(GF(5))
    with pytest.raises(ShapeError):
        Mat.zeros(F, 2, 3) @ Mat.zeros(F, 2, 3)
    with pytest.raises(RingMismatchError):
        Mat.identity(F, 2) @ Mat.identity(G, 2)
    with pytest.raises(ShapeError):
        mat_det(Mat.zeros(F, 2, 3))


def test_det_examples():
    F = field_make(QQ)
    assert mat_det(Mat.identity(F, 6)) == F(1)
    assert mat_det(Mat.diag(F, [2, 3])) == F(6)


def test_det_a1_at_one_one_vanishes():
    from psl2z.elimination import build_monomial_system
    from psl2z.symbolic import evaluate_matrix

    F = field_make(QQ)
    A1 = build_monomial_system("A1").matrix
    assert mat_det(evaluate_matrix(A1, F(1), F(1))).is_zero()


@pytest.mark.parametrize("spec", [QQ, GF(10007)], ids=lambda s: s.label)
def test_det_multiplicative_200(spec):
    F = field_make(spec)
    rng = random.Random(7)
    for _ in range(200):
        A, B = rand_mat(F, 4, rng), rand_mat(F, 4, rng)
        assert mat_det(A @ B) == mat_det(A) * mat_det(B)


def test_bareiss_matches_cofactor_on_laurent_monomials():
    rng = random.Random(11)
    for _ in range(50):
        data = []
        for _ in range(16):
            if rng.random() < 0.3:
                data.append(LaurentPoly())
            else:
                data.append(LaurentPoly.monomial(rng.choice([-3, -1, 1, 2]), rng.randint(-2, 2), rng.randint(-2, 2)))
        M = Mat(LAURENT, 4, 4, data)
        assert mat_det(M) == mat_det_cofactor(M)


def test_nullspace_examples():
    F = field_make(QQ)
    assert mat_nullspace(Mat.identity(F, 3)) == []
    assert len(mat_nullspace(Mat.zeros(F, 2, 2))) == 2
    with pytest.raises(TypeError):
        mat_nullspace(Mat(LAURENT, 1, 1, [LaurentPoly.monomial(1, 1, 0)]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 5), st.integers(1, 5))
def test_nullspace_contract(seed, n, m):
    rng = random.Random(seed)
    F = field_make(GF(7))
    A = rand_mat(F, n, rng, m)
    basis = mat_nullspace(A)
    for v in basis:
        col = Mat(F, m, 1, [x.raw for x in v])
        assert all(F.is_zero(x) for x in (A @ col).data)
    assert A.rank() + len(basis) == m


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_inverse_contract(seed):
    rng = random.Random(seed)
    F = field_make(QQ_ZETA)
    A = rand_mat(F, 3, rng)
    if mat_det(A).is_zero():
        with pytest.raises(SingularMatrixError):
            mat_inverse(A)
        return
    Ai = mat_inverse(A)
    assert (A @ Ai).is_identity() and (Ai @ A).is_identity()


def test_q2_at_two_three_invertible():
    from psl2z.catalog import ParamPair, intertwiner_Qi

    F = field_make(QQ)
    Q2 = intertwiner_Qi(2, ParamPair.of(F, 2, 3))
    assert not mat_det(Q2).is_zero()
    assert (Q2 @ mat_inverse(Q2)).is_identity()


def test_mat_from_text():
    F = field_make(QQ_ZETA)
    M = mat_from_text(F, [["1", "z"], ["z^2", "3/2"]])
    assert M.raw(1, 0) == F.parse("-1-z").raw
    assert mat_from_text(F, M.to_text()) == M
