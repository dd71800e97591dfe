import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psl2z.exactalg import GF, QQ, QQ_ZETA, field_make
from psl2z.symbolic import (
    C1,
    C2,
    ONE,
    ZERO,
    LaurentPoly,
    UPoly,
    lp_arith,
    lp_eval,
    lp_exact_div,
    lp_gcd_univariate,
    lp_sprem,
    parse_poly,
    sprem_chain,
    upoly_roots,
)

coef = st.fractions(min_value=-20, max_value=20, max_denominator=6)
exps = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
polys = st.dictionaries(exps, coef, max_size=5).map(LaurentPoly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def test_arith_examples():
    assert lp_arith("mul", C1 - 1, C1 + 1) == C1 ** 2 - 1
    p = parse_poly("3*c1^2*c2^-1 + 1/2")
    assert lp_arith("add", ZERO, p) == p
    with pytest.raises(ValueError):
        lp_arith("pow", p, -1)


def test_parse_and_text_roundtrip():
    for text in ["c1^2*c2^2 - c1^2*c2 + c1^2 - c1*c2 - c1 + 1", "-3/2*c1^-1*c2 + 7", "0", "c2"]:
        p = parse_poly(text)
        assert parse_poly(p.text()) == p


def test_zero_coefficients_never_stored():
    p = LaurentPoly({(1, 0): 0, (0, 1): Fraction(2)})
    assert (1, 0) not in p.terms
    assert (C1 - C1).terms == {}


def test_exact_div_examples():
    assert lp_exact_div(C1 ** 2 - 1, C1 - 1) == C1 + 1
    with pytest.raises(ZeroDivisionError):
        lp_exact_div(C1, ZERO)


def test_exact_div_by_monomial_is_laurent():
    # the Laurent ring has monomials as units, so (c1+1)/c2 is a Laurent polynomial
    q = lp_exact_div(C1 + 1, C2)
    assert q is not None and q * C2 == C1 + 1
    assert lp_exact_div(C1 + 1, C2 + 1) is None


def test_sprem_examples():
    s = lp_sprem(C2 ** 2 - 1, C2 - 1, "c2")
    assert s.m == ONE and s.q == C2 + 1 and s.r.is_zero()
    s = lp_sprem(C1 * C2 ** 2 + 1, C2 - C1, "c2")
    assert s.m == ONE
    assert s.q == C1 * C2 + C1 ** 2
    assert s.r == C1 ** 3 + 1
    assert s.check()


def test_sprem_errors():
    with pytest.raises(ValueError):
        lp_sprem(C2, C1, "c2")  # divisor constant in c2
    with pytest.raises(ValueError):
        lp_sprem(C2 ** -1, C2, "c2")


@settings(max_examples=150, deadline=None)
@given(
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 4)), coef, min_size=1, max_size=5),
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(1, 3)), coef, min_size=1, max_size=4),
)
def test_sprem_contract(a, b):
    A, B = LaurentPoly(a), LaurentPoly(b)
    if A.is_zero() or B.is_zero() or B.degree("c2") < 1:
        return
    s = lp_sprem(A, B, "c2")
    assert (s.m * A - s.q * B - s.r).is_zero()
    assert s.r.is_zero() or s.r.degree("c2") < B.degree("c2")
    assert s.m == B.leading_coeff("c2") ** s.exponent


def test_chain_cofactors():
    ch = sprem_chain(C1 * C2 ** 2 + C2 + 1, C2 ** 2 - C1, "c2", 2)
    assert ch.check_steps() and ch.check_cofactors()


@settings(max_examples=200, deadline=None)
@given(polys)
def test_canonical_subtraction(p):
    assert lp_arith("sub", p, p).terms == {}


def test_canonical_subtraction_500_random():
    rng = random.Random(5)
    for _ in range(500):
        p = LaurentPoly({(rng.randint(-3, 3), rng.randint(-3, 3)): Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)})
        assert lp_arith("sub", p, p).terms == {}


@settings(max_examples=250, deadline=None)
@given(polys, polys, st.integers(1, 10006), st.integers(1, 10006))
def test_eval_homomorphism_gf(p, q, a, b):
    F = field_make(GF(10007))
    c1, c2 = F(a), F(b)
    assert lp_eval(p * q, c1, c2) == lp_eval(p, c1, c2) * lp_eval(q, c1, c2)
    assert lp_eval(p + q, c1, c2) == lp_eval(p, c1, c2) + lp_eval(q, c1, c2)


@settings(max_examples=250, deadline=None)
@given(polys, polys, st.fractions(min_value=-5, max_value=5, max_denominator=5).filter(bool))
def test_eval_homomorphism_q(p, q, x):
    F = field_make(QQ)
    c1, c2 = F(x), F(x + 1) if x != -1 else F(2)
    assert lp_eval(p * q, c1, c2) == lp_eval(p, c1, c2) * lp_eval(q, c1, c2)
    assert lp_eval(p + q, c1, c2) == lp_eval(p, c1, c2) + lp_eval(q, c1, c2)


def test_eval_examples():
    F = field_make(QQ)
    assert lp_eval(C1 * C2 ** -1, F(2), F(3)) == F(Fraction(2, 3))
    with pytest.raises(ZeroDivisionError):
        lp_eval(C1 ** -1, F(0), F(1))


@settings(max_examples=500, deadline=None)
@given(polys, nonzero_polys)
def test_exact_div_inverts_mul(a, b):
    assert lp_exact_div(a * b, b) == a


def _uni(coeffs):
    return LaurentPoly({(k, 0): Fraction(c) for k, c in enumerate(coeffs) if c})


def test_gcd_examples():
    assert lp_gcd_univariate(C1 ** 2 - 1, C1 - 1, "c1") == C1 - 1
    p = 3 * C1 ** 2 + 6
    assert lp_gcd_univariate(p, ZERO, "c1") == C1 ** 2 + 2
    with pytest.raises(ValueError):
        lp_gcd_univariate(C1 * C2, C1, "c1")


@settings(max_examples=100, deadline=None)
@given(*(st.lists(st.integers(-6, 6), min_size=1, max_size=5) for _ in range(3)))
def test_gcd_divides(a, b, g):
    A, B, G = _uni(a), _uni(b), _uni(g)
    if A.is_zero() or B.is_zero() or G.is_zero():
        return
    h = lp_gcd_univariate(A * G, B * G, "c1")
    assert lp_exact_div(A * G, h) is not None
    assert lp_exact_div(B * G, h) is not None
    assert lp_exact_div(h, G) is not None


# --- univariate root finding --------------------------------------------------


@pytest.mark.parametrize(
    "spec,roots",
    [(GF(7), [1, 2, 4]), (GF(10007), [3, 5, 9999]), (QQ, [Fraction(1, 2), -3, 7])],
    ids=["GF7", "GF10007", "Q"],
)
def test_upoly_roots(spec, roots):
    F = field_make(spec)
    f = UPoly(F, [F(1).raw])
    for r in roots:
        f = f * UPoly(F, [(-F(r)).raw, F(1).raw])
    f = f * UPoly(F, [F(1).raw, F(0).raw, F(1).raw])  # x^2+1: no roots in these fields except where -1 is a square
    got = upoly_roots(f)
    expect = {F(r) for r in roots}
    extra = set(got) - expect
    assert expect <= set(got)
    for x in extra:
        assert x * x == F(-1)


def test_upoly_roots_extension_fields():
    for spec in (GF(2, (1, 1, 1)), GF(3, (1, 0, 1)), GF(2, (1, 1, 0, 0, 1))):
        F = field_make(spec)
        elems = [F.wrap(x) for x in F.elements()]
        rng = random.Random(spec.label)
        chosen = rng.sample(elems, 3)
        f = UPoly(F, [F(1).raw])
        for r in chosen:
            f = f * UPoly(F, [(-r).raw, F(1).raw])
        assert set(upoly_roots(f)) == set(chosen)


def test_upoly_roots_rejects_zero_and_number_fields():
    F = field_make(QQ)
    with pytest.raises(ValueError):
        upoly_roots(UPoly(F, []))
    Z = field_make(QQ_ZETA)
    with pytest.raises(NotImplementedError):
        upoly_roots(UPoly(Z, [Z(1).raw, Z(1).raw]))


# --- independent oracle ----------------------------------------------------------


def test_r1_r2_against_sympy():
    sympy = pytest.importorskip("sympy")
    from psl2z.elimination import REFERENCE_A1, REFERENCE_B1, compute_R

    c1, c2 = sympy.symbols("c1 c2")

    def to_sympy(p):
        return sum(sympy.Rational(v.numerator, v.denominator) * c1 ** a * c2 ** b for (a, b), v in p.terms.items())

    for ref, fam, (e1, e2) in ((REFERENCE_A1, "A1", (6, 6)), (REFERENCE_B1, "B1", (5, 5))):
        M = sympy.Matrix([[to_sympy(parse_poly(t)) for t in row] for row in ref])
        det = sympy.expand(M.det(method="berkowitz") * c1 ** e1 * c2 ** e2)
        assert sympy.expand(det - to_sympy(compute_R(fam))) == 0
