import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psl2z.catalog import (
    CatalogError,
    CatalogLabel,
    ClassificationError,
    ParamPair,
    canonical_param,
    classify,
    enumerate_catalog,
    excluded_pairs,
    finite_labels,
    intertwiner_Qi,
    make_catalog_rep,
    orbit,
    param_excluded,
    parse_label,
    sigma,
    six_dim_rep,
    x_prime,
    y_prime,
)
from psl2z.exactalg import GF, QQ, QQ_ZETA, Mat, field_make, mat_det
from psl2z.rep import Rep, burnside_span_dim, rep_validate

Q = field_make(QQ)
QZ = field_make(QQ_ZETA)
P = field_make(GF(10007))


def random_invertible(F, n, rng):
    while True:
        M = Mat(F, n, n, [F.random_raw(rng, 4) for _ in range(n * n)])
        if not mat_det(M).is_zero():
            return M


def valid_pair(F, rng):
    while True:
        p = ParamPair(F.random_nonzero(rng), F.random_nonzero(rng))
        if not param_excluded(p):
            return p


# --- constructors -----------------------------------------------------------


def test_dim1_minus_one_zeta():
    r = make_catalog_rep(CatalogLabel(1, ("-1", "zeta")), QZ)
    assert r.X == Mat.from_rows(QZ, [[-1]])
    assert r.Y == Mat.from_rows(QZ, [[QZ.zeta()]])


def test_dim3_plus():
    r = make_catalog_rep(CatalogLabel(3, "+"), Q)
    assert r.X == Mat.diag(Q, [1, -1, -1])
    assert r.Y == Mat.from_rows(Q, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])


def test_dim6_two_three_entries():
    r = make_catalog_rep(CatalogLabel(6, ParamPair.of(Q, 2, 3)), Q)
    nonzero = sorted(x for x in r.Y.data if x != 0)
    assert nonzero == sorted([2, 1, 3, 1, Fraction(1, 6), 1])
    assert r.Y.raw(0, 4) == 2


def test_inadmissible_labels():
    with pytest.raises(CatalogError):
        make_catalog_rep(CatalogLabel(2, ("1", "zeta")), field_make(GF(3)))
    with pytest.raises(CatalogError):
        make_catalog_rep(CatalogLabel(3, "+"), field_make(GF(2, (1, 1, 1))))
    with pytest.raises(CatalogError):
        make_catalog_rep(CatalogLabel(1, ("1", "zeta")), Q)  # no cube root of unity in Q


def test_excluded_parameters_still_constructible():
    r = six_dim_rep(ParamPair.of(Q, 1, 1))
    assert rep_validate(r).hypothesis_holds
    assert burnside_span_dim(r) < 36


@pytest.mark.parametrize("char,counts", [(0, (6, 3, 2)), (5, (6, 3, 2)), (2, (3, 3, 0)), (3, (2, 0, 2))])
def test_enumerate_counts(char, counts):
    assert enumerate_catalog(char).counts() == counts


def test_requires_extension_flag():
    listing = enumerate_catalog(0, Q)
    flagged = {e.label.text() for e in listing.entries if e.requires_extension}
    assert "dim2/(1,zeta)" in flagged and "dim3/+" not in flagged
    assert not any(e.requires_extension for e in enumerate_catalog(0, QZ).entries)


def test_label_text_roundtrip():
    for char in (0, 2, 3):
        for lab in finite_labels(char):
            assert parse_label(lab.text()) == lab
    p = ParamPair.of(Q, 2, 3)
    assert parse_label("dim6/(2,3)", Q) == CatalogLabel(6, p)


# --- exclusions ----------------------------------------------------------------


def test_param_excluded_examples():
    assert param_excluded(ParamPair.of(Q, 1, 1))
    assert not param_excluded(ParamPair.of(Q, 2, 3))
    F2 = field_make(GF(2, (1, 1, 1)))
    assert param_excluded(ParamPair.of(F2, -1, 1))


@pytest.mark.parametrize(
    "spec,size", [(QQ, 4), (QQ_ZETA, 6), (GF(7), 6), (GF(2, (1, 1, 1)), 3), (GF(3), 4), (GF(5), 4)], ids=str
)
def test_excluded_lists(spec, size):
    F = field_make(spec)
    ex = excluded_pairs(F)
    assert len(ex) == size
    for p in ex:
        assert burnside_span_dim(six_dim_rep(p)) < 36
        assert all(param_excluded(q) for q in orbit(p))  # orbit-closed


def test_gf3_has_no_valid_dim6_parameter():
    F = field_make(GF(3))
    units = [F(1), F(2)]
    assert all(param_excluded(ParamPair(a, b)) for a in units for b in units)


# --- orbits and intertwiners -------------------------------------------------------


def test_orbit_examples():
    got = {p.key() for p in orbit(ParamPair.of(Q, 2, 3))}
    assert got == {("2", "3"), ("1/2", "1/3"), ("3", "1/6"), ("1/3", "6"), ("1/6", "2"), ("6", "1/2")}
    assert len(orbit(ParamPair.of(Q, 1, 1))) == 1
    z = QZ.zeta()
    assert {p.key() for p in orbit(ParamPair(z, z))} == {ParamPair(z, z).key(), ParamPair(z * z, z * z).key()}


def test_canonical_examples():
    assert canonical_param(ParamPair.of(Q, 6, "1/2")) == canonical_param(ParamPair.of(Q, 2, 3))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10006), st.integers(1, 10006))
def test_canonical_idempotent_and_constant(a, b):
    p = ParamPair.of(P, a, b)
    c = canonical_param(p)
    assert canonical_param(c) == c
    assert all(canonical_param(q) == c for q in orbit(p))
    assert {q.key() for q in orbit(c)} == {q.key() for q in orbit(p)}
    assert 6 % len(orbit(p)) == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10006), st.integers(1, 10006))
def test_qi_identities(a, b):
    p = ParamPair.of(P, a, b)
    X = x_prime(P)
    for i in range(1, 7):
        Qi = intertwiner_Qi(i, p)
        assert not mat_det(Qi).is_zero()
        assert Qi @ X == X @ Qi
        assert Qi @ y_prime(p) == y_prime(sigma(i, p)) @ Qi


def test_q1_is_identity_and_q2_entries():
    p = ParamPair.of(Q, 2, 3)
    assert intertwiner_Qi(1, p).is_identity()
    Q2 = intertwiner_Qi(2, p)
    assert {x for x in Q2.data if x != 0} == {1, Fraction(1, 3), 2}
    with pytest.raises((ValueError, CatalogError)):
        intertwiner_Qi(7, p)


def test_q3_sends_pair_to_third_orbit_map():
    p = ParamPair.of(Q, 2, 3)
    assert sigma(3, p).key() == ("3", "1/6")
    Q3 = intertwiner_Qi(3, p)
    assert Q3 @ y_prime(p) == y_prime(sigma(3, p)) @ Q3


# --- classification -----------------------------------------------------------------


def test_classify_roundtrip_q():
    rng = random.Random(4)
    p = ParamPair.of(Q, 2, 3)
    r = six_dim_rep(p).conjugate(random_invertible(Q, 6, rng))
    res = classify(r)
    assert res.status == "classified" and res.dim == 6
    assert res.canonical_params == canonical_param(p)
    W = res.witness_Q
    canon = six_dim_rep(res.canonical_params)
    assert W @ r.X == canon.X @ W and W @ r.Y == canon.Y @ W


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_classify_roundtrip_gf(seed):
    rng = random.Random(seed)
    p = valid_pair(P, rng)
    res = classify(six_dim_rep(p).conjugate(random_invertible(P, 6, rng)))
    assert res.status == "classified"
    assert res.canonical_params == canonical_param(p)


@pytest.mark.parametrize("spec", [QQ_ZETA, GF(7), GF(2, (1, 1, 1)), GF(3)], ids=str)
def test_classify_finite_labels(spec):
    F = field_make(spec)
    rng = random.Random(spec.label)
    for lab in finite_labels(F.p):
        r = make_catalog_rep(lab, F).conjugate(random_invertible(F, lab.dim, rng))
        res = classify(r)
        assert res.status == "classified" and res.label == lab


def test_classify_reducible_and_outside():
    assert classify(six_dim_rep(ParamPair.of(Q, 1, 1))).status == "reducible"
    commuting = Rep(Mat.diag(Q, [1, -1]), Mat.identity(Q, 2))
    assert classify(commuting).status == "reducible"
    X = Mat.permutation(Q, [1, 0, 2, 3])
    Y = Mat.permutation(Q, [0, 2, 3, 1])
    res = classify(Rep(X, Y))
    assert res.status == "outside-hypothesis"


def test_classify_rejects_invalid_relations():
    with pytest.raises(ValueError):
        classify(Rep(Mat.diag(Q, [2]), Mat.identity(Q, 1)))


def test_classify_dimension_outside_catalog():
    # a 4-dimensional reducible pair is caught by the span test before the dimension check
    assert classify(Rep(Mat.identity(Q, 4), Mat.identity(Q, 4))).status == "reducible"


def test_classify_json_shape():
    res = classify(make_catalog_rep(CatalogLabel(3, "-"), Q))
    doc = res.to_json()
    assert doc["status"] == "classified" and doc["label"] == "dim3/-" and doc["dim"] == 3
    assert "witness_Q" in doc


def test_classify_number_field_limitation():
    # conjugated dim-6 reps over Q(zeta) need root finding over a number field, which is unsupported
    rng = random.Random(9)
    z = QZ.zeta()
    p = ParamPair(QZ(2) + z, QZ(3))
    r = six_dim_rep(p).conjugate(random_invertible(QZ, 6, rng))
    with pytest.raises(ClassificationError):
        classify(r)
    # the unconjugated rep has diagonal commutator images and classifies directly
    res = classify(six_dim_rep(p))
    assert res.status == "classified" and res.canonical_params == canonical_param(p)
