import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psl2z.catalog import CatalogLabel, ParamPair, finite_labels, make_catalog_rep, six_dim_rep
from psl2z.exactalg import GF, QQ, QQ_ZETA, Mat, RingMismatchError, ShapeError, field_make, mat_det
from psl2z.rep import (
    ReducibleInputError,
    Rep,
    RepFormatError,
    burnside_span_dim,
    equivalence_witness,
    intertwiner_space,
    is_irreducible,
    rep_commutators,
    rep_equivalent,
    rep_validate,
)

QZ = field_make(QQ_ZETA)
Q = field_make(QQ)
P = field_make(GF(10007))


def random_invertible(F, n, rng):
    while True:
        M = Mat(F, n, n, [F.random_raw(rng, 4) for _ in range(n * n)])
        if not mat_det(M).is_zero():
            return M


def catalog_sample():
    reps = [make_catalog_rep(lab, QZ) for lab in finite_labels(0)]
    reps += [six_dim_rep(ParamPair.of(Q, 2, 3)), six_dim_rep(ParamPair.of(P, 17, 4242))]
    return reps


def test_validate_dim3():
    r = make_catalog_rep(CatalogLabel(3, "+"), Q)
    v = rep_validate(r)
    assert v.hypothesis_holds and not v.lambda_scalar


def test_y_diag_one_zeta():
    r = Rep(Mat.identity(QZ, 2), Mat.diag(QZ, [QZ(1), QZ.zeta()]))
    assert rep_validate(r).y_cubed_identity


def test_dim6_with_zero_parameter_rejected():
    with pytest.raises(ValueError):
        ParamPair.of(Q, 0, 3)


def test_rep_type_checks():
    with pytest.raises(RingMismatchError):
        Rep(Mat.identity(Q, 2), Mat.identity(P, 2))
    with pytest.raises(ShapeError):
        Rep(Mat.identity(Q, 2), Mat.identity(Q, 3))


def test_commutators_dim2():
    r = make_catalog_rep(CatalogLabel(2, ("1", "zeta")), QZ)
    ci = rep_commutators(r)
    z = QZ.zeta()
    assert ci.lam == Mat.diag(QZ, [z, z * z])
    assert ci.gamma == Mat.diag(QZ, [z * z, z])


def test_commuting_pair_has_trivial_commutators():
    r = Rep(Mat.diag(Q, [1, -1]), Mat.identity(Q, 2))
    ci = rep_commutators(r)
    assert ci.lam.is_identity() and ci.gamma.is_identity()


def test_dim6_commutator_entries():
    r = six_dim_rep(ParamPair.of(Q, 2, 3))
    ci = rep_commutators(r)
    allowed = {Q(x) for x in (2, 3, 6)} | {Q(x).inv() for x in (2, 3, 6)}
    assert ci.both_diagonal
    assert set(ci.lam.diagonal()) <= allowed and set(ci.gamma.diagonal()) <= allowed
    for lam in ci.lam.diagonal():
        assert lam.inv() in ci.lam.diagonal()


def test_burnside_examples():
    assert burnside_span_dim(Rep(Mat.identity(Q, 2), Mat.identity(Q, 2))) == 1
    assert burnside_span_dim(make_catalog_rep(CatalogLabel(2, ("1", "zeta")), QZ)) == 4
    z = QZ.zeta()
    assert burnside_span_dim(six_dim_rep(ParamPair(z, z))) < 36
    assert burnside_span_dim(six_dim_rep(ParamPair.of(Q, 2, 3))) == 36


def test_commutator_identities_on_catalog():
    for r in catalog_sample():
        X, Y = r.X, r.Y
        ci = rep_commutators(r)
        L, G = ci.lam, ci.gamma
        assert L @ X @ L == X and G @ X @ G == X
        assert L @ Y @ G == Y and G @ Y @ Y @ L == Y @ Y
        assert L @ G == G @ L
        assert ((X @ Y) ** 6).is_identity()


def test_burnside_invariant_under_conjugation():
    rng = random.Random(3)
    sample = catalog_sample()
    for _ in range(50):
        r = rng.choice(sample)
        Qm = random_invertible(r.field, r.n, rng)
        assert burnside_span_dim(r.conjugate(Qm)) == burnside_span_dim(r)


def test_scalar_lambda_forces_small_span():
    # Λ = Γ: commuting X, Y of size 2
    r = Rep(Mat.from_rows(Q, [[0, 1], [1, 0]]), Mat.identity(Q, 2))
    assert rep_validate(r).lambda_equals_gamma
    assert burnside_span_dim(r) < 4


def test_intertwiner_examples():
    r = six_dim_rep(ParamPair.of(P, 2, 3))
    basis = intertwiner_space(r, r)
    assert len(basis) == 1 and basis[0].is_scalar()
    from psl2z.catalog import intertwiner_Qi, sigma

    p = ParamPair.of(P, 2, 3)
    q = sigma(3, p)
    basis = intertwiner_space(six_dim_rep(p), six_dim_rep(q))
    assert len(basis) == 1
    Q3 = intertwiner_Qi(3, p)
    supp = lambda M: M.support()
    assert supp(basis[0]) == supp(Q3)
    a = make_catalog_rep(CatalogLabel(2, ("1", "zeta")), QZ)
    b = make_catalog_rep(CatalogLabel(2, ("1", "zeta^2")), QZ)
    assert intertwiner_space(a, b) == []


def test_intertwiner_contains_identity():
    for r in catalog_sample():
        basis = intertwiner_space(r, r)
        assert len(basis) == 1 and basis[0].is_scalar()


def test_equivalence_examples():
    a = make_catalog_rep(CatalogLabel(3, "+"), Q)
    b = make_catalog_rep(CatalogLabel(3, "-"), Q)
    assert rep_equivalent(a, a)
    assert not rep_equivalent(a, b)
    assert rep_equivalent(six_dim_rep(ParamPair.of(Q, 2, 3)), six_dim_rep(ParamPair.of(Q, "1/2", "1/3")))
    with pytest.raises(ReducibleInputError):
        rep_equivalent(six_dim_rep(ParamPair.of(Q, 1, 1)), six_dim_rep(ParamPair.of(Q, 1, 1)))


def test_equivalence_reflexive_symmetric_on_sample():
    sample = [r for r in catalog_sample() if r.field == QZ]
    for a in sample:
        for b in sample:
            if a.n == b.n:
                assert rep_equivalent(a, b) == rep_equivalent(b, a)
                assert rep_equivalent(a, b) == (a == b)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 10006), st.integers(1, 10006), st.integers(0, 2 ** 32))
def test_witness_conjugates(c1, c2, seed):
    p = ParamPair.of(P, c1, c2)
    r = six_dim_rep(p)
    if not is_irreducible(r):
        return
    Qm = random_invertible(P, 6, random.Random(seed))
    s = r.conjugate(Qm)
    W = equivalence_witness(r, s)
    assert W is not None
    assert W @ r.X == s.X @ W and W @ r.Y == s.Y @ W


# --- file format ----------------------------------------------------------------


def test_json_roundtrip(tmp_path):
    r = make_catalog_rep(CatalogLabel(2, ("zeta", "zeta^2")), QZ)
    path = tmp_path / "r.json"
    path.write_text(json.dumps(r.to_json()))
    assert Rep.load(path) == r


@pytest.mark.parametrize(
    "doc,needle",
    [
        ({"field": {"char": 0}, "n": 1, "X": [["1"]]}, "'Y'"),
        ({"field": {"char": 4}, "n": 1, "X": [["1"]], "Y": [["1"]]}, "field"),
        ({"field": {"char": 0}, "n": 2, "X": [["1"]], "Y": [["1"]]}, "X"),
        ({"field": {"char": 0}, "n": 1, "X": [["1"]], "Y": [["q"]]}, "Y[0][0]"),
        ({"field": {"char": 0}, "n": 1, "X": [[True]], "Y": [["1"]]}, "X[0][0]"),
        ([1, 2], "object"),
    ],
)
def test_format_errors_name_the_field(doc, needle):
    with pytest.raises(RepFormatError) as exc:
        Rep.from_json(doc)
    assert needle in str(exc.value)


def test_malformed_json_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"field": {"char": 0},\n "n": 1 "X": []}')
    with pytest.raises(RepFormatError) as exc:
        Rep.load(path)
    assert "line 2" in str(exc.value)
