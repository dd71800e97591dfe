import random

import pytest

from psl2z.exactalg import GF, QQ, QQ_ZETA, field_make, mat_det
from psl2z.elimination import (
    CLAIMS,
    F1,
    F3,
    F3_AS_PRINTED,
    GCD_PAIR,
    SCRIPT_IDS,
    build_monomial_system,
    clearing_exponents,
    compute_R,
    compute_R3,
    generation_check,
    resolve_script_id,
    run_elimination,
    run_sprem_chain,
    solve_exception_set,
    verify_factorizations,
    verify_gcd_root_set,
    verify_membership_claim,
)
from psl2z.symbolic import C1, C2, LaurentPoly, evaluate_matrix, lp_eval, parse_poly

Q = field_make(QQ)
QZ = field_make(QQ_ZETA)


@pytest.fixture(scope="module")
def chains():
    return {sid: run_sprem_chain(sid) for sid in SCRIPT_IDS}


# --- monomial systems --------------------------------------------------------------


def test_reference_entries():
    A1 = build_monomial_system("A1")
    B1 = build_monomial_system("B1")
    assert A1.matches_reference and B1.matches_reference
    rows = A1.matrix.row_lists()
    assert rows[0][0] == LaurentPoly({(0, 0): 1}) and rows[0][1] == C2
    assert B1.matrix.row_lists()[5][5] == C1 * C2


def test_clearing_exponents():
    assert clearing_exponents("A1") == (6, 6)
    assert clearing_exponents("B1") == (5, 5)
    for fam in ("A1", "B1"):
        R = compute_R(fam)
        assert R.min_degree("c1") >= 0 and R.min_degree("c2") >= 0


def test_R_matches_determinant_pointwise():
    rng = random.Random(1)
    F = field_make(GF(10007))
    for fam, (e1, e2) in (("A1", (6, 6)), ("B1", (5, 5))):
        M = build_monomial_system(fam).matrix
        for _ in range(10):
            c1, c2 = F(rng.randint(1, 10006)), F(rng.randint(1, 10006))
            d = mat_det(evaluate_matrix(M, c1, c2))
            assert lp_eval(compute_R(fam), c1, c2) == d * c1 ** e1 * c2 ** e2


def test_R_special_values():
    R1, R2 = compute_R("A1"), compute_R("B1")
    assert lp_eval(R1, Q(1), Q(1)).is_zero()
    for t in (2, 3, -5):
        assert lp_eval(R2, Q(1), Q(t)).is_zero()
    z = QZ.zeta()
    assert not lp_eval(R1, z, z * z).is_zero()


# --- factorizations ---------------------------------------------------------------------


def test_factorizations_verified():
    rep = verify_factorizations()
    assert rep.ok
    assert rep.r3_total_degree == 14
    assert rep.r2_constant == 1
    assert not rep.printed_f3_divides_r2
    assert compute_R3().total_degree() == 14


@pytest.mark.parametrize("bad", ["f1", "f3"])
def test_tampered_factor_fails(bad):
    kwargs = {"f1": F1 + 1} if bad == "f1" else {"f3": F3_AS_PRINTED}
    assert not verify_factorizations(**kwargs).ok


def test_f3_correction_is_one_monomial():
    diff = F3 - F3_AS_PRINTED
    assert diff == parse_poly("-c1^2*c2^3 + c1^2*c2^2")


# --- chains and claims ---------------------------------------------------------------------


@pytest.mark.parametrize("sid", SCRIPT_IDS)
def test_chain_certificates(chains, sid):
    ch = chains[sid]
    assert ch.check_steps() and ch.check_cofactors()
    verdict = verify_membership_claim(ch, CLAIMS[sid])
    assert verdict.ok, verdict.detail


def test_tampered_claim_fails(chains):
    from dataclasses import replace

    claim = CLAIMS["R1F1"]
    f, k = claim.factors[-1]
    bad = replace(claim, factors=claim.factors[:-1] + ((f, k + 1),))
    assert not verify_membership_claim(chains["R1F1"], bad).ok


def test_r2_cyc3_constant(chains):
    # the claimed product carries the factor 27, so the remainder matches it exactly
    v = verify_membership_claim(chains["R2_cyc3"], CLAIMS["R2_cyc3"])
    assert v.ok and v.constant == 1
    assert ("27", 1) in CLAIMS["R2_cyc3"].factors


def test_gcd_cross_check(chains):
    g = verify_gcd_root_set(chains[GCD_PAIR[0]], chains[GCD_PAIR[1]])
    assert g.ok


def test_script_aliases():
    assert resolve_script_id("R1F3_factored(c2−c1)") == "R1F3_factored(c2-c1)"
    with pytest.raises(KeyError):
        resolve_script_id("R9")


def test_run_elimination_only():
    rep = run_elimination(only="R1F1")
    assert rep["ok"] and [c["script_id"] for c in rep["chains"]] == ["R1F1"]
    assert "gcd_cross_check" not in rep


# --- exception sets -----------------------------------------------------------------------


def _pairs(es):
    return {(a.text(), b.text()) for a, b in es.pairs}


def test_exception_set_char0():
    z = QZ.zeta()
    got = set(solve_exception_set(0).pairs)
    assert got == {(QZ(a), QZ(b)) for a in (1, -1) for b in (1, -1)} | {(z, z), (z * z, z * z)}


def test_exception_set_char2():
    assert len(solve_exception_set(2).pairs) == 3


def test_exception_set_char3():
    assert _pairs(solve_exception_set(3)) == {("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")}


def test_exception_set_matches_brute_force_gf7():
    F = field_make(GF(7))
    R1, R2 = compute_R("A1"), compute_R("B1")
    brute = {
        (F(a), F(b))
        for a in range(1, 7)
        for b in range(1, 7)
        if lp_eval(R1, F(a), F(b)).is_zero() and lp_eval(R2, F(a), F(b)).is_zero()
    }
    assert set(solve_exception_set(7).pairs) == brute


# --- generation ----------------------------------------------------------------------------


def test_generation_check():
    F = field_make(GF(10007))
    rng = random.Random(2)
    seen = 0
    for _ in range(20):
        res = generation_check(F(rng.randint(2, 10006)), F(rng.randint(2, 10006)))
        if res is not None:
            assert res
            seen += 1
    assert seen >= 15
    assert generation_check(Q(1), Q(1)) is None
