"""Reducibility of the six-dimensional family by polynomial elimination.

The pair (X'', Y') is irreducible iff the two cycle matrices U and L can be
written as combinations of six cycle-shaped words.  That happens when one of
two 6×6 coefficient matrices (A1 or B1) is nonsingular, i.e. unless both
cleared determinants R1 and R2 vanish.  The common zeros of R1 and R2 are
then pinned down with pseudo-remainder chains, each of which carries a
cofactor certificate final = u·A0 + v·B0.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactalg import FieldSpec, Mat, Scalar, field_make, mat_det, mat_det_cofactor
from .symbolic import (
    C1,
    C2,
    LAURENT,
    ONE,
    ChainResult,
    LaurentPoly,
    UPoly,
    lp_eval,
    lp_exact_div,
    lp_gcd_univariate,
    multiplicity,
    parse_poly,
    specialize,
    sprem_chain,
)

# ---------------------------------------------------------------------------
# The generators in the cycle-adapted basis
# ---------------------------------------------------------------------------

X_CYCLE_ROWS = [
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
]

# Conjugator taking the block-swap X' to X_CYCLE (and fixing Y').
P_ROWS = [
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0],
]

# Cycle positions (row, col), 0-based, in the order the coefficient rows are read.
CYCLE_POSITIONS = [(5, 0), (0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]


def y_family_rows(c1, c2) -> list[list]:
    """Y' with the given parameters (ring elements supporting * and /)."""
    z = c1 * 0
    one = z + 1
    inv12 = one / (c1 * c2)
    return [
        [z, z, z, z, c1, z],
        [z, z, z, z, z, one],
        [c2, z, z, z, z, z],
        [z, one, z, z, z, z],
        [z, z, inv12, z, z, z],
        [z, z, z, one, z, z],
    ]


def symbolic_generators() -> tuple[Mat, Mat]:
    """(X'', Y') over the Laurent ring with c1, c2 symbolic."""
    X = Mat.from_rows(LAURENT, X_CYCLE_ROWS)
    Y = Mat.from_rows(LAURENT, y_family_rows(C1, C2))
    return X, Y


# ---------------------------------------------------------------------------
# Reference matrices as displayed (row-major, polynomial text)
# ---------------------------------------------------------------------------

REFERENCE_A1 = [
    ["1", "c2", "c1*c2^2", "c1*c2", "c2^2", "c1^2*c2^2"],
    ["c1", "1", "c2", "c1*c2", "c1^-1", "c1*c2^2"],
    ["1", "c1^-1*c2^-1", "c1^-2*c2^-1", "c1^-1", "c1^-2*c2^-2", "c1^-2"],
    ["c2", "1", "c1^-1*c2^-1", "c1^-1", "c2^-1", "c1^-2*c2^-1"],
    ["1", "c1", "c1*c2^-1", "c2^-1", "c1^2", "c2^-2"],
    ["c1^-1*c2^-1", "1", "c1", "c2^-1", "c1*c2", "c1*c2^-1"],
]

REFERENCE_B1 = [
    ["1", "c1^-1", "c2", "c1*c2", "c1*c2^2", "c2^2"],
    ["c1", "c2^-1", "1", "c1*c2", "c2", "c1^-1"],
    ["1", "c2^-1", "c1^-1*c2^-1", "c1^-1", "c1^-2*c2^-1", "c1^-2*c2^-2"],
    ["c2", "c1*c2", "1", "c1^-1", "c1^-1*c2^-1", "c2^-1"],
    ["1", "c1*c2", "c1", "c2^-1", "c1*c2^-1", "c1^2"],
    ["c1^-1*c2^-1", "c1^-1", "1", "c2^-1", "c1", "c1*c2"],
]

# Words generating the six coefficient columns.  Each is a product read left
# to right from the letters L (Λ''), G (Γ''), and W (= Y'X'').
WORDS = {
    "A1": ["W", "LW", "LGW", "GW", "LLW", "GGW"],
    "B1": ["W", "WL", "LW", "GW", "LGW", "LLW"],
}
CLEARING = {"A1": (6, 6), "B1": (5, 5)}

# ---------------------------------------------------------------------------
# The R2 factors, as given, plus the correction to the third one
# ---------------------------------------------------------------------------

F1 = parse_poly("c1^2*c2^2 - c1^2*c2 + c1^2 - c1*c2 - c1 + 1")
F2 = parse_poly("c1^2*c2^2 - c1*c2^2 + c2^2 - c1*c2 - c2 + 1")
F3_AS_PRINTED = parse_poly(
    "c1^4*c2^4 + c1^4*c2^3 + c1^4*c2^2 + c1^3*c2^4 - c1^3*c2^3 - c1^3*c2^2 + c1^3*c2"
    " + c1^2*c2^4 - c1^2*c2^2 - 6*c1^2*c2^2 - c1^2*c2 + c1^2 + c1*c2^3 - c1*c2^2"
    " - c1*c2 + c1 + c2^2 + c2 + 1"
)
# The printed F3 repeats the monomial c1^2*c2^2; the first occurrence must be
# c1^2*c2^3 for the product formula for R2 to hold (see the decisions ledger).
F3 = parse_poly(
    "c1^4*c2^4 + c1^4*c2^3 + c1^4*c2^2 + c1^3*c2^4 - c1^3*c2^3 - c1^3*c2^2 + c1^3*c2"
    " + c1^2*c2^4 - c1^2*c2^3 - 6*c1^2*c2^2 - c1^2*c2 + c1^2 + c1*c2^3 - c1*c2^2"
    " - c1*c2 + c1 + c2^2 + c2 + 1"
)
CYC3 = C1 ** 2 + C1 + 1
CYC6 = C1 ** 2 - C1 + 1
R1_LINEAR_FACTORS = [C2 - C1, C1 ** 2 * C2 - 1, C1 * C2 ** 2 - 1]
R2_LINEAR_FACTORS = [1 - C1, C2 - 1, C1 * C2 - 1]


# ---------------------------------------------------------------------------
# Monomial systems
# ---------------------------------------------------------------------------


class ReferenceMismatch(AssertionError):
    pass


@dataclass
class MonomialSystem:
    family: str
    words: list[str]
    monomials: list[Mat]
    matrix: Mat
    mismatches: list[tuple[int, int, str, str]] = field(default_factory=list)

    @property
    def matches_reference(self) -> bool:
        return not self.mismatches


def _commutators(X: Mat, Y: Mat) -> tuple[Mat, Mat]:
    Y2 = Y @ Y
    return X @ Y @ X @ Y2, X @ Y2 @ X @ Y


def word_matrices(X: Mat, Y: Mat, family: str) -> list[Mat]:
    lam, gam = _commutators(X, Y)
    letters = {"L": lam, "G": gam, "W": Y @ X}
    out = []
    for w in WORDS[family]:
        m = letters[w[0]]
        for ch in w[1:]:
            m = m @ letters[ch]
        out.append(m)
    return out


def coefficient_matrix(monomials: list[Mat]) -> Mat:
    ring = monomials[0].ring
    data = [m.raw(i, j) for (i, j) in CYCLE_POSITIONS for m in monomials]
    return Mat(ring, 6, 6, data)


def build_monomial_system(family: str, check: bool = True) -> MonomialSystem:
    """Build A1 or B1 from the generators and compare with the reference display."""
    if family not in WORDS:
        raise ValueError(f"unknown family {family!r}; expected 'A1' or 'B1'")
    X, Y = symbolic_generators()
    monos = word_matrices(X, Y, family)
    cycle = set(CYCLE_POSITIONS)
    for w, m in zip(WORDS[family], monos):
        supp = {(i, j) for i in range(6) for j in range(6) if not m.raw(i, j).is_zero()}
        if supp != cycle:
            raise ReferenceMismatch(f"word {w} of {family} is not supported on the cycle")
    M = coefficient_matrix(monos)
    ref = REFERENCE_A1 if family == "A1" else REFERENCE_B1
    mism = []
    for i in range(6):
        for j in range(6):
            want = parse_poly(ref[i][j])
            if M.raw(i, j) != want:
                mism.append((i + 1, j + 1, M.raw(i, j).text(), want.text()))
    system = MonomialSystem(family, WORDS[family], monos, M, mism)
    if check and mism:
        raise ReferenceMismatch(f"{family} differs from the reference in {len(mism)} entries: {mism[:3]}")
    return system


@lru_cache(maxsize=None)
def compute_R(family: str) -> LaurentPoly:
    """det(family matrix) times the clearing monomial; must be a polynomial."""
    system = build_monomial_system(family)
    det = mat_det(system.matrix)
    e1, e2 = CLEARING[family]
    R = det.shift(e1, e2)
    if not R.is_polynomial():
        raise ArithmeticError(
            f"{family}: clearing by c1^{e1} c2^{e2} leaves negative exponents "
            f"(min exponents {R.min_degree('c1')}, {R.min_degree('c2')})"
        )
    return R


def clearing_exponents(family: str) -> tuple[int, int]:
    """Smallest (a, b) with c1^a c2^b det a polynomial."""
    det = compute_R(family).shift(*(-e for e in CLEARING[family]))
    return -det.min_degree("c1"), -det.min_degree("c2")


def det_by_cofactors(family: str) -> LaurentPoly:
    """Independent determinant route (Laplace expansion), for cross-checks."""
    return mat_det_cofactor(build_monomial_system(family).matrix)


# ---------------------------------------------------------------------------
# Factorization identities
# ---------------------------------------------------------------------------


@dataclass
class FactorizationReport:
    r2_constant: Fraction | None
    r2_ok: bool
    r3: LaurentPoly | None
    r3_total_degree: int | None
    r1_ok: bool
    special_pairs_vanish: dict[str, bool]
    boundary_specializations: dict[str, bool]
    printed_f3_divides_r2: bool

    @property
    def ok(self) -> bool:
        return (
            self.r2_ok
            and self.r1_ok
            and self.r3_total_degree == 14
            and all(self.special_pairs_vanish.values())
            and all(self.boundary_specializations.values())
        )

    def to_json(self) -> dict:
        return {
            "R2_product_identity": self.r2_ok,
            "R2_constant": None if self.r2_constant is None else str(self.r2_constant),
            "R1_divisible": self.r1_ok,
            "R3_total_degree": self.r3_total_degree,
            "R3": None if self.r3 is None else self.r3.text(),
            "special_pairs_vanish": self.special_pairs_vanish,
            "boundary_specializations": self.boundary_specializations,
            "printed_F3_divides_R2": self.printed_f3_divides_r2,
            "ok": self.ok,
        }


def constant_ratio(a: LaurentPoly, b: LaurentPoly) -> Fraction | None:
    """c with a = c·b, or None if a is not a constant multiple of b."""
    if b.is_zero():
        return None
    q = lp_exact_div(a, b)
    if q is None or not q.is_constant() or q.is_zero():
        return None
    return Fraction(q.constant_value())


def _product(polys) -> LaurentPoly:
    out = ONE
    for p in polys:
        out = out * p
    return out


@lru_cache(maxsize=None)
def compute_R3() -> LaurentPoly:
    q = lp_exact_div(compute_R("A1"), _product(R1_LINEAR_FACTORS))
    if q is None:
        raise ArithmeticError("R1 is not divisible by (c2-c1)(c1^2c2-1)(c1c2^2-1)")
    return q


def verify_factorizations(f1=F1, f2=F2, f3=F3) -> FactorizationReport:
    R1, R2 = compute_R("A1"), compute_R("B1")
    const = constant_ratio(R2, _product(R2_LINEAR_FACTORS + [f1, f2, f3]))
    q = lp_exact_div(R1, _product(R1_LINEAR_FACTORS))
    F = field_make(FieldSpec(0))
    special = {}
    for a, b in [(1, 1), (1, -1), (-1, 1), (-1, -1)]:
        key = f"({a},{b})"
        special[key] = lp_eval(R1, F(a), F(b)).is_zero() and lp_eval(R2, F(a), F(b)).is_zero()
    # R1 restricted to c1 = 1, c2 = 1 and c1·c2 = 1 is a multiple of (t-1)^6 (t^2-1)^3.
    t = C1
    target = (t - 1) ** 6 * (t ** 2 - 1) ** 3
    boundary = {}
    for name, sub in [("c1=1", (1, None)), ("c2=1", (None, 1)), ("c1*c2=1", ("inv", None))]:
        boundary[name] = _boundary_check(R1, sub, target)
    printed_divides = lp_exact_div(R2, F3_AS_PRINTED) is not None
    return FactorizationReport(
        const,
        const is not None,
        q,
        None if q is None else q.total_degree(),
        q is not None,
        special,
        boundary,
        printed_divides,
    )


def _boundary_check(R1: LaurentPoly, sub, target: LaurentPoly) -> bool:
    """Restrict R1 to a boundary line and compare with target in the free variable."""
    out: dict = {}
    for (e1, e2), c in R1.terms.items():
        if sub == (1, None):
            k = (e2, 0)
        elif sub == (None, 1):
            k = (e1, 0)
        else:  # c1 = 1/c2, free variable written as c1 below
            k = (e2 - e1, 0)
        out[k] = out.get(k, 0) + c
    restricted = LaurentPoly(out)
    lo = restricted.min_degree("c1")
    restricted = restricted.shift(-lo, 0)
    return constant_ratio(restricted, target) is not None


# ---------------------------------------------------------------------------
# Elimination scripts and membership claims
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainScript:
    script_id: str
    a0: str
    b0: str
    var: str
    nsteps: int


def _named_polys() -> dict[str, LaurentPoly]:
    return {
        "R1": compute_R("A1"),
        "R2": compute_R("B1"),
        "R3": compute_R3(),
        "F1": F1,
        "F2": F2,
        "F3": F3,
        "c2-c1": C2 - C1,
        "c1^2*c2-1": C1 ** 2 * C2 - 1,
        "c1*c2^2-1": C1 * C2 ** 2 - 1,
        "cyc3": CYC3,
        "cyc6": CYC6,
    }


SCRIPTS = [
    ChainScript("R1F1", "R1", "F1", "c2", 2),
    ChainScript("R1F2", "R1", "F2", "c2", 2),
    ChainScript("R1F3_direct", "R1", "F3", "c2", 4),
    ChainScript("R1F3_factored(c2-c1)", "F3", "c2-c1", "c2", 1),
    ChainScript("R1F3_factored(c1^2*c2-1)", "F3", "c1^2*c2-1", "c2", 1),
    ChainScript("R1F3_factored(c1*c2^2-1)", "F3", "c1*c2^2-1", "c2", 2),
    ChainScript("R1F3_factored(R3)", "R3", "F3", "c2", 4),
    ChainScript("R1_cyc3", "R1", "cyc3", "c1", 2),
    ChainScript("R2_cyc3", "R2", "cyc3", "c1", 2),
    ChainScript("R1_cyc6", "R1", "cyc6", "c1", 2),
    ChainScript("R2_cyc6", "R2", "cyc6", "c1", 2),
]
SCRIPT_IDS = [s.script_id for s in SCRIPTS]

# Lenient spellings accepted on the command line.
_ALIASES = {
    "R1F3_factored(c2−c1)": "R1F3_factored(c2-c1)",
    "R1F3_factored(c1²c2−1)": "R1F3_factored(c1^2*c2-1)",
    "R1F3_factored(c1c2²−1)": "R1F3_factored(c1*c2^2-1)",
}


def resolve_script_id(script_id: str) -> str:
    sid = _ALIASES.get(script_id, script_id)
    if sid not in SCRIPT_IDS:
        raise KeyError(f"unknown chain {script_id!r}; known: {', '.join(SCRIPT_IDS)}")
    return sid


@dataclass(frozen=True)
class MembershipClaim:
    """A claimed ideal member: product of (factor text, multiplicity) pairs."""

    script_id: str
    mode: str  # exact-constant-multiple | divisibility-plus-degree
    factors: tuple[tuple[str, int], ...]
    cofactor_degree: int | None = None
    expected_constant: Fraction | None = None

    def product(self) -> LaurentPoly:
        return _product(parse_poly(f) ** k for f, k in self.factors)

    def to_json(self) -> dict:
        d = {
            "script_id": self.script_id,
            "mode": self.mode,
            "factors": [[f, k] for f, k in self.factors],
        }
        if self.cofactor_degree is not None:
            d["cofactor_degree"] = self.cofactor_degree
        return d


CLAIMS = {
    "R1F1": MembershipClaim("R1F1", "exact-constant-multiple", (("c1", 34), ("c1-1", 24), ("c1^2+c1+1", 6))),
    "R1F2": MembershipClaim(
        "R1F2", "exact-constant-multiple", (("c1-1", 24), ("c1^2+c1+1", 6), ("c1^2-c1+1", 11))
    ),
    "R1F3_direct": MembershipClaim(
        "R1F3_direct",
        "divisibility-plus-degree",
        (("c1", 186), ("c1+1", 36), ("c1-1", 56), ("c1^2+c1+1", 57)),
        cofactor_degree=4 * 28 + 2 * 40,
    ),
    "R1F3_factored(c2-c1)": MembershipClaim(
        "R1F3_factored(c2-c1)", "exact-constant-multiple", (("c1+1", 2), ("c1-1", 2), ("c1^2+c1+1", 2))
    ),
    "R1F3_factored(c1^2*c2-1)": MembershipClaim(
        "R1F3_factored(c1^2*c2-1)",
        "exact-constant-multiple",
        (("c1", 2), ("c1+1", 2), ("c1-1", 2), ("c1^2+c1+1", 2)),
    ),
    "R1F3_factored(c1*c2^2-1)": MembershipClaim(
        "R1F3_factored(c1*c2^2-1)", "exact-constant-multiple", (("c1", 5), ("c1-1", 4), ("c1^2+c1+1", 2))
    ),
    "R1F3_factored(R3)": MembershipClaim(
        "R1F3_factored(R3)",
        "divisibility-plus-degree",
        (("c1", 110), ("c1+1", 16), ("c1-1", 44), ("c1^2+c1+1", 31)),
        cofactor_degree=4 * 16 + 2 * 26,
    ),
    "R1_cyc3": MembershipClaim(
        "R1_cyc3",
        "exact-constant-multiple",
        (
            ("c2^2-c2+1", 1),
            ("c2^6-5*c2^5+23*c2^4-8*c2^3-c2^2-2*c2+1", 1),
            ("c2^2+c2+1", 5),
            ("c2^6-2*c2^5-c2^4-8*c2^3+23*c2^2-5*c2+1", 1),
        ),
    ),
    "R2_cyc3": MembershipClaim(
        "R2_cyc3",
        "exact-constant-multiple",
        (
            ("27", 1),
            ("c2", 2),
            ("c2^2-2*c2+4", 1),
            ("4*c2^2-2*c2+1", 1),
            ("c2-1", 2),
            ("c2^2+c2+1", 5),
        ),
    ),
    "R1_cyc6": MembershipClaim(
        "R1_cyc6",
        "exact-constant-multiple",
        (
            ("c2^2-c2+1", 1),
            ("c2^2+c2+1", 1),
            ("c2^4-c2^2+1", 1),
            ("c2^8-3*c2^7+9*c2^5+4*c2^4-18*c2^3+15*c2^2-6*c2+1", 1),
            ("c2^8-6*c2^7+15*c2^6-18*c2^5+4*c2^4+9*c2^3-3*c2+1", 1),
        ),
    ),
    "R2_cyc6": MembershipClaim(
        "R2_cyc6",
        "exact-constant-multiple",
        (
            ("c2", 2),
            ("3*c2^2-3*c2+1", 1),
            ("c2^2-3*c2+3", 1),
            ("c2^2-c2+1", 1),
            ("c2-1", 2),
            ("4*c2^4+6*c2^3+c2^2-3*c2+1", 1),
            ("c2^4-3*c2^3+c2^2+6*c2+4", 1),
        ),
    ),
}

# The two routes to R1 = F3 = 0 must agree on common roots.
GCD_PAIR = ("R1F3_direct", "R1F3_factored(R3)")
GCD_ALLOWED = (("c1", None), ("c1+1", None), ("c1-1", None), ("c1^2+c1+1", None))


def run_sprem_chain(script_id: str) -> ChainResult:
    """Execute one fixed elimination script with cofactor tracking."""
    sid = resolve_script_id(script_id)
    script = next(s for s in SCRIPTS if s.script_id == sid)
    polys = _named_polys()
    res = sprem_chain(polys[script.a0], polys[script.b0], script.var, script.nsteps, sid)
    keep = "c1" if script.var == "c2" else "c2"
    if not res.final_remainder.is_univariate(keep):
        raise ArithmeticError(f"{sid}: final remainder still involves {script.var}")
    return res


@dataclass
class ClaimVerdict:
    script_id: str
    mode: str
    ok: bool
    constant: Fraction | None = None
    claimed: dict = field(default_factory=dict)
    computed: dict = field(default_factory=dict)
    cofactor_degree: int | None = None
    detail: str = ""

    def to_json(self) -> dict:
        d = {
            "script_id": self.script_id,
            "mode": self.mode,
            "ok": self.ok,
            "claimed_multiplicities": self.claimed,
            "computed_multiplicities": self.computed,
        }
        if self.constant is not None:
            d["constant"] = str(self.constant)
        if self.cofactor_degree is not None:
            d["cofactor_degree"] = self.cofactor_degree
        if self.detail:
            d["detail"] = self.detail
        return d


def _multiplicities(p: LaurentPoly, factors) -> tuple[dict, LaurentPoly]:
    computed = {}
    rest = p
    for f, _ in factors:
        fp = parse_poly(f)
        if fp.is_constant():
            continue
        k, rest = multiplicity(rest, fp)
        computed[f] = k
    return computed, rest


def verify_membership_claim(chain: ChainResult, claim: MembershipClaim) -> ClaimVerdict:
    final = chain.final_remainder
    claimed = {f: k for f, k in claim.factors if not parse_poly(f).is_constant()}
    if claim.mode == "exact-constant-multiple":
        const = constant_ratio(final, claim.product())
        computed, rest = _multiplicities(final, claim.factors)
        ok = const is not None
        detail = "" if ok else f"leftover cofactor of degree {rest.total_degree()}"
        return ClaimVerdict(chain.script_id, claim.mode, ok, const, claimed, computed, detail=detail)
    if claim.mode == "divisibility-plus-degree":
        computed, rest = _multiplicities(final, claim.factors)
        div_ok = all(computed.get(f, 0) >= k for f, k in claimed.items())
        exact = all(computed.get(f, 0) == k for f, k in claimed.items())
        deg = rest.total_degree()
        ok = div_ok and exact and deg == claim.cofactor_degree
        detail = "" if ok else f"cofactor degree {deg}, expected {claim.cofactor_degree}"
        return ClaimVerdict(chain.script_id, claim.mode, ok, None, claimed, computed, deg, detail)
    raise ValueError(f"unknown verification mode {claim.mode!r}")


def verify_gcd_root_set(first: ChainResult, second: ChainResult) -> ClaimVerdict:
    """The gcd of both F3 routes may only contain c1, c1±1 and c1²+c1+1."""
    g = lp_gcd_univariate(first.final_remainder, second.final_remainder, "c1")
    computed, rest = _multiplicities(g, GCD_ALLOWED)
    ok = rest.is_constant() and not rest.is_zero()
    return ClaimVerdict(
        f"gcd({first.script_id}, {second.script_id})",
        "gcd-root-set",
        ok,
        claimed={f: "any" for f, _ in GCD_ALLOWED},
        computed=computed,
        cofactor_degree=rest.total_degree(),
        detail=f"gcd degree {g.degree('c1')}",
    )


# ---------------------------------------------------------------------------
# Solving R1 = R2 = 0
# ---------------------------------------------------------------------------


def exception_field_spec(characteristic: int) -> FieldSpec:
    """A field of the given characteristic holding every candidate root."""
    if characteristic == 0:
        return FieldSpec(0, (1, 1, 1), "Q(zeta)")
    if characteristic == 3:
        return FieldSpec(3)
    if characteristic % 3 == 1:
        return FieldSpec(characteristic)
    return FieldSpec(characteristic, (1, 1, 1))


def _candidate_pool(F) -> list[Scalar]:
    if F.p:
        if F.order > 10 ** 6:
            raise ValueError("exhaustive root search needs a small field")
        return [Scalar(F, x) for x in F.elements() if not F.is_zero(x)]
    z = F.zeta()
    pool = [F(1), F(-1)]
    if z is not None:
        pool += [z, z * z, -z, -(z * z)]
    return pool


def _roots_in_pool(poly: UPoly, pool: list[Scalar]) -> list[Scalar]:
    """Roots of poly among pool; fails loudly if roots outside the pool remain
    possible over an infinite field (cofactor must be a nonzero constant)."""
    roots = []
    rest = poly
    for x in pool:
        k, rest2 = rest.deflate(x)
        if k:
            roots.append(x)
            rest = rest2
    if not poly.F.p and rest.degree > 0:
        raise ArithmeticError(f"polynomial keeps a factor of degree {rest.degree} with roots outside the pool")
    return roots


@dataclass
class ExceptionSet:
    characteristic: int
    field: FieldSpec
    pairs: list[tuple[Scalar, Scalar]]
    c1_candidates: list[Scalar]
    log: list[str]


def solve_exception_set(characteristic: int, chains: dict[str, ChainResult] | None = None) -> ExceptionSet:
    """Common zeros of R1 and R2 with c1, c2 nonzero.

    The c1 values come from the certificates: R2 factors as
    (1-c1)(c2-1)(c1c2-1)F1F2F3, the boundary lines are handled by restricting
    R1, and each F-branch yields a univariate polynomial in c1 (reduced into
    the target field).  For every candidate c1 the matching c2 are the common
    roots of R1(c1, ·) and R2(c1, ·).
    """
    Fs = exception_field_spec(characteristic)
    F = field_make(Fs)
    R1, R2 = compute_R("A1"), compute_R("B1")
    pool = _candidate_pool(F)
    log = []
    if chains is None:
        chains = {}
    for sid in ("R1F1", "R1F2", "R1F3_direct", "R1F3_factored(R3)"):
        if sid not in chains:
            chains[sid] = run_sprem_chain(sid)
    certs = {
        "R1F1": chains["R1F1"].final_remainder,
        "R1F2": chains["R1F2"].final_remainder,
        "R1F3": lp_gcd_univariate(
            chains["R1F3_direct"].final_remainder, chains["R1F3_factored(R3)"].final_remainder, "c1"
        ),
    }
    c1_values: list[Scalar] = []

    def add(x):
        if x not in c1_values:
            c1_values.append(x)

    one = F(1)
    add(one)  # c1 = 1 line
    for name, cert in certs.items():
        u = specialize(cert, "c2", one)  # cert is free of c2; this just maps it into F
        if u.is_zero():
            log.append(f"{name}: certificate vanishes in characteristic {characteristic}; using all candidates")
            for x in pool:
                add(x)
            continue
        roots = _roots_in_pool(u, pool)
        log.append(f"{name}: c1 in {{{', '.join(r.text() for r in roots)}}}")
        for r in roots:
            add(r)
    pairs = []
    candidates_c2: dict = {}

    def common_c2(c1: Scalar) -> list[Scalar]:
        a = specialize(R1, "c1", c1)
        b = specialize(R2, "c1", c1)
        g = a.gcd(b) if not (a.is_zero() and b.is_zero()) else None
        if g is None:
            return list(pool)
        return _roots_in_pool(g, pool)

    # the lines c2 = 1 and c1*c2 = 1: their c1 values come from R1 on the line
    for line in ("c2=1", "c1*c2=1"):
        for c2 in pool:
            c1 = c2.inv() if line == "c1*c2=1" else None
            if line == "c2=1":
                if c2 != one:
                    continue
                u = specialize(R1, "c2", c2)
                for r in _roots_in_pool(u, pool):
                    add(r)
            else:
                if lp_eval(R1, c1, c2).is_zero():
                    add(c1)
    for c1 in c1_values:
        if c1.is_zero():
            continue
        cs = common_c2(c1)
        candidates_c2[c1.text()] = [c.text() for c in cs]
        for c2 in cs:
            if c2.is_zero():
                continue
            r1, r2 = lp_eval(R1, c1, c2), lp_eval(R2, c1, c2)
            if not (r1.is_zero() and r2.is_zero()):
                raise ArithmeticError(f"candidate ({c1}, {c2}) contradicts the certificates")
            if (c1, c2) not in pairs:
                pairs.append((c1, c2))
    log.append(f"c2 candidates per c1: {candidates_c2}")
    return ExceptionSet(characteristic, Fs, pairs, c1_values, log)


# ---------------------------------------------------------------------------
# U / L generation check at a concrete point
# ---------------------------------------------------------------------------


def generation_check(c1: Scalar, c2: Scalar) -> bool | None:
    """Solve A1·a = e(U) and A1·b = e(L); rebuild U and L from the words.

    Returns None when det(A1) vanishes at the point, else whether both
    reconstructions are exact.
    """
    from .exactalg import mat_inverse

    F = c1.field
    X = Mat.from_rows(F, X_CYCLE_ROWS)
    Y = Mat.from_rows(F, y_family_rows(c1, c2))
    monos = word_matrices(X, Y, "A1")
    A = coefficient_matrix(monos)
    if mat_det(A).is_zero():
        return None
    Ainv = mat_inverse(A)
    U = Mat(F, 6, 6, [F.one if j == i + 1 else F.zero for i in range(6) for j in range(6)])
    L = Mat(F, 6, 6, [F.one if (i, j) == (5, 0) else F.zero for i in range(6) for j in range(6)])
    ok = True
    for target, rhs in ((U, [0, 1, 1, 1, 1, 1]), (L, [1, 0, 0, 0, 0, 0])):
        coeffs = Ainv @ Mat(F, 6, 1, [F.raw(v) for v in rhs])
        acc = Mat.zeros(F, 6)
        for k, m in enumerate(monos):
            acc = acc + m * Scalar(F, coeffs.raw(k, 0))
        ok = ok and acc == target
    return ok


# ---------------------------------------------------------------------------
# Whole pipeline
# ---------------------------------------------------------------------------


def _run_and_verify(script_id: str) -> tuple[ChainResult, ClaimVerdict, bool]:
    chain = run_sprem_chain(script_id)
    verdict = verify_membership_claim(chain, CLAIMS[chain.script_id])
    return chain, verdict, chain.check_cofactors() and chain.check_steps()


def chain_json(chain: ChainResult, verdict: ClaimVerdict, cof_ok: bool) -> dict:
    return {
        "script_id": chain.script_id,
        "variable": chain.var,
        "steps": [
            {
                "m": s.m.text(),
                "m_exponent": s.exponent,
                "q_degree": s.q.degree(chain.var),
                "r_degree": s.r.degree(chain.var),
            }
            for s in chain.steps
        ],
        "final_remainder": chain.final_remainder.text(),
        "final_degree": chain.final_remainder.total_degree(),
        "claim": verdict.to_json(),
        "cofactor_check": cof_ok,
        "seconds": round(chain.seconds, 3),
    }


def run_elimination(only: str | None = None, jobs: int = 1) -> dict:
    """Build both systems, verify the factorizations, run and check chains."""
    t0 = time.perf_counter()
    report: dict = {"systems": {}, "chains": []}
    for fam in ("A1", "B1"):
        sysm = build_monomial_system(fam, check=False)
        report["systems"][fam] = {
            "matches_reference": sysm.matches_reference,
            "mismatches": [list(m) for m in sysm.mismatches],
        }
    report["clearing_exponents"] = {fam: list(clearing_exponents(fam)) for fam in ("A1", "B1")}
    fact = verify_factorizations()
    report["factorizations"] = fact.to_json()
    ids = [resolve_script_id(only)] if only else SCRIPT_IDS
    results: dict[str, tuple] = {}
    if jobs > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for sid, res in zip(ids, ex.map(_run_and_verify, ids)):
                results[sid] = res
    else:
        for sid in ids:
            results[sid] = _run_and_verify(sid)
    ok = all(s["matches_reference"] for s in report["systems"].values()) and fact.ok
    for sid in ids:
        chain, verdict, cof_ok = results[sid]
        report["chains"].append(chain_json(chain, verdict, cof_ok))
        ok = ok and verdict.ok and cof_ok
    if all(s in results for s in GCD_PAIR):
        g = verify_gcd_root_set(results[GCD_PAIR[0]][0], results[GCD_PAIR[1]][0])
        report["gcd_cross_check"] = g.to_json()
        ok = ok and g.ok
    report["verdict"] = "all claims verified" if ok else "verification failed"
    report["ok"] = ok
    report["seconds"] = round(time.perf_counter() - t0, 3)
    return report
