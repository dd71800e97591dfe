"""Eigenvalue patterns, Γ arrangements and zero patterns for six-dimensional pairs.

When Λ and Γ are diagonal, the identities ΛXΛ = X, ΓXΓ = X and ΛYΓ = Y
force X[i,j] = 0 unless λᵢλⱼ = 1 and γᵢγⱼ = 1, and Y[i,j] = 0 unless
λᵢγⱼ = 1.  With generic eigenvalues these become boolean masks that depend
only on which eigenvalues coincide and which are mutually inverse.  This
module enumerates the Γ arrangements for each multiplicity pattern,
derives the masks, tests nonsingularity through bipartite matchings and
applies two uniform reducibility screens.  It also bounds the span of
words in A = XY, B = YX for the relation sets that arise when Λ² = I or
similar degeneracies occur, by Knuth-Bendix completion.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

# ---------------------------------------------------------------------------
# eigenvalue patterns
# ---------------------------------------------------------------------------


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class EigenPattern:
    """classes[i] is the equality class of λ at position i; inverse[c] is the class of 1/λ."""

    classes: tuple
    inverse: tuple  # inverse[c] = class index of the inverse of class c, or None

    def __post_init__(self):
        if not self.classes:
            raise PatternError("empty pattern")
        k = max(self.classes) + 1
        if sorted(set(self.classes)) != list(range(k)):
            raise PatternError("class labels must be 0..k-1 with every label used")
        if len(self.inverse) != k:
            raise PatternError("inverse table must have one entry per class")
        for c, d in enumerate(self.inverse):
            if d is not None and not (0 <= d < k):
                raise PatternError(f"inverse of class {c} is out of range")

    @property
    def n(self) -> int:
        return len(self.classes)

    @property
    def nclasses(self) -> int:
        return len(self.inverse)

    def sizes(self) -> list[int]:
        cnt = Counter(self.classes)
        return [cnt[c] for c in range(self.nclasses)]

    def shape(self) -> tuple:
        return tuple(sorted(self.sizes(), reverse=True))

    def self_inverse(self) -> list[int]:
        return [c for c, d in enumerate(self.inverse) if d == c]


# Lemma case number for each multiplicity shape of six eigenvalues.
SHAPE_CASE = {
    (6,): 1,
    (5, 1): 2,
    (4, 2): 3,
    (3, 3): 4,
    (4, 1, 1): 5,
    (3, 2, 1): 6,
    (2, 2, 2): 7,
    (3, 1, 1, 1): 8,
    (2, 2, 1, 1): 9,
    (2, 1, 1, 1, 1): 10,
    (1, 1, 1, 1, 1, 1): 11,
}

INFEASIBLE_SCALAR = "InfeasibleScalar"
INFEASIBLE_INVERSE = "InfeasibleInverse"
MONOMIAL = "Monomial"
NEEDS_CENSUS = "NeedsCensus"
NEEDS_MONOID_BOUND = "NeedsMonoidBound"


@dataclass(frozen=True)
class FeasibilityVerdict:
    verdict: str
    reason: str
    case: int | None


def eigenpattern_feasible(p: EigenPattern, characteristic: int = 0) -> FeasibilityVerdict:
    """Triage a pattern before any census work.

    The multiset of eigenvalues of Λ is closed under inversion with
    multiplicities (Λ⁻¹ = Y Γ Y⁻¹ and Γ is conjugate to Λ), so the inverse
    table must be a total involution pairing classes of equal size.
    x = 1/x has at most two solutions (one in characteristic 2).
    """
    case = SHAPE_CASE.get(p.shape()) if p.n == 6 else None
    if p.nclasses == 1:
        return FeasibilityVerdict(INFEASIBLE_SCALAR, "Lambda is scalar, so the pair is reducible", case)
    sizes = p.sizes()
    for c, d in enumerate(p.inverse):
        if d is None:
            return FeasibilityVerdict(INFEASIBLE_INVERSE, f"class {c} has no inverse class", case)
        if p.inverse[d] != c:
            return FeasibilityVerdict(INFEASIBLE_INVERSE, f"inverse table is not an involution at class {c}", case)
        if sizes[c] != sizes[d]:
            return FeasibilityVerdict(INFEASIBLE_INVERSE, f"classes {c} and {d} are inverse but differ in size", case)
    limit = 1 if characteristic == 2 else 2
    if len(p.self_inverse()) > limit:
        return FeasibilityVerdict(
            INFEASIBLE_INVERSE, f"{len(p.self_inverse())} self-inverse classes but x = 1/x has at most {limit} roots", case
        )
    if p.nclasses == p.n:
        return FeasibilityVerdict(MONOMIAL, "all eigenvalues distinct: X and Y are monomial", case)
    if case in (2, 3, 4):
        return FeasibilityVerdict(NEEDS_MONOID_BOUND, "two classes: bounded through relations on XY and YX", case)
    if case in (5, 7, 8, 9, 10):
        return FeasibilityVerdict(NEEDS_CENSUS, "enumerate Gamma arrangements", case)
    raise PatternError(f"pattern shape {p.shape()} is not covered by the case list")


# ---------------------------------------------------------------------------
# Γ arrangements and zero patterns
# ---------------------------------------------------------------------------


def enumerate_gamma_arrangements(p: EigenPattern) -> list[tuple]:
    """All distinct orderings of Λ's class multiset, in lexicographic order."""
    return sorted(set(itertools.permutations(p.classes)))


def multinomial(sizes) -> int:
    out = math.factorial(sum(sizes))
    for s in sizes:
        out //= math.factorial(s)
    return out


@dataclass(frozen=True)
class ZeroPattern:
    """mask[i][j] is True where the entry may be nonzero."""

    mask: tuple

    @classmethod
    def from_positions(cls, n: int, positions) -> "ZeroPattern":
        s = set(positions)
        return cls(tuple(tuple((i, j) in s for j in range(n)) for i in range(n)))

    @classmethod
    def identity(cls, n: int) -> "ZeroPattern":
        return cls.from_positions(n, [(i, i) for i in range(n)])

    @classmethod
    def full(cls, n: int) -> "ZeroPattern":
        return cls(tuple(tuple(True for _ in range(n)) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.mask)

    def positions(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.mask) for j, v in enumerate(row) if v]

    def count(self) -> int:
        return sum(sum(row) for row in self.mask)

    def rows(self) -> list[str]:
        return ["".join("1" if v else "0" for v in row) for row in self.mask]

    def __matmul__(self, other: "ZeroPattern") -> "ZeroPattern":
        n = self.n
        return ZeroPattern(
            tuple(
                tuple(any(self.mask[i][k] and other.mask[k][j] for k in range(n)) for j in range(n))
                for i in range(n)
            )
        )

    def __or__(self, other: "ZeroPattern") -> "ZeroPattern":
        return ZeroPattern(
            tuple(tuple(a or b for a, b in zip(r, s)) for r, s in zip(self.mask, other.mask))
        )


def derive_zero_patterns(p: EigenPattern, gamma: tuple) -> tuple[ZeroPattern, ZeroPattern]:
    """(Xmask, Ymask) under generic-eigenvalue semantics."""
    if sorted(gamma) != sorted(p.classes):
        raise PatternError("Gamma arrangement does not use Lambda's class multiset")
    inv = p.inverse
    lam = p.classes
    n = p.n
    xm = tuple(
        tuple(inv[lam[i]] == lam[j] and inv[gamma[i]] == gamma[j] for j in range(n)) for i in range(n)
    )
    ym = tuple(tuple(inv[lam[i]] == gamma[j] for j in range(n)) for i in range(n))
    return ZeroPattern(xm), ZeroPattern(ym)


def has_perfect_matching(z: ZeroPattern) -> bool:
    """Kuhn's augmenting path algorithm on rows x columns."""
    n = z.n
    match_col = [-1] * n

    def augment(i: int, seen: list) -> bool:
        for j in range(n):
            if z.mask[i][j] and not seen[j]:
                seen[j] = True
                if match_col[j] < 0 or augment(match_col[j], seen):
                    match_col[j] = i
                    return True
        return False

    return all(augment(i, [False] * n) for i in range(n))


def has_perfect_matching_bruteforce(z: ZeroPattern) -> bool:
    n = z.n
    return any(all(z.mask[i][s[i]] for i in range(n)) for s in itertools.permutations(range(n)))


def closure_span_bound(xmask: ZeroPattern, ymask: ZeroPattern) -> int:
    """Size of the union of supports of all words in X and Y.

    Boolean products distribute over unions, so iterating
    U ← U ∪ X·U ∪ Y·U from U = I ∪ X ∪ Y reaches the union of the
    supports of every word.  Any pair supported within the masks spans at
    most this many dimensions.
    """
    n = xmask.n
    u = ZeroPattern.identity(n) | xmask | ymask
    while True:
        nxt = u | (xmask @ u) | (ymask @ u)
        if nxt == u:
            return u.count()
        u = nxt


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseSpec:
    case_id: str
    classes: tuple
    inverse: tuple
    # reference data transcribed from the published lists: Γ as λ-index
    # strings, indices of arrangements that survive, and the X forms.
    reference_gamma: tuple
    reference_survivors: frozenset
    reference_x_forms: tuple  # (set of list indices, positions 1-based)
    golden: tuple  # (arrangements, nonsingular, survivors)

    def pattern(self) -> EigenPattern:
        return EigenPattern(self.classes, self.inverse)

    def gamma_classes(self, text: str) -> tuple:
        """Translate a λ-index string such as '115611' into a class tuple."""
        return tuple(self.classes[int(ch) - 1] for ch in text)


def _forms(*entries):
    return tuple((frozenset(idx), tuple(pos)) for idx, pos in entries)


_B2 = [(1, 1), (1, 2), (2, 1), (2, 2)]

CASES = {
    "5": CaseSpec(
        "5",
        (0, 0, 0, 0, 1, 2),
        (0, 2, 1),
        (
            "111156", "111165", "115611", "116511", "151611", "156111", "165111",
            "161511", "511611", "516111", "561111", "611511", "615111", "651111",
        ),
        frozenset(range(3, 15)),
        (),
        (30, 14, 12),
    ),
    "7": CaseSpec(
        "7",
        (0, 0, 1, 1, 2, 2),
        (0, 2, 1),
        (
            "113355", "113553", "113535", "115335", "115353", "115533",
            "353151", "353115", "355131", "355113", "351351", "351315",
            "351531", "351513", "531315", "531351", "531513", "531531",
            "533115", "533151", "535113", "535131",
        ),
        frozenset(range(7, 23)),
        _forms(
            ((1, 6), _B2 + [(3, 5), (3, 6), (4, 5), (4, 6), (5, 3), (5, 4), (6, 3), (6, 4)]),
            ((2, 4), _B2 + [(3, 5), (4, 6), (5, 3), (6, 4)]),
            ((3, 5), _B2 + [(3, 6), (4, 5), (5, 4), (6, 3)]),
            ((7, 9, 12, 14, 15, 17, 20, 22), [(1, 2), (2, 1), (3, 5), (4, 6), (5, 3), (6, 4)]),
            ((8, 10, 11, 13, 16, 18, 19, 21), [(1, 2), (2, 1), (3, 6), (4, 5), (5, 4), (6, 3)]),
        ),
        (90, 22, 16),
    ),
    "8": CaseSpec(
        "8",
        (0, 0, 0, 1, 2, 3),
        (0, 1, 3, 2),
        (
            "156411", "165411", "516411", "561411", "615411", "651411",
            "456111", "465111", "546111", "564111", "645111", "654111",
            "111456", "114156", "141156", "411156", "111465", "114165", "141165", "411165",
        ),
        frozenset(range(7, 13)),
        _forms(
            ((1, 2, 7, 8), [(1, 1), (2, 3), (3, 2), (4, 4), (5, 6), (6, 5)]),
            ((3, 5, 9, 11), [(1, 3), (2, 2), (3, 1), (4, 4), (5, 6), (6, 5)]),
            ((4, 6, 10, 12), [(1, 2), (2, 1), (3, 3), (4, 4), (5, 6), (6, 5)]),
            ((13, 17), [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)] + [(4, 4), (5, 6), (6, 5)]),
            ((14, 18), _B2 + [(3, 3), (4, 4), (5, 6), (6, 5)]),
            ((15, 19), [(1, 1), (1, 3), (2, 2), (3, 1), (3, 3), (4, 4), (5, 6), (6, 5)]),
            ((16, 20), [(1, 1), (2, 2), (2, 3), (3, 2), (3, 3), (4, 4), (5, 6), (6, 5)]),
        ),
        (120, 20, 6),
    ),
    "9a": CaseSpec(
        "9a",
        (0, 0, 1, 1, 2, 3),
        (0, 1, 3, 2),
        (
            "335611", "336511", "563311", "653311", "115633", "116533", "561133",
            "651133", "113356", "113365", "131356", "131365", "133156", "133165",
            "311356", "311365", "313156", "313165", "331156", "331165",
        ),
        frozenset({1, 2, 7, 8}),
        _forms(
            ((3, 4, 7, 8), [(1, 2), (2, 1), (3, 3), (3, 4), (4, 3), (4, 4), (5, 6), (6, 5)]),
            ((1, 2, 5, 6), _B2 + [(3, 4), (4, 3), (5, 6), (6, 5)]),
            ((9, 10, 19, 20), _B2 + [(3, 3), (3, 4), (4, 3), (4, 4), (5, 6), (6, 5)]),
            (range(11, 19), [(1, 1), (2, 2), (3, 3), (4, 4), (5, 6), (6, 5)]),
        ),
        (180, 20, 4),
    ),
    "9b": CaseSpec(
        "9b",
        (0, 0, 1, 1, 2, 3),
        (1, 0, 3, 2),
        (
            "153613", "156313", "163513", "165313", "351613", "356113", "361513", "365113",
            "513613", "516313", "531613", "536113", "613513", "615313", "631513", "635113",
            "153631", "156331", "163531", "165331", "351631", "356131", "361531", "365131",
            "513631", "516331", "531631", "536131", "613531", "615331", "631531", "635131",
            "113356", "131356", "133156", "311356", "313156", "331156",
            "113365", "131365", "133165", "311365", "313165", "331165",
        ),
        frozenset(range(1, 33)),
        _forms(
            (
                (1, 3, 5, 7, 10, 12, 14, 16, 17, 19, 21, 23, 26, 28, 30, 32, 35, 36, 41, 42),
                [(1, 3), (2, 4), (3, 1), (4, 2), (5, 6), (6, 5)],
            ),
            (
                (2, 4, 6, 8, 9, 11, 13, 15, 18, 20, 22, 24, 25, 27, 29, 31, 34, 37, 40, 43),
                [(1, 4), (2, 3), (3, 2), (4, 1), (5, 6), (6, 5)],
            ),
            ((33, 38, 39, 44), [(i, j) for i in (1, 2) for j in (3, 4)] + [(i, j) for i in (3, 4) for j in (1, 2)] + [(5, 6), (6, 5)]),
        ),
        (180, 44, 32),
    ),
    "10": CaseSpec(
        "10",
        (0, 0, 1, 2, 3, 4),
        (0, 2, 1, 4, 3),
        (
            "115634", "116534", "561134", "651134", "115643", "116543", "561143", "651143",
            "113456", "114356", "341156", "431156", "113465", "114365", "341165", "431165",
            "345611", "346511", "435611", "436511", "563411", "564311", "653411", "654311",
        ),
        frozenset({3, 4, 7, 8, 17, 18, 19, 20}),
        _forms(
            (
                (3, 4, 7, 8, 11, 12, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24),
                [(1, 2), (2, 1), (3, 4), (4, 3), (5, 6), (6, 5)],
            ),
            ((1, 2, 5, 6, 9, 10, 13, 14), _B2 + [(3, 4), (4, 3), (5, 6), (6, 5)]),
        ),
        (360, 24, 8),
    ),
}

CASE_IDS = tuple(CASES)

# Case 5 normalising permutations: list index -> image tuple (a_1..a_6), e_i -> e_{a_i}.
CASE5_PERMUTATIONS = {
    3: (1, 2, 3, 4, 5, 6), 4: (1, 2, 4, 3, 5, 6), 5: (1, 3, 2, 4, 5, 6), 6: (1, 4, 2, 3, 5, 6),
    7: (1, 4, 3, 2, 5, 6), 8: (1, 3, 4, 2, 5, 6), 9: (2, 3, 1, 4, 5, 6), 10: (2, 4, 1, 3, 5, 6),
    11: (3, 4, 1, 2, 5, 6), 12: (2, 3, 4, 1, 5, 6), 13: (2, 4, 3, 1, 5, 6), 14: (3, 4, 2, 1, 5, 6),
}
CASE5_CANONICAL = "115611"


@dataclass
class ArrangementDetail:
    index: int  # position in the lexicographic enumeration (0-based)
    gamma: tuple
    xmask: ZeroPattern
    ymask: ZeroPattern
    x_nonsingular: bool
    y_nonsingular: bool
    verdict: str  # "singular" | "reducible" | "survivor"
    reason: str
    closure: int | None = None
    reference_index: int | None = None  # 1-based index in the published list

    @property
    def nonsingular(self) -> bool:
        return self.x_nonsingular and self.y_nonsingular

    def gamma_text(self, spec: CaseSpec) -> str:
        names = {}
        for pos, c in enumerate(spec.classes):
            names.setdefault(c, pos + 1)
        return "".join(str(names[c]) for c in self.gamma)

    def to_json(self, spec: CaseSpec) -> dict:
        return {
            "index": self.index,
            "gamma": self.gamma_text(spec),
            "X": self.xmask.rows(),
            "Y": self.ymask.rows(),
            "verdict": self.verdict,
            "reason": self.reason,
            "closure_bound": self.closure,
            "reference_index": self.reference_index,
        }


@dataclass
class CaseReport:
    case_id: str
    characteristic: int
    pattern_verdict: str
    arrangement_count: int
    nonsingular_count: int
    survivor_count: int
    details: list[ArrangementDetail]
    golden: tuple
    diffs: dict = field(default_factory=dict)

    @property
    def golden_ok(self) -> bool:
        """Arrangement and nonsingular counts match the published values."""
        return (self.arrangement_count, self.nonsingular_count) == self.golden[:2]

    @property
    def survivors_match(self) -> bool:
        return self.survivor_count == self.golden[2] and not self.diffs.get("survivors")

    def to_json(self, detail: bool = True) -> dict:
        spec = CASES[self.case_id]
        out = {
            "case": self.case_id,
            "characteristic": self.characteristic,
            "pattern_verdict": self.pattern_verdict,
            "arrangements": self.arrangement_count,
            "nonsingular": self.nonsingular_count,
            "survivors": self.survivor_count,
            "expected": {"arrangements": self.golden[0], "nonsingular": self.golden[1], "survivors": self.golden[2]},
            "golden_ok": self.golden_ok,
            "survivors_match": self.survivors_match,
            "diffs": self.diffs,
        }
        if detail:
            out["arrangement_detail"] = [d.to_json(spec) for d in self.details]
        return out


def _screen(spec: CaseSpec, gamma: tuple, xm: ZeroPattern, ym: ZeroPattern) -> tuple[str, str, int]:
    inv = spec.inverse
    lam = spec.classes
    closure = closure_span_bound(xm, ym)
    if gamma == lam:
        return "reducible", "Lambda = Gamma forces XY = YX", closure
    if gamma == tuple(inv[c] for c in lam):
        return "reducible", "Lambda Gamma = I forces (XY)^2 = (YX)^2", closure
    if closure < 36:
        return "reducible", f"closure span bound {closure} < 36", closure
    return "survivor", "no uniform screen applies", closure


def run_case_census(case_id: str, characteristic: int = 0) -> CaseReport:
    if case_id not in CASES:
        raise KeyError(f"unknown census case {case_id!r}; choose from {', '.join(CASE_IDS)}")
    spec = CASES[case_id]
    pat = spec.pattern()
    fv = eigenpattern_feasible(pat, characteristic)
    if fv.verdict != NEEDS_CENSUS:
        return CaseReport(case_id, characteristic, fv.verdict, 0, 0, 0, [], spec.golden, {"pattern": fv.reason})
    ref_index = {spec.gamma_classes(t): k + 1 for k, t in enumerate(spec.reference_gamma)}
    details = []
    for idx, g in enumerate(enumerate_gamma_arrangements(pat)):
        xm, ym = derive_zero_patterns(pat, g)
        xok, yok = has_perfect_matching(xm), has_perfect_matching(ym)
        if not (xok and yok):
            which = "X" if not xok else "Y"
            d = ArrangementDetail(idx, g, xm, ym, xok, yok, "singular", f"{which} mask has no perfect matching")
        else:
            verdict, reason, closure = _screen(spec, g, xm, ym)
            d = ArrangementDetail(idx, g, xm, ym, xok, yok, verdict, reason, closure)
        d.reference_index = ref_index.get(g)
        details.append(d)
    nonsingular = [d for d in details if d.nonsingular]
    survivors = [d for d in details if d.verdict == "survivor"]
    report = CaseReport(
        case_id, characteristic, fv.verdict, len(details), len(nonsingular), len(survivors), details, spec.golden
    )
    report.diffs = _reference_diffs(spec, details)
    return report


def _reference_diffs(spec: CaseSpec, details: list[ArrangementDetail]) -> dict:
    """Compare computed sets and masks with the published lists."""
    diffs: dict = {}
    ref_set = {spec.gamma_classes(t) for t in spec.reference_gamma}
    got_nonsingular = {d.gamma for d in details if d.nonsingular}
    extra = sorted(got_nonsingular - ref_set)
    missing = sorted(ref_set - got_nonsingular)
    if extra or missing:
        diffs["nonsingular"] = {"computed_only": [list(g) for g in extra], "published_only": [list(g) for g in missing]}
    got_surv = {d.reference_index for d in details if d.verdict == "survivor"}
    if got_surv != set(spec.reference_survivors):
        diffs["survivors"] = {
            "computed_only": sorted(i for i in got_surv - set(spec.reference_survivors) if i is not None),
            "published_only": sorted(spec.reference_survivors - got_surv),
            "unlisted_survivors": sum(1 for i in got_surv if i is None),
        }
    by_ref = {d.reference_index: d for d in details if d.reference_index is not None}
    bad_forms = []
    for indices, positions in spec.reference_x_forms:
        want = ZeroPattern.from_positions(6, [(i - 1, j - 1) for i, j in positions])
        for k in indices:
            d = by_ref.get(k)
            if d is None or d.xmask != want:
                bad_forms.append(k)
    if bad_forms:
        diffs["x_forms"] = sorted(bad_forms)
    if spec.case_id == "5":
        bad = [k for k, perm in CASE5_PERMUTATIONS.items() if not _case5_normalises(spec, k, perm)]
        if bad:
            diffs["normalising_permutations"] = bad
    return diffs


def _case5_normalises(spec: CaseSpec, k: int, perm: tuple) -> bool:
    """The listed permutation sends Γ to the canonical arrangement and fixes Λ.

    The lists only work when read as new position i taking the old
    diagonal entry at a_i (that is, conjugation by P⁻¹ for P: e_i -> e_{a_i}).
    """
    g = spec.gamma_classes(spec.reference_gamma[k - 1])
    lam = spec.classes
    moved_g = tuple(g[a - 1] for a in perm)
    moved_l = tuple(lam[a - 1] for a in perm)
    return moved_l == lam and moved_g == spec.gamma_classes(CASE5_CANONICAL)


def run_census(characteristic: int = 0, cases=None) -> list[CaseReport]:
    return [run_case_census(c, characteristic) for c in (cases or CASE_IDS)]


# ---------------------------------------------------------------------------
# monoid span bounds by Knuth-Bendix completion
# ---------------------------------------------------------------------------

# Words use 'a' for A = XY and 'b' for B = YX.
MONOID_PRESETS = {
    "case234_cube": (("aaa", "bbb"), ("aba", "bab"), ("aaaaaa", ""), ("bbbbbb", "")),
    "case4_square": (("aa", "bb"), ("aba", "bab"), ("aaaaaa", ""), ("bbbbbb", "")),
    "trivial": (("a", ""), ("b", "")),
}


def _shortlex(w: str) -> tuple:
    return (len(w), w)


def _reduce(w: str, rules: list) -> str:
    while True:
        for lhs, rhs in rules:
            i = w.find(lhs)
            if i >= 0:
                w = w[:i] + rhs + w[i + len(lhs):]
                break
        else:
            return w


def knuth_bendix(equations, rule_cap: int = 300, max_rounds: int = 100) -> tuple[list, bool]:
    """Shortlex completion; returns (rules, confluent)."""
    pending = list(equations)
    rules: list = []
    for _ in range(max_rounds):
        while pending:
            u, v = pending.pop()
            u, v = _reduce(u, rules), _reduce(v, rules)
            if u == v:
                continue
            if _shortlex(u) < _shortlex(v):
                u, v = v, u
            keep = []
            for lhs, rhs in rules:
                if u in lhs:
                    pending.append((lhs, rhs))
                else:
                    keep.append((lhs, rhs))
            rules = keep + [(u, v)]
            rules = [(lhs, _reduce(rhs, rules)) for lhs, rhs in rules]
            if len(rules) > rule_cap:
                return rules, False
        for l1, r1 in rules:
            for l2, r2 in rules:
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        a = _reduce(r1 + l2[k:], rules)
                        b = _reduce(l1[:-k] + r2, rules)
                        if a != b:
                            pending.append((a, b))
        if not pending:
            return sorted(rules, key=lambda r: _shortlex(r[0])), True
    return rules, False


def normal_forms(rules: list, max_len: int) -> tuple[list[str], bool]:
    """Irreducible words up to max_len, and whether words of length max_len still exist."""
    layer = [""]
    words = [""]
    for _ in range(max_len):
        layer = [w + c for w in layer for c in "ab" if _reduce(w + c, rules) == w + c]
        if not layer:
            return words, False
        words += layer
    return words, True


@dataclass
class MonoidBound:
    preset: str
    confluent: bool
    saturated: bool
    raw_count: int
    center_size: int
    bound: int
    rules: list

    def to_json(self) -> dict:
        return {
            "preset": self.preset,
            "confluent": self.confluent,
            "saturated": self.saturated,
            "normal_forms": self.raw_count,
            "central_elements": self.center_size,
            "bound": self.bound,
        }


def monoid_span_analysis(preset: str, max_len: int = 24) -> MonoidBound:
    """Upper bound on the span of words in A, B for an irreducible pair obeying the preset.

    With a confluent system the normal forms list the monoid elements.
    Since A⁶ = B⁶ = 1 the monoid is a group, and its central elements act
    as scalars on an irreducible module, so words differing by a central
    factor are proportional.  The bound is then the number of cosets of the
    centre.  Without confluence the bound falls back to the raw count of
    irreducible words up to max_len (flagged as saturated when longer
    irreducible words remain).
    """
    if preset not in MONOID_PRESETS:
        raise KeyError(f"unknown preset {preset!r}; choose from {', '.join(MONOID_PRESETS)}")
    if max_len < 12:
        raise ValueError("max_len must be at least 12")
    rules, confluent = knuth_bendix(MONOID_PRESETS[preset])
    words, saturated = normal_forms(rules, max_len)
    raw = len(words)
    if not confluent or saturated:
        return MonoidBound(preset, confluent, saturated, raw, 1, raw, rules)
    centre = [
        z for z in words if all(_reduce(z + g, rules) == _reduce(g + z, rules) for g in "ab")
    ]
    if raw % len(centre):
        raise AssertionError("centre order does not divide the group order")
    return MonoidBound(preset, confluent, saturated, raw, len(centre), raw // len(centre), rules)


def monoid_span_bound(preset: str, max_len: int = 24) -> int:
    return monoid_span_analysis(preset, max_len).bound
