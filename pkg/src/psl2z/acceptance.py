"""Acceptance suites shared by ``psl2z verify-all`` and the test-suite.

Every criterion is a function ``criterion_N(ctx)`` returning a
:class:`CriterionResult`.  All randomness flows from ``ctx.seed`` through one
``random.Random`` per criterion, so a run is reproducible from its seed.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import (
    CatalogLabel,
    ParamPair,
    canonical_param,
    classify,
    excluded_pairs,
    finite_labels,
    intertwiner_Qi,
    make_catalog_rep,
    orbit,
    sigma,
    six_dim_rep,
    x_prime,
    y_prime,
)
from .exactalg import (
    GF,
    QQ,
    QQ_ZETA,
    Field,
    FieldSpec,
    Mat,
    Scalar,
    field_make,
    mat_det,
    mat_det_cofactor,
    mat_inverse,
)
from .patterns import (
    CASES,
    CASE_IDS,
    NEEDS_CENSUS,
    EigenPattern,
    ZeroPattern,
    closure_span_bound,
    derive_zero_patterns,
    enumerate_gamma_arrangements,
    has_perfect_matching,
    has_perfect_matching_bruteforce,
    monoid_span_analysis,
    multinomial,
    run_census,
)
from .rep import (
    Rep,
    burnside_span_dim,
    intertwiner_space,
    rep_commutators,
    rep_validate,
)
from .symbolic import (
    LAURENT,
    LaurentPoly,
    lp_arith,
    lp_eval,
    lp_exact_div,
    lp_gcd_univariate,
)

# ---------------------------------------------------------------------------
# configuration and results
# ---------------------------------------------------------------------------

# The fields named by the catalog criteria.  GF(3) carries no valid
# 6-dimensional parameter, so its sweep runs over GF(9) instead.
CRITERION_FIELDS = (
    ("Q", QQ),
    ("Q(zeta)", QQ_ZETA),
    ("GF(7)", GF(7)),
    ("GF(2)(zeta)", GF(2, (1, 1, 1), "GF(4)")),
    ("GF(3)", GF(3)),
    ("GF(10007)", GF(10007)),
)
GF9 = GF(3, (1, 0, 1), "GF(9)")
GF16 = GF(2, (1, 1, 0, 0, 1), "GF(16)")
GF81 = GF(3, (2, 1, 0, 0, 1), "GF(81)")
SWEEP_FIELD = GF(10007)

BUDGETS = {1: 10.0, 2: 60.0, 3: 120.0, 4: 30.0, 5: 30.0, 6: None, 7: 60.0, 8: 600.0, 9: None, 10: None, 11: 120.0}
NAMES = {
    1: "catalog validity",
    2: "irreducibility",
    3: "equivalence orbits",
    4: "census golden counts",
    5: "monoid span bounds",
    6: "monomial systems",
    7: "factorization identities",
    8: "elimination certificates",
    9: "exception-set assembly",
    10: "classification round-trip",
    11: "property suites",
}
MAX_MESSAGES = 20


@dataclass
class AcceptanceContext:
    """Run configuration plus results shared between criteria."""

    seed: int = 0
    sweep: int = 100
    orbit_sweep: int = 50
    characteristic: int | None = None
    jobs: int = 1
    cache: dict = field(default_factory=dict)

    def rng(self, number: int) -> random.Random:
        return random.Random(f"{self.seed}:{number}")

    def wants(self, char: int) -> bool:
        return self.characteristic is None or self.characteristic == char


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    budget: float | None
    detail: dict
    failures: list[str]
    findings: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:g} s)" if self.budget else ""
        return f"{status} criterion {self.number}: {self.name} [{self.seconds:.2f} s{budget}]"

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "criterion": self.number,
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "detail": self.detail,
            "failures": self.failures,
            "findings": self.findings,
        }
        if timings:
            out["seconds"] = round(self.seconds, 3)
            out["budget_seconds"] = self.budget
        return out


class _Log:
    """Counts checks and keeps the first few failure messages."""

    def __init__(self):
        self.checks = 0
        self.failed = 0
        self.messages: list[str] = []

    def check(self, ok: bool, message: str) -> bool:
        self.checks += 1
        if not ok:
            self.failed += 1
            if len(self.messages) < MAX_MESSAGES:
                self.messages.append(message)
        return ok


def _finish(number: int, t0: float, log: _Log, detail: dict, findings=None) -> CriterionResult:
    secs = time.perf_counter() - t0
    budget = BUDGETS[number]
    failures = list(log.messages)
    if log.failed > len(failures):
        failures.append(f"... {log.failed - len(failures)} more failures")
    if budget is not None and secs > budget:
        failures.append(f"runtime {secs:.1f} s exceeds the {budget:g} s budget")
    detail = dict(detail)
    detail["checks"] = log.checks
    detail["failed_checks"] = log.failed
    return CriterionResult(number, NAMES[number], not failures, secs, budget, detail, failures, findings or [])


# ---------------------------------------------------------------------------
# field and sampling helpers
# ---------------------------------------------------------------------------


def zeta_extension(spec: FieldSpec) -> FieldSpec:
    """A field of the same characteristic containing a primitive cube root of unity."""
    F = field_make(spec)
    if F.zeta() is not None or spec.characteristic == 3:
        return spec  # in characteristic 3 the cube roots of unity collapse to 1
    if spec.characteristic == 0:
        return QQ_ZETA
    if spec.degree == 1:
        return GF(spec.characteristic, (1, 1, 1))
    raise ValueError(f"no standard zeta extension for {spec.label}")


def label_field(label: CatalogLabel, spec: FieldSpec) -> Field:
    if label.needs_zeta():
        return field_make(zeta_extension(spec))
    return field_make(spec)


def param_field(spec: FieldSpec) -> FieldSpec:
    """The field used for the 6-dimensional sweep standing in for spec."""
    if spec == GF(3):
        return GF9
    return spec


def sweep_field(characteristic: int | None) -> FieldSpec:
    """A field with plenty of valid parameters in the requested characteristic."""
    if characteristic is None:
        return SWEEP_FIELD
    if characteristic == 0:
        return QQ
    if characteristic == 2:
        return GF16
    if characteristic == 3:
        return GF81
    return GF(characteristic)


def random_valid_params(F: Field, rng: random.Random, count: int) -> list[ParamPair]:
    """count pairs of nonzero, non-excluded parameters (with replacement on small fields)."""
    excluded = set(excluded_pairs(F))
    if F.p and F.order <= 400:
        units = [Scalar(F, x) for x in F.elements() if not F.is_zero(x)]
        valid = [p for p in (ParamPair(a, b) for a in units for b in units) if p not in excluded]
        if not valid:
            return []
        return [rng.choice(valid) for _ in range(count)]
    out = []
    while len(out) < count:
        p = ParamPair(F.random_nonzero(rng, 9), F.random_nonzero(rng, 9))
        if p not in excluded:
            out.append(p)
    return out


def random_matrix(F: Field, n: int, rng: random.Random, height: int = 9) -> Mat:
    return Mat(F, n, n, [F.random_raw(rng, height) for _ in range(n * n)])


def random_invertible(F: Field, n: int, rng: random.Random) -> Mat:
    while True:
        Q = random_matrix(F, n, rng, 5)
        if not mat_det(Q).is_zero():
            return Q


def _fields_for(ctx: AcceptanceContext) -> list[tuple[str, FieldSpec]]:
    chosen = [(name, s) for name, s in CRITERION_FIELDS if ctx.wants(s.characteristic)]
    if not chosen and ctx.characteristic is not None:
        p = ctx.characteristic
        chosen = [(f"GF({p})", GF(p))]
    return chosen


def _label_reps(ctx: AcceptanceContext) -> list[tuple[str, str, Rep]]:
    """(field name, label text, rep) for every finite label of every field."""
    key = "label_reps"
    if key not in ctx.cache:
        out = []
        for name, spec in _fields_for(ctx):
            for lab in finite_labels(spec.characteristic):
                F = label_field(lab, spec)
                out.append((name, lab.text(), make_catalog_rep(lab, F)))
        ctx.cache[key] = out
    return ctx.cache[key]


def _six_params(ctx: AcceptanceContext) -> list[tuple[str, list[ParamPair]]]:
    key = "six_params"
    if key not in ctx.cache:
        rng = ctx.rng(1)
        out = []
        for name, spec in _fields_for(ctx):
            F = field_make(param_field(spec))
            out.append((name, random_valid_params(F, rng, ctx.sweep)))
        ctx.cache[key] = out
    return ctx.cache[key]


# ---------------------------------------------------------------------------
# criterion 1: catalog validity
# ---------------------------------------------------------------------------


def criterion_1(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.perf_counter()
    log = _Log()
    per_field: dict = {}
    for name, rep_label, r in _label_reps(ctx):
        v = rep_validate(r)
        log.check(v.hypothesis_holds, f"{name} {rep_label}: {v.to_json()}")
        per_field.setdefault(name, {"finite_labels": 0, "dim6_params": 0})["finite_labels"] += 1
    for name, params in _six_params(ctx):
        entry = per_field.setdefault(name, {"finite_labels": 0, "dim6_params": 0})
        entry["dim6_params"] = len(params)
        if params:
            entry["dim6_field"] = params[0].field.spec.label
        log.check(len(params) == ctx.sweep, f"{name}: no valid 6-dimensional parameters")
        for p in params:
            v = rep_validate(six_dim_rep(p))
            log.check(v.hypothesis_holds, f"{name} dim6{p.text()}: {v.to_json()}")
    return _finish(1, t0, log, {"fields": per_field})


# ---------------------------------------------------------------------------
# criterion 2: irreducibility
# ---------------------------------------------------------------------------


def criterion_2(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.perf_counter()
    log = _Log()
    excluded_spans: dict = {}
    for name, rep_label, r in _label_reps(ctx):
        d = burnside_span_dim(r)
        log.check(d == r.n * r.n, f"{name} {rep_label}: span {d} != {r.n * r.n}")
    for name, params in _six_params(ctx):
        for p in params:
            d = burnside_span_dim(six_dim_rep(p))
            log.check(d == 36, f"{name} dim6{p.text()}: span {d} != 36")
    spans = {}
    for name, spec in _fields_for(ctx):
        for s in {spec, param_field(spec), zeta_extension(param_field(spec))}:
            F = field_make(s)
            for p in excluded_pairs(F):
                d = burnside_span_dim(six_dim_rep(p))
                spans[(s.label, p.text())] = d
                log.check(d < 36, f"{s.label} excluded {p.text()}: span {d} is not < 36")
    for (flabel, ptext), d in sorted(spans.items()):
        excluded_spans.setdefault(flabel, {})[ptext] = d
    ctx.cache["excluded_spans"] = spans
    return _finish(2, t0, log, {"excluded_pair_spans": excluded_spans})


# ---------------------------------------------------------------------------
# criterion 3: equivalence orbits
# ---------------------------------------------------------------------------


def _check_Qi(log: _Log, p: ParamPair) -> None:
    F = p.field
    X = x_prime(F)
    for i in range(1, 7):
        Q = intertwiner_Qi(i, p)
        q = sigma(i, p)
        ok = (
            not mat_det(Q).is_zero()
            and Q @ X == X @ Q
            and Q @ y_prime(p) == y_prime(q) @ Q
        )
        log.check(ok, f"Q{i} is not a witness from {p.text()} to {q.text()}")


def criterion_3(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.perf_counter()
    log = _Log()
    rng = ctx.rng(3)
    F = field_make(sweep_field(ctx.characteristic))
    params = random_valid_params(F, rng, ctx.orbit_sweep)
    orbit_sizes = []
    for p in params:
        _check_Qi(log, p)
        images = orbit(p)
        orbit_sizes.append(len(images))
        reps = [six_dim_rep(q) for q in images]
        for a, b in itertools.combinations(range(len(reps)), 2):
            basis = intertwiner_space(reps[a], reps[b])
            ok = len(basis) == 1 and not mat_det(basis[0]).is_zero()
            log.check(ok, f"{images[a].text()} ~ {images[b].text()}: intertwiner dim {len(basis)}")
    # pairs with disjoint orbits
    disjoint = 0
    attempts = 0
    excluded = set(excluded_pairs(F))
    while disjoint < ctx.orbit_sweep and attempts < 100 * ctx.orbit_sweep:
        attempts += 1
        p, q = random_valid_params(F, rng, 2)
        if q in set(orbit(p)) or p in excluded or q in excluded:
            continue
        disjoint += 1
        d = len(intertwiner_space(six_dim_rep(p), six_dim_rep(q)))
        log.check(d == 0, f"{p.text()} vs {q.text()}: intertwiner dim {d} for disjoint orbits")
    log.check(disjoint == ctx.orbit_sweep, f"only {disjoint} disjoint-orbit pairs found")
    # dimension 1-3 classes are separated by traces
    separated = 0
    for name, spec in _fields_for(ctx):
        labs = finite_labels(spec.characteristic)
        Fz = field_make(zeta_extension(spec))
        reps = {lab.text(): make_catalog_rep(lab, Fz) for lab in labs}
        for la, lb in itertools.combinations(labs, 2):
            if la.dim != lb.dim:
                continue
            ra, rb = reps[la.text()], reps[lb.text()]
            traces_a = (ra.X.trace(), ra.Y.trace())
            traces_b = (rb.X.trace(), rb.Y.trace())
            log.check(traces_a != traces_b, f"{name}: {la.text()} and {lb.text()} share traces")
            d = len(intertwiner_space(ra, rb))
            log.check(d == 0, f"{name}: {la.text()} and {lb.text()} have intertwiner dim {d}")
            separated += 1
    detail = {
        "field": F.spec.label,
        "orbit_params": len(params),
        "orbit_sizes": sorted(set(orbit_sizes)),
        "disjoint_pairs": disjoint,
        "label_pairs_separated": separated,
    }
    return _finish(3, t0, log, detail)


# ---------------------------------------------------------------------------
# criterion 4: census
# ---------------------------------------------------------------------------


def _census(ctx: AcceptanceContext):
    if "census" not in ctx.cache:
        char = ctx.characteristic or 0
        ctx.cache["census"] = run_census(char)
    return ctx.cache["census"]


def criterion_4(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.perf_counter()
    log = _Log()
    findings = []
    cases = {}
    for rep in _census(ctx):
        entry = {
            "pattern_verdict": rep.pattern_verdict,
            "arrangements": rep.arrangement_count,
            "nonsingular": rep.nonsingular_count,
            "survivors": rep.survivor_count,
            "expected": list(rep.golden),
            "survivors_match": rep.survivors_match,
        }
        if rep.diffs:
            entry["diffs"] = rep.diffs
        cases[rep.case_id] = entry
        if rep.pattern_verdict != NEEDS_CENSUS:
            findings.append(f"case {rep.case_id}: {rep.pattern_verdict} in characteristic {rep.characteristic}")
            continue
        log.check(
            rep.golden_ok,
            f"case {rep.case_id}: ({rep.arrangement_count}, {rep.nonsingular_count}) != {rep.golden[:2]}",
        )
        log.check(
            rep.survivor_count <= rep.nonsingular_count <= rep.arrangement_count,
            f"case {rep.case_id}: counts are not monotone",
        )
        if not rep.survivors_match:
            findings.append(
                f"case {rep.case_id}: {rep.survivor_count} survivors against the published {rep.golden[2]}"
            )
    log.check(sorted(cases) == sorted(CASE_IDS), "census is missing cases")
    return _finish(4, t0, log, {"cases": cases}, findings)


# ---------------------------------------------------------------------------
# criterion 5: monoid bounds
# ---------------------------------------------------------------------------

MONOID_LIMITS = {"case234_cube": 24, "case4_square": 18}


def criterion_5(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.perf_counter()
    log = _Log()
    out = {}
    for preset, limit in MONOID_LIMITS.items():
        mb = monoid_span_analysis(preset)
        out[preset] = dict(mb.to_json(), limit=limit)
        log.check(mb.confluent and not mb.saturated, f"{preset}: completion did not finish")
        log.check(mb.bound <= limit, f"{preset}: bound {mb.bound} > {limit}")
    return _finish(5, t0, log, {"presets": out})


# ---------------------------------------------------------------------------
# criteria 6-8: elimination
# ---------------------------------------------------------------------------


def _elimination(ctx: AcceptanceContext) -> dict:
    if "elimination" not in ctx.cache:
        from .elimination import run_elimination

        ctx.cache["elimination"] = run_elimination(jobs=ctx.jobs)
    return ctx.cache["elimination"]


def criterion_6(ctx: AcceptanceContext) -> CriterionResult:
    from .elimination import CLEARING, build_monomial_system, compute_R

    t0 = time.perf_counter()
    log = _Log()
    detail = {}
    for fam in ("A1", "B1"):
        system = build_monomial_system(fam, check=False)
        matched = 36 - len(system.mismatches)
        log.check(not system.mismatches, f"{fam}: mismatched entries {system.mismatches[:3]}")
        try:
            R = compute_R(fam)
            poly = R.is_polynomial()
        except ArithmeticError as exc:
            log.check(False, f"{fam}: {exc}")
            poly = False
        log.check(poly, f"{fam}: R is not a polynomial after clearing")
        detail[fam] = {"entries_matched": matched, "clearing": list(CLEARING[fam]), "polynomial": poly}
    detail["entries_matched_total"] = sum(detail[f]["entries_matched"] for f in ("A1", "B1"))
    return _finish(6, t0, log, detail)


def criterion_7(ctx: AcceptanceContext) -> CriterionResult:
    from .elimination import verify_factorizations

    t0 = time.perf_counter()
    log = _Log()
    rep = verify_factorizations()
    log.check(rep.r2_ok and rep.r2_constant not in (None, 0), "R2 factorization failed")
    log.check(rep.r1_ok, "R1 factorization failed")
    log.check(rep.r3_total_degree == 14, f"R3 has total degree {rep.r3_total_degree}")
    for k, v in {**rep.special_pairs_vanish, **rep.boundary_specializations}.items():
        log.check(v, f"check {k} failed")
    detail = {
        "r2_constant": str(rep.r2_constant),
        "r3_total_degree": rep.r3_total_degree,
        "printed_f3_divides_r2": rep.printed_f3_divides_r2,
    }
    findings = []
    if not rep.printed_f3_divides_r2:
        findings.append("F3 as printed does not divide R2; the corrected F3 does")
    return _finish(7, t0, log, detail, findings)


LARGE_F3_DEGREES = {"R1F3_direct": 192, "R1F3_factored(R3)": 116}


def criterion_8(ctx: AcceptanceContext) -> CriterionResult:
    from .elimination import SCRIPT_IDS

    t0 = time.perf_counter()
    log = _Log()
    rep = _elimination(ctx)
    chains = {c["script_id"]: c for c in rep["chains"]}
    log.check(sorted(chains) == sorted(SCRIPT_IDS), f"ran {len(chains)} of {len(SCRIPT_IDS)} chains")
    summary = {}
    for sid in SCRIPT_IDS:
        c = chains.get(sid)
        if c is None:
            continue
        claim = c["claim"]
        log.check(c["cofactor_check"], f"{sid}: cofactor identity fails")
        log.check(claim["ok"], f"{sid}: {claim['mode']} claim fails")
        if sid in LARGE_F3_DEGREES:
            log.check(claim["mode"] == "divisibility-plus-degree", f"{sid}: wrong claim mode")
            log.check(
                claim.get("cofactor_degree") == LARGE_F3_DEGREES[sid],
                f"{sid}: cofactor degree {claim.get('cofactor_degree')} != {LARGE_F3_DEGREES[sid]}",
            )
        else:
            log.check(claim["mode"] == "exact-constant-multiple", f"{sid}: wrong claim mode")
        summary[sid] = {"mode": claim["mode"], "ok": claim["ok"], "cofactor_check": c["cofactor_check"]}
    g = rep.get("gcd_cross_check")
    log.check(bool(g and g["ok"]), "gcd cross-check failed or missing")
    return _finish(8, t0, log, {"chains": summary, "gcd_cross_check": g})


# ---------------------------------------------------------------------------
# criterion 9: exception sets
# ---------------------------------------------------------------------------

EXHAUSTIVE_FIELDS = (GF(3), GF(2, (1, 1, 1), "GF(4)"), GF(7), GF(13))


def criterion_9(ctx: AcceptanceContext) -> CriterionResult:
    from .elimination import compute_R, exception_field_spec, run_sprem_chain, solve_exception_set

    t0 = time.perf_counter()
    log = _Log()
    rng = ctx.rng(9)
    chains = ctx.cache.setdefault("chains", {})
    chars = [c for c in (0, 2, 3) if ctx.wants(c)] or [ctx.characteristic]
    R1, R2 = compute_R("A1"), compute_R("B1")
    sets = {}
    for char in chars:
        es = solve_exception_set(char, chains)
        F = field_make(es.field)
        got = {ParamPair(a, b) for a, b in es.pairs}
        want = set(excluded_pairs(F))
        sets[str(char)] = sorted(p.text() for p in got)
        log.check(got == want, f"char {char}: solved {sorted(p.text() for p in got)}")
        for p in got:
            ok = lp_eval(R1, p.c1, p.c2).is_zero() and lp_eval(R2, p.c1, p.c2).is_zero()
            log.check(ok, f"char {char}: R1 or R2 nonzero at {p.text()}")
        spans = ctx.cache.get("excluded_spans") or {}
        for p in got:
            key = (F.spec.label, p.text())
            d = spans[key] if key in spans else burnside_span_dim(six_dim_rep(p))
            log.check(d < 36, f"char {char}: exception {p.text()} has span {d}")
    # exhaustive agreement on small fields: span < 36 exactly on the exception set
    exhaustive = {}
    for spec in EXHAUSTIVE_FIELDS:
        if not ctx.wants(spec.characteristic):
            continue
        F = field_make(spec)
        es = solve_exception_set(spec.characteristic, chains)
        solved = {ParamPair(a, b).key() for a, b in es.pairs}
        units = [Scalar(F, x) for x in F.elements() if not F.is_zero(x)]
        low = set()
        for a in units:
            for b in units:
                p = ParamPair(a, b)
                if burnside_span_dim(six_dim_rep(p)) < 36:
                    low.add(p.key())
        same_field = es.field == spec
        if same_field:
            log.check(low == solved, f"{spec.label}: low-span pairs {sorted(low)} != solved {sorted(solved)}")
        else:
            log.check(low <= solved, f"{spec.label}: low-span pairs {sorted(low)} not all solved")
        exhaustive[spec.label] = sorted("(" + ",".join(k) + ")" for k in low)
    # R1 or R2 nonzero forces full span (200 random points)
    consistency = 0
    if ctx.wants(10007):
        F = field_make(GF(10007))
        for p in random_valid_params(F, rng, 200):
            if not (lp_eval(R1, p.c1, p.c2).is_zero() and lp_eval(R2, p.c1, p.c2).is_zero()):
                consistency += 1
                d = burnside_span_dim(six_dim_rep(p))
                log.check(d == 36, f"{p.text()}: R1/R2 nonzero but span {d}")
    detail = {"exception_sets": sets, "exhaustive_low_span": exhaustive, "consistency_points": consistency}
    return _finish(9, t0, log, detail)


# ---------------------------------------------------------------------------
# criterion 10: classification round trip
# ---------------------------------------------------------------------------


def _roundtrip_six(log: _Log, p: ParamPair, rng: random.Random) -> None:
    F = p.field
    Q = random_invertible(F, 6, rng)
    r = six_dim_rep(p).conjugate(Q)
    res = classify(r)
    want = canonical_param(p)
    if not log.check(res.status == "classified", f"{p.text()}: status {res.status} ({res.reason})"):
        return
    log.check(res.canonical_params == want, f"{p.text()}: got {res.canonical_params}, want {want}")
    W = res.witness_Q
    canon = six_dim_rep(want)
    ok = W is not None and not mat_det(W).is_zero() and W @ r.X == canon.X @ W and W @ r.Y == canon.Y @ W
    log.check(ok, f"{p.text()}: witness does not intertwine with the canonical rep")


def criterion_10(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.perf_counter()
    log = _Log()
    rng = ctx.rng(10)
    fields = [sweep_field(ctx.characteristic)]
    counts = {}
    F = field_make(fields[0])
    for p in random_valid_params(F, rng, ctx.orbit_sweep):
        _roundtrip_six(log, p, rng)
    counts[F.spec.label] = ctx.orbit_sweep
    if ctx.characteristic is None:
        # a smaller exact-rational sweep, and the fields of the catalog criteria
        for spec, k in ((QQ, 10), (GF(7), 10), (GF9, 10), (GF16, 10)):
            Fk = field_make(spec)
            for p in random_valid_params(Fk, rng, k):
                _roundtrip_six(log, p, rng)
            counts[spec.label] = k
    labels_checked = 0
    for name, spec in _fields_for(ctx):
        for lab in finite_labels(spec.characteristic):
            Fz = label_field(lab, spec)
            base = make_catalog_rep(lab, Fz)
            for _ in range(3):
                r = base.conjugate(random_invertible(Fz, base.n, rng))
                res = classify(r)
                got = res.label.text() if res.label is not None else res.status
                log.check(got == lab.text(), f"{name}: {lab.text()} classified as {got}")
                labels_checked += 1
    return _finish(10, t0, log, {"dim6_roundtrips": counts, "label_roundtrips": labels_checked})


# ---------------------------------------------------------------------------
# criterion 11: property suites
# ---------------------------------------------------------------------------


def _field_axioms(log: _Log, F: Field, rng: random.Random, n: int) -> None:
    for _ in range(n):
        a, b, c = F.random(rng), F.random(rng), F.random(rng)
        log.check((a + b) + c == a + (b + c) and (a * b) * c == a * (b * c), f"{F}: associativity at {a},{b},{c}")
        log.check(a + b == b + a and a * b == b * a, f"{F}: commutativity at {a},{b}")
        log.check(a * (b + c) == a * b + a * c, f"{F}: distributivity at {a},{b},{c}")
        if not a.is_zero():
            log.check((a * a.inv()) == F(1), f"{F}: inverse of {a}")


def _random_lp(rng: random.Random, terms: int = 4, span: int = 3) -> LaurentPoly:
    d = {}
    for _ in range(rng.randint(1, terms)):
        e = (rng.randint(-span, span), rng.randint(-span, span))
        d[e] = d.get(e, 0) + Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return LaurentPoly(d)


def _random_monomial_matrix(rng: random.Random) -> Mat:
    data = []
    for _ in range(16):
        if rng.random() < 0.25:
            data.append(LaurentPoly())
        else:
            data.append(LaurentPoly.monomial(rng.choice([-2, -1, 1, 2, 3]), rng.randint(-2, 2), rng.randint(-2, 2)))
    return Mat(LAURENT, 4, 4, data)


def _census_masks(ctx: AcceptanceContext) -> tuple[set, list]:
    masks: set = set()
    pairs = []
    for rep in _census(ctx):
        for d in rep.details:
            masks.add(d.xmask)
            masks.add(d.ymask)
            pairs.append((d.xmask, d.ymask))
    return masks, pairs


def _suite_exactalg(log: _Log, ctx: AcceptanceContext, rng: random.Random) -> dict:
    specs = [s for _, s in _fields_for(ctx)]
    for extra in (GF9, GF16):
        if ctx.wants(extra.characteristic):
            specs.append(extra)
    for s in specs:
        _field_axioms(log, field_make(s), rng, 1000)
    for spec in (QQ, GF(10007)):
        if not ctx.wants(spec.characteristic):
            continue
        F = field_make(spec)
        for _ in range(100):
            A, B = random_matrix(F, 4, rng), random_matrix(F, 4, rng)
            log.check(mat_det(A @ B) == mat_det(A) * mat_det(B), f"{F}: det(AB) != det(A)det(B)")
        for _ in range(25):
            A = random_matrix(F, 4, rng)
            if rng.random() < 0.6:  # force a rank drop
                data = list(A.data)
                data[12:16] = [F.add(x, y) for x, y in zip(data[0:4], data[4:8])]
                A = Mat(F, 4, 4, data)
            basis = A.nullspace()
            for v in basis:
                col = Mat(F, 4, 1, [x.raw for x in v])
                log.check(all(F.is_zero(x) for x in (A @ col).data), f"{F}: nullspace vector not in kernel")
            log.check(A.rank() + len(basis) == 4, f"{F}: rank-nullity fails")
            if not mat_det(A).is_zero():
                Ai = mat_inverse(A)
                log.check((A @ Ai).is_identity() and (Ai @ A).is_identity(), f"{F}: inverse fails")
    for _ in range(50):
        M = _random_monomial_matrix(rng)
        log.check(mat_det(M) == mat_det_cofactor(M), "Bareiss determinant differs from cofactor expansion")
    return {"field_axiom_fields": [s.label for s in specs]}


def _suite_symbolic(log: _Log, ctx: AcceptanceContext, rng: random.Random) -> dict:
    from .elimination import SCRIPT_IDS, run_sprem_chain

    for _ in range(500):
        p = _random_lp(rng)
        log.check(lp_arith("sub", p, p).terms == {}, "p - p is not canonical zero")
    evals = 0
    for spec in (QQ, GF(10007)):
        F = field_make(spec)
        for _ in range(250):
            p, q = _random_lp(rng), _random_lp(rng)
            c1, c2 = F.random_nonzero(rng), F.random_nonzero(rng)
            ep, eq = lp_eval(p, c1, c2), lp_eval(q, c1, c2)
            log.check(lp_eval(p * q, c1, c2) == ep * eq, f"{F}: eval not multiplicative")
            log.check(lp_eval(p + q, c1, c2) == ep + eq, f"{F}: eval not additive")
            evals += 1
    for _ in range(500):
        a, b = _random_lp(rng), _random_lp(rng)
        if b.is_zero():
            continue
        log.check(lp_exact_div(a * b, b) == a, "exact division does not invert multiplication")
    for _ in range(100):
        a, b, g = (_random_univariate(rng) for _ in range(3))
        if g.is_zero() or a.is_zero() or b.is_zero():
            continue
        h = lp_gcd_univariate(a * g, b * g, "c1")
        log.check(lp_exact_div(h, g) is not None, "gcd(ag, bg) not divisible by g")
        log.check(lp_exact_div(a * g, h) is not None and lp_exact_div(b * g, h) is not None, "gcd does not divide")
    chains = ctx.cache.setdefault("chains", {})
    steps = 0
    for sid in SCRIPT_IDS:
        if sid not in chains:
            chains[sid] = run_sprem_chain(sid)
        for s in chains[sid].steps:
            steps += 1
            log.check(s.check(), f"{sid}: sprem step fails re-multiplication")
    return {"eval_cases": evals, "sprem_steps_checked": steps}


def _random_univariate(rng: random.Random) -> LaurentPoly:
    d = {}
    for k in range(rng.randint(0, 4) + 1):
        c = rng.randint(-5, 5)
        if c:
            d[(k, 0)] = c
    return LaurentPoly(d)


def _suite_rep(log: _Log, ctx: AcceptanceContext, rng: random.Random) -> dict:
    sample = [r for _, _, r in _label_reps(ctx)]
    Fg = field_make(sweep_field(ctx.characteristic))
    sample += [six_dim_rep(p) for p in random_valid_params(Fg, rng, 5)]
    for r in sample:
        X, Y = r.X, r.Y
        ci = rep_commutators(r)
        L, G = ci.lam, ci.gamma
        ok = (
            L @ X @ L == X
            and G @ X @ G == X
            and L @ Y @ G == Y
            and G @ (Y @ Y) @ L == Y @ Y
            and L @ G == G @ L
            and ((X @ Y) ** 6).is_identity()
        )
        log.check(ok, f"commutator identities fail for a dimension {r.n} rep")
        basis = intertwiner_space(r, r)
        log.check(len(basis) == 1 and basis[0].is_scalar(), "intertwiner_space(r, r) is not spanned by I")
    for _ in range(50):
        r = rng.choice(sample)
        d0 = burnside_span_dim(r)
        Q = random_invertible(r.field, r.n, rng)
        log.check(burnside_span_dim(r.conjugate(Q)) == d0, "span dimension changes under conjugation")
    for _ in range(100):
        p = random_valid_params(Fg, rng, 1)[0]
        c = canonical_param(p)
        log.check(canonical_param(c) == c, f"canonical form not idempotent at {p.text()}")
        log.check(all(canonical_param(q) == c for q in orbit(p)), f"orbit of {p.text()} splits")
    for p in random_valid_params(Fg, rng, 50):
        _check_Qi(log, p)
    return {"rep_sample": len(sample)}


def _suite_patterns(log: _Log, ctx: AcceptanceContext, rng: random.Random) -> dict:
    masks, pairs = _census_masks(ctx)
    for m in masks:
        log.check(has_perfect_matching(m) == has_perfect_matching_bruteforce(m), f"matching disagrees on {m.rows()}")
    # shapes of 6 with at most 5 parts
    shapes = [s for s in _partitions(6) if len(s) <= 5]
    for s in shapes:
        classes = tuple(c for c, k in enumerate(s) for _ in range(k))
        pat = EigenPattern(classes, tuple(None for _ in s))
        log.check(len(enumerate_gamma_arrangements(pat)) == multinomial(s), f"shape {s}: arrangement count")
    # relabeling symmetry
    for _ in range(50):
        spec = CASES[rng.choice(CASE_IDS)]
        pat = spec.pattern()
        g = rng.choice(enumerate_gamma_arrangements(pat))
        perm = list(range(6))
        rng.shuffle(perm)
        xm, ym = derive_zero_patterns(pat, g)
        moved = EigenPattern(tuple(pat.classes[perm[i]] for i in range(6)), pat.inverse)
        xm2, ym2 = derive_zero_patterns(moved, tuple(g[perm[i]] for i in range(6)))
        ok = all(
            xm2.mask[i][j] == xm.mask[perm[i]][perm[j]] and ym2.mask[i][j] == ym.mask[perm[i]][perm[j]]
            for i in range(6)
            for j in range(6)
        )
        log.check(ok, f"case {spec.case_id}: zero patterns not relabeling-symmetric")
    # closure bound soundness on random concrete reps
    F = field_make(GF(10007))
    for _ in range(50):
        xm, ym = rng.choice(pairs)
        X = _fill(F, xm, rng)
        Y = _fill(F, ym, rng)
        d = burnside_span_dim(Rep(X, Y))
        bound = closure_span_bound(xm, ym)
        log.check(d <= bound, f"span {d} exceeds closure bound {bound}")
    return {"census_masks": len(masks), "shapes": len(shapes)}


def _fill(F: Field, m: ZeroPattern, rng: random.Random) -> Mat:
    return Mat(F, m.n, m.n, [F.random_nonzero_raw(rng) if v else F.zero for row in m.mask for v in row])


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _suite_elimination(log: _Log, ctx: AcceptanceContext, rng: random.Random) -> dict:
    from .elimination import generation_check

    F = field_make(GF(10007))
    solved = 0
    for _ in range(20):
        res = generation_check(F.random_nonzero(rng), F.random_nonzero(rng))
        if res is not None:
            solved += 1
            log.check(res, "U/L reconstruction from the monomials fails")
    return {"generation_points": solved}


def criterion_11(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.perf_counter()
    log = _Log()
    rng = ctx.rng(11)
    detail = {}
    for name, suite in (
        ("exactalg", _suite_exactalg),
        ("symbolic", _suite_symbolic),
        ("rep", _suite_rep),
        ("patterns", _suite_patterns),
        ("elimination", _suite_elimination),
    ):
        before = log.failed
        detail[name] = suite(log, ctx, rng)
        detail[name]["ok"] = log.failed == before
    return _finish(11, t0, log, detail)


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def run_acceptance(ctx: AcceptanceContext | None = None, only=None) -> list[CriterionResult]:
    ctx = ctx or AcceptanceContext()
    numbers = sorted(only) if only else sorted(CRITERIA)
    results = []
    for k in numbers:
        try:
            results.append(CRITERIA[k](ctx))
        except Exception as exc:  # a crash is a failed criterion, reported as such
            results.append(
                CriterionResult(k, NAMES[k], False, 0.0, BUDGETS[k], {}, [f"{type(exc).__name__}: {exc}"])
            )
    return results
