"""Command-line front end.

Exit codes: 0 success, 1 verification failure or a non-classified input,
2 usage or parse error.  Reports are JSON by default; ``--table`` renders a
short human-readable summary instead.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .exactalg import FieldError, FieldSpec, ScalarParseError, field_make

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# option handling
# ---------------------------------------------------------------------------


def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("field")
    g.add_argument("--char", dest="char", type=int, default=None, help="characteristic (0 or a prime)")
    g.add_argument("--prime", type=int, default=None, help="same as --char for a prime field")
    g.add_argument(
        "--extension",
        default=None,
        help="'none', 'zeta' for z^2+z+1, or monic coefficients from the constant term, e.g. 1,0,1",
    )
    o = p.add_argument_group("run")
    o.add_argument("--seed", type=int, default=None, help="random seed (default: $PSL2Z_SEED or 0)")
    o.add_argument("--jobs", type=int, default=1, help="worker processes for independent tasks")
    o.add_argument("--out", default=None, help="write the JSON report to this path")
    fmt = o.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON (the default)")
    fmt.add_argument("--table", action="store_true", help="emit a human-readable summary")
    o.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="psl2z",
        description="Representations of PSL2(Z) with diagonal commutator images: catalog, "
        "classification, census and elimination checks.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    sub.add_parser("catalog", parents=[common], help="list and verify the catalog for a field")
    c = sub.add_parser("classify", parents=[common], help="classify a rep file")
    c.add_argument("file")
    o = sub.add_parser("orbit", parents=[common], help="the six equivalent parameter pairs")
    o.add_argument("c1")
    o.add_argument("c2")
    ce = sub.add_parser("census", parents=[common], help="run the eigenpattern census")
    ce.add_argument("--case", default=None, help="one case id (5, 7, 8, 9a, 9b, 10)")
    ce.add_argument("--detail", action="store_true", help="include per-arrangement detail")
    el = sub.add_parser("elimination", parents=[common], help="run the elimination certificates")
    el.add_argument("--only", default=None, help="run a single chain by script id")
    va = sub.add_parser("verify-all", parents=[common], help="run every acceptance criterion")
    va.add_argument("--sweep", type=int, default=100, help="random parameters per field (default 100)")
    va.add_argument("--criteria", default=None, help="comma-separated criterion numbers to run")
    return parser


def resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PSL2Z_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"PSL2Z_SEED must be an integer, got {env!r}") from None


def resolve_characteristic(args) -> int | None:
    char, prime = args.char, args.prime
    if char is not None and prime is not None and char != prime:
        raise UsageError("--char and --prime disagree")
    value = char if char is not None else prime
    if prime is not None and prime == 0:
        raise UsageError("--prime must be a prime")
    if value is not None:
        try:
            FieldSpec(value)
        except FieldError as exc:
            raise UsageError(str(exc)) from None
    return value


def resolve_field_spec(args, default_char: int = 0) -> FieldSpec:
    char = resolve_characteristic(args)
    char = default_char if char is None else char
    ext = args.extension
    if ext is None or ext == "none":
        coeffs = None
    elif ext == "zeta":
        coeffs = (1, 1, 1)
    else:
        try:
            coeffs = tuple(Fraction(t.strip()) for t in ext.split(","))
        except ValueError:
            raise UsageError(f"cannot parse --extension {ext!r}") from None
    try:
        spec = FieldSpec(char, coeffs)
        field_make(spec)
    except FieldError as exc:
        raise UsageError(str(exc)) from None
    if ext == "zeta" and char == 3:
        raise UsageError("z^2+z+1 is not irreducible in characteristic 3")
    return spec


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _strip_timings(obj):
    if isinstance(obj, dict):
        return {k: _strip_timings(v) for k, v in obj.items() if k not in ("seconds", "budget_seconds")}
    if isinstance(obj, list):
        return [_strip_timings(v) for v in obj]
    return obj


def emit(args, report: dict, table: str) -> None:
    if not args.timings:
        report = _strip_timings(report)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.table:
        print(table)
    elif not args.out:
        print(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    from .acceptance import zeta_extension
    from .catalog import enumerate_catalog, excluded_pairs, make_catalog_rep, six_dim_rep
    from .rep import burnside_span_dim, rep_validate

    spec = resolve_field_spec(args)
    F = field_make(spec)
    listing = enumerate_catalog(spec.characteristic, F)
    entries = []
    ok = True
    rows = []
    for e in listing.entries:
        Fe = field_make(zeta_extension(spec)) if e.requires_extension else F
        r = make_catalog_rep(e.label, Fe)
        v = rep_validate(r)
        span = burnside_span_dim(r)
        good = v.hypothesis_holds and span == r.n * r.n
        ok = ok and good
        entries.append(
            {
                "label": e.label.text(),
                "dim": e.label.dim,
                "field": Fe.spec.label,
                "requires_extension": e.requires_extension,
                "validation": v.to_json(),
                "span_dim": span,
                "irreducible": span == r.n * r.n,
                "X": r.X.to_text(),
                "Y": r.Y.to_text(),
            }
        )
        rows.append(f"  {e.label.text():<22} {Fe.spec.label:<22} span {span:>2}  {'ok' if good else 'FAIL'}")
    family = dict(listing.family)
    spans = {}
    for p in excluded_pairs(F):
        d = burnside_span_dim(six_dim_rep(p))
        spans[p.text()] = d
        ok = ok and d < 36
    family["excluded_in_field"] = spans
    report = {
        "command": "catalog",
        "field": spec.to_json(),
        "field_label": spec.label,
        "characteristic": spec.characteristic,
        "counts": dict(zip(("dim1", "dim2", "dim3"), listing.counts())),
        "entries": entries,
        "family": family,
        "ok": ok,
    }
    table = "\n".join(
        [f"catalog over {spec.label}: {len(entries)} finite entries + dim-6 family"]
        + rows
        + [f"  dim6 family: c1, c2 nonzero; excluded {', '.join(listing.family['excluded'])}"]
    )
    emit(args, report, table)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classify(args) -> int:
    from .catalog import ClassificationError, classify
    from .rep import Rep, RepFormatError

    try:
        r = Rep.load(args.file)
    except FileNotFoundError:
        raise UsageError(f"no such file: {args.file}") from None
    except (RepFormatError, ScalarParseError, FieldError) as exc:
        report = {"command": "classify", "file": args.file, "status": "parse-error", "error": str(exc)}
        emit(args, report, f"parse error: {exc}")
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        report = {"command": "classify", "file": args.file, "status": "parse-error", "error": str(exc)}
        emit(args, report, f"parse error: {exc}")
        return EXIT_USAGE
    try:
        res = classify(r)
        out = res.to_json()
    except ClassificationError as exc:
        out = {"status": "unsupported", "dim": r.n, "reason": str(exc)}
    except ValueError as exc:
        out = {"status": "invalid", "dim": r.n, "reason": str(exc)}
    report = {"command": "classify", "file": args.file, "field": r.field.spec.to_json(), **out}
    table = f"{args.file}: {out['status']}" + (f" {out['label']}" if out.get("label") else "")
    if out.get("reason"):
        table += f" ({out['reason']})"
    emit(args, report, table)
    return EXIT_OK if out["status"] == "classified" else EXIT_FAIL


def cmd_orbit(args) -> int:
    from .catalog import ORBIT_MAP_TEXT, ParamPair, canonical_param, intertwiner_Qi, param_excluded, sigma
    from .catalog import x_prime, y_prime

    spec = resolve_field_spec(args)
    F = field_make(spec)
    try:
        p = ParamPair(F.parse(args.c1), F.parse(args.c2))
    except (ScalarParseError, ValueError) as exc:
        raise UsageError(f"bad parameter: {exc}") from None
    X = x_prime(F)
    images = []
    ok = True
    for i in range(1, 7):
        q = sigma(i, p)
        Q = intertwiner_Qi(i, p)
        witness = not Q.det().is_zero() and Q @ X == X @ Q and Q @ y_prime(p) == y_prime(q) @ Q
        ok = ok and witness
        images.append({"map": ORBIT_MAP_TEXT[i - 1], "params": list(q.key()), "witness_ok": witness})
    report = {
        "command": "orbit",
        "field": spec.to_json(),
        "params": list(p.key()),
        "excluded": param_excluded(p),
        "canonical": list(canonical_param(p).key()),
        "orbit": images,
        "ok": ok,
    }
    table = "\n".join(
        [f"orbit of {p.text()} over {spec.label}; canonical {canonical_param(p).text()}"]
        + [f"  {im['map']:<28} ({im['params'][0]},{im['params'][1]})  witness {'ok' if im['witness_ok'] else 'FAIL'}" for im in images]
    )
    emit(args, report, table)
    return EXIT_OK if ok else EXIT_FAIL


def _census_case(job):
    from .patterns import run_case_census

    case, char, detail = job
    return run_case_census(case, char).to_json(detail)


def cmd_census(args) -> int:
    from .patterns import CASE_IDS

    char = resolve_characteristic(args) or 0
    cases = [args.case] if args.case else list(CASE_IDS)
    for c in cases:
        if c not in CASE_IDS:
            raise UsageError(f"unknown case {c!r}; choose from {', '.join(CASE_IDS)}")
    jobs = [(c, char, args.detail) for c in cases]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            reports = list(ex.map(_census_case, jobs))
    else:
        reports = [_census_case(j) for j in jobs]
    applicable = [r for r in reports if r["pattern_verdict"] == "NeedsCensus"]
    ok = all(r["golden_ok"] for r in applicable)
    report = {"command": "census", "characteristic": char, "seed": resolve_seed(args), "cases": reports, "ok": ok}
    rows = [
        f"  case {r['case']:<3} {r['pattern_verdict']:<18} {r['arrangements']:>4} -> {r['nonsingular']:>3} -> {r['survivors']:>3}"
        f"   expected {r['expected']['arrangements']} -> {r['expected']['nonsingular']} -> {r['expected']['survivors']}"
        for r in reports
    ]
    emit(args, report, "\n".join([f"census, characteristic {char}"] + rows))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_elimination(args) -> int:
    from .elimination import SCRIPT_IDS, resolve_script_id, run_elimination

    if args.only:
        try:
            resolve_script_id(args.only)
        except (KeyError, ValueError):
            raise UsageError(f"unknown script id {args.only!r}; choose from {', '.join(SCRIPT_IDS)}") from None
    rep = run_elimination(only=args.only, jobs=args.jobs)
    report = {"command": "elimination", **rep}
    rows = [f"  {c['script_id']:<28} {c['claim']['mode']:<26} {'ok' if c['claim']['ok'] and c['cofactor_check'] else 'FAIL'}" for c in rep["chains"]]
    emit(args, report, "\n".join([f"elimination: {rep['verdict']}"] + rows))
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def cmd_verify_all(args) -> int:
    from .acceptance import AcceptanceContext, run_acceptance

    if args.sweep < 1:
        raise UsageError("--sweep must be positive")
    only = None
    if args.criteria:
        try:
            only = sorted({int(t) for t in args.criteria.split(",")})
        except ValueError:
            raise UsageError("--criteria takes comma-separated numbers") from None
        if any(k < 1 or k > 11 for k in only):
            raise UsageError("criteria are numbered 1 to 11")
    seed = resolve_seed(args)
    char = resolve_characteristic(args)
    ctx = AcceptanceContext(
        seed=seed, sweep=args.sweep, orbit_sweep=max(1, args.sweep // 2), characteristic=char, jobs=args.jobs
    )
    results = run_acceptance(ctx, only)
    ok = all(r.passed for r in results)
    report = {
        "command": "verify-all",
        "seed": seed,
        "sweep": args.sweep,
        "characteristic": char,
        "criteria": [r.to_json(timings=args.timings) for r in results],
        "ok": ok,
    }
    emit(args, report, "\n".join(r.line() for r in results))
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "catalog": cmd_catalog,
    "classify": cmd_classify,
    "orbit": cmd_orbit,
    "census": cmd_census,
    "elimination": cmd_elimination,
    "verify-all": cmd_verify_all,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"psl2z {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
