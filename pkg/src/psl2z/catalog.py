"""The classification as executable data.

Constructors for every family of irreducible pairs whose commutator images
are diagonal, the characteristic-dependent exclusion lists for the
six-dimensional family, its order-6 parameter orbit with explicit
intertwiners, and a classifier that maps a validated pair onto a catalog
entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactalg import Field, FieldError, Mat, Scalar, field_make, mat_nullspace
from .rep import (
    Rep,
    burnside_span_dim,
    equivalence_witness,
    intertwiner_space,
    rep_commutators,
    rep_validate,
)
from .symbolic import UPoly, upoly_roots


class CatalogError(ValueError):
    """An inadmissible label or a label needing a cube root of unity the field lacks."""


class ClassificationError(RuntimeError):
    """classify could not place a pair that passed every precondition."""


# ---------------------------------------------------------------------------
# parameters and labels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParamPair:
    c1: Scalar
    c2: Scalar

    def __post_init__(self):
        if not isinstance(self.c1, Scalar) or not isinstance(self.c2, Scalar):
            raise TypeError("ParamPair needs two field scalars")
        if self.c1.field != self.c2.field:
            raise FieldError("c1 and c2 live in different fields")
        if self.c1.is_zero() or self.c2.is_zero():
            raise ValueError("c1 and c2 must be nonzero")

    @classmethod
    def of(cls, F: Field, c1, c2) -> "ParamPair":
        conv = lambda x: F.parse(x) if isinstance(x, str) else F(x)
        return cls(conv(c1), conv(c2))

    @property
    def field(self) -> Field:
        return self.c1.field

    def key(self) -> tuple[str, str]:
        return (self.c1.text(), self.c2.text())

    def text(self) -> str:
        return f"({self.c1.text()},{self.c2.text()})"

    def __repr__(self):
        return f"ParamPair{self.text()}"


ORBIT_MAP_TEXT = (
    "(c1,c2)",
    "(1/c1,1/c2)",
    "(c2,1/(c1c2))",
    "(1/c2,c1c2)",
    "(1/(c1c2),c1)",
    "(c1c2,1/c1)",
)


def sigma(i: int, p: ParamPair) -> ParamPair:
    """The i-th orbit map (1-based; sigma(1) is the identity)."""
    c1, c2 = p.c1, p.c2
    c12 = c1 * c2
    images = {
        1: (c1, c2),
        2: (c1.inv(), c2.inv()),
        3: (c2, c12.inv()),
        4: (c2.inv(), c12),
        5: (c12.inv(), c1),
        6: (c12, c1.inv()),
    }
    if i not in images:
        raise ValueError(f"orbit map index must be 1..6, got {i}")
    return ParamPair(*images[i])


def orbit(p: ParamPair) -> list[ParamPair]:
    """The distinct images of p under the six maps, in map order."""
    out: list[ParamPair] = []
    for i in range(1, 7):
        q = sigma(i, p)
        if q not in out:
            out.append(q)
    return out


def canonical_param(p: ParamPair) -> ParamPair:
    """Orbit member with the smallest (text(c1), text(c2)) key."""
    return min(orbit(p), key=ParamPair.key)


DIM1_X = ("1", "-1")
DIM1_Y = ("1", "zeta", "zeta^2")
DIM2_VARIANTS = (("1", "zeta"), ("1", "zeta^2"), ("zeta", "zeta^2"))
DIM3_VARIANTS = ("+", "-")


@dataclass(frozen=True)
class CatalogLabel:
    dim: int
    variant: object

    def text(self) -> str:
        if self.dim in (1, 2):
            return f"dim{self.dim}/({self.variant[0]},{self.variant[1]})"
        if self.dim == 3:
            return f"dim3/{self.variant}"
        if self.dim == 6:
            return f"dim6/{self.variant.text()}"
        raise CatalogError(f"no catalog family in dimension {self.dim}")

    def needs_zeta(self) -> bool:
        return self.dim in (1, 2) and any(t.startswith("zeta") for t in self.variant)

    def __str__(self):
        return self.text()


def label_admissible(label: CatalogLabel, characteristic: int) -> bool:
    d, v = label.dim, label.variant
    if d == 1:
        if not (isinstance(v, tuple) and len(v) == 2 and v[0] in DIM1_X and v[1] in DIM1_Y):
            return False
        if characteristic == 2 and v[0] == "-1":
            return False
        if characteristic == 3 and v[1] != "1":
            return False
        return True
    if d == 2:
        return v in DIM2_VARIANTS and characteristic != 3
    if d == 3:
        return v in DIM3_VARIANTS and characteristic != 2
    if d == 6:
        return isinstance(v, ParamPair) and v.field.p == characteristic
    return False


def finite_labels(characteristic: int) -> list[CatalogLabel]:
    """All dimension 1, 2 and 3 labels for the characteristic, in display order."""
    labels = []
    for b in DIM1_Y:
        for a in DIM1_X:
            labels.append(CatalogLabel(1, (a, b)))
    labels += [CatalogLabel(2, v) for v in DIM2_VARIANTS]
    labels += [CatalogLabel(3, s) for s in DIM3_VARIANTS]
    return [lab for lab in labels if label_admissible(lab, characteristic)]


def parse_label(text: str, F: Field | None = None) -> CatalogLabel:
    """Inverse of CatalogLabel.text (dim-6 labels need the field)."""
    try:
        head, var = text.split("/", 1)
        dim = int(head.removeprefix("dim"))
    except ValueError as exc:
        raise CatalogError(f"malformed label {text!r}") from exc
    if dim == 3:
        return CatalogLabel(3, var)
    inner = var.strip()
    if not (inner.startswith("(") and inner.endswith(")")):
        raise CatalogError(f"malformed label {text!r}")
    a, b = (s.strip() for s in inner[1:-1].split(","))
    if dim == 6:
        if F is None:
            raise CatalogError("dimension 6 labels need a field")
        return CatalogLabel(6, ParamPair.of(F, a, b))
    return CatalogLabel(dim, (a, b))


def _token(F: Field, tok: str) -> Scalar:
    if tok in ("1", "-1"):
        return F(int(tok))
    z = F.zeta()
    if z is None:
        raise CatalogError(f"{F.spec.label} has no primitive cube root of unity; extend the field")
    return z if tok == "zeta" else z * z


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def x_prime(F: Field) -> Mat:
    """Block diagonal of three 2x2 swaps."""
    return Mat.permutation(F, [1, 0, 3, 2, 5, 4])


def y_prime(p: ParamPair) -> Mat:
    from .elimination import y_family_rows

    return Mat.from_rows(p.field, y_family_rows(p.c1, p.c2))


def six_dim_rep(p: ParamPair) -> Rep:
    return Rep(x_prime(p.field), y_prime(p))


def make_catalog_rep(label: CatalogLabel, F: Field) -> Rep:
    if not label_admissible(label, F.p):
        raise CatalogError(f"{label.text()} is not a catalog entry in characteristic {F.p}")
    if label.dim == 1:
        a, b = (_token(F, t) for t in label.variant)
        return Rep(Mat.from_rows(F, [[a]]), Mat.from_rows(F, [[b]]))
    if label.dim == 2:
        u, v = (_token(F, t) for t in label.variant)
        return Rep(Mat.permutation(F, [1, 0]), Mat.diag(F, [u, v]))
    if label.dim == 3:
        s = 1 if label.variant == "+" else -1
        X = Mat.diag(F, [F(s), F(-s), F(-s)])
        Y = Mat.from_rows(F, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        return Rep(X, Y)
    p = label.variant
    if p.field != F:
        raise FieldError("parameters live in a different field")
    return six_dim_rep(p)


# ---------------------------------------------------------------------------
# exclusions and intertwiners
# ---------------------------------------------------------------------------


def excluded_pairs(F: Field) -> list[ParamPair]:
    """The excluded parameter pairs that are expressible in F."""
    one, m1 = F(1), F(-1)
    z = F.zeta()
    if F.p == 3:
        raw = [(one, one), (m1, m1), (m1, one), (one, m1)]
    elif F.p == 2:
        raw = [(one, one)]
        if z is not None:
            raw += [(z, z), (z * z, z * z)]
    else:
        raw = [(one, one), (m1, m1), (m1, one), (one, m1)]
        if z is not None:
            raw += [(z, z), (z * z, z * z)]
    out = []
    for a, b in raw:
        p = ParamPair(a, b)
        if p not in out:
            out.append(p)
    return out


def param_excluded(p: ParamPair, characteristic: int | None = None) -> bool:
    F = p.field
    if characteristic is not None and characteristic != F.p:
        raise FieldError("characteristic does not match the parameter field")
    return p in excluded_pairs(F)


def _swap(F: Field, a: Scalar) -> list[list]:
    z = F(0)
    return [[z, a], [a, z]]


def _ident(F: Field) -> list[list]:
    return [[F(1), F(0)], [F(0), F(1)]]


def _blocks(F: Field, placed: dict) -> Mat:
    rows = [[F(0)] * 6 for _ in range(6)]
    for (bi, bj), blk in placed.items():
        for r in range(2):
            for c in range(2):
                rows[2 * bi + r][2 * bj + c] = blk[r][c]
    return Mat.from_rows(F, rows)


def intertwiner_Qi(i: int, p: ParamPair) -> Mat:
    """Q_i with Q_i X' = X' Q_i and Q_i Y'(p) = Y'(sigma(i, p)) Q_i."""
    F = p.field
    c1, c2 = p.c1, p.c2
    one = F(1)
    if i == 1:
        return Mat.identity(F, 6)
    if i == 2:
        return _blocks(F, {(0, 0): _swap(F, one), (1, 1): _swap(F, c2.inv()), (2, 2): _swap(F, c1)})
    if i == 3:
        return _blocks(F, {(0, 1): _ident(F), (1, 2): _ident(F), (2, 0): _ident(F)})
    if i == 4:
        return _blocks(F, {(0, 1): _swap(F, one), (1, 2): _swap(F, c1 * c2), (2, 0): _swap(F, c2)})
    if i == 5:
        return _blocks(F, {(0, 2): _ident(F), (1, 0): _ident(F), (2, 1): _ident(F)})
    if i == 6:
        return _blocks(F, {(0, 2): _swap(F, c1 * c2), (1, 0): _swap(F, c2), (2, 1): _swap(F, one)})
    raise ValueError(f"Q index must be 1..6, got {i}")


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


@dataclass
class CatalogEntry:
    label: CatalogLabel
    requires_extension: bool


@dataclass
class CatalogListing:
    characteristic: int
    field_label: str
    entries: list[CatalogEntry]
    family: dict

    def counts(self) -> tuple[int, int, int]:
        return tuple(sum(1 for e in self.entries if e.label.dim == d) for d in (1, 2, 3))


def excluded_texts(characteristic: int) -> list[str]:
    if characteristic == 3:
        return ["(1,1)", "(-1,-1)", "(-1,1)", "(1,-1)"]
    if characteristic == 2:
        return ["(1,1)", "(zeta,zeta)", "(zeta^2,zeta^2)"]
    return ["(1,1)", "(-1,-1)", "(-1,1)", "(1,-1)", "(zeta,zeta)", "(zeta^2,zeta^2)"]


def enumerate_catalog(characteristic: int, F: Field | None = None) -> CatalogListing:
    has_zeta = F is not None and F.zeta() is not None
    entries = [
        CatalogEntry(lab, lab.needs_zeta() and not has_zeta) for lab in finite_labels(characteristic)
    ]
    family = {
        "dim": 6,
        "parameters": "c1, c2 nonzero",
        "excluded": excluded_texts(characteristic),
        "orbit_maps": list(ORBIT_MAP_TEXT),
    }
    label = F.spec.label if F is not None else f"char {characteristic}"
    return CatalogListing(characteristic, label, entries, family)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


@dataclass
class ClassificationResult:
    status: str  # "classified" | "reducible" | "outside-hypothesis"
    dim: int
    label: CatalogLabel | None = None
    canonical_params: ParamPair | None = None
    witness_Q: Mat | None = None
    reason: str = ""
    span_dim: int | None = None

    def to_json(self) -> dict:
        out: dict = {"status": self.status, "dim": self.dim}
        out["label"] = self.label.text() if self.label is not None else None
        if self.canonical_params is not None:
            out["canonical_params"] = list(self.canonical_params.key())
        if self.witness_Q is not None:
            out["witness_Q"] = self.witness_Q.to_text()
        if self.span_dim is not None:
            out["span_dim"] = self.span_dim
        if self.reason:
            out["reason"] = self.reason
        return out


def minimal_polynomial(M: Mat) -> UPoly:
    """Monic minimal polynomial by the first linear dependency among I, M, M², ..."""
    F = M.ring
    n = M.rows
    powers = [Mat.identity(F, n)]
    while True:
        cols = len(powers)
        data = [powers[k].data[e] for e in range(n * n) for k in range(cols)]
        ker = mat_nullspace(Mat(F, n * n, cols, data))
        if ker:
            v = [x.raw for x in ker[0]]
            return UPoly(F, v).monic()
        powers.append(powers[-1] @ M)


def is_diagonalizable(M: Mat) -> bool:
    """True iff M is diagonalizable over an algebraic closure (squarefree minimal polynomial)."""
    m = minimal_polynomial(M)
    return m.gcd(m.derivative()).degree == 0


def eigenvalue_multiset(M: Mat) -> list[Scalar] | None:
    """Eigenvalues of a diagonalizable M with multiplicity, or None if some lie outside the field."""
    F = M.ring
    if M.is_diagonal():
        return sorted(M.diagonal(), key=Scalar.text)
    try:
        roots = upoly_roots(minimal_polynomial(M))
    except NotImplementedError:
        return None
    out = []
    n = M.rows
    for r in roots:
        k = n - (M - Mat.identity(F, n) * r).rank()
        out += [r] * k
    if len(out) != n:
        return None
    return sorted(out, key=Scalar.text)


def _six_multiset(p: ParamPair) -> list[Scalar]:
    c1, c2 = p.c1, p.c2
    vals = [c1, c1.inv(), c2, c2.inv(), c1 * c2, (c1 * c2).inv()]
    return sorted(vals, key=Scalar.text)


def _outside(n: int, reason: str) -> ClassificationResult:
    return ClassificationResult("outside-hypothesis", n, reason=reason)


def classify(r: Rep) -> ClassificationResult:
    """Place a validated pair in the catalog.

    The witness Q satisfies Q X Q⁻¹ = X_cat and Q Y Q⁻¹ = Y_cat for the
    catalog pair (X_cat, Y_cat) named by the label.
    """
    F, n = r.field, r.n
    report = rep_validate(r)
    if not report.relations_hold:
        raise ValueError("input fails X^2 = I or Y^3 = I")
    ci = rep_commutators(r)
    if not ci.both_diagonal:
        if not (ci.lam @ ci.gamma == ci.gamma @ ci.lam):
            return _outside(n, "Lambda and Gamma do not commute")
        if not (is_diagonalizable(ci.lam) and is_diagonalizable(ci.gamma)):
            return _outside(n, "Lambda or Gamma is not diagonalizable")
    span = burnside_span_dim(r)
    if span < n * n:
        return ClassificationResult("reducible", n, reason=f"span dimension {span} < {n * n}", span_dim=span)
    if n not in (1, 2, 3, 6):
        return _outside(n, f"irreducible of dimension {n}, which has no catalog family")
    if n < 6:
        return _classify_small(r)
    return _classify_six(r, ci)


def _classify_small(r: Rep) -> ClassificationResult:
    F, n = r.field, r.n
    trX, trY = r.X.trace(), r.Y.trace()
    for lab in finite_labels(F.p):
        if lab.dim != n:
            continue
        try:
            cand = make_catalog_rep(lab, F)
        except CatalogError:
            continue
        if cand.X.trace() != trX or cand.Y.trace() != trY:
            continue
        Q = equivalence_witness(r, cand)
        if Q is not None:
            return ClassificationResult("classified", n, lab, witness_Q=Q, span_dim=n * n)
    if F.zeta() is None and F.p != 3:
        raise ClassificationError(
            f"no match over {F.spec.label}; the matching label may need a cube root of unity"
        )
    raise ClassificationError(f"irreducible {n}-dimensional pair matches no catalog entry")


def _classify_six(r: Rep, ci) -> ClassificationResult:
    F = r.field
    eig = eigenvalue_multiset(ci.lam)
    if eig is None:
        raise ClassificationError(
            f"eigenvalues of Lambda are not all in {F.spec.label} (or root finding is unsupported there)"
        )
    pool: list[Scalar] = []
    for x in eig:
        for y in (x, x.inv()):
            if y not in pool:
                pool.append(y)
    pool.sort(key=Scalar.text)
    tried = 0
    for a in pool:
        for b in pool:
            p = ParamPair(a, b)
            if _six_multiset(p) != eig:
                continue
            tried += 1
            if not intertwiner_space(r, six_dim_rep(p)):
                continue
            best = canonical_param(p)
            Q = equivalence_witness(r, six_dim_rep(best))
            if Q is None:
                raise ClassificationError("orbit representative not equivalent; orbit maps are wrong")
            return ClassificationResult(
                "classified", 6, CatalogLabel(6, best), best, Q, f"{tried} candidate pairs tested", 36
            )
    raise ClassificationError(f"irreducible 6-dimensional pair matches none of {tried} candidate parameters")
