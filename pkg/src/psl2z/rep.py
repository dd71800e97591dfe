"""Pairs (X, Y) with X² = Y³ = I: validation, commutator images,
Burnside span dimension and intertwiners."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .exactalg import (
    Field,
    FieldSpec,
    Mat,
    RingMismatchError,
    RowSpace,
    ShapeError,
    field_make,
    mat_from_text,
    mat_inverse,
    nullspace_sparse,
)


class RepFormatError(ValueError):
    """A rep document could not be parsed; the message names the offending field."""


@dataclass(frozen=True)
class Rep:
    X: Mat
    Y: Mat

    def __post_init__(self):
        if not isinstance(self.X, Mat) or not isinstance(self.Y, Mat):
            raise TypeError("Rep needs two matrices")
        if self.X.ring != self.Y.ring:
            raise RingMismatchError("X and Y live over different fields")
        if not (self.X.is_square and self.Y.is_square and self.X.rows == self.Y.rows):
            raise ShapeError("X and Y must be square of the same size")
        if not getattr(self.X.ring, "is_field", False):
            raise TypeError("a Rep must be defined over a field")

    @property
    def field(self) -> Field:
        return self.X.ring

    @property
    def n(self) -> int:
        return self.X.rows

    def conjugate(self, Q: Mat) -> "Rep":
        """(Q X Q⁻¹, Q Y Q⁻¹)."""
        Qi = mat_inverse(Q)
        return Rep(Q @ self.X @ Qi, Q @ self.Y @ Qi)

    # --- file format ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "field": self.field.spec.to_json(),
            "n": self.n,
            "X": self.X.to_text(),
            "Y": self.Y.to_text(),
        }

    @classmethod
    def from_json(cls, doc) -> "Rep":
        if not isinstance(doc, dict):
            raise RepFormatError("top level must be a JSON object")
        for key in ("field", "n", "X", "Y"):
            if key not in doc:
                raise RepFormatError(f"missing field {key!r}")
        if not isinstance(doc["field"], dict):
            raise RepFormatError("'field' must be an object like {\"char\": 0}")
        try:
            spec = FieldSpec.from_json(doc["field"])
            F = field_make(spec)
        except (ValueError, TypeError) as exc:
            raise RepFormatError(f"field: {exc}") from exc
        n = doc["n"]
        if not isinstance(n, int) or n <= 0:
            raise RepFormatError("'n' must be a positive integer")
        mats = []
        for key in ("X", "Y"):
            rows = doc[key]
            if not isinstance(rows, list) or len(rows) != n:
                raise RepFormatError(f"{key}: expected {n} rows")
            for i, row in enumerate(rows):
                if not isinstance(row, list) or len(row) != n:
                    raise RepFormatError(f"{key}[{i}]: expected {n} entries")
                for j, x in enumerate(row):
                    if not isinstance(x, (str, int)) or isinstance(x, bool):
                        raise RepFormatError(f"{key}[{i}][{j}]: entries must be scalar strings")
            try:
                mats.append(mat_from_text(F, rows))
            except ValueError as exc:
                bad = _locate_bad_entry(F, rows)
                raise RepFormatError(f"{key}{bad}: {exc}") from exc
        return cls(*mats)

    @classmethod
    def load(cls, path) -> "Rep":
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise RepFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        return cls.from_json(doc)


def _locate_bad_entry(F, rows) -> str:
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            try:
                F.parse(str(x))
            except ValueError:
                return f"[{i}][{j}] ({x!r})"
    return ""


@dataclass(frozen=True)
class ValidationReport:
    x_squared_identity: bool
    y_cubed_identity: bool
    lambda_diagonal: bool
    gamma_diagonal: bool
    lambda_scalar: bool
    lambda_equals_gamma: bool

    @property
    def relations_hold(self) -> bool:
        return self.x_squared_identity and self.y_cubed_identity

    @property
    def hypothesis_holds(self) -> bool:
        return self.relations_hold and self.lambda_diagonal and self.gamma_diagonal

    def to_json(self) -> dict:
        return {
            "X^2=I": self.x_squared_identity,
            "Y^3=I": self.y_cubed_identity,
            "Lambda diagonal": self.lambda_diagonal,
            "Gamma diagonal": self.gamma_diagonal,
            "Lambda scalar": self.lambda_scalar,
            "Lambda=Gamma": self.lambda_equals_gamma,
        }


@dataclass(frozen=True)
class CommutatorImages:
    lam: Mat
    gamma: Mat
    both_diagonal: bool


def rep_commutators(r: Rep) -> CommutatorImages:
    """Λ = XYXY² and Γ = XY²XY."""
    X, Y = r.X, r.Y
    Y2 = Y @ Y
    lam = X @ Y @ X @ Y2
    gam = X @ Y2 @ X @ Y
    return CommutatorImages(lam, gam, lam.is_diagonal() and gam.is_diagonal())


def rep_validate(r: Rep) -> ValidationReport:
    X, Y = r.X, r.Y
    Y2 = Y @ Y
    ci = rep_commutators(r)
    return ValidationReport(
        (X @ X).is_identity(),
        (Y2 @ Y).is_identity(),
        ci.lam.is_diagonal(),
        ci.gamma.is_diagonal(),
        ci.lam.is_scalar(),
        ci.lam == ci.gamma,
    )


def _vec(m: Mat) -> dict:
    isz = m.ring.is_zero
    return {k: x for k, x in enumerate(m.data) if not isz(x)}


def burnside_span_dim(r: Rep) -> int:
    """Dimension of the span of all words in X and Y (n² iff irreducible)."""
    n2 = r.n * r.n
    space = RowSpace(r.field)
    queue = []
    for m in (Mat.identity(r.field, r.n), r.X, r.Y):
        if space.add(_vec(m)):
            queue.append(m)
    while queue and len(space) < n2:
        m = queue.pop()
        for g in (r.X, r.Y):
            p = g @ m
            if space.add(_vec(p)):
                queue.append(p)
                if len(space) == n2:
                    break
    return len(space)


def is_irreducible(r: Rep) -> bool:
    return burnside_span_dim(r) == r.n * r.n


def _intertwiner_rows(a: Rep, b: Rep):
    """Sparse rows of Q·A − B·Q = 0 for (A, B) = (X_a, X_b) and (Y_a, Y_b)."""
    F = a.field
    n = a.n
    for A, B in ((a.X, b.X), (a.Y, b.Y)):
        for i in range(n):
            for j in range(n):
                row: dict = {}
                for k in range(n):
                    x = A.raw(k, j)
                    if not F.is_zero(x):
                        idx = i * n + k
                        row[idx] = F.add(row.get(idx, F.zero), x)
                    y = B.raw(i, k)
                    if not F.is_zero(y):
                        idx = k * n + j
                        row[idx] = F.sub(row.get(idx, F.zero), y)
                row = {k: v for k, v in row.items() if not F.is_zero(v)}
                if row:
                    yield row


def intertwiner_space(a: Rep, b: Rep) -> list[Mat]:
    """Basis of {Q : Q X_a = X_b Q and Q Y_a = Y_b Q}."""
    if a.n != b.n:
        raise ShapeError("reps of different dimension")
    if a.field != b.field:
        raise RingMismatchError("reps over different fields")
    F = a.field
    n = a.n
    basis = nullspace_sparse(F, _intertwiner_rows(a, b), n * n)
    return [Mat(F, n, n, [v.get(k, F.zero) for k in range(n * n)]) for v in basis]


class ReducibleInputError(ValueError):
    pass


def rep_equivalent(a: Rep, b: Rep) -> bool:
    """Equivalence of two irreducible reps via the intertwiner space."""
    for r in (a, b):
        if not is_irreducible(r):
            raise ReducibleInputError("equivalence is only decided for irreducible reps")
    basis = intertwiner_space(a, b)
    if not basis:
        return False
    assert len(basis) == 1, "Schur's lemma violated: intertwiner space of irreducibles has dim > 1"
    assert not basis[0].det().is_zero(), "nonzero intertwiner between irreducibles must be invertible"
    return True


def equivalence_witness(a: Rep, b: Rep) -> Mat | None:
    """An invertible Q with Q X_a Q⁻¹ = X_b and Q Y_a Q⁻¹ = Y_b, if one is in the basis."""
    for Q in intertwiner_space(a, b):
        if not Q.det().is_zero():
            return Q
    return None
