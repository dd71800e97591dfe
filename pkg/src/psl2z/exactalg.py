"""Exact field and matrix arithmetic.

Fields are ℚ, GF(p), and simple extensions of either by a monic irreducible
polynomial of degree 2..4.  Elements are stored "raw" (an int or Fraction for
base fields, a tuple of base coordinates for extensions) and wrapped in
:class:`Scalar` at the API boundary.  :class:`Mat` is generic over a *ring*
object exposing ``add/sub/mul/neg/is_zero/eq/zero/one`` plus ``divexact``;
fields additionally provide ``inv``/``div``.  The Laurent polynomial ring in
:mod:`psl2z.symbolic` implements the same protocol, so determinants of
polynomial matrices go through the same code.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class FieldError(ValueError):
    """Bad field description (non-prime characteristic, reducible extension, ...)."""


class RingMismatchError(TypeError):
    """Operands live in different rings; we never coerce between them."""


class ShapeError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


class ScalarParseError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _norm_q(x):
    """Collapse integral Fractions to int so hashing and printing stay uniform."""
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


# ---------------------------------------------------------------------------
# Field descriptions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """Characteristic plus an optional monic extension polynomial.

    ``extension`` lists coefficients from the constant term upwards and must
    end in 1, e.g. ``(1, 1, 1)`` for z²+z+1.
    """

    characteristic: int = 0
    extension: tuple | None = None
    label: str = ""

    def __post_init__(self):
        p = self.characteristic
        if not isinstance(p, int) or p < 0 or (p != 0 and not is_prime(p)):
            raise FieldError(f"characteristic must be 0 or a prime, got {p!r}")
        if self.extension is not None:
            ext = tuple(self.extension)
            if not 3 <= len(ext) <= 5:
                raise FieldError("extension polynomial must have degree 2..4")
            if p:
                ext = tuple(int(c) % p for c in ext)
            else:
                ext = tuple(_norm_q(_as_fraction(c)) for c in ext)
            if ext[-1] != 1:
                raise FieldError("extension polynomial must be monic")
            object.__setattr__(self, "extension", ext)
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self) -> str:
        base = "Q" if self.characteristic == 0 else f"GF({self.characteristic})"
        if self.extension is None:
            return base
        return f"{base}[z]/({_poly_text(self.extension)})"

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.characteristic, self.extension) == (other.characteristic, other.extension)

    def __hash__(self):
        return hash((self.characteristic, self.extension))

    @property
    def degree(self) -> int:
        return 1 if self.extension is None else len(self.extension) - 1

    def to_json(self) -> dict:
        d = {"char": self.characteristic}
        if self.extension is not None:
            d["extension"] = [str(c) for c in self.extension]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "FieldSpec":
        try:
            char = int(d.get("char", 0))
        except (TypeError, ValueError) as exc:
            raise FieldError(f"bad 'char' value: {d.get('char')!r}") from exc
        ext = d.get("extension")
        if ext is not None:
            ext = tuple(Fraction(str(c)) for c in ext)
        return cls(char, ext)


def _poly_text(coeffs) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(terms) or "0"


# Named field descriptions used throughout the package and tests.
QQ = FieldSpec(0)
QQ_ZETA = FieldSpec(0, (1, 1, 1), "Q(zeta)")


def GF(p: int, extension=None, label: str = "") -> FieldSpec:
    return FieldSpec(p, extension, label)


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------


class Field:
    """Arithmetic context for one :class:`FieldSpec`.  Use :func:`field_make`."""

    is_field = True

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.characteristic
        self.degree = spec.degree
        if spec.extension is None:
            self.zero = 0
            self.one = 1
        else:
            d = self.degree
            self.zero = (0,) * d
            self.one = (1,) + (0,) * (d - 1)
            # z^d = -(c_0 + c_1 z + ... + c_{d-1} z^{d-1})
            self._tail = tuple(self._bneg(c) for c in spec.extension[:-1])
            if not _extension_irreducible(spec):
                raise FieldError(f"extension polynomial of {spec.label} is reducible")
        self._zeta = None
        self._zeta_done = False

    def __repr__(self):
        return f"Field({self.spec.label})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    # --- base field primitives -------------------------------------------
    def _bnorm(self, x):
        if self.p:
            return int(x) % self.p
        return _norm_q(_as_fraction(x)) if isinstance(x, (Fraction, int)) else _norm_q(Fraction(x))

    def _bneg(self, a):
        return (-a) % self.p if self.p else -a

    def _binv(self, a):
        if self.p:
            if a % self.p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, -1, self.p)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return _norm_q(Fraction(1) / a)

    # --- raw element arithmetic ------------------------------------------
    def add(self, a, b):
        p = self.p
        if self.degree == 1:
            return (a + b) % p if p else a + b
        if p:
            return tuple((x + y) % p for x, y in zip(a, b))
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        if self.degree == 1:
            return (a - b) % p if p else a - b
        if p:
            return tuple((x - y) % p for x, y in zip(a, b))
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        if self.degree == 1:
            return (-a) % p if p else -a
        if p:
            return tuple((-x) % p for x in a)
        return tuple(-x for x in a)

    def mul(self, a, b):
        p = self.p
        if self.degree == 1:
            return (a * b) % p if p else a * b
        d = self.degree
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        tail = self._tail
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                for j in range(d):
                    if tail[j]:
                        prod[k - d + j] += c * tail[j]
        if p:
            return tuple(c % p for c in prod[:d])
        return tuple(_norm_q(c) if type(c) is Fraction else c for c in prod[:d])

    def is_zero(self, a) -> bool:
        if self.degree == 1:
            return a == 0
        return not any(a)

    def eq(self, a, b) -> bool:
        return a == b

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.degree == 1:
            return self._binv(a)
        # Solve (multiplication-by-a matrix) * x = 1 over the base field.
        d = self.degree
        cols = []
        basis = [tuple(1 if k == i else 0 for k in range(d)) for i in range(d)]
        for e in basis:
            cols.append(self.mul(a, e))
        # augmented rows: row r = [cols[0][r], ..., cols[d-1][r] | rhs_r]
        rows = [[cols[c][r] for c in range(d)] + [1 if r == 0 else 0] for r in range(d)]
        x = _solve_base(self, rows, d)
        return tuple(x)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def divexact(self, a, b):
        return self.div(a, b)

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    # --- conversion -------------------------------------------------------
    def raw(self, x):
        """Coerce an int/Fraction/str/Scalar to a raw element of this field."""
        if isinstance(x, Scalar):
            if x.field.spec != self.spec:
                raise RingMismatchError(f"scalar from {x.field.spec.label} used in {self.spec.label}")
            return x.raw
        if isinstance(x, str):
            return self.parse_raw(x)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, (int, Fraction)):
            if self.p:
                x = _as_fraction(x)
                v = (x.numerator % self.p) * self._binv(x.denominator % self.p) % self.p
            else:
                v = _norm_q(_as_fraction(x))
            return v if self.degree == 1 else (v,) + (0,) * (self.degree - 1)
        if isinstance(x, tuple) and self.degree > 1 and len(x) == self.degree:
            return tuple(self._bnorm(c) for c in x)
        raise TypeError(f"cannot convert {x!r} into {self.spec.label}")

    def __call__(self, x) -> "Scalar":
        return Scalar(self, self.raw(x))

    def coords(self, a) -> tuple:
        return (a,) if self.degree == 1 else a

    def from_coords(self, coords: Sequence):
        coords = [self._bnorm(c) for c in coords]
        if len(coords) != self.degree:
            raise ValueError("wrong number of coordinates")
        return coords[0] if self.degree == 1 else tuple(coords)

    def gen(self) -> "Scalar":
        """The adjoined root z (only for extension fields)."""
        if self.degree == 1:
            raise FieldError(f"{self.spec.label} has no adjoined root")
        return Scalar(self, tuple(1 if k == 1 else 0 for k in range(self.degree)))

    # --- text -------------------------------------------------------------
    def format(self, a) -> str:
        coords = self.coords(a)
        terms = []
        for k, c in enumerate(coords):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = "z" if k == 1 else f"z^{k}"
                if c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(f"{c}*{mono}")
        out = "+".join(terms) if terms else "0"
        return out.replace("+-", "-")

    def parse_raw(self, text: str):
        return _parse_scalar(self, text)

    def parse(self, text: str) -> "Scalar":
        return Scalar(self, self.parse_raw(text))

    # --- named constants --------------------------------------------------
    def zeta(self) -> "Scalar | None":
        """A fixed primitive cube root of unity, or None if the field has none."""
        if not self._zeta_done:
            self._zeta = self._find_zeta()
            self._zeta_done = True
        return None if self._zeta is None else Scalar(self, self._zeta)

    def _find_zeta(self):
        if self.p == 3:
            return None
        one = self.one
        if self.degree > 1:
            z = self.gen().raw
            if self.spec.extension[:3] == self._ext_norm((1, 1, 1)) and self.degree == 2:
                return z
            if self.spec.extension[:3] == self._ext_norm((1, -1, 1)) and self.degree == 2:
                return self.neg(z)
        if self.p:
            q = self.p ** self.degree
            if (q - 1) % 3:
                return None
            k = (q - 1) // 3
            for cand in self.elements():
                if self.is_zero(cand):
                    continue
                w = self.pow(cand, k)
                if w != one:
                    # deterministic choice: the smaller of the two roots
                    return min(w, self.mul(w, w))
            return None
        # characteristic 0: look for a root of t^2 + t + 1 among +-z style elements
        if self.degree > 1:
            z = self.gen().raw
            for cand in (z, self.neg(z), self.pow(z, 2), self.neg(self.pow(z, 2))):
                if self.is_zero(self.add(self.add(self.mul(cand, cand), cand), one)):
                    return cand
        return None

    def _ext_norm(self, coeffs):
        return tuple(self._bnorm(c) for c in coeffs)

    # --- enumeration and randomness ---------------------------------------
    @property
    def order(self) -> int | None:
        return None if self.p == 0 else self.p ** self.degree

    def elements(self):
        """Iterate all field elements (finite fields only)."""
        if not self.p:
            raise FieldError("cannot enumerate an infinite field")
        if self.degree == 1:
            yield from range(self.p)
            return
        import itertools

        for coords in itertools.product(range(self.p), repeat=self.degree):
            yield tuple(coords)

    def random_raw(self, rng, height: int = 9):
        """A random element; over ℚ coordinates are small rationals."""
        def base():
            if self.p:
                return rng.randrange(self.p)
            num = rng.randint(-height, height)
            den = rng.randint(1, height)
            return _norm_q(Fraction(num, den))

        if self.degree == 1:
            return base()
        return tuple(base() for _ in range(self.degree))

    def random_nonzero_raw(self, rng, height: int = 9):
        while True:
            a = self.random_raw(rng, height)
            if not self.is_zero(a):
                return a

    def random(self, rng, height: int = 9) -> "Scalar":
        return Scalar(self, self.random_raw(rng, height))

    def random_nonzero(self, rng, height: int = 9) -> "Scalar":
        return Scalar(self, self.random_nonzero_raw(rng, height))

    # Mat wraps entries with this
    def wrap(self, a) -> "Scalar":
        return Scalar(self, a)

    def unwrap(self, x):
        return self.raw(x)


def _solve_base(F: Field, rows, d):
    """Gauss-Jordan over the base field of F on a d×(d+1) augmented system."""
    p = F.p

    def sub(a, b):
        return (a - b) % p if p else a - b

    def mul(a, b):
        return (a * b) % p if p else a * b

    rows = [list(r) for r in rows]
    for c in range(d):
        piv = next((r for r in range(c, d) if rows[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("element is not invertible")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = F._binv(rows[c][c])
        rows[c] = [mul(v, inv) for v in rows[c]]
        for r in range(d):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [sub(v, mul(f, w)) for v, w in zip(rows[r], rows[c])]
    return [_norm_q(rows[r][d]) if not p else rows[r][d] for r in range(d)]


@lru_cache(maxsize=None)
def field_make(spec: FieldSpec) -> Field:
    """Build (and cache) the arithmetic context for ``spec``."""
    if not isinstance(spec, FieldSpec):
        raise TypeError("field_make expects a FieldSpec")
    return Field(spec)


# ---------------------------------------------------------------------------
# Irreducibility of extension polynomials
# ---------------------------------------------------------------------------


def _extension_irreducible(spec: FieldSpec) -> bool:
    if spec.characteristic:
        return _irreducible_mod_p([int(c) for c in spec.extension], spec.characteristic)
    return _irreducible_over_q([_as_fraction(c) for c in spec.extension])


def _pmod_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod_divmod(a, b, p):
    a = a[:]
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(_pmod_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv % p
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
    return _pmod_trim(q), a


def _pmod_mulmod(a, b, f, p):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    return _pmod_divmod(prod, f, p)[1]


def _pmod_powmod(base, e, f, p):
    result = [1]
    while e:
        if e & 1:
            result = _pmod_mulmod(result, base, f, p)
        base = _pmod_mulmod(base, base, f, p)
        e >>= 1
    return result


def _pmod_gcd(a, b, p):
    a, b = _pmod_trim(a[:]), _pmod_trim(b[:])
    while b:
        a, b = b, _pmod_divmod(a, b, p)[1]
    return a


def _irreducible_mod_p(f, p) -> bool:
    """Rabin's test: exact, and cheap even when p is large."""
    n = len(f) - 1
    x = [0, 1]
    # x^(p^n) == x  (mod f)
    h = x
    powers = {}
    for k in range(1, n + 1):
        h = _pmod_powmod(h, p, f, p)
        powers[k] = h
    if _pmod_trim([(a - b) % p for a, b in _zip_pad(powers[n], x)]):
        return False
    for q in {q for q in range(2, n + 1) if n % q == 0 and is_prime(q)}:
        g = [(a - b) % p for a, b in _zip_pad(powers[n // q], x)]
        if len(_pmod_gcd(f, g, p)) > 1:
            return False
    return True


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def _divisors(n: int):
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _integer_monic(f: Sequence[Fraction]) -> list[int]:
    """Rescale a monic rational polynomial to a monic integer one (x -> x/D)."""
    n = len(f) - 1
    D = 1
    for c in f:
        D = D * c.denominator // math.gcd(D, c.denominator)
    return [int(f[k] * D ** (n - k)) for k in range(n + 1)]


def _irreducible_over_q(f: Sequence[Fraction]) -> bool:
    g = _integer_monic(f)
    n = len(g) - 1
    # A monic integer polynomial has rational roots only among divisors of g[0].
    if g[0] == 0:
        return False
    for d in _divisors(g[0]):
        for r in (d, -d):
            if sum(c * r**k for k, c in enumerate(g)) == 0:
                return False
    if n <= 3:
        return True
    # Quartic: search factorizations (x²+ax+b)(x²+cx+e) over ℤ (Gauss's lemma).
    _, c3, c2, c1, c0 = g[0], g[3], g[2], g[1], g[0]
    for b in _divisors(c0):
        for b in (b, -b):
            e = c0 // b
            if e != b:
                # a + c = c3 ; a*e + b*c = c1  ->  a = (c1 - b*c3) / (e - b)
                num = c1 - b * c3
                if num % (e - b):
                    continue
                a = num // (e - b)
                c = c3 - a
                if a * c + b + e == c2:
                    return False
            else:
                if c1 != b * c3:
                    continue
                disc = c3 * c3 - 4 * (c2 - 2 * b)
                if disc >= 0 and math.isqrt(disc) ** 2 == disc:
                    return False
    return True


# ---------------------------------------------------------------------------
# Scalar text grammar
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-]?)\s*
        (?:(?P<num>\d+)(?:\s*/\s*(?P<den>\d+))?)?
        \s*(?P<star>\*)?\s*
        (?P<z>z(?:\s*\^\s*(?P<exp>-?\d+))?)?\s*""",
    re.VERBOSE,
)


def _split_terms(text: str) -> list[str]:
    """Split on '+' and on '-' that starts a new term (not after '/', '^', '*')."""
    terms, cur = [], ""
    prev = ""
    for ch in text:
        if ch in "+-" and cur.strip() and prev not in "^*/":
            terms.append(cur)
            cur = "" if ch == "+" else "-"
        elif ch == "+" and not cur.strip():
            if cur.strip() == "":
                cur = ""
        else:
            cur += ch
        if not ch.isspace():
            prev = ch
    terms.append(cur)
    return terms


def _parse_scalar(F: Field, text: str):
    if not isinstance(text, str) or not text.strip():
        raise ScalarParseError(f"empty scalar text {text!r}")
    total = F.zero
    for term in _split_terms(text.strip()):
        m = _TERM_RE.fullmatch(term)
        if not m or (m.group("num") is None and m.group("z") is None):
            raise ScalarParseError(f"cannot parse scalar term {term!r} in {text!r}")
        if m.group("star") and (m.group("num") is None or m.group("z") is None):
            raise ScalarParseError(f"misplaced '*' in {term!r}")
        if m.group("num") is not None and m.group("z") is not None and not m.group("star"):
            raise ScalarParseError(f"missing '*' in {term!r}")
        coef = Fraction(int(m.group("num")), int(m.group("den") or 1)) if m.group("num") else Fraction(1)
        if m.group("den") is not None and int(m.group("den")) == 0:
            raise ScalarParseError(f"zero denominator in {term!r}")
        if m.group("sign") == "-":
            coef = -coef
        try:
            value = F.raw(coef)
        except ZeroDivisionError as exc:
            raise ScalarParseError(f"denominator not invertible in {F.spec.label}: {term!r}") from exc
        if m.group("z"):
            if F.degree == 1:
                raise ScalarParseError(f"'z' used but {F.spec.label} has no extension")
            e = int(m.group("exp") or 1)
            value = F.mul(value, F.pow(F.gen().raw, e))
        total = F.add(total, value)
    return total


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------


class Scalar:
    """An immutable field element bound to its field."""

    __slots__ = ("field", "raw")

    def __init__(self, field: Field, raw):
        self.field = field
        self.raw = raw

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field.spec != self.field.spec:
                raise RingMismatchError(
                    f"cannot mix {self.field.spec.label} and {other.field.spec.label}"
                )
            return other.raw
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.raw(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Scalar(self.field, self.field.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Scalar(self.field, self.field.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Scalar(self.field, self.field.sub(o, self.raw))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Scalar(self.field, self.field.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Scalar(self.field, self.field.div(self.raw, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Scalar(self.field, self.field.div(o, self.raw))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.raw))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.pow(self.raw, e))

    def inv(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.raw))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.raw)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field.spec == other.field.spec and self.raw == other.raw
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            try:
                return self.raw == self.field.raw(other)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field.spec, self.raw))

    @property
    def coordinates(self) -> tuple:
        return self.field.coords(self.raw)

    def text(self) -> str:
        return self.field.format(self.raw)

    __str__ = text

    def __repr__(self):
        return f"Scalar({self.text()!r} in {self.field.spec.label})"


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


class Mat:
    """Dense rows×cols matrix of raw ring elements (immutable)."""

    __slots__ = ("ring", "rows", "cols", "data", "_hash")

    def __init__(self, ring, rows: int, cols: int, data: Sequence):
        if rows <= 0 or cols <= 0:
            raise ShapeError("matrix dimensions must be positive")
        data = tuple(data)
        if len(data) != rows * cols:
            raise ShapeError(f"expected {rows * cols} entries, got {len(data)}")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.data = data
        self._hash = None

    # --- construction -----------------------------------------------------
    @classmethod
    def from_rows(cls, ring, rows: Sequence[Sequence]) -> "Mat":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("ragged or empty row list")
        conv = ring.unwrap
        return cls(ring, len(rows), len(rows[0]), [conv(x) for r in rows for x in r])

    @classmethod
    def identity(cls, ring, n: int) -> "Mat":
        z, o = ring.zero, ring.one
        return cls(ring, n, n, [o if i == j else z for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, ring, rows: int, cols: int | None = None) -> "Mat":
        cols = rows if cols is None else cols
        return cls(ring, rows, cols, [ring.zero] * (rows * cols))

    @classmethod
    def diag(cls, ring, values: Sequence) -> "Mat":
        n = len(values)
        vals = [ring.unwrap(v) for v in values]
        z = ring.zero
        return cls(ring, n, n, [vals[i] if i == j else z for i in range(n) for j in range(n)])

    @classmethod
    def permutation(cls, ring, perm: Sequence[int], weights: Sequence | None = None) -> "Mat":
        """Matrix sending e_j to w_j e_{perm[j]} (0-based)."""
        n = len(perm)
        data = [ring.zero] * (n * n)
        for j, i in enumerate(perm):
            data[i * n + j] = ring.one if weights is None else ring.unwrap(weights[j])
        return cls(ring, n, n, data)

    # --- access -------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.ring.wrap(self.data[i * self.cols + j])

    def raw(self, i: int, j: int):
        return self.data[i * self.cols + j]

    def row_lists(self) -> list[list]:
        w = self.ring.wrap
        c = self.cols
        return [[w(self.data[i * c + j]) for j in range(c)] for i in range(self.rows)]

    def to_text(self) -> list[list[str]]:
        fmt = self.ring.format
        c = self.cols
        return [[fmt(self.data[i * c + j]) for j in range(c)] for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def _check(self, other: "Mat"):
        if not isinstance(other, Mat):
            raise TypeError("expected a Mat")
        if other.ring != self.ring:
            raise RingMismatchError("matrices live over different rings")

    # --- arithmetic ---------------------------------------------------------
    def __matmul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def __mul__(self, other):
        if isinstance(other, Mat):
            return mat_mul(self, other)
        s = self.ring.unwrap(other)
        mul = self.ring.mul
        return Mat(self.ring, self.rows, self.cols, [mul(s, x) for x in self.data])

    def __rmul__(self, other):
        s = self.ring.unwrap(other)
        mul = self.ring.mul
        return Mat(self.ring, self.rows, self.cols, [mul(s, x) for x in self.data])

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in addition")
        add = self.ring.add
        return Mat(self.ring, self.rows, self.cols, [add(a, b) for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in subtraction")
        sub = self.ring.sub
        return Mat(self.ring, self.rows, self.cols, [sub(a, b) for a, b in zip(self.data, other.data)])

    def __neg__(self) -> "Mat":
        neg = self.ring.neg
        return Mat(self.ring, self.rows, self.cols, [neg(a) for a in self.data])

    def __pow__(self, e: int) -> "Mat":
        if not self.is_square:
            raise ShapeError("power of a non-square matrix")
        base = self if e >= 0 else mat_inverse(self)
        e = abs(e)
        result = Mat.identity(self.ring, self.rows)
        while e:
            if e & 1:
                result = mat_mul(result, base)
            base = mat_mul(base, base)
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and all(self.ring.eq(a, b) for a, b in zip(self.data, other.data))
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, {self.to_text()})"

    # --- structure ----------------------------------------------------------
    def transpose(self) -> "Mat":
        r, c = self.rows, self.cols
        return Mat(self.ring, c, r, [self.data[i * c + j] for j in range(c) for i in range(r)])

    def is_diagonal(self) -> bool:
        isz = self.ring.is_zero
        c = self.cols
        return self.is_square and all(
            isz(self.data[i * c + j]) for i in range(self.rows) for j in range(c) if i != j
        )

    def diagonal(self) -> list:
        w = self.ring.wrap
        return [w(self.data[i * self.cols + i]) for i in range(min(self.rows, self.cols))]

    def is_scalar(self) -> bool:
        if not self.is_diagonal():
            return False
        d0 = self.data[0]
        return all(self.ring.eq(self.data[i * self.cols + i], d0) for i in range(self.rows))

    def is_identity(self) -> bool:
        return self.is_scalar() and self.ring.eq(self.data[0], self.ring.one)

    def trace(self):
        add = self.ring.add
        t = self.ring.zero
        for i in range(min(self.rows, self.cols)):
            t = add(t, self.data[i * self.cols + i])
        return self.ring.wrap(t)

    def support(self) -> tuple[tuple[bool, ...], ...]:
        isz = self.ring.is_zero
        c = self.cols
        return tuple(tuple(not isz(self.data[i * c + j]) for j in range(c)) for i in range(self.rows))

    def is_monomial(self) -> bool:
        """Exactly one nonzero entry in each row and each column."""
        s = self.support()
        return self.is_square and all(sum(r) == 1 for r in s) and all(sum(col) == 1 for col in zip(*s))

    def map(self, fn) -> "Mat":
        return Mat(self.ring, self.rows, self.cols, [fn(x) for x in self.data])

    def det(self):
        return mat_det(self)

    def inverse(self) -> "Mat":
        return mat_inverse(self)

    def nullspace(self) -> list[list]:
        return mat_nullspace(self)

    def rank(self) -> int:
        return self.cols - len(mat_nullspace(self))


def mat_mul(a: Mat, b: Mat) -> Mat:
    """Exact product a·b."""
    a._check(b)
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    ring = a.ring
    add, mul, isz = ring.add, ring.mul, ring.is_zero
    n, m, k = a.rows, b.cols, a.cols
    ad, bd = a.data, b.data
    # Skip zeros: the matrices here are mostly monomial or sparse.
    brows = [[(j, bd[t * m + j]) for j in range(m) if not isz(bd[t * m + j])] for t in range(k)]
    out = [ring.zero] * (n * m)
    for i in range(n):
        acc = {}
        for t in range(k):
            x = ad[i * k + t]
            if isz(x):
                continue
            for j, y in brows[t]:
                prod = mul(x, y)
                acc[j] = add(acc[j], prod) if j in acc else prod
        for j, v in acc.items():
            out[i * m + j] = v
    return Mat(ring, n, m, out)


def mat_det(a: Mat):
    """Exact determinant; fraction-free (Bareiss) elimination over non-fields."""
    if not a.is_square:
        raise ShapeError("determinant of a non-square matrix")
    ring = a.ring
    n = a.rows
    M = [list(a.data[i * n:(i + 1) * n]) for i in range(n)]
    isz, mul, sub = ring.is_zero, ring.mul, ring.sub
    sign = False
    if getattr(ring, "is_field", False):
        det = ring.one
        for c in range(n):
            piv = next((r for r in range(c, n) if not isz(M[r][c])), None)
            if piv is None:
                return ring.wrap(ring.zero)
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                sign = not sign
            det = mul(det, M[c][c])
            inv = ring.inv(M[c][c])
            for r in range(c + 1, n):
                if not isz(M[r][c]):
                    f = mul(M[r][c], inv)
                    row_c, row_r = M[c], M[r]
                    for j in range(c + 1, n):
                        if not isz(row_c[j]):
                            row_r[j] = sub(row_r[j], mul(f, row_c[j]))
        return ring.wrap(ring.neg(det) if sign else det)
    prev = ring.one
    for c in range(n - 1):
        piv = next((r for r in range(c, n) if not isz(M[r][c])), None)
        if piv is None:
            return ring.wrap(ring.zero)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = not sign
        pc = M[c][c]
        for r in range(c + 1, n):
            for j in range(c + 1, n):
                num = sub(mul(pc, M[r][j]), mul(M[r][c], M[c][j]))
                M[r][j] = ring.divexact(num, prev)
            M[r][c] = ring.zero
        prev = pc
    d = M[n - 1][n - 1]
    return ring.wrap(ring.neg(d) if sign else d)


def mat_det_cofactor(a: Mat):
    """Laplace expansion along the first row (reference route for small n)."""
    if not a.is_square:
        raise ShapeError("determinant of a non-square matrix")
    ring = a.ring

    def rec(rows: list[list]):
        n = len(rows)
        if n == 1:
            return rows[0][0]
        total = ring.zero
        for j in range(n):
            x = rows[0][j]
            if ring.is_zero(x):
                continue
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = ring.mul(x, rec(minor))
            total = ring.sub(total, term) if j % 2 else ring.add(total, term)
        return total

    n = a.rows
    return ring.wrap(rec([list(a.data[i * n:(i + 1) * n]) for i in range(n)]))


class RowSpace:
    """Incrementally maintained reduced row echelon basis of sparse vectors.

    Vectors are dicts {column: nonzero raw value}.  Every stored row has a
    leading 1 at its pivot and zeros in every other pivot column.
    """

    def __init__(self, field: Field):
        if not getattr(field, "is_field", False):
            raise TypeError("row reduction needs a field")
        self.F = field
        self.pivots: dict[int, dict] = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, vec: dict) -> dict:
        F = self.F
        v = dict(vec)
        for c in [c for c in v if c in self.pivots]:
            f = v.get(c)
            if f is None or F.is_zero(f):
                continue
            for j, x in self.pivots[c].items():
                nv = F.sub(v.get(j, F.zero), F.mul(f, x))
                if F.is_zero(nv):
                    v.pop(j, None)
                else:
                    v[j] = nv
        return v

    def add(self, vec: dict) -> bool:
        """Insert vec; return True iff it was independent of the current rows."""
        F = self.F
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        inv = F.inv(v[c])
        v = {j: F.mul(x, inv) for j, x in v.items()}
        for row in self.pivots.values():
            f = row.get(c)
            if f is not None:
                for j, x in v.items():
                    nv = F.sub(row.get(j, F.zero), F.mul(f, x))
                    if F.is_zero(nv):
                        row.pop(j, None)
                    else:
                        row[j] = nv
        self.pivots[c] = v
        return True

    def kernel_basis(self, ncols: int) -> list[dict]:
        """Basis of {x : row·x = 0 for every stored row}."""
        F = self.F
        out = []
        for f in range(ncols):
            if f in self.pivots:
                continue
            v = {f: F.one}
            for c, row in self.pivots.items():
                x = row.get(f)
                if x is not None:
                    v[c] = F.neg(x)
            out.append(v)
        return out


def _sparse_rows(a: Mat):
    isz = a.ring.is_zero
    c = a.cols
    for i in range(a.rows):
        row = {j: a.data[i * c + j] for j in range(c) if not isz(a.data[i * c + j])}
        if row:
            yield row


def mat_nullspace(a: Mat) -> list[list]:
    """Basis of the right kernel, as lists of Scalars (reduced form)."""
    if not getattr(a.ring, "is_field", False):
        raise TypeError("nullspace is only supported for matrices over a field")
    rs = RowSpace(a.ring)
    for row in _sparse_rows(a):
        rs.add(row)
    F = a.ring
    return [
        [Scalar(F, v.get(j, F.zero)) for j in range(a.cols)] for v in rs.kernel_basis(a.cols)
    ]


def nullspace_sparse(field: Field, rows: Iterable[dict], ncols: int) -> list[dict]:
    """Kernel basis for a system given directly as sparse rows."""
    rs = RowSpace(field)
    for row in rows:
        if row:
            rs.add(row)
    return rs.kernel_basis(ncols)


def mat_inverse(a: Mat) -> Mat:
    """Exact inverse by Gauss-Jordan elimination."""
    if not a.is_square:
        raise ShapeError("inverse of a non-square matrix")
    F = a.ring
    if not getattr(F, "is_field", False):
        raise TypeError("inverse is only supported for matrices over a field")
    n = a.rows
    M = [list(a.data[i * n:(i + 1) * n]) + [F.one if k == i else F.zero for k in range(n)] for i in range(n)]
    isz, mul, sub = F.is_zero, F.mul, F.sub
    for c in range(n):
        piv = next((r for r in range(c, n) if not isz(M[r][c])), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = F.inv(M[c][c])
        M[c] = [mul(x, inv) for x in M[c]]
        for r in range(n):
            if r != c and not isz(M[r][c]):
                f = M[r][c]
                M[r] = [sub(x, mul(f, y)) if not isz(y) else x for x, y in zip(M[r], M[c])]
    return Mat(F, n, n, [M[i][n + j] for i in range(n) for j in range(n)])


def mat_from_text(field: Field, rows: Sequence[Sequence[str]]) -> Mat:
    """Parse a matrix given as nested lists of scalar strings."""
    return Mat.from_rows(field, [[field.parse(str(x)) for x in r] for r in rows])
