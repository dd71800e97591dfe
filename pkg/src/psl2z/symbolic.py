"""Sparse Laurent polynomials in c1, c2 with exact rational coefficients.

The workhorse for the elimination pipeline: arithmetic, exact division,
sparse pseudo-remainders with cofactor tracking, univariate gcd over ℚ and
evaluation into any exact field.

Coefficients are Python ints whenever possible and ``Fraction`` otherwise;
the term map never stores a zero.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactalg import Field, RingMismatchError, Scalar, ScalarParseError

VARS = ("c1", "c2")


def _var_index(var) -> int:
    if var in (0, 1):
        return var
    try:
        return VARS.index(str(var))
    except ValueError:
        raise ValueError(f"unknown variable {var!r}; expected 'c1' or 'c2'") from None


def _nc(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _clean(d: dict) -> dict:
    return {k: _nc(v) for k, v in d.items() if v != 0}


def _dmul(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for (b1, b2), y in b.items():
        for (a1, a2), x in a.items():
            k = (a1 + b1, a2 + b2)
            out[k] = get(k, 0) + x * y
    return _clean(out)


def _dadd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    get = out.get
    if sign == 1:
        for k, v in b.items():
            out[k] = get(k, 0) + v
    else:
        for k, v in b.items():
            out[k] = get(k, 0) - v
    return _clean(out)


class LaurentPoly:
    """Immutable sparse Laurent polynomial in c1, c2 over ℚ."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict | None = None, _clean_ok: bool = False):
        if terms is None:
            terms = {}
        elif not _clean_ok:
            cleaned = {}
            for k, v in terms.items():
                e1, e2 = k
                if isinstance(v, float):
                    raise TypeError("floating point coefficients are not allowed")
                v = _nc(Fraction(v)) if not isinstance(v, int) else v
                if v != 0:
                    cleaned[(int(e1), int(e2))] = v
            terms = cleaned
        self.terms = terms
        self._hash = None

    # --- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, coef=1, e1: int = 0, e2: int = 0) -> "LaurentPoly":
        return cls({(e1, e2): coef})

    @classmethod
    def var(cls, name) -> "LaurentPoly":
        i = _var_index(name)
        return cls({(1, 0) if i == 0 else (0, 1): 1}, True)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return parse_poly(text)

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        if isinstance(x, str):
            return parse_poly(x)
        raise TypeError(f"cannot treat {x!r} as a Laurent polynomial")

    # --- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            o = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return LaurentPoly(_dadd(self.terms, o.terms), True)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return LaurentPoly(_dadd(self.terms, o.terms, -1), True)

    def __rsub__(self, other):
        try:
            o = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.terms.items()}, True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly({k: _nc(v * other) for k, v in self.terms.items()}, True)
        try:
            o = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return LaurentPoly(_dmul(self.terms, o.terms), True)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            if isinstance(e, int) and self.is_monomial():
                (k, v), = self.terms.items()
                return LaurentPoly({(k[0] * e, k[1] * e): Fraction(v) ** e}, False)
            raise ValueError("negative exponent on a non-monomial Laurent polynomial")
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        q = lp_exact_div(self, LaurentPoly.coerce(other))
        if q is None:
            raise ArithmeticError("not exactly divisible")
        return q

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.terms == ({(0, 0): other} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0, 0)}

    def constant_value(self):
        return self.terms.get((0, 0), 0)

    # --- degrees ------------------------------------------------------------
    def degree(self, var) -> int:
        """Largest exponent of var (−1 for the zero polynomial, following convention)."""
        i = _var_index(var)
        return max((k[i] for k in self.terms), default=-1)

    def min_degree(self, var) -> int:
        i = _var_index(var)
        return min((k[i] for k in self.terms), default=0)

    def total_degree(self) -> int:
        return max((k[0] + k[1] for k in self.terms), default=-1)

    def is_polynomial(self) -> bool:
        return all(e1 >= 0 and e2 >= 0 for e1, e2 in self.terms)

    def variables(self) -> set[str]:
        out = set()
        for e1, e2 in self.terms:
            if e1:
                out.add("c1")
            if e2:
                out.add("c2")
        return out

    def is_univariate(self, var) -> bool:
        """Only var occurs (the other exponent is zero in every term)."""
        other = 1 - _var_index(var)
        return all(k[other] == 0 for k in self.terms)

    def shift(self, d1: int, d2: int) -> "LaurentPoly":
        return LaurentPoly({(e1 + d1, e2 + d2): v for (e1, e2), v in self.terms.items()}, True)

    def coefficients_in(self, var) -> dict[int, "LaurentPoly"]:
        """Map k -> coefficient of var^k (a polynomial in the other variable)."""
        i = _var_index(var)
        out: dict[int, dict] = {}
        for k, v in self.terms.items():
            e = k[i]
            key = (k[0], 0) if i == 1 else (0, k[1])
            out.setdefault(e, {})[key] = v
        return {e: LaurentPoly(d, True) for e, d in out.items()}

    def leading_coeff(self, var) -> "LaurentPoly":
        i = _var_index(var)
        d = self.degree(i)
        return LaurentPoly(
            {((k[0], 0) if i == 1 else (0, k[1])): v for k, v in self.terms.items() if k[i] == d}, True
        )

    def content(self) -> Fraction:
        """Positive rational gcd of the coefficients (0 for the zero polynomial)."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for v in self.terms.values():
            v = Fraction(v)
            num = math.gcd(num, v.numerator)
            den = den * v.denominator // math.gcd(den, v.denominator)
        return Fraction(num, den)

    def primitive(self) -> "LaurentPoly":
        """Divide by the content; sign fixed so the lex-largest term is positive."""
        if not self.terms:
            return self
        c = self.content()
        lead = self.terms[max(self.terms)]
        if lead < 0:
            c = -c
        return LaurentPoly({k: _nc(Fraction(v) / c) for k, v in self.terms.items()}, True)

    def sorted_terms(self) -> list[tuple[tuple[int, int], object]]:
        return sorted(self.terms.items(), reverse=True)

    # --- evaluation -----------------------------------------------------------
    def evaluate(self, c1: Scalar, c2: Scalar) -> Scalar:
        return lp_eval(self, c1, c2)

    # --- text -----------------------------------------------------------------
    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (e1, e2), c in self.sorted_terms():
            mono = []
            if e1:
                mono.append("c1" if e1 == 1 else f"c1^{e1}")
            if e2:
                mono.append("c2" if e2 == 1 else f"c2^{e2}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(mono))
            elif c == -1:
                parts.append("-" + "*".join(mono))
            else:
                parts.append(f"{c}*" + "*".join(mono))
        return "+".join(parts).replace("+-", "-")

    __str__ = text

    def __repr__(self):
        s = self.text()
        if len(s) > 120:
            s = s[:117] + "..."
        return f"LaurentPoly({s})"


ZERO = LaurentPoly()
ONE = LaurentPoly({(0, 0): 1}, True)
C1 = LaurentPoly.var("c1")
C2 = LaurentPoly.var("c2")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_FACTOR_RE = re.compile(r"^(c1|c2|\d+(?:/\d+)?)(?:\^(-?\d+))?$")


def parse_poly(text: str) -> LaurentPoly:
    """Parse sums of products like ``3*c1^2*c2^-1+-1/2*c2`` (also accepts ``-``)."""
    s = text.replace(" ", "")
    if not s:
        raise ScalarParseError("empty polynomial text")
    terms: list[str] = []
    cur = ""
    for ch in s:
        if ch in "+-" and cur and cur[-1] not in "^*+-":
            terms.append(cur)
            cur = "" if ch == "+" else "-"
        elif ch == "+" and not cur:
            continue
        else:
            cur += ch
    terms.append(cur)
    out: dict = {}
    for t in terms:
        neg = False
        while t.startswith(("-", "+")):
            neg ^= t[0] == "-"
            t = t[1:]
        if not t:
            raise ScalarParseError(f"dangling sign in {text!r}")
        coef: Fraction = Fraction(-1 if neg else 1)
        e1 = e2 = 0
        for f in t.split("*"):
            m = _FACTOR_RE.match(f)
            if not m:
                raise ScalarParseError(f"cannot parse factor {f!r} in {text!r}")
            base, exp = m.group(1), int(m.group(2) or 1)
            if base == "c1":
                e1 += exp
            elif base == "c2":
                e2 += exp
            else:
                if exp < 0 and Fraction(base) == 0:
                    raise ScalarParseError("zero to a negative power")
                coef *= Fraction(base) ** exp
        out[(e1, e2)] = out.get((e1, e2), 0) + coef
    return LaurentPoly(out)


# ---------------------------------------------------------------------------
# Spec-level operations
# ---------------------------------------------------------------------------


def lp_arith(op: str, a: LaurentPoly, b) -> LaurentPoly:
    """Dispatch ``add``, ``sub``, ``mul`` or ``pow`` (b an int >= 0 for pow)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        if not isinstance(b, int) or b < 0:
            raise ValueError("pow exponent must be a nonnegative integer")
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def lp_exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly | None:
    """Return q with a = q*b in the Laurent ring, or None when b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return ZERO
    ma = (a.min_degree(0), a.min_degree(1))
    mb = (b.min_degree(0), b.min_degree(1))
    bt = {(e1 - mb[0], e2 - mb[1]): v for (e1, e2), v in b.terms.items()}
    if len(bt) == 1:
        (_, bv), = bt.items()
        return LaurentPoly(
            {(e1 - mb[0], e2 - mb[1]): _nc(Fraction(v) / bv) for (e1, e2), v in a.terms.items()}, True
        )
    r = {(e1 - ma[0], e2 - ma[1]): v for (e1, e2), v in a.terms.items()}
    lb = max(bt)
    lbc = bt[lb]
    btl = list(bt.items())
    q: dict = {}
    # Leading-term cancellation in lex order on (e1, e2).
    import heapq

    heap = [(-k[0], -k[1]) for k in r]
    heapq.heapify(heap)
    while r:
        while True:
            n1, n2 = heapq.heappop(heap)
            lt = (-n1, -n2)
            if lt in r:
                break
        d1, d2 = lt[0] - lb[0], lt[1] - lb[1]
        if d1 < 0 or d2 < 0:
            return None
        c = r[lt]
        f = _nc(Fraction(c, lbc) if isinstance(c, int) and isinstance(lbc, int) else Fraction(c) / lbc)
        q[(d1, d2)] = f
        for (b1, b2), bv in btl:
            k = (b1 + d1, b2 + d2)
            nv = r.get(k, 0) - f * bv
            if nv == 0:
                r.pop(k, None)
            else:
                if k not in r:
                    heapq.heappush(heap, (-k[0], -k[1]))
                r[k] = _nc(nv)
    shift = (ma[0] - mb[0], ma[1] - mb[1])
    return LaurentPoly({(e1 + shift[0], e2 + shift[1]): v for (e1, e2), v in q.items()}, True)


@dataclass(frozen=True)
class SpremStep:
    """m·a = q·b + r with m = lc_var(b)^exponent."""

    a: LaurentPoly
    b: LaurentPoly
    var: str
    m: LaurentPoly
    q: LaurentPoly
    r: LaurentPoly
    exponent: int

    def check(self) -> bool:
        return (self.m * self.a - self.q * self.b - self.r).is_zero() and (
            self.r.is_zero() or self.r.degree(self.var) < self.b.degree(self.var)
        )


def _leading_in(terms: dict, i: int):
    d = max(k[i] for k in terms)
    if i == 1:
        lc = {(k[0], 0): v for k, v in terms.items() if k[1] == d}
    else:
        lc = {(0, k[1]): v for k, v in terms.items() if k[0] == d}
    return d, lc


def lp_sprem(a: LaurentPoly, b: LaurentPoly, var) -> SpremStep:
    """Sparse pseudo-remainder of a by b with respect to var.

    One multiplication by the leading coefficient of b is spent per division
    step that actually happens, so m = lc_var(b)^k where k is the number of
    steps taken (never more than the degree gap + 1).
    """
    i = _var_index(var)
    name = VARS[i]
    if any(k[i] < 0 for k in a.terms) or any(k[i] < 0 for k in b.terms):
        raise ValueError(f"negative exponents of {name} are not allowed in sprem")
    if b.is_zero() or b.degree(i) < 1:
        raise ValueError(f"divisor is constant in {name}")
    db, lb = _leading_in(b.terms, i)
    bterms = b.terms
    r = dict(a.terms)
    q: dict = {}
    steps = 0
    while r:
        dr, lr = _leading_in(r, i)
        if dr < db:
            break
        shift = (0, dr - db) if i == 1 else (dr - db, 0)
        t = {(k[0] + shift[0], k[1] + shift[1]): v for k, v in lr.items()}
        r = _dadd(_dmul(lb, r), _dmul(t, bterms), -1)
        q = _dadd(_dmul(lb, q), t) if q else t
        steps += 1
    m = LaurentPoly(lb, True) ** steps
    return SpremStep(a, b, name, m, LaurentPoly(q, True), LaurentPoly(r, True), steps)


@dataclass
class ChainResult:
    """A pseudo-remainder sequence p_{k+2} = sprem(p_k, p_{k+1}) with certificates."""

    a0: LaurentPoly
    b0: LaurentPoly
    var: str
    steps: list[SpremStep]
    final_remainder: LaurentPoly
    cofactors: tuple[LaurentPoly, LaurentPoly]
    script_id: str = ""
    seconds: float = 0.0
    notes: dict = field(default_factory=dict)

    def check_cofactors(self) -> bool:
        u, v = self.cofactors
        return (self.final_remainder - (u * self.a0 + v * self.b0)).is_zero()

    def check_steps(self) -> bool:
        return all(s.check() for s in self.steps)


def sprem_chain(a0: LaurentPoly, b0: LaurentPoly, var, nsteps: int, script_id: str = "") -> ChainResult:
    """Run nsteps of the remainder sequence, tracking u_k, v_k with p_k = u_k a0 + v_k b0."""
    import time

    t0 = time.perf_counter()
    name = VARS[_var_index(var)]
    seq = [(a0, ONE, ZERO), (b0, ZERO, ONE)]
    steps: list[SpremStep] = []
    for _ in range(nsteps):
        (pa, ua, va), (pb, ub, vb) = seq[-2], seq[-1]
        st = lp_sprem(pa, pb, name)
        steps.append(st)
        # r = m·pa − q·pb
        seq.append((st.r, st.m * ua - st.q * ub, st.m * va - st.q * vb))
    final, u, v = seq[-1]
    return ChainResult(a0, b0, name, steps, final, (u, v), script_id, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Univariate gcd over ℚ (modular algorithm with exact verification)
# ---------------------------------------------------------------------------


def to_univariate(p: LaurentPoly, var) -> tuple[list, int]:
    """Dense coefficient list (low→high) in var plus the shift applied.

    The other variable must not occur.  Nonnegative exponents are kept as is
    (shift 0); a Laurent input is shifted up to a polynomial first.
    """
    i = _var_index(var)
    if not p.is_univariate(i):
        raise ValueError(f"polynomial is not univariate in {VARS[i]}")
    if p.is_zero():
        return [], 0
    lo = min(0, p.min_degree(i))
    hi = p.degree(i)
    coeffs = [0] * (hi - lo + 1)
    for k, v in p.terms.items():
        coeffs[k[i] - lo] = v
    return coeffs, lo


def from_univariate(coeffs: Sequence, var, shift: int = 0) -> LaurentPoly:
    i = _var_index(var)
    return LaurentPoly(
        {((e + shift, 0) if i == 0 else (0, e + shift)): c for e, c in enumerate(coeffs) if c != 0}
    )


def _zz_primitive(coeffs: Sequence) -> list[int]:
    fr = [Fraction(c) for c in coeffs]
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints] if g else ints


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in f])
    b = _trim([c % p for c in g])
    while b:
        inv = pow(b[-1], -1, p)
        db = len(b) - 1
        while len(a) - 1 >= db and a:
            c = a[-1] * inv % p
            s = len(a) - 1 - db
            for j in range(db + 1):
                a[s + j] = (a[s + j] - c * b[j]) % p
            _trim(a)
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _zz_divides(d: list[int], f: list[int]) -> bool:
    """Exact test d | f over ℚ[x] for integer coefficient lists."""
    f = [Fraction(c) for c in f]
    dl = d[-1]
    dd = len(d) - 1
    while len(_trim(f)) - 1 >= dd and f:
        c = f[-1] / dl
        s = len(f) - 1 - dd
        for j in range(dd + 1):
            f[s + j] -= c * d[j]
        _trim(f)
    return not f


def _next_primes():
    """Descending 61-bit primes, deterministic."""
    n = (1 << 61) - 1
    while True:
        if _miller_rabin(n):
            yield n
        n -= 2


def _miller_rabin(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _zz_gcd(f: list[int], g: list[int]) -> list[int]:
    """Primitive gcd of two nonzero integer polynomials (Brown-style modular)."""
    f, g = _zz_primitive(f), _zz_primitive(g)
    gamma = math.gcd(f[-1], g[-1])
    best_deg = None
    acc: list[int] | None = None
    modulus = 1
    for p in _next_primes():
        if gamma % p == 0:
            continue
        h = _mod_gcd(f, g, p)
        d = len(h) - 1
        if d == 0:
            return [1]
        if best_deg is None or d < best_deg:
            best_deg, acc, modulus = d, None, 1
        elif d > best_deg:
            continue  # unlucky prime
        h = [c * gamma % p for c in h]
        if acc is None:
            acc, modulus = h, p
        else:
            new = []
            inv = pow(modulus, -1, p)
            for x, y in zip(acc, h):
                t = (y - x) * inv % p
                new.append(x + modulus * t)
            acc, modulus = new, modulus * p
        half = modulus // 2
        cand = [c - modulus if c > half else c for c in acc]
        cand = _zz_primitive(cand)
        if _zz_divides(cand, f) and _zz_divides(cand, g):
            return cand
    raise AssertionError("unreachable")


def lp_gcd_univariate(a: LaurentPoly, b: LaurentPoly, var) -> LaurentPoly:
    """Monic gcd over ℚ of two univariate polynomials in var."""
    fa, sa = to_univariate(a, var)
    fb, sb = to_univariate(b, var)
    if not fa and not fb:
        return ZERO
    if not fa or not fb:
        h = fa or fb
    else:
        h = _zz_gcd(fa, fb)
    lead = Fraction(h[-1])
    return from_univariate([_nc(Fraction(c) / lead) for c in h], var)


def lp_pseudo_content_free(p: LaurentPoly) -> LaurentPoly:
    return p.primitive()


def multiplicity(p: LaurentPoly, factor: LaurentPoly) -> tuple[int, LaurentPoly]:
    """Largest k with factor^k | p, together with the cofactor p / factor^k."""
    if factor.is_constant():
        raise ValueError("multiplicity of a unit is undefined")
    if factor.is_monomial():
        # Monomials are units in the Laurent ring; count in the polynomial ring.
        (f1, f2), fc = next(iter(factor.terms.items()))
        if p.is_zero() or not p.is_polynomial() or (f1 and f2) or f1 + f2 != 1:
            raise ValueError("monomial multiplicity needs a polynomial and a single variable")
        k = p.min_degree(0 if f1 else 1)
        return k, (p * Fraction(1) / fc ** k if fc != 1 else p).shift(-k * f1, -k * f2)
    k = 0
    while not p.is_zero():
        q = lp_exact_div(p, factor)
        if q is None:
            break
        p, k = q, k + 1
    return k, p


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def lp_eval(p: LaurentPoly, c1: Scalar, c2: Scalar) -> Scalar:
    """Evaluate at (c1, c2); a ring homomorphism into the scalars' field."""
    if not isinstance(c1, Scalar) or not isinstance(c2, Scalar):
        raise TypeError("lp_eval expects Scalars")
    if c1.field.spec != c2.field.spec:
        raise RingMismatchError("c1 and c2 come from different fields")
    F = c1.field
    pw1: dict[int, object] = {}
    pw2: dict[int, object] = {}

    def power(cache, base, e):
        if e not in cache:
            if e < 0 and F.is_zero(base):
                raise ZeroDivisionError("zero substituted into a negative exponent")
            cache[e] = F.pow(base, e)
        return cache[e]

    total = F.zero
    for (e1, e2), coef in p.terms.items():
        try:
            c = F.raw(coef)
        except ZeroDivisionError as exc:
            raise ZeroDivisionError(f"coefficient {coef} has a denominator divisible by {F.p}") from exc
        total = F.add(total, F.mul(c, F.mul(power(pw1, c1.raw, e1), power(pw2, c2.raw, e2))))
    return Scalar(F, total)


def specialize(p: LaurentPoly, var, value: Scalar) -> "UPoly":
    """Substitute value for var; the result is a univariate polynomial over
    value's field in the remaining variable (shifted to nonnegative exponents)."""
    i = _var_index(var)
    F = value.field
    other = 1 - i
    lo = p.min_degree(other) if p.terms else 0
    coeffs: dict[int, object] = {}
    for k, coef in p.terms.items():
        c = F.mul(F.raw(coef), F.pow(value.raw, k[i]))
        e = k[other] - lo
        coeffs[e] = F.add(coeffs.get(e, F.zero), c)
    top = max(coeffs, default=-1)
    return UPoly(F, [coeffs.get(e, F.zero) for e in range(top + 1)])


# ---------------------------------------------------------------------------
# Univariate polynomials over an exact field (used for root sets)
# ---------------------------------------------------------------------------


class UPoly:
    """Dense univariate polynomial over a Field; coefficients raw, low→high."""

    __slots__ = ("F", "c")

    def __init__(self, F: Field, coeffs: Sequence):
        c = list(coeffs)
        while c and F.is_zero(c[-1]):
            c.pop()
        self.F = F
        self.c = c

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __call__(self, x: Scalar) -> Scalar:
        F = self.F
        acc = F.zero
        for coef in reversed(self.c):
            acc = F.add(F.mul(acc, x.raw), coef)
        return Scalar(F, acc)

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        F = self.F
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        a = list(self.c)
        db = other.degree
        inv = F.inv(other.c[-1])
        q = [F.zero] * max(len(a) - db, 1)
        while len(a) - 1 >= db and a:
            c = F.mul(a[-1], inv)
            s = len(a) - 1 - db
            q[s] = c
            for j in range(db + 1):
                a[s + j] = F.sub(a[s + j], F.mul(c, other.c[j]))
            while a and F.is_zero(a[-1]):
                a.pop()
        return UPoly(F, q), UPoly(F, a)

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        inv = self.F.inv(self.c[-1])
        return UPoly(self.F, [self.F.mul(x, inv) for x in self.c])

    def gcd(self, other: "UPoly") -> "UPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def deflate(self, root: Scalar) -> tuple[int, "UPoly"]:
        """Multiplicity of root and the cofactor after dividing it out."""
        F = self.F
        lin = UPoly(F, [F.neg(root.raw), F.one])
        k, p = 0, self
        while not p.is_zero():
            q, r = p.divmod(lin)
            if not r.is_zero():
                break
            p, k = q, k + 1
        return k, p

    def __repr__(self):
        return f"UPoly({[self.F.format(x) for x in self.c]})"

    def __mul__(self, other: "UPoly") -> "UPoly":
        F = self.F
        if self.is_zero() or other.is_zero():
            return UPoly(F, [])
        out = [F.zero] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if F.is_zero(a):
                continue
            for j, b in enumerate(other.c):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
        return UPoly(F, out)

    def __sub__(self, other: "UPoly") -> "UPoly":
        F = self.F
        n = max(len(self.c), len(other.c))
        a = self.c + [F.zero] * (n - len(self.c))
        b = other.c + [F.zero] * (n - len(other.c))
        return UPoly(F, [F.sub(x, y) for x, y in zip(a, b)])

    def derivative(self) -> "UPoly":
        F = self.F
        return UPoly(F, [F.mul(F.raw(k), c) for k, c in enumerate(self.c)][1:])

    def powmod(self, e: int, mod: "UPoly") -> "UPoly":
        result = UPoly(self.F, [self.F.one])
        base = self.divmod(mod)[1]
        while e:
            if e & 1:
                result = (result * base).divmod(mod)[1]
            base = (base * base).divmod(mod)[1]
            e >>= 1
        return result


def upoly_roots(f: UPoly) -> list[Scalar]:
    """Distinct roots of f lying in its coefficient field.

    Finite fields use Cantor-Zassenhaus equal-degree splitting; ℚ uses a
    p-adic lift of the roots modulo a prime followed by rational
    reconstruction.  Other characteristic-zero extensions are not handled.
    """
    if f.is_zero():
        raise ValueError("every element is a root of the zero polynomial")
    F = f.F
    if f.degree <= 0:
        return []
    if F.p:
        roots = _roots_finite(f.monic())
    elif F.degree == 1:
        roots = _roots_rational(f)
    else:
        raise NotImplementedError(f"root finding over {F.spec.label} is not implemented")
    return sorted(roots, key=lambda x: x.text())


def _roots_finite(f: UPoly) -> list[Scalar]:
    import random

    F = f.F
    q = F.order
    x = UPoly(F, [F.zero, F.one])
    roots: list[Scalar] = []
    if F.is_zero(f.c[0]):
        roots.append(Scalar(F, F.zero))
        while f.c and F.is_zero(f.c[0]):
            f = UPoly(F, f.c[1:])
    if f.degree <= 0:
        return roots
    g = f.gcd(x.powmod(q, f) - x)
    rng = random.Random(0x5EED)
    stack = [g]
    while stack:
        g = stack.pop()
        if g.degree <= 0:
            continue
        if g.degree == 1:
            roots.append(Scalar(F, F.neg(g.monic().c[0])))
            continue
        while True:
            probe = UPoly(F, [F.random_raw(rng) for _ in range(g.degree)])
            if probe.degree <= 0:
                continue
            if q % 2:
                h = probe.powmod((q - 1) // 2, g) - UPoly(F, [F.one])
            else:
                # absolute trace to GF(2): t + t^2 + ... + t^(q/2)
                t = probe
                h = t
                for _ in range(F.degree - 1):
                    t = (t * t).divmod(g)[1]
                    h = _upoly_add(h, t)
            d = g.gcd(h)
            if 0 < d.degree < g.degree:
                stack.append(d)
                stack.append(g.divmod(d)[0])
                break
    return roots


def _upoly_add(a: UPoly, b: UPoly) -> UPoly:
    F = a.F
    n = max(len(a.c), len(b.c))
    x = a.c + [F.zero] * (n - len(a.c))
    y = b.c + [F.zero] * (n - len(b.c))
    return UPoly(F, [F.add(u, v) for u, v in zip(x, y)])


def _rational_reconstruct(a: int, m: int) -> Fraction | None:
    bound = math.isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        qt = r0 // r1
        r0, r1 = r1, r0 - qt * r1
        s0, s1 = s1, s0 - qt * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _roots_rational(f: UPoly) -> list[Scalar]:
    from .exactalg import FieldSpec, field_make

    F = f.F
    zs = _zz_primitive([Fraction(c) for c in f.c])
    roots: list[Scalar] = []
    if zs[0] == 0:
        roots.append(Scalar(F, 0))
        while zs and zs[0] == 0:
            zs = zs[1:]
    if len(zs) <= 1:
        return roots
    # squarefree part
    deriv = [k * c for k, c in enumerate(zs)][1:]
    g = _zz_gcd(zs, deriv) if len(deriv) > 1 or deriv[0] else [1]
    if len(g) > 1:
        qt, _ = UPoly(F, zs).divmod(UPoly(F, g))
        zs = _zz_primitive(qt.c)
    if len(zs) == 2:
        return roots + [Scalar(F, _norm_fraction(Fraction(-zs[0], zs[1])))]
    a0, an = abs(zs[0]), abs(zs[-1])
    target = 2 * a0 * an * a0 * an + 1
    dz = [k * c for k, c in enumerate(zs)][1:]
    p = 1 << 31
    while True:
        p += 1
        if not _miller_rabin(p) or an % p == 0:
            continue
        if len(_mod_gcd(zs, dz, p)) > 1:
            continue  # not squarefree mod p
        break
    Fp = field_make(FieldSpec(p))
    modroots = _roots_finite(UPoly(Fp, [c % p for c in zs]).monic())

    def ev(poly, x, m):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % m
        return acc

    for r0 in modroots:
        r, m = r0.raw, p
        while m < target:
            m2 = m * m
            r = (r - ev(zs, r, m2) * pow(ev(dz, r, m2), -1, m2)) % m2
            m = m2
        cand = _rational_reconstruct(r, m)
        if cand is None:
            continue
        if sum(c * cand ** k for k, c in enumerate(zs)) == 0:
            roots.append(Scalar(F, _norm_fraction(cand)))
    return roots


def _norm_fraction(x: Fraction):
    return int(x) if x.denominator == 1 else x


class LaurentRing:
    """Ring protocol object so :class:`~psl2z.exactalg.Mat` can hold LaurentPolys."""

    is_field = False
    zero = ZERO
    one = ONE

    def __eq__(self, other):
        return isinstance(other, LaurentRing)

    def __hash__(self):
        return hash("LaurentRing")

    def __repr__(self):
        return "LaurentRing(Q[c1^±1, c2^±1])"

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def is_zero(a) -> bool:
        return a.is_zero()

    @staticmethod
    def eq(a, b) -> bool:
        return a == b

    @staticmethod
    def divexact(a, b):
        q = lp_exact_div(a, b)
        if q is None:
            raise ArithmeticError("inexact division during fraction-free elimination")
        return q

    @staticmethod
    def wrap(a):
        return a

    @staticmethod
    def unwrap(x):
        return LaurentPoly.coerce(x)

    @staticmethod
    def format(a) -> str:
        return a.text()


LAURENT = LaurentRing()


def evaluate_matrix(m, c1: Scalar, c2: Scalar):
    """Evaluate every entry of a Laurent matrix into c1's field."""
    from .exactalg import Mat

    F = c1.field
    return Mat(F, m.rows, m.cols, [lp_eval(x, c1, c2).raw for x in m.data])
