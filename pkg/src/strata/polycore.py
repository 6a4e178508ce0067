"""Exact univariate polynomial arithmetic over the rationals.

General polynomials are tuples of :class:`fractions.Fraction` listed in
degree-descending order with no leading zeros; the zero polynomial is the
empty tuple.  Nothing in this module ever rounds.

Real roots are isolated with Sturm sequences.  For speed the sign
evaluations run on integer (primitive) multiples of the polynomials, which
have the same sign everywhere as long as the content is taken positive.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd as _igcd
from typing import Iterable, Sequence

Poly = tuple  # tuple[Fraction, ...], degree-descending


# ---------------------------------------------------------------------------
# data types

@dataclass(frozen=True)
class MonicPolynomial:
    """x^n + a_1 x^(n-1) + ... + a_n with exact rational a_i."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a monic polynomial needs degree >= 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def as_poly(self) -> Poly:
        return (Fraction(1),) + self.coeffs

    @classmethod
    def from_poly(cls, p: Sequence) -> "MonicPolynomial":
        p = poly(p)
        if len(p) < 2:
            raise ValueError("degree must be at least 1")
        if p[0] != 1:
            raise ValueError(f"leading coefficient is {p[0]}, expected 1")
        return cls(p[1:])

    def __call__(self, x):
        return evaluate(self.as_poly(), x)

    def __str__(self):
        return to_text(self.as_poly())


@dataclass(frozen=True)
class MultiplicityVector:
    """Multiplicities of the real roots, in the order of the roots."""

    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"multiplicities must be positive: {list(parts)}")
        object.__setattr__(self, "parts", parts)

    @property
    def length(self) -> int:
        return sum(self.parts)

    @property
    def groups(self) -> int:
        return len(self.parts)

    @property
    def surplus(self) -> int:
        return self.length - self.groups

    def pairs(self, n: int) -> int:
        """Number of complex conjugate pairs for ambient degree n."""
        if self.length > n or (n - self.length) % 2:
            raise ValueError(f"{self} is not admissible for degree {n}")
        return (n - self.length) // 2

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, k):
        return self.parts[k]

    def __str__(self):
        return "[" + ",".join(str(p) for p in self.parts) + "]"


@dataclass(frozen=True)
class SquareFreePart:
    factor: Poly
    multiplicity: int


@dataclass(frozen=True)
class IsolatingInterval:
    """Closed interval [lo, hi] holding exactly one root; lo == hi means exact."""

    lo: Fraction
    hi: Fraction

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.midpoint)


# ---------------------------------------------------------------------------
# basic arithmetic

def poly(coeffs: Iterable) -> Poly:
    """Normalize a degree-descending coefficient sequence."""
    if isinstance(coeffs, MonicPolynomial):
        return coeffs.as_poly()
    cs = [Fraction(c) for c in coeffs]
    k = 0
    while k < len(cs) and cs[k] == 0:
        k += 1
    return tuple(cs[k:])


def degree(p: Poly) -> int:
    return len(p) - 1


def evaluate(p: Poly, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def add(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    pad = len(p) - len(q)
    return poly(list(p[:pad]) + [a + b for a, b in zip(p[pad:], q)])


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, tuple(-c for c in q))


def scale(p: Poly, c) -> Poly:
    return poly(c * a for a in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly(out)


def power(p: Poly, k: int) -> Poly:
    out = (Fraction(1),)
    for _ in range(k):
        out = mul(out, p)
    return out


def divmod_poly(p: Poly, d: Poly) -> tuple:
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(poly(p))
    dd = len(d) - 1
    if len(p) - 1 < dd:
        return (), poly(p)
    quot = []
    lead = d[0]
    while len(p) - 1 >= dd:
        c = p[0] / lead
        quot.append(c)
        for k in range(len(d)):
            p[k] -= c * d[k]
        p.pop(0)
    return poly(quot), poly(p)


def exact_div(p: Poly, d: Poly) -> Poly:
    q, r = divmod_poly(p, d)
    if r:
        raise ArithmeticError("division is not exact")
    return q


def derivative(p) -> Poly:
    """Formal derivative."""
    p = poly(p)
    n = len(p) - 1
    return poly(c * (n - k) for k, c in enumerate(p[:-1]))


def monic(p: Poly) -> Poly:
    if not p:
        raise ValueError("zero polynomial has no monic form")
    return tuple(c / p[0] for c in p)


def to_text(p: Poly) -> str:
    """Coefficient-list text used by the CLI, e.g. ``1,0,-2,0,1``."""
    return ",".join(str(c) for c in p) if p else "0"


def parse_poly(text: str) -> MonicPolynomial:
    """Parse ``"1,0,-2,0,1"``; raises ValueError naming the bad position."""
    cleaned = "".join(text.split())
    if not cleaned:
        raise ValueError("parse error at position 0: empty coefficient list")
    coeffs = []
    pos = 0
    for field in cleaned.split(","):
        try:
            if not field:
                raise ValueError
            coeffs.append(Fraction(field))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"parse error at position {pos}: bad coefficient {field!r}") from None
        pos += len(field) + 1
    if len(coeffs) < 2:
        raise ValueError("parse error at position 0: need degree >= 1")
    if coeffs[0] != 1:
        raise ValueError(f"parse error at position 0: leading coefficient {coeffs[0]} is not 1")
    return MonicPolynomial(coeffs[1:])


# ---------------------------------------------------------------------------
# integer primitive forms

def _primitive(p: Poly) -> list:
    """Integer multiple of p with positive content 1 (same sign as p everywhere)."""
    den = reduce(lambda a, b: a * b // _igcd(a, b), (c.denominator for c in p), 1)
    ints = [int(c * den) for c in p]
    g = reduce(_igcd, ints, 0)
    return [c // g for c in ints] if g > 1 else ints


def _ipoly_trim(p: list) -> list:
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    return p[k:]


def _iprem(a: list, b: list) -> list:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over the integers."""
    r = list(a)
    db = len(b) - 1
    lb = b[0]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        c = r[0]
        r = [lb * x for x in r]
        for k in range(len(b)):
            r[k] -= c * b[k]
        r = _ipoly_trim(r)
        e -= 1
    if e > 0:
        r = [x * lb ** e for x in r]
    return r


def _icontent_div(p: list) -> list:
    g = reduce(_igcd, p, 0)
    return [c // g for c in p] if g > 1 else list(p)


def _hsign(p: list, num: int, den: int) -> int:
    """Sign of p(num/den) from sum p_k num^(d-k) den^k (den > 0)."""
    acc = 0
    npow = 1
    dk = den ** (len(p) - 1)
    for c in reversed(p):
        acc += c * npow * dk
        npow *= num
        dk //= den
    return (acc > 0) - (acc < 0)


# ---------------------------------------------------------------------------
# gcd and square-free decomposition

def gcd(p, q) -> Poly:
    """Monic gcd over the rationals via a primitive remainder sequence."""
    p, q = poly(p), poly(q)
    if not p and not q:
        raise ValueError("gcd(0, 0) is undefined")
    if not p:
        return monic(q)
    if not q:
        return monic(p)
    a, b = _primitive(p), _primitive(q)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _ipoly_trim(_iprem(a, b))
        a, b = b, (_icontent_div(r) if r else [])
    return monic(poly(a))


def squarefree_decomposition(p) -> list:
    """Yun's algorithm; returns SquareFreePart items in increasing multiplicity."""
    f = poly(p)
    if len(f) < 2:
        raise ValueError("degree must be at least 1")
    lead = f[0]
    f = monic(f)
    df = derivative(f)
    a = gcd(f, df)
    b = exact_div(f, a)
    c = exact_div(df, a)
    d = sub(c, derivative(b))
    parts = []
    i = 1
    while len(b) > 1:
        g = gcd(b, d) if d else monic(b)
        if len(g) > 1:
            parts.append(SquareFreePart(g, i))
        b = exact_div(b, g)
        c = exact_div(d, g)
        d = sub(c, derivative(b))
        i += 1
    if lead != 1:
        # non-monic inputs keep their leading factor on the first part
        first = parts[0]
        parts[0] = SquareFreePart(scale(first.factor, lead), first.multiplicity)
    return parts


# ---------------------------------------------------------------------------
# Sturm sequences and root isolation

def sturm_chain(p) -> list:
    """Sturm sequence p, p', -rem(...), ... (each scaled by a positive constant)."""
    f = poly(p)
    chain = [f, derivative(f)]
    while chain[-1] and len(chain[-1]) > 1:
        _, r = divmod_poly(chain[-2], chain[-1])
        if not r:
            break
        chain.append(tuple(-c for c in r))
    return [c for c in chain if c]


def _isturm(f: list) -> list:
    d = len(f) - 1
    df = _icontent_div([c * (d - k) for k, c in enumerate(f[:-1])])
    chain = [f, df]
    while len(chain[-1]) > 1:
        a, b = chain[-2], chain[-1]
        r = _ipoly_trim(_iprem(a, b))
        if not r:
            break
        e = len(a) - len(b) + 1
        sgn = -1 if (b[0] < 0 and e % 2) else 1
        chain.append(_icontent_div([-sgn * x for x in r]))
    return chain


def _variations(signs) -> int:
    last = 0
    v = 0
    for s in signs:
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def _ivar(chain: list, x: Fraction) -> int:
    return _variations(_hsign(c, x.numerator, x.denominator) for c in chain)


def sign_variations(chain: Sequence, x) -> int:
    """Sign changes of the chain evaluated at the rational x (zeros skipped)."""
    x = Fraction(x)
    return _variations((lambda v: (v > 0) - (v < 0))(evaluate(c, x)) for c in chain)


def count_roots(p, lo, hi) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    chain = sturm_chain(p)
    return sign_variations(chain, lo) - sign_variations(chain, hi)


def cauchy_bound(p) -> Fraction:
    p = poly(p)
    lead = abs(p[0])
    return 1 + max((abs(c) / lead for c in p[1:]), default=Fraction(0))


class _Isolator:
    """Isolating intervals for one square-free polynomial."""

    def __init__(self, p: Poly):
        self.f = _primitive(p)
        if self.f[0] < 0:
            self.f = [-c for c in self.f]
        self.chain = _isturm(self.f)

    def sign(self, x: Fraction) -> int:
        return _hsign(self.f, x.numerator, x.denominator)

    def count(self, lo: Fraction, hi: Fraction) -> int:
        return _ivar(self.chain, lo) - _ivar(self.chain, hi)

    def isolate(self) -> list:
        if len(self.f) == 2:
            return [IsolatingInterval(Fraction(-self.f[1], self.f[0]), Fraction(-self.f[1], self.f[0]))]
        bound = Fraction(int(cauchy_bound(poly(self.f))) + 1)
        found = []
        stack = [(-bound, bound, self.count(-bound, bound))]
        while stack:
            lo, hi, k = stack.pop()
            if k == 0:
                continue
            if k == 1:
                found.append(self._settle(lo, hi))
                continue
            mid = (lo + hi) / 2
            left = self.count(lo, mid)
            stack.append((mid, hi, k - left))
            stack.append((lo, mid, left))
        found.sort(key=lambda iv: iv.lo)
        return [self._rationalize(iv) for iv in found]

    def _settle(self, lo: Fraction, hi: Fraction) -> IsolatingInterval:
        # exactly one root in (lo, hi]; make both endpoints non-roots
        while True:
            if self.sign(hi) == 0:
                return IsolatingInterval(hi, hi)
            if self.sign(lo) != 0:
                return IsolatingInterval(lo, hi)
            mid = (lo + hi) / 2
            if self.count(mid, hi) == 1:
                lo = mid
            else:
                hi = mid

    def bisect(self, iv: IsolatingInterval) -> IsolatingInterval:
        if iv.is_exact:
            return iv
        mid = iv.midpoint
        sm = self.sign(mid)
        if sm == 0:
            return IsolatingInterval(mid, mid)
        if sm == self.sign(iv.lo):
            return IsolatingInterval(mid, iv.hi)
        return IsolatingInterval(iv.lo, mid)

    def refine(self, iv: IsolatingInterval, width) -> IsolatingInterval:
        while not iv.is_exact and iv.width > width:
            iv = self.bisect(iv)
        return iv

    def _rationalize(self, iv: IsolatingInterval) -> IsolatingInterval:
        # a rational root p/q has q | lc; two such fractions are >= 1/lc^2 apart
        if iv.is_exact:
            return iv
        lc = abs(self.f[0])
        iv = self.refine(iv, Fraction(1, 2 * lc * lc))
        if iv.is_exact:
            return iv
        cand = iv.midpoint.limit_denominator(lc)
        if iv.lo < cand < iv.hi and self.sign(cand) == 0:
            return IsolatingInterval(cand, cand)
        return iv


def isolate_real_roots(p) -> list:
    """Ordered, pairwise disjoint isolating intervals of a square-free polynomial."""
    p = poly(p)
    if len(p) < 2:
        return []
    return _Isolator(p).isolate()


def refine_interval(p, iv: IsolatingInterval, width) -> IsolatingInterval:
    """Bisect an isolating interval of p until it is at most `width` wide."""
    return _Isolator(poly(p)).refine(iv, Fraction(width))


# ---------------------------------------------------------------------------
# multiplicity vectors

def real_roots_with_multiplicity(p) -> list:
    """[(IsolatingInterval, multiplicity)] over all real roots, globally ordered."""
    f = poly(p)
    if len(f) < 2:
        return []
    items = []
    for part in squarefree_decomposition(f):
        iso = _Isolator(part.factor)
        for iv in iso.isolate():
            items.append([iv, part.multiplicity, iso])
    # roots of different factors are distinct, so refinement separates them
    while True:
        items.sort(key=lambda it: (it[0].lo, it[0].hi))
        clash = False
        for left, right in zip(items, items[1:]):
            a, b = left[0], right[0]
            if a.hi >= b.lo:
                clash = True
                if not a.is_exact:
                    left[0] = left[2].bisect(a)
                if not b.is_exact:
                    right[0] = right[2].bisect(b)
        if not clash:
            break
    return [(iv, m) for iv, m, _ in items]


def multiplicity_vector(p) -> MultiplicityVector:
    """Exact multiplicity vector of a monic polynomial."""
    return MultiplicityVector(tuple(m for _, m in real_roots_with_multiplicity(p)))


# ---------------------------------------------------------------------------
# resultants

def sylvester_matrix(p, q) -> list:
    p, q = poly(p), poly(q)
    m, k = len(p) - 1, len(q) - 1
    size = m + k
    rows = []
    for i in range(k):
        rows.append([Fraction(0)] * i + list(p) + [Fraction(0)] * (size - i - m - 1))
    for i in range(m):
        rows.append([Fraction(0)] * i + list(q) + [Fraction(0)] * (size - i - k - 1))
    return rows


def determinant(rows: list) -> Fraction:
    """Exact determinant by Gaussian elimination over the rationals."""
    a = [list(map(Fraction, r)) for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        pv = a[col][col]
        det *= pv
        for r in range(col + 1, n):
            f = a[r][col] / pv
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def resultant(p, q) -> Fraction:
    """Res(p, q) as the determinant of the Sylvester matrix (p rows first)."""
    p, q = poly(p), poly(q)
    if not p or not q:
        raise ValueError("resultant with the zero polynomial is undefined")
    return determinant(sylvester_matrix(p, q))


def discriminant_vanishes(p) -> bool:
    return resultant(p, derivative(p)) == 0


# ---------------------------------------------------------------------------
# Vieta expansion

def expand_from_roots(cfg) -> MonicPolynomial:
    """Coefficients of prod (x - y)^m * prod (x^2 - 2 alpha x + alpha^2 + beta^2).

    ``cfg`` only needs ``real_roots`` [(y, m)] and ``complex_pairs`` [(alpha, beta)].
    """
    out = (Fraction(1),)
    for y, m in cfg.real_roots:
        out = mul(out, power((Fraction(1), -Fraction(y)), int(m)))
    for alpha, beta in cfg.complex_pairs:
        al, be = Fraction(alpha), Fraction(beta)
        out = mul(out, (Fraction(1), -2 * al, al * al + be * be))
    return MonicPolynomial(out[1:])
