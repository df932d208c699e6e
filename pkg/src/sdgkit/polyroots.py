"""Exact real-root isolation for integer polynomials.

Polynomials are coefficient lists in ascending order.  Isolation on [0, 1]
uses Descartes' rule of signs with bisection (the Vincent-Collins-Akritas
scheme) on the square-free part; refinement bisects with exact sign
evaluation at dyadic rationals, so every reported root is certified.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence


def trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def padd(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def psub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def peval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sign(v) -> int:
    return (v > 0) - (v < 0)


def sign_at_dyadic(p: Sequence[int], num: int, k: int) -> int:
    """Sign of p(num / 2**k) using integers only."""
    acc = 0
    for i, c in enumerate(reversed(p)):
        acc = acc * num + c * (1 << (k * i))
    return sign(acc)


def taylor_shift(p: Sequence, a) -> list:
    """Coefficients of p(x + a)."""
    q = list(p)
    n = len(q)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            q[j] += a * q[j + 1]
    return q


def to_integer(p: Sequence[Fraction]) -> list:
    """Positive rescaling of a rational polynomial to coprime integers."""
    p = trim([Fraction(c) for c in p])
    if not p:
        return []
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    q = [int(c * den) for c in p]
    g = 0
    for c in q:
        g = gcd(g, c)
    return [c // g for c in q]


def derivative(p: Sequence) -> list:
    return trim([i * p[i] for i in range(1, len(p))])


def _prem_gcd(a: list, b: list) -> list:
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    while b:
        while len(a) >= len(b) and a:
            f = a[-1] / b[-1]
            s = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + s] -= f * c
            a = trim(a)
        a, b = b, a
    return to_integer(a)


_PRIME = (1 << 61) - 1


def _gcd_degree_mod(a: list, b: list, m: int = _PRIME) -> int:
    """Degree of gcd(a, b) modulo the prime m."""
    a = trim([c % m for c in a])
    b = trim([c % m for c in b])
    while b:
        inv = pow(b[-1], m - 2, m)
        while len(a) >= len(b) and a:
            f = a[-1] * inv % m
            s = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + s] = (a[i + s] - f * c) % m
            a = trim(a)
        a, b = b, a
    return len(a) - 1


def squarefree(p: Sequence[int]) -> list:
    """p / gcd(p, p') as a primitive integer polynomial."""
    p = trim(list(p))
    if len(p) <= 2:
        return to_integer(p)
    dp = derivative(p)
    # a trivial gcd modulo a prime not dividing the leading coefficient is
    # trivial over the rationals too
    if p[-1] % _PRIME and _gcd_degree_mod(p, dp) == 0:
        return to_integer(p)
    g = _prem_gcd(p, dp)
    if len(g) <= 1:
        return to_integer(p)
    # exact division by g
    rem = [Fraction(c) for c in p]
    q = [Fraction(0)] * (len(p) - len(g) + 1)
    for i in range(len(q) - 1, -1, -1):
        f = rem[i + len(g) - 1] / g[-1]
        q[i] = f
        for j, c in enumerate(g):
            rem[i + j] -= f * c
    q = to_integer(q)
    # keep the leading sign of p
    return q if (q[-1] > 0) == (p[-1] > 0) else [-c for c in q]


def _variations(p: Sequence[int]) -> int:
    v, last = 0, 0
    for c in p:
        if c:
            s = 1 if c > 0 else -1
            if last and s != last:
                v += 1
            last = s
    return v


def _descartes01(p: list) -> int:
    """Upper bound (exact when 0 or 1) on the roots of p in (0, 1)."""
    return _variations(taylor_shift(p[::-1], 1))


class Root:
    """A root in [0, 1]: exact dyadic ``num / 2**k`` or an isolating open
    interval ``(num / 2**k, (num + 1) / 2**k)``."""

    __slots__ = ("num", "k", "exact")

    def __init__(self, num: int, k: int, exact: bool):
        self.num, self.k, self.exact = num, k, exact

    @property
    def lo(self) -> Fraction:
        return Fraction(self.num, 1 << self.k)

    @property
    def hi(self) -> Fraction:
        return self.lo if self.exact else Fraction(self.num + 1, 1 << self.k)

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2


def isolate01(p: Sequence[int], s: Optional[list] = None) -> list:
    """Isolate the distinct real roots of p in [0, 1], sorted ascending.
    ``s`` may pass in the square-free part when already known."""
    s = squarefree(p) if s is None else s
    if not s:
        raise ValueError("zero polynomial")
    roots = []
    if s[0] == 0:
        roots.append(Root(0, 0, True))
    if sum(s) == 0:
        roots.append(Root(1, 0, True))
    stack = [(s, 0, 0)]
    while stack:
        q, c, k = stack.pop()
        if q[0] == 0:
            if k > 0:
                roots.append(Root(c, k, True))
            q = q[1:]
        if len(q) <= 1:
            continue
        v = _descartes01(q)
        if v == 0:
            continue
        if v == 1 and sum(q) != 0:
            roots.append(Root(c, k, False))
            continue
        n = len(q) - 1
        left = [coef << (n - i) for i, coef in enumerate(q)]
        right = taylor_shift(left, 1)
        stack.append((right, 2 * c + 1, k + 1))
        stack.append((left, 2 * c, k + 1))
    roots.sort(key=lambda r: (r.lo, r.hi))
    return roots


def refine(s: Sequence[int], root: Root, width: Fraction) -> Root:
    """Bisect an isolating interval of the square-free ``s`` below ``width``."""
    if root.exact:
        return root
    num, k = root.num, root.k
    s_lo = sign_at_dyadic(s, num, k)
    if s_lo == 0:
        # lo is itself a root; s keeps one sign on (lo, root)
        s_lo = sign_after(s, Root(num, k, True))
    while Fraction(1, 1 << k) > width:
        num, k = 2 * num, k + 1
        sm = sign_at_dyadic(s, num + 1, k)
        if sm == 0:
            return Root(num + 1, k, True)
        if sm != s_lo:
            continue
        num += 1
    return Root(num, k, False)


def sign_after(p: Sequence[int], root: Root) -> int:
    """Sign of p immediately to the right of ``root``."""
    if not root.exact:
        return sign(peval(p, root.hi))
    shifted = taylor_shift([Fraction(c) for c in p], root.lo)
    for c in shifted:
        if c != 0:
            return sign(c)
    return 0


def first_crossing(p: Sequence[int], width: Fraction,
                   skip_zero: bool = True) -> Optional[Root]:
    """First root in (0, 1] after which p is negative, refined below
    ``width``.  Roots where p only touches zero or turns positive are
    skipped.
    """
    p = trim(list(p))
    if not p:
        raise ValueError("zero polynomial")
    s = squarefree(p)
    for r in isolate01(p, s):
        if skip_zero and r.exact and r.num == 0:
            continue
        r = refine(s, r, width)
        if sign_after(p, r) < 0:
            return r
    return None
