"""Exact integer and rational arithmetic for the torus machinery.

Closed-form gcd identities for q^k +- 1, unsigned Stirling numbers of the
first kind, harmonic numbers, orders of the (projective) special linear and
unitary groups, and the prime search used by the bound scans.  Everything is
arbitrary precision; nothing here ever goes through floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

PLUS = 1
MINUS = -1

ZAV_KINDS = ("minus-minus", "plus-plus", "minus-plus")


def check_sign(eps: int) -> int:
    if eps not in (PLUS, MINUS):
        raise ValueError("sign must be +1 or -1, got %r" % (eps,))
    return eps


def is_prime(n: int) -> bool:
    """Deterministic trial division, sufficient for desk-scale inputs."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimePower:
    """A prime power q = p^e with its factorization made explicit."""

    p: int
    e: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError("%d is not prime" % self.p)
        if self.e < 1:
            raise ValueError("exponent must be positive")

    @property
    def q(self) -> int:
        return self.p ** self.e

    @classmethod
    def from_q(cls, q: int) -> "PrimePower":
        """Factor q, which must be a prime power."""
        if q < 2:
            raise ValueError("a prime power is at least 2")
        n, p = q, None
        for f in range(2, q + 1):
            if f * f > n:
                p = n
                break
            if n % f == 0:
                p = f
                break
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if n != 1:
            raise ValueError("%d is not a prime power" % q)
        return cls(p, e)

    def __int__(self) -> int:
        return self.q

    def __str__(self) -> str:
        return str(self.q)


def as_int_q(q) -> int:
    """Accept either a plain integer or a PrimePower where only q matters."""
    q = int(q)
    if q < 2:
        raise ValueError("q must be at least 2")
    return q


def zav_gcd(a: int, s: int, t: int, kind: str) -> int:
    """gcd(a^s -+ 1, a^t -+ 1) by the closed-form case analysis.

    kind selects the sign pattern: "minus-minus" for (a^s-1, a^t-1),
    "plus-plus" for (a^s+1, a^t+1), "minus-plus" for (a^s-1, a^t+1).
    The direct-gcd route exists only in the test suite.
    """
    if a < 2 or s < 1 or t < 1:
        raise ValueError("need a >= 2 and s, t >= 1")
    g = math.gcd(s, t)
    if kind == "minus-minus":
        return a ** g - 1
    if kind == "plus-plus":
        if (s // g) % 2 == 1 and (t // g) % 2 == 1:
            return a ** g + 1
        return math.gcd(2, a + 1)
    if kind == "minus-plus":
        if (s // g) % 2 == 0:
            return a ** g + 1
        return math.gcd(2, a + 1)
    raise ValueError("unknown kind %r" % (kind,))


def gcd_qpow_eps(q: int, sign_s: int, s: int, sign_t: int, t: int) -> int:
    """gcd(q^s - sign_s, q^t - sign_t) with signs in {+1, -1}, closed form."""
    if sign_s == 1 and sign_t == 1:
        return zav_gcd(q, s, t, "minus-minus")
    if sign_s == -1 and sign_t == -1:
        return zav_gcd(q, s, t, "plus-plus")
    if sign_s == 1:
        return zav_gcd(q, s, t, "minus-plus")
    return zav_gcd(q, t, s, "minus-plus")


def qpow_eps(q, k: int, eps: int) -> int:
    """q^k - eps^k, the cyclic factor attached to a part of size k."""
    check_sign(eps)
    if k < 1:
        raise ValueError("k must be positive")
    return as_int_q(q) ** k - eps ** k


def stirling_first_unsigned(n: int, k: int) -> int:
    """Number of permutations of n symbols with exactly k cycles."""
    if k > n or k < 0 or n < 0:
        raise ValueError("need 0 <= k <= n")
    return stirling_first_row(n)[k]


def stirling_first_row(n: int) -> list:
    """Row n of the unsigned first-kind Stirling triangle, c(n, 0..n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    row = [1]
    for m in range(1, n + 1):
        prev = row
        row = [0] * (m + 1)
        for k in range(1, m + 1):
            row[k] = prev[k - 1] + (m - 1) * (prev[k] if k <= m - 1 else 0)
    return row


def harmonic(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n as an exact rational."""
    if n < 1:
        raise ValueError("n must be positive")
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def group_order(spec) -> int:
    """Order of SL_n(q), SU_n(q) or their central quotients.

    |SL_n(q)| = q^{n(n-1)/2} prod_{i=2}^{n} (q^i - 1), and the unitary order
    swaps in q^i - (-1)^i.  Projective orders divide by d = gcd(n, q - eps).
    `spec` is anything with eps / n / q / projective attributes.
    """
    eps = check_sign(spec.eps)
    n = spec.n
    q = as_int_q(spec.q)
    if n < 2:
        raise ValueError("rank parameter n must be at least 2")
    order = q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        order *= q ** i - eps ** i
    if spec.projective:
        order //= math.gcd(n, q - eps)
    return order


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    k = max(n, 1) + 1
    while not is_prime(k):
        k += 1
    return k


def find_example_prime(c, n: int) -> int:
    """Smallest prime p with p - 1 > 4 n^2 / c."""
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    if n < 2:
        raise ValueError("n must be at least 2")
    threshold = Fraction(4 * n * n, 1) / c
    p = 2
    while p - 1 <= threshold:
        p = next_prime(p)
    return p


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


def gcd_all(values: Sequence[int]) -> int:
    out = 0
    for v in values:
        out = math.gcd(out, v)
    return out
