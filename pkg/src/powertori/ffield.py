"""Deterministic small finite fields and polynomial helpers.

Elements of F_{p^e} are encoded as integers in [0, p^e): the base-p digits
of the code are the coefficients of the residue polynomial, lowest degree
first.  The modulus is the lexicographically smallest monic irreducible of
its degree (coefficients compared low-to-high), so a field is reproducible
from (p, e) alone.  Fields are desk-scale; multiplication and inverses go
through exp/log tables over a fixed primitive element.
"""

from __future__ import annotations

import itertools
import math
from typing import List, Sequence, Tuple

from .errors import BudgetExceeded

FIELD_BUDGET = 10 ** 4

Poly = Tuple[int, ...]  # coefficients over the prime field, ascending degree


def _poly_trim(c: List[int]) -> Tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mul_mod_p(a: Sequence[int], b: Sequence[int], p: int) -> Tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_divmod_mod_p(a: Sequence[int], b: Sequence[int], p: int):
    b = _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(_poly_trim(list(a)))
    inv_lead = pow(b[-1], -1, p)
    quot = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        factor = (a[-1] * inv_lead) % p
        quot[shift] = factor
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * bi) % p
        while a and a[-1] == 0:
            a.pop()
    return _poly_trim(quot), _poly_trim(a)


def _poly_is_irreducible(f: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by lower-degree monics; desk scale only."""
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = tuple(tail) + (1,)
            _, rem = _poly_divmod_mod_p(f, g, p)
            if not rem:
                return False
    return True


def smallest_irreducible(p: int, e: int) -> Tuple[int, ...]:
    """Lexicographically least monic irreducible of degree e over F_p."""
    if e == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=e):
        f = tuple(tail) + (1,)
        if _poly_is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible of degree %d over F_%d" % (e, p))


class FiniteField:
    """F_{p^e} with integer-coded elements and table-backed arithmetic."""

    def __init__(self, p: int, e: int):
        from .numth import is_prime

        if not is_prime(p):
            raise ValueError("%d is not prime" % p)
        if e < 1:
            raise ValueError("extension degree must be positive")
        if p ** e > FIELD_BUDGET:
            raise BudgetExceeded("field size %d exceeds budget %d"
                                 % (p ** e, FIELD_BUDGET))
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = smallest_irreducible(p, e)
        self._build_tables()

    # --- element codecs -------------------------------------------------

    def coeffs(self, a: int) -> Tuple[int, ...]:
        """Base-p digits of the code, lowest degree first, length e."""
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def encode(self, coeffs: Sequence[int]) -> int:
        a = 0
        for c in reversed(list(coeffs)):
            a = a * self.p + c % self.p
        return a

    # --- arithmetic ------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self.encode([x + y for x, y in
                            zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self.encode([-x for x in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("field inverse of zero")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("field inverse of zero")
            return 0 if k else 1
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        """x -> x^p."""
        return self.pow(a, self.p)

    def conj_table(self, q0: int) -> List[int]:
        """The order-q0 conjugation x -> x^{q0}; meaningful when q = q0^2."""
        if q0 * q0 != self.q:
            raise ValueError("conjugation needs q = q0^2")
        return [self.pow(a, q0) for a in range(self.q)]

    # --- internals -------------------------------------------------------

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _poly_mul_mod_p(self.coeffs(a), self.coeffs(b), self.p)
        _, rem = _poly_divmod_mod_p(prod, self.modulus, self.p)
        return self.encode(list(rem) + [0] * (self.e - len(rem)))

    def _pow_slow(self, a: int, k: int) -> int:
        out, base = 1, a
        while k:
            if k & 1:
                out = self._mul_slow(out, base)
            base = self._mul_slow(base, base)
            k >>= 1
        return out

    def _build_tables(self):
        # least primitive element, certified against the prime factors of q-1
        order_target = self.q - 1
        prime_divisors = []
        m = order_target
        f = 2
        while f * f <= m:
            if m % f == 0:
                prime_divisors.append(f)
                while m % f == 0:
                    m //= f
            f += 1
        if m > 1:
            prime_divisors.append(m)
        gen = None
        for a in range(2, self.q):
            if all(self._pow_slow(a, order_target // r) != 1 for r in prime_divisors):
                gen = a
                break
        if gen is None:
            if self.q == 2:
                gen = 1
            else:
                raise AssertionError("no primitive element found")
        self.generator = gen
        self._exp = [1] * max(order_target, 1)
        for i in range(1, order_target):
            self._exp[i] = self._mul_slow(self._exp[i - 1], gen)
        self._log = [0] * self.q
        for i, v in enumerate(self._exp):
            self._log[v] = i

    def elements(self):
        return range(self.q)

    def __repr__(self):
        return "FiniteField(p=%d, e=%d)" % (self.p, self.e)


def build_field(p: int, e: int) -> FiniteField:
    """Deterministic F_{p^e}; see FiniteField for the encoding contract."""
    return FiniteField(p, e)


# --- polynomials with FiniteField coefficients (codes), ascending degree ---


def fpoly_trim(c: Sequence[int]) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def fpoly_mul(field: FiniteField, a: Sequence[int], b: Sequence[int]) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = field.add(out[i + j], field.mul(ai, bj))
    return fpoly_trim(out)


def fpoly_divmod(field: FiniteField, a: Sequence[int], b: Sequence[int]):
    b = fpoly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(fpoly_trim(a))
    inv_lead = field.inv(b[-1])
    quot = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        factor = field.mul(a[-1], inv_lead)
        quot[shift] = factor
        for i, bi in enumerate(b):
            a[shift + i] = field.sub(a[shift + i], field.mul(factor, bi))
        while a and a[-1] == 0:
            a.pop()
    return fpoly_trim(quot), fpoly_trim(a)


def fpoly_monic(field: FiniteField, a: Sequence[int]) -> Poly:
    a = fpoly_trim(a)
    if not a or a[-1] == 1:
        return a
    inv = field.inv(a[-1])
    return tuple(field.mul(c, inv) for c in a)


def fpoly_gcd(field: FiniteField, a: Sequence[int], b: Sequence[int]) -> Poly:
    a, b = fpoly_trim(a), fpoly_trim(b)
    while b:
        _, r = fpoly_divmod(field, a, b)
        a, b = b, r
    return fpoly_monic(field, a)


def fpoly_derivative(field: FiniteField, a: Sequence[int]) -> Poly:
    out = []
    for i in range(1, len(a)):
        coeff = 0
        for _ in range(i % field.p):
            coeff = field.add(coeff, a[i])
        out.append(coeff)
    return fpoly_trim(out)


def fpoly_eval(field: FiniteField, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = field.add(field.mul(acc, x), c)
    return acc


def fpoly_factor(field: FiniteField, f: Sequence[int]) -> List[Poly]:
    """Monic irreducible factors with multiplicity, by trial division in
    degree-then-lex order.  Desk scale: fields here are tiny."""
    f = fpoly_monic(field, f)
    if len(f) <= 1:
        raise ValueError("cannot factor a constant")
    factors: List[Poly] = []
    deg = len(f) - 1
    d = 1
    while len(f) - 1 > 0:
        if d > (len(f) - 1) // 2:
            factors.append(f)
            break
        found = False
        for tail in itertools.product(range(field.q), repeat=d):
            g = tuple(tail) + (1,)
            q_, r = fpoly_divmod(field, f, g)
            if not r:
                factors.append(g)
                f = q_
                found = True
                break
        if not found:
            d += 1
    assert sum(len(g) - 1 for g in factors) == deg
    return sorted(factors)


def fpoly_conj_reciprocal(field: FiniteField, f: Sequence[int], q0: int) -> Poly:
    """Monic polynomial whose roots are r -> r^{-q0} for the roots r of f.

    Coefficientwise q0-power (roots gain exponent q0) followed by the
    reciprocal flip (roots invert).  Needs f(0) != 0.
    """
    f = fpoly_monic(field, f)
    if not f or f[0] == 0:
        raise ValueError("reciprocal needs a nonzero constant term")
    powered = [field.pow(c, q0) for c in f]
    flipped = list(reversed(powered))
    return fpoly_monic(field, flipped)
