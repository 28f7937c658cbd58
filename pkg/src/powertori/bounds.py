"""Executable forms of the upper and lower bounds on power-map images.

Every bound is an exact rational in the group order, the rank n, the
exponent M and the defining characteristic.  Lower bounds that are only
valid above an (existential) order threshold are emitted as report values;
the only assertions made here are exact-arithmetic ones, with the threshold
conditions surfaced as separate predicates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from . import numth, tori
from .abelian import AbelianInvariants, power_image
from .numth import as_int_q, check_sign
from .tori import GroupSpec


@dataclass(frozen=True)
class PowerWord:
    """The word x^M."""

    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("exponent must be positive")


@dataclass(frozen=True)
class BoundReport:
    spec: GroupSpec
    word: PowerWord
    bound_name: str
    bound_value: Fraction
    exact_value: Optional[int] = None
    satisfied: Optional[bool] = None

    def __post_init__(self):
        if (self.exact_value is None) != (self.satisfied is None):
            raise ValueError("exact_value and satisfied must come together")


def torus_power_image_size(parts: Sequence[int], spec: GroupSpec, M: int) -> int:
    """Exact size of the M-th power image of the type-`parts` torus."""
    if M < 1:
        raise ValueError("exponent must be positive")
    decomposition = tori.torus_decomposition(parts, spec.q, spec.eps, spec.projective)
    return power_image(decomposition, M).order


def min_torus_ratio(spec: GroupSpec, M: int) -> Fraction:
    """min over torus classes of |T| / |omega(T)|: the best N for the
    semisimple upper bound |omega(G_ss)| <= |G| / N."""
    best = None
    for parts in tori.partitions(spec.n):
        t = tori.torus_decomposition(parts, spec.q, spec.eps, spec.projective)
        ratio = Fraction(t.order, power_image(t, M).order)
        if best is None or ratio < best:
            best = ratio
    return best


def lemma_ss_upper(spec: GroupSpec, N) -> Fraction:
    """|G| / N, valid once every torus satisfies |omega(T)| <= |T| / N."""
    N = Fraction(N)
    if N <= 0:
        raise ValueError("N must be positive")
    return Fraction(numth.group_order(spec)) / N


def lemma_torusSL_check(parts: Sequence[int], n: int, p: int, l: int,
                        eps: int) -> BoundReport:
    """Exact check of |omega(T~)| <= |T~| n / (p - 1) for M = p^n - eps^n.

    T~ is the torus of type `parts` in the projective group over q = p^l,
    with l odd and coprime to n.
    """
    check_sign(eps)
    if not numth.is_prime(p):
        raise ValueError("p must be prime")
    if l % 2 == 0 or math.gcd(l, n) != 1:
        raise ValueError("need l odd with gcd(l, n) = 1")
    q = numth.PrimePower(p, l)
    spec = GroupSpec(eps, n, q, projective=True)
    M = p ** n - eps ** n
    if M < 2:
        raise ValueError("degenerate word: p^n - eps^n < 2")
    parts = tori.check_partition(parts, n)
    t_order = tori.torus_order(parts, q, eps, projective=True)
    image = torus_power_image_size(parts, spec, M)
    bound = Fraction(t_order * n, p - 1)
    return BoundReport(
        spec=spec,
        word=PowerWord(M),
        bound_name="torus-power-image-upper",
        bound_value=bound,
        exact_value=image,
        satisfied=Fraction(image) <= bound,
    )


def theorem_main_upper(n: int, p: int, l: int, eps: int = numth.PLUS) -> Fraction:
    """4 |PSL_n^eps(p^l)| n / (p - 1), the unconditional image bound for
    M = p^n - eps^n."""
    check_sign(eps)
    if not numth.is_prime(p):
        raise ValueError("p must be prime")
    if l % 2 == 0 or math.gcd(l, n) != 1:
        raise ValueError("need l odd with gcd(l, n) = 1")
    if n < 2:
        raise ValueError("n must be at least 2")
    spec = GroupSpec(eps, n, numth.PrimePower(p, l), projective=True)
    return Fraction(4 * numth.group_order(spec) * n, p - 1)


def semisimple_density_lower(spec: GroupSpec) -> Fraction:
    """|G| (1 - 3/(q-1) - 2/(q-1)^2); negative means the bound is vacuous."""
    q = as_int_q(spec.q)
    order = numth.group_order(spec)
    coeff = 1 - Fraction(3, q - 1) - Fraction(2, (q - 1) ** 2)
    return order * coeff


def ceil_q_half_power(q: int, n: int) -> int:
    """ceil(q^(n/2)): exact for even n, rounded up for odd n so that upper
    bounds using it never understate."""
    if n % 2 == 0:
        return q ** (n // 2)
    value = q ** n
    root = math.isqrt(value)
    return root if root * root == value else root + 1


def nonregular_bound(n: int, q, M: int, case: str = "single") -> int:
    """Counting ceiling for non-regular M-th powers inside one torus:
    n^2 M q^{n/2} for a one-part torus, 3 n^2 M q^{n/2} for two parts."""
    q = as_int_q(q)
    if n < 2 or M < 1:
        raise ValueError("need n >= 2 and M >= 1")
    base = n * n * M * ceil_q_half_power(q, n)
    if case == "single":
        return base
    if case == "two-part":
        return 3 * base
    raise ValueError("case must be 'single' or 'two-part'")


def lower_1torus(spec: GroupSpec, M: int) -> Fraction:
    """|G| / (2 n M), the single-torus lower bound (valid above threshold)."""
    if M < 2:
        raise ValueError("power word needs M >= 2")
    return Fraction(numth.group_order(spec), 2 * spec.n * M)


def ln_lower(n: int, terms: int = 48) -> Fraction:
    """Certified rational lower bound on ln(n) for integer n >= 1.

    ln(x) = 2 atanh((x-1)/(x+1)); truncating the (all-positive) series
    underestimates.  Large n is split as n = 2^m r so every series argument
    stays small and convergence is fast.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return Fraction(0)

    def atanh_lower(x: Fraction) -> Fraction:
        total = Fraction(0)
        power = x
        xx = x * x
        for k in range(terms):
            total += power / (2 * k + 1)
            power *= xx
        return total

    m = 0
    r = Fraction(n)
    while r >= 2:
        r /= 2
        m += 1
    ln2 = 2 * atanh_lower(Fraction(1, 3))
    return m * ln2 + 2 * atanh_lower((r - 1) / (r + 1))


def lower_th1(spec: GroupSpec, M: int) -> Tuple[Fraction, Fraction]:
    """(formula_bound, exact_union_bound) for the harmonic-weighted union of
    one- and two-part tori.

    exact_union_bound = |G| (H_{n-1}/(2 n M^2) + 1/(2 n M)); formula_bound
    replaces H_{n-1} + M-term by a certified lower bound on ln(n), so
    formula_bound <= exact_union_bound always.
    """
    if M < 1:
        raise ValueError("exponent must be positive")
    n = spec.n
    order = numth.group_order(spec)
    h = numth.harmonic(n - 1) if n >= 2 else Fraction(0)
    exact_union = order * (h / (2 * n * M * M) + Fraction(1, 2 * n * M))
    formula = order * ln_lower(n) / (2 * n * M * M)
    if exact_union < formula:
        raise AssertionError("harmonic union bound fell below the ln(n) form")
    return formula, exact_union


def th2_estimate(n: int, q) -> Fraction:
    """sum_k s(n,k) / (n! (q-1)^{k-1}), the semisimple image-density ceiling
    for M = q - 1, with the Stirling row computed iteratively."""
    q = as_int_q(q)
    if n < 1 or n > 2000:
        raise ValueError("n must be in [1, 2000] for exact mode")
    row = numth.stirling_first_row(n)
    y = q - 1
    numerator = sum(row[k] * y ** (n - k) for k in range(1, n + 1))
    return Fraction(numerator, math.factorial(n) * y ** (n - 1))


def threshold_predicates(n: int, q, M: int) -> Dict[str, bool]:
    """The sufficiency conditions guarding the non-regular count bounds.

    (i)  2^{n/2} > 8 n^2 M^2, rank alone suffices;
    (ii) q^{n - ceil(n/2) - 2} (q - 1) > 2 n^2 M^2, the per-q form.
    Both are decided in exact arithmetic (squaring for (i), rationals for
    possibly negative exponents in (ii)).
    """
    q = as_int_q(q)
    if M < 1:
        raise ValueError("exponent must be positive")
    rhs = 8 * n * n * M * M
    cond_rank = 2 ** n > rhs * rhs
    exponent = n - (-(-n // 2)) - 2
    lhs = Fraction(q) ** exponent * (q - 1)
    cond_q = lhs > 2 * n * n * M * M
    return {"rank_condition": cond_rank, "q_condition": cond_q}
