"""Partitions, Weyl data and maximal-torus decompositions for SL/SU families.

Conjugacy classes of maximal tori of the (projective) special linear and
unitary groups over F_q are indexed by partitions of n.  For a partition
(n_1, ..., n_s) the torus structure is assembled from the quantities
q^{n_i} - eps^{n_i} in two independent ways: a closed-form gcd/lcm recipe,
and a lattice model (kernel of the determinant character on a product of
cyclic groups) reduced by Smith normal form.  The two must agree; the test
suite and the CLI `--oracle` flag enforce it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from . import numth
from .abelian import (
    AbelianInvariants,
    character_kernel_presentation,
    quotient_by_subgroup,
    smith_diagonal,
    solve_integer_system,
)
from .numth import PrimePower, as_int_q, check_sign

PARTITION_BUDGET = 60
PARTS_BUDGET = 20

Partition = Tuple[int, ...]

_FAMILIES = {
    ("SL"): (numth.PLUS, False),
    ("SU"): (numth.MINUS, False),
    ("PSL"): (numth.PLUS, True),
    ("PSU"): (numth.MINUS, True),
}


@dataclass(frozen=True)
class GroupSpec:
    """One of SL_n(q), SU_n(q), PSL_n(q), PSU_n(q)."""

    eps: int
    n: int
    q: PrimePower
    projective: bool = False

    def __post_init__(self):
        check_sign(self.eps)
        if self.n < 2:
            raise ValueError("rank parameter n must be at least 2")

    @classmethod
    def from_family(cls, family: str, n: int, q) -> "GroupSpec":
        try:
            eps, projective = _FAMILIES[family.upper()]
        except KeyError:
            raise ValueError("unknown family %r (want SL/SU/PSL/PSU)" % (family,))
        if not isinstance(q, PrimePower):
            q = PrimePower.from_q(int(q))
        return cls(eps, n, q, projective)

    @property
    def family(self) -> str:
        base = "SL" if self.eps == numth.PLUS else "SU"
        return ("P" + base) if self.projective else base

    @property
    def p(self) -> int:
        return self.q.p

    def __str__(self):
        return "%s_%d(%d)" % (self.family, self.n, int(self.q))


def check_partition(parts: Sequence[int], n: int = None) -> Partition:
    """Canonical (non-increasing) partition tuple; validates the part sum."""
    parts = tuple(sorted((int(x) for x in parts), reverse=True))
    if not parts or any(x < 1 for x in parts):
        raise ValueError("partition parts must be positive integers")
    if n is not None and sum(parts) != n:
        raise ValueError("partition %r does not sum to %d" % (parts, n))
    return parts


def partitions(n: int) -> List[Partition]:
    """All partitions of n in reverse-lexicographic order, (n) first."""
    if n < 1 or n > PARTITION_BUDGET:
        raise ValueError("n must be in [1, %d]" % PARTITION_BUDGET)
    out: List[Partition] = []

    def descend(remaining, max_part, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, max_part), 0, -1):
            prefix.append(part)
            descend(remaining - part, part, prefix)
            prefix.pop()

    descend(n, n, [])
    return out


def weyl_centralizer_order(parts: Sequence[int]) -> int:
    """|C_{Sym_n}(sigma)| for sigma of cycle type `parts`.

    The centralizer of a permutation with m_j cycles of length j has order
    prod_j j^{m_j} m_j!.
    """
    parts = check_partition(parts)
    mult = {}
    for p in parts:
        mult[p] = mult.get(p, 0) + 1
    out = 1
    for j, m in mult.items():
        out *= j ** m * math.factorial(m)
    return out


def part_factors(parts: Sequence[int], q, eps: int) -> List[int]:
    """The cyclic orders q^{n_i} - eps^{n_i} attached to the parts."""
    q = as_int_q(q)
    check_sign(eps)
    return [numth.qpow_eps(q, k, eps) for k in parts]


def _zav_subset_gcd(q: int, signed_parts: Sequence[Tuple[int, int]]) -> int:
    """gcd of {q^k - sign_k} via the closed-form identities, pairwise."""
    state = signed_parts[0]
    for nxt in signed_parts[1:]:
        if isinstance(state, int):
            # literal 1 or 2 from a degenerate case; q^k -+ 1 is even iff q is odd
            if state == 2 and q % 2 == 0:
                state = 1
            continue
        (s_sign, s_k), (t_sign, t_k) = state, nxt
        g = math.gcd(s_k, t_k)
        if s_sign == 1 and t_sign == 1:
            state = (1, g)
        elif s_sign == -1 and t_sign == -1:
            if (s_k // g) % 2 == 1 and (t_k // g) % 2 == 1:
                state = (-1, g)
            else:
                state = math.gcd(2, q + 1)
        else:
            minus_k = s_k if s_sign == 1 else t_k
            if (minus_k // g) % 2 == 0:
                state = (-1, g)
            else:
                state = math.gcd(2, q + 1)
    if isinstance(state, int):
        return state
    sign, k = state
    return q ** k - sign


def d_sequence(parts: Sequence[int], q, eps: int, method: str = "zav") -> List[int]:
    """The gcd/lcm tower d_1, ..., d_s of a torus class.

    d_i is the lcm over all i-element subsets of the parts of the gcd of the
    corresponding q^{n_j} - eps^{n_j}.  The default path collapses each gcd by
    the closed-form identities; method="naive" evaluates the big integers
    directly.  Both must agree, which the test suite checks exhaustively.
    """
    parts = check_partition(parts)
    q = as_int_q(q)
    check_sign(eps)
    if len(parts) > PARTS_BUDGET:
        raise ValueError("more than %d parts exceeds the subset budget" % PARTS_BUDGET)
    if method not in ("zav", "naive"):
        raise ValueError("method must be 'zav' or 'naive'")
    values = part_factors(parts, q, eps)
    signed = [(eps ** k, k) for k in parts]
    out = []
    for i in range(1, len(parts) + 1):
        d_i = 1
        for subset in itertools.combinations(range(len(parts)), i):
            if method == "naive":
                g = numth.gcd_all([values[j] for j in subset])
            else:
                g = _zav_subset_gcd(q, [signed[j] for j in subset])
            d_i = math.lcm(d_i, g)
        out.append(d_i)
    return out


def _exact_div(a: int, b: int, what: str) -> int:
    if a % b != 0:
        raise ArithmeticError("%s: %d is not divisible by %d" % (what, a, b))
    return a // b


def torus_decomposition(parts: Sequence[int], q, eps: int,
                        projective: bool = False) -> AbelianInvariants:
    """Standard decomposition of the maximal torus of type `parts`.

    Non-projective: d_1 x ... x d_{s-1} x d_s/(q - eps).  The projective
    image additionally loses d = gcd(n, q - eps) worth of scalars; with
    d' = gcd(n / gcd(parts), q - eps) the s > 1 shape is
    d_1 x ... x d_{s-2} x d_{s-1}/d' x d' d_s / (d (q - eps)).
    """
    parts = check_partition(parts)
    q = as_int_q(q)
    check_sign(eps)
    n = sum(parts)
    s = len(parts)
    seq = d_sequence(parts, q, eps)
    q_eps = q - eps
    if not projective:
        orders = list(seq[:-1]) + [_exact_div(seq[-1], q_eps, "torus order")]
        return AbelianInvariants.from_cyclic(orders)
    d = math.gcd(n, q_eps)
    if s == 1:
        return AbelianInvariants.from_cyclic(
            [_exact_div(seq[0], d * q_eps, "projective torus order")])
    d_prime = math.gcd(n // numth.gcd_all(parts), q_eps)
    orders = list(seq[: s - 2])
    orders.append(_exact_div(seq[s - 2], d_prime, "projective middle factor"))
    orders.append(_exact_div(d_prime * seq[s - 1], d * q_eps, "projective last factor"))
    return AbelianInvariants.from_cyclic(orders)


def torus_order(parts: Sequence[int], q, eps: int, projective: bool = False) -> int:
    """prod (q^{n_i} - eps^{n_i}) / (q - eps), over d = gcd(n, q-eps) if projective."""
    parts = check_partition(parts)
    q = as_int_q(q)
    check_sign(eps)
    order = _exact_div(math.prod(part_factors(parts, q, eps)), q - eps, "torus order")
    if projective:
        order = _exact_div(order, math.gcd(sum(parts), q - eps), "projective order")
    return order


def _lattice_data(parts: Partition, q: int, eps: int):
    moduli = part_factors(parts, q, eps)
    L = numth.lcm_all(moduli)
    coeffs = []
    for k, m in zip(parts, moduli):
        # determinant exponent of a block: 1 + eps q + ... + (eps q)^{k-1}
        c = ((eps * q) ** k - 1) // (eps * q - 1)
        coeffs.append(c % m)
    return moduli, coeffs, L


def torus_lattice_oracle(parts: Sequence[int], q, eps: int,
                         projective: bool = False) -> AbelianInvariants:
    """Torus structure from the diagonal lattice model, independently.

    Models the torus as the kernel of the determinant character on
    prod Z_{m_i} with m_i = q^{n_i} - eps^{n_i}; the projective case then
    quotients by the scalar tuples.  Shares no formulas with
    torus_decomposition beyond the m_i themselves.
    """
    parts = check_partition(parts)
    q = as_int_q(q)
    check_sign(eps)
    if len(parts) > PARTS_BUDGET:
        raise ValueError("more than %d parts exceeds the subset budget" % PARTS_BUDGET)
    moduli, coeffs, L = _lattice_data(parts, q, eps)
    presentation, basis = character_kernel_presentation(moduli, coeffs, L)
    if not projective:
        return smith_diagonal(presentation)
    n = sum(parts)
    q_eps = q - eps
    d = math.gcd(n, q_eps)
    t0 = q_eps // d  # generator index of {mu : mu^{q-eps} = mu^n = 1}
    scalar = [(t0 * (m // q_eps)) % m for m in moduli]
    coords = solve_integer_system(basis, scalar)
    return quotient_by_subgroup(presentation, [coords])


@dataclass(frozen=True)
class TorusReport:
    """Everything the CLI prints about one torus class."""

    partition: Partition
    d_seq: Tuple[int, ...]
    decomposition: AbelianInvariants
    order: int
    weyl_order: int
    conjugate_count: Fraction


def conjugate_count(spec: GroupSpec, parts: Sequence[int]) -> Fraction:
    """|G| / (|T| |W(T)|), the torus conjugate count when T holds a regular
    element; returned as an exact rational so degenerate cases stay visible
    instead of crashing an integrality assert."""
    parts = check_partition(parts, spec.n)
    order = torus_order(parts, spec.q, spec.eps, spec.projective)
    return Fraction(numth.group_order(spec), order * weyl_centralizer_order(parts))


def torus_report(spec: GroupSpec, parts: Sequence[int]) -> TorusReport:
    parts = check_partition(parts, spec.n)
    decomposition = torus_decomposition(parts, spec.q, spec.eps, spec.projective)
    return TorusReport(
        partition=parts,
        d_seq=tuple(d_sequence(parts, spec.q, spec.eps)),
        decomposition=decomposition,
        order=decomposition.order,
        weyl_order=weyl_centralizer_order(parts),
        conjugate_count=conjugate_count(spec, parts),
    )
