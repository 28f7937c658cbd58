"""Finite abelian groups as invariant-factor chains.

A group is recorded by its standard decomposition d_1 x ... x d_k with each
d_i dividing d_{i+1}; the trivial group is the empty chain.  Integer relation
presentations are reduced by Smith normal form over Z with exact big-integer
arithmetic, which also powers the lattice-model oracle used to cross-check
the torus decomposition formulas.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import BudgetExceeded, NotFinite

ENUM_BUDGET = 10 ** 6


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d_1 | d_2 | ... | d_k, all > 1 (empty = trivial)."""

    factors: Tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise ValueError("not a divisibility chain: %r" % (self.factors,))
        if any(f < 2 for f in self.factors):
            raise ValueError("factors must exceed 1 after normalization")

    @classmethod
    def from_cyclic(cls, orders) -> "AbelianInvariants":
        """Canonicalize an arbitrary product of cyclic groups.

        Uses the gcd/lcm exchange Z_a x Z_b = Z_{(a,b)} x Z_{[a,b]} until the
        multiset is a divisibility chain; no factorization needed, so the
        orders may be astronomically large.
        """
        factors = [int(o) for o in orders]
        if any(f < 1 for f in factors):
            raise ValueError("cyclic orders must be positive")
        factors = [f for f in factors if f > 1]
        changed = True
        while changed:
            changed = False
            for i in range(len(factors)):
                for j in range(i + 1, len(factors)):
                    a, b = factors[i], factors[j]
                    g = math.gcd(a, b)
                    if a % b != 0 and b % a != 0 or factors[i] > factors[j]:
                        factors[i], factors[j] = g, a * b // g
                        if (g, a * b // g) != (a, b):
                            changed = True
            factors = [f for f in factors if f > 1]
        return cls(tuple(sorted(factors)))

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def __str__(self):
        if not self.factors:
            return "1"
        return " x ".join(str(f) for f in self.factors)


TRIVIAL = AbelianInvariants(())


@dataclass(frozen=True)
class IntegerRelationPresentation:
    """Z^g modulo the lattice spanned by the relation rows."""

    generators: int
    relations: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for row in self.relations:
            if len(row) != self.generators:
                raise ValueError("relation length does not match generator count")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], generators: int = None):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        if generators is None:
            if not rows:
                raise ValueError("generator count required for empty relation list")
            generators = len(rows[0])
        return cls(generators, rows)


def _smith_diagonal_entries(rows: List[List[int]], cols: int) -> List[int]:
    """Diagonal of the Smith normal form of an integer matrix.

    Pivots on the smallest nonzero entry, clears its row and column, and
    recurses; afterwards the diagonal is massaged into a divisibility chain
    with gcd/lcm exchanges.  Exact over Python ints.
    """
    m = [list(r) for r in rows]
    diag = []
    top = 0
    active_rows = len(m)
    while top < cols:
        pivot = None
        for i in range(top, active_rows):
            for j in range(top, cols):
                v = m[i][j]
                if v != 0 and (pivot is None or abs(v) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        m[top], m[pi] = m[pi], m[top]
        for r in m:
            r[top], r[pj] = r[pj], r[top]
        done = False
        while not done:
            done = True
            p = m[top][top]
            for i in range(top + 1, active_rows):
                if m[i][top] != 0:
                    k = m[i][top] // p
                    for j in range(top, cols):
                        m[i][j] -= k * m[top][j]
                    if m[i][top] != 0:
                        m[top], m[i] = m[i], m[top]
                        done = False
                        break
            if not done:
                continue
            for j in range(top + 1, cols):
                if m[top][j] != 0:
                    k = m[top][j] // p
                    for r in m:
                        r[j] -= k * r[top]
                    if m[top][j] != 0:
                        for r in m:
                            r[top], r[j] = r[j], r[top]
                        done = False
                        break
        diag.append(abs(m[top][top]))
        top += 1
    diag += [0] * (cols - len(diag))
    # enforce d_i | d_{i+1}; gcd/lcm exchange preserves the quotient group
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            if a and b:
                g = math.gcd(a, b)
                diag[i], diag[j] = g, a * b // g
            elif b and not a:
                diag[i], diag[j] = b, a
    return diag


def smith_diagonal(relations: IntegerRelationPresentation) -> AbelianInvariants:
    """Invariant factors of Z^g / (relation lattice); errors if infinite."""
    diag = _smith_diagonal_entries(
        [list(r) for r in relations.relations], relations.generators
    )
    if any(d == 0 for d in diag):
        raise NotFinite("relation lattice has rank below the generator count")
    return AbelianInvariants.from_cyclic(diag)


def power_image(A: AbelianInvariants, M: int) -> AbelianInvariants:
    """Standard decomposition of {x^M : x in A}: d_i goes to d_i/(M, d_i)."""
    if M < 1:
        raise ValueError("exponent must be positive")
    return AbelianInvariants.from_cyclic(d // math.gcd(M, d) for d in A)


def enumerate_power_image_size(A: AbelianInvariants, M: int,
                               budget: int = ENUM_BUDGET) -> int:
    """Count distinct M-th powers by walking every element. Test oracle."""
    if M < 1:
        raise ValueError("exponent must be positive")
    if A.order > budget:
        raise BudgetExceeded("group order %d exceeds budget %d" % (A.order, budget))
    factors = A.factors
    seen = set()
    for elt in itertools.product(*(range(d) for d in factors)):
        seen.add(tuple((M * a) % d for a, d in zip(elt, factors)))
    return len(seen)


def integer_kernel(rows: Sequence[Sequence[int]], cols: int) -> List[List[int]]:
    """Basis of {x in Z^cols : rows @ x = 0}, by unimodular column reduction."""
    m = [list(r) for r in rows]
    u = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    fixed = 0

    def combine(j_dst, j_src, k):
        for r in m:
            r[j_dst] -= k * r[j_src]
        for r in u:
            r[j_dst] -= k * r[j_src]

    def swap(j1, j2):
        for r in m:
            r[j1], r[j2] = r[j2], r[j1]
        for r in u:
            r[j1], r[j2] = r[j2], r[j1]

    for row_idx in range(len(m)):
        while True:
            j_piv = None
            for j in range(fixed, cols):
                v = m[row_idx][j]
                if v != 0 and (j_piv is None or abs(v) < abs(m[row_idx][j_piv])):
                    j_piv = j
            if j_piv is None:
                break
            p = m[row_idx][j_piv]
            others = [j for j in range(fixed, cols)
                      if j != j_piv and m[row_idx][j] != 0]
            if not others:
                swap(fixed, j_piv)
                fixed += 1
                break
            for j in others:
                combine(j, j_piv, m[row_idx][j] // p)
    return [[u[i][j] for i in range(cols)] for j in range(fixed, cols)]


def solve_integer_system(basis: Sequence[Sequence[int]], target: Sequence[int]) -> List[int]:
    """Integer coordinates of `target` in `basis` (vectors spanning a lattice).

    Solves by exact fraction elimination and checks integrality; raises if the
    target is outside the spanned lattice.
    """
    n = len(target)
    k = len(basis)
    aug = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(target[i])]
           for i in range(n)]
    row = 0
    piv_cols = []
    for col in range(k):
        piv = next((r for r in range(row, n) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(n):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        piv_cols.append(col)
        row += 1
        if row == n:
            break
    for r in range(row, n):
        if aug[r][k] != 0:
            raise ValueError("target not in the lattice span")
    coords = [Fraction(0)] * k
    for r, col in enumerate(piv_cols):
        coords[col] = aug[r][k]
    out = []
    for v in coords:
        if v.denominator != 1:
            raise ValueError("target not an integer combination of the basis")
        out.append(int(v))
    return out


def character_kernel_presentation(moduli: Sequence[int], coefficients: Sequence[int],
                                  L: int):
    """Presentation of ker(prod Z_m_i -> Z_L), plus the kernel lattice basis.

    The character sends (a_1, ..., a_s) to sum a_i e_i (L/m_i) mod L. The
    kernel is Lambda_1 / Lambda_0 where Lambda_1 is the weight-orthogonal
    lattice and Lambda_0 = diag(m_i) Z^s; relations are Lambda_0's generators
    written in a basis of Lambda_1.  The basis is returned so callers can
    express further subgroup generators (e.g. the scalar tuple) in the same
    coordinates.
    """
    moduli = [int(m) for m in moduli]
    coefficients = [int(c) for c in coefficients]
    if len(moduli) != len(coefficients):
        raise ValueError("moduli and coefficients must align")
    if L < 1:
        raise ValueError("L must be positive")
    if any(m < 1 for m in moduli):
        raise ValueError("moduli must be positive")
    if any(L % m != 0 for m in moduli):
        raise ValueError("L is not a common multiple of the moduli")
    s = len(moduli)
    weights = [(e * (L // m)) % L for e, m in zip(coefficients, moduli)]
    basis = integer_kernel([weights + [L]], s + 1)
    basis = [vec[:s] for vec in basis]
    if len(basis) != s:
        raise AssertionError("kernel lattice has unexpected rank")
    rows = []
    for i, m in enumerate(moduli):
        target = [m if j == i else 0 for j in range(s)]
        rows.append(tuple(solve_integer_system(basis, target)))
    return IntegerRelationPresentation(s, tuple(rows)), basis


def kernel_of_character(moduli: Sequence[int], coefficients: Sequence[int],
                        L: int) -> AbelianInvariants:
    """Invariant factors of the kernel of the weighted character mod L."""
    presentation, _ = character_kernel_presentation(moduli, coefficients, L)
    return smith_diagonal(presentation)


def quotient_by_subgroup(relations: IntegerRelationPresentation,
                         subgroup_generators: Sequence[Sequence[int]]) -> AbelianInvariants:
    """Quotient of a presented group by the subgroup the vectors generate."""
    rows = list(relations.relations)
    for gen in subgroup_generators:
        gen = tuple(int(x) for x in gen)
        if len(gen) != relations.generators:
            raise ValueError("subgroup generator length mismatch")
        rows.append(gen)
    return smith_diagonal(IntegerRelationPresentation(relations.generators, tuple(rows)))
