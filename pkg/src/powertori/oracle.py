"""Ground truth by exhaustion: tiny matrix groups over finite fields.

Enumerates SL_n(q), SU_n(q) and their central quotients within an explicit
element budget, classifies every element (order, semisimplicity, regularity,
characteristic polynomial shape), extracts maximal tori as brute-force
centralizers of regular semisimple elements, and counts word-map images
exactly.  Nothing in here trusts the torus formulas it is used to check.

Matrices are tuples of tuples of field codes (see ffield).  The centralizer
scans are the one hot spot, so each group keeps a digit-unpacked numpy copy
of its element list and runs the commutation tests batched.

Conventions that the formulas do not fix:

* SU lives on the identity Gram matrix, conj(A).T @ A = I with entrywise
  conjugation x -> x^q.
* Projective elements are the lexicographically least matrix of the scalar
  coset; their order/semisimplicity refer to the quotient group.
* A projective element counts as regular semisimple only if, additionally,
  no nontrivial central scalar mu fixes the characteristic polynomial under
  x -> mu x.  Without this, coset-twisted matrices (x g x^{-1} = mu g)
  centralize the element in the quotient and the centralizer exceeds the
  torus image.
* The partition of an SU element pairs the irreducible factors of its
  characteristic polynomial over F_{q^2} under r -> r^{-q}; a self-paired
  factor of degree d is a part d, a swapped pair of degree d is a part 2d.
  A missing partner raises instead of being papered over.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from . import numth
from .errors import BudgetExceeded
from .ffield import (
    FiniteField,
    fpoly_conj_reciprocal,
    fpoly_derivative,
    fpoly_factor,
    fpoly_gcd,
)

Matrix = Tuple[Tuple[int, ...], ...]
Partition = Tuple[int, ...]

BUDGET_ENV = "POWERTORI_MAX_GROUP_ORDER"
ORDER_CAP = 10 ** 5  # sanity cap for single-element order walks


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, str(10 ** 6)))


@dataclass(frozen=True)
class ElementClass:
    order: int
    is_semisimple: bool
    is_regular_semisimple: bool
    char_poly_factor_degrees: Tuple[int, ...]


class _Group:
    """Fully enumerated matrix group with classification caches."""

    def __init__(self, spec):
        self.spec = spec
        self.n = spec.n
        self.eps = spec.eps
        self.projective = spec.projective
        self.base_q = int(spec.q)
        self.p = spec.q.p
        if spec.eps == numth.MINUS:
            self.field = FiniteField(spec.q.p, 2 * spec.q.e)
            self._conj = self.field.conj_table(self.base_q)
        else:
            self.field = FiniteField(spec.q.p, spec.q.e)
            self._conj = None
        self.identity = tuple(
            tuple(1 if i == j else 0 for j in range(self.n)) for i in range(self.n)
        )
        self.scalars = self._central_scalars()
        self.elements = self._enumerate()
        self.index = {g: i for i, g in enumerate(self.elements)}
        self._pack_elements()
        self._class_cache: List[Optional[ElementClass]] = [None] * len(self.elements)
        self._charpoly_cache: List[Optional[Tuple[int, ...]]] = [None] * len(self.elements)
        self._factor_cache: Dict[Tuple[int, ...], list] = {}
        self._image_cache: Dict[int, Set[int]] = {}
        self._torus_invariants_cache: Dict[frozenset, tuple] = {}
        self._orders: Optional[np.ndarray] = None
        self._survey = None

    # --- scalar field/matrix helpers --------------------------------------

    def _central_scalars(self) -> List[int]:
        f = self.field
        out = []
        for mu in range(1, f.q):
            if f.pow(mu, self.n) != 1:
                continue
            if f.pow(mu, self.base_q - self.eps) != 1:
                continue
            out.append(mu)
        return sorted(out)

    def mat_mul_raw(self, a: Matrix, b: Matrix) -> Matrix:
        f = self.field
        n = self.n
        return tuple(
            tuple(
                _dot(f, a[i], tuple(b[k][j] for k in range(n)))
                for j in range(n)
            )
            for i in range(n)
        )

    def mul(self, a: Matrix, b: Matrix) -> Matrix:
        out = self.mat_mul_raw(a, b)
        return self.canonical(out) if self.projective else out

    def scalar_mul(self, mu: int, a: Matrix) -> Matrix:
        f = self.field
        return tuple(tuple(f.mul(mu, x) for x in row) for row in a)

    def canonical(self, a: Matrix) -> Matrix:
        if not self.projective or len(self.scalars) == 1:
            return a
        return min(self.scalar_mul(mu, a) for mu in self.scalars)

    def det(self, a: Matrix) -> int:
        return _det(self.field, [list(r) for r in a])

    def conj_transpose(self, a: Matrix) -> Matrix:
        c = self._conj
        n = self.n
        return tuple(tuple(c[a[j][i]] for j in range(n)) for i in range(n))

    def mat_pow(self, a: Matrix, m: int) -> Matrix:
        out = self.identity
        base = a
        while m:
            if m & 1:
                out = self.mat_mul_raw(out, base)
            base = self.mat_mul_raw(base, base)
            m >>= 1
        return self.canonical(out) if self.projective else out

    # --- enumeration -------------------------------------------------------

    def _enumerate(self) -> List[Matrix]:
        f = self.field
        n = self.n
        unitary = self.eps == numth.MINUS
        out = []
        for flat in itertools.product(range(f.q), repeat=n * n):
            m = tuple(tuple(flat[i * n + j] for j in range(n)) for i in range(n))
            if unitary and not self._is_unitary(m):
                continue
            if self.det(m) != 1:
                continue
            if self.projective and m != self.canonical(m):
                continue
            out.append(m)
        return out

    def _is_unitary(self, a: Matrix) -> bool:
        f = self.field
        c = self._conj
        n = self.n
        for i in range(n):
            for j in range(i, n):
                want = 1 if i == j else 0
                acc = 0
                for k in range(n):
                    acc = f.add(acc, f.mul(c[a[k][i]], a[k][j]))
                if acc != want:
                    return False
        return True

    # --- batched centralizer machinery --------------------------------------
    #
    # Field elements are packed into one int64 as base-B digit strings of
    # their coefficient vectors, with B large enough that an n-term sum of
    # products never carries between digits.  Then np.matmul on the packed
    # matrices IS polynomial matrix multiplication, and a digitwise pass
    # reduces the degree-(2e-2) result modulo the field modulus.

    def _pack_elements(self):
        f = self.field
        e = f.e
        conv_max = self.n * e * (f.p - 1) ** 2
        shift = max(conv_max + 1, 2).bit_length()
        if (2 * e - 1) * shift > 62:
            raise BudgetExceeded("field too large to pack into int64 batches")
        self._shift = shift
        self._mask = (1 << shift) - 1
        red = []
        rep = [1] + [0] * (e - 1)
        for _ in range(2 * e - 1):
            red.append(list(rep))
            rep = _shift_mod(rep, f.modulus, f.p)
        self._red = red
        self._enc_table = np.array(
            [self._encode_code(c) for c in range(f.q)], dtype=np.int64)
        codes = np.array(self.elements, dtype=np.int64)
        self._enc = self._enc_table[codes]  # (N, n, n)
        # exact float64 copies so the hot scans can ride BLAS; all packed
        # values stay below 2^52, rechecked here
        if (2 * e - 1) * shift <= 52:
            n_el, n = len(self.elements), self.n
            self._encf = self._enc.astype(np.float64)
            self._encf_rows = np.ascontiguousarray(self._encf.reshape(n_el * n, n))
            self._encf_cols = np.ascontiguousarray(
                self._encf.transpose(0, 2, 1).reshape(n_el * n, n))
        else:
            self._encf = None

    def _encode_code(self, code: int) -> int:
        out = 0
        for d, digit in enumerate(self.field.coeffs(code)):
            out |= digit << (d * self._shift)
        return out

    def _decode_code(self, value: int) -> int:
        digits = [(value >> (d * self._shift)) & self._mask
                  for d in range(self.field.e)]
        return self.field.encode(digits)

    def _reduce_raw(self, raw: np.ndarray) -> np.ndarray:
        """Reduce packed polynomial products back to canonical digit packs."""
        e = self.field.e
        p = self.p
        if e == 1:
            return raw % p
        acc = [0] * e  # per-degree accumulators, kept apart to avoid carries
        for d in range(2 * e - 1):
            digit = (raw >> (d * self._shift)) & self._mask
            for fdeg, coeff in enumerate(self._red[d]):
                if coeff:
                    acc[fdeg] = acc[fdeg] + coeff * digit
        reduced = 0
        for fdeg in range(e):
            reduced = reduced + (acc[fdeg] % p) * (1 << (fdeg * self._shift))
        return reduced

    def centralizer_indices(self, idx: int) -> Tuple[int, ...]:
        """Indices of all group elements commuting with element idx.

        Projective groups test commutation in the quotient: x g = mu (g x)
        for some central scalar mu.
        """
        n_el, n = len(self.elements), self.n
        if self._encf is not None:
            gf = self._encf[idx]
            raw_right = (self._encf_rows @ gf).reshape(n_el, n, n)
            raw_left = (self._encf_cols @ gf.T).reshape(n_el, n, n).transpose(0, 2, 1)
            xg = self._reduce_raw(raw_right.astype(np.int64))
            gx = self._reduce_raw(raw_left.astype(np.int64))
        else:
            g_enc = self._enc[idx]
            xg = self._reduce_raw(np.matmul(self._enc, g_enc))
            gx = self._reduce_raw(np.matmul(g_enc, self._enc))
        mask = (xg == gx).all(axis=(1, 2))
        if self.projective:
            for mu in self.scalars:
                if mu == 1:
                    continue
                mugx = self._reduce_raw(gx * int(self._enc_table[mu]))
                mask |= (xg == mugx).all(axis=(1, 2))
        return tuple(int(i) for i in np.nonzero(mask)[0])

    def _scalar_matrix_encodings(self) -> np.ndarray:
        """Packed scalar matrices mu I for the central scalars (mu = 1 first)."""
        n = self.n
        out = []
        for mu in self.scalars:
            mat = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                mat[i, i] = int(self._enc_table[mu])
            out.append(mat)
        return np.stack(out)

    def _compute_all_orders(self) -> np.ndarray:
        """Orders of every element at once (quotient orders when projective),
        by batched powering."""
        if self._orders is not None:
            return self._orders
        n_el = len(self.elements)
        targets = (self._scalar_matrix_encodings() if self.projective
                   else self._scalar_matrix_encodings()[:1])
        orders = np.zeros(n_el, dtype=np.int64)
        remaining = np.arange(n_el)
        acc = self._enc.copy()
        k = 1
        while remaining.size:
            done = np.zeros(remaining.size, dtype=bool)
            for t in targets:
                done |= (acc == t).all(axis=(1, 2))
            orders[remaining[done]] = k
            keep = ~done
            remaining = remaining[keep]
            acc = acc[keep]
            if remaining.size:
                acc = self._reduce_raw(np.matmul(acc, self._enc[remaining]))
                k += 1
                if k > ORDER_CAP:
                    raise BudgetExceeded("element order exceeds cap %d" % ORDER_CAP)
        self._orders = orders
        return orders

    def _batch_power(self, M: int) -> np.ndarray:
        """g^M for every element g, packed, by batched square-and-multiply."""
        n_el = len(self.elements)
        out = np.broadcast_to(self._scalar_matrix_encodings()[0],
                              (n_el, self.n, self.n)).copy()
        base = self._enc.copy()
        while M:
            if M & 1:
                out = self._reduce_raw(np.matmul(out, base))
            M >>= 1
            if M:
                base = self._reduce_raw(np.matmul(base, base))
        return out

    def _decode_matrix(self, enc_mat: np.ndarray) -> Matrix:
        f = self.field
        n = self.n
        return tuple(
            tuple(self._decode_code(int(enc_mat[i, j])) for j in range(n))
            for i in range(n)
        )

    # --- per-element classification -----------------------------------------

    def charpoly(self, idx: int) -> Tuple[int, ...]:
        """det(xI - A) as ascending monic coefficient tuple of length n+1,
        via sums of principal minors."""
        cached = self._charpoly_cache[idx]
        if cached is not None:
            return cached
        a = self.elements[idx]
        f = self.field
        n = self.n
        coeffs = [0] * n + [1]
        for k in range(1, n + 1):
            e_k = 0
            for subset in itertools.combinations(range(n), k):
                minor = [[a[i][j] for j in subset] for i in subset]
                e_k = f.add(e_k, _det(f, minor))
            if k % 2 == 1:
                e_k = f.neg(e_k)
            coeffs[n - k] = e_k
        out = tuple(coeffs)
        self._charpoly_cache[idx] = out
        return out

    def element_order(self, idx: int) -> int:
        return int(self._compute_all_orders()[idx])

    def _twist_fixed(self, poly: Tuple[int, ...]) -> bool:
        """True if some nontrivial central scalar mu satisfies
        mu^n f(x/mu) = f(x)."""
        f = self.field
        n = self.n
        for mu in self.scalars:
            if mu == 1:
                continue
            twisted = tuple(
                f.mul(poly[j], f.pow(mu, n - j)) for j in range(n + 1)
            )
            if twisted == poly:
                return True
        return False

    def _factors(self, poly: Tuple[int, ...]) -> list:
        cached = self._factor_cache.get(poly)
        if cached is None:
            cached = fpoly_factor(self.field, poly)
            self._factor_cache[poly] = cached
        return cached

    def classify(self, idx: int) -> ElementClass:
        cached = self._class_cache[idx]
        if cached is not None:
            return cached
        f = self.field
        poly = self.charpoly(idx)
        order = self.element_order(idx)
        semisimple = math.gcd(order, self.p) == 1
        deriv = fpoly_derivative(f, poly)
        squarefree = fpoly_gcd(f, poly, deriv) == (1,)
        regular = squarefree
        if regular and self.projective:
            regular = not self._twist_fixed(poly)
        degrees = tuple(
            sorted((len(g) - 1 for g in self._factors(poly)), reverse=True)
        )
        out = ElementClass(order, semisimple, regular, degrees)
        self._class_cache[idx] = out
        return out

    def partition_of(self, idx: int) -> Partition:
        """Torus-type partition of a regular semisimple element."""
        f = self.field
        factors = self._factors(self.charpoly(idx))
        if self.eps == numth.PLUS:
            return tuple(sorted((len(g) - 1 for g in factors), reverse=True))
        parts = []
        pool = list(factors)
        while pool:
            g = pool.pop(0)
            partner = fpoly_conj_reciprocal(f, g, self.base_q)
            if partner == g:
                parts.append(len(g) - 1)
            else:
                try:
                    pool.remove(partner)
                except ValueError:
                    raise AssertionError(
                        "conjugate-reciprocal partner missing for %r" % (g,))
                parts.append(2 * (len(g) - 1))
        return tuple(sorted(parts, reverse=True))

    # --- torus structure ------------------------------------------------------

    def torus_invariants(self, members: frozenset) -> tuple:
        cached = self._torus_invariants_cache.get(members)
        if cached is not None:
            return cached
        elems = [self.elements[i] for i in sorted(members)]
        for a in elems:
            for b in elems:
                if self.mul(a, b) != self.mul(b, a):
                    raise ValueError("centralizer is not abelian: not regular")
        orders = [self.element_order(self.index[g]) for g in elems]
        out = _invariants_from_orders(orders)
        self._torus_invariants_cache[members] = out
        return out

    def exponent(self) -> int:
        out = 1
        for o in self._compute_all_orders():
            out = math.lcm(out, int(o))
        return out

    def image_indices(self, M: int) -> Set[int]:
        cached = self._image_cache.get(M)
        if cached is not None:
            return cached
        powered = self._batch_power(M)
        out = set()
        for row in powered:
            h = self._decode_matrix(row)
            if self.projective:
                h = self.canonical(h)
            out.add(self.index[h])
        self._image_cache[M] = out
        return out

    def survey(self):
        """Per-element torus extraction over all regular semisimple elements.

        Returns a list of (index, partition, members) triples plus the map
        partition -> set of distinct tori, computing the brute-force
        centralizer of every regular element separately.
        """
        if self._survey is not None:
            return self._survey
        rows = []
        tori_by_partition: Dict[Partition, Set[frozenset]] = {}
        for idx in range(len(self.elements)):
            if not self.classify(idx).is_regular_semisimple:
                continue
            members = frozenset(self.centralizer_indices(idx))
            if idx not in members:
                raise AssertionError("element missing from its own centralizer")
            parts = self.partition_of(idx)
            rows.append((idx, parts, members))
            tori_by_partition.setdefault(parts, set()).add(members)
        self._survey = (rows, tori_by_partition)
        return self._survey


def _dot(f: FiniteField, row: Sequence[int], col: Sequence[int]) -> int:
    acc = 0
    for x, y in zip(row, col):
        if x and y:
            acc = f.add(acc, f.mul(x, y))
    return acc


def _det(f: FiniteField, rows: List[List[int]]) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return f.sub(f.mul(rows[0][0], rows[1][1]), f.mul(rows[0][1], rows[1][0]))
    acc = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = f.mul(rows[0][j], _det(f, minor))
        if j % 2 == 1:
            term = f.neg(term)
        acc = f.add(acc, term)
    return acc


def _shift_mod(rep: List[int], modulus: Tuple[int, ...], p: int) -> List[int]:
    """rep(x) * x mod modulus, all over F_p, fixed length e."""
    e = len(modulus) - 1
    shifted = [0] + rep[:]
    lead = shifted[e] if len(shifted) > e else 0
    shifted = shifted[:e] + [0] * max(0, e - len(shifted))
    if lead:
        for i in range(e):
            shifted[i] = (shifted[i] - lead * modulus[i]) % p
    return [c % p for c in shifted]


def _invariants_from_orders(orders: Sequence[int]) -> tuple:
    """Invariant factors of a finite abelian group from its element orders.

    Counts solutions of x^{p^j} = 1 per prime to recover the exponent
    profile; independent of the Smith-form route in `abelian`.
    """
    size = len(orders)
    if size == 1:
        return ()
    primes = []
    m = size
    fctr = 2
    while fctr * fctr <= m:
        if m % fctr == 0:
            primes.append(fctr)
            while m % fctr == 0:
                m //= fctr
        fctr += 1
    if m > 1:
        primes.append(m)
    exps_by_prime = {}
    for p in primes:
        profile = []
        prev = 1
        j = 1
        while True:
            n_j = sum(1 for o in orders if p ** j % o == 0)
            if n_j == prev:
                break
            ratio = n_j // prev
            if prev * ratio != n_j:
                raise AssertionError("order profile is not a p-group filtration")
            r_j = round(math.log(ratio, p))
            if p ** r_j != ratio:
                raise AssertionError("order count is not a power of %d" % p)
            profile.append(r_j)
            prev = n_j
            j += 1
        exps = []
        for i in range(1, (profile[0] if profile else 0) + 1):
            exps.append(sum(1 for r in profile if r >= i))
        exps_by_prime[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in exps_by_prime.values())
    factors = []
    for i in range(width):
        d = 1
        for p, exps in exps_by_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    return tuple(sorted(factors))


# --- public operations -------------------------------------------------------

_GROUP_CACHE: Dict[object, _Group] = {}


def _group(spec, budget: Optional[int] = None) -> _Group:
    cap = default_budget() if budget is None else int(budget)
    order = numth.group_order(spec)
    if order > cap:
        raise BudgetExceeded(
            "group order %d exceeds enumeration budget %d" % (order, cap))
    grp = _GROUP_CACHE.get(spec)
    if grp is None:
        grp = _Group(spec)
        if len(grp.elements) != order:
            raise AssertionError(
                "enumerated %d elements of %s, order formula says %d"
                % (len(grp.elements), spec, order))
        _GROUP_CACHE[spec] = grp
    return grp


def enumerate_group(spec, budget: Optional[int] = None) -> Iterator[Matrix]:
    """Deterministic stream of all elements (canonical coset reps when
    projective)."""
    yield from _group(spec, budget).elements


def word_image_size(spec, M: int, budget: Optional[int] = None) -> int:
    """Exact |{g^M : g in G}|."""
    if M < 1:
        raise ValueError("exponent must be positive")
    return len(_group(spec, budget).image_indices(M))


def classify_element(g: Matrix, spec, budget: Optional[int] = None) -> ElementClass:
    grp = _group(spec, budget)
    g = grp.canonical(g) if grp.projective else g
    idx = grp.index.get(g)
    if idx is None:
        raise ValueError("matrix is not an element of %s" % (spec,))
    return grp.classify(idx)


def semisimple_count(spec, budget: Optional[int] = None) -> int:
    grp = _group(spec, budget)
    return sum(
        1 for i in range(len(grp.elements)) if grp.classify(i).is_semisimple)


def torus_of_element(g: Matrix, spec, budget: Optional[int] = None):
    """(partition, AbelianInvariants) of the unique maximal torus containing
    the regular semisimple element g, extracted as its centralizer."""
    from .abelian import AbelianInvariants

    grp = _group(spec, budget)
    g = grp.canonical(g) if grp.projective else g
    idx = grp.index.get(g)
    if idx is None:
        raise ValueError("matrix is not an element of %s" % (spec,))
    if not grp.classify(idx).is_regular_semisimple:
        raise ValueError("element is not regular semisimple")
    members = frozenset(grp.centralizer_indices(idx))
    invariants = grp.torus_invariants(members)
    return grp.partition_of(idx), AbelianInvariants(invariants)


def image_regular_split(spec, M: int, budget: Optional[int] = None):
    """(partition -> regular count, non-regular count) over the image of
    x -> x^M."""
    grp = _group(spec, budget)
    census: Dict[Partition, int] = {}
    nonregular = 0
    for idx in sorted(grp.image_indices(M)):
        if grp.classify(idx).is_regular_semisimple:
            parts = grp.partition_of(idx)
            census[parts] = census.get(parts, 0) + 1
        else:
            nonregular += 1
    return census, nonregular


def regular_power_census(spec, M: int, budget: Optional[int] = None) -> Dict[Partition, int]:
    """For each partition, the number of regular semisimple M-th powers whose
    torus has that type."""
    return image_regular_split(spec, M, budget)[0]


def group_exponent(spec, budget: Optional[int] = None) -> int:
    return _group(spec, budget).exponent()


def regular_torus_report(spec, budget: Optional[int] = None):
    """Per-element torus data for every regular semisimple element.

    Returns (rows, distinct_counts): rows is a list of
    (partition, centralizer invariant factors) with one entry per regular
    semisimple element, each from its own exhaustive commutation scan;
    distinct_counts maps each partition to the number of distinct maximal
    tori observed for it.
    """
    grp = _group(spec, budget)
    rows, tori_by_partition = grp.survey()
    out = [(parts, grp.torus_invariants(members)) for _, parts, members in rows]
    counts = {parts: len(s) for parts, s in tori_by_partition.items()}
    return out, counts


def extract_torus(spec, parts, budget: Optional[int] = None) -> Optional[List[Matrix]]:
    """Element list of one maximal torus of the given type, or None when no
    regular semisimple element of that type exists (tiny-q degeneracies)."""
    grp = _group(spec, budget)
    _, tori_by_partition = grp.survey()
    parts = tuple(sorted((int(x) for x in parts), reverse=True))
    candidates = tori_by_partition.get(parts)
    if not candidates:
        return None
    members = min(candidates, key=sorted)
    return [grp.elements[i] for i in sorted(members)]


def torus_mth_power_count(spec, parts, M: int, budget: Optional[int] = None) -> Optional[int]:
    """Number of distinct M-th powers inside one brute-force-extracted torus
    of the given type; None when the type has no regular element."""
    if M < 1:
        raise ValueError("exponent must be positive")
    grp = _group(spec, budget)
    members = extract_torus(spec, parts, budget)
    if members is None:
        return None
    return len({grp.mat_pow(g, M) for g in members})
