"""The mod-2 Steenrod algebra, degree by degree.

Elements are stored in the admissible basis (words Sq^{i_1}..Sq^{i_k}
with i_j >= 2 i_{j+1}) obtained by Adem rewriting, with the Milnor basis
kept as a parallel coordinate system via conversion matrices.  The
admissible side is cheapest for left multiplication and module actions;
the Milnor side is cheapest for the indecomposable / primitive
computations, which are done against the coproduct of the dual
polynomial Hopf algebra.

A :class:`SteenrodAlgebra` instance carries every per-degree table up to
a fixed degree bound.  Tables are filled lazily; entries are computed at
most once per key and are immutable once published, so concurrent
readers either see a finished entry or recompute it idempotently.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from steenrodext.gf2 import BitMatrix, RowSpan, left_kernel, solve_many

Word = tuple[int, ...]  # exponents of an admissible (or raw) monomial
Profile = tuple[int, ...]  # Milnor profile (r_1, ..., r_k), trailing zeros trimmed

ADMISSIBLE = "admissible"
MILNOR = "milnor"


class DegreeOverflowError(ValueError):
    """Raised when an operation needs degrees beyond the table bound."""


def word_degree(word: Word) -> int:
    return sum(word)


def profile_degree(profile: Profile) -> int:
    return sum(r * ((1 << (i + 1)) - 1) for i, r in enumerate(profile))


def is_admissible(word: Word) -> bool:
    return all(word[i] >= 2 * word[i + 1] for i in range(len(word) - 1))


def trim_profile(profile: Sequence[int]) -> Profile:
    out = list(profile)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _odd_binomial(n: int, k: int) -> bool:
    """C(n, k) mod 2 via the carry criterion."""
    if k < 0 or k > n:
        return False
    return (k & (n - k)) == 0


def adem_expand(i: int, j: int) -> list[Word]:
    """Words of the Adem expansion of the inadmissible pair Sq^i Sq^j (i < 2j)."""
    out = []
    for k in range(i // 2 + 1):
        if _odd_binomial(j - k - 1, i - 2 * k):
            out.append((i + j - k,) if k == 0 else (i + j - k, k))
    return out


@dataclass(frozen=True)
class AlgebraElement:
    """Homogeneous element in admissible or Milnor coordinates.

    ``bits`` is a bit vector over the fixed basis list of the element's
    degree in the tagged basis.
    """

    degree: int
    basis: str
    bits: int

    def is_zero(self) -> bool:
        return self.bits == 0

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if (self.degree, self.basis) != (other.degree, other.basis):
            raise ValueError("can only add elements of equal degree and basis")
        return AlgebraElement(self.degree, self.basis, self.bits ^ other.bits)


def _multinomial_odd(parts: Sequence[int]) -> bool:
    """Multinomial coefficient mod 2: odd iff the binary digits are disjoint."""
    acc = 0
    for p in parts:
        if acc & p:
            return False
        acc |= p
    return True


def milnor_multiply_profiles(r: Profile, s: Profile) -> frozenset[Profile]:
    """Product of two Milnor basis elements as a mod-2 set of profiles.

    Sums over the integer matrices (x_ij) with 2-adically weighted row
    sums r_i and column sums s_j; each matrix contributes its diagonal
    sums when all diagonal multinomials are odd.
    """
    m, n = len(r), len(s)
    if m == 0:
        return frozenset({s})
    if n == 0:
        return frozenset({r})
    out: set[Profile] = set()
    x = [[0] * (n + 1) for _ in range(m + 1)]

    def finish() -> None:
        for j in range(1, n + 1):
            x[0][j] = s[j - 1] - sum(x[i][j] for i in range(1, m + 1))
            if x[0][j] < 0:
                return
        t = []
        for d in range(1, m + n + 1):
            entries = [x[i][d - i] for i in range(max(0, d - n), min(m, d) + 1)]
            if not _multinomial_odd(entries):
                return
            t.append(sum(entries))
        prof = trim_profile(t)
        if prof in out:
            out.discard(prof)
        else:
            out.add(prof)

    cells = [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]

    def rec(idx: int, row_rem: list[int]) -> None:
        if idx == len(cells):
            for i in range(1, m + 1):
                x[i][0] = row_rem[i]
            finish()
            return
        i, j = cells[idx]
        col_used = sum(x[ii][j] for ii in range(1, i))
        max_v = min(row_rem[i] >> j, s[j - 1] - col_used)
        for v in range(max_v + 1):
            x[i][j] = v
            row_rem[i] -= v << j
            rec(idx + 1, row_rem)
            row_rem[i] += v << j
        x[i][j] = 0

    rec(0, [0] + list(r))
    return frozenset(out)


def _profiles_of_degree(d: int) -> list[Profile]:
    """All Milnor profiles of total degree d, sorted."""
    xi_degrees = []
    k = 1
    while (1 << k) - 1 <= d:
        xi_degrees.append((1 << k) - 1)
        k += 1
    out: list[Profile] = []

    def rec(pos: int, remaining: int, acc: list[int]) -> None:
        if pos == len(xi_degrees):
            if remaining == 0:
                out.append(trim_profile(acc))
            return
        step = xi_degrees[pos]
        for r in range(remaining // step + 1):
            rec(pos + 1, remaining - r * step, acc + [r])

    if d == 0:
        return [()]
    rec(0, d, [])
    return sorted(out)


def _admissible_words_of_degree(d: int) -> list[Word]:
    """All admissible words of total degree d, sorted."""
    if d == 0:
        return [()]

    @lru_cache(maxsize=None)
    def gen(deg: int, max_first: int) -> tuple[Word, ...]:
        # admissible words of degree deg whose first exponent is <= max_first
        if deg == 0:
            return ((),)
        acc = []
        for a in range(1, min(deg, max_first) + 1):
            for w in gen(deg - a, a // 2):
                acc.append((a,) + w)
        return tuple(acc)

    return sorted(gen(d, d))


# reduced coproduct of the dual Hopf algebra, used for primitives

def _coproduct_xi_power(n: int, e: int) -> list[tuple[Profile, Profile]]:
    """Terms of the coproduct of xi_n raised to the 2^e (Frobenius) power."""
    terms = []
    for j in range(n + 1):
        left = [0] * n
        if n - j >= 1:
            left[n - j - 1] = 1 << (j + e)
        right = [0] * n
        if j >= 1:
            right[j - 1] = 1 << e
        terms.append((trim_profile(left), trim_profile(right)))
    return terms


def _profile_mult(a: Profile, b: Profile) -> Profile:
    out = [0] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return trim_profile(out)


def _coproduct_monomial(profile: Profile) -> set[tuple[Profile, Profile]]:
    """Full coproduct of a monomial in the xi generators, mod 2."""
    terms: dict[tuple[Profile, Profile], int] = {((), ()): 1}
    for n, a in enumerate(profile, start=1):
        e = 0
        while a:
            if a & 1:
                factor = _coproduct_xi_power(n, e)
                new: dict[tuple[Profile, Profile], int] = {}
                for (l1, r1), c in terms.items():
                    if not (c & 1):
                        continue
                    for l2, r2 in factor:
                        key = (_profile_mult(l1, l2), _profile_mult(r1, r2))
                        new[key] = new.get(key, 0) ^ 1
                terms = new
            a >>= 1
            e += 1
    return {k for k, c in terms.items() if c & 1}


class SteenrodAlgebra:
    """Per-degree tables for the mod-2 Steenrod algebra up to a bound.

    The stored basis is admissible; Milnor coordinates are reached
    through per-degree conversion matrices.  Module actions elsewhere in
    the package are driven by the generators Sq^{2^k}, with arbitrary
    squares decomposed into generator words on demand.
    """

    def __init__(self, max_degree: int):
        if max_degree < 1:
            raise ValueError("max_degree must be positive")
        self.max_degree = max_degree
        self._admissible: dict[int, tuple[Word, ...]] = {}
        self._adm_index: dict[int, dict[Word, int]] = {}
        self._milnor: dict[int, tuple[Profile, ...]] = {}
        self._mil_index: dict[int, dict[Profile, int]] = {}
        self._reduce_memo: dict[str, dict[Word, frozenset[Word]]] = {
            "leftmost": {},
            "rightmost": {},
        }
        self._leftmul_single: dict[tuple[int, int], BitMatrix] = {}
        self._conversion: dict[int, tuple[BitMatrix, BitMatrix]] = {}
        self._chi_single: dict[int, int] = {}
        self._primitives: dict[int, BitMatrix] = {}
        self._decompose: dict[int, list[list[tuple[int, AlgebraElement]]]] = {}
        self._decomposable_span: dict[int, tuple[RowSpan, list[tuple[Word, Word]], list[int]]] = {}

    # bookkeeping

    def _check_degree(self, d: int) -> None:
        if d > self.max_degree:
            raise DegreeOverflowError(
                f"degree {d} exceeds the table bound {self.max_degree}"
            )
        if d < 0:
            raise ValueError("negative degree")

    def generator_exponents(self) -> list[int]:
        """The algebra generators Sq^{2^k} within the table bound."""
        out = []
        k = 0
        while (1 << k) <= self.max_degree:
            out.append(1 << k)
            k += 1
        return out

    # bases

    def admissible_basis(self, d: int) -> tuple[Word, ...]:
        self._check_degree(d)
        basis = self._admissible.get(d)
        if basis is None:
            basis = tuple(_admissible_words_of_degree(d))
            self._admissible[d] = basis
            self._adm_index[d] = {w: i for i, w in enumerate(basis)}
        return basis

    def milnor_basis(self, d: int) -> tuple[Profile, ...]:
        self._check_degree(d)
        basis = self._milnor.get(d)
        if basis is None:
            basis = tuple(_profiles_of_degree(d))
            self._milnor[d] = basis
            self._mil_index[d] = {p: i for i, p in enumerate(basis)}
        return basis

    def basis_dim(self, d: int) -> int:
        """Dimension of the degree-d piece (equal in both bases)."""
        return len(self.milnor_basis(d))

    def zero(self, d: int, basis: str = ADMISSIBLE) -> AlgebraElement:
        return AlgebraElement(d, basis, 0)

    def unit(self, basis: str = ADMISSIBLE) -> AlgebraElement:
        return AlgebraElement(0, basis, 1)

    def from_words(self, words: Sequence[Word]) -> AlgebraElement:
        """Admissible element from a mod-2 collection of admissible words."""
        if not words:
            raise ValueError("empty word list has no degree")
        d = word_degree(words[0])
        idx = self._adm_index_for(d)
        bits = 0
        for w in words:
            if word_degree(w) != d:
                raise ValueError("inhomogeneous word list")
            bits ^= 1 << idx[w]
        return AlgebraElement(d, ADMISSIBLE, bits)

    def from_profile(self, profile: Sequence[int]) -> AlgebraElement:
        prof = trim_profile(profile)
        d = profile_degree(prof)
        idx = self._mil_index_for(d)
        return AlgebraElement(d, MILNOR, 1 << idx[prof])

    def sq(self, n: int) -> AlgebraElement:
        """The single square Sq^n in the admissible basis."""
        if n == 0:
            return self.unit()
        return self.from_words([(n,)])

    def _adm_index_for(self, d: int) -> dict[Word, int]:
        self.admissible_basis(d)
        return self._adm_index[d]

    def _mil_index_for(self, d: int) -> dict[Profile, int]:
        self.milnor_basis(d)
        return self._mil_index[d]

    def words_of(self, e: AlgebraElement) -> list[Word]:
        if e.basis != ADMISSIBLE:
            raise ValueError("words_of needs admissible coordinates")
        basis = self.admissible_basis(e.degree)
        return [basis[i] for i in range(len(basis)) if (e.bits >> i) & 1]

    def profiles_of(self, e: AlgebraElement) -> list[Profile]:
        if e.basis != MILNOR:
            raise ValueError("profiles_of needs Milnor coordinates")
        basis = self.milnor_basis(e.degree)
        return [basis[i] for i in range(len(basis)) if (e.bits >> i) & 1]

    # Adem rewriting

    def adem_reduce(self, word: Sequence[int], strategy: str = "leftmost") -> AlgebraElement:
        """Rewrite an arbitrary word of squares into the admissible basis.

        ``strategy`` picks which inadmissible adjacent pair is rewritten
        first; any strategy yields the same admissible normal form.
        """
        w = tuple(word)
        if not w:
            return self.unit()
        if any(a <= 0 for a in w):
            raise ValueError("word exponents must be positive")
        d = word_degree(w)
        self._check_degree(d)
        idx = self._adm_index_for(d)
        bits = 0
        for aw in self._reduce_word(w, strategy):
            bits ^= 1 << idx[aw]
        return AlgebraElement(d, ADMISSIBLE, bits)

    def _reduce_word(self, word: Word, strategy: str) -> frozenset[Word]:
        memo = self._reduce_memo[strategy]
        cached = memo.get(word)
        if cached is not None:
            return cached
        pos = -1
        indices = range(len(word) - 1)
        if strategy == "rightmost":
            indices = reversed(indices)
        for i in indices:
            if word[i] < 2 * word[i + 1]:
                pos = i
                break
        if pos < 0:
            result = frozenset({word})
        else:
            acc: set[Word] = set()
            for mid in adem_expand(word[pos], word[pos + 1]):
                sub = word[:pos] + mid + word[pos + 2 :]
                acc ^= self._reduce_word(sub, strategy)
            result = frozenset(acc)
        memo[word] = result
        return result

    # multiplication in the admissible basis

    def left_mul_single(self, a: int, d: int) -> BitMatrix:
        """Matrix of left multiplication by Sq^a from degree d to d+a."""
        self._check_degree(d + a)
        key = (a, d)
        cached = self._leftmul_single.get(key)
        if cached is not None:
            return cached
        src = self.admissible_basis(d)
        tgt_dim = len(self.admissible_basis(d + a))
        cols = []
        for w in src:
            cols.append(self.adem_reduce((a,) + w).bits)
        mat = BitMatrix.from_columns(cols, tgt_dim)
        self._leftmul_single[key] = mat
        return mat

    def left_mul_word(self, word: Word, d: int) -> BitMatrix:
        """Matrix of left multiplication by a word of squares from degree d."""
        if not word:
            return BitMatrix.identity(len(self.admissible_basis(d)))
        mat = self.left_mul_single(word[-1], d)
        deg = d + word[-1]
        for a in reversed(word[:-1]):
            mat = self.left_mul_single(a, deg).matmul(mat)
            deg += a
        return mat

    def multiply(self, e1: AlgebraElement, e2: AlgebraElement) -> AlgebraElement:
        """Product of two admissible-basis elements."""
        if e1.basis != ADMISSIBLE or e2.basis != ADMISSIBLE:
            raise ValueError("multiply works in the admissible basis")
        d = e1.degree + e2.degree
        self._check_degree(d)
        bits = 0
        for w in self.words_of(e1):
            bits ^= self.left_mul_word(w, e2.degree).mul_vec(e2.bits)
        return AlgebraElement(d, ADMISSIBLE, bits)

    # Milnor side

    def milnor_product(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        """Product of two Milnor-basis elements via the matrix-sum formula."""
        if a.basis != MILNOR or b.basis != MILNOR:
            raise ValueError("milnor_product works in the Milnor basis")
        d = a.degree + b.degree
        self._check_degree(d)
        idx = self._mil_index_for(d)
        bits = 0
        for p in self.profiles_of(a):
            for q in self.profiles_of(b):
                for prof in milnor_multiply_profiles(p, q):
                    bits ^= 1 << idx[prof]
        return AlgebraElement(d, MILNOR, bits)

    def conversion_matrices(self, d: int) -> tuple[BitMatrix, BitMatrix]:
        """(admissible -> Milnor, Milnor -> admissible) in degree d."""
        self._check_degree(d)
        cached = self._conversion.get(d)
        if cached is not None:
            return cached
        adm = self.admissible_basis(d)
        midx = self._mil_index_for(d)
        dim = len(adm)
        if dim != len(self.milnor_basis(d)):
            raise AssertionError(f"basis size mismatch in degree {d}")
        cols = []
        for w in adm:
            profs: set[Profile] = {()}
            for a in w:
                acc: set[Profile] = set()
                for p in profs:
                    acc ^= milnor_multiply_profiles(p, (a,))
                profs = acc
            bits = 0
            for p in profs:
                bits ^= 1 << midx[p]
            cols.append(bits)
        to_mil = BitMatrix.from_columns(cols, dim)
        inv_cols = solve_many(to_mil, [1 << i for i in range(dim)])
        if any(c is None for c in inv_cols):
            raise AssertionError(f"conversion matrix is singular in degree {d}")
        to_adm = BitMatrix.from_columns([c for c in inv_cols if c is not None], dim)
        self._conversion[d] = (to_mil, to_adm)
        return self._conversion[d]

    def convert(self, e: AlgebraElement, target_basis: str) -> AlgebraElement:
        """Express an element in the other basis; round trips are exact."""
        if e.basis == target_basis:
            return e
        to_mil, to_adm = self.conversion_matrices(e.degree)
        if target_basis == MILNOR:
            return AlgebraElement(e.degree, MILNOR, to_mil.mul_vec(e.bits))
        if target_basis == ADMISSIBLE:
            return AlgebraElement(e.degree, ADMISSIBLE, to_adm.mul_vec(e.bits))
        raise ValueError(f"unknown basis {target_basis!r}")

    # antipode

    def _chi_single_bits(self, n: int) -> int:
        """chi(Sq^n) in admissible coordinates of degree n."""
        cached = self._chi_single.get(n)
        if cached is not None:
            return cached
        if n == 0:
            bits = 1
        else:
            bits = 0
            for i in range(1, n + 1):
                bits ^= self.left_mul_single(i, n - i).mul_vec(self._chi_single_bits(n - i))
        self._chi_single[n] = bits
        return bits

    def antipode(self, e: AlgebraElement) -> AlgebraElement:
        """The canonical anti-automorphism chi, via its defining recursion."""
        out_basis = e.basis
        if e.basis == MILNOR:
            e = self.convert(e, ADMISSIBLE)
        bits = 0
        for w in self.words_of(e):
            acc = self.unit()
            for a in reversed(w):
                acc = self.multiply(acc, AlgebraElement(a, ADMISSIBLE, self._chi_single_bits(a)))
            bits ^= acc.bits
        out = AlgebraElement(e.degree, ADMISSIBLE, bits)
        return self.convert(out, out_basis) if out_basis == MILNOR else out

    # indecomposables and decomposability

    def primitive_basis(self, d: int) -> BitMatrix:
        """Basis of the primitives of the dual algebra in degree d.

        Rows are coordinate vectors over the degree-d monomial basis of
        the dual; their annihilator under the Milnor pairing is exactly
        the subspace of decomposable elements.
        """
        self._check_degree(d)
        cached = self._primitives.get(d)
        if cached is not None:
            return cached
        monomials = self.milnor_basis(d)
        pair_index: dict[tuple[Profile, Profile], int] = {}
        rows = []
        for prof in monomials:
            bits = 0
            for left, right in _coproduct_monomial(prof):
                if not left or not right:
                    continue
                key = (left, right)
                col = pair_index.setdefault(key, len(pair_index))
                bits ^= 1 << col
            rows.append(bits)
        width = max(len(pair_index), 1)
        prims = left_kernel(BitMatrix(tuple(rows), width))
        self._primitives[d] = prims
        return prims

    def indecomposable_dim(self, d: int) -> int:
        """Dimension of degree d of the quotient by decomposables."""
        if d == 0:
            return 0
        return self.primitive_basis(d).nrows

    def decomposable_witness_span(self, d: int) -> tuple[RowSpan, list[tuple[Word, Word]], list[int]]:
        """Span of products of two positive-degree elements in degree d.

        Returns (span over admissible coordinates, the generating pairs
        of words, and for each echelon basis row the mod-2 combination
        of pair indices that produced it).
        """
        self._check_degree(d)
        cached = self._decomposable_span.get(d)
        if cached is not None:
            return cached
        dim = len(self.admissible_basis(d))
        span = RowSpan(dim)
        pairs: list[tuple[Word, Word]] = []
        combos: dict[int, int] = {}  # pivot -> combination bits over pairs
        # products Sq^{2^k} * (positive-degree monomials) span all
        # decomposables: every product of positives rewrites with a
        # generator on the left
        for g in self.generator_exponents():
            if g >= d:
                continue
            for w in self.admissible_basis(d - g):
                if not w:
                    continue
                vec = self.adem_reduce((g,) + w).bits
                pair_idx = len(pairs)
                pairs.append(((g,), w))
                combo = 1 << pair_idx
                v = vec
                for p, row in list(span._rows.items()):
                    if (v >> p) & 1:
                        v ^= row
                        combo ^= combos[p]
                if v:
                    p = (v & -v).bit_length() - 1
                    for q, row in list(span._rows.items()):
                        if (row >> p) & 1:
                            span._rows[q] = row ^ v
                            combos[q] ^= combo
                    span._rows[p] = v
                    combos[p] = combo
        combo_list = [combos[p] for p in span.pivots()]
        self._decomposable_span[d] = (span, pairs, combo_list)
        return self._decomposable_span[d]

    def is_decomposable(self, e: AlgebraElement) -> tuple[bool, Optional[list[tuple[Word, Word]]]]:
        """Whether e is a sum of products of positive-degree elements.

        When it is, also returns a witness list of word pairs whose
        products sum to e.  Zero-degree input is rejected.
        """
        if e.degree <= 0:
            raise ValueError("decomposability concerns positive degrees")
        mil = self.convert(e, MILNOR)
        prims = self.primitive_basis(e.degree)
        for p in prims.rows:
            if (p & mil.bits).bit_count() & 1:
                return False, None
        if e.bits == 0:
            return True, []
        # build an explicit witness from the product span
        adm = self.convert(e, ADMISSIBLE)
        span, pairs, combo_list = self.decomposable_witness_span(e.degree)
        coords = span.coords(adm.bits)
        if coords is None:
            raise AssertionError(
                f"primitive pairing and product span disagree in degree {e.degree}"
            )
        combo = 0
        for k in range(len(combo_list)):
            if (coords >> k) & 1:
                combo ^= combo_list[k]
        witness = [pairs[i] for i in range(len(pairs)) if (combo >> i) & 1]
        return True, witness

    def square_decomposition_witness(self, m: int) -> list[tuple[Word, Word]]:
        """Express a non-power Sq^m as a sum of products of lower squares.

        Expands Sq^{m - 2^j} Sq^{2^j} for the largest power 2^j < m; the
        leading term of the expansion is Sq^m and the rest are admissible
        length-two words, so moving them across gives the witness.
        """
        if m & (m - 1) == 0:
            raise ValueError(f"Sq^{m} is indecomposable")
        j = m.bit_length() - 1
        g = 1 << j
        witness = [((m - g,), (g,))]
        saw_leading = False
        for w in adem_expand(m - g, g):
            if w == (m,):
                saw_leading = True
            elif len(w) == 2:
                witness.append(((w[0],), (w[1],)))
            else:
                raise AssertionError("unexpected Adem term shape")
        if not saw_leading:
            raise AssertionError(f"Adem expansion for Sq^{m} lost its leading term")
        return witness

    def indecomposables(self, d_max: int) -> list[tuple[int, int, Optional[list[tuple[Word, Word]]]]]:
        """Table of (degree, dim of the indecomposable quotient, witness).

        The witness column carries, for each degree m that is not a
        power of two, an explicit decomposition of Sq^m.
        """
        self._check_degree(d_max)
        out = []
        for d in range(1, d_max + 1):
            dim = self.indecomposable_dim(d)
            witness = None if d & (d - 1) == 0 else self.square_decomposition_witness(d)
            out.append((d, dim, witness))
        return out

    # decomposition of arbitrary squares into generator words, used by
    # module actions elsewhere

    def decompose_into_generators(self, d: int) -> list[list[tuple[int, AlgebraElement]]]:
        """For each admissible monomial of degree d >= 1, a list of
        (k, x) with the monomial equal to sum_k Sq^{2^k} * x."""
        self._check_degree(d)
        cached = self._decompose.get(d)
        if cached is not None:
            return cached
        gens = [g for g in self.generator_exponents() if g <= d]
        blocks = []
        offsets = []
        total = 0
        for g in gens:
            offsets.append(total)
            total += len(self.admissible_basis(d - g))
        dim = len(self.admissible_basis(d))
        cols = [0] * total
        for gi, g in enumerate(gens):
            mat = self.left_mul_single(g, d - g)
            for j in range(mat.cols):
                cols[offsets[gi] + j] = mat.column(j)
        stacked = BitMatrix.from_columns(cols, dim)
        sols = solve_many(stacked, [1 << i for i in range(dim)])
        out = []
        for i in range(dim):
            sol = sols[i]
            if sol is None:
                raise AssertionError(f"generators fail to span degree {d}")
            parts = []
            for gi, g in enumerate(gens):
                width = len(self.admissible_basis(d - g))
                chunk = (sol >> offsets[gi]) & ((1 << width) - 1)
                if chunk:
                    parts.append((g.bit_length() - 1, AlgebraElement(d - g, ADMISSIBLE, chunk)))
            out.append(parts)
        self._decompose[d] = out
        return out

    # formatting and dumps

    def format_element(self, e: AlgebraElement) -> str:
        if e.bits == 0:
            return "0"
        if e.basis == ADMISSIBLE:
            terms = []
            for w in self.words_of(e):
                terms.append("1" if not w else " ".join(f"Sq{a}" for a in w))
            return " + ".join(terms)
        terms = []
        for p in self.profiles_of(e):
            terms.append("Sq()" if not p else "Sq(" + ",".join(str(r) for r in p) + ")")
        return " + ".join(terms)

    def dump_tables(self, d_max: Optional[int] = None) -> dict:
        """Machine-readable degree tables: bases and generator actions."""
        if d_max is None:
            d_max = self.max_degree
        self._check_degree(d_max)
        degrees = {}
        for d in range(d_max + 1):
            entry = {
                "admissible": [list(w) for w in self.admissible_basis(d)],
                "milnor": [list(p) for p in self.milnor_basis(d)],
                "gen_action": {},
            }
            for g in self.generator_exponents():
                if d + g <= d_max:
                    mat = self.left_mul_single(g, d)
                    entry["gen_action"][str(g)] = {
                        "cols": mat.cols,
                        "rows": [format(r, "x") for r in mat.rows],
                    }
            degrees[str(d)] = entry
        return {"format": 1, "max_degree": d_max, "degrees": degrees}

    def table_fingerprint(self, d_max: int) -> str:
        """Stable hash of the basis enumeration up to d_max."""
        self._check_degree(d_max)
        payload = {
            "format": 1,
            "dims": [self.basis_dim(d) for d in range(d_max + 1)],
            "admissible": [[list(w) for w in self.admissible_basis(d)] for d in range(d_max + 1)],
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()
