"""Degreewise-finite graded left modules over the Steenrod algebra.

A module is stored as per-degree dimensions plus one action matrix per
algebra generator Sq^{2^k} per degree; the action of an arbitrary
element is composed on demand by decomposing it into generator words.
Kernels, images and cokernels of module maps are represented concretely
degreewise (with induced actions), which is all the resolution and
boundary machinery downstream ever needs.

All values are immutable after construction; computations are pure.
"""

from __future__ import annotations

from collections import Counter
from typing import Optional, Sequence

from steenrodext.gf2 import BitMatrix, RowSpan, kernel_basis, quotient_basis, row_reduce
from steenrodext.steenrod import ADMISSIBLE, AlgebraElement, SteenrodAlgebra, Word


class GradedModule:
    """A graded left module given degreewise up to a bound.

    ``actions[k][d]`` is the matrix of Sq^{2^k} from degree d to degree
    d + 2^k (target-by-source), present for every d with d + 2^k within
    the bound.  ``generators`` optionally records presentation
    generators as (degree, coordinate vector) pairs.
    """

    def __init__(
        self,
        algebra: SteenrodAlgebra,
        t_max: int,
        dims: Sequence[int],
        actions: dict[int, list[BitMatrix]],
        generators: tuple[tuple[int, int], ...] = (),
        name: str = "",
    ):
        if len(dims) != t_max + 1:
            raise ValueError("dims must cover degrees 0..t_max")
        self.algebra = algebra
        self.t_max = t_max
        self.dims = tuple(dims)
        self.actions = actions
        self.generators = generators
        self.name = name
        self._word_action: dict[tuple[Word, int], BitMatrix] = {}
        self._single_action: dict[tuple[int, int], BitMatrix] = {}
        for k, mats in actions.items():
            step = 1 << k
            if len(mats) != max(t_max - step + 1, 0):
                raise ValueError(f"action list for Sq^{step} has the wrong length")
            for d, m in enumerate(mats):
                if m.nrows != self.dim(d + step) or m.cols != self.dim(d):
                    raise ValueError(f"action matrix shape mismatch at k={k}, d={d}")

    def dim(self, d: int) -> int:
        if d < 0 or d > self.t_max:
            return 0
        return self.dims[d]

    def total_dim(self) -> int:
        return sum(self.dims)

    def act_gen(self, k: int, d: int) -> BitMatrix:
        """Action of the generator Sq^{2^k} from degree d."""
        step = 1 << k
        if d + step > self.t_max or d < 0:
            raise ValueError(f"action of Sq^{step} out of bounds from degree {d}")
        return self.actions[k][d]

    def act_single(self, a: int, d: int) -> BitMatrix:
        """Action of the single square Sq^a from degree d."""
        if a == 0:
            return BitMatrix.identity(self.dim(d))
        key = (a, d)
        cached = self._single_action.get(key)
        if cached is not None:
            return cached
        if a & (a - 1) == 0:
            mat = self.act_gen(a.bit_length() - 1, d)
        else:
            mat = BitMatrix.zeros(self.dim(d + a), self.dim(d))
            alg = self.algebra
            idx = alg._adm_index_for(a)[(a,)]
            for k, x in alg.decompose_into_generators(a)[idx]:
                step = 1 << k
                mat = mat.add(self.act_gen(k, d + a - step).matmul(self.act_elem(x, d)))
        self._single_action[key] = mat
        return mat

    def act_word(self, word: Word, d: int) -> BitMatrix:
        """Action of a word of squares (rightmost square acts first)."""
        if not word:
            return BitMatrix.identity(self.dim(d))
        key = (word, d)
        cached = self._word_action.get(key)
        if cached is not None:
            return cached
        mat = self.act_single(word[-1], d)
        deg = d + word[-1]
        for a in reversed(word[:-1]):
            mat = self.act_single(a, deg).matmul(mat)
            deg += a
        self._word_action[key] = mat
        return mat

    def act_elem(self, e: AlgebraElement, d: int) -> BitMatrix:
        """Action of an arbitrary homogeneous element from degree d."""
        if e.basis != ADMISSIBLE:
            e = self.algebra.convert(e, ADMISSIBLE)
        mat = BitMatrix.zeros(self.dim(d + e.degree), self.dim(d))
        for w in self.algebra.words_of(e):
            mat = mat.add(self.act_word(w, d))
        return mat

    def validate(self) -> None:
        """Spot-check that the defining relations act consistently.

        Verifies Sq^1 Sq^1 = 0 and Sq^2 Sq^4 = Sq^6 + Sq^5 Sq^1 on every
        degree in range; the remaining relations are exercised by the
        generator decompositions used to assemble composite actions.
        """
        for d in range(max(self.t_max - 1, 0)):
            if not self.act_word((1, 1), d).is_zero():
                raise AssertionError(f"Sq1 Sq1 != 0 on degree {d}")
        for d in range(max(self.t_max - 5, 0)):
            lhs = self.act_word((2, 4), d)
            rhs = self.act_single(6, d).add(self.act_word((5, 1), d))
            if lhs != rhs:
                raise AssertionError(f"Adem identity for Sq2 Sq4 fails on degree {d}")


class ModuleHom:
    """Degreewise map of graded modules, target-by-source matrices."""

    def __init__(self, source: GradedModule, target: GradedModule, mats: Sequence[BitMatrix], name: str = ""):
        if len(mats) != min(source.t_max, target.t_max) + 1:
            raise ValueError("one matrix per shared degree is required")
        self.source = source
        self.target = target
        self.mats = tuple(mats)
        self.name = name
        for d, m in enumerate(mats):
            if m.nrows != target.dim(d) or m.cols != source.dim(d):
                raise ValueError(f"hom matrix shape mismatch in degree {d}")

    @property
    def t_max(self) -> int:
        return len(self.mats) - 1

    def mat(self, d: int) -> BitMatrix:
        return self.mats[d]

    def apply(self, d: int, v: int) -> int:
        return self.mats[d].mul_vec(v)

    def compose(self, other: "ModuleHom") -> "ModuleHom":
        """self after other (other acts first)."""
        if other.target is not self.source:
            raise ValueError("composition needs matching modules")
        t = min(self.t_max, other.t_max)
        return ModuleHom(other.source, self.target, [self.mats[d].matmul(other.mats[d]) for d in range(t + 1)])

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def verify_linear(self) -> None:
        """Check commutation with every generator action in range."""
        for k in self.source.actions:
            step = 1 << k
            for d in range(self.t_max - step + 1):
                lhs = self.target.act_gen(k, d).matmul(self.mats[d])
                rhs = self.mats[d + step].matmul(self.source.act_gen(k, d))
                if lhs != rhs:
                    raise AssertionError(f"map fails to commute with Sq^{step} from degree {d}")

    @staticmethod
    def zero(source: GradedModule, target: GradedModule) -> "ModuleHom":
        t = min(source.t_max, target.t_max)
        return ModuleHom(source, target, [BitMatrix.zeros(target.dim(d), source.dim(d)) for d in range(t + 1)])

    @staticmethod
    def identity(m: GradedModule) -> "ModuleHom":
        return ModuleHom(m, m, [BitMatrix.identity(m.dim(d)) for d in range(m.t_max + 1)])


# construction helpers


def _zero_actions(t_max: int, dims: Sequence[int]) -> dict[int, list[BitMatrix]]:
    actions: dict[int, list[BitMatrix]] = {}
    k = 0
    while (1 << k) <= t_max:
        step = 1 << k
        actions[k] = [BitMatrix.zeros(dims[d + step], dims[d]) for d in range(t_max - step + 1)]
        k += 1
    return actions


def trivial_module(algebra: SteenrodAlgebra, t_max: int) -> GradedModule:
    """The ground field in degree zero."""
    dims = [1] + [0] * t_max
    return GradedModule(algebra, t_max, dims, _zero_actions(t_max, dims), generators=((0, 1),), name="F")


def build_A(algebra: SteenrodAlgebra, t_max: int) -> GradedModule:
    """The algebra as a left module over itself (cached per algebra)."""
    algebra._check_degree(t_max)
    cache = _module_cache(algebra)
    key = ("A", t_max)
    if key not in cache:
        dims = [algebra.basis_dim(d) for d in range(t_max + 1)]
        actions: dict[int, list[BitMatrix]] = {}
        k = 0
        while (1 << k) <= t_max:
            step = 1 << k
            actions[k] = [algebra.left_mul_single(step, d) for d in range(t_max - step + 1)]
            k += 1
        cache[key] = GradedModule(algebra, t_max, dims, actions, generators=((0, 1),), name="A")
    return cache[key]


def _module_cache(algebra: SteenrodAlgebra) -> dict:
    cache = getattr(algebra, "_graded_module_cache", None)
    if cache is None:
        cache = {}
        algebra._graded_module_cache = cache
    return cache


def _a_mod_sq1(algebra: SteenrodAlgebra, t_max: int) -> tuple[GradedModule, ModuleHom]:
    """A/ASq^1 together with the projection from A (cached)."""
    cache = _module_cache(algebra)
    key = ("A/ASq1", t_max)
    if key not in cache:
        amod = build_A(algebra, t_max)
        sq1 = 1 << algebra._adm_index_for(1)[(1,)]
        spans = _action_closure(amod, [(1, sq1)])
        quo, proj = quotient_module(amod, [s.basis() for s in spans], name="A/ASq1")
        cache[key] = (quo, proj)
    return cache[key]


def build_A_mod_Sq1(algebra: SteenrodAlgebra, t_max: int) -> GradedModule:
    """The quotient of the algebra by the left ideal generated by Sq^1."""
    return _a_mod_sq1(algebra, t_max)[0]


def _action_closure(m: GradedModule, seeds: Sequence[tuple[int, int]]) -> list[RowSpan]:
    """Degreewise spans of the submodule generated by the seed vectors."""
    spans = [RowSpan(m.dim(d)) for d in range(m.t_max + 1)]
    for d, v in seeds:
        spans[d].insert(v)
    for d in range(m.t_max + 1):
        for k in m.actions:
            step = 1 << k
            if d - step < 0:
                continue
            mat = m.act_gen(k, d - step)
            for v in spans[d - step].basis():
                spans[d].insert(mat.mul_vec(v))
    return spans


def suspend(m: GradedModule, n: int, name: str = "") -> GradedModule:
    """Shift all degrees up by n (down for negative n), truncating at the bound."""
    t_max = m.t_max
    dims = [m.dim(d - n) for d in range(t_max + 1)]
    actions: dict[int, list[BitMatrix]] = {}
    for k in m.actions:
        step = 1 << k
        if step > t_max:
            continue
        mats = []
        for d in range(t_max - step + 1):
            src, tgt = d - n, d - n + step
            if 0 <= src and tgt <= m.t_max:
                mats.append(m.act_gen(k, src))
            else:
                mats.append(BitMatrix.zeros(dims[d + step], dims[d]))
        actions[k] = mats
    gens = tuple((d + n, bits) for d, bits in m.generators if 0 <= d + n <= t_max)
    return GradedModule(m.algebra, t_max, dims, actions, generators=gens,
                        name=name or (f"S^{n}({m.name})" if m.name else ""))


def direct_sum(summands: Sequence[GradedModule], name: str = "") -> GradedModule:
    """Degreewise concatenation with block action matrices."""
    if not summands:
        raise ValueError("direct_sum needs at least one summand")
    algebra = summands[0].algebra
    t_max = min(m.t_max for m in summands)
    dims = [sum(m.dim(d) for m in summands) for d in range(t_max + 1)]
    offsets = []
    for d in range(t_max + 1):
        offs, acc = [], 0
        for m in summands:
            offs.append(acc)
            acc += m.dim(d)
        offsets.append(offs)
    actions: dict[int, list[BitMatrix]] = {}
    k = 0
    while (1 << k) <= t_max:
        step = 1 << k
        mats = []
        for d in range(t_max - step + 1):
            rows = [0] * dims[d + step]
            for mi, m in enumerate(summands):
                block = m.act_gen(k, d)
                src_off = offsets[d][mi]
                tgt_off = offsets[d + step][mi]
                for i, r in enumerate(block.rows):
                    rows[tgt_off + i] = r << src_off
            mats.append(BitMatrix(tuple(rows), dims[d]))
        actions[k] = mats
        k += 1
    gens = []
    for mi, m in enumerate(summands):
        for d, bits in m.generators:
            if d <= t_max:
                gens.append((d, bits << offsets[d][mi]))
    return GradedModule(algebra, t_max, dims, actions, generators=tuple(gens), name=name)


class FreeModule:
    """Free module on generators of given degrees, with basis indexing.

    The degree-d basis lists (generator, admissible monomial) pairs in
    generator order, then monomial order; this ordering is what makes
    every resolution and chain map byte-reproducible.
    """

    def __init__(self, algebra: SteenrodAlgebra, t_max: int, gen_degrees: Sequence[int]):
        algebra._check_degree(t_max)
        self.algebra = algebra
        self.t_max = t_max
        self.gen_degrees = tuple(gen_degrees)
        if any(g < 0 or g > t_max for g in self.gen_degrees):
            raise ValueError("generator degrees must lie within 0..t_max")
        self._basis: dict[int, list[tuple[int, int]]] = {}
        self._offsets: dict[int, list[int]] = {}
        self._module: Optional[GradedModule] = None

    def basis(self, d: int) -> list[tuple[int, int]]:
        if d < 0 or d > self.t_max:
            return []
        cached = self._basis.get(d)
        if cached is not None:
            return cached
        out: list[tuple[int, int]] = []
        offs = []
        for gi, g in enumerate(self.gen_degrees):
            offs.append(len(out))
            if g <= d:
                for mi in range(self.algebra.basis_dim(d - g)):
                    out.append((gi, mi))
        self._basis[d] = out
        self._offsets[d] = offs
        return out

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    def offset(self, gi: int, d: int) -> int:
        """Index of (gi, first monomial) within the degree-d basis."""
        self.basis(d)
        return self._offsets[d][gi]

    def gen_vector(self, gi: int) -> int:
        """Coordinate vector of generator gi in its own degree."""
        return 1 << self.offset(gi, self.gen_degrees[gi])

    def act_word(self, word: Word, d: int) -> BitMatrix:
        """Blockwise action of a word on the degree-d part."""
        e = sum(word)
        rows = [0] * self.dim(d + e)
        for gi, g in enumerate(self.gen_degrees):
            if g > d:
                continue
            block = self.algebra.left_mul_word(word, d - g)
            src_off = self.offset(gi, d)
            tgt_off = self.offset(gi, d + e)
            for i, r in enumerate(block.rows):
                rows[tgt_off + i] |= r << src_off
        return BitMatrix(tuple(rows), self.dim(d))

    def act_elem(self, e: AlgebraElement, d: int) -> BitMatrix:
        if e.basis != ADMISSIBLE:
            e = self.algebra.convert(e, ADMISSIBLE)
        mat = BitMatrix.zeros(self.dim(d + e.degree), self.dim(d))
        for w in self.algebra.words_of(e):
            mat = mat.add(self.act_word(w, d))
        return mat

    def as_module(self) -> GradedModule:
        if self._module is None:
            dims = [self.dim(d) for d in range(self.t_max + 1)]
            actions: dict[int, list[BitMatrix]] = {}
            k = 0
            while (1 << k) <= self.t_max:
                step = 1 << k
                actions[k] = [self.act_word((step,), d) for d in range(self.t_max - step + 1)]
                k += 1
            gens = tuple((g, self.gen_vector(gi)) for gi, g in enumerate(self.gen_degrees))
            self._module = GradedModule(self.algebra, self.t_max, dims, actions,
                                        generators=gens, name="free")
        return self._module

    def hom_from_gen_images(self, target: GradedModule, images: Sequence[tuple[int, int]]) -> ModuleHom:
        """A-linear map determined by (degree, target vector) per generator."""
        if len(images) != len(self.gen_degrees):
            raise ValueError("one image per generator is required")
        for gi, (d, _) in enumerate(images):
            if d != self.gen_degrees[gi]:
                raise ValueError("image degree must match the generator degree")
        src = self.as_module()
        t = min(self.t_max, target.t_max)
        mats = []
        for d in range(t + 1):
            cols = [0] * self.dim(d)
            for gi, g in enumerate(self.gen_degrees):
                if g > d:
                    continue
                img = images[gi][1]
                off = self.offset(gi, d)
                for mi, w in enumerate(self.algebra.admissible_basis(d - g)):
                    cols[off + mi] = target.act_word(w, g).mul_vec(img)
            mats.append(BitMatrix.from_columns(cols, target.dim(d)))
        return ModuleHom(src, target, mats)


# submodules, quotients, kernels, images, cokernels


def module_from_subspaces(
    m: GradedModule, bases: Sequence[Sequence[int]], name: str = ""
) -> tuple[GradedModule, ModuleHom]:
    """Module structure on degreewise subspaces closed under the action.

    ``bases[d]`` lists vectors spanning degree d of an action-stable
    family.  Returns the module and its inclusion.
    """
    t_max = m.t_max
    spans = []
    for d in range(t_max + 1):
        span = RowSpan(m.dim(d))
        for v in bases[d]:
            span.insert(v)
        spans.append(span)
    dims = [spans[d].dim for d in range(t_max + 1)]
    incl_mats = [BitMatrix.from_columns(spans[d].basis(), m.dim(d)) for d in range(t_max + 1)]
    actions: dict[int, list[BitMatrix]] = {}
    for k in m.actions:
        step = 1 << k
        if step > t_max:
            continue
        mats = []
        for d in range(t_max - step + 1):
            cols = []
            for v in spans[d].basis():
                w = m.act_gen(k, d).mul_vec(v)
                c = spans[d + step].coords(w)
                if c is None:
                    raise AssertionError(f"subspace family not action-stable at degree {d} (Sq^{step})")
                cols.append(c)
            mats.append(BitMatrix.from_columns(cols, dims[d + step]))
        actions[k] = mats
    sub = GradedModule(m.algebra, t_max, dims, actions, name=name)
    return sub, ModuleHom(sub, m, incl_mats)


def span_submodule(m: GradedModule, seeds: Sequence[tuple[int, int]], name: str = "") -> tuple[GradedModule, ModuleHom]:
    """Submodule generated by (degree, vector) seeds: the action closure."""
    spans = _action_closure(m, seeds)
    return module_from_subspaces(m, [s.basis() for s in spans], name=name)


def quotient_module(
    m: GradedModule, sub_bases: Sequence[Sequence[int]], name: str = ""
) -> tuple[GradedModule, ModuleHom]:
    """Quotient by an action-stable degreewise subspace; returns projection."""
    t_max = m.t_max
    reps_projs = [
        quotient_basis(BitMatrix(tuple(sub_bases[d]), m.dim(d)), m.dim(d))
        for d in range(t_max + 1)
    ]
    dims = [rp[0].nrows for rp in reps_projs]
    actions: dict[int, list[BitMatrix]] = {}
    for k in m.actions:
        step = 1 << k
        if step > t_max:
            continue
        mats = []
        for d in range(t_max - step + 1):
            reps, _ = reps_projs[d]
            _, proj_t = reps_projs[d + step]
            incl = reps.transpose()
            mats.append(proj_t.matmul(m.act_gen(k, d)).matmul(incl))
        actions[k] = mats
    gens = []
    for d, bits in m.generators:
        if d <= t_max:
            gens.append((d, reps_projs[d][1].mul_vec(bits)))
    quo = GradedModule(m.algebra, t_max, dims, actions, generators=tuple(gens), name=name)
    return quo, ModuleHom(m, quo, [rp[1] for rp in reps_projs])


def kernel(f: ModuleHom) -> tuple[GradedModule, ModuleHom]:
    """Degreewise kernel with induced action and inclusion."""
    bases = [list(kernel_basis(f.mats[d]).rows) for d in range(f.t_max + 1)]
    return module_from_subspaces(f.source, bases, name=f"ker({f.name})" if f.name else "ker")


def _image_bases(f: ModuleHom) -> list[list[int]]:
    out = []
    for d in range(f.t_max + 1):
        ech = row_reduce(f.mats[d].transpose())
        out.append(list(ech.matrix.rows[: len(ech.pivots)]))
    return out


def image(f: ModuleHom) -> tuple[GradedModule, ModuleHom]:
    """Degreewise image inside the target, with inclusion."""
    return module_from_subspaces(f.target, _image_bases(f), name=f"im({f.name})" if f.name else "im")


def cokernel(f: ModuleHom) -> tuple[GradedModule, ModuleHom]:
    """Degreewise cokernel of the target, with projection."""
    return quotient_module(f.target, _image_bases(f), name=f"coker({f.name})" if f.name else "coker")


class ShortExact:
    """A short exact sequence 0 -> left -> middle -> right -> 0."""

    def __init__(self, incl: ModuleHom, proj: ModuleHom):
        if incl.target is not proj.source:
            raise ValueError("inclusion target must be the projection source")
        self.left = incl.source
        self.middle = incl.target
        self.right = proj.target
        self.incl = incl
        self.proj = proj

    @property
    def t_max(self) -> int:
        return min(self.incl.t_max, self.proj.t_max)

    def verify(self) -> None:
        """Degreewise exactness: dims add up and the composite is zero."""
        if not self.proj.compose(self.incl).is_zero():
            raise AssertionError("composite through the middle is nonzero")
        for d in range(self.t_max + 1):
            if self.incl.mats[d].rank() != self.left.dim(d):
                raise AssertionError(f"left map not injective in degree {d}")
            if self.proj.mats[d].rank() != self.right.dim(d):
                raise AssertionError(f"right map not surjective in degree {d}")
            if self.middle.dim(d) != self.left.dim(d) + self.right.dim(d):
                raise AssertionError(f"dimension count fails in degree {d}")


class SESFactorization:
    """Kernel/image/cokernel of a module map as two short exact sequences.

    For f : N -> M this holds 0 -> K -> N -> I -> 0 and
    0 -> I -> M -> C -> 0 with the four structure maps.
    """

    def __init__(self, f: ModuleHom):
        self.f = f
        self.K, self.incl_KN = kernel(f)
        self.I, self.incl_IM = image(f)
        self.C, self.proj_MC = cokernel(f)
        proj_mats = []
        for d in range(f.t_max + 1):
            span = RowSpan(f.target.dim(d))
            for j in range(self.I.dim(d)):
                span.insert(self.incl_IM.mats[d].mul_vec(1 << j))
            cols = []
            for j in range(f.source.dim(d)):
                c = span.coords(f.mats[d].mul_vec(1 << j))
                if c is None:
                    raise AssertionError("image coordinates failed")
                cols.append(c)
            proj_mats.append(BitMatrix.from_columns(cols, self.I.dim(d)))
        self.proj_NI = ModuleHom(f.source, self.I, proj_mats)

    def ses_ik(self) -> ShortExact:
        """0 -> K -> N -> I -> 0."""
        return ShortExact(self.incl_KN, self.proj_NI)

    def ses_ci(self) -> ShortExact:
        """0 -> I -> M -> C -> 0."""
        return ShortExact(self.incl_IM, self.proj_MC)

    def verify(self) -> None:
        self.ses_ik().verify()
        self.ses_ci().verify()
        if not self.proj_NI.compose(self.incl_KN).is_zero():
            raise AssertionError("kernel survives into the image")


def factor_les(f: ModuleHom) -> SESFactorization:
    """Factor a module map into its two short exact sequences."""
    fac = SESFactorization(f)
    fac.verify()
    return fac


# the built-in maps


def sq_map(algebra: SteenrodAlgebra, t_max: int, n: int) -> ModuleHom:
    """The map S^n A -> A sending the suspended generator to Sq^n."""
    if n < 1:
        raise ValueError("sq requires n >= 1")
    algebra._check_degree(t_max)
    src = FreeModule(algebra, t_max, [n])
    f = src.hom_from_gen_images(build_A(algebra, t_max), [(n, algebra.sq(n).bits)])
    f.name = f"sq:{n}"
    return f


def sqZ_map(algebra: SteenrodAlgebra, t_max: int, n: int) -> ModuleHom:
    """The map S^n A -> A/ASq^1 sending the generator to the class of Sq^n.

    n = 1 is rejected: the class of Sq^1 vanishes in the quotient, so
    the induced operation is the zero map and the construction
    degenerates.
    """
    if n == 1:
        raise ValueError(
            "sqz requires n >= 2: the class of Sq^1 is zero in A/ASq^1, "
            "so the n = 1 operation is the zero map"
        )
    if n < 2:
        raise ValueError("sqz requires n >= 2")
    quo, proj = _a_mod_sq1(algebra, t_max)
    src = FreeModule(algebra, t_max, [n])
    f = src.hom_from_gen_images(quo, [(n, proj.apply(n, algebra.sq(n).bits))])
    f.name = f"sqz:{n}"
    return f


def u_map(
    algebra: SteenrodAlgebra,
    t_max: int,
    i_max: Optional[int] = None,
    conjugate: bool = False,
) -> ModuleHom:
    """The map from the sum of S^{2i} A (0 < i <= i_max) to A/ASq^1.

    The i-th summand sends its generator to the class of Sq^{2i}, or of
    chi(Sq^{2i}) when ``conjugate`` is set.  Summands with 2i beyond the
    degree bound carry no classes below it and are dropped.
    """
    if i_max is None:
        i_max = t_max // 2
    if i_max < 1:
        raise ValueError("u requires i_max >= 1")
    indices = [i for i in range(1, i_max + 1) if 2 * i <= t_max]
    quo, proj = _a_mod_sq1(algebra, t_max)
    src = FreeModule(algebra, t_max, [2 * i for i in indices])
    images = []
    for i in indices:
        e = algebra.sq(2 * i)
        if conjugate:
            e = algebra.antipode(e)
        images.append((2 * i, proj.apply(2 * i, e.bits)))
    f = src.hom_from_gen_images(quo, images)
    f.name = f"bruner-u:{i_max}" + (",conj" if conjugate else "")
    return f


def min_generator_degrees(m: GradedModule) -> Counter:
    """Degrees of a minimal generating set, computed degreewise.

    In degree d this is the dimension of the quotient by everything the
    generator actions reach from lower degrees.
    """
    out: Counter = Counter()
    for d in range(m.t_max + 1):
        span = RowSpan(m.dim(d))
        for k in m.actions:
            step = 1 << k
            if d - step < 0:
                continue
            mat = m.act_gen(k, d - step)
            for j in range(m.dim(d - step)):
                span.insert(mat.mul_vec(1 << j))
        count = m.dim(d) - span.dim
        if count:
            out[d] = count
    return out
