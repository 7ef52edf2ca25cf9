"""Minimal free resolutions and Ext charts.

A resolution stage is a free module whose generators are discovered
degree by degree: at each internal degree the kernel of the previous
differential is completed against the image of what the stage already
reaches from lower degrees.  New generators are taken from the
deterministic kernel basis in order, so two runs produce byte-identical
results.  Minimality (differentials land in positive-degree multiples)
holds by construction and is re-checked by an explicit verifier, which
is what lets Ext charts be read off as generator counts.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

from steenrodext.gf2 import BitMatrix, RowSpan, kernel_basis, solve_many
from steenrodext.modules import FreeModule, GradedModule, ModuleHom
from steenrodext.steenrod import SteenrodAlgebra, Word

RESOLUTION_FORMAT = 1


class ExtChart:
    """Bigraded dimension table read from minimal generator counts."""

    def __init__(self, s_max: int, t_max: int, dims: dict[tuple[int, int], int]):
        self.s_max = s_max
        self.t_max = t_max
        self.dims = {k: v for k, v in dims.items() if v}

    def get(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    def positions(self) -> list[tuple[int, int]]:
        return sorted(self.dims)

    def shifted(self, ds: int, dt: int) -> "ExtChart":
        """Chart with every class moved by (ds, dt), clipped at zero."""
        dims = {}
        for (s, t), v in self.dims.items():
            if s + ds >= 0 and t + dt >= 0:
                dims[(s + ds, t + dt)] = v
        return ExtChart(self.s_max + ds, self.t_max + dt, dims)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExtChart) and self.dims == other.dims

    def table(self) -> str:
        """Line-oriented `s<TAB>t<TAB>dim` rendering, sorted by (s, t)."""
        return "\n".join(f"{s}\t{t}\t{d}" for (s, t), d in sorted(self.dims.items()))


class Resolution:
    """Minimal free resolution of a graded module up to (s_max, t_max).

    Stage s generators are (degree, index) pairs; the differential sends
    each generator to a coordinate vector of the previous stage (the
    augmentation for stage 0).  Full per-degree matrices are assembled
    lazily and cached.
    """

    def __init__(
        self,
        module: GradedModule,
        s_max: int,
        t_max: int,
        stages: list[FreeModule],
        images: list[list[int]],
    ):
        self.module = module
        self.algebra = module.algebra
        self.s_max = s_max
        self.t_max = t_max
        self.stages = stages
        self.images = images  # images[s][gi]: vector in stage s-1 (module for s=0)
        self._diff_mats: dict[tuple[int, int], BitMatrix] = {}
        self._gens_at: dict[tuple[int, int], list[int]] = {}

    # structure queries

    def gens_at(self, s: int, t: int) -> list[int]:
        """Indices of stage-s generators of internal degree t."""
        key = (s, t)
        cached = self._gens_at.get(key)
        if cached is None:
            cached = [gi for gi, g in enumerate(self.stages[s].gen_degrees) if g == t]
            self._gens_at[key] = cached
        return cached

    def apply_word(self, s: int, word: Word, d_from: int, v: int) -> int:
        """Action of an admissible word on a stage-s vector."""
        free = self.stages[s]
        alg = self.algebra
        out = 0
        if not word:
            return v
        shift = sum(word)
        w = v
        while w:
            p = (w & -w).bit_length() - 1
            w ^= 1 << p
            gi, mi = free.basis(d_from)[p]
            g = free.gen_degrees[gi]
            mono = alg.admissible_basis(d_from - g)[mi]
            tgt_index = alg._adm_index_for(d_from - g + shift)
            off = free.offset(gi, d_from + shift)
            for aw in alg._reduce_word(word + mono, "leftmost"):
                out ^= 1 << (off + tgt_index[aw])
        return out

    def diff_mat(self, s: int, t: int) -> BitMatrix:
        """Matrix of d_s : F_s^t -> F_{s-1}^t (the augmentation for s=0)."""
        key = (s, t)
        cached = self._diff_mats.get(key)
        if cached is not None:
            return cached
        free = self.stages[s]
        if s == 0:
            tgt_dim = self.module.dim(t)
            cols = []
            for gi, mi in free.basis(t):
                g = free.gen_degrees[gi]
                w = self.algebra.admissible_basis(t - g)[mi]
                cols.append(self.module.act_word(w, g).mul_vec(self.images[0][gi]))
            mat = BitMatrix.from_columns(cols, tgt_dim)
        else:
            prev = self.stages[s - 1]
            cols = []
            for gi, mi in free.basis(t):
                g = free.gen_degrees[gi]
                w = self.algebra.admissible_basis(t - g)[mi]
                cols.append(self.apply_word(s - 1, w, g, self.images[s][gi]))
            mat = BitMatrix.from_columns(cols, prev.dim(t))
        self._diff_mats[key] = mat
        return mat

    def chart(self) -> ExtChart:
        return ext_chart(self)

    # verification

    def verify_minimal(self) -> tuple[bool, Optional[tuple[int, int]]]:
        """Every differential image avoids unit coefficients.

        Returns (ok, first failing (s, t)).
        """
        for s in range(1, len(self.stages)):
            prev = self.stages[s - 1]
            for gi, g in enumerate(self.stages[s].gen_degrees):
                v = self.images[s][gi]
                for gj in self.gens_at(s - 1, g):
                    if (v >> prev.offset(gj, g)) & 1:
                        return False, (s, g)
        return True, None

    def verify_exact(self) -> tuple[bool, Optional[tuple[int, int]]]:
        """Image of each differential equals the kernel of the previous one.

        Checked through the bounds by rank bookkeeping plus vanishing
        composites; the augmentation must also hit all of the module.
        """
        for t in range(self.t_max + 1):
            if self.diff_mat(0, t).rank() != self.module.dim(t):
                return False, (0, t)
        for s in range(1, len(self.stages)):
            for t in range(self.t_max + 1):
                upper = self.diff_mat(s, t)
                lower = self.diff_mat(s - 1, t)
                if not lower.matmul(upper).is_zero():
                    return False, (s, t)
                if upper.rank() != lower.cols - lower.rank():
                    return False, (s, t)
        return True, None

    # serialization

    def to_payload(self) -> dict:
        return {
            "format": RESOLUTION_FORMAT,
            "s_max": self.s_max,
            "t_max": self.t_max,
            "stages": [list(f.gen_degrees) for f in self.stages],
            "images": [[format(v, "x") for v in stage] for stage in self.images],
        }

    def to_bytes(self) -> bytes:
        return json.dumps(self.to_payload(), sort_keys=True, separators=(",", ":")).encode()

    @staticmethod
    def from_payload(module: GradedModule, payload: dict) -> "Resolution":
        if payload.get("format") != RESOLUTION_FORMAT:
            raise ValueError("unsupported resolution payload format")
        s_max = payload["s_max"]
        t_max = payload["t_max"]
        stages = [FreeModule(module.algebra, t_max, degs) for degs in payload["stages"]]
        images = [[int(v, 16) for v in stage] for stage in payload["images"]]
        return Resolution(module, s_max, t_max, stages, images)


def minimal_resolution(module: GradedModule, s_max: int, t_max: int) -> Resolution:
    """Minimal free resolution with deterministic generator selection.

    Stages are built in increasing s and, within a stage, increasing
    internal degree; new generators complete the previous kernel against
    what the stage already reaches, taking deterministic kernel basis
    vectors in order.
    """
    if t_max > module.t_max:
        raise ValueError("resolution bound exceeds the module bound")
    module.algebra._check_degree(t_max)
    stages: list[FreeModule] = []
    images: list[list[int]] = []

    # stage 0: minimal generators of the module
    gen_degrees: list[int] = []
    gen_images: list[int] = []
    spans = [RowSpan(module.dim(t)) for t in range(t_max + 1)]
    for t in range(t_max + 1):
        for k in module.actions:
            step = 1 << k
            if t - step < 0:
                continue
            mat = module.act_gen(k, t - step)
            for v in spans[t - step].basis():
                spans[t].insert(mat.mul_vec(v))
        for j in range(module.dim(t)):
            v = 1 << j
            if not spans[t].contains(v):
                gen_degrees.append(t)
                gen_images.append(v)
                spans[t].insert(v)
    res = Resolution(module, s_max, t_max, stages, images)
    stages.append(FreeModule(module.algebra, t_max, gen_degrees))
    images.append(gen_images)

    for s in range(1, s_max + 1):
        prev = stages[s - 1]
        gen_degrees = []
        gen_images = []
        img_spans = [RowSpan(prev.dim(t)) for t in range(t_max + 1)]
        for t in range(t_max + 1):
            # the stage image is a submodule: propagate it up by the
            # generator actions, then complete the kernel at this degree
            for k in module.actions:
                step = 1 << k
                if t - step < 0:
                    continue
                for v in img_spans[t - step].basis():
                    img_spans[t].insert(res.apply_word(s - 1, (step,), t - step, v))
            ker = kernel_basis(res.diff_mat(s - 1, t))
            for v in ker.rows:
                if not img_spans[t].contains(v):
                    gen_degrees.append(t)
                    gen_images.append(v)
                    img_spans[t].insert(v)
        stages.append(FreeModule(module.algebra, t_max, gen_degrees))
        images.append(gen_images)
    return res


def ext_chart(res: Resolution) -> ExtChart:
    """Ext dimensions as minimal generator counts; rejects non-minimal input."""
    ok, where = res.verify_minimal()
    if not ok:
        raise ValueError(f"resolution is not minimal at (s, t) = {where}")
    dims: dict[tuple[int, int], int] = {}
    for s in range(len(res.stages)):
        for g in res.stages[s].gen_degrees:
            dims[(s, g)] = dims.get((s, g), 0) + 1
    return ExtChart(res.s_max, res.t_max, dims)


class ChainMap:
    """Chain map between resolutions covering a module map.

    Stored as generator images; the induced map on Ext charts is the
    unit-coefficient block in each bidegree.
    """

    def __init__(self, f: ModuleHom, source_res: Resolution, target_res: Resolution,
                 images: list[list[int]]):
        self.f = f
        self.source_res = source_res
        self.target_res = target_res
        self.images = images  # images[s][gi]: vector in target stage s
        self._stage_mats: dict[tuple[int, int], BitMatrix] = {}

    def stage_mat(self, s: int, t: int) -> BitMatrix:
        """Matrix of the chain map F_s^t(source) -> F_s^t(target)."""
        key = (s, t)
        cached = self._stage_mats.get(key)
        if cached is not None:
            return cached
        free = self.source_res.stages[s]
        cols = []
        for gi, mi in free.basis(t):
            g = free.gen_degrees[gi]
            w = self.source_res.algebra.admissible_basis(t - g)[mi]
            cols.append(self.target_res.apply_word(s, w, g, self.images[s][gi]))
        mat = BitMatrix.from_columns(cols, self.target_res.stages[s].dim(t))
        self._stage_mats[key] = mat
        return mat

    def verify(self) -> None:
        """Commutation with the differentials, exactly, in every bidegree."""
        for s in range(min(len(self.source_res.stages), len(self.target_res.stages))):
            for t in range(self.source_res.t_max + 1):
                lhs = self.target_res.diff_mat(s, t).matmul(self.stage_mat(s, t))
                if s == 0:
                    rhs = self.f.mats[t].matmul(self.source_res.diff_mat(0, t))
                else:
                    rhs = self.stage_mat(s - 1, t).matmul(self.source_res.diff_mat(s, t))
                if lhs != rhs:
                    raise AssertionError(f"chain map fails to commute at (s, t) = ({s}, {t})")

    def ext_matrix(self, s: int, t: int) -> BitMatrix:
        """Induced map Ext^{s,t}(target module) -> Ext^{s,t}(source module).

        Rows are indexed by source-resolution generators at (s, t),
        columns by target-resolution generators; the entry is the unit
        coefficient of the target generator in the image of the source
        generator.
        """
        src_gens = self.source_res.gens_at(s, t)
        tgt_gens = self.target_res.gens_at(s, t)
        tgt_free = self.target_res.stages[s]
        rows = []
        for gi in src_gens:
            v = self.images[s][gi]
            bits = 0
            for col, gj in enumerate(tgt_gens):
                if (v >> tgt_free.offset(gj, t)) & 1:
                    bits |= 1 << col
            rows.append(bits)
        return BitMatrix(tuple(rows), len(tgt_gens))


def lift_hom(f: ModuleHom, source_res: Resolution, target_res: Resolution) -> ChainMap:
    """Lift a module map to a chain map between minimal resolutions.

    Solves stage by stage over the free target stages; the deterministic
    free-coordinate convention of the solver fixes the lift.
    """
    if f.source is not source_res.module or f.target is not target_res.module:
        raise ValueError("lift_hom needs resolutions of the map's source and target")
    images: list[list[int]] = []
    n_stages = min(len(source_res.stages), len(target_res.stages))
    for s in range(n_stages):
        free = source_res.stages[s]
        stage_images = [0] * len(free.gen_degrees)
        by_degree: dict[int, list[int]] = {}
        for gi, g in enumerate(free.gen_degrees):
            by_degree.setdefault(g, []).append(gi)
        for t, gis in sorted(by_degree.items()):
            rhs = []
            for gi in gis:
                if s == 0:
                    rhs.append(f.mats[t].mul_vec(source_res.images[0][gi]))
                else:
                    prev_mat_v = source_res.images[s][gi]
                    # image of d(g) under the previous chain map stage
                    v = 0
                    w = prev_mat_v
                    prev_free = source_res.stages[s - 1]
                    while w:
                        p = (w & -w).bit_length() - 1
                        w ^= 1 << p
                        gj, mi = prev_free.basis(t)[p]
                        gdeg = prev_free.gen_degrees[gj]
                        mono = source_res.algebra.admissible_basis(t - gdeg)[mi]
                        v ^= target_res.apply_word(s - 1, mono, gdeg, images[s - 1][gj])
                    rhs.append(v)
            sols = solve_many(target_res.diff_mat(s, t), rhs)
            for gi, x in zip(gis, sols):
                if x is None:
                    raise AssertionError(f"lift failed at stage {s}, degree {t}")
                stage_images[gi] = x
        images.append(stage_images)
    return ChainMap(f, source_res, target_res, images)
