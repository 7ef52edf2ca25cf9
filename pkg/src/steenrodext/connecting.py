"""Connecting homomorphisms on Ext and the composite boundary map.

A short exact sequence is resolved by a horseshoe: the middle term gets
the direct sum of the outer minimal resolutions with a block-triangular
differential, and the connecting homomorphism is the unit-coefficient
block of the off-diagonal correction after dualizing.  The composite of
the two connecting maps of a factored module map is computed this way
and, independently, by splicing: lifting the identity of the kernel
backwards through the four-term sequence with chain maps between the
same minimal resolutions.  The two routes must agree entrywise in the
canonical generator bases; that equality is the core cross-check of the
package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from steenrodext.gf2 import BitMatrix, solve, solve_many
from steenrodext.modules import GradedModule, ModuleHom, SESFactorization, ShortExact
from steenrodext.resolution import ExtChart, Resolution, lift_hom, minimal_resolution


def _free_to_module_apply(res: Resolution, s: int, images: list[int],
                          module: GradedModule, t: int, v: int) -> int:
    """Evaluate the map (stage s of res) -> module given by generator images."""
    free = res.stages[s]
    alg = res.algebra
    out = 0
    basis = free.basis(t)
    w = v
    while w:
        p = (w & -w).bit_length() - 1
        w ^= 1 << p
        gi, mi = basis[p]
        g = free.gen_degrees[gi]
        mono = alg.admissible_basis(t - g)[mi]
        out ^= module.act_word(mono, g).mul_vec(images[gi])
    return out


def _free_to_stage_apply(src_res: Resolution, src_s: int, tgt_res: Resolution,
                         tgt_s: int, images: list[int], t: int, v: int) -> int:
    """Evaluate the map (stage src_s of src_res) -> (stage tgt_s of tgt_res)."""
    free = src_res.stages[src_s]
    alg = src_res.algebra
    out = 0
    basis = free.basis(t)
    w = v
    while w:
        p = (w & -w).bit_length() - 1
        w ^= 1 << p
        gi, mi = basis[p]
        g = free.gen_degrees[gi]
        mono = alg.admissible_basis(t - g)[mi]
        out ^= tgt_res.apply_word(tgt_s, mono, g, images[gi])
    return out


def _by_degree(gen_degrees: tuple[int, ...]) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for gi, g in enumerate(gen_degrees):
        out.setdefault(g, []).append(gi)
    return out


class ConnectingMap:
    """The boundary Ext^{s,t}(left) -> Ext^{s+1,t}(right) of a short
    exact sequence, in the canonical minimal-resolution bases."""

    def __init__(self, ses: ShortExact, left_res: Resolution, right_res: Resolution,
                 h: list[list[int]], sigma0: list[int]):
        self.ses = ses
        self.left_res = left_res
        self.right_res = right_res
        self.h = h  # h[s][gi]: correction of stage-s right generators into left stage s-1
        self.sigma0 = sigma0
        self.s_max = left_res.s_max
        self.t_max = left_res.t_max
        self._mats: dict[tuple[int, int], BitMatrix] = {}

    def mat(self, s: int, t: int) -> BitMatrix:
        """Matrix Ext^{s,t}(left) -> Ext^{s+1,t}(right); valid for s < s_max."""
        key = (s, t)
        cached = self._mats.get(key)
        if cached is not None:
            return cached
        src_gens = self.left_res.gens_at(s, t)
        tgt_gens = self.right_res.gens_at(s + 1, t)
        left_free = self.left_res.stages[s]
        rows = []
        for g2 in tgt_gens:
            v = self.h[s + 1][g2]
            bits = 0
            for col, g1 in enumerate(src_gens):
                if (v >> left_free.offset(g1, t)) & 1:
                    bits |= 1 << col
            rows.append(bits)
        mat = BitMatrix(tuple(rows), len(src_gens))
        self._mats[key] = mat
        return mat


def connecting_map(ses: ShortExact, s_max: int, t_max: int,
                   left_res: Optional[Resolution] = None,
                   right_res: Optional[Resolution] = None) -> ConnectingMap:
    """Connecting homomorphism via a horseshoe resolution of the middle.

    The outer terms get minimal resolutions; the middle is resolved by
    their sum with a block-triangular differential whose off-diagonal
    corrections are solved stage by stage.  The input must be exact.
    """
    ses.verify()
    rl = left_res if left_res is not None else minimal_resolution(ses.left, s_max, t_max)
    rr = right_res if right_res is not None else minimal_resolution(ses.right, s_max, t_max)
    if rl.s_max != rr.s_max or rl.t_max != rr.t_max:
        raise ValueError("outer resolutions must share bounds")

    # lift the right augmentation through the projection
    sigma0 = [0] * len(rr.stages[0].gen_degrees)
    for t, gis in sorted(_by_degree(rr.stages[0].gen_degrees).items()):
        sols = solve_many(ses.proj.mats[t], [rr.images[0][gi] for gi in gis])
        for gi, x in zip(gis, sols):
            if x is None:
                raise AssertionError("projection is not surjective where needed")
            sigma0[gi] = x

    h: list[list[int]] = [[]]
    for s in range(1, len(rr.stages)):
        stage_h = [0] * len(rr.stages[s].gen_degrees)
        for t, gis in sorted(_by_degree(rr.stages[s].gen_degrees).items()):
            rhs = []
            for gi in gis:
                dg = rr.images[s][gi]
                if s == 1:
                    u = _free_to_module_apply(rr, 0, sigma0, ses.middle, t, dg)
                    w = solve(ses.incl.mats[t], u)
                    if w is None:
                        raise AssertionError("middle value missed the left submodule")
                    rhs.append(w)
                else:
                    rhs.append(_free_to_stage_apply(rr, s - 1, rl, s - 2, h[s - 1], t, dg))
            sols = solve_many(rl.diff_mat(s - 1, t), rhs)
            for gi, x in zip(gis, sols):
                if x is None:
                    raise AssertionError(f"horseshoe correction failed at stage {s}, degree {t}")
                stage_h[gi] = x
        h.append(stage_h)
    return ConnectingMap(ses, rl, rr, h, sigma0)


class DMap:
    """Composite boundary Ext^{s,t}(S^{-1}K) -> Ext^{s+2,t+1}(C).

    Source positions are in desuspended-kernel coordinates: the source
    dimension at (s, t) is the kernel chart at (s, t+1).  ``mats`` is
    indexed by source position.
    """

    def __init__(self, chart_K: ExtChart, chart_C: ExtChart,
                 mats: dict[tuple[int, int], BitMatrix], s_bound: int, t_bound: int,
                 label: str = ""):
        self.chart_K = chart_K
        self.chart_C = chart_C
        self.mats = mats
        self.s_bound = s_bound  # largest valid source filtration
        self.t_bound = t_bound  # largest valid source internal degree
        self.label = label

    def source_dim(self, s: int, t: int) -> int:
        return self.chart_K.get(s, t + 1)

    def target_dim(self, s: int, t: int) -> int:
        return self.chart_C.get(s, t)

    def mat(self, s: int, t: int) -> BitMatrix:
        return self.mats[(s, t)]

    def positions(self) -> list[tuple[int, int]]:
        return sorted(self.mats)

    def entrywise_equal(self, other: "DMap") -> bool:
        """Equality as matrices over the shared valid region."""
        region = set(self.mats) & set(other.mats)
        if not region:
            return False
        return all(self.mats[p] == other.mats[p] for p in region)

    def diff_positions(self, other: "DMap") -> list[tuple[int, int]]:
        region = set(self.mats) & set(other.mats)
        return sorted(p for p in region if self.mats[p] != other.mats[p])


def compose_boundaries(d_ik: ConnectingMap, d_ci: ConnectingMap,
                       s_max: int, t_max: int, label: str = "") -> DMap:
    """Compose the two connecting maps with the desuspension reindexing."""
    rk, rc = d_ik.left_res, d_ci.right_res
    mats: dict[tuple[int, int], BitMatrix] = {}
    for s in range(s_max - 1):
        for t in range(t_max):
            mats[(s, t)] = d_ci.mat(s + 1, t + 1).matmul(d_ik.mat(s, t + 1))
    return DMap(rk.chart(), rc.chart(), mats, s_max - 2, t_max - 1, label=label)


def d_map(fac: SESFactorization, s_max: int, t_max: int,
          res_K: Optional[Resolution] = None,
          res_I: Optional[Resolution] = None,
          res_C: Optional[Resolution] = None,
          conn_ik: Optional[ConnectingMap] = None,
          conn_ci: Optional[ConnectingMap] = None) -> DMap:
    """The composite of the two connecting homomorphisms of a factored map."""
    if s_max < 2 or t_max < 1:
        raise ValueError("bounds leave no room for the (+2,+1) shift")
    if conn_ik is None:
        rk = res_K if res_K is not None else minimal_resolution(fac.K, s_max, t_max)
        ri = res_I if res_I is not None else minimal_resolution(fac.I, s_max, t_max)
        conn_ik = connecting_map(fac.ses_ik(), s_max, t_max, rk, ri)
    if conn_ci is None:
        ri = conn_ik.right_res
        rc = res_C if res_C is not None else minimal_resolution(fac.C, s_max, t_max)
        conn_ci = connecting_map(fac.ses_ci(), s_max, t_max, ri, rc)
    return compose_boundaries(conn_ik, conn_ci, s_max, t_max, label=fac.f.name or "d")


class TwoExtension:
    """Four-term exact sequence K -> N -> M -> C with composite middle map."""

    def __init__(self, fac: SESFactorization):
        self.K = fac.K
        self.N = fac.f.source
        self.M = fac.f.target
        self.C = fac.C
        self.incl = fac.incl_KN
        self.mid = fac.f  # equals incl_IM after proj_NI
        self.proj = fac.proj_MC
        self._fac = fac

    def verify(self) -> None:
        if not self.mid.compose(self.incl).is_zero():
            raise AssertionError("two-extension not exact at the second term")
        if not self.proj.compose(self.mid).is_zero():
            raise AssertionError("two-extension not exact at the third term")
        for d in range(self.mid.t_max + 1):
            if self.incl.mats[d].rank() != self.K.dim(d):
                raise AssertionError(f"left end fails in degree {d}")
            if self.proj.mats[d].rank() != self.C.dim(d):
                raise AssertionError(f"right end fails in degree {d}")
            rank_mid = self.mid.mats[d].rank()
            if self.N.dim(d) - rank_mid != self.K.dim(d):
                raise AssertionError(f"exactness at the second term fails in degree {d}")
            if self.M.dim(d) - rank_mid != self.C.dim(d):
                raise AssertionError(f"exactness at the third term fails in degree {d}")


def two_extension(fac: SESFactorization) -> TwoExtension:
    te = TwoExtension(fac)
    te.verify()
    return te


def yoneda_compose(te: TwoExtension, s_max: int, t_max: int,
                   res_K: Optional[Resolution] = None,
                   res_C: Optional[Resolution] = None) -> DMap:
    """The same composite computed by splicing along the two-extension.

    The identity of K is lifted backwards through K -> N -> M -> C by
    chain maps between the minimal resolutions of C and K; dualizing the
    resulting degree-two chain map gives the boundary composite.  Free
    coordinates of every solve default to zero, so the output is
    entrywise comparable with the horseshoe route.
    """
    if s_max < 2 or t_max < 1:
        raise ValueError("bounds leave no room for the (+2,+1) shift")
    rk = res_K if res_K is not None else minimal_resolution(te.K, s_max, t_max)
    rc = res_C if res_C is not None else minimal_resolution(te.C, s_max, t_max)

    # sigma: P_0(C) -> M lifting the augmentation through the right end
    sigma = [0] * len(rc.stages[0].gen_degrees)
    for t, gis in sorted(_by_degree(rc.stages[0].gen_degrees).items()):
        sols = solve_many(te.proj.mats[t], [rc.images[0][gi] for gi in gis])
        for gi, x in zip(gis, sols):
            if x is None:
                raise AssertionError("right end of the two-extension is not surjective")
            sigma[gi] = x

    # tau: P_1(C) -> N with mid(tau) = sigma(d_1)
    tau = [0] * len(rc.stages[1].gen_degrees)
    for t, gis in sorted(_by_degree(rc.stages[1].gen_degrees).items()):
        rhs = [_free_to_module_apply(rc, 0, sigma, te.M, t, rc.images[1][gi]) for gi in gis]
        sols = solve_many(te.mid.mats[t], rhs)
        for gi, x in zip(gis, sols):
            if x is None:
                raise AssertionError("middle lift of the two-extension failed")
            tau[gi] = x

    # phi_0: P_2(C) -> P_0(K): tau(d_2) lands in the kernel, i.e. in K
    phi: list[list[int]] = []
    phi0 = [0] * len(rc.stages[2].gen_degrees)
    for t, gis in sorted(_by_degree(rc.stages[2].gen_degrees).items()):
        wvals = []
        for gi in gis:
            v = _free_to_module_apply(rc, 1, tau, te.N, t, rc.images[2][gi])
            w = solve(te.incl.mats[t], v)
            if w is None:
                raise AssertionError("splice value missed the kernel")
            wvals.append(w)
        sols = solve_many(rk.diff_mat(0, t), wvals)
        for gi, x in zip(gis, sols):
            if x is None:
                raise AssertionError("lift through the kernel augmentation failed")
            phi0[gi] = x
    phi.append(phi0)

    # phi_s: P_{s+2}(C) -> P_s(K)
    for s in range(1, s_max - 1):
        stage = [0] * len(rc.stages[s + 2].gen_degrees)
        for t, gis in sorted(_by_degree(rc.stages[s + 2].gen_degrees).items()):
            rhs = [
                _free_to_stage_apply(rc, s + 1, rk, s - 1, phi[s - 1], t, rc.images[s + 2][gi])
                for gi in gis
            ]
            sols = solve_many(rk.diff_mat(s, t), rhs)
            for gi, x in zip(gis, sols):
                if x is None:
                    raise AssertionError(f"splice lift failed at stage {s}, degree {t}")
                stage[gi] = x
        phi.append(stage)

    mats: dict[tuple[int, int], BitMatrix] = {}
    for s in range(s_max - 1):
        for t in range(t_max):
            src_gens = rk.gens_at(s, t + 1)
            tgt_gens = rc.gens_at(s + 2, t + 1)
            k_free = rk.stages[s]
            rows = []
            for g2 in tgt_gens:
                v = phi[s][g2]
                bits = 0
                for col, g1 in enumerate(src_gens):
                    if (v >> k_free.offset(g1, t + 1)) & 1:
                        bits |= 1 << col
                rows.append(bits)
            mats[(s, t)] = BitMatrix(tuple(rows), len(src_gens))
    return DMap(rk.chart(), rc.chart(), mats, s_max - 2, t_max - 1, label="yoneda")


def kernel_cokernel(d: DMap) -> tuple[dict[tuple[int, int], int], dict[tuple[int, int], int]]:
    """Bigraded kernel and cokernel dimensions of a boundary composite.

    Kernel entries sit at source positions; cokernel entries sit at
    target chart positions, including those with no incoming map.
    """
    ker: dict[tuple[int, int], int] = {}
    ranks: dict[tuple[int, int], int] = {}
    for (s, t), m in d.mats.items():
        r = m.rank()
        ranks[(s, t)] = r
        k = d.source_dim(s, t) - r
        if k:
            ker[(s, t)] = k
    coker: dict[tuple[int, int], int] = {}
    for s2 in range(d.s_bound + 3):
        for t2 in range(d.t_bound + 2):
            dim = d.target_dim(s2, t2)
            if not dim:
                continue
            r = ranks.get((s2 - 2, t2 - 1), 0)
            if dim - r:
                coker[(s2, t2)] = dim - r
    return ker, coker


def e3_chart(d: DMap) -> ExtChart:
    """Homology chart of the two-term complex: kernels at their source
    positions, cokernels at the shifted target positions."""
    ker, coker = kernel_cokernel(d)
    dims: dict[tuple[int, int], int] = {}
    for (s, t), v in ker.items():
        dims[(s, t)] = dims.get((s, t), 0) + v
    for (s, t), v in coker.items():
        if s <= d.s_bound and t <= d.t_bound:
            dims[(s, t)] = dims.get((s, t), 0) + v
    return ExtChart(d.s_bound, d.t_bound, dims)


@dataclass
class LESReport:
    """Outcome of the long-exact-sequence rank bookkeeping."""

    passed: bool
    first_failure: Optional[tuple[str, int, int]] = None
    checked: int = 0
    failures: list[tuple[str, int, int]] = field(default_factory=list)


def long_exact_check(ses: ShortExact, s_max: int, t_max: int,
                     left_res: Optional[Resolution] = None,
                     right_res: Optional[Resolution] = None,
                     middle_res: Optional[Resolution] = None,
                     conn: Optional[ConnectingMap] = None) -> LESReport:
    """Validate the three-term Ext long exact sequence degreewise.

    Induced maps are computed from an independent minimal resolution of
    the middle term; exactness is checked at every slot by vanishing
    composites plus rank bookkeeping.
    """
    rl = left_res if left_res is not None else minimal_resolution(ses.left, s_max, t_max)
    rr = right_res if right_res is not None else minimal_resolution(ses.right, s_max, t_max)
    rm = middle_res if middle_res is not None else minimal_resolution(ses.middle, s_max, t_max)
    bd = conn if conn is not None else connecting_map(ses, s_max, t_max, rl, rr)
    cm_incl = lift_hom(ses.incl, rl, rm)
    cm_proj = lift_hom(ses.proj, rm, rr)
    chart_l, chart_m, chart_r = rl.chart(), rm.chart(), rr.chart()

    report = LESReport(passed=True)

    def fail(slot: str, s: int, t: int) -> None:
        report.failures.append((slot, s, t))
        if report.first_failure is None:
            report.first_failure = (slot, s, t)
        report.passed = False

    for s in range(s_max):
        for t in range(t_max + 1):
            i_star = cm_incl.ext_matrix(s, t)      # Ext(middle) -> Ext(left)
            p_star = cm_proj.ext_matrix(s, t)      # Ext(right) -> Ext(middle)
            bmat = bd.mat(s, t)                    # Ext(left)  -> Ext(right) at s+1
            p_next = cm_proj.ext_matrix(s + 1, t)
            report.checked += 1
            if not i_star.matmul(p_star).is_zero():
                fail("incl*.proj* != 0", s, t)
            if not bmat.matmul(i_star).is_zero():
                fail("boundary.incl* != 0", s, t)
            if not p_next.matmul(bmat).is_zero():
                fail("proj*.boundary != 0", s, t)
            if s == 0 and p_star.rank() != chart_r.get(0, t):
                fail("left end not injective", s, t)
            if p_star.rank() + i_star.rank() != chart_m.get(s, t):
                fail("exactness at middle", s, t)
            if i_star.rank() + bmat.rank() != chart_l.get(s, t):
                fail("exactness at left", s, t)
            if bmat.rank() + p_next.rank() != chart_r.get(s + 1, t):
                fail("exactness at right", s, t)
    return report
