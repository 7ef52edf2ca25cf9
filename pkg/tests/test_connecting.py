import pytest

from steenrodext.connecting import (
    connecting_map,
    d_map,
    e3_chart,
    kernel_cokernel,
    long_exact_check,
    two_extension,
    yoneda_compose,
)
from steenrodext.gf2 import BitMatrix
from steenrodext.modules import (
    ModuleHom,
    ShortExact,
    build_A_mod_Sq1,
    direct_sum,
    factor_les,
    sq_map,
    sqZ_map,
    u_map,
)
from steenrodext.resolution import minimal_resolution

S, T = 6, 14


def split_map(alg, m):
    """(m + m) -> (m + m), (x, y) |-> (y, 0): split kernel/image/cokernel."""
    s1 = direct_sum([m, m])
    s2 = direct_sum([m, m])
    mats = []
    for d in range(m.t_max + 1):
        k = m.dim(d)
        cols = [0] * (2 * k)
        for j in range(k):
            cols[k + j] = 1 << j
        mats.append(BitMatrix.from_columns(cols, 2 * k))
    return ModuleHom(s1, s2, mats)


def test_connecting_second_ses_iso_above_zero(alg):
    fac = factor_les(sq_map(alg, T, 2))
    ri = minimal_resolution(fac.I, S, T)
    rc = minimal_resolution(fac.C, S, T)
    conn = connecting_map(fac.ses_ci(), S, T, ri, rc)
    ci, cc = ri.chart(), rc.chart()
    for s in range(1, S):
        for t in range(T + 1):
            r = conn.mat(s, t).rank()
            assert r == ci.get(s, t) == cc.get(s + 1, t)


def test_connecting_first_ses_iso_everywhere(alg):
    fac = factor_les(sq_map(alg, T, 2))
    rk = minimal_resolution(fac.K, S, T)
    ri = minimal_resolution(fac.I, S, T)
    conn = connecting_map(fac.ses_ik(), S, T, rk, ri)
    ck, ci = rk.chart(), ri.chart()
    for s in range(S):
        for t in range(T + 1):
            assert conn.mat(s, t).rank() == ck.get(s, t) == ci.get(s + 1, t)


def test_connecting_split_is_zero(alg):
    m = build_A_mod_Sq1(alg, T)
    f = split_map(alg, m)
    fac = factor_les(f)
    conn = connecting_map(fac.ses_ik(), 4, T)
    for s in range(4):
        for t in range(T + 1):
            assert conn.mat(s, t).is_zero()


def test_connecting_rejects_nonexact(alg):
    m = build_A_mod_Sq1(alg, T)
    bad = ShortExact(ModuleHom.identity(m), ModuleHom.identity(m))
    with pytest.raises(AssertionError):
        connecting_map(bad, 3, T)


def test_dmap_bidegree_bookkeeping(alg):
    fac = factor_les(sq_map(alg, T, 3))
    d = d_map(fac, S, T)
    for (s, t), mat in d.mats.items():
        assert mat.cols == d.chart_K.get(s, t + 1)
        assert mat.nrows == d.chart_C.get(s + 2, t + 1)


def test_dmap_sq_n_injective_two_class_cokernel(alg):
    for n in (2, 4):
        fac = factor_les(sq_map(alg, T, n))
        d = d_map(fac, S, T)
        ker, coker = kernel_cokernel(d)
        assert ker == {}
        want = {(0, 0): 1, (1, n): 1}
        assert {p: v for p, v in coker.items() if p[0] <= d.s_bound} == want


def test_dmap_sqz_cokernel_tower_plus_class(alg):
    n = 3
    fac = factor_les(sqZ_map(alg, T, n))
    d = d_map(fac, S, T)
    ker, coker = kernel_cokernel(d)
    assert ker == {}
    region = {p: v for p, v in coker.items() if p[0] <= d.s_bound and p[1] <= d.t_bound}
    want = {(s, s): 1 for s in range(d.s_bound + 1)}
    want[(1, n)] = 1
    assert region == want


def test_dmap_u_kernel_on_nonpower_stems(alg):
    fac = factor_les(u_map(alg, T))
    d = d_map(fac, S, T)
    ker, _ = kernel_cokernel(d)
    window_t = d.t_bound - 1
    got = {p: v for p, v in ker.items() if p[1] <= window_t}
    want = {(0, 2 * i - 1): 1 for i in (3, 5, 6) if 2 * i - 1 <= window_t}
    assert got == want


def test_e3_chart_examples(alg):
    fac = factor_les(sq_map(alg, T, 3))
    chart = e3_chart(d_map(fac, S, T))
    assert chart.dims == {(0, 0): 1, (1, 3): 1}


def test_yoneda_agrees_with_composite_sq3(alg):
    fac = factor_les(sq_map(alg, T, 3))
    rk = minimal_resolution(fac.K, S, T)
    ri = minimal_resolution(fac.I, S, T)
    rc = minimal_resolution(fac.C, S, T)
    d = d_map(fac, S, T, rk, ri, rc)
    dy = yoneda_compose(two_extension(fac), S, T, rk, rc)
    assert d.entrywise_equal(dy)
    assert d.diff_positions(dy) == []


def test_yoneda_agrees_with_composite_u(alg):
    fac = factor_les(u_map(alg, T))
    rk = minimal_resolution(fac.K, S, T)
    ri = minimal_resolution(fac.I, S, T)
    rc = minimal_resolution(fac.C, S, T)
    d = d_map(fac, S, T, rk, ri, rc)
    dy = yoneda_compose(two_extension(fac), S, T, rk, rc)
    assert d.entrywise_equal(dy)


def test_yoneda_split_is_zero(alg):
    m = build_A_mod_Sq1(alg, T)
    fac = factor_les(split_map(alg, m))
    dy = yoneda_compose(two_extension(fac), 4, T)
    assert all(mat.is_zero() for mat in dy.mats.values())


def test_kernel_cokernel_zero_map(alg):
    m = build_A_mod_Sq1(alg, T)
    fac = factor_les(split_map(alg, m))
    d = d_map(fac, 4, T)
    ker, coker = kernel_cokernel(d)
    for (s, t), v in ker.items():
        assert v == d.source_dim(s, t)
    # every target class survives
    for s2 in range(d.s_bound + 3):
        for t2 in range(d.t_bound + 2):
            dim = d.target_dim(s2, t2)
            if dim:
                assert coker.get((s2, t2)) == dim


def test_long_exact_check_sq2(alg):
    fac = factor_les(sq_map(alg, T, 2))
    for ses in (fac.ses_ik(), fac.ses_ci()):
        report = long_exact_check(ses, 5, T)
        assert report.passed, report.first_failure


def test_long_exact_check_u(alg):
    fac = factor_les(u_map(alg, 12))
    for ses in (fac.ses_ik(), fac.ses_ci()):
        report = long_exact_check(ses, 4, 12)
        assert report.passed, report.first_failure


def test_long_exact_check_detects_corruption(alg):
    fac = factor_les(sq_map(alg, T, 2))
    ses = fac.ses_ci()
    rl = minimal_resolution(ses.left, 5, T)
    rr = minimal_resolution(ses.right, 5, T)
    conn = connecting_map(ses, 5, T, rl, rr)
    # corrupt the first nonempty boundary block
    for s in range(5):
        for t in range(T + 1):
            m = conn.mat(s, t)
            if m.nrows and m.cols:
                conn._mats[(s, t)] = BitMatrix((m.rows[0] ^ 1,) + m.rows[1:], m.cols)
                report = long_exact_check(ses, 5, T, rl, rr, conn=conn)
                assert not report.passed
                assert report.first_failure is not None
                return
    raise AssertionError("no nonempty boundary block found")
