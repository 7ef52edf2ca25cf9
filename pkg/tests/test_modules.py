import random

import pytest

from steenrodext.modules import (
    FreeModule,
    ModuleHom,
    build_A,
    build_A_mod_Sq1,
    cokernel,
    direct_sum,
    factor_les,
    image,
    kernel,
    min_generator_degrees,
    span_submodule,
    sq_map,
    sqZ_map,
    suspend,
    trivial_module,
    u_map,
)

T = 16


def test_A_dims(alg):
    a = build_A(alg, T)
    assert [a.dim(d) for d in range(5)] == [1, 1, 1, 2, 2]


def test_A_validates(alg):
    build_A(alg, T).validate()


def test_A_mod_sq1_dims(alg):
    m = build_A_mod_Sq1(alg, T)
    assert [m.dim(d) for d in range(4)] == [1, 0, 1, 1]
    assert m.dim(1) == 0  # the class of Sq^1 is zero in the quotient
    m.validate()


def test_A_mod_sq1_dims_against_milnor_route(alg):
    # oracle: dim(A/ASq1)^d = dim A^d - rank of right multiplication by
    # Sq^1, computed here through the Milnor product instead of Adem
    from steenrodext.gf2 import BitMatrix
    from steenrodext.steenrod import MILNOR

    m = build_A_mod_Sq1(alg, T)
    sq1 = alg.from_profile((1,))
    for d in range(1, T + 1):
        cols = []
        for p in alg.milnor_basis(d - 1):
            cols.append(alg.milnor_product(alg.from_profile(p), sq1).bits)
        rank = BitMatrix.from_columns(cols, alg.basis_dim(d)).rank()
        assert m.dim(d) == alg.basis_dim(d) - rank


def test_suspension_dims(alg):
    a = build_A(alg, T)
    s = suspend(a, 2)
    assert s.dim(2) == 1
    assert s.dim(1) == 0
    assert s.dim(0) == 0
    for d in range(T - 2):
        assert s.dim(d + 2) == a.dim(d)


def test_direct_sum_dims(alg):
    a = build_A(alg, T)
    summands = [suspend(a, 2 * i) for i in range(1, T // 2 + 1)]
    total = direct_sum(summands)
    for d in range(T + 1):
        want = sum(alg.basis_dim(d - 2 * i) for i in range(1, d // 2 + 1))
        assert total.dim(d) == want
    total.validate()


def test_free_module_dims(alg):
    fm = FreeModule(alg, T, [0, 2, 5])
    for d in range(T + 1):
        want = sum(alg.basis_dim(d - g) for g in (0, 2, 5) if g <= d)
        assert fm.dim(d) == want
    fm.as_module().validate()


def test_sq_map_generator_image(alg):
    f = sq_map(alg, T, 2)
    gen_vec = f.source.generators[0][1]
    assert f.apply(2, gen_vec) == alg.sq(2).bits
    f.verify_linear()


def test_sqz_map_rejects_n1(alg):
    with pytest.raises(ValueError):
        sqZ_map(alg, T, 1)


def test_sqz_map_generator_image_nonzero(alg):
    f = sqZ_map(alg, T, 2)
    gen_vec = f.source.generators[0][1]
    assert f.apply(2, gen_vec) != 0
    f.verify_linear()


def test_u_map_hits_augmentation_ideal(alg):
    f = u_map(alg, T)
    m = f.target
    for d in range(1, T + 1):
        assert image(f)[0].dim(d) == m.dim(d)
    assert image(f)[0].dim(0) == 0


def test_u_map_conjugate_same_image_generators(alg):
    plain = min_generator_degrees(image(u_map(alg, T))[0])
    conj = min_generator_degrees(image(u_map(alg, T, conjugate=True))[0])
    assert plain == conj


def test_kernel_image_cokernel_rank_nullity(alg):
    rng = random.Random(7)
    f = sq_map(alg, T, 3)
    K, _ = kernel(f)
    I, _ = image(f)
    C, _ = cokernel(f)
    for d in range(T + 1):
        assert f.source.dim(d) == K.dim(d) + I.dim(d)
        assert f.target.dim(d) == I.dim(d) + C.dim(d)


def test_cokernel_sq1_is_A_mod_sq1(alg):
    C, _ = cokernel(sq_map(alg, T, 1))
    m = build_A_mod_Sq1(alg, T)
    assert [C.dim(d) for d in range(T + 1)] == [m.dim(d) for d in range(T + 1)]


def test_kernel_sq2_degree3_zero(alg):
    K, _ = kernel(sq_map(alg, T, 2))
    assert K.dim(3) == 0


def test_cokernel_u_map_is_unit(alg):
    C, _ = cokernel(u_map(alg, T))
    assert C.dim(0) == 1
    assert all(C.dim(d) == 0 for d in range(1, T + 1))


def test_factor_les_identity(alg):
    a = build_A(alg, T)
    fac = factor_les(ModuleHom.identity(a))
    assert all(fac.K.dim(d) == 0 for d in range(T + 1))
    assert all(fac.C.dim(d) == 0 for d in range(T + 1))
    assert [fac.I.dim(d) for d in range(T + 1)] == [a.dim(d) for d in range(T + 1)]


def test_factor_les_sq_map_unit_survives(alg):
    fac = factor_les(sq_map(alg, T, 4))
    assert fac.C.dim(0) == 1


def test_factor_les_maps_commute(alg):
    fac = factor_les(sqZ_map(alg, T, 3))
    fac.incl_KN.verify_linear()
    fac.proj_NI.verify_linear()
    fac.incl_IM.verify_linear()
    fac.proj_MC.verify_linear()
    fac.K.validate()
    fac.I.validate()
    fac.C.validate()


def test_min_generators_A(alg):
    assert dict(min_generator_degrees(build_A(alg, T))) == {0: 1}


def test_min_generators_image_sq_map(alg):
    I, _ = image(sq_map(alg, T, 3))
    assert dict(min_generator_degrees(I)) == {3: 1}


def test_min_generators_u_image_powers_of_two(alg):
    I, _ = image(u_map(alg, T))
    want = {d: 1 for d in (2, 4, 8, 16) if d <= T}
    assert dict(min_generator_degrees(I)) == want


def test_trivial_module(alg):
    f = trivial_module(alg, T)
    assert f.dim(0) == 1 and all(f.dim(d) == 0 for d in range(1, T + 1))


def test_span_submodule_left_ideal(alg):
    # the left ideal generated by Sq^2 inside the algebra
    a = build_A(alg, 10)
    sq2_bits = alg.sq(2).bits
    sub, incl = span_submodule(a, [(2, sq2_bits)])
    incl.verify_linear()
    # degree 3 contains Sq^1 Sq^2 = Sq^3 and nothing else
    assert sub.dim(3) == 1
    assert sub.dim(2) == 1
    assert sub.dim(0) == 0


def test_truncation_soundness(alg):
    small = build_A_mod_Sq1(alg, 12)
    large = build_A_mod_Sq1(alg, 20)
    for d in range(13):
        assert small.dim(d) == large.dim(d)
    f_small = image(u_map(alg, 12))[0]
    f_large = image(u_map(alg, 20))[0]
    for d in range(13):
        assert f_small.dim(d) == f_large.dim(d)
