"""End-to-end E3 chart verification for the three fiber families.

Each family builds its cohomology map, factors the long exact sequence,
computes the composite boundary two independent ways, checks every
supporting fact as a named checkpoint, and diffs the resulting chart
against the closed-form answer.  The reported window shrinks by the
boundary's bidegree shift so bound truncation can never fabricate or
lose a class inside it.

Families:

* ``Fn``  - fiber of the squaring operation on the mod-2 class, n >= 1;
  chart: unit plus one class at (1, n).
* ``FnZ`` - fiber of the squaring operation on the integral class,
  n >= 2; chart: h0-tower plus one class at (1, n).
* ``F``   - fiber of the product of all even squaring operations on the
  integral class; chart: h0-tower, one class at (1, 2^j) per j >= 1,
  and one class at (0, 2i-1) per i > 0 not a power of two.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from steenrodext.connecting import (
    ConnectingMap,
    DMap,
    compose_boundaries,
    connecting_map,
    e3_chart,
    kernel_cokernel,
    two_extension,
    yoneda_compose,
)
from steenrodext.modules import factor_les, min_generator_degrees, sq_map, sqZ_map, u_map
from steenrodext.resolution import ExtChart, minimal_resolution
from steenrodext.steenrod import SteenrodAlgebra

FAMILIES = ("Fn", "FnZ", "F")


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


class ClosedFormChart:
    """Symbolic chart: unit, h0-tower, single classes, and the two
    parametric families used by the product fiber.  Evaluates to exact
    per-(s,t) dimensions within any bounds."""

    def __init__(self, summands: list[tuple], label: str = ""):
        self.summands = summands
        self.label = label

    def evaluate(self, s_max: int, t_max: int) -> dict[tuple[int, int], int]:
        dims: dict[tuple[int, int], int] = {}

        def add(s: int, t: int) -> None:
            if 0 <= s <= s_max and 0 <= t <= t_max:
                dims[(s, t)] = dims.get((s, t), 0) + 1

        for summand in self.summands:
            kind = summand[0]
            if kind == "unit":
                add(0, 0)
            elif kind == "h0_tower":
                for s in range(s_max + 1):
                    add(s, s)
            elif kind == "class":
                add(summand[1], summand[2])
            elif kind == "h_family":
                j = 1
                while (1 << j) <= t_max:
                    add(1, 1 << j)
                    j += 1
            elif kind == "nonpower_family":
                i_cap = summand[1]
                for i in range(2, i_cap + 1):
                    if not _is_power_of_two(i):
                        add(0, 2 * i - 1)
            else:
                raise ValueError(f"unknown summand kind {kind!r}")
        return dims

    def to_chart(self, s_max: int, t_max: int) -> ExtChart:
        return ExtChart(s_max, t_max, self.evaluate(s_max, t_max))


def expected_chart(family: str, n: Optional[int] = None, i_max: Optional[int] = None) -> ClosedFormChart:
    """Closed-form E3 chart for a fiber family."""
    if family == "Fn":
        if n is None or n < 1:
            raise ValueError("family Fn needs n >= 1")
        return ClosedFormChart([("unit",), ("class", 1, n)], label=f"Fn(n={n})")
    if family == "FnZ":
        if n is None or n < 2:
            raise ValueError(
                "family FnZ needs n >= 2: the n = 1 operation is zero on the "
                "integral class and the fiber splits"
            )
        return ClosedFormChart([("h0_tower",), ("class", 1, n)], label=f"FnZ(n={n})")
    if family == "F":
        cap = i_max if i_max is not None else 1 << 30
        return ClosedFormChart(
            [("h0_tower",), ("h_family",), ("nonpower_family", cap)], label="F"
        )
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


@dataclass
class Checkpoint:
    name: str
    passed: bool
    detail: str = ""
    where: Optional[tuple[int, int]] = None


@dataclass
class FiberReport:
    """Per-lemma checkpoint results plus the computed-vs-expected diff."""

    family: str
    params: dict
    s_max: int
    t_max: int
    window: tuple[int, int]
    checkpoints: list[Checkpoint] = field(default_factory=list)
    computed: dict[tuple[int, int], int] = field(default_factory=dict)
    expected: dict[tuple[int, int], int] = field(default_factory=dict)
    diff: list[tuple[int, int, int, int]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checkpoints) and not self.diff

    def first_failure(self) -> Optional[Checkpoint]:
        for c in self.checkpoints:
            if not c.passed:
                return c
        return None

    def computed_chart(self) -> ExtChart:
        return ExtChart(self.window[0], self.window[1], self.computed)

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "bounds": {"s_max": self.s_max, "t_max": self.t_max},
            "window": {"s": self.window[0], "t": self.window[1]},
            "checkpoints": [
                {"name": c.name, "passed": c.passed, "detail": c.detail,
                 "where": list(c.where) if c.where else None}
                for c in self.checkpoints
            ],
            "chart": [[s, t, d] for (s, t), d in sorted(self.computed.items())],
            "expected": [[s, t, d] for (s, t), d in sorted(self.expected.items())],
            "diff": [list(row) for row in self.diff],
            "passed": self.passed,
            "elapsed_seconds": self.elapsed,
        }


class _CheckFailed(Exception):
    pass


class _Checker:
    def __init__(self) -> None:
        self.checkpoints: list[Checkpoint] = []

    def check(self, name: str, ok: bool, detail: str = "",
              where: Optional[tuple[int, int]] = None) -> None:
        self.checkpoints.append(Checkpoint(name, ok, detail, where))
        if not ok:
            raise _CheckFailed()


def _connecting_iso_region(conn: ConnectingMap, chart_src: ExtChart, chart_tgt: ExtChart,
                           s_range, t_range) -> Optional[tuple[int, int]]:
    """First (s, t) where the boundary fails to be an isomorphism."""
    for s in s_range:
        for t in t_range:
            src = chart_src.get(s, t)
            tgt = chart_tgt.get(s + 1, t)
            r = conn.mat(s, t).rank()
            if not (r == src == tgt):
                return (s, t)
    return None


def _connecting_injective(conn: ConnectingMap, chart_src: ExtChart,
                          s_range, t_range) -> Optional[tuple[int, int]]:
    for s in s_range:
        for t in t_range:
            if conn.mat(s, t).rank() != chart_src.get(s, t):
                return (s, t)
    return None


def _connecting_coker(conn: ConnectingMap, chart_tgt: ExtChart,
                      s_hi: int, t_hi: int) -> dict[tuple[int, int], int]:
    """Cokernel dimensions of the boundary at target positions."""
    out: dict[tuple[int, int], int] = {}
    for s2 in range(s_hi + 1):
        for t2 in range(t_hi + 1):
            dim = chart_tgt.get(s2, t2)
            if not dim:
                continue
            r = conn.mat(s2 - 1, t2).rank() if s2 >= 1 else 0
            if dim - r:
                out[(s2, t2)] = dim - r
    return out


def run_fiber(
    algebra: SteenrodAlgebra,
    family: str,
    n: Optional[int] = None,
    i_max: Optional[int] = None,
    s_max: int = 10,
    t_max: int = 20,
    conjugate: bool = False,
    check_dual_path: bool = False,
) -> FiberReport:
    """Build a fiber family's boundary data and verify it checkpoint by
    checkpoint, halting at the first failure.

    The chart diff is taken over the window (s_max - 2, t_max - 2); with
    ``check_dual_path`` the Yoneda splice is computed as well and must
    agree with the boundary composite entrywise.
    """
    start = time.perf_counter()
    window = (s_max - 2, t_max - 2)
    if family == "Fn":
        if n is None or n < 1:
            raise ValueError("family Fn needs n >= 1")
        f = sq_map(algebra, t_max, n)
        params = {"n": n}
    elif family == "FnZ":
        if n is None:
            raise ValueError("family FnZ needs n")
        f = sqZ_map(algebra, t_max, n)  # raises for n = 1
        params = {"n": n}
    elif family == "F":
        if i_max is None:
            i_max = t_max // 2
        f = u_map(algebra, t_max, i_max, conjugate=conjugate)
        params = {"i_max": i_max, "conjugate": conjugate}
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")

    report = FiberReport(family, params, s_max, t_max, window)
    ck = _Checker()
    report.checkpoints = ck.checkpoints

    try:
        fac = factor_les(f)
        rk = minimal_resolution(fac.K, s_max, t_max)
        ri = minimal_resolution(fac.I, s_max, t_max)
        rc = minimal_resolution(fac.C, s_max, t_max)
        chart_K, chart_I, chart_C = rk.chart(), ri.chart(), rc.chart()
        d_ik = connecting_map(fac.ses_ik(), s_max, t_max, rk, ri)
        d_ci = connecting_map(fac.ses_ci(), s_max, t_max, ri, rc)

        if family in ("Fn", "FnZ"):
            where = _connecting_iso_region(d_ik, chart_K, chart_I,
                                           range(s_max), range(t_max + 1))
            ck.check("first_boundary_iso", where is None,
                     "kernel-to-image boundary is an isomorphism in every bidegree",
                     where)
        if family == "Fn":
            where = _connecting_iso_region(d_ci, chart_I, chart_C,
                                           range(1, s_max), range(t_max + 1))
            ck.check("second_boundary_iso_above_filtration_zero", where is None,
                     "image-to-cokernel boundary is an isomorphism for s >= 1", where)
            hom_ok = (
                all(chart_I.get(0, t) == (1 if t == n else 0) for t in range(t_max + 1))
                and d_ci.mat(0, n).rank() == 1
                and chart_C.get(1, n) == 1
            )
            ck.check("second_boundary_hom_class", hom_ok,
                     f"the unique filtration-zero class maps onto (1, {n})")
            coker_ci = _connecting_coker(d_ci, chart_C, s_max, t_max)
            ck.check("unit_class_survives", coker_ci == {(0, 0): 1},
                     "the unit is the only class outside the shifted boundary image",
                     None if coker_ci == {(0, 0): 1} else min(set(coker_ci) ^ {(0, 0)}))
        elif family == "FnZ":
            stem_bad = [
                (s, t)
                for (s, t) in chart_I.positions()
                if t - s < n
            ]
            ck.check("image_stem_vanishing", not stem_bad,
                     f"image chart vanishes in stems below {n}",
                     stem_bad[0] if stem_bad else None)
            where = _connecting_injective(d_ci, chart_I, range(s_max), range(t_max + 1))
            ck.check("second_boundary_injective", where is None,
                     "image-to-cokernel boundary is injective", where)
            coker_ci = _connecting_coker(d_ci, chart_C, s_max, t_max)
            tower = {(s, s): 1 for s in range(s_max + 1)}
            ck.check("second_boundary_cokernel_tower", coker_ci == tower,
                     "cokernel of the second boundary is the h0-tower",
                     None if coker_ci == tower else min(set(coker_ci) ^ set(tower)))
            hom_ok = (
                all(chart_I.get(0, t) == (1 if t == n else 0) for t in range(t_max + 1))
                and d_ci.mat(0, n).rank() == 1
            )
            ck.check("hom_class_lands_in_filtration_one", hom_ok,
                     f"the degree-{n} functional maps to a class at (1, {n})")
        else:  # family F
            coverage = min(t_max, 2 * i_max + 1)
            M = fac.f.target
            aug_ok = fac.I.dim(0) == 0 and all(
                fac.I.dim(d) == M.dim(d) for d in range(1, coverage + 1)
            )
            ck.check("image_is_augmentation_ideal", aug_ok,
                     "the image is everything above degree zero")
            cok_ok = fac.C.dim(0) == 1 and all(fac.C.dim(d) == 0 for d in range(1, coverage + 1))
            ck.check("cokernel_is_unit", cok_ok,
                     "the cokernel is one-dimensional, in degree zero")
            gens = min_generator_degrees(fac.I)
            want = {1 << j: 1 for j in range(1, coverage.bit_length()) if (1 << j) <= coverage}
            got = {d: c for d, c in gens.items() if d <= coverage}
            ck.check("min_generators_powers_of_two", got == want,
                     "the image needs exactly one generator in each power-of-two degree",
                     min(set(got) ^ set(want)) if got != want else None)
            # first boundary: kernel supported on non-power degrees in
            # filtration zero, surjective in positive filtrations
            bad = None
            for t in range(window[1] + 2):
                src = chart_K.get(0, t)
                r = d_ik.mat(0, t).rank()
                expect_ker = 1 if (t % 2 == 0 and t >= 2 and not _is_power_of_two(t // 2)
                                   and t // 2 <= i_max) else 0
                if src - r != expect_ker or r != chart_I.get(1, t):
                    bad = (0, t)
                    break
            ck.check("first_boundary_kernel_nonpowers", bad is None,
                     "filtration-zero kernel sits exactly on the non-power degrees", bad)
            where = _connecting_iso_region(d_ik, chart_K, chart_I,
                                           range(1, s_max), range(window[1] + 2))
            ck.check("first_boundary_iso_above_filtration_zero", where is None,
                     "kernel-to-image boundary is an isomorphism for s >= 1", where)
            where = _connecting_injective(d_ci, chart_I, range(s_max), range(window[1] + 2))
            ck.check("second_boundary_injective", where is None,
                     "image-to-cokernel boundary is injective", where)
            coker_ci = _connecting_coker(d_ci, chart_C, s_max, window[1] + 1)
            tower = {(s, s): 1 for s in range(s_max + 1) if s <= window[1] + 1}
            ck.check("second_boundary_cokernel_tower", coker_ci == tower,
                     "cokernel of the second boundary is the h0-tower",
                     None if coker_ci == tower else min(set(coker_ci) ^ set(tower)))

        d = compose_boundaries(d_ik, d_ci, s_max, t_max, label=f.name)
        ker, coker = kernel_cokernel(d)
        ker_w = {p: v for p, v in ker.items() if p[0] <= window[0] and p[1] <= window[1]}
        coker_w = {p: v for p, v in coker.items() if p[0] <= window[0] and p[1] <= window[1]}

        if family == "Fn":
            ck.check("d_injective", not ker_w, "the composite boundary has zero kernel",
                     min(ker_w) if ker_w else None)
            want_coker = {(0, 0): 1}
            if n <= window[1]:
                want_coker[(1, n)] = 1
            ck.check("d_cokernel_two_classes", coker_w == want_coker,
                     "cokernel is the unit plus one class",
                     min(set(coker_w) ^ set(want_coker)) if coker_w != want_coker else None)
        elif family == "FnZ":
            ck.check("d_injective", not ker_w, "the composite boundary has zero kernel",
                     min(ker_w) if ker_w else None)
            want_coker = {(s, s): 1 for s in range(min(s_max, window[0]) + 1) if s <= window[1]}
            if n <= window[1]:
                want_coker[(1, n)] = 1
            ck.check("d_cokernel_tower_plus_class", coker_w == want_coker,
                     "cokernel is the h0-tower plus one class",
                     min(set(coker_w) ^ set(want_coker)) if coker_w != want_coker else None)
        else:
            want_ker = {}
            for i in range(2, i_max + 1):
                if not _is_power_of_two(i) and 2 * i - 1 <= window[1]:
                    want_ker[(0, 2 * i - 1)] = 1
            ck.check("d_kernel_nonpower_stems", ker_w == want_ker,
                     "kernel classes sit at stems 2i-1 for non-power i",
                     min(set(ker_w) ^ set(want_ker)) if ker_w != want_ker else None)
            want_coker = {(s, s): 1 for s in range(window[0] + 1) if s <= window[1]}
            j = 1
            while (1 << j) <= window[1]:
                want_coker[(1, 1 << j)] = 1
                j += 1
            ck.check("d_cokernel_tower_plus_h_classes", coker_w == want_coker,
                     "cokernel is the h0-tower plus the power-of-two classes",
                     min(set(coker_w) ^ set(want_coker)) if coker_w != want_coker else None)

        if check_dual_path:
            te = two_extension(fac)
            dy = yoneda_compose(te, s_max, t_max, rk, rc)
            diff = d.diff_positions(dy)
            ck.check("dual_path_equality", not diff,
                     "boundary composite equals the Yoneda splice entrywise",
                     diff[0] if diff else None)

        chart = e3_chart(d)
        computed = {
            p: v for p, v in chart.dims.items() if p[0] <= window[0] and p[1] <= window[1]
        }
        expected = expected_chart(
            family, n=n, i_max=i_max if family == "F" else None
        ).evaluate(window[0], window[1])
        report.computed = computed
        report.expected = expected
        diff_rows = []
        for p in sorted(set(computed) | set(expected)):
            got, want = computed.get(p, 0), expected.get(p, 0)
            if got != want:
                diff_rows.append((p[0], p[1], got, want))
        report.diff = diff_rows
        ck.check("chart_matches_closed_form", not diff_rows,
                 "computed chart equals the closed form inside the window",
                 (diff_rows[0][0], diff_rows[0][1]) if diff_rows else None)
    except _CheckFailed:
        pass
    report.elapsed = time.perf_counter() - start
    return report


def sparsity_collapse_check(chart: ExtChart, r_min: int = 3) -> list[tuple[int, tuple[int, int], tuple[int, int]]]:
    """Potential higher-differential pairs left in a chart.

    Lists every (r, source, target) with r >= r_min where both the
    source (s, t) and the target (s + r, t + r - 1) are nonzero.  An
    empty list certifies collapse by sparsity alone; remaining pairs
    need an argument beyond chart bookkeeping.
    """
    out = []
    positions = set(chart.dims)
    for (s, t) in sorted(positions):
        for r in range(r_min, chart.s_max - s + 1):
            tgt = (s + r, t + r - 1)
            if tgt[1] <= chart.t_max and tgt in positions:
                out.append((r, (s, t), tgt))
    return out


def projection_filtration_report(i: int, chart_F: ExtChart, chart_FnZ: ExtChart) -> str:
    """Compare the stem-(2i-1) class position in the product-fiber chart
    with its position in the single-operation integral fiber chart.

    Returns "preserves" when both sit at (1, 2i) and "raises_by_one"
    when the product-fiber class sits in filtration zero instead.
    """
    if 2 * i > chart_F.t_max or 2 * i > chart_FnZ.t_max:
        raise ValueError("charts do not reach stem 2i-1")
    if chart_FnZ.get(1, 2 * i) != 1:
        raise ValueError(f"single-operation chart has no class at (1, {2 * i})")
    stem = 2 * i - 1
    positions = [(s, t) for (s, t) in chart_F.dims if t - s == stem]
    if len(positions) != 1:
        raise ValueError(f"expected a unique stem-{stem} class, found {positions}")
    s, t = positions[0]
    if (s, t) == (1, 2 * i):
        return "preserves"
    if (s, t) == (0, 2 * i - 1):
        return "raises_by_one"
    raise ValueError(f"stem-{stem} class at unexpected position {(s, t)}")
