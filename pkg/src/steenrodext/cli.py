"""Command-line driver.

Commands: ``resolve`` (build/cache a minimal resolution), ``ext`` (print
an Ext chart), ``dmap`` (composite boundary of a factored map, both
computation routes and their diff), ``fiber`` (end-to-end fiber family
verification), ``charts`` (render a chart as table, text grid or SVG).

Exit codes: 0 success, 1 mathematical-check failure, 2 input error.
Text and table outputs avoid timestamps so identical configurations
produce byte-identical output, cache hit or miss.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path
from typing import Optional

from steenrodext.cache import CACHE_ENV_VAR, cached_resolution
from steenrodext.connecting import d_map, kernel_cokernel, two_extension, yoneda_compose
from steenrodext.fibers import FAMILIES, run_fiber
from steenrodext.modspec import (
    BUILTIN_MODULES,
    ModuleSpecError,
    build_map,
    build_module,
    canonical_text,
    parse_map_text,
    parse_module_text,
)
from steenrodext.modules import ModuleHom, factor_les, sq_map, sqZ_map, u_map
from steenrodext.render import chart_grid, chart_svg, chart_table
from steenrodext.resolution import ExtChart
from steenrodext.steenrod import SteenrodAlgebra


def _cache_dir(args) -> Optional[Path]:
    if args.cache_dir:
        return Path(args.cache_dir)
    env = os.environ.get(CACHE_ENV_VAR)
    return Path(env) if env else None


def _load_module(algebra: SteenrodAlgebra, t_max: int, spec_arg: str):
    if spec_arg.startswith("builtin:"):
        if spec_arg not in BUILTIN_MODULES:
            raise ValueError(f"unknown builtin module {spec_arg!r}")
        expr = {"kind": "builtin", "name": spec_arg}
        text = spec_arg
    else:
        expr = parse_module_text(Path(spec_arg).read_text())
        text = canonical_text(expr)
    return build_module(algebra, t_max, expr), text


def _load_map(algebra: SteenrodAlgebra, t_max: int, map_arg: str) -> tuple[ModuleHom, str]:
    if map_arg.startswith("sq:"):
        n = int(map_arg.split(":", 1)[1])
        return sq_map(algebra, t_max, n), map_arg
    if map_arg.startswith("sqz:"):
        n = int(map_arg.split(":", 1)[1])
        return sqZ_map(algebra, t_max, n), map_arg
    if map_arg.startswith("bruner-u:"):
        rest = map_arg.split(":", 1)[1]
        conjugate = False
        if rest.endswith(",conj"):
            conjugate = True
            rest = rest[: -len(",conj")]
        return u_map(algebra, t_max, int(rest), conjugate=conjugate), map_arg
    text = Path(map_arg).read_text()
    spec = parse_map_text(text)
    label = "mapfile:" + hashlib.sha256(text.encode()).hexdigest()[:16]
    return build_map(algebra, t_max, spec), label


def cmd_resolve(args) -> int:
    t_max = args.max_t
    algebra = SteenrodAlgebra(t_max)
    build, text = _load_module(algebra, t_max, args.module)
    res = cached_resolution(build.module, text, args.max_s, t_max, _cache_dir(args),
                            paranoid=args.paranoid)
    if args.paranoid:
        ok_min, where_min = res.verify_minimal()
        ok_ex, where_ex = res.verify_exact()
        if not (ok_min and ok_ex):
            print(f"error: resolution fails verification at {where_min or where_ex}",
                  file=sys.stderr)
            return 1
    chart = res.chart()
    print(f"module: {text}")
    print(f"bounds: s<={args.max_s} t<={t_max}")
    total = sum(chart.dims.values())
    print(f"generators: {total}")
    print("s\tt\tdim")
    print(chart.table())
    return 0


def cmd_ext(args) -> int:
    t_max = args.max_t
    algebra = SteenrodAlgebra(t_max)
    build, text = _load_module(algebra, t_max, args.module)
    res = cached_resolution(build.module, text, args.max_s, t_max, _cache_dir(args),
                            paranoid=args.paranoid)
    print(res.chart().table())
    return 0


def _print_dmap_blocks(title: str, dmap_obj) -> None:
    print(f"{title} blocks (s t rows cols; rows in hex):")
    for (s, t) in dmap_obj.positions():
        m = dmap_obj.mat(s, t)
        if m.nrows == 0 and m.cols == 0:
            continue
        print(f"block {s} {t} {m.nrows} {m.cols}")
        for r in m.rows:
            print(format(r, "x"))


def cmd_dmap(args) -> int:
    t_max = args.max_t
    algebra = SteenrodAlgebra(t_max)
    f, label = _load_map(algebra, t_max, args.map)
    fac = factor_les(f)
    cache_dir = _cache_dir(args)
    res = {}
    for role, module in (("K", fac.K), ("I", fac.I), ("C", fac.C)):
        res[role] = cached_resolution(module, f"{label}#{role}", args.max_s, t_max,
                                      cache_dir, paranoid=args.paranoid)
    d = d_map(fac, args.max_s, t_max, res["K"], res["I"], res["C"])
    dy = yoneda_compose(two_extension(fac), args.max_s, t_max, res["K"], res["C"])
    ker, coker = kernel_cokernel(d)
    print(f"map: {label}")
    print(f"bounds: source s<={d.s_bound} t<={d.t_bound}")
    _print_dmap_blocks("composite", d)
    _print_dmap_blocks("yoneda", dy)
    print("kernel (s t dim):")
    for (s, t), v in sorted(ker.items()):
        print(f"{s}\t{t}\t{v}")
    print("cokernel (s t dim):")
    for (s, t), v in sorted(coker.items()):
        print(f"{s}\t{t}\t{v}")
    diff = d.diff_positions(dy)
    if diff:
        print("diff: " + ", ".join(str(p) for p in diff))
        return 1
    print("diff: empty")
    return 0


def cmd_fiber(args) -> int:
    t_max = args.max_t
    algebra = SteenrodAlgebra(t_max)
    report = run_fiber(
        algebra,
        args.family,
        n=args.n,
        i_max=args.imax,
        s_max=args.max_s,
        t_max=t_max,
        conjugate=args.conjugate,
        check_dual_path=args.dual_path,
    )
    if args.format == "json":
        print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    else:
        params = " ".join(f"{k}={v}" for k, v in sorted(report.params.items()))
        print(f"fiber {report.family} ({params})")
        print(f"bounds: s<={report.s_max} t<={report.t_max}; "
              f"window: s<={report.window[0]} t<={report.window[1]}")
        for c in report.checkpoints:
            mark = "ok  " if c.passed else "FAIL"
            where = f" at (s,t)={c.where}" if (not c.passed and c.where) else ""
            print(f"checkpoint {mark} {c.name}{where}")
        print("chart (s t dim):")
        for (s, t), v in sorted(report.computed.items()):
            print(f"{s}\t{t}\t{v}")
        if report.diff:
            print("diff (s t got want):")
            for s, t, got, want in report.diff:
                print(f"{s}\t{t}\t{got}\t{want}")
        else:
            print("diff: empty")
        print(f"result: {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def cmd_charts(args) -> int:
    t_max = args.max_t
    algebra = SteenrodAlgebra(t_max)
    if args.family:
        report = run_fiber(algebra, args.family, n=args.n, i_max=args.imax,
                           s_max=args.max_s, t_max=t_max, conjugate=args.conjugate)
        if not report.passed:
            failure = report.first_failure()
            name = failure.name if failure else "chart diff"
            print(f"error: fiber verification failed at checkpoint {name}", file=sys.stderr)
            return 1
        chart = report.computed_chart()
    elif args.module:
        build, text = _load_module(algebra, t_max, args.module)
        res = cached_resolution(build.module, text, args.max_s, t_max, _cache_dir(args),
                                paranoid=args.paranoid)
        chart = res.chart()
    else:
        print("error: charts needs --family or --module", file=sys.stderr)
        return 2
    if args.format == "svg":
        out = chart_svg(chart)
    elif args.format == "text":
        out = chart_grid(chart)
    else:
        out = chart_table(chart)
    if args.output:
        Path(args.output).write_text(out + "\n")
    else:
        print(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steenrodext",
        description="Exact Ext computations over the mod-2 Steenrod algebra",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_module=False):
        p.add_argument("--max-s", type=int, default=10, help="filtration bound")
        p.add_argument("--max-t", type=int, default=20, help="internal degree bound")
        p.add_argument("--cache-dir", default=None,
                       help=f"resolution cache directory (or ${CACHE_ENV_VAR})")
        p.add_argument("--paranoid", action="store_true",
                       help="re-verify cached resolutions on load")
        if with_module:
            p.add_argument("--module", required=True,
                           help="builtin:NAME or a module spec file")

    p = sub.add_parser("resolve", help="build (and cache) a minimal resolution")
    common(p, with_module=True)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("ext", help="print the Ext chart of a module")
    common(p, with_module=True)
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("dmap", help="composite boundary of a factored map, both routes")
    common(p)
    p.add_argument("--map", required=True,
                   help="sq:N, sqz:N, bruner-u:IMAX[,conj], or a map spec file")
    p.set_defaults(func=cmd_dmap)

    p = sub.add_parser("fiber", help="verify a fiber family end to end")
    common(p)
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--imax", type=int, default=None)
    p.add_argument("--conjugate", action="store_true")
    p.add_argument("--dual-path", action="store_true",
                   help="also check the Yoneda splice against the composite")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("charts", help="render a chart")
    common(p)
    p.add_argument("--family", choices=FAMILIES, default=None)
    p.add_argument("--module", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--imax", type=int, default=None)
    p.add_argument("--conjugate", action="store_true")
    p.add_argument("--format", choices=("table", "text", "svg"), default="table")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_charts)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModuleSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
