import json
import re

import pytest

from steenrodext.cli import main
from steenrodext.render import svg_plotted_classes


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def chart_rows(out):
    rows = set()
    for line in out.splitlines():
        m = re.fullmatch(r"(\d+)\t(\d+)\t(\d+)", line)
        if m:
            rows.add((int(m.group(1)), int(m.group(2)), int(m.group(3))))
    return rows


def test_resolve_builtin_tower(capsys):
    code, out, _ = run(capsys, "resolve", "--module", "builtin:A/ASq1",
                       "--max-s", "6", "--max-t", "10")
    assert code == 0
    assert chart_rows(out) == {(s, s, 1) for s in range(7)}


def test_resolve_builtin_A(capsys):
    code, out, _ = run(capsys, "resolve", "--module", "builtin:A",
                       "--max-s", "4", "--max-t", "8")
    assert code == 0
    assert chart_rows(out) == {(0, 0, 1)}


def test_resolve_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.mod"
    bad.write_text("free ???")
    code, _, err = run(capsys, "resolve", "--module", str(bad),
                       "--max-s", "2", "--max-t", "4")
    assert code == 2
    assert "line 1" in err


def test_resolve_unknown_builtin(capsys):
    code, _, err = run(capsys, "resolve", "--module", "builtin:nope",
                       "--max-s", "2", "--max-t", "4")
    assert code == 2
    assert "unknown builtin" in err


def test_ext_module_file(tmp_path, capsys):
    spec = tmp_path / "m.mod"
    spec.write_text("cyclic 0 / Sq1\n")
    code, out, _ = run(capsys, "ext", "--module", str(spec), "--max-s", "5", "--max-t", "8")
    assert code == 0
    assert chart_rows(out) == {(s, s, 1) for s in range(6)}


def test_dmap_sq5(capsys):
    code, out, _ = run(capsys, "dmap", "--map", "sq:5", "--max-s", "6", "--max-t", "12")
    assert code == 0
    assert "diff: empty" in out
    body = out.split("cokernel (s t dim):", 1)[1]
    assert chart_rows(body) == {(0, 0, 1), (1, 5, 1)}


def test_dmap_sqz1_rejected(capsys):
    code, _, err = run(capsys, "dmap", "--map", "sqz:1", "--max-s", "4", "--max-t", "8")
    assert code == 2
    assert "sqz requires n >= 2" in err


def test_dmap_bruner_u_kernel(capsys):
    code, out, _ = run(capsys, "dmap", "--map", "bruner-u:6", "--max-s", "6", "--max-t", "12")
    assert code == 0
    body = out.split("kernel (s t dim):", 1)[1].split("cokernel", 1)[0]
    assert chart_rows(body) == {(0, 5, 1), (0, 9, 1), (0, 11, 1)}


def test_fiber_fn3(capsys):
    code, out, _ = run(capsys, "fiber", "--family", "Fn", "--n", "3",
                       "--max-s", "7", "--max-t", "12")
    assert code == 0
    assert "result: PASS" in out
    assert "diff: empty" in out


def test_fiber_fnz1_error(capsys):
    code, _, err = run(capsys, "fiber", "--family", "FnZ", "--n", "1",
                       "--max-s", "6", "--max-t", "10")
    assert code == 2
    assert "sqz requires n >= 2" in err


def test_fiber_json(capsys):
    code, out, _ = run(capsys, "fiber", "--family", "Fn", "--n", "2",
                       "--max-s", "6", "--max-t", "10", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert [0, 0, 1] in doc["chart"]


def test_fiber_f_small(capsys):
    code, out, _ = run(capsys, "fiber", "--family", "F", "--max-s", "7",
                       "--max-t", "14", "--dual-path")
    assert code == 0
    assert "checkpoint ok   dual_path_equality".replace("   ", "  ") in out or \
        "dual_path_equality" in out
    assert "result: PASS" in out


def test_byte_determinism_and_cache(tmp_path, capsys):
    cache = tmp_path / "cache"
    args = ("resolve", "--module", "builtin:A/ASq1", "--max-s", "6",
            "--max-t", "10", "--cache-dir", str(cache))
    code1, out1, _ = run(capsys, *args)
    files = list(cache.glob("resolution-*.json"))
    assert code1 == 0 and len(files) == 1
    code2, out2, _ = run(capsys, *args)  # cache hit
    assert code2 == 0
    assert out1 == out2


def test_cache_corruption_forces_rebuild(tmp_path, capsys):
    cache = tmp_path / "cache"
    args = ("ext", "--module", "builtin:A/ASq1", "--max-s", "5",
            "--max-t", "8", "--cache-dir", str(cache))
    code1, out1, _ = run(capsys, *args)
    (path,) = cache.glob("resolution-*.json")
    path.write_text("{not json")
    code2, out2, _ = run(capsys, *args)
    assert (code1, out1) == (code2, out2)


def test_cache_paranoid_detects_bad_payload(tmp_path, capsys):
    cache = tmp_path / "cache"
    args = ["ext", "--module", "builtin:A/ASq1", "--max-s", "5",
            "--max-t", "8", "--cache-dir", str(cache)]
    code1, out1, _ = run(capsys, *args)
    (path,) = cache.glob("resolution-*.json")
    payload = json.loads(path.read_text())
    payload["stages"][1] = []          # drop all stage-1 generators
    payload["images"][1] = []
    path.write_text(json.dumps(payload))
    code2, out2, _ = run(capsys, *(args + ["--paranoid"]))
    assert (code2, out2) == (code1, out1)


def test_charts_svg_matches_table(tmp_path, capsys):
    code, table_out, _ = run(capsys, "charts", "--module", "builtin:A/ASq1",
                             "--max-s", "5", "--max-t", "8", "--format", "table")
    assert code == 0
    code, svg_out, _ = run(capsys, "charts", "--module", "builtin:A/ASq1",
                           "--max-s", "5", "--max-t", "8", "--format", "svg")
    assert code == 0
    assert svg_plotted_classes(svg_out) == chart_rows(table_out)


def test_charts_family_output_file(tmp_path, capsys):
    out_file = tmp_path / "chart.tsv"
    code, _, _ = run(capsys, "charts", "--family", "Fn", "--n", "2",
                     "--max-s", "6", "--max-t", "10", "--output", str(out_file))
    assert code == 0
    assert chart_rows(out_file.read_text()) == {(0, 0, 1), (1, 2, 1)}


def test_charts_text_grid(capsys):
    code, out, _ = run(capsys, "charts", "--module", "builtin:A", "--max-s", "3",
                       "--max-t", "6", "--format", "text")
    assert code == 0
    assert "(stem)" in out


def test_charts_needs_target(capsys):
    code, _, err = run(capsys, "charts", "--max-s", "3", "--max-t", "6")
    assert code == 2
    assert "needs --family or --module" in err
