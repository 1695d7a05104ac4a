"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import dataclasses
import importlib
import io
import json
import re
import subprocess
import sys
import time

import numpy as np
import pytest

from spheredeg.cli import main
from spheredeg.constructors import build_alpha, degree_table, power_pair
from spheredeg.degree import SphereMapEval, pl_degree, winding_number
from spheredeg.fields import FuncField, PolyField, suspend_field
from spheredeg.index import check_lemma21, index_at, verify_homotopy_nonvanishing
from spheredeg.mesh import build_mesh
from spheredeg.morse import bundled_scenarios, morse_check


@pytest.fixture
def verdict(capsys):
    def emit(label, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, f"{label}: {detail}"
    return emit


def test_criterion_1_degree_realization(verdict):
    t0 = time.perf_counter()
    rows = degree_table(1, -6, 6) + degree_table(2, -4, 4, n_min=2) + degree_table(3, -3, 3, n_min=3)
    elapsed = time.perf_counter() - t0
    wrong = [r for r in rows if r["degree"] != r["m"]]
    methods_ok = all(("winding" in r["method"]) == (r["n"] == 1) for r in rows)
    verdict("1 degree realization", not wrong and methods_ok and len(rows) == 13 + 9 + 7 and elapsed < 60,
            f"{len(rows)} maps, {len(wrong)} wrong, {elapsed:.1f}s (budget 60s)")


def test_criterion_2_suspension_signs(verdict):
    bad = []
    for m in range(5):
        for sign in (1, -1):
            rep = check_lemma21(power_pair(m), sign, 1.0)
            if rep.suspended_index != sign * m or not rep.relation_holds:
                bad.append((m, sign, rep.suspended_index))
    rng = np.random.default_rng(2)
    checked = 0
    while checked < 30:
        d = 2 if checked < 15 else 3
        a = rng.integers(-3, 4, size=(d, d))
        det = round(np.linalg.det(a))
        # integer entries, so the rounded determinant is exact
        if det == 0 or np.linalg.cond(a) > 6:
            continue
        got = index_at(PolyField.linear(a), np.zeros(d), 0.5, seed=checked).index
        if got != np.sign(det):
            bad.append((a.tolist(), got))
        checked += 1
    verdict("2 suspension sign relations", not bad, f"10 power-pair cases + 30 linear fields, mismatches={bad}")


def _cubic_damped(m, sign):
    lifted = [[(t.coeff, t.exponents + (0,)) for t in c] for c in power_pair(m).components]
    return PolyField(3, lifted + [[(float(sign), (0, 0, 3))]])


def test_criterion_3_homotopy_argument(verdict):
    mins = {}
    for m in range(5):
        for sign in (1, -1):
            rep = verify_homotopy_nonvanishing(_cubic_damped(m, sign), suspend_field(power_pair(m), sign),
                                               0.1, grid=20)
            mins[(m, sign)] = rep.min_norm
    counter = verify_homotopy_nonvanishing(PolyField.identity(2), PolyField.linear(np.diag([1, -1])),
                                           0.1, grid=20)
    worst = min(mins.values())
    ok = worst > 1e-3 and counter.min_norm < 1e-6 and counter.witness_t == 0.5
    verdict("3 homotopy argument", ok,
            f"pairs min-norm worst={worst:.4e} (need > 1e-3), per (m, sign): "
            + ", ".join(f"{k}={v:.3e}" for k, v in mins.items()) + "; "
            f"counterexample min-norm={counter.min_norm:.1e} at t={counter.witness_t}")


def test_criterion_4_morse_formula(verdict):
    t0 = time.perf_counter()
    reports = {sc.name: morse_check(sc, double=False) for sc in bundled_scenarios()}
    elapsed = time.perf_counter() - t0
    failing = [k for k, r in reports.items() if r.Ind_V + r.Ind_dminusV != r.chi_M]
    saddle = reports["ball_saddle"]
    saddle_ok = saddle.Ind_V == -1 and saddle.Ind_dminusV == 2
    degenerate = reports["disk_power2"].Ind_V == 2
    ok = len(reports) == 8 and not failing and saddle_ok and degenerate and elapsed < 30
    verdict("4 Morse index formula", ok,
            f"{len(reports)} scenarios, failing={failing}, ball_saddle Ind(d-V)={saddle.Ind_dminusV}, "
            f"{elapsed:.1f}s (budget 30s)")


def test_criterion_5_doubling(verdict):
    bad, spots = [], 0
    for sc in bundled_scenarios():
        rep = morse_check(sc)
        s, target, eq = rep.doubling_check
        if not eq or s != target:
            bad.append(sc.name)
        spots += sum(1 for c in rep.doubling["spot_checks"] if c["computed"] == c["predicted"])
    verdict("5 doubling identity", not bad and spots >= 1, f"mismatching={bad}, matching spot checks={spots}")


def _trig_maps(count, seed=2024):
    rng = np.random.default_rng(seed)
    scan = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    scan_pts = np.stack([np.cos(scan), np.sin(scan)], 1)
    maps = []
    while len(maps) < count:
        c = rng.uniform(-2, 2, (3, 4))

        def fn(pts, c=c):
            th = np.arctan2(pts[:, 1], pts[:, 0])
            k = np.arange(3)[None, :]
            cos, sin = np.cos(k * th[:, None]), np.sin(k * th[:, None])
            return np.stack([cos @ c[:, 0] + sin @ c[:, 1], cos @ c[:, 2] + sin @ c[:, 3]], 1)
        if np.linalg.norm(fn(scan_pts), axis=1).min() > 0.5:
            maps.append(FuncField(fn, 2))
    return maps


def test_criterion_6_engine_consistency(verdict, tmp_path, monkeypatch):
    problems = []
    maps = [SphereMapEval(f) for f in _trig_maps(50)]
    for i, smap in enumerate(maps):
        w = winding_number(smap, samples=256)
        if pl_degree(smap).degree != w:
            problems.append(("winding-vs-pl", i))
    tests = maps[:10] + [build_alpha(2, m).sphere_map() for m in (-2, 1, 3)] + \
        [build_alpha(3, m).sphere_map() for m in (-1, 2)]
    for i, smap in enumerate(tests):
        base = pl_degree(smap).degree
        levels = {pl_degree(smap, build_mesh(smap.n, lv)).degree for lv in (3, 4)}
        seeds = {pl_degree(smap, seed=s).degree for s in range(10)}
        if levels | seeds != {base}:
            problems.append(("unstable", i))

    mod = importlib.import_module("spheredeg.degree")
    real = mod._winding
    monkeypatch.setattr(mod, "_winding",
                        lambda *a, **k: dataclasses.replace(real(*a, **k), degree=real(*a, **k).degree + 1))
    p = tmp_path / "id.json"
    p.write_text(PolyField.identity(2).to_json())
    code = main(["degree", "--field", str(p)], out=io.StringIO(), err=io.StringIO())
    verdict("6 engine self-consistency", not problems and code == 2,
            f"50 trig maps, {len(tests)} maps x (2 levels + 10 seeds), problems={problems}, "
            f"forced disagreement exit={code}")


def test_criterion_7_determinism(verdict):
    cmds = [
        ["degree-table", "--n-max", "2", "--m-min", "-2", "--m-max", "2", "--output", "json", "--seed", "3"],
        ["morse-check", "--scenario", "ball_saddle.json", "--seed", "3"],
        ["degree-table", "--n-max", "1", "--m-min", "-2", "--m-max", "2"],
    ]
    stamp = re.compile(rb'"timestamp": "[^"]*"')
    diffs = []
    for argv in cmds:
        runs = [subprocess.run([sys.executable, "-m", "spheredeg", *argv], capture_output=True, check=True).stdout
                for _ in range(2)]
        if stamp.sub(b"", runs[0]) != stamp.sub(b"", runs[1]):
            diffs.append(argv[0])
        if b"timestamp" in runs[0]:
            json.loads(runs[0])
    verdict("7 determinism", not diffs, f"{len(cmds)} commands run twice, differing={diffs}")
