"""Acceptance criteria, one test each; every test records a PASS/FAIL line."""

import json
import math
import random
import statistics
import subprocess
import sys
import time
from math import comb

import numpy as np
import pytest

from mopath.cli import main
from mopath.enumeration import enumerate_paths, true_front
from mopath.evolve import AlgoConfig, run
from mopath.graph import count_paths, graph_from_name, import_graph, is_reachable
from mopath.instance import ELEVATION_KINDS, NEIGHBOURHOODS, OBSTACLE_KINDS, InstanceSpec
from mopath.metrics import exact_u_pvalue_bruteforce, igd_plus, mann_whitney_u, significance_table, table_text
from mopath.objectives import evaluate
from mopath.pareto import dominates, non_dominated_filter

from conftest import all_simple_paths, key12

FAMILIES = [(o, e, k) for o in OBSTACLE_KINDS for e in ELEVATION_KINDS for k in NEIGHBOURHOODS]


def bf_name(o, size, e, k):
    return InstanceSpec(o, size, size, e, k, False).name


def test_1_path_counts(verdict):
    counts, worst = [], 0.0
    for e in ELEVATION_KINDS:
        g = graph_from_name(f"ASLETISMAC_NO_X14_Y14_{e}_K3_BF")
        t0 = time.perf_counter()
        counts.append(count_paths(g))
        worst = max(worst, time.perf_counter() - t0)
    delannoy_ok = all(c == 1_409_933_619 for c in counts)
    binom_bad = [
        (x, y) for x in range(3, 21) for y in range(3, 21)
        if count_paths(graph_from_name(f"ASLETISMAC_NO_X{x}_Y{y}_PM_K2_BF")) != comb(x + y - 2, x - 1)
    ]
    ok = delannoy_ok and worst < 1.0 and not binom_bad
    verdict(1, ok, f"14x14 K3 counts {set(counts)}, slowest DP {worst * 1e3:.2f} ms, "
                   f"K2 binomial mismatches {len(binom_bad)}/324")
    assert ok


def test_2_counting_matches_enumeration(verdict):
    t0 = time.perf_counter()
    bad = []
    checked = 0
    for size in range(3, 9):
        for o, e, k in FAMILIES:
            g = graph_from_name(bf_name(o, size, e, k))
            if not is_reachable(g):
                continue
            checked += 1
            if enumerate_paths(g).paths_visited != count_paths(g):
                bad.append(g.name)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 300
    verdict(2, ok, f"{checked} instances, {len(bad)} mismatches, {elapsed:.1f} s")
    assert ok


def test_3_true_front_vs_bruteforce(verdict):
    names = [bf_name(o, s, e, k) for s in range(3, 7) for o, e, k in FAMILIES]
    names += [InstanceSpec(o, s, s, e, k, True).name
              for s in (3, 4) for o, e, k in FAMILIES if not (s == 4 and k == 3)]
    bad = []
    checked = 0
    for name in names:
        g = graph_from_name(name)
        if not is_reachable(g):
            continue
        checked += 1
        brute = non_dominated_filter([evaluate(p, g) for p in all_simple_paths(g)])
        got = true_front(g, budget=10**8).archive.vectors
        if {key12(v) for v in got} != {key12(v) for v in brute} or len(got) != len(brute):
            bad.append(name)
    ok = not bad
    verdict(3, ok, f"{checked} instances up to 6x6, {len(bad)} set mismatches")
    assert ok


def test_4_tiny_instance_solved(verdict):
    g = graph_from_name("ASLETISMAC_NO_X4_Y4_PM_K2_BF")
    rep = true_front(g)
    ref = rep.archive.vectors
    t0 = time.perf_counter()
    hits = 0
    for seed in range(31):
        res = run(g, AlgoConfig(population_size=32, generations=50, rng_seed=seed), ref)
        hits += igd_plus(ref, res.best_archive.vectors) == 0.0
    elapsed = time.perf_counter() - t0
    ok = rep.paths_visited == 20 and hits >= 30 and elapsed < 10
    verdict(4, ok, f"{rep.paths_visited} paths, IGD+ = 0 in {hits}/31 runs, {elapsed:.1f} s")
    assert ok


@pytest.mark.slow
def test_5_full_scale_protocol(verdict):
    g = graph_from_name("ASLETISMAC_NO_X10_Y10_PM_K3_BF")
    ref = true_front(g).archive.vectors
    samples = {}
    monotone = True
    for selection in ("nsga2", "nsga3"):
        cfg = AlgoConfig(population_size=212, generations=500, crossover_prob=0.8,
                         mutation_prob=0.2, selection=selection)
        values = []
        for seed in range(31):
            res = run(g, cfg.replace(rng_seed=seed), ref)
            h = res.igd_plus_history
            monotone &= len(h) == 501 and all(b <= a for a, b in zip(h, h[1:]))
            values.append(igd_plus(ref, res.best_archive.vectors))
        samples[selection] = values
    medians = {k: statistics.median(v) for k, v in samples.items()}
    table = table_text(significance_table(samples), "NO_X10_Y10_PM_K3_BF")
    print(table)
    finite_positive = any(math.isfinite(m) and m > 0 for m in medians.values())
    both_zero = all(m == 0 for m in medians.values())
    ok = monotone and (finite_positive or both_zero) and len(table.splitlines()) == 2
    verdict(5, ok, f"medians {', '.join(f'{k} {v:.5g}' for k, v in medians.items())}, "
                   f"histories monotone: {monotone}; table: {table.splitlines()[1].strip()}")
    assert ok


def test_6_indicator_and_statistics(verdict):
    rng = np.random.default_rng(6)
    R = [tuple(r) for r in rng.random((25, 5)).tolist()]
    checks = {
        "igd(R,R)=0": igd_plus(R, R) == 0.0,
        "igd sqrt2": abs(igd_plus([(0, 0)], [(1, 1)]) - math.sqrt(2)) <= 1e-12,
        "mwu p=0.1": mann_whitney_u([1, 2, 3], [4, 5, 6])[1] == 0.1
        and exact_u_pvalue_bruteforce([1, 2, 3], [4, 5, 6]) == 0.1,
    }
    V = [tuple(r) for r in rng.integers(0, 3, size=(100_000, 5)).tolist()]
    irreflexive = not any(dominates(v, v) for v in V)
    antisym = transitive = agrees = True
    for a, b, c in zip(V, V[1:], V[2:]):
        ab = dominates(a, b)
        oracle = all(x <= y for x, y in zip(a, b)) and a != b
        agrees &= ab == oracle
        if ab:
            antisym &= not dominates(b, a)
            if dominates(b, c):
                transitive &= dominates(a, c)
    checks["dominance laws on 1e5 vectors"] = irreflexive and antisym and transitive and agrees
    ok = all(checks.values())
    verdict(6, ok, ", ".join(f"{k}: {'ok' if v else 'BAD'}" for k, v in checks.items()))
    assert ok


def _random_monotone(g, rng):
    path = [g.start]
    while path[-1] != g.end:
        path.append(rng.choice([v for v in g.adjacency[path[-1]] if g.can_reach_end[v]]))
    return path


def test_7_objective_analytics(verdict):
    rng = random.Random(7)
    checks = {}
    line = import_graph({"directed": True, "start": 0, "end": 5, "delay_model": "road_class",
                         "nodes": [{"id": i, "x": i, "y": 2 * i, "maxspeed": 100} for i in range(6)],
                         "edges": [{"u": i, "v": i + 1} for i in range(5)]})
    diag = graph_from_name("ASLETISMAC_NO_X6_Y6_PM_K3_BF")
    diag_path = [u for u in range(diag.node_count) if diag.x[u] == diag.y[u]]
    checks["straight f5=0"] = evaluate(range(6), line)[4] == 0 and evaluate(diag_path, diag)[4] == 0
    k2_ok = len_ok = True
    for sx, sy in [(4, 4), (7, 3), (10, 10), (13, 6)]:
        g = graph_from_name(f"ASLETISMAC_NO_X{sx}_Y{sy}_P1_K2_BF")
        for _ in range(100):
            p = _random_monotone(g, rng)
            f = evaluate(p, g)
            d = [(g.x[v] - g.x[u], g.y[v] - g.y[u]) for u, v in zip(p, p[1:])]
            turns = sum(a != b for a, b in zip(d, d[1:]))
            k2_ok &= abs(f[4] - turns * math.pi / 2) <= 1e-9
            len_ok &= f[0] == sx + sy - 2
    checks["K2 f5=turns*pi/2"] = k2_ok
    checks["K2 f1=X+Y-2"] = len_ok
    hw = import_graph({"directed": True, "start": 0, "end": 1, "delay_model": "road_class",
                       "nodes": [{"id": 0, "x": 0, "y": 0, "maxspeed": 130},
                                 {"id": 1, "x": 1, "y": 0, "maxspeed": 130}],
                       "edges": [{"u": 0, "v": 1}]})
    checks["highway f4=1/130"] = abs(evaluate([0, 1], hw)[3] - 1 / 130) <= 1e-12
    g = graph_from_name("ASLETISMAC_NO_X12_Y12_P3_K3_BF")
    additive = True
    for _ in range(1000):
        p = _random_monotone(g, rng)
        k = rng.randrange(1, len(p) - 1)
        fa, fb, fp = evaluate(p[:k + 1], g), evaluate(p[k:], g), evaluate(p, g)
        junction = evaluate(p[k - 1:k + 2], g)[4]
        additive &= all(abs(fp[i] - fa[i] - fb[i]) <= 1e-9 for i in range(4))
        additive &= abs(fp[4] - fa[4] - fb[4] - junction) <= 1e-9
    checks["additivity on 1e3 splits"] = additive
    ok = all(checks.values())
    verdict(7, ok, ", ".join(f"{k}: {'ok' if v else 'BAD'}" for k, v in checks.items()))
    assert ok


def test_8_infeasible_lakes(verdict, tmp_path, capsys, caplog):
    name = "ASLETISMAC_LA_X10_Y10_PM_K3_BF"
    ratio = 0.25
    while is_reachable(graph_from_name(name, ratio)):
        ratio = round(ratio + 0.05, 2)
    capsys.readouterr()
    sweep_rc = main(["sweep", "--sizes", "10", "--obstacles", "LA", "--elevations", "PM", "--k", "3",
                     "--out", str(tmp_path), "--radius-ratio", str(ratio), "--workers", "1"])
    sweep_out = capsys.readouterr().out
    skipped = "1 skipped as unreachable" in sweep_out and f"skipped (unreachable): {name}" in caplog.text
    info_rc = main(["info", name, "--radius-ratio", str(ratio)])
    info_out = capsys.readouterr().out
    enum_rc = main(["enumerate", name, str(tmp_path / "x"), "--radius-ratio", str(ratio)])
    ok = sweep_rc == 0 and skipped and info_rc == 3 and "unreachable" in info_out and enum_rc == 3
    verdict(8, ok, f"lake severs corners at ratio {ratio}; sweep rc {sweep_rc} skipped={skipped}, "
                   f"info rc {info_rc}, enumerate rc {enum_rc}")
    assert ok


def test_9_solve_determinism(verdict, tmp_path):
    name = "ASLETISMAC_CH_X10_Y10_P2_K3_BF"
    assert main(["enumerate", name, str(tmp_path / "ref"), "--workers", "1"]) == 0
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"population_size": 40, "generations": 30}))
    outputs = []
    for i, (workers, fresh_process) in enumerate([(1, False), (1, True), (4, False), (4, True), (1, False)]):
        out = tmp_path / f"run{i}"
        args = ["solve", name, "--config", str(cfg), "--reference", str(tmp_path / "ref.front.csv"),
                "--out", str(out), "--seed", "42", "--workers", str(workers)]
        if fresh_process:
            subprocess.run([sys.executable, "-m", "mopath", *args], check=True, capture_output=True)
        else:
            assert main(args) == 0
        outputs.append({p.name.removeprefix(f"run{i}"): p.read_bytes()
                        for p in tmp_path.glob(f"run{i}.*")})
    ok = len(outputs[0]) == 6 and all(o == outputs[0] for o in outputs)
    verdict(9, ok, f"{len(outputs)} invocations (workers 1 and 4, two in fresh processes), "
                   f"{len(outputs[0])} files each, identical: {ok}")
    assert ok
