"""Exit criteria at desk scale; each test records one PASS/FAIL line."""
import math
import time

import numpy as np
import pytest

from spanroute.cli import main
from spanroute.costs import CostModel, CostStream, bernoulli, default_concentration, exponential, pareto, uniform
from spanroute.experiments import (
    bernoulli_parallel_serial,
    grid_bernoulli,
    pareto_parallel_serial,
    parallel_serial_paths,
    run_traces,
    solo_cube,
    uniform_parallel_serial,
)
from spanroute.graph import enumerate_paths
from spanroute.networks import BUNDLED
from spanroute.policies import PolicySpec, StarSchedule
from spanroute.sim import log_checkpoints
from spanroute.spanner import build_spanner

SEEDS = range(50)


def mean_cum(traces, ts):
    return np.mean([tr.cumulative_at(ts) for tr in traces], axis=0)


def pooled_optimal_fraction(traces, lo, hi):
    hits = sum(tr.exploit_optimal_fraction(lo, hi)[0] for tr in traces)
    slots = sum(tr.exploit_optimal_fraction(lo, hi)[1] for tr in traces)
    return hits / slots


@pytest.fixture(scope="module")
def bernoulli_star_run():
    start = time.perf_counter()
    traces = run_traces(parallel_serial_paths(), bernoulli_parallel_serial(), PolicySpec("dsee-star", {"w": 5}),
                        10**5, SEEDS)
    return traces, time.perf_counter() - start


def test_c01_spanner_correctness(report):
    start = time.perf_counter()
    worst = {}
    for name in ("diamond", "parallel-serial", "wheatstone", "grid3x3", "grid4x4"):
        ps = enumerate_paths(BUNDLED[name]())
        sp = build_spanner(ps.matrix, ps.dimension)
        worst[name] = float(np.max(np.abs(sp.coefficient_matrix(ps.matrix))))
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) <= 1 + 1e-9 and elapsed < 5
    report(1, ok, f"max|a| per network {worst}, {elapsed:.2f}s (< 5s)")
    assert ok


def test_c02_schedule_exactness(report):
    d, w = 3, 5
    tr = run_traces(parallel_serial_paths(), bernoulli_parallel_serial(), PolicySpec("dsee-star", {"w": w}),
                    10**5, [0])[0]
    counts = np.cumsum(tr.explore)
    rows = []
    ok = True
    for T in (10**3, 10**4, 10**5):
        target = StarSchedule(d, w).threshold(T)
        got = int(counts[T - 1])
        ok &= target - d <= got <= target + d
        rows.append(f"T={T}: |A|={got} vs {target}")
    report(2, ok, "; ".join(rows))
    assert ok


def test_c03_logarithmic_regret(report, bernoulli_star_run):
    traces, elapsed = bernoulli_star_run
    R = mean_cum(traces, [10**2, 10**3, 10**4, 10**5])
    inc = [R[2] - R[1], R[3] - R[2]]
    ratio = max(inc) / min(inc)
    per_slot = (R[3] / 10**5) / (R[0] / 10**2)
    ok = ratio <= 2.5 and per_slot < 0.1 and elapsed < 120
    report(3, ok, f"R={np.round(R, 3).tolist()}, decade increments {np.round(inc, 3).tolist()} "
                  f"(ratio {ratio:.3f} <= 2.5), R(T)/T shrink {per_slot:.4f} < 0.1, {elapsed:.1f}s (< 120s)")
    assert ok


def test_c04_exploitation_optimality(report, bernoulli_star_run):
    traces, _ = bernoulli_star_run
    frac = pooled_optimal_fraction(traces, 10**4, 10**5)
    ok = frac >= 0.99
    report(4, ok, f"optimal share of exploitation slots in [1e4, 1e5]: {frac:.5f} (>= 0.99)")
    assert ok


def test_c05_dependence_beats_naive(report):
    net, model = grid_bernoulli()
    ps = enumerate_paths(net)
    T = 10**4
    star = run_traces(ps, model, PolicySpec("dsee-star", {"w": 0.2}), T, SEEDS)
    naive = run_traces(ps, model, PolicySpec("naive-dsee", {"w": 0.2}), T, SEEDS)
    r_star, r_naive = mean_cum(star, [T])[0], mean_cum(naive, [T])[0]
    ok = len(ps) == 20 and ps.dimension <= net.m - net.n + 2 and r_star < 0.5 * r_naive
    report(5, ok, f"|P|={len(ps)}, d={ps.dimension}; R(1e4) dsee-star {r_star:.2f} vs naive-dsee {r_naive:.2f} "
                  f"(ratio {r_star / r_naive:.3f} < 0.5)")
    assert ok


def test_c06_heavy_tailed_sublinear(report):
    traces = run_traces(parallel_serial_paths(), pareto_parallel_serial(2.5, 2.0),
                        PolicySpec("dsee-heavy", {"v": 1.0, "q": 2.0}), 10**5, SEEDS)
    cps = [t for t in log_checkpoints(10**5) if t >= 10**2]
    R = mean_cum(traces, cps)
    norm = dict(zip(cps, R / np.sqrt(cps)))
    per_slot = R / np.array(cps)
    bounded = norm[10**5] <= 1.5 * norm[10**3]
    monotone = bool(np.all(np.diff(per_slot) < 0))
    ok = bounded and monotone
    report(6, ok, f"R/sqrt(T): {norm[10**3]:.4f} at 1e3 -> {norm[10**5]:.4f} at 1e5 (<= 1.5x); "
                  f"R/T strictly decreasing over {cps[0]}..{cps[-1]}: {monotone}")
    assert ok


def test_c07_prime_without_constants(report):
    traces = run_traces(parallel_serial_paths(), uniform_parallel_serial(), PolicySpec("dsee-prime", {"f": "loglog"}),
                        10**5, SEEDS)
    frac = pooled_optimal_fraction(traces, 10**4, 10**5)
    ok = frac >= 0.95
    report(7, ok, f"optimal share of exploitation slots in [1e4, 1e5]: {frac:.5f} (>= 0.95)")
    assert ok


def test_c08_solo_epoch(report):
    actions, model = solo_cube()
    T, seeds = 10**5, range(20)
    solo = run_traces(actions, model, PolicySpec("solo-epoch", {"t0": 100}), T, seeds)
    rand = run_traces(actions, model, PolicySpec("uniform-random"), T, seeds)
    r_solo, r_rand = mean_cum(solo, [T])[0] / T, mean_cum(rand, [T])[0] / T
    explore = np.mean([tr.explore.mean() for tr in solo])
    ok = r_solo <= 0.1 * r_rand
    report(8, ok, f"R(T)/T solo-epoch {r_solo:.4f} vs uniform-random {r_rand:.4f} "
                  f"(ratio {r_solo / r_rand:.3f} <= 0.1); exploration share {explore:.3f}")
    assert ok


def deviation_frequencies(dist, s, deltas, reps, seed):
    stream = CostStream(CostModel((dist,)), seed)
    hits = np.zeros(len(deltas))
    done = 0
    while done < reps:
        n = min(10000, reps - done)
        dev = np.abs(stream.draw_block(n * s).reshape(n, s).mean(axis=1) - dist.mean)
        hits += [(dev >= dl).sum() for dl in deltas]
        done += n
    return hits / reps


def test_c09_concentration(report):
    start = time.perf_counter()
    failures = []
    checked = 0
    for i, dist in enumerate((bernoulli(0.5, 1), uniform(0, 2), exponential(1))):
        c = default_concentration(CostModel((dist,)))
        deltas = [dl for dl in (0.05, 0.1, 0.2, 0.4) if dl <= c.zeta * c.u0]
        for s in (10, 50, 100):
            freqs = deviation_frequencies(dist, s, deltas, 10**5, seed=100 + i)
            for dl, f in zip(deltas, freqs):
                checked += 1
                if f > c.deviation_bound(dl, s) * 1.1:
                    failures.append((str(dist), s, dl, f))
    # heavy tail: Pr(|mean_t - 2| > 0.5) * t^(q-1) stays bounded for Pareto(2), q = 1.5
    rng_reps = {10**2: 20000, 10**3: 5000, 10**4: 2000}
    scaled = {}
    for t, reps in rng_reps.items():
        stream = CostStream(CostModel((pareto(2, 1),)), 7 + t)
        hits = 0
        for _ in range(0, reps, 500):
            m = stream.draw_block(500 * t).reshape(500, t).mean(axis=1)
            hits += int(np.sum(np.abs(m - 2.0) > 0.5))
        scaled[t] = hits / reps * t**0.5
    heavy_ok = all(v <= 1.5 * scaled[10**2] for v in scaled.values())
    elapsed = time.perf_counter() - start
    ok = not failures and heavy_ok and elapsed < 60
    report(9, ok, f"{checked} light-tailed (family, s, delta) cells, violations {failures}; "
                  f"Pareto freq*t^0.5 {({k: round(v, 4) for k, v in scaled.items()})}; {elapsed:.1f}s (< 60s)")
    assert ok


def test_c10_cli_determinism(report, tmp_path):
    text = (
        "vertices: [s, a, r]\nsource: s\ndestination: r\nedges:\n"
        "  - {id: 0, tail: s, head: a, dist: bernoulli 0.05 1}\n"
        "  - {id: 1, tail: s, head: a, dist: exponential 6}\n"
        "  - {id: 2, tail: a, head: r, dist: pareto 2.5 0.05}\n"
        "  - {id: 3, tail: a, head: r, dist: uniform 0.1 0.3}\n"
        "declared_q: 2\nhorizon: 5000\n"
        "policies:\n  - policy: dsee-star\n    policy_params: {w: 1}\n  - policy: dsee-heavy\n"
        "  - policy: naive-ucb\nseeds: {base: 3, count: 4}\noutput: OUT\n"
    )
    outputs = []
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        scn = d / "scn.yaml"
        scn.write_text(text.replace("OUT", str(d / "res")))
        assert main(["--scenario", str(scn)]) == 0
        outputs.append({p.name: p.read_bytes() for p in sorted(d.glob("res_*"))})
    ok = outputs[0] == outputs[1] and len(outputs[0]) == 4
    report(10, ok, f"{sorted(outputs[0])} byte-identical across two runs: {outputs[0] == outputs[1]}")
    assert ok
