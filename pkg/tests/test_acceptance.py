"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines as they complete.  The three 51/52-node tours make this the slowest
test module (a few minutes end to end).
"""

import itertools
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import rankdata

from combopt import Model, State
from combopt.benchstats import (
    RankSummary,
    friedman_statistic,
    holm_posthoc,
    load_optima,
    wilcoxon_rank_sum,
)
from combopt.problems import (
    KpInstance,
    TspInstance,
    build_kp_model,
    build_mcp_model,
    build_tsp_model,
    exact_kp,
    exact_maxcut,
    exact_tsp,
    generate_random_maxcut,
    parse_kplib,
    parse_maxcut,
    parse_tsplib,
)
from combopt.qubo import kp_to_qubo, mcp_to_qubo, tsp_to_qubo
from combopt.solver import SolverConfig, initial_state, propose_state, solve

DATA = Path(__file__).parent.parent / "data"
OPTIMA = load_optima(DATA / "optima.txt")

collected_samplesets = []  # criterion 3 runs feed criterion 4's validation sweep


def report(criterion: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] {criterion}: {status} {detail}".rstrip())
    assert ok, f"{criterion} failed: {detail}"


def load_bundled(name: str):
    if name.startswith(("tsp", "disc")):
        return parse_tsplib((DATA / f"{name}.tsp").read_text(), name)
    if name.startswith("kp"):
        return parse_kplib((DATA / f"{name}.kp").read_text(), name)
    return parse_maxcut((DATA / f"{name}.mc").read_text(), name)


def random_tsp(n, seed):
    rng = np.random.default_rng(seed)
    c = rng.integers(1, 100, (n, n)).astype(float)
    c = np.triu(c, 1)
    return TspInstance(f"t{n}", n, c + c.T)


def all_bitstrings(n):
    codes = np.arange(1 << n)[:, None]
    return ((codes >> np.arange(n)) & 1).astype(np.int8)


# -- criterion 1: statistics fidelity -------------------------------------------------


def test_criterion_1_statistics_fidelity():
    t0 = time.monotonic()

    def summary(avg_ranks):
        return RankSummary(["ctl", "mid", "low"], np.asarray(avg_ranks),
                           np.zeros((15, 3)))

    checks = []
    for ranks, want in [
        ((1.0, 2.0667, 2.9333), 28.13),
        ((1.1333, 1.8667, 3.0), 26.53),
        ((1.0, 2.0, 3.0), 30.00),
    ]:
        chi, df = friedman_statistic(summary(ranks))
        checks.append((f"friedman{want}", abs(chi - want) <= 0.01 and df == 2,
                       f"got {chi:.4f}"))

    for ranks, want in [
        ((1.1333, 1.8667, 3.0), 0.04461),
        ((1.0, 2.0667, 2.9333), 0.003487),
        ((1.0, 2.0, 3.0), 0.00617),
    ]:
        entries = holm_posthoc(summary(ranks), "ctl")
        mid = next(e for e in entries if e.algorithm == "mid")
        checks.append((f"holm{want}", abs(mid.p_adjusted - want) <= 5e-4,
                       f"got {mid.p_adjusted:.6f}"))

    elapsed = time.monotonic() - t0
    ok = all(c[1] for c in checks) and elapsed < 1.0
    detail = "; ".join(f"{name} {msg}" for name, good, msg in checks if not good)
    report("criterion 1 (statistics fidelity)", ok,
           detail or f"6 pinned values reproduced in {elapsed * 1000:.0f} ms")


# -- criterion 2: oracle equivalence ---------------------------------------------------


def test_criterion_2_oracle_equivalence():
    t0 = time.monotonic()
    failures = []
    qubo_checks = 0

    # TSP: enumeration oracle; QUBO path at N=3 (9 binaries)
    for i in range(100):
        n = 3 + i % 7
        inst = random_tsp(n, seed=20_000 + i)
        opt, tour = exact_tsp(inst)
        model = build_tsp_model(inst)
        if model.evaluate(State([tour])).objective != opt:
            failures.append(f"tsp model path {i}")
        if n == 3:
            qubo, decode = tsp_to_qubo(inst)
            energies = qubo.energies(all_bitstrings(9))
            best = int(np.argmin(energies))
            if energies[best] != opt or decode(all_bitstrings(9)[best]) is None:
                failures.append(f"tsp qubo path {i}")
            qubo_checks += 1

    # KP: capacity dynamic program; QUBO path when items + slack <= 10 bits
    for i in range(100):
        rng = np.random.default_rng(30_000 + i)
        if i < 40:
            n, wmax, cap = 5, 6, int(rng.integers(3, 16))
        else:
            n, wmax, cap = int(rng.integers(6, 21)), 50, int(rng.integers(20, 400))
        w = rng.integers(1, wmax, n)
        v = rng.integers(0, 100, n)
        inst = KpInstance(f"k{i}", n, v, w, cap)
        opt, items = exact_kp(inst)
        model = build_kp_model(inst)
        ev = model.evaluate(State([items]))
        if not ev.feasible or ev.objective != -opt:
            failures.append(f"kp model path {i}")
        qubo, decode = kp_to_qubo(inst)
        if qubo.n <= 10:
            energies = qubo.energies(all_bitstrings(qubo.n))
            best = int(np.argmin(energies))
            state = decode(all_bitstrings(qubo.n)[best])
            if state is None or energies[best] != -opt:
                failures.append(f"kp qubo path {i}")
            qubo_checks += 1

    # MaxCut: bipartition enumeration; QUBO path for n <= 10
    for i in range(100):
        n = 6 + i % 7
        inst = generate_random_maxcut(n, 0.7, (1, 10), seed=40_000 + i)
        opt, bits = exact_maxcut(inst)
        model = build_mcp_model(inst)
        if model.evaluate(State([bits])).objective != -opt:
            failures.append(f"mc model path {i}")
        if n <= 10:
            qubo, _ = mcp_to_qubo(inst)
            if qubo.energies(all_bitstrings(n)).min() != -opt:
                failures.append(f"mc qubo path {i}")
            qubo_checks += 1

    elapsed = time.monotonic() - t0
    ok = not failures and elapsed < 300 and qubo_checks >= 100
    report("criterion 2 (oracle equivalence)", ok,
           "; ".join(failures[:5]) or
           f"300 instances, {qubo_checks} exhaustive encodings, {elapsed:.0f} s")


# -- criterion 3: solver quality -------------------------------------------------------


def test_criterion_3_solver_quality():
    results = []

    for name in ("tsp7", "tsp8", "tsp9"):
        inst = load_bundled(name)
        opt = OPTIMA[name]
        hits = 0
        for seed in range(10):
            r = solve(build_tsp_model(inst),
                      SolverConfig(time_limit=10.0, seed=seed, target=opt))
            collected_samplesets.append((build_tsp_model(inst), r))
            hits += r.best().objective == opt
        results.append((f"{name} 10/10s", hits >= 9, f"{hits}/10 optimal"))

    for name in ("disc51", "disc52"):
        inst = load_bundled(name)
        opt = OPTIMA[name]
        r = solve(build_tsp_model(inst),
                  SolverConfig(time_limit=60.0, seed=0, target=opt / 0.92))
        collected_samplesets.append((build_tsp_model(inst), r))
        ratio = opt / r.best().objective
        results.append((f"{name} 60s", ratio >= 0.92, f"ratio {ratio:.4f}"))

    inst = load_bundled("kp50")
    opt = OPTIMA["kp50"]
    r = solve(build_kp_model(inst),
              SolverConfig(time_limit=10.0, seed=0, target=-(0.95 * opt)))
    collected_samplesets.append((build_kp_model(inst), r))
    value = -r.best().objective if r.best().feasible else 0.0
    results.append(("kp50 10s", value >= 0.95 * opt, f"ratio {value / opt:.4f}"))

    inst = load_bundled("mc10")
    opt = OPTIMA["mc10"]
    hits = 0
    for seed in range(10):
        r = solve(build_mcp_model(inst),
                  SolverConfig(time_limit=5.0, seed=seed, target=-opt))
        collected_samplesets.append((build_mcp_model(inst), r))
        hits += r.best().objective == -opt
    results.append(("mc10 10x5s", hits >= 9, f"{hits}/10 optimal"))

    ok = all(r[1] for r in results)
    detail = "; ".join(f"{n}: {d}" for n, good, d in results)
    report("criterion 3 (solver quality)", ok, detail)


# -- criterion 4: structural invariants -------------------------------------------------


def test_criterion_4_structural_invariants():
    t0 = time.monotonic()
    m = Model()
    m.list(12)
    m.set(10)
    m.binary(8)
    m.disjoint_lists(9, 3)
    m.disjoint_bit_sets(8, 2)
    m.integer(5, lo=-2, hi=4)

    rng = np.random.default_rng(99)
    checked = 0
    failures = 0

    state = initial_state(m, rng)
    for _ in range(700_000):
        state, _ = propose_state(m, state, rng)
        failures += bool(m.validate_state(state))
        checked += 1

    for _ in range(300_000):
        state = initial_state(m, rng)
        failures += bool(m.validate_state(state))
        checked += 1

    sampled_from_solver = 0
    for model, sampleset in collected_samplesets:
        for sample in sampleset:
            failures += bool(model.validate_state(sample.state))
            sampled_from_solver += 1
            checked += 1

    ok = failures == 0 and checked >= 1_000_000
    report("criterion 4 (structural invariants)", ok,
           f"{checked} states ({sampled_from_solver} solver samples), "
           f"{failures} violations, {time.monotonic() - t0:.0f} s")


# -- criterion 5: determinism and anytime behavior ---------------------------------------


def test_criterion_5_determinism_and_anytime():
    inst = random_tsp(9, seed=55)
    byte_identical = True
    for seed in (0, 1, 2):
        cfg = SolverConfig(time_limit=30.0, n_branches=1, seed=seed,
                           max_steps=1200, qm_inline=True)
        a = solve(build_tsp_model(inst), cfg).to_json()
        b = solve(build_tsp_model(inst), cfg).to_json()
        byte_identical &= a == b

    monotone = True
    kp = KpInstance("k", 12, np.arange(1, 13), np.arange(1, 13), 30)
    for seed in range(100):
        model = build_tsp_model(inst) if seed % 2 else build_kp_model(kp)
        r = solve(model, SolverConfig(time_limit=10.0, n_branches=1, seed=seed,
                                      max_steps=400, qm_inline=True))
        feasible = [s for s in r if s.feasible and s.source != "final"]
        series = [s.objective for s in
                  sorted(feasible, key=lambda s: (s.step, -s.objective))]
        monotone &= all(x >= y for x, y in zip(series, series[1:]))

    ok = byte_identical and monotone
    report("criterion 5 (determinism + anytime)", ok,
           f"byte_identical={byte_identical} monotone={monotone}")


# -- criterion 6: penalty dominance -------------------------------------------------------


def test_criterion_6_penalty_dominance():
    failures = []

    for i in range(60):
        rng = np.random.default_rng(60_000 + i)
        n = int(rng.integers(3, 7))
        cap = int(rng.integers(2, 12))
        inst = KpInstance(f"k{i}", n, rng.integers(0, 40, n), rng.integers(1, 8, n), cap)
        qubo, decode = kp_to_qubo(inst)
        if qubo.n > 10:
            continue
        bits = all_bitstrings(qubo.n)
        energies = qubo.energies(bits)
        feas = np.array([decode(b) is not None for b in bits])
        if not feas.any() or not (~feas).any():
            continue
        if energies[~feas].min() <= energies[feas].min():
            failures.append(f"kp {i}")

    for i in range(20):
        n = 2 + i % 2
        inst = random_tsp(n, seed=70_000 + i)
        qubo, decode = tsp_to_qubo(inst)
        bits = all_bitstrings(qubo.n)
        energies = qubo.energies(bits)
        feas = np.array([decode(b) is not None for b in bits])
        if energies[~feas].min() <= energies[feas].min():
            failures.append(f"tsp {i}")

    report("criterion 6 (penalty dominance)", not failures,
           "; ".join(failures) or "all infeasible bitstrings strictly above optima")


# -- criterion 7: Wilcoxon correctness -----------------------------------------------------


def test_criterion_7_wilcoxon_exactness():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        a = rng.random(5)
        b = rng.random(5)
        approx = wilcoxon_rank_sum(a, b).p

        pooled = np.concatenate([a, b])
        ranks = rankdata(pooled, method="average")
        mu = 5 * 11 / 2.0
        observed = abs(ranks[:5].sum() - mu)
        count = sum(
            abs(ranks[list(combo)].sum() - mu) >= observed - 1e-12
            for combo in itertools.combinations(range(10), 5)
        )
        exact = count / 252.0
        worst = max(worst, abs(approx - exact))

    report("criterion 7 (wilcoxon exactness)", worst <= 0.05,
           f"max |approx - exact| = {worst:.4f} over 50 pairs x 252 labelings")
