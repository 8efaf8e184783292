"""Acceptance suite: one recorded PASS/FAIL line per criterion."""
from __future__ import annotations

import random
import time
from itertools import product as cartesian

from conftest import record
from oracles import check_witness_tree, purity_by_closure, rebalancing_brute

from eocount.builtins import (
    f40,
    f56,
    gen_random,
    mixed_affine4,
    perturb,
    random_affine_member,
    random_arity4_case,
    random_eom,
    random_grid,
    random_product_member,
    random_pure_up,
    random_rebalancing,
)
from eocount.classify import (
    first_eom_pairing,
    membership_A,
    membership_P,
    purity,
)
from eocount.csp import (
    CSPInstance,
    QuadraticPhaseSystem,
    affine_csp_value,
    enumerate_value,
    gauss_sum,
    product_csp_value,
)
from eocount.deciders import HARD, TRACTABLE, UNDECIDED, decide
from eocount.exact import ONE, ZERO, ExactComplex
from eocount.grid import (
    brute_force_value,
    csp_as_eo,
    dual_grid,
    pi_transform,
    tau_set,
    two_vertex_grid,
)
from eocount.pipelines import evaluate
from eocount.rebalance import (
    first_level_ok,
    is_rebalancing,
    jumper_mapping,
    rebalance_witness,
    relabel,
    restriction_mapping,
)
from eocount.signature import Signature, neq, neq_weighted, sixv, unary

# the published support matrices, typed in independently of the builtins
H2_PRINTED = [
    "1111000000",
    "1000111000",
    "0100100110",
    "0010010101",
    "0001001011",
]
H4_PRINTED = ["01111", "10111", "11011", "11101", "11110"]
H0_PRINTED = ["0"] * 5


def test_criterion_1_active_pipeline_oracle():
    start = time.perf_counter()
    bad = []
    nonzero = 0
    for seed in range(200):
        g = gen_random("grid-pure-up", seed=seed, arity=6, count=3).obj
        res = evaluate(g, "active")
        want = brute_force_value(g)
        nonzero += bool(want)
        if res.value != want or res.strategy != "active":
            bad.append(seed)
    elapsed = time.perf_counter() - start
    ok = not bad
    record(1, ok, f"200 pure-up grids, active == brute force on {200 - len(bad)}, "
                  f"{nonzero} nonzero values, {elapsed:.1f}s")
    assert ok, bad


def test_criterion_2_passive_pipeline_oracle():
    start = time.perf_counter()
    bad = []
    eom_only = 0
    for seed in range(200):
        g = gen_random("grid-rebalancing", seed=seed, arity=6, count=3).obj
        eom_only += all(first_eom_pairing(f) is not None for f in g.used_signatures().values())
        res = evaluate(g, "passive")
        if res.value != brute_force_value(g) or res.strategy != "passive":
            bad.append(seed)
    elapsed = time.perf_counter() - start
    ok = not bad and eom_only > 0
    record(2, ok, f"200 rebalancing grids ({eom_only} EOM-only), passive == brute force on "
                  f"{200 - len(bad)}, {elapsed:.1f}s")
    assert ok, bad


def _direct_two_vertex(f: Signature) -> tuple[ExactComplex, int]:
    """Sum over the 25 row pairs, accepting complementary rows."""
    full = (1 << f.arity) - 1
    total, combos = ZERO, 0
    for (a, x), (b, y) in cartesian(f.rows.items(), repeat=2):
        combos += 1
        if a ^ b == full:
            total = total + x * y
    return total, combos


def test_criterion_3_f40_end_to_end():
    start = time.perf_counter()
    f = f40()
    expected_rows = {H2_PRINTED[r] * 3 + H4_PRINTED[r] * 2 for r in range(5)}
    checks = {
        "matrix": set(f.support_strings()) == expected_rows and f.arity == 40,
        "weights": all(s.count("1") == 20 for s in f.support_strings()),
        "values": all(v == ONE for v in f.rows.values()),
        "witness": rebalance_witness(f, 0) is not None,
        "purity": purity(f) == "neither",
    }
    w = rebalance_witness(f, 0)
    checks["witness-valid"] = w is not None and first_level_ok(f, 0, w.psi)
    direct, combos = _direct_two_vertex(f)
    res = evaluate(two_vertex_grid(f, "f40"), "passive")
    checks["passive"] = res.strategy == "passive" and res.value == direct and combos == 25
    elapsed = time.perf_counter() - start
    ok = all(checks.values())
    record(3, ok, f"f40 checks {sorted(k for k, v in checks.items() if v)}; "
                  f"two-vertex value {res.value} over {combos} combinations, {elapsed:.1f}s")
    assert ok, checks


def test_criterion_4_f56_not_rebalancing():
    start = time.perf_counter()
    f = f56()
    expected_rows = {H0_PRINTED[r] + H2_PRINTED[r] * 4 + H4_PRINTED[r] * 3 for r in range(5)}
    matrix = set(f.support_strings()) == expected_rows and f.arity == 56
    weights = all(s.count("1") == 28 for s in f.support_strings())
    w0 = rebalance_witness(f, 0)
    w1 = rebalance_witness(f, 1)
    elapsed = time.perf_counter() - start
    ok = matrix and weights and w0 is None and w1 is None and elapsed < 60
    record(4, ok, f"f56 rows weigh 28/56: {weights}; witnesses for bit 0 and 1: "
                  f"{w0 is not None}, {w1 is not None}; {elapsed:.1f}s")
    assert ok


def _random_instance(rng: random.Random, clause) -> CSPInstance:
    n = rng.randint(1, 14)
    clauses = []
    for _ in range(rng.randint(1, 20)):
        r = rng.randint(1, min(3, n))
        clauses.append((clause(rng, r), [rng.randrange(n) for _ in range(r)]))
    return CSPInstance(n, clauses)


def _affine_clause(rng: random.Random, r: int) -> Signature:
    if r == 1:
        return rng.choice([unary(1, ExactComplex(0, 0, 1)), unary(1, -1), unary(0, 3), unary(2, 2)])
    return random_affine_member(rng, r).obj


def _product_clause(rng: random.Random, r: int) -> Signature:
    if r == 1:
        return unary(rng.choice([1, 2, -1]), rng.choice([0, 1, 3, ExactComplex(0, 0, 1)]))
    return random_product_member(rng, r).obj


def test_criterion_5_backend_equivalence():
    start = time.perf_counter()
    rng = random.Random(5)
    bad_a = sum(
        affine_csp_value(c) != enumerate_value(c)
        for c in (_random_instance(rng, _affine_clause) for _ in range(300))
    )
    bad_p = sum(
        product_csp_value(c) != enumerate_value(c)
        for c in (_random_instance(rng, _product_clause) for _ in range(300))
    )
    closed = all(
        gauss_sum(QuadraticPhaseSystem(n, linear={v: 1 for v in range(n)})) == ExactComplex(1, 0, 1) ** n
        for n in range(11)
    )
    elapsed = time.perf_counter() - start
    ok = bad_a == 0 and bad_p == 0 and closed
    record(5, ok, f"affine mismatches {bad_a}/300, product mismatches {bad_p}/300, "
                  f"closed forms n<=10 {closed}, {elapsed:.1f}s")
    assert ok


def test_criterion_6_classifier_soundness():
    start = time.perf_counter()
    rng = random.Random(6)
    n = 1000
    accepted = dict.fromkeys(("A", "P", "EOM", "pure-up", "rebalancing"), 0)
    rejected = {"A": 0, "P": 0}
    for _ in range(n):
        arity = rng.randint(2, 6)
        f = random_affine_member(rng, arity).obj
        w = membership_A(f)
        accepted["A"] += w is not None and w.reconstruct() == f
        rejected["A"] += membership_A(perturb(rng, f)) is None

        f = random_product_member(rng, arity).obj
        d = membership_P(f)
        accepted["P"] += d is not None and d.reconstruct() == f
        rejected["P"] += membership_P(perturb(rng, f)) is None

        gen = random_eom(rng, 2 * rng.randint(1, 3))
        pairing = first_eom_pairing(gen.obj)
        accepted["EOM"] += pairing is not None and gen.obj.in_eom(pairing)

        f = random_pure_up(rng, 6).obj
        up = ("pure_up", "both")
        accepted["pure-up"] += purity(f) in up and purity_by_closure(f) in up

        f = random_rebalancing(rng, 6).obj
        w = rebalance_witness(f, 0)
        if w is not None and rebalancing_brute(f, 0):
            check_witness_tree(f, w, depth=3)
            accepted["rebalancing"] += 1
    elapsed = time.perf_counter() - start
    rate = {k: v / n for k, v in rejected.items()}
    ok = all(v == n for v in accepted.values()) and all(r >= 0.99 for r in rate.values())
    record(6, ok, f"accepted {accepted} of {n} each; perturbations rejected "
                  f"A {rate['A']:.3f}, P {rate['P']:.3f}; {elapsed:.1f}s")
    assert ok


def test_criterion_7_decider_fixtures():
    rng = random.Random(7)
    weighted = neq_weighted(2, 1, 2)
    results = {}
    for case in "abcd":
        sigs = [random_arity4_case(rng, case).obj for _ in range(3)]
        results[f"case-{case}"] = decide(sigs).outcome == TRACTABLE
    results["affine-product-mixing"] = decide([mixed_affine4(), weighted]).outcome == HARD
    results["delta-side-mixing"] = decide([sixv(1, 1, 1), sixv(1, 1, 1).dual()]).outcome == HARD
    results["affine-m-mixing"] = decide([mixed_affine4(), sixv(1, 2, 4)]).outcome == HARD
    results["f56"] = decide([f56()]).outcome == UNDECIDED
    full = Signature.from_strings({s: v for s, v in zip(
        ["0011", "0101", "0110", "1001", "1010", "1100"], (2, 3, 5, 7, -1, 11))})
    results["full-support"] = decide([full]).outcome == HARD
    fixtures = [[weighted, sixv(1, 1, 1)], [mixed_affine4(), weighted], [f56()], [full]]
    results["stable"] = [decide(s).to_json() for s in fixtures] == [decide(s).to_json() for s in fixtures]
    ok = all(results.values())
    record(7, ok, f"fixtures {sorted(k for k, v in results.items() if v)} as expected"
                  + ("" if ok else f"; failing {sorted(k for k, v in results.items() if not v)}"))
    assert ok, results


def test_criterion_8_closure_properties():
    start = time.perf_counter()
    rng = random.Random(8)
    trials = 500
    tensor_ok = jumper_ok = pin_ok = restrict_ok = 0
    formula_runs = formula_ok = 0
    for _ in range(trials):
        f = random_rebalancing(rng, 6).obj
        g = random_rebalancing(rng, 6).obj
        tensor_ok += is_rebalancing(f.tensor(g), 0)

        w = rebalance_witness(f, 0)
        s, t = rng.sample(range(1, f.arity + 1), 2)
        looped = f.self_loop(s, t)
        jumper_ok += is_rebalancing(looped, 0)
        kept = [v for v in range(1, f.arity + 1) if v not in (s, t)]
        if kept:
            formula_runs += 1
            formula_ok += first_level_ok(looped, 0, relabel(jumper_mapping(w, s, t), kept))

        restricted = f.restrict_unequal(s, t)
        restrict_ok += is_rebalancing(restricted, 0)
        formula_runs += 1
        formula_ok += first_level_ok(restricted, 0, restriction_mapping(w, s, t))

        h = random_pure_up(rng, 6).obj
        x, y = rng.sample(range(1, h.arity + 1), 2)
        pin_ok += purity(h.pin(x, y, 1)) in ("pure_up", "both")
    elapsed = time.perf_counter() - start
    ok = (tensor_ok, jumper_ok, pin_ok, restrict_ok) == (trials,) * 4 and formula_ok == formula_runs
    record(8, ok, f"tensor {tensor_ok}/{trials}, self-loop {jumper_ok}/{trials}, "
                  f"unequal restriction {restrict_ok}/{trials}, pure-up pinning {pin_ok}/{trials}, "
                  f"constructive mappings valid {formula_ok}/{formula_runs}, {elapsed:.1f}s")
    assert ok


def _random_signature(rng: random.Random, max_arity: int) -> Signature:
    r = rng.randint(1, max_arity)
    pool = [ExactComplex(v) for v in (1, -1, 2, 3)] + [ExactComplex(0, 0, 1), ExactComplex(0, 1)]
    return Signature(r, {a: rng.choice(pool) for a in range(1 << r) if rng.random() < 0.6})


def test_criterion_9_transform_round_trips():
    rng = random.Random(9)
    results = {}
    grids = []
    for k in range(100):
        sigs = [_random_signature(rng, 3) for _ in range(2)] + [neq(2)]
        grids.append(random_grid(rng, sigs, 4))
    results["dual-involution"] = all(dual_grid(dual_grid(g)) == g for g in grids)
    results["dual-value"] = all(brute_force_value(dual_grid(g)) == brute_force_value(g) for g in grids)
    tau_hits = 0
    for _ in range(100):
        g = _random_signature(rng, 3)
        pairing = [(2 * k + 1, 2 * k + 2) for k in range(g.arity)]
        tau_hits += g in tau_set(pi_transform(g), pairing)
    results["tau-pi"] = tau_hits == 100
    csp_hits = 0
    for _ in range(50):
        g = _random_signature(rng, 3)
        nvars = rng.randint(1, 5)
        c = CSPInstance(nvars, [(g, [rng.randrange(nvars) for _ in range(g.arity)])
                                for _ in range(rng.randint(1, 3))])
        grid, unused = csp_as_eo(c)
        csp_hits += brute_force_value(grid) * 2**unused == enumerate_value(c)
    results["csp-eo"] = csp_hits == 50
    ok = all(results.values())
    record(9, ok, f"dual involution/value on 100 grids, tau of pi {tau_hits}/100, "
                  f"translated instances {csp_hits}/50: {results}")
    assert ok, results
