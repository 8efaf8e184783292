from __future__ import annotations

import random
from itertools import product as cartesian

import pytest
from conftest import exact_numbers
from hypothesis import given, settings
from hypothesis import strategies as st

from eocount.builtins import random_affine_member, random_product_member
from eocount.csp import (
    CSPError,
    CSPInstance,
    QuadraticPhaseSystem,
    affine_csp_value,
    enumerate_value,
    gauss_sum,
    product_csp_value,
)
from eocount.exact import ONE, ZERO, ExactComplex, omega_power, sqrt2_power
from eocount.signature import Signature, eq, neq, unary

I = ExactComplex(0, 0, 1)


def direct_sum(c: CSPInstance) -> ExactComplex:
    """Plain Python enumeration, independent of the kernels."""
    total = ZERO
    for x in range(1 << c.num_vars):
        term = ONE
        for sig, scope in c.clauses:
            alpha = sum(((x >> v) & 1) << k for k, v in enumerate(scope))
            term = term * sig.value(alpha)
        total = total + term
    return total


def random_instance(rng: random.Random, make, max_vars: int = 14, max_clauses: int = 20) -> CSPInstance:
    n = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        r = rng.randint(1, min(3, n))
        sig = make(rng, r)
        scope = [rng.randrange(n) for _ in range(r)]
        clauses.append((sig, scope))
    return CSPInstance(n, clauses)


def _affine(rng, r):
    if r == 1:
        return rng.choice([unary(1, I), unary(1, -1), unary(0, 2), unary(1, 1)])
    return random_affine_member(rng, r).obj


def _product(rng, r):
    if r == 1:
        return unary(rng.choice([1, 2, -3]), rng.choice([0, 1, I]))
    return random_product_member(rng, r).obj


def test_closed_form_phase_sums():
    # sum over x of i^(x_1 + ... + x_n) = (1 + i)^n
    for n in range(0, 11):
        q = QuadraticPhaseSystem(n, linear={v: 1 for v in range(n)})
        assert gauss_sum(q) == ExactComplex(1, 0, 1) ** n


def test_gauss_sum_elimination_identities():
    # l = 1: 1 + i = sqrt2 * omega ; l = 3: 1 - i = sqrt2 * omega^-1 ; l = 2: 0 ; l = 0: 2
    for l, expect in ((1, sqrt2_power(1) * omega_power(1)), (3, sqrt2_power(1) * omega_power(-1)),
                      (2, ZERO), (0, ExactComplex(2))):
        assert gauss_sum(QuadraticPhaseSystem(1, linear={0: l} if l else {})) == expect
    # sum (-1)^(x0 x1) = 2
    assert gauss_sum(QuadraticPhaseSystem(2, quadratic={(0, 1)})) == ExactComplex(2)
    # parity constraint x0 + x1 = 1 with phase i^x0: i + 1
    q = QuadraticPhaseSystem(2, constraints=[(0b11, 1)], linear={0: 1})
    assert gauss_sum(q) == ExactComplex(1, 0, 1)
    # contradictory constraints
    assert gauss_sum(QuadraticPhaseSystem(2, constraints=[(0b11, 1), (0b11, 0)])) == ZERO


@st.composite
def phase_systems(draw) -> QuadraticPhaseSystem:
    n = draw(st.integers(0, 7))
    cons = draw(st.lists(st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, 1)), max_size=3))
    linear = draw(st.dictionaries(st.integers(0, max(n - 1, 0)), st.integers(0, 3))) if n else {}
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    quad = set(draw(st.lists(st.sampled_from(pairs), unique=True))) if pairs else set()
    return QuadraticPhaseSystem(n, cons, draw(st.integers(0, 3)), linear, quad,
                                draw(exact_numbers(nonzero=True)))


@settings(max_examples=150)
@given(phase_systems())
def test_gauss_sum_matches_enumeration(q: QuadraticPhaseSystem):
    assert gauss_sum(q) == q.brute_value()


def test_backend_examples():
    c = CSPInstance(2, [(neq(2), (0, 1)), (unary(1, I), (0,))])
    assert affine_csp_value(c) == ExactComplex(1, 0, 1)
    assert product_csp_value(c) == ExactComplex(1, 0, 1)
    # variables repeat inside a clause: neq(x, x) is never satisfied
    c = CSPInstance(1, [(neq(2), (0, 0))])
    assert affine_csp_value(c) == ZERO == product_csp_value(c) == enumerate_value(c)
    c = CSPInstance(3, [(eq(3), (0, 1, 2)), (unary(2, 3), (1,))])
    assert product_csp_value(c) == ExactComplex(5) == enumerate_value(c)


def test_backends_reject_wrong_family():
    mixed = Signature.from_strings({"00": 1, "11": 2, "01": 1})
    with pytest.raises(CSPError):
        affine_csp_value(CSPInstance(2, [(mixed, (0, 1))]))
    with pytest.raises(CSPError):
        product_csp_value(CSPInstance(2, [(mixed, (0, 1))]))


def test_instance_validation():
    with pytest.raises(CSPError):
        CSPInstance(2, [(neq(2), (0,))])
    with pytest.raises(CSPError):
        CSPInstance(2, [(neq(2), (0, 5))])


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_affine_backend_matches_enumeration(seed: int):
    c = random_instance(random.Random(seed), _affine, max_vars=8, max_clauses=8)
    assert affine_csp_value(c) == direct_sum(c) == enumerate_value(c)


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_product_backend_matches_enumeration(seed: int):
    c = random_instance(random.Random(seed), _product, max_vars=8, max_clauses=8)
    assert product_csp_value(c) == direct_sum(c) == enumerate_value(c)


def test_enumeration_matches_direct_on_all_binary_tables():
    vals = [ZERO, ONE, I, ExactComplex(2)]
    for table in cartesian(vals, repeat=4):
        sig = Signature(2, {a: v for a, v in enumerate(table) if v})
        c = CSPInstance(3, [(sig, (0, 1)), (sig, (1, 2))])
        assert enumerate_value(c) == direct_sum(c)
