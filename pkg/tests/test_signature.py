from __future__ import annotations

from itertools import product as cartesian

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import eo_signatures, signatures
from eocount.builtins import f40
from eocount.exact import ONE, ZERO, ExactComplex
from eocount.signature import (
    DELTA0,
    DELTA1,
    NEQ2,
    Signature,
    SignatureError,
    all_pairings,
    eq,
    neq,
    neq_weighted,
    tensor_all,
    unary,
)


def test_evaluate_at_examples():
    assert NEQ2.value("01") == 1
    assert NEQ2.value("11") == 0
    assert neq(4).value("1100") == 1
    with pytest.raises(SignatureError):
        NEQ2.value("011")


def test_is_eo_examples():
    assert neq(4).is_eo()
    assert not Signature.from_strings({"11": 1}).is_eo()
    f = f40()
    assert f.is_eo() and f.arity == 40 and len(f.rows) == 5


def test_dual_examples():
    assert NEQ2.dual() == NEQ2
    assert DELTA0.tensor(DELTA1).dual() == DELTA1.tensor(DELTA0)
    assert f40().dual().dual() == f40()


def test_tensor_examples():
    assert DELTA1.tensor(DELTA0) == Signature.from_strings({"10": 1})
    ternary = Signature.from_strings({"100": 1, "010": 1, "001": 1})
    assert set(ternary.tensor(DELTA1).support_strings()) == {"0011", "0101", "1001"}
    f = neq(4)
    assert f.tensor(Signature.constant(ONE)) == f


def test_self_loop_examples():
    assert neq(4).self_loop(1, 3) == NEQ2
    f = DELTA0.tensor(DELTA1).tensor(NEQ2)
    assert f.self_loop(1, 2) == NEQ2
    assert Signature.zero(4).self_loop(2, 4).is_zero()
    with pytest.raises(SignatureError):
        f.self_loop(1, 1)
    with pytest.raises(SignatureError):
        f.self_loop(1, 5)


def test_pin_pair_examples():
    assert neq(4).pin_pair(1, 4) == Signature.from_strings({"10": 1})
    assert NEQ2.pin_pair(1, 2) == Signature.constant(1)
    assert DELTA0.tensor(DELTA1).pin_pair(1, 2) == Signature.zero(0)


def test_restrict_unequal_examples():
    f = neq(4)
    assert f.restrict_unequal(1, 3) == f
    assert f.restrict_unequal(1, 2).is_zero()
    ones = Signature(2, {a: 1 for a in range(4)})
    assert ones.restrict_unequal(1, 2) == NEQ2


def test_restrict_pairing_examples():
    q1 = Signature.from_strings({"1100": 1, "1010": 1, "1001": 1})
    assert set(q1.restrict_pairing([(1, 2), (3, 4)]).support_strings()) == {"1001", "1010"}
    assert neq(4).restrict_pairing([(1, 3), (2, 4)]) == neq(4)
    assert Signature.zero(4).restrict_pairing([(1, 2), (3, 4)]).is_zero()
    with pytest.raises(SignatureError):
        q1.restrict_pairing([(1, 2), (2, 3)])


def test_connect_two_disequalities_gives_disequality():
    # the wire carries a third disequality, so the chain x1 != y1, y1 != y2,
    # y2 != x2 is again a disequality (not =2)
    assert NEQ2.connect(NEQ2, [(2, 1)]) == NEQ2
    assert NEQ2.connect(NEQ2, [(2, 1)]) != eq(2)
    # every chain of disequalities has odd length, so =2 never appears
    chain = NEQ2
    for _ in range(4):
        chain = chain.connect(NEQ2, [(2, 1)])
        assert chain == NEQ2


def test_connect_examples():
    assert neq(4).connect(neq(4), [(k, k) for k in range(1, 5)]) == Signature.constant(2)
    c = ExactComplex(3, 0, 1)
    f = neq_weighted(4, 2, 5)
    assert f.connect(Signature.constant(c), []) == f.scale(c)


def test_signature_matrix_examples():
    m = NEQ2.signature_matrix([1])
    assert m == [[ZERO, ONE], [ONE, ZERO]]
    m4 = neq(4).signature_matrix([1, 2])
    nonzero = [(r, c) for r in range(4) for c in range(4) if m4[r][c]]
    assert nonzero == [(0, 3), (3, 0)]
    with pytest.raises(SignatureError):
        neq(4).signature_matrix([1, 1])


def _connect_by_matrices(f: Signature, g: Signature, pairs: list[tuple[int, int]]) -> Signature:
    """Independent oracle: M_h = M_f * N^(x)l * M_g with N the disequality matrix."""
    pairs = sorted(pairs)
    free_f = [v for v in range(1, f.arity + 1) if v not in {i for i, _ in pairs}]
    free_g = [v for v in range(1, g.arity + 1) if v not in {j for _, j in pairs}]
    mf = f.signature_matrix(free_f)
    mg = g.signature_matrix([j for _, j in pairs])
    mask = (1 << len(pairs)) - 1
    rows = {}
    for r in range(1 << len(free_f)):
        for c2 in range(1 << len(free_g)):
            total = ZERO
            for c in range(1 << len(pairs)):
                total = total + mf[r][c] * mg[c ^ mask][c2]
            if total:
                # matrix indices read x_first as the most significant bit
                bits = format(r, f"0{len(free_f)}b") if free_f else ""
                bits += format(c2, f"0{len(free_g)}b") if free_g else ""
                rows[bits] = total
    return Signature.from_strings(rows, len(free_f) + len(free_g))


@st.composite
def connect_cases(draw):
    f = draw(signatures(max_arity=4, min_arity=1))
    g = draw(signatures(max_arity=4, min_arity=1))
    k = draw(st.integers(0, min(f.arity, g.arity)))
    fi = draw(st.permutations(range(1, f.arity + 1)))[:k]
    gj = draw(st.permutations(range(1, g.arity + 1)))[:k]
    return f, g, list(zip(fi, gj))


@given(connect_cases())
def test_connect_matches_matrix_product(case):
    f, g, pairs = case
    assert f.connect(g, pairs) == _connect_by_matrices(f, g, pairs)


@given(signatures(max_arity=5, min_arity=2), st.data())
def test_self_loop_symmetric(f, data):
    x, y = data.draw(st.permutations(range(1, f.arity + 1)))[:2]
    assert f.self_loop(x, y) == f.self_loop(y, x)


@given(signatures(max_arity=5, min_arity=2), st.data())
def test_pin_pair_matches_definition(f, data):
    x, y = data.draw(st.permutations(range(1, f.arity + 1)))[:2]
    rest = [v for v in range(1, f.arity + 1) if v not in (x, y)]
    pinned = f.pin_pair(x, y)
    for bits in cartesian("01", repeat=len(rest)):
        full = ["0"] * f.arity
        full[x - 1] = "1"
        for v, b in zip(rest, bits):
            full[v - 1] = b
        assert pinned.value("".join(bits)) == f.value("".join(full))


@given(eo_signatures(), eo_signatures(max_half=2), st.data())
def test_eo_preserved_by_gadget_operations(f, g, data):
    assert f.tensor(g).is_eo()
    x, y = data.draw(st.permutations(range(1, f.arity + 1)))[:2]
    assert f.self_loop(x, y).is_eo()
    assert f.pin_pair(x, y).is_eo()
    assert f.restrict_unequal(x, y).is_eo()
    pairing = data.draw(st.sampled_from(list(all_pairings(range(1, f.arity + 1)))))
    assert f.restrict_pairing(pairing).is_eo()
    k = data.draw(st.integers(1, min(f.arity, g.arity)))
    fi = data.draw(st.permutations(range(1, f.arity + 1)))[:k]
    gj = data.draw(st.permutations(range(1, g.arity + 1)))[:k]
    if (f.arity + g.arity - 2 * k) % 2 == 0:
        assert f.connect(g, list(zip(fi, gj))).is_eo()


@given(signatures(max_arity=6))
def test_dual_involution(f):
    assert f.dual().dual() == f


def test_sparse_high_arity_operations_stay_sparse():
    f = f40()
    g = f.restrict_unequal(1, 2).self_loop(3, 4)
    assert g.arity == 38 and len(g.rows) <= 5
    assert tensor_all([DELTA1, DELTA0, f]).arity == 42


def test_symmetric_constructor():
    assert Signature.symmetric([0, 1, 0]) == NEQ2
    assert unary(1, 1).tensor(unary(1, 1)) == Signature.symmetric([1, 1, 1])
