from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from eocount.exact import ExactComplex
from eocount.signature import Signature

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def exact_numbers(draw, nonzero: bool = False) -> ExactComplex:
    coords = [draw(small_rationals) for _ in range(4)]
    x = ExactComplex(*coords)
    if nonzero and not x:
        x = ExactComplex(1)
    return x


gaussian_values = st.sampled_from(
    [ExactComplex(v) for v in (1, -1, 2, 3, Fraction(1, 2))] + [ExactComplex(0, 0, 1), ExactComplex(1, 0, 1)]
)


def eo_inputs(arity: int) -> list[int]:
    return [sum(1 << k for k in ones) for ones in combinations(range(arity), arity // 2)]


@st.composite
def eo_signatures(draw, max_half: int = 3, min_half: int = 1) -> Signature:
    d = draw(st.integers(min_half, max_half))
    strings = eo_inputs(2 * d)
    chosen = draw(st.lists(st.sampled_from(strings), min_size=1, max_size=min(6, len(strings)), unique=True))
    return Signature(2 * d, {a: draw(gaussian_values) for a in chosen})


@st.composite
def signatures(draw, max_arity: int = 4, min_arity: int = 0) -> Signature:
    r = draw(st.integers(min_arity, max_arity))
    rows = draw(st.dictionaries(st.integers(0, (1 << r) - 1), gaussian_values, max_size=1 << r))
    return Signature(r, rows)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter) -> None:
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
