"""Acceptance criteria, one check per criterion.

Run ``python3 tests/test_acceptance.py`` for a PASS/FAIL line per
criterion; under pytest the same lines appear in the terminal summary.
"""

from __future__ import annotations

import itertools
import os
import sys
import time
from dataclasses import dataclass
from functools import reduce
from math import gcd, lcm
from typing import Callable

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from multicat import bounds  # noqa: E402
from multicat.concat import minimal_concat  # noqa: E402
from multicat.unary import (  # noqa: E402
    UnaryLang,
    UnarySize,
    cyclic_concat_size,
    frobenius,
    modified_frobenius,
    scaled_pair_check,
    search_best_unary_pair,
    tailed_cyclic_size,
    unary_concat,
    unary_concat_all,
)
from multicat.witnesses import (  # noqa: E402
    check_ternary_optimality_k3,
    gen_binary_k2,
    gen_binary_lb,
    gen_example_k5_14,
    gen_k,
    gen_k_twostate,
    gen_kp1,
    gen_kp1_two,
    gen_ternary_lb,
)

from oracles import frobenius_sieve  # noqa: E402


def _grid(ks, values):
    for k in ks:
        yield from itertools.product(values, repeat=k)


def check_1():
    for n in _grid((2, 3, 4), (2, 3, 4)):
        assert bounds.count_valid_states(n).tau == bounds.enumerate_valid_states(n), n


def check_2():
    for n1, n2 in itertools.product(range(2, 11), repeat=2):
        assert bounds.tau((n1, n2)) == (n1 - 1) * 2**n2 + 2 ** (n2 - 1)


def check_3():
    for n1, n2 in itertools.product(range(1, 6), repeat=2):
        if n2 == 1:
            want = n1
        elif n1 == 1:
            want = 2 ** (n2 - 1)
        else:
            want = (n1 - 1) * 2**n2 + 2 ** (n2 - 1)
        got = minimal_concat(gen_binary_k2(n1, n2)).state_count
        assert got == want, (n1, n2, got, want)


def _tight(gen, n, want=None):
    tau = bounds.tau(n)
    if want is not None:
        assert tau == want, (n, tau, want)
    got = minimal_concat(gen(n)).state_count
    assert got == tau, (n, got, tau)


def check_4():
    _tight(gen_kp1, (3, 3, 3), 106)
    _tight(gen_kp1, (3, 4, 3), 226)
    _tight(gen_kp1, (3, 3, 3, 3), 570)


def check_5():
    _tight(gen_kp1_two, (2, 2, 2), 15)
    _tight(gen_kp1_two, (3, 2, 3, 2, 2))


def check_6():
    _tight(gen_k, (2, 3, 2), 33)
    _tight(gen_k, (2, 3, 3, 2), 178)


def check_7():
    results = {}
    for k, want in ((3, 15), (4, 37), (5, 90)):
        assert bounds.tau((2,) * k) == want
        results[k] = minimal_concat(gen_k_twostate(k)).state_count
    misses = {k: v for k, v in results.items() if v != bounds.tau((2,) * k)}
    assert not misses, f"minimal sizes {results}; misses at {misses}"


def check_8():
    report = check_ternary_optimality_k3()
    assert report.examined == 4096
    assert report.maximum < 15, report.maximum


def check_9():
    assert minimal_concat(gen_example_k5_14()).state_count == 14
    assert bounds.interval_bound((3, 3, 1, 1, 3)) == 14


def check_10():
    n = (3, 4, 3)
    assert minimal_concat(gen_binary_lb(n)).state_count >= 10
    assert minimal_concat(gen_ternary_lb(n)).state_count >= 24


def check_11():
    for n in _grid((3, 4), (2, 3, 4)):
        lo, hi = bounds.sandwich_bounds(n)
        assert lo <= bounds.tau(n) <= hi, n


def check_12():
    for r in (2, 3):
        for nums in itertools.combinations(range(1, 31), r):
            if reduce(gcd, nums) == 1:
                assert frobenius(nums) == frobenius_sieve(nums), nums
    assert frobenius((3, 5)) == 7
    assert frobenius((2, 3)) == 1
    assert modified_frobenius((6, 10, 15)) == 60


def check_13():
    witness = {x: UnaryLang.cyclic_witness(x) for x in range(1, 16)}
    for k in (1, 2, 3):
        for n in itertools.product(range(1, 16), repeat=k):
            got = unary_concat_all([witness[x] for x in n]).size
            d = reduce(gcd, n)
            want = UnarySize(d, d * modified_frobenius([x // d for x in n]) - k + 1)
            assert got == want == cyclic_concat_size(n), (n, got, want)


def check_14():
    # concatenation of unary languages commutes, so multisets cover every order
    shapes = [(lam, mu) for lam in range(1, 11) for mu in range(0, 5)]
    witness = {s: UnaryLang.tailed_witness(*s) for s in shapes}
    for k in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(shapes, k):
            got = unary_concat_all([witness[s] for s in combo]).size
            assert got == tailed_cyclic_size(combo), combo


def check_15():
    langs = [
        UnaryLang.from_automaton(12, 2, [0, 13]),
        UnaryLang.from_automaton(20, 2, [0, 21]),
        UnaryLang.from_automaton(30, 2, [0, 31]),
    ]
    size = unary_concat(unary_concat(langs[0], langs[1]), langs[2]).size
    assert (size.lam, size.mu) == (60, 124), size


def check_16():
    m, n = 471, 315
    rep = search_best_unary_pair(m, n)
    assert rep.certified
    assert rep.best_split == ((m - 1, 1), (n - 1, 1))
    assert rep.best_value == (m - 1) * (n - 1) - 1 == 2 * lcm(m - 1, n - 1) - 1
    got, want = scaled_pair_check(17, 13)
    assert got == want == 2 * lcm(16, 12) - 1


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    limit: float
    check: Callable[[], None]
    known_gap: str | None = None


CRITERIA = [
    Criterion(1, "valid-state recursion equals enumeration", 10, check_1),
    Criterion(2, "k=2 closed form", 1, check_2),
    Criterion(3, "binary k=2 witnesses are tight", 5, check_3),
    Criterion(4, "(k+1)-letter witnesses reach tau", 120, check_4),
    Criterion(5, "(k+1)-letter witnesses with two-state factors", 120, check_5),
    Criterion(6, "k-letter witnesses reach tau", 120, check_6),
    Criterion(
        7,
        "all-two-state k-letter family reaches tau for k=3,4,5",
        60,
        check_7,
        known_gap="k=3 gives 7 states, not 15; see the decisions ledger",
    ),
    Criterion(8, "ternary optimality scan at (2,2,2)", 300, check_8),
    Criterion(9, "k=5 example with one-state factors", 1, check_9),
    Criterion(10, "binary and ternary lower-bound families", 60, check_10),
    Criterion(11, "sandwich bounds bracket tau", 1, check_11),
    Criterion(12, "Frobenius numbers match the sieve", 10, check_12),
    Criterion(13, "cyclic unary witnesses meet the size formula", 30, check_13),
    Criterion(14, "tailed unary witnesses meet the size formula", 30, check_14),
    Criterion(15, "unary example with tails and finals", 10, check_15),
    Criterion(16, "471/315 split search and scaled check", 30, check_16),
]


def run_criterion(c: Criterion) -> float:
    start = time.perf_counter()
    c.check()
    elapsed = time.perf_counter() - start
    assert elapsed < c.limit, f"took {elapsed:.2f}s, limit {c.limit}s"
    return elapsed


def _param(c: Criterion):
    marks = []
    if c.known_gap:
        marks.append(pytest.mark.xfail(reason=c.known_gap, strict=True, raises=AssertionError))
    return pytest.param(c, id=f"c{c.number:02d}", marks=marks)


@pytest.mark.parametrize("criterion", [_param(c) for c in CRITERIA])
def test_criterion(criterion):
    run_criterion(criterion)


def main() -> int:
    failed = 0
    for c in CRITERIA:
        try:
            elapsed = run_criterion(c)
        except AssertionError as exc:
            failed += 1
            print(f"FAIL {c.number:2d} {c.title}: {exc}")
        else:
            print(f"PASS {c.number:2d} {c.title} ({elapsed:.2f}s)")
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria pass")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
