"""Unary languages: Frobenius numbers, size formulas and an exact engine.

A unary language is stored as an eventually periodic set of word lengths:
``tail`` holds acceptance for lengths ``0..mu-1`` and ``cycle`` for lengths
``mu + t`` with ``t`` taken modulo ``lam``.  Both are int bit masks.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence


class UnaryError(ValueError):
    pass


HORIZON_LIMIT = 10_000_000
SUBSET_LIMIT = 25


@dataclass(frozen=True)
class UnarySize:
    lam: int
    mu: int

    def __post_init__(self):
        if self.lam < 1 or self.mu < 0:
            raise UnaryError(f"bad size ({self.lam}, {self.mu})")

    @property
    def states(self) -> int:
        return self.lam + self.mu

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "mu": self.mu, "states": self.states}


# ---------------------------------------------------------------------------
# Frobenius numbers


def frobenius(nums: Iterable[int]) -> int:
    """Largest integer not a non-negative combination of ``nums``.

    Uses shortest paths over residues modulo the smallest generator.
    Returns -1 when 1 is among the generators.
    """
    nums = sorted(set(int(x) for x in nums))
    if not nums or nums[0] < 1:
        raise UnaryError("generators must be positive")
    if reduce(gcd, nums) != 1:
        raise UnaryError(f"gcd of {nums} is not 1")
    m = nums[0]
    if m == 1:
        return -1
    # dist[r] = least representable number congruent to r mod m
    inf = float("inf")
    dist = [inf] * m
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if d > dist[r]:
            continue
        for x in nums[1:]:
            nd = d + x
            nr = nd % m
            if nd < dist[nr]:
                dist[nr] = nd
                heapq.heappush(heap, (nd, nr))
    return int(max(dist)) - m


def modified_frobenius(nums: Iterable[int]) -> int:
    """Largest integer not a combination of ``nums`` with positive coefficients."""
    nums = list(nums)
    return frobenius(nums) + sum(nums)


# ---------------------------------------------------------------------------
# size formulas


def _sizes(sizes) -> list[tuple[int, int]]:
    out = []
    for lam, mu in sizes:
        if lam < 1 or mu < 0:
            raise UnaryError(f"bad size ({lam}, {mu})")
        out.append((int(lam), int(mu)))
    if not out:
        raise UnaryError("need at least one size")
    return out


def cyclic_concat_size(n: Sequence[int]) -> UnarySize:
    n = [int(x) for x in n]
    if not n or any(x < 1 for x in n):
        raise UnaryError("cycle lengths must be positive")
    d = reduce(gcd, n)
    return UnarySize(d, d * modified_frobenius([x // d for x in n]) - len(n) + 1)


def tailed_cyclic_size(sizes) -> UnarySize:
    sizes = _sizes(sizes)
    lams = [lam for lam, _ in sizes]
    d = reduce(gcd, lams)
    mu = sum(mu for _, mu in sizes) + d * modified_frobenius([x // d for x in lams])
    return UnarySize(d, mu - len(sizes) + 1)


@dataclass(frozen=True)
class TailsBound:
    size: UnarySize
    maximizers: tuple[tuple[int, ...], ...]


def tails_final_bound_report(sizes) -> TailsBound:
    """Upper bound over all index subsets I, listing every maximizing I (1-based)."""
    sizes = _sizes(sizes)
    k = len(sizes)
    if k > SUBSET_LIMIT:
        raise UnaryError(f"k={k} exceeds the subset limit {SUBSET_LIMIT}")
    base = sum(mu for _, mu in sizes) - k + 1
    best = None
    winners: list[tuple[int, ...]] = []
    for r in range(k + 1):
        for subset in itertools.combinations(range(k), r):
            if subset:
                lams = [sizes[i][0] for i in subset]
                d = reduce(gcd, lams)
                term = d * modified_frobenius([x // d for x in lams])
            else:
                term = 0
            value = base + term
            label = tuple(i + 1 for i in subset)
            if best is None or value > best:
                best, winners = value, [label]
            elif value == best:
                winners.append(label)
    lam = reduce(lcm, (lam for lam, _ in sizes))
    return TailsBound(UnarySize(lam, best), tuple(winners))


def tails_final_bound(sizes) -> UnarySize:
    return tails_final_bound_report(sizes).size


# ---------------------------------------------------------------------------
# eventually periodic languages


def _bits(mask: int, width: int) -> list[int]:
    return [(mask >> i) & 1 for i in range(width)]


@dataclass(frozen=True)
class UnaryLang:
    mu: int
    lam: int
    tail: int = 0
    cycle: int = 0

    def __post_init__(self):
        if self.lam < 1 or self.mu < 0:
            raise UnaryError(f"bad shape mu={self.mu} lam={self.lam}")
        if self.tail >> self.mu or self.cycle >> self.lam:
            raise UnaryError("bit pattern wider than its shape")

    def contains(self, length: int) -> bool:
        if length < self.mu:
            return bool(self.tail >> length & 1)
        return bool(self.cycle >> ((length - self.mu) % self.lam) & 1)

    def window(self, width: int) -> int:
        """Membership of lengths ``0..width-1`` as a bit mask."""
        out = self.tail
        for x in range(self.mu, width):
            if self.cycle >> ((x - self.mu) % self.lam) & 1:
                out |= 1 << x
        return out

    @property
    def size(self) -> UnarySize:
        c = self.canonical()
        return UnarySize(c.lam, c.mu)

    def canonical(self) -> UnaryLang:
        return canonicalize(self.mu, self.lam, self.tail, self.cycle)

    @classmethod
    def from_automaton(cls, lam: int, mu: int, finals: Iterable[int]) -> UnaryLang:
        """Unary DFA with states 0..mu+lam-1, state mu+lam-1 looping back to mu."""
        tail = 0
        cyc = 0
        for f in finals:
            if not 0 <= f < mu + lam:
                raise UnaryError(f"final {f} outside 0..{mu + lam - 1}")
            if f < mu:
                tail |= 1 << f
            else:
                cyc |= 1 << (f - mu)
        return cls(mu, lam, tail, cyc).canonical()

    @classmethod
    def from_dfa(cls, dfa) -> UnaryLang:
        if len(dfa.alphabet) != 1:
            raise UnaryError("not a unary DFA")
        seen = {}
        q = dfa.start
        order = []
        while q not in seen:
            seen[q] = len(order)
            order.append(q)
            q = dfa.delta[q][0]
        mu = seen[q]
        lam = len(order) - mu
        finals = [i for i, s in enumerate(order) if s in dfa.finals]
        return cls.from_automaton(lam, mu, finals)

    @classmethod
    def cyclic_witness(cls, n: int) -> UnaryLang:
        """a^(n-1) (a^n)*"""
        return cls.from_automaton(n, 0, [n - 1])

    @classmethod
    def tailed_witness(cls, lam: int, mu: int) -> UnaryLang:
        """a^(mu+lam-1) (a^lam)*"""
        return cls.from_automaton(lam, mu, [mu + lam - 1])


EPSILON_LANG = UnaryLang(1, 1, 1, 0)
EMPTY_LANG = UnaryLang(0, 1, 0, 0)


def _min_period(bits: list[int]) -> int:
    n = len(bits)
    for p in range(1, n + 1):
        if n % p == 0 and bits[p:] == bits[:-p]:
            return p
    return n


def canonicalize(mu: int, lam: int, tail: int, cyc: int) -> UnaryLang:
    cycle_bits = _bits(cyc, lam)
    p = _min_period(cycle_bits)
    cycle_bits = cycle_bits[:p]
    tail_bits = _bits(tail, mu)
    while tail_bits and tail_bits[-1] == cycle_bits[-1]:
        tail_bits.pop()
        cycle_bits = cycle_bits[-1:] + cycle_bits[:-1]
    if not any(cycle_bits) and not any(tail_bits):
        return EMPTY_LANG
    t = sum(b << i for i, b in enumerate(tail_bits))
    c = sum(b << i for i, b in enumerate(cycle_bits))
    return UnaryLang(len(tail_bits), len(cycle_bits), t, c)


def unary_concat(a: UnaryLang, b: UnaryLang) -> UnaryLang:
    """Canonical form of the length sumset {x + y : x in a, y in b}."""
    L = lcm(a.lam, b.lam)
    # Sums of the two periodic parts fill every multiple of gcd(lam_a, lam_b)
    # past a Frobenius-type offset below L, so the result is L-periodic from
    # ``start`` on; the following period is recomputed as a check.
    start = a.mu + b.mu + a.lam + b.lam + L
    width = start + 2 * L
    if width > HORIZON_LIMIT:
        raise UnaryError(f"horizon {width} exceeds {HORIZON_LIMIT}")
    wa = a.window(width)
    wb = b.window(width)
    if wa.bit_count() > wb.bit_count():
        wa, wb = wb, wa
    total = 0
    full = (1 << width) - 1
    x = wa
    while x:
        low = x & -x
        total |= (wb << (low.bit_length() - 1)) & full
        x ^= low
    cyc = (total >> start) & ((1 << L) - 1)
    again = (total >> (start + L)) & ((1 << L) - 1)
    assert cyc == again, "sumset not periodic past the stabilization point"
    return canonicalize(start, L, total & ((1 << start) - 1), cyc)


def unary_concat_all(langs: Sequence[UnaryLang]) -> UnaryLang:
    if not langs:
        return EPSILON_LANG
    return reduce(unary_concat, langs)


def unary_minimal_size(lang: UnaryLang) -> UnarySize:
    return lang.size


# ---------------------------------------------------------------------------
# two-factor split search


def split_bound(m: int, n: int, i: int, j: int) -> int:
    a, b = m - i, n - j
    if gcd(a, b) == 1:
        return a * b + i + j
    return 2 * lcm(a, b) + i + j - 1


@dataclass
class SplitReport:
    m: int
    n: int
    best_split: tuple[tuple[int, int], tuple[int, int]]
    best_value: int
    achieved: int
    runner_up: int
    certified: bool
    examined: int


def search_best_unary_pair(m: int, n: int, budget: int = 10_000_000) -> SplitReport:
    """Compare the split (m-1,1),(n-1,1) against the bounds of all other splits.

    The candidate split's value is the exact construction 2*lcm(m-1,n-1)-1;
    it is certified when it beats every other split's upper bound.
    """
    if m < 8 or n < 8:
        raise UnaryError("need m, n >= 8")
    if m * n > budget:
        raise UnaryError(f"{m * n} splits exceed the budget {budget}")
    achieved = 2 * lcm(m - 1, n - 1) - 1
    runner_up = -1
    runner_split = None
    examined = 0
    for i in range(m):
        for j in range(n):
            examined += 1
            if (i, j) == (1, 1):
                continue
            c = split_bound(m, n, i, j)
            if c > runner_up:
                runner_up, runner_split = c, (i, j)
    certified = achieved > runner_up
    if certified:
        split = ((m - 1, 1), (n - 1, 1))
        value = achieved
    else:
        i, j = runner_split
        split = ((m - i, i), (n - j, j))
        value = runner_up
    return SplitReport(m, n, split, value, achieved, runner_up, certified, examined)


def scaled_pair_languages(m: int, n: int) -> tuple[UnaryLang, UnaryLang]:
    """{e} u a^(m-2) (a^(m-1))* and the analogue for n, as size-(m-1, 1) automata."""
    return (
        UnaryLang.from_automaton(m - 1, 1, [0, m - 2]),
        UnaryLang.from_automaton(n - 1, 1, [0, n - 2]),
    )


def scaled_pair_check(m: int, n: int) -> tuple[int, int]:
    """(engine size, 2*lcm(m-1, n-1) - 1) for the scaled construction."""
    a, b = scaled_pair_languages(m, n)
    return unary_concat(a, b).size.states, 2 * lcm(m - 1, n - 1) - 1
