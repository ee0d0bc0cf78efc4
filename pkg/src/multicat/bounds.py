"""Counting formulas for the concatenation of k DFAs.

Everything here is exact integer (or Fraction) arithmetic.  Size vectors are
1-indexed in the public tables: ``U[i]`` and ``V[i]`` refer to factor ``i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class BoundResult:
    tau: int
    U: dict[int, int]
    V: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "U": {str(i): u for i, u in sorted(self.U.items())},
            "V": {str(i): v for i, v in sorted(self.V.items())},
        }


def _check_sizes(n: Sequence[int]) -> tuple[int, ...]:
    n = tuple(int(x) for x in n)
    if not n:
        raise BoundError("size vector must be non-empty")
    if any(x < 1 for x in n):
        raise BoundError(f"sizes must be positive: {n}")
    return n


def _recurse(n: Sequence[int], lo: int, hi: int, truncated: bool) -> tuple[dict, dict]:
    """U/V tables for positions lo..hi (1-based, inclusive).

    With ``truncated`` the last position uses ``U=2^(n-1), V=2^(n-2)``, the
    boundary used when the next factor has a single state.
    """
    U: dict[int, int] = {}
    V: dict[int, int] = {}
    last = n[hi - 1]
    if truncated:
        U[hi], V[hi] = 1 << (last - 1), 1 << (last - 2)
    else:
        U[hi], V[hi] = 1 << last, 1 << (last - 1)
    for i in range(hi - 1, lo - 1, -1):
        ni = n[i - 1]
        U[i] = 1 + ((1 << (ni - 1)) - 1) * U[i + 1] + (1 << (ni - 1)) * V[i + 1]
        V[i] = (1 << (ni - 2)) * (U[i + 1] + V[i + 1])
    return U, V


def count_valid_states(n: Sequence[int]) -> BoundResult:
    n = _check_sizes(n)
    if len(n) < 2:
        raise BoundError("need k >= 2")
    if any(x < 2 for x in n):
        raise BoundError(f"all sizes must be >= 2, got {n}; use one_state_bound")
    k = len(n)
    U, V = _recurse(n, 2, k, truncated=False)
    tau = (n[0] - 1) * U[2] + V[2]
    return BoundResult(tau, U, V)


def tau(n: Sequence[int]) -> int:
    return count_valid_states(n).tau


def count_valid_k2_closed(n1: int, n2: int) -> int:
    return (n1 - 1) * (1 << n2) + (1 << (n2 - 1))


def count_valid_k3_closed(n1: int, n2: int, n3: int) -> int:
    if min(n1, n2, n3) < 2:
        raise BoundError("all sizes must be >= 2")
    big = Fraction(1 << (n2 + n3))
    value = (
        n1 * (1 + Fraction(3, 4) * big - (1 << n3))
        - Fraction(3, 8) * big
        + (1 << n3)
        - 1
    )
    assert value.denominator == 1
    return int(value)


ENUM_GUARD = 1 << 24


def enumerate_valid_states(n: Sequence[int]) -> int:
    """Brute-force count of valid tuples with s_i = 1 and f_i = n_i."""
    n = _check_sizes(n)
    if any(x < 2 for x in n):
        raise BoundError("enumeration needs all sizes >= 2")
    k = len(n)
    if n[0] << sum(n[1:]) > ENUM_GUARD:
        raise BoundError(f"enumeration guard exceeded for {n}")
    count = 0
    ranges = [range(1 << x) for x in n[1:]]
    for q in range(n[0]):
        first = 1 << q
        for sets in itertools.product(*ranges):
            comps = (first,) + sets
            ok = True
            for i in range(k - 1):
                cur, nxt = comps[i], comps[i + 1]
                if cur == 0 and nxt:
                    ok = False
                    break
                if cur >> (n[i] - 1) & 1 and not nxt & 1:
                    ok = False
                    break
            if ok:
                count += 1
    return count


def sandwich_bounds(n: Sequence[int]) -> tuple[int, int]:
    n = _check_sizes(n)
    k = len(n)
    if k < 3 or any(x < 2 for x in n):
        raise BoundError("sandwich needs k >= 3 and all sizes >= 2")
    total = n[0] << sum(n[1:])
    lower = -(-total // (1 << (k - 1)))
    upper = (3 * total) // 4
    return lower, upper


def one_state_bound(n: Sequence[int], j: int) -> int:
    """Bound when factor ``j`` (1-based) is the only one-state automaton."""
    n = _check_sizes(n)
    k = len(n)
    if k < 2:
        raise BoundError("need k >= 2")
    if not 1 <= j <= k or n[j - 1] != 1:
        raise BoundError(f"n_{j} must equal 1")
    if any(x < 2 for i, x in enumerate(n, start=1) if i != j):
        raise BoundError("all sizes other than n_j must be >= 2")
    return interval_bound(n)


def interval_bound(n: Sequence[int]) -> int:
    """Bound for vectors mixing one-state factors with runs of size >= 2.

    Each maximal run of sizes >= 2 is evaluated with the U/V recursion; a run
    followed by a one-state factor uses the truncated boundary values.  A
    trailing one-state factor contributes one extra state.
    """
    n = _check_sizes(n)
    k = len(n)
    if all(x == 1 for x in n):
        raise BoundError("all factors have one state")
    if all(x >= 2 for x in n):
        raise BoundError("no one-state factor; use count_valid_states")
    runs = []
    i = 1
    while i <= k:
        if n[i - 1] >= 2:
            start = i
            while i + 1 <= k and n[i] >= 2:
                i += 1
            runs.append((start, i))
        i += 1
    total = 0
    for idx, (lo, hi) in enumerate(runs):
        U, V = _recurse(n, lo, hi, truncated=hi < k)
        if idx == 0 and lo == 1:
            total += n[0] - 1 if hi == 1 else (n[0] - 1) * U[2] + V[2]
        else:
            total += V[lo]
    if n[-1] == 1:
        total += 1
    return total


def _lower_bound_pre(n: tuple[int, ...], min_k: int):
    k = len(n)
    if k < min_k:
        raise BoundError(f"need k >= {min_k}")
    if n[0] < 3 or n[1] < 4 or any(x < 3 for x in n[2:]):
        raise BoundError("need n1 >= 3, n2 >= 4 and n_i >= 3 for i >= 3")


def binary_lower_bound(n: Sequence[int]) -> int:
    n = _check_sizes(n)
    _lower_bound_pre(n, 3)
    return n[0] - 1 + (1 << (sum(n[1:]) - (2 * len(n) - 2)))


def ternary_lower_bound(n: Sequence[int]) -> int:
    n = _check_sizes(n)
    _lower_bound_pre(n, 2)
    return n[0] << (sum(n[1:]) - (2 * len(n) - 2))


def expected_size(n: Sequence[int]) -> int:
    """Upper bound for any size vector: tau, or the one-state variant."""
    n = _check_sizes(n)
    if len(n) == 1:
        return n[0]
    if all(x >= 2 for x in n):
        return tau(n)
    if all(x == 1 for x in n):
        return 1
    return interval_bound(n)
