"""Generators for the witness automata families and the k=3 ternary scan."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import bounds
from .automata import DEFAULT_CAP, Dfa, chain, collapse, cycle, identity
from .concat import minimal_concat


class WitnessError(ValueError):
    pass


def _require(cond: bool, clause: str):
    if not cond:
        raise WitnessError(f"precondition violated: {clause}")


def _dfa(n: int, alphabet: Sequence[str], maps: dict, final: int | None = None) -> Dfa:
    """DFA on n states, start 0, single final (default n-1); unlisted symbols fix all."""
    full = {a: maps.get(a, identity(n)) for a in alphabet}
    f = n - 1 if final is None else final
    return Dfa.from_transforms(n, alphabet, full, 0, {f})


def _one_state(alphabet: Sequence[str]) -> Dfa:
    return _dfa(1, alphabet, {}, 0)


def gen_kp1(n: Sequence[int]) -> list[Dfa]:
    n = list(n)
    k = len(n)
    _require(k >= 2, "k >= 2")
    _require(all(x >= 3 for x in n), "all n_i >= 3")
    alphabet = ["b"] + [f"a{i}" for i in range(1, k + 1)]
    out = []
    for i, ni in enumerate(n, start=1):
        out.append(
            _dfa(ni, alphabet, {f"a{i}": cycle(range(ni), ni), "b": chain((0, 1), ni)})
        )
    return out


def kp1_two_parity_sets(k: int) -> tuple[list[int], list[int]]:
    I = [i for i in range(1, k) if i % 2 == k % 2]
    J = [i for i in range(1, k) if i % 2 != k % 2]
    return I, J


def gen_kp1_two(n: Sequence[int]) -> list[Dfa]:
    n = list(n)
    k = len(n)
    _require(k >= 2, "k >= 2")
    _require(all(x >= 2 for x in n), "all n_i >= 2")
    alphabet = ["b"] + [f"a{i}" for i in range(1, k + 1)]
    I, _ = kp1_two_parity_sets(k)
    ak = f"a{k}"
    out = []
    for i, ni in enumerate(n, start=1):
        shift = cycle(range(ni), ni)
        walk = chain(range(ni), ni)
        if i == k:
            maps = {"b": shift, ak: walk}
        elif i in I:
            maps = {f"a{i}": shift, ak: walk}
        else:
            maps = {f"a{i}": shift, "b": walk}
        out.append(_dfa(ni, alphabet, maps))
    return out


def gen_binary_k2(n1: int, n2: int) -> tuple[Dfa, Dfa]:
    _require(n1 >= 1 and n2 >= 1, "n1, n2 >= 1")
    alphabet = ["a", "b"]
    if n1 == 1:
        a_dfa = _one_state(alphabet)
    else:
        a_dfa = _dfa(
            n1,
            alphabet,
            {"a": cycle(range(n1), n1), "b": collapse(range(1, n1 - 1), 0, n1)},
        )
    if n2 == 1:
        b_dfa = _one_state(alphabet)
    else:
        advance = chain(list(range(1, n2)) + [0], n2)
        b_dfa = _dfa(n2, alphabet, {"a": cycle(range(n2), n2), "b": advance})
    return a_dfa, b_dfa


def gen_k(n: Sequence[int]) -> list[Dfa]:
    n = list(n)
    k = len(n)
    _require(k >= 3, "k >= 3")
    _require(n[0] >= 2 and n[-1] >= 2, "n1, nk >= 2")
    _require(all(x >= 3 for x in n[1:-1]), "n_i >= 3 for 2 <= i <= k-1")
    alphabet = ["b"] + [f"a{i}" for i in range(1, k)]
    out = []
    for i, ni in enumerate(n[:-1], start=1):
        out.append(
            _dfa(
                ni,
                alphabet,
                {f"a{i}": cycle(range(ni), ni), "b": collapse(range(1, ni - 1), 0, ni)},
            )
        )
    nk = n[-1]
    out.append(
        _dfa(
            nk,
            alphabet,
            {
                f"a{k - 1}": cycle(range(nk), nk),
                "b": chain(list(range(1, nk)) + [0], nk),
            },
        )
    )
    return out


def gen_k_twostate(k: int) -> list[Dfa]:
    _require(k >= 3, "k >= 3")
    alphabet = ["b", "c"] + [f"a{i}" for i in range(2, k)]
    swap = (1, 0)
    reset = (0, 0)
    out = []
    for i in range(1, k + 1):
        maps = {}
        if 2 <= i <= k - 2:
            maps[f"a{i}"] = swap
        if i in (k - 1, k):
            maps[f"a{k - 1}"] = swap
        if i == 1:
            maps["b"] = swap
        elif i % 2 == 1:
            maps["b"] = reset
        if i % 2 == 0:
            maps["c"] = reset
        out.append(_dfa(2, alphabet, maps))
    return out


def _lb_pre(n: Sequence[int]):
    _require(len(n) >= 3, "k >= 3")
    _require(n[0] >= 3, "n1 >= 3")
    _require(n[1] >= 4, "n2 >= 4")
    _require(all(x >= 3 for x in n[2:]), "n_i >= 3 for i >= 3")


def _binary_lb_maps(n: Sequence[int]) -> list[dict]:
    maps = []
    n1 = n[0]
    # A1: a,b walk 1..n1-1; from n1-1, a returns to 1 and b enters the sink n1
    a1 = list(range(1, n1)) + [n1 - 1]
    b1 = list(range(1, n1)) + [n1 - 1]
    a1[n1 - 2] = 0
    maps.append({"a": tuple(a1), "b": tuple(b1)})
    n2 = n[1]
    walk2 = chain(range(n2), n2)
    maps.append({"a": walk2, "b": (0,) + walk2[1:]})
    for ni in n[2:]:
        walk = chain(range(ni), ni)
        maps.append({"a": walk, "b": walk})
    return maps


def gen_binary_lb(n: Sequence[int]) -> list[Dfa]:
    n = list(n)
    _lb_pre(n)
    alphabet = ["a", "b"]
    maps = _binary_lb_maps(n)
    out = [_dfa(n[0], alphabet, maps[0])]
    for ni, m in zip(n[1:], maps[1:]):
        out.append(_dfa(ni, alphabet, m, final=ni - 2))
    return out


def gen_ternary_lb(n: Sequence[int]) -> list[Dfa]:
    n = list(n)
    _lb_pre(n)
    alphabet = ["a", "b", "c"]
    maps = _binary_lb_maps(n)
    k = len(n)
    maps[0]["c"] = cycle(range(n[0]), n[0])
    for i in range(1, k - 1):
        ni = n[i]
        maps[i]["c"] = chain((ni - 2, ni - 1), ni)
    out = [_dfa(n[0], alphabet, maps[0])]
    for ni, m in zip(n[1:], maps[1:]):
        out.append(_dfa(ni, alphabet, m, final=ni - 2))
    return out


def gen_unary_cyclic(n: Sequence[int]) -> list[Dfa]:
    """DFAs for a^(n_i - 1) (a^n_i)* over the alphabet {a}."""
    _require(len(n) >= 1 and all(x >= 1 for x in n), "n_i >= 1")
    return [_dfa(ni, ["a"], {"a": cycle(range(ni), ni)}) for ni in n]


def gen_example_k5_14() -> list[Dfa]:
    alphabet = list("abcdef")
    return [
        _dfa(3, alphabet, {"a": cycle((0, 1, 2), 3)}),
        _dfa(
            3,
            alphabet,
            {"b": cycle((0, 1, 2), 3), "e": cycle((0, 1), 3), "f": collapse((0, 1), 0, 3)},
        ),
        _one_state(alphabet),
        _one_state(alphabet),
        _dfa(3, alphabet, {"c": cycle((0, 1, 2), 3), "d": chain((1, 2, 0), 3)}),
    ]


# ---------------------------------------------------------------------------
# family registry


@dataclass(frozen=True)
class Family:
    tag: str
    generate: Callable[[tuple[int, ...]], list[Dfa]]
    expected: Callable[[tuple[int, ...]], int]
    #: "exact" when the expected value is the minimal size, "lower" for lower bounds
    kind: str = "exact"
    fixed_n: tuple[int, ...] | None = None


def _unary_expected(n):
    from .unary import cyclic_concat_size

    return cyclic_concat_size(n).states


FAMILIES: dict[str, Family] = {
    f.tag: f
    for f in [
        Family("kp1", gen_kp1, bounds.expected_size),
        Family("kp1-two", gen_kp1_two, bounds.expected_size),
        Family(
            "binary-k2",
            lambda n: list(gen_binary_k2(*n)) if len(n) == 2 else _bad_k2(n),
            bounds.expected_size,
        ),
        Family("kletter", gen_k, bounds.expected_size),
        Family(
            "kletter-2state",
            lambda n: gen_k_twostate(len(n)) if set(n) == {2} else _bad_twostate(n),
            bounds.expected_size,
        ),
        Family("binary-lb", gen_binary_lb, bounds.binary_lower_bound, "lower"),
        Family("ternary-lb", gen_ternary_lb, bounds.ternary_lower_bound, "lower"),
        Family("unary-cyclic", gen_unary_cyclic, _unary_expected),
        Family(
            "example-k5-14",
            lambda n: gen_example_k5_14(),
            bounds.interval_bound,
            fixed_n=(3, 3, 1, 1, 3),
        ),
    ]
}


def _bad_k2(n):
    raise WitnessError("precondition violated: binary-k2 needs exactly two sizes")


def _bad_twostate(n):
    raise WitnessError("precondition violated: kletter-2state needs all n_i = 2")


def get_family(tag: str) -> Family:
    try:
        return FAMILIES[tag]
    except KeyError:
        raise WitnessError(
            f"unknown family {tag!r}; choose from {', '.join(FAMILIES)}"
        ) from None


# ---------------------------------------------------------------------------
# exhaustive scan over binary two-state triples

TWO_STATE_MAPS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass
class OptimalityReport:
    examined: int
    maximum: int
    argmax: tuple
    bound: int
    histogram: dict[int, int] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.maximum < self.bound


def _two_state_dfas(wide_last: bool) -> list[list[Dfa]]:
    alphabet = ("a", "b")
    plain = [
        Dfa.from_transforms(2, alphabet, {"a": ma, "b": mb}, 0, {1})
        for ma, mb in itertools.product(TWO_STATE_MAPS, repeat=2)
    ]
    if not wide_last:
        return [plain, plain, plain]
    last = [
        Dfa.from_transforms(2, alphabet, {"a": ma, "b": mb}, 0, fs)
        for ma, mb in itertools.product(TWO_STATE_MAPS, repeat=2)
        for fs in ((), (0,), (1,), (0, 1))
    ]
    return [plain, plain, last]


def _scan_chunk(args):
    wide_last, first_indices = args
    pools = _two_state_dfas(wide_last)
    out = []
    for i in first_indices:
        for j, k in itertools.product(range(len(pools[1])), range(len(pools[2]))):
            size = minimal_concat(
                [pools[0][i], pools[1][j], pools[2][k]], DEFAULT_CAP
            ).state_count
            out.append(((i, j, k), size))
    return out


def check_ternary_optimality_k3(wide: bool = False, jobs: int = 1) -> OptimalityReport:
    """Run the pipeline on every binary triple of two-state DFAs."""
    bound = bounds.tau((2, 2, 2))
    count = len(TWO_STATE_MAPS) ** 2
    chunks = [(wide, [i]) for i in range(count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_chunk, chunks))
    else:
        parts = [_scan_chunk(c) for c in chunks]
    results = sorted(r for part in parts for r in part)
    histogram: dict[int, int] = {}
    best = (-1, ())
    for triple, size in results:
        histogram[size] = histogram.get(size, 0) + 1
        if size > best[0]:
            best = (size, triple)
    return OptimalityReport(
        len(results), best[0], best[1], bound, dict(sorted(histogram.items()))
    )
