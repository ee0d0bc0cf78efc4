"""Concatenation of k DFAs: NFA constructions, valid tuples, determinization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .automata import (
    DEFAULT_CAP,
    EPSILON,
    AutomatonError,
    Dfa,
    Nfa,
    iter_bits,
    minimize,
    remove_epsilon,
    subset_construct_labeled,
)


class StrictnessError(AutomatonError):
    """Input does not have the single-final shape the epsilon-free rule needs."""


class InvalidReachable(AssertionError):
    """A reachable subset violated the validity conditions."""


@dataclass(frozen=True)
class ConcatInput:
    dfas: tuple[Dfa, ...]

    def __post_init__(self):
        object.__setattr__(self, "dfas", tuple(self.dfas))
        if not self.dfas:
            raise AutomatonError("need at least one automaton")
        alphabet = self.dfas[0].alphabet
        for d in self.dfas[1:]:
            if d.alphabet != alphabet:
                raise AutomatonError(
                    f"alphabet mismatch: {list(alphabet)} vs {list(d.alphabet)}"
                )

    @property
    def k(self) -> int:
        return len(self.dfas)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.dfas[0].alphabet

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(d.state_count for d in self.dfas)

    @property
    def offsets(self) -> tuple[int, ...]:
        out = [0]
        for d in self.dfas:
            out.append(out[-1] + d.state_count)
        return tuple(out)

    def strict_violations(self) -> list[str]:
        """Reasons the epsilon-free construction cannot be used directly."""
        problems = []
        for i, d in enumerate(self.dfas[:-1], start=1):
            if d.state_count == 1:
                if d.start not in d.finals:
                    problems.append(f"A{i} has one non-final state")
            elif len(d.finals) != 1:
                problems.append(f"A{i} must have exactly one final state")
            elif d.start in d.finals:
                problems.append(f"A{i} has its initial state final")
        return problems

    @property
    def has_one_state_factor(self) -> bool:
        return any(d.state_count == 1 for d in self.dfas[:-1])


@dataclass(frozen=True)
class ValidTuple:
    """Subset-automaton state (q, S2, ..., Sk); sets are bit masks."""

    q: int
    sets: tuple[int, ...] = ()

    def as_lists(self) -> tuple[int, list[list[int]]]:
        return self.q, [list(iter_bits(s)) for s in self.sets]


def _disjoint_union(inp: ConcatInput):
    off = inp.offsets
    transitions = set()
    for i, d in enumerate(inp.dfas):
        base = off[i]
        for q in range(d.state_count):
            for j, a in enumerate(d.alphabet):
                transitions.add((base + q, a, base + d.delta[q][j]))
    return off, transitions


def build_concat_eps_nfa(inp: ConcatInput) -> Nfa:
    off, transitions = _disjoint_union(inp)
    dfas = inp.dfas
    for i in range(inp.k - 1):
        target = off[i + 1] + dfas[i + 1].start
        for f in dfas[i].finals:
            transitions.add((off[i] + f, EPSILON, target))
    return Nfa(
        off[-1],
        inp.alphabet,
        frozenset(transitions),
        frozenset([dfas[0].start]),
        frozenset(off[-2] + f for f in dfas[-1].finals),
    )


@dataclass(frozen=True)
class ConcatNfa:
    nfa: Nfa
    epsilon_fallback: bool = False


def build_concat(inp: ConcatInput) -> ConcatNfa:
    """Epsilon-free concatenation NFA, with the fallback flag exposed.

    Middle factors with one accepting state cannot use the direct rule, so
    the epsilon construction is built and its epsilon moves eliminated.
    Any other shape problem raises :class:`StrictnessError`.
    """
    problems = inp.strict_violations()
    if problems:
        raise StrictnessError("; ".join(problems))
    if inp.has_one_state_factor:
        return ConcatNfa(remove_epsilon(build_concat_eps_nfa(inp)), True)
    off, transitions = _disjoint_union(inp)
    dfas = inp.dfas
    for i in range(inp.k - 1):
        d = dfas[i]
        (f,) = d.finals
        target = off[i + 1] + dfas[i + 1].start
        for q in range(d.state_count):
            for j, a in enumerate(d.alphabet):
                if d.delta[q][j] == f:
                    transitions.add((off[i] + q, a, target))
    nfa = Nfa(
        off[-1],
        inp.alphabet,
        frozenset(transitions),
        frozenset([dfas[0].start]),
        frozenset(off[-2] + f for f in dfas[-1].finals),
    )
    return ConcatNfa(nfa, False)


def build_concat_nfa(inp: ConcatInput) -> Nfa:
    return build_concat(inp).nfa


def _check_widths(t: ValidTuple, inp: ConcatInput):
    if len(t.sets) != inp.k - 1:
        raise AutomatonError(f"expected {inp.k - 1} sets, got {len(t.sets)}")
    if not 0 <= t.q < inp.dfas[0].state_count:
        raise AutomatonError(f"q={t.q} outside Q1")
    for i, s in enumerate(t.sets, start=1):
        if s < 0 or s >> inp.dfas[i].state_count:
            raise AutomatonError(f"S{i + 1} wider than A{i + 1}")


def is_valid(t: ValidTuple, inp: ConcatInput) -> bool:
    _check_widths(t, inp)
    dfas = inp.dfas
    comps = (1 << t.q,) + t.sets
    for i in range(inp.k - 1):
        nxt = comps[i + 1]
        if comps[i] == 0 and nxt:
            return False
        hit = any(comps[i] >> f & 1 for f in dfas[i].finals)
        if hit and not nxt >> dfas[i + 1].start & 1:
            return False
    return True


def decode_subset(mask: int, inp: ConcatInput) -> ValidTuple:
    """Slice an NFA subset into components; Q1 must be a singleton."""
    off = inp.offsets
    parts = [(mask >> off[i]) & ((1 << inp.sizes[i]) - 1) for i in range(inp.k)]
    first = parts[0]
    if first == 0 or first & (first - 1):
        raise InvalidReachable(f"subset {mask:#x} does not hold exactly one Q1 state")
    return ValidTuple(first.bit_length() - 1, tuple(parts[1:]))


@dataclass(frozen=True)
class ConcatResult:
    dfa: Dfa
    labels: tuple[ValidTuple, ...]
    nfa: Nfa
    epsilon_fallback: bool = False
    meta: dict = field(default_factory=dict, compare=False)


def determinize_concat(inp: ConcatInput, cap: int = DEFAULT_CAP) -> ConcatResult:
    built = build_concat(inp)
    dfa, masks = subset_construct_labeled(built.nfa, cap)
    labels = []
    for idx, m in enumerate(masks):
        t = decode_subset(m, inp)
        if not is_valid(t, inp):
            raise InvalidReachable(f"reachable state {idx} is not valid: {t}")
        labels.append(t)
    return ConcatResult(dfa, tuple(labels), built.nfa, built.epsilon_fallback)


def labels_to_json(labels: Sequence[ValidTuple]) -> str:
    """State index -> {"q": ..., "S": [...]} with 1-based state numbers."""
    table = {
        str(i): {"q": t.q + 1, "S": [[s + 1 for s in iter_bits(m)] for m in t.sets]}
        for i, t in enumerate(labels)
    }
    return json.dumps(table, indent=2)


def labels_from_json(text: str) -> list[ValidTuple]:
    table = json.loads(text)
    out = []
    for i in range(len(table)):
        entry = table[str(i)]
        sets = tuple(sum(1 << (s - 1) for s in comp) for comp in entry["S"])
        out.append(ValidTuple(entry["q"] - 1, sets))
    return out


def minimal_concat(dfas: Sequence[Dfa], cap: int = DEFAULT_CAP) -> Dfa:
    """Minimal DFA for L(A1)...L(Ak)."""
    return minimize(determinize_concat(ConcatInput(tuple(dfas)), cap).dfa)
