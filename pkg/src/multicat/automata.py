"""Core automaton types and algorithms.

States are 0-based integers everywhere in this module; the text formats in
:mod:`multicat.textformat` are the only place where the 1-based numbering
used for display appears.  Sets of states are plain ``int`` bit masks whose
width is the owning automaton's ``state_count``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

#: Marker used in :attr:`Nfa.transitions` for an empty-string move.
EPSILON = None

DEFAULT_CAP = 2_000_000


class AutomatonError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """Determinization produced more subsets than the configured cap."""

    def __init__(self, cap: int):
        super().__init__(f"subset construction exceeded cap of {cap} states")
        self.cap = cap


# ---------------------------------------------------------------------------
# bit-mask helpers


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(states: Iterable[int]) -> int:
    m = 0
    for q in states:
        m |= 1 << q
    return m


def min_state(mask: int) -> int:
    if not mask:
        raise ValueError("empty set has no minimum")
    return (mask & -mask).bit_length() - 1


# ---------------------------------------------------------------------------
# automata


@dataclass(frozen=True)
class Dfa:
    """Complete deterministic automaton.

    ``delta[q][i]`` is the successor of state ``q`` on ``alphabet[i]``.
    """

    state_count: int
    alphabet: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]
    start: int
    finals: frozenset[int]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.state_count
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        object.__setattr__(self, "finals", frozenset(self.finals))
        if n < 1:
            raise AutomatonError("a DFA needs at least one state")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("duplicate symbol in alphabet")
        if not 0 <= self.start < n:
            raise AutomatonError(f"start state {self.start} out of range")
        if any(not 0 <= f < n for f in self.finals):
            raise AutomatonError("final state out of range")
        if len(self.delta) != n:
            raise AutomatonError("transition table must have one row per state")
        width = len(self.alphabet)
        for row in self.delta:
            if len(row) != width:
                raise AutomatonError("transition table is not total")
            if any(not 0 <= t < n for t in row):
                raise AutomatonError("transition target out of range")
        object.__setattr__(
            self, "_index", {a: i for i, a in enumerate(self.alphabet)}
        )

    def symbol_index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise AutomatonError(f"unknown symbol {symbol!r}") from None

    def step(self, state: int, symbol: str) -> int:
        return self.delta[state][self.symbol_index(symbol)]

    def run(self, word: Sequence[str], state: int | None = None) -> int:
        q = self.start if state is None else state
        for a in word:
            q = self.delta[q][self.symbol_index(a)]
        return q

    def transform(self, symbol: str) -> tuple[int, ...]:
        """The map ``q -> q.symbol`` as a tuple indexed by state."""
        i = self.symbol_index(symbol)
        return tuple(row[i] for row in self.delta)

    def to_nfa(self) -> Nfa:
        return Nfa(
            self.state_count,
            self.alphabet,
            frozenset(
                (q, a, self.delta[q][i])
                for q in range(self.state_count)
                for i, a in enumerate(self.alphabet)
            ),
            frozenset([self.start]),
            self.finals,
        )

    @classmethod
    def from_transforms(cls, state_count, alphabet, transforms, start=0, finals=()):
        """Build from one map per symbol, ``transforms[a][q] = q.a``."""
        alphabet = tuple(alphabet)
        delta = [
            tuple(transforms[a][q] for a in alphabet) for q in range(state_count)
        ]
        return cls(state_count, alphabet, tuple(delta), start, frozenset(finals))


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton; ``None`` in a transition is an epsilon move."""

    state_count: int
    alphabet: tuple[str, ...]
    transitions: frozenset[tuple[int, str | None, int]]
    initials: frozenset[int]
    finals: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "initials", frozenset(self.initials))
        object.__setattr__(self, "finals", frozenset(self.finals))
        n = self.state_count
        if n < 0:
            raise AutomatonError("negative state count")
        known = set(self.alphabet)
        for p, a, q in self.transitions:
            if not (0 <= p < n and 0 <= q < n):
                raise AutomatonError(f"transition {(p, a, q)} out of range")
            if a is not EPSILON and a not in known:
                raise AutomatonError(f"unknown symbol {a!r}")
        if any(not 0 <= q < n for q in self.initials | self.finals):
            raise AutomatonError("initial/final state out of range")

    @property
    def has_epsilon(self) -> bool:
        return any(a is EPSILON for _, a, _ in self.transitions)

    def successor_masks(self) -> tuple[list[int], dict[str, list[int]]]:
        """Epsilon successors and per-symbol successors as bit masks."""
        n = self.state_count
        eps = [0] * n
        succ = {a: [0] * n for a in self.alphabet}
        for p, a, q in self.transitions:
            if a is EPSILON:
                eps[p] |= 1 << q
            else:
                succ[a][p] |= 1 << q
        return eps, succ

    def accepts(self, word: Sequence[str]) -> bool:
        eps, succ = self.successor_masks()
        closure = _closure_table(eps)
        current = _close(mask_of(self.initials), closure)
        for a in word:
            if a not in succ:
                raise AutomatonError(f"unknown symbol {a!r}")
            nxt = 0
            for q in iter_bits(current):
                nxt |= succ[a][q]
            current = _close(nxt, closure)
        return bool(current & mask_of(self.finals))


def _closure_table(eps: list[int]) -> list[int]:
    """E({q}) for each q, by iterating to a fixed point."""
    n = len(eps)
    closure = [(1 << q) | eps[q] for q in range(n)]
    changed = True
    while changed:
        changed = False
        for q in range(n):
            c = closure[q]
            grown = c
            for r in iter_bits(c):
                grown |= closure[r]
            if grown != c:
                closure[q] = grown
                changed = True
    return closure


def _close(mask: int, closure: list[int]) -> int:
    out = 0
    for q in iter_bits(mask):
        out |= closure[q]
    return out


# ---------------------------------------------------------------------------
# transformation notation

_ATOM = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class TransformSpec:
    """Atoms describing one symbol's action; see :func:`parse_transform`.

    ``atoms`` holds ``("cycle", states)``, ``("chain", states)``,
    ``("collapse", (sources, target))`` or ``("identity", ())``, 0-based.
    """

    n: int
    atoms: tuple

    def mapping(self) -> tuple[int, ...]:
        image = list(range(self.n))
        assigned: dict[int, int] = {}

        def put(src, dst):
            if src in assigned and assigned[src] != dst:
                raise AutomatonError(
                    f"state {src + 1} is mapped to both {assigned[src] + 1} and {dst + 1}"
                )
            assigned[src] = dst
            image[src] = dst

        for kind, payload in self.atoms:
            if kind == "cycle":
                for i, q in enumerate(payload):
                    put(q, payload[(i + 1) % len(payload)])
            elif kind == "chain":
                for p, q in zip(payload, payload[1:]):
                    put(p, q)
            elif kind == "collapse":
                sources, target = payload
                for p in sources:
                    put(p, target)
        return tuple(image)

    @property
    def is_permutation_spec(self) -> bool:
        return all(kind in ("cycle", "identity") for kind, _ in self.atoms)


def _state(token: str, n: int) -> int:
    token = token.strip()
    if not token.isdigit():
        raise AutomatonError(f"bad state {token!r}")
    q = int(token)
    if not 1 <= q <= n:
        raise AutomatonError(f"state {q} outside 1..{n}")
    return q - 1


def parse_transform(text: str, n: int) -> TransformSpec:
    """Parse ``(1,2,3)``, ``(1->2->3)``, ``({1,2}->1)`` and ``(1)`` atoms.

    States in the text are 1-based.  The result's :meth:`TransformSpec.mapping`
    is checked here, so conflicting images raise immediately.
    """
    stripped = text.strip()
    if not stripped:
        raise AutomatonError("empty transformation")
    atoms = []
    pos = 0
    for m in _ATOM.finditer(stripped):
        if stripped[pos:m.start()].strip():
            raise AutomatonError(f"syntax error near {stripped[pos:m.start()]!r}")
        pos = m.end()
        body = m.group(1).strip()
        if "->" in body:
            parts = [p.strip() for p in body.split("->")]
            if parts[0].startswith("{"):
                if len(parts) != 2 or not parts[0].endswith("}"):
                    raise AutomatonError(f"bad collapse atom ({body})")
                inner = parts[0][1:-1].strip()
                sources = tuple(_state(t, n) for t in inner.split(",")) if inner else ()
                atoms.append(("collapse", (sources, _state(parts[1], n))))
            else:
                chain = tuple(_state(p, n) for p in parts)
                if len(set(chain)) != len(chain):
                    raise AutomatonError(f"repeated state in chain ({body})")
                atoms.append(("chain", chain))
        else:
            states = tuple(_state(t, n) for t in body.split(","))
            if len(set(states)) != len(states):
                raise AutomatonError(f"repeated state in cycle ({body})")
            atoms.append(("identity", ()) if len(states) == 1 else ("cycle", states))
    if stripped[pos:].strip() or not atoms:
        raise AutomatonError(f"syntax error in {text!r}")
    spec = TransformSpec(n, tuple(atoms))
    spec.mapping()
    return spec


def cycle(states: Sequence[int], n: int) -> tuple[int, ...]:
    """Map for the circular shift of ``states`` (0-based)."""
    return TransformSpec(n, (("cycle", tuple(states)),)).mapping()


def chain(states: Sequence[int], n: int) -> tuple[int, ...]:
    return TransformSpec(n, (("chain", tuple(states)),)).mapping()


def collapse(sources: Iterable[int], target: int, n: int) -> tuple[int, ...]:
    return TransformSpec(n, (("collapse", (tuple(sources), target)),)).mapping()


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def format_transform(mapping: Sequence[int]) -> str:
    """Inverse of :func:`parse_transform` (1-based output).

    Permutations are written as cycles; anything else groups the moved states
    by their image.
    """
    n = len(mapping)
    moved = [q for q in range(n) if mapping[q] != q]
    if not moved:
        return "(1)"
    if sorted(mapping) == list(range(n)):
        seen = set()
        atoms = []
        for q in range(n):
            if q in seen or mapping[q] == q:
                continue
            orbit = [q]
            seen.add(q)
            r = mapping[q]
            while r != q:
                orbit.append(r)
                seen.add(r)
                r = mapping[r]
            atoms.append("(" + ",".join(str(s + 1) for s in orbit) + ")")
        return " ".join(atoms)
    groups: dict[int, list[int]] = {}
    for q in moved:
        groups.setdefault(mapping[q], []).append(q)
    atoms = []
    for target in sorted(groups):
        srcs = groups[target]
        if len(srcs) == 1:
            atoms.append(f"({srcs[0] + 1}->{target + 1})")
        else:
            atoms.append("({" + ",".join(str(s + 1) for s in srcs) + f"}}->{target + 1})")
    return " ".join(atoms)


# ---------------------------------------------------------------------------
# operations


def dfa_accepts(dfa: Dfa, word: Sequence[str]) -> bool:
    return dfa.run(word) in dfa.finals


def reverse(nfa: Nfa) -> Nfa:
    return Nfa(
        nfa.state_count,
        nfa.alphabet,
        frozenset((q, a, p) for p, a, q in nfa.transitions),
        nfa.finals,
        nfa.initials,
    )


def remove_epsilon(nfa: Nfa) -> Nfa:
    """Equivalent epsilon-free NFA over the same states."""
    if not nfa.has_epsilon:
        return nfa
    eps, succ = nfa.successor_masks()
    closure = _closure_table(eps)
    transitions = set()
    for p in range(nfa.state_count):
        for a in nfa.alphabet:
            target = 0
            for r in iter_bits(closure[p]):
                target |= succ[a][r]
            for q in iter_bits(_close(target, closure)):
                transitions.add((p, a, q))
    finals = frozenset(
        p for p in range(nfa.state_count) if closure[p] & mask_of(nfa.finals)
    )
    return Nfa(
        nfa.state_count,
        nfa.alphabet,
        frozenset(transitions),
        frozenset(iter_bits(_close(mask_of(nfa.initials), closure))),
        finals,
    )


def subset_construct_labeled(nfa: Nfa, cap: int = DEFAULT_CAP) -> tuple[Dfa, list[int]]:
    """Breadth-first subset construction.

    Returns the DFA on the reachable subsets together with the subset (as a
    bit mask over NFA states) behind each DFA state.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    eps, succ = nfa.successor_masks()
    closure = _closure_table(eps)
    n = nfa.state_count
    # 8-bit chunk tables: image of a set = OR of one lookup per byte.
    chunks = (n + 7) // 8
    tables = []
    for a in nfa.alphabet:
        per_state = [_close(succ[a][q], closure) for q in range(n)]
        sym_tables = []
        for c in range(chunks):
            base = 8 * c
            width = min(8, n - base)
            table = [0] * (1 << width)
            for byte in range(1, 1 << width):
                low = byte & -byte
                table[byte] = table[byte ^ low] | per_state[base + low.bit_length() - 1]
            sym_tables.append(table)
        tables.append(sym_tables)

    start = _close(mask_of(nfa.initials), closure)
    index = {start: 0}
    labels = [start]
    rows = []
    queue = deque([start])
    while queue:
        s = queue.popleft()
        row = []
        for sym_tables in tables:
            t = 0
            rest = s
            c = 0
            while rest:
                byte = rest & 0xFF
                if byte:
                    t |= sym_tables[c][byte]
                rest >>= 8
                c += 1
            j = index.get(t)
            if j is None:
                if len(labels) >= cap:
                    raise CapExceeded(cap)
                j = len(labels)
                index[t] = j
                labels.append(t)
                queue.append(t)
            row.append(j)
        rows.append(tuple(row))
    final_mask = mask_of(nfa.finals)
    finals = frozenset(i for i, s in enumerate(labels) if s & final_mask)
    return Dfa(len(labels), nfa.alphabet, tuple(rows), 0, finals), labels


def subset_construct(nfa: Nfa, cap: int = DEFAULT_CAP) -> Dfa:
    return subset_construct_labeled(nfa, cap)[0]


def co_reachable_singletons(nfa: Nfa, cap: int = DEFAULT_CAP) -> set[int]:
    """States ``q`` such that ``{q}`` is reachable in the reversed NFA."""
    _, labels = subset_construct_labeled(reverse(nfa), cap)
    return {min_state(s) for s in labels if s and s & (s - 1) == 0}


def reachable_states(dfa: Dfa) -> list[int]:
    """Reachable states in BFS order, symbols explored in alphabet order."""
    order = [dfa.start]
    seen = {dfa.start}
    i = 0
    while i < len(order):
        for t in dfa.delta[order[i]]:
            if t not in seen:
                seen.add(t)
                order.append(t)
        i += 1
    return order


def _renumber(dfa: Dfa, classes: list[int]) -> Dfa:
    """Quotient by ``classes`` (state -> block id) with canonical BFS numbering."""
    start_block = classes[dfa.start]
    rep = {}
    for q in range(dfa.state_count):
        rep.setdefault(classes[q], q)
    order = [start_block]
    number = {start_block: 0}
    i = 0
    while i < len(order):
        for t in dfa.delta[rep[order[i]]]:
            b = classes[t]
            if b not in number:
                number[b] = len(order)
                order.append(b)
        i += 1
    delta = tuple(
        tuple(number[classes[t]] for t in dfa.delta[rep[b]]) for b in order
    )
    finals = frozenset(number[b] for b in order if rep[b] in dfa.finals)
    return Dfa(len(order), dfa.alphabet, delta, 0, finals)


def canonical(dfa: Dfa) -> Dfa:
    """Reachable part renumbered in BFS order."""
    return _renumber(dfa, list(range(dfa.state_count)))


def minimize(dfa: Dfa) -> Dfa:
    """Minimal complete DFA via Moore partition refinement."""
    reach = reachable_states(dfa)
    if len(reach) != dfa.state_count:
        dfa = _renumber(dfa, list(range(dfa.state_count)))
    n = dfa.state_count
    block = [1 if q in dfa.finals else 0 for q in range(n)]
    count = len(set(block))
    while True:
        signatures: dict[tuple, int] = {}
        new_block = [0] * n
        for q in range(n):
            key = (block[q],) + tuple(block[t] for t in dfa.delta[q])
            new_block[q] = signatures.setdefault(key, len(signatures))
        block = new_block
        if len(signatures) == count:
            break
        count = len(signatures)
    return _renumber(dfa, block)


def isomorphic(a: Dfa, b: Dfa) -> bool:
    """Whether the reachable parts of ``a`` and ``b`` are isomorphic."""
    if a.alphabet != b.alphabet:
        raise AutomatonError("alphabets differ")
    return canonical(a) == canonical(b)


def trim(nfa: Nfa) -> tuple[Nfa, list[int]]:
    """Drop states that are unreachable or cannot reach a final state.

    Returns the trimmed NFA and the list mapping new state numbers to old.
    """
    fwd: dict[int, set[int]] = {q: set() for q in range(nfa.state_count)}
    bwd: dict[int, set[int]] = {q: set() for q in range(nfa.state_count)}
    for p, _, q in nfa.transitions:
        fwd[p].add(q)
        bwd[q].add(p)

    def closure(seeds, edges):
        seen = set(seeds)
        stack = list(seeds)
        while stack:
            for r in edges[stack.pop()]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    keep = sorted(closure(nfa.initials, fwd) & closure(nfa.finals, bwd))
    new = {q: i for i, q in enumerate(keep)}
    trimmed = Nfa(
        len(keep),
        nfa.alphabet,
        frozenset(
            (new[p], a, new[q]) for p, a, q in nfa.transitions if p in new and q in new
        ),
        frozenset(new[q] for q in nfa.initials if q in new),
        frozenset(new[q] for q in nfa.finals if q in new),
    )
    return trimmed, keep
