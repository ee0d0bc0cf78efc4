"""Reading and writing automata: line-based text, JSON and Graphviz DOT.

All external formats number states from 1.
"""

from __future__ import annotations

import json
from typing import Iterator

from .automata import (
    EPSILON,
    AutomatonError,
    Dfa,
    Nfa,
    format_transform,
    parse_transform,
)

HEADER_KEYS = ("states", "alphabet", "start", "finals")


class FormatError(AutomatonError):
    pass


def _parse_states(text: str, n: int) -> list[int]:
    out = []
    for tok in text.replace(",", " ").split():
        if not tok.isdigit() or not 1 <= int(tok) <= n:
            raise FormatError(f"bad state {tok!r}")
        out.append(int(tok) - 1)
    return out


def _from_fields(states, alphabet, start, finals, transforms: dict) -> Dfa:
    if not isinstance(states, int) or states < 1:
        raise FormatError("states must be a positive integer")
    alphabet = list(alphabet)
    if len(set(alphabet)) != len(alphabet):
        raise FormatError("duplicate symbol in alphabet")
    unknown = set(transforms) - set(alphabet)
    if unknown:
        raise FormatError(f"transforms for unlisted symbols: {sorted(unknown)}")
    missing = [a for a in alphabet if a not in transforms]
    if missing:
        raise FormatError(f"missing transform for symbols: {missing}")
    maps = {a: parse_transform(transforms[a], states).mapping() for a in alphabet}
    if not 1 <= start <= states:
        raise FormatError(f"start state {start} out of range")
    return Dfa.from_transforms(states, alphabet, maps, start - 1, finals)


def parse_dfa_text(text: str) -> Dfa:
    header: dict[str, str] = {}
    transforms: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise FormatError(f"line {lineno}: expected 'key: value'")
        key, value = key.strip(), value.strip()
        if len(header) < len(HEADER_KEYS) and key in HEADER_KEYS:
            if key in header:
                raise FormatError(f"line {lineno}: duplicate {key!r}")
            header[key] = value
            continue
        if key in transforms:
            raise FormatError(f"line {lineno}: second transform line for {key!r}")
        transforms[key] = value
    for key in HEADER_KEYS:
        if key not in header:
            raise FormatError(f"missing {key!r} line")
    if not header["states"].isdigit():
        raise FormatError("states must be a positive integer")
    n = int(header["states"])
    starts = _parse_states(header["start"], n)
    if len(starts) != 1:
        raise FormatError("exactly one start state required")
    return _from_fields(
        n,
        header["alphabet"].split(),
        starts[0] + 1,
        _parse_states(header["finals"], n),
        transforms,
    )


def dfa_to_text(dfa: Dfa) -> str:
    lines = [
        f"states: {dfa.state_count}",
        f"alphabet: {' '.join(dfa.alphabet)}",
        f"start: {dfa.start + 1}",
        "finals: " + " ".join(str(f + 1) for f in sorted(dfa.finals)),
    ]
    for a in dfa.alphabet:
        lines.append(f"{a}: {format_transform(dfa.transform(a))}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def dfa_to_json(dfa: Dfa) -> str:
    doc = {
        "states": dfa.state_count,
        "alphabet": list(dfa.alphabet),
        "start": dfa.start + 1,
        "finals": [f + 1 for f in sorted(dfa.finals)],
        "transitions": {a: format_transform(dfa.transform(a)) for a in dfa.alphabet},
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_dfa_json(text: str) -> Dfa:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    try:
        states = doc["states"]
        finals = doc["finals"]
        if any(not isinstance(f, int) or not 1 <= f <= states for f in finals):
            raise FormatError("final state out of range")
        return _from_fields(
            states,
            doc["alphabet"],
            doc["start"],
            [f - 1 for f in finals],
            doc["transitions"],
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed automaton JSON: {exc}") from None


def parse_dfa(text: str) -> Dfa:
    """Dispatch on content: JSON objects start with '{'."""
    if text.lstrip().startswith("{"):
        return parse_dfa_json(text)
    return parse_dfa_text(text)


def nfa_to_json(nfa: Nfa) -> str:
    doc = {
        "states": nfa.state_count,
        "alphabet": list(nfa.alphabet),
        "initials": sorted(q + 1 for q in nfa.initials),
        "finals": sorted(q + 1 for q in nfa.finals),
        "transitions": sorted(
            [p + 1, "" if a is EPSILON else a, q + 1] for p, a, q in nfa.transitions
        ),
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_nfa_json(text: str) -> Nfa:
    doc = json.loads(text)
    return Nfa(
        doc["states"],
        doc["alphabet"],
        frozenset(
            (p - 1, EPSILON if a == "" else a, q - 1) for p, a, q in doc["transitions"]
        ),
        frozenset(q - 1 for q in doc["initials"]),
        frozenset(q - 1 for q in doc["finals"]),
    )


def _dot_lines(name, n, initials, finals, edges) -> Iterator[str]:
    yield f"digraph {json.dumps(name)} {{"
    yield "  rankdir=LR;"
    yield "  node [shape=circle];"
    for q in range(n):
        shape = "doublecircle" if q in finals else "circle"
        yield f'  q{q + 1} [label="{q + 1}", shape={shape}];'
    for i, q in enumerate(sorted(initials)):
        yield f"  init{i} [shape=point];"
        yield f"  init{i} -> q{q + 1};"
    grouped: dict[tuple[int, int], list[str]] = {}
    for p, label, q in edges:
        grouped.setdefault((p, q), []).append(label)
    for (p, q), labels in sorted(grouped.items()):
        yield f'  q{p + 1} -> q{q + 1} [label="{",".join(labels)}"];'
    yield "}"


def dfa_to_dot(dfa: Dfa, name: str = "A") -> str:
    edges = [
        (q, a, dfa.delta[q][i])
        for q in range(dfa.state_count)
        for i, a in enumerate(dfa.alphabet)
    ]
    return "\n".join(_dot_lines(name, dfa.state_count, [dfa.start], dfa.finals, edges)) + "\n"


def nfa_to_dot(nfa: Nfa, name: str = "N") -> str:
    order = {a: i for i, a in enumerate(nfa.alphabet)}
    edges = sorted(
        nfa.transitions,
        key=lambda t: (t[0], t[2], -1 if t[1] is EPSILON else order[t[1]]),
    )
    edges = [(p, "ε" if a is EPSILON else a, q) for p, a, q in edges]
    return "\n".join(_dot_lines(name, nfa.state_count, nfa.initials, nfa.finals, edges)) + "\n"
