"""Verification cases and sweeps: generate, concatenate, minimize, compare."""

from __future__ import annotations

import csv
import io
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from . import bounds
from .automata import DEFAULT_CAP, CapExceeded
from .concat import minimal_concat
from .witnesses import WitnessError, get_family

MATCH = "match"
LOWER_OK = "lower-bound-ok"
MISMATCH = "mismatch"
SKIPPED_CAP = "skipped-cap"

CSV_COLUMNS = (
    "family",
    "n",
    "tau_formula",
    "tau_enum",
    "minimal_observed",
    "status",
    "wall_ms",
)


@dataclass
class VerificationCase:
    family: str
    n: tuple[int, ...]
    tau_formula: int
    provenance: str
    tau_enum: int | None = None
    minimal_observed: int | None = None
    status: str = ""
    wall_ms: float | None = None

    def row(self, timing: bool = False) -> dict:
        return {
            "family": self.family,
            "n": ",".join(map(str, self.n)),
            "tau_formula": self.tau_formula,
            "tau_enum": "" if self.tau_enum is None else self.tau_enum,
            "minimal_observed": ""
            if self.minimal_observed is None
            else self.minimal_observed,
            "status": self.status,
            "wall_ms": "" if not timing or self.wall_ms is None else round(self.wall_ms, 3),
        }

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        d["n"] = list(self.n)
        if not timing:
            d["wall_ms"] = None
        return d


def _enum_value(n: tuple[int, ...]) -> int | None:
    if len(n) < 2 or any(x < 2 for x in n):
        return None
    if n[0] << sum(n[1:]) > bounds.ENUM_GUARD:
        return None
    return bounds.enumerate_valid_states(n)


def run_case(
    family: str,
    n: Sequence[int] | None = None,
    cap: int = DEFAULT_CAP,
    enumerate_oracle: bool = True,
) -> VerificationCase:
    fam = get_family(family)
    if fam.fixed_n is not None:
        if n is not None and tuple(n) != fam.fixed_n:
            raise WitnessError(f"family {family} only supports n={fam.fixed_n}")
        n = fam.fixed_n
    if n is None:
        raise WitnessError(f"family {family} needs a size vector")
    n = tuple(int(x) for x in n)
    dfas = fam.generate(n)
    expected = fam.expected(n)
    case = VerificationCase(
        family, n, expected, "lower-bound" if fam.kind == "lower" else "formula"
    )
    if enumerate_oracle and fam.kind == "exact" and family != "unary-cyclic":
        case.tau_enum = _enum_value(n)
    start = time.perf_counter()
    try:
        case.minimal_observed = minimal_concat(dfas, cap).state_count
    except CapExceeded:
        case.status = SKIPPED_CAP
    else:
        if fam.kind == "lower":
            ok = case.minimal_observed >= expected
            case.status = LOWER_OK if ok else MISMATCH
        else:
            ok = case.minimal_observed == expected
            if case.tau_enum is not None and case.tau_enum != expected:
                ok = False
            case.status = MATCH if ok else MISMATCH
    case.wall_ms = (time.perf_counter() - start) * 1000
    return case


def _run_packed(args):
    return run_case(*args)


def run_cases(specs: Sequence[tuple], cap: int = DEFAULT_CAP, jobs: int = 1,
              enumerate_oracle: bool = True) -> list[VerificationCase]:
    """Run ``(family, n)`` specs; output order equals input order."""
    packed = [(fam, n, cap, enumerate_oracle) for fam, n in specs]
    if jobs > 1 and len(packed) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_packed, packed))
    return [_run_packed(p) for p in packed]


def parse_grid(spec: str) -> list[tuple[str, tuple[int, ...]]]:
    """Expand ``families=kp1,kletter;k=2,3;n=2,3`` into (family, n) pairs.

    Every n-vector of each length k with entries from the n list is tried;
    vectors that the family's generator rejects are dropped.
    """
    fields: dict[str, list[str]] = {}
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"bad grid clause {part!r}")
        fields[key.strip()] = [v.strip() for v in value.split(",") if v.strip()]
    unknown = set(fields) - {"families", "k", "n"}
    if unknown:
        raise ValueError(f"unknown grid keys: {sorted(unknown)}")
    families = fields.get("families", [])
    ks = [int(x) for x in fields.get("k", [])]
    ns = [int(x) for x in fields.get("n", [])]
    out = []
    for fam_tag in families:
        fam = get_family(fam_tag)
        if fam.fixed_n is not None:
            out.append((fam_tag, fam.fixed_n))
            continue
        for k in ks:
            for n in itertools.product(ns, repeat=k):
                try:
                    fam.generate(n)
                    fam.expected(n)
                except (WitnessError, ValueError):
                    continue
                out.append((fam_tag, n))
    return out


def exit_code(cases: Iterable[VerificationCase]) -> int:
    return 1 if any(c.status == MISMATCH for c in cases) else 0


def report_csv(cases: Sequence[VerificationCase], timing: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for c in cases:
        writer.writerow(c.row(timing))
    return buf.getvalue()


def report_json(cases: Sequence[VerificationCase], timing: bool = False) -> str:
    return json.dumps([c.to_dict(timing) for c in cases], indent=2) + "\n"
