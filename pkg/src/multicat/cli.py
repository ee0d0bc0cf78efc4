"""Command-line interface: ``python -m multicat <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, unary, verify
from .automata import DEFAULT_CAP, AutomatonError, CapExceeded, minimize
from .concat import ConcatInput, build_concat_eps_nfa, determinize_concat, labels_to_json
from .textformat import (
    dfa_to_dot,
    dfa_to_json,
    dfa_to_text,
    nfa_to_dot,
    nfa_to_json,
    parse_dfa,
)
from .witnesses import WitnessError, get_family

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _size_pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        lam, sep, mu = item.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected lambda:mu, got {item!r}")
        out.append((int(lam), int(mu)))
    return out


def _emit(args, text: str, default_name: str | None = None):
    """Write to --out (file, or directory when default_name is given) or stdout."""
    out = getattr(args, "out", None)
    if not out:
        sys.stdout.write(text)
        return
    path = Path(out)
    if default_name is not None and (path.is_dir() or out.endswith("/")):
        path.mkdir(parents=True, exist_ok=True)
        path = path / default_name
    path.write_text(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load(path: str):
    try:
        return parse_dfa(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


# ---------------------------------------------------------------------------
# commands


def cmd_bound(args) -> int:
    n = args.n
    if all(x >= 2 for x in n) and len(n) >= 2:
        result = bounds.count_valid_states(n).to_dict()
        if len(n) >= 3:
            result["sandwich"] = list(bounds.sandwich_bounds(n))
    else:
        result = {"bound": bounds.expected_size(n)}
    if args.closed_k3:
        if len(n) != 3:
            raise UsageError("--closed-k3 needs exactly three sizes")
        result["closed_k3"] = bounds.count_valid_k3_closed(*n)
    if args.enumerate:
        result["enumerated"] = bounds.enumerate_valid_states(n)
    if args.lower == "binary":
        result["binary_lower_bound"] = bounds.binary_lower_bound(n)
    elif args.lower == "ternary":
        result["ternary_lower_bound"] = bounds.ternary_lower_bound(n)
    _emit(args, _dumps(result))
    return EXIT_OK


def cmd_witness(args) -> int:
    fam = get_family(args.family)
    n = fam.fixed_n if fam.fixed_n is not None else args.n
    if n is None:
        raise UsageError("--n is required for this family")
    dfas = fam.generate(tuple(n))
    expected = fam.expected(tuple(n))
    manifest = {
        "family": fam.tag,
        "n": list(n),
        "expected": expected,
        "kind": fam.kind,
        "files": [f"A{i}.txt" for i in range(1, len(dfas) + 1)],
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, d in zip(manifest["files"], dfas):
            (out / name).write_text(dfa_to_text(d))
        (out / "manifest.json").write_text(_dumps(manifest))
    else:
        for name, d in zip(manifest["files"], dfas):
            sys.stdout.write(f"# {name}\n{dfa_to_text(d)}\n")
        sys.stdout.write(_dumps(manifest))
    return EXIT_OK


def cmd_concat(args) -> int:
    inp = ConcatInput(tuple(_load(p) for p in args.files))
    if args.epsilon:
        from .automata import subset_construct

        dfa = subset_construct(build_concat_eps_nfa(inp), args.cap)
        labels = None
        fallback = None
    else:
        res = determinize_concat(inp, args.cap)
        dfa, labels, fallback = res.dfa, res.labels, res.epsilon_fallback
    minimal = minimize(dfa)
    summary = {
        "sizes": list(inp.sizes),
        "reachable": dfa.state_count,
        "minimal": minimal.state_count,
        "epsilon_fallback": fallback,
        "expected_bound": bounds.expected_size(inp.sizes),
    }
    if args.labels and labels is not None:
        Path(args.labels).write_text(labels_to_json(labels) + "\n")
    if args.dfa_out:
        Path(args.dfa_out).write_text(dfa_to_text(minimal if args.minimize else dfa))
    _emit(args, _dumps(summary))
    return EXIT_OK


def cmd_minimize(args) -> int:
    _emit(args, dfa_to_text(minimize(_load(args.file))))
    return EXIT_OK


def _write_report(args, cases) -> int:
    render = {"csv": verify.report_csv, "json": verify.report_json}
    out = args.out
    if out and args.format is None and (Path(out).is_dir() or out.endswith("/")):
        # a directory without --format gets both reports
        Path(out).mkdir(parents=True, exist_ok=True)
        for fmt, fn in render.items():
            (Path(out) / f"report.{fmt}").write_text(fn(cases, args.timing))
    else:
        fmt = args.format or "csv"
        _emit(args, render[fmt](cases, args.timing), f"report.{fmt}")
    return verify.exit_code(cases)


def cmd_verify(args) -> int:
    case = verify.run_case(args.family, args.n, args.cap, not args.no_enumerate)
    return _write_report(args, [case])


def cmd_sweep(args) -> int:
    try:
        specs = verify.parse_grid(args.grid)
    except ValueError as exc:
        raise UsageError(str(exc))
    cases = verify.run_cases(specs, args.cap, args.jobs, not args.no_enumerate)
    return _write_report(args, cases)


def cmd_unary(args) -> int:
    what = args.what
    if what == "frobenius":
        if not args.values:
            raise UsageError("frobenius needs at least one integer")
        g = unary.frobenius(args.values)
        result = {"g": g, "f": g + sum(args.values)}
    elif what == "cyclic":
        if args.n is None:
            raise UsageError("cyclic needs --n")
        result = unary.cyclic_concat_size(args.n).to_dict()
        if args.engine:
            langs = [unary.UnaryLang.cyclic_witness(x) for x in args.n]
            result["engine"] = unary.unary_concat_all(langs).size.to_dict()
    elif what == "tailed":
        if args.sizes is None:
            raise UsageError("tailed needs --sizes")
        result = unary.tailed_cyclic_size(args.sizes).to_dict()
        if args.engine:
            langs = [unary.UnaryLang.tailed_witness(lam, mu) for lam, mu in args.sizes]
            result["engine"] = unary.unary_concat_all(langs).size.to_dict()
    elif what == "tails":
        if args.sizes is None:
            raise UsageError("tails needs --sizes")
        report = unary.tails_final_bound_report(args.sizes)
        if args.finals is not None:
            groups = [g for g in args.finals.split(";")]
            if len(groups) != len(args.sizes):
                raise UsageError("--finals needs one group per size")
            langs = [
                unary.UnaryLang.from_automaton(
                    lam, mu, [int(x) for x in g.split(",") if x.strip()]
                )
                for (lam, mu), g in zip(args.sizes, groups)
            ]
            result = unary.unary_concat_all(langs).size.to_dict()
            result["bound"] = report.size.to_dict()
        else:
            result = report.size.to_dict()
        result["maximizers"] = [list(s) for s in report.maximizers]
    elif what == "split":
        if args.values is None or len(args.values) != 2:
            raise UsageError("split needs two integers m n")
        m, n = args.values
        rep = unary.search_best_unary_pair(m, n)
        result = {
            "best_split": [list(p) for p in rep.best_split],
            "best_value": rep.best_value,
            "achieved": rep.achieved,
            "runner_up_bound": rep.runner_up,
            "certified": rep.certified,
            "examined": rep.examined,
        }
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(what)
    _emit(args, _dumps(result))
    return EXIT_OK


def cmd_export(args) -> int:
    fmt = args.to
    for path in args.files:
        dfa = _load(path)
        stem = Path(path).stem
        if fmt == "dot":
            text, ext = dfa_to_dot(dfa, stem), "dot"
        elif fmt == "json":
            text, ext = dfa_to_json(dfa), "json"
        else:
            text, ext = dfa_to_text(dfa), "txt"
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{stem}.{ext}").write_text(text)
        else:
            sys.stdout.write(text)
    if args.nfa:
        inp = ConcatInput(tuple(_load(p) for p in args.files))
        nfa = determinize_concat(inp, args.cap).nfa
        text = nfa_to_dot(nfa) if fmt == "dot" else nfa_to_json(nfa)
        if args.out:
            (Path(args.out) / f"concat.{'dot' if fmt == 'dot' else 'json'}").write_text(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=argparse.SUPPRESS,
                        help=f"subset-construction cap (default {DEFAULT_CAP})")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                        help="worker processes for sweeps")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file or directory")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS,
                        help="report format")

    parser = argparse.ArgumentParser(
        prog="multicat",
        description="Multiple concatenation of finite automata.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="valid-state counts and bounds")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--closed-k3", action="store_true")
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--lower", choices=("binary", "ternary"))
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("witness", parents=[common], help="write witness automata")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=_int_list)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("concat", parents=[common], help="concatenate automaton files")
    p.add_argument("files", nargs="+")
    p.add_argument("--epsilon", action="store_true", help="use the epsilon construction")
    p.add_argument("--labels", help="write the tuple label table as JSON")
    p.add_argument("--dfa-out", help="write the resulting DFA")
    p.add_argument("--minimize", action="store_true", help="with --dfa-out, write the minimal DFA")
    p.set_defaults(func=cmd_concat)

    p = sub.add_parser("minimize", parents=[common], help="minimize one DFA file")
    p.add_argument("file")
    p.set_defaults(func=cmd_minimize)

    for name, helptext in (("verify", "verify one family case"), ("sweep", "verify a grid")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        if name == "verify":
            p.add_argument("--family", required=True)
            p.add_argument("--n", type=_int_list)
            p.set_defaults(func=cmd_verify)
        else:
            p.add_argument("--grid", required=True,
                           help="e.g. 'families=kp1,kletter;k=2,3;n=2,3'")
            p.set_defaults(func=cmd_sweep)
        p.add_argument("--no-enumerate", action="store_true",
                       help="skip the brute-force valid-state count")
        p.add_argument("--timing", action="store_true", help="fill the wall_ms column")

    p = sub.add_parser("unary", parents=[common], help="unary Frobenius-based sizes")
    p.add_argument("what", choices=("frobenius", "cyclic", "tailed", "tails", "split"))
    p.add_argument("values", nargs="*", type=int)
    p.add_argument("--n", type=_int_list)
    p.add_argument("--sizes", type=_size_pairs)
    p.add_argument("--finals", help="semicolon-separated final-state groups")
    p.add_argument("--engine", action="store_true", help="also run the exact engine")
    p.set_defaults(func=cmd_unary)

    p = sub.add_parser("export", parents=[common], help="convert automaton files")
    p.add_argument("files", nargs="+")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--dot", dest="to", action="store_const", const="dot")
    group.add_argument("--json", dest="to", action="store_const", const="json")
    group.add_argument("--text", dest="to", action="store_const", const="text")
    p.add_argument("--nfa", action="store_true", help="also export the concatenation NFA")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("cap", DEFAULT_CAP), ("jobs", 1), ("out", None), ("format", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, WitnessError, bounds.BoundError, unary.UnaryError,
            AutomatonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
