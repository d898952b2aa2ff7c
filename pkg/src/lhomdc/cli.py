"""Command-line interface.

Exit codes: 0 when every check passes, 1 when a property is violated or a
requested witness is found, 2 on input or usage errors. Reports are JSON with
a ``"schema": 1`` field unless ``--format`` asks for text or dot.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import dcomplex as dcx
from .dcomplex import DocumentError, FieldSpec, GenConfig
from .lhomology import KINDS, LKind, report_rows
from .reports import SCHEMA

EXIT_OK, EXIT_FOUND, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: tuple = ()
    seed: int | None = None
    field: FieldSpec | None = None
    rows: int | None = None
    cols: int | None = None
    dim_max: int | None = None
    fmt: str = "json"
    output: str | None = None

    @classmethod
    def from_args(cls, a: argparse.Namespace) -> "RunConfig":
        inputs = tuple(x for x in (getattr(a, "file", None),) if x)
        return cls(a.command, inputs, getattr(a, "seed", None), getattr(a, "field", None),
                   getattr(a, "rows", None), getattr(a, "cols", None), getattr(a, "dim_max", None),
                   getattr(a, "fmt", "json"), getattr(a, "output", None))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _position(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i,j but got {text!r}") from None
    return i, j


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _kind(text: str) -> LKind:
    try:
        return LKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lhomdc", description="L-homologies of double complexes over exact fields.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_format(sp, choices=("json", "text")):
        sp.add_argument("--format", dest="fmt", choices=choices, default="json")
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")
        return sp

    sp = with_format(sub.add_parser("validate", help="check complex and commutativity laws"))
    sp.add_argument("file")

    sp = with_format(sub.add_parser("homology", help="dimensions of the L-homologies"))
    sp.add_argument("file")
    sp.add_argument("--at", type=_position, help="restrict to one object i,j")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--kind", type=_kind)
    g.add_argument("--all", action="store_true")

    sp = with_format(sub.add_parser("poset", help="hook or prec order at one object"), ("json", "text", "dot"))
    sp.add_argument("file")
    sp.add_argument("--at", type=_position, required=True)
    sp.add_argument("--relation", choices=("hook", "prec"), default="hook")
    sp.add_argument("--dot", metavar="F", help="also write the Hasse diagram to F")

    sp = with_format(sub.add_parser("exact", help="check the exact sequence suite"))
    sp.add_argument("file")
    sp.add_argument("--suite", choices=("paper",), default="paper")

    sp = with_format(sub.add_parser("salamander", help="isomorphisms A_star -> star-B and two sequence segments"))
    sp.add_argument("file")

    sp = with_format(sub.add_parser("fibration", help="verify the forgetful functor"), ("json", "text", "dot"))
    sp.add_argument("file")
    sp.add_argument("--dot", metavar="F", help="also write the Hlg graph to F")

    sp = sub.add_parser("gen", help="generate a double complex")
    sp.add_argument("--mode", choices=("tensor", "exact_rows", "direct_sum", "zero"), default="tensor")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--field", type=_field, default=FieldSpec(2))
    sp.add_argument("--rows", type=int, default=3)
    sp.add_argument("--cols", type=int, default=3)
    sp.add_argument("--dim-max", type=int, default=4)
    sp.add_argument("-o", "--output")

    sp = with_format(sub.add_parser("search-iv", help="search for exact sequences across three objects"))
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--file")
    src.add_argument("--random", type=int, metavar="T", help="number of generated complexes")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=100_000)
    sp.add_argument("--field", type=_field, default=FieldSpec(2))
    sp.add_argument("--rows", type=int, default=3)
    sp.add_argument("--cols", type=int, default=3)
    sp.add_argument("--dim-max", type=int, default=3)
    sp.add_argument("--include-degenerate", action="store_true",
                    help="count witnesses whose middle term is zero")
    return p


def _load(path: str):
    try:
        return dcx.load(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except dcx.ValidationFailure as exc:
        raise _Invalid(exc.report) from None
    except (DocumentError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


class _Invalid(Exception):
    def __init__(self, report):
        self.report = report


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def _table(rows: list[dict], cols: list[str]) -> str:
    widths = [max(len(c), *(len(str(r[c])) for r in rows)) if rows else len(c) for c in cols]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    for r in rows:
        lines.append("  ".join(str(r[c]).ljust(w) for c, w in zip(cols, widths)).rstrip())
    return "\n".join(lines) + "\n"


def cmd_validate(a) -> tuple[int, str]:
    dc = _load_unchecked(a.file)
    rep = dcx.validate(dc)
    if a.fmt == "text":
        text = "valid\n" if rep.ok else "".join(f"{v.law} {v.at[0]},{v.at[1]}: {v.describe()}\n" for v in rep.violations)
    else:
        text = _json({"command": "validate", "file": a.file, **rep.to_json()})
    return (EXIT_OK if rep.ok else EXIT_FOUND), text


def _load_unchecked(path: str):
    try:
        return dcx.load(path, check=False)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except (DocumentError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _check_at(dc, at):
    if at is not None and not dc.inside(*at):
        raise UsageError(f"position {at[0]},{at[1]} is outside the {dc.rows}x{dc.cols} grid")


def cmd_homology(a) -> tuple[int, str]:
    dc = _load(a.file)
    _check_at(dc, a.at)
    kinds = (a.kind,) if a.kind else KINDS
    rows = report_rows(dc, a.at, kinds)
    if a.fmt == "text":
        for r in rows:
            r["pos"] = f"{r['position'][0]},{r['position'][1]}"
        return EXIT_OK, _table(rows, ["pos", "kind", "dim_U", "dim_V", "dim"])
    return EXIT_OK, _json({"command": "homology", "file": a.file, "field": str(dc.field), "rows": rows})


def cmd_poset(a) -> tuple[int, str]:
    from .dcomplex import context
    from .structures import poset_report, semilattice_report

    dc = _load(a.file)
    _check_at(dc, a.at)
    ctx = context(dc, a.at)
    rep = semilattice_report(ctx) if a.relation == "hook" else poset_report(ctx)
    if a.dot:
        _emit(rep.to_dot(), a.dot)
    code = EXIT_OK if rep.ok else EXIT_FOUND
    if a.fmt == "dot":
        return code, rep.to_dot()
    if a.fmt == "text":
        lines = [f"relation {rep.relation} at {a.at[0]},{a.at[1]}",
                 f"top {rep.top.ascii if rep.top else '-'}  bottom {rep.bottom.ascii if rep.bottom else '-'}"]
        lines += [f"{c.name}: {'pass' if c.ok else 'FAIL'} ({c.checked} checked)" for c in rep.checks]
        return code, "\n".join(lines) + "\n"
    return code, _json({"command": "poset", "file": a.file, **rep.to_json()})


def _suite_output(name, a, rep) -> tuple[int, str]:
    code = EXIT_OK if rep.ok else EXIT_FOUND
    if a.fmt == "text":
        lines = [f"{e['position'][0]},{e['position'][1]} {e['sequence']} {'exact' if e['exact'] else 'NOT EXACT'}"
                 for e in rep.entries]
        lines += [f"{e['position'][0]},{e['position'][1]} iso {'yes' if e['isomorphism'] else 'NO'}"
                  for e in rep.iso_entries]
        lines.append(f"{len(rep.entries)} sequences, {len(rep.iso_entries)} isomorphisms, "
                     f"{len(rep.failures())} failures")
        return code, "\n".join(lines) + "\n"
    return code, _json({"command": name, "file": a.file, **rep.to_json()})


def cmd_exact(a) -> tuple[int, str]:
    from .structures import sequence_suite

    return _suite_output("exact", a, sequence_suite(_load(a.file)))


def cmd_salamander(a) -> tuple[int, str]:
    from .structures import salamander

    return _suite_output("salamander", a, salamander(_load(a.file)))


def cmd_fibration(a) -> tuple[int, str]:
    from .fibcat import build, hlg_dot, verify_adjunctions, verify_faithful_amnestic, verify_fibration
    from .lhomology import LKind as K

    dc = _load(a.file)
    g = build(dc)
    reports = [verify_faithful_amnestic(g), verify_fibration(g), verify_adjunctions(g)]
    star = verify_fibration(g, K.star_A).checks[0]
    ok = all(r.ok for r in reports)
    if a.dot:
        _emit(hlg_dot(g), a.dot)
    code = EXIT_OK if ok else EXIT_FOUND
    if a.fmt == "dot":
        return code, hlg_dot(g)
    if a.fmt == "text":
        lines = [f"{c.name}: {'pass' if c.ok else 'FAIL'} ({c.checked} checked)" for r in reports for c in r.checks]
        lines.append(f"lifts from star-X (informational): {len(star.failures)} of {star.checked} fail")
        return code, "\n".join(lines) + "\n"
    return code, _json({"command": "fibration", "file": a.file, "passed": ok,
                        "reports": [r.to_json() for r in reports],
                        "star_source_lifts": {"checked": star.checked, "failures": len(star.failures)}})


def cmd_gen(a) -> tuple[int, str]:
    if a.rows < 1 or a.cols < 1 or a.dim_max < 0:
        raise UsageError("--rows and --cols must be positive and --dim-max non-negative")
    dc = dcx.generate(GenConfig(a.mode, a.rows, a.cols, a.dim_max, a.field, a.seed))
    text = dcx.dumps(dc)
    if a.output:
        _emit(text, a.output)
        return EXIT_OK, ""
    return EXIT_OK, text


def cmd_search_iv(a) -> tuple[int, str]:
    from .structures import search_type_iv

    if a.budget <= 0:
        raise UsageError("--budget must be positive")
    if a.file:
        sources = [(a.file, _load(a.file))]
    else:
        if a.random < 1:
            raise UsageError("--random needs a positive count")
        sources = []
        for t in range(a.random):
            cfg = GenConfig(("tensor", "exact_rows", "direct_sum")[t % 3], a.rows, a.cols, a.dim_max,
                            a.field, a.seed * 100_003 + t)
            sources.append((f"{cfg.mode}:{cfg.seed}", dcx.generate(cfg)))
    results, total, found = [], 0, 0
    for name, dc in sources:
        wit, examined = search_type_iv(dc, a.budget)
        keep = [w for w in wit if a.include_degenerate or not w["degenerate"]]
        total += examined
        found += len(keep)
        results.append({"source": name, "examined": examined, "witnesses": len(keep),
                        "degenerate": sum(w["degenerate"] for w in wit), "examples": keep[:20]})
    code = EXIT_FOUND if found else EXIT_OK
    if a.fmt == "text":
        lines = [f"{r['source']}: {r['witnesses']} witnesses of {r['examined']} examined" for r in results]
        lines.append(f"total {found} witnesses of {total} examined")
        return code, "\n".join(lines) + "\n"
    return code, _json({"command": "search-iv", "budget": a.budget, "examined": total,
                        "witnesses": found, "sources": results})


COMMANDS = {
    "validate": cmd_validate, "homology": cmd_homology, "poset": cmd_poset, "exact": cmd_exact,
    "salamander": cmd_salamander, "fibration": cmd_fibration, "gen": cmd_gen, "search-iv": cmd_search_iv,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig.from_args(args)
        code, text = COMMANDS[cfg.command](args)
    except UsageError as exc:
        sys.stderr.write(json.dumps({"schema": SCHEMA, "error": "usage", "message": str(exc)}) + "\n")
        return EXIT_USAGE
    except _Invalid as exc:
        # not a double complex: an input error for every command except validate
        sys.stderr.write(_json({"error": "invalid double complex", **exc.report.to_json()}))
        return EXIT_USAGE
    if text:
        _emit(text, cfg.output if cfg.command != "gen" else None)
    return code


if __name__ == "__main__":
    sys.exit(main())
