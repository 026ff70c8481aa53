"""The ``fibcat`` command line.

Exit codes: 0 when every verdict was computed (whatever its value), 1 for usage
or input errors, 2 when two routes to the same statement disagree or an
acceptance criterion fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

from .errors import FibcatError
from .report import SCHEMA_VERSION, Verdict
from .search import DEFAULT_CAP
from .localize import DEFAULT_ZIGZAG_CAP
from .textformat import Block, Document, parse_file, print_document

EXIT_OK, EXIT_INPUT, EXIT_DIVERGENT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default, which means divergence here
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- block selection


def select(doc: Document, kinds: tuple[str, ...], name: str | None) -> Block:
    """The named block, or the last block of one of ``kinds`` declared in the file itself."""
    if name is not None:
        block = doc.scope.get(name)
        if block is None:
            raise UsageError(f"no block named {name!r}")
        if block.kind not in kinds:
            raise UsageError(f"block {name!r} is a {block.kind}, expected {' or '.join(kinds)}")
        return block
    found = [b for b in doc.blocks.values() if b.kind in kinds]
    if not found:
        raise UsageError(f"no {' or '.join(kinds)} block in the document")
    return found[-1]


# ---------------------------------------------------------------- check


def _fibration_verdict(P) -> Verdict:
    v = P.verdict
    ce = {}
    if v.counterexample is not None:
        ce["no_cartesian_lift"] = {"u": v.counterexample[0], "X": v.counterexample[1]}
    if v.co_counterexample is not None:
        ce["no_cocartesian_lift"] = {"u": v.co_counterexample[0], "X": v.co_counterexample[1]}
    return Verdict(
        "fibration",
        v.fibration,
        [],
        ce or None,
        [],
        {"opfibration": v.opfibration, "bifibration": v.bifibration},
    )


def _splittable(P, args) -> Verdict:
    from .fibration import split_cleavages

    P.require_fibration()
    found = split_cleavages(P, args.cap, limit=1)
    witnesses = [{"cleavage": sorted([list(k), v] for k, v in found[0].table.items())}] if found else []
    return Verdict("splittable", bool(found), witnesses)


def _fibration_checks() -> dict[str, Callable]:
    from .analyze import classify_shape, find_separator, is_locally_small, is_representable, is_well_powered
    from .fibred_limits import finite_limit_profile, has_small_global_sections, is_geometric, small_fibration_tests
    from .geomorph import delta_gamma, generating_family_tests
    from .sums import has_internal_products, has_internal_sums, sums_profile

    return {
        "fibration": lambda P, a: _fibration_verdict(P),
        "splittable": _splittable,
        "shape": lambda P, a: classify_shape(P),
        "representable": lambda P, a: is_representable(P),
        "locally-small": lambda P, a: is_locally_small(P),
        "well-powered": lambda P, a: is_well_powered(P),
        "internal-sums": lambda P, a: has_internal_sums(P),
        "internal-products": lambda P, a: has_internal_products(P),
        "sums-profile": lambda P, a: sums_profile(P),
        "finite-limits": lambda P, a: finite_limit_profile(P),
        "global-sections": lambda P, a: has_small_global_sections(P),
        "geometric": lambda P, a: is_geometric(P),
        "small": lambda P, a: small_fibration_tests(P, a.cap),
        "separator": lambda P, a: find_separator(P),
        "generating-family": lambda P, a: generating_family_tests(P),
        "delta-gamma": lambda P, a: delta_gamma(P).verdict,
    }


def _functor_checks() -> dict[str, Callable]:
    from .change_base import change_base_adjoints, pullback_preservation_profile, smallness_preservation
    from .closure import fundamental_fibration

    def adjoints(F, a):
        return change_base_adjoints(
            F, fundamental_fibration(F.source), fundamental_fibration(F.target), a.cap, a.zigzag_cap
        )

    return {
        "change-base-adjoints": adjoints,
        "pullback-preservation": lambda F, a: pullback_preservation_profile(F),
        "smallness-preservation": lambda F, a: smallness_preservation(F),
    }


def _distributor_checks() -> dict[str, Callable]:
    from .change_base import right_adjoint_distributor

    return {"right-adjoint": lambda phi, a: right_adjoint_distributor(phi)}


def _category_checks() -> dict[str, Callable]:
    from .analyze import has_exponentials, has_subobject_classifier, is_topos
    from .limits import has_finite_limits

    def boolean(name, f):
        return lambda C, a: Verdict(name, bool(f(C)))

    return {
        "finite-limits-base": boolean("finite_limits", has_finite_limits),
        "exponentials": boolean("exponentials", has_exponentials),
        "subobject-classifier": boolean("subobject_classifier", has_subobject_classifier),
        "topos": boolean("topos", is_topos),
    }


def check_table() -> dict[str, tuple[tuple[str, ...], Callable]]:
    table: dict[str, tuple[tuple[str, ...], Callable]] = {}
    for kinds, checks in [
        (("fibration",), _fibration_checks()),
        (("functor",), _functor_checks()),
        (("distributor",), _distributor_checks()),
        (("category",), _category_checks()),
    ]:
        for name, f in checks.items():
            table[name] = (kinds, f)
    return table


PROPERTIES = (
    "fibration splittable shape representable locally-small well-powered internal-sums internal-products "
    "sums-profile finite-limits global-sections geometric small separator generating-family delta-gamma "
    "change-base-adjoints pullback-preservation smallness-preservation right-adjoint "
    "finite-limits-base exponentials subobject-classifier topos"
).split()


# ---------------------------------------------------------------- commands


def cmd_validate(args) -> tuple[list[dict], str | None]:
    doc = parse_file(args.file)
    rows = []
    for b in doc.blocks.values():
        row = {"block": b.name, "kind": b.kind, "valid": True}
        if b.kind == "category":
            row["objects"], row["arrows"] = b.value.n_obj, b.value.n_arr
        elif b.kind == "fibration":
            v = b.value.verdict
            row.update(fibration=v.fibration, opfibration=v.opfibration)
        rows.append(row)
    return [{"property": "validate", "verdict": True, "witnesses": [], "theorem_crosschecks": [], "details": {"blocks": rows}}], None


CONSTRUCTIONS = ("grothendieck", "fundamental", "glueing", "opposite", "fam", "split-left", "split-right", "externalize", "localize")


def cmd_construct(args) -> tuple[list[dict], str | None]:
    from .closure import externalize, fam_fibration, fundamental_fibration, glueing
    from .indexed import grothendieck
    from .localize import localize
    from .opposite import opposite_fibration
    from .splitting import split_left, split_right

    doc = parse_file(args.file)
    out = Document()
    kind = args.kind
    name = args.name or kind
    if kind == "grothendieck":
        src = select(doc, ("indexed",), args.block)
        out.fibration(name, grothendieck(src.value).fibration)
    elif kind == "fundamental":
        src = select(doc, ("category",), args.block)
        out.fibration(name, fundamental_fibration(src.value))
    elif kind == "glueing":
        src = select(doc, ("functor",), args.block)
        out.fibration(name, glueing(src.value))
    elif kind == "externalize":
        src = select(doc, ("internal",), args.block)
        out.fibration(name, externalize(src.value))
    elif kind == "localize":
        src = select(doc, ("category",), args.block)
        C = src.value
        try:
            inverted = [C.arr(label) for label in args.invert]
        except (KeyError, ValueError) as exc:
            raise UsageError(f"unknown arrow in --invert: {exc}") from None
        loc = localize(C, inverted, args.zigzag_cap)
        out.category(f"{src.name}.source", C)
        out.category(name, loc.cat)
        out.functor(f"{name}.quotient", loc.quotient, f"{src.name}.source", name)
    else:
        src = select(doc, ("fibration",), args.block)
        P = src.value
        if kind == "opposite":
            out.fibration(name, opposite_fibration(P))
        elif kind == "fam":
            fam = fam_fibration(P)
            out.fibration(name, fam.fibration)
            out.fibration(f"{name}.source", P)
            out.functor(f"{name}.eta", fam.eta, f"{name}.source.total", f"{name}.total")
        elif kind in ("split-left", "split-right"):
            res = split_left(P) if kind == "split-left" else split_right(P, args.cap)
            out.fibration(name, res.split.fibration)
            out.indexed(f"{name}.indexed", res.indexed, f"{name}.base")
        else:
            raise UsageError(f"unknown construction {kind!r}")
    text = print_document(out)
    summary = {
        "property": f"construct {kind}",
        "verdict": True,
        "witnesses": [],
        "theorem_crosschecks": [],
        "details": {"source_block": src.name, "blocks": [b.name for b in out.blocks.values()]},
    }
    return [summary], text


def cmd_check(args) -> tuple[list[dict], str | None]:
    table = check_table()
    kinds, f = table[args.property]
    doc = parse_file(args.file)
    block = select(doc, kinds, args.block)
    verdict = f(block.value, args)
    report = verdict.to_json()
    report["block"] = block.name
    return [report], None


def cmd_classify_gm(args) -> tuple[list[dict], str | None]:
    from .geomorph import gm_classify, profile_verdict

    doc = parse_file(args.file)
    block = select(doc, ("adjunction",), args.block)
    profile = gm_classify(block.value)
    report = profile_verdict(profile).to_json()
    report["block"] = block.name
    report["profile"] = profile.to_json()
    return [report], None


def cmd_moens(args) -> tuple[list[dict], str | None]:
    from .acceptance import INAPPLICABLE
    from .moens import gen_moens, moens_reconstruct

    doc = parse_file(args.file)
    block = select(doc, ("fibration",), args.block)
    P = block.value
    reports, errors = [], []
    for run in (moens_reconstruct, gen_moens):
        try:
            rep = run(P, args.cap).verdict.to_json()
        except INAPPLICABLE as exc:
            errors.append(f"{run.__name__}: {exc}")
            continue
        rep["block"] = block.name
        reports.append(rep)
    if not reports:
        raise UsageError("; ".join(errors))
    for rep in reports:
        if rep["property"] == "moens":
            rep["details"] = {**rep.get("details", {}), "equivalence": rep["verdict"]}
    return reports, None


def cmd_sweep(args) -> tuple[list[dict], str | None]:
    from . import acceptance
    from .corpus import corpus

    golden = None
    if args.seed_corpus:
        root = Path(args.seed_corpus)
        root.mkdir(parents=True, exist_ok=True)
        docs = {k: print_document(d) for k, d in corpus().items()}
        for k, text in docs.items():
            path = root / k
            if not path.exists():
                path.write_text(text, encoding="utf-8")
        golden = {k: (root / k).read_text(encoding="utf-8") for k in docs}
    numbers = sorted(acceptance.CRITERIA)
    if args.criteria:
        numbers = [int(x) for x in args.criteria.split(",")]
    reports = []
    for n in numbers:
        if n == 12:
            start = __import__("time").perf_counter()
            result = acceptance.criterion_12(golden)
            result.seconds = __import__("time").perf_counter() - start
        else:
            result = acceptance.run_criterion(n)
        if args.format == "json":
            print(result.line(), file=sys.stderr)
        reports.append(result.to_json(args.timings))
    return reports, None


COMMANDS = {
    "validate": cmd_validate,
    "construct": cmd_construct,
    "check": cmd_check,
    "classify-gm": cmd_classify_gm,
    "moens": cmd_moens,
    "sweep-corpus": cmd_sweep,
}


# ---------------------------------------------------------------- driver


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="search cap for enumerations")
    common.add_argument("--zigzag-cap", type=int, default=DEFAULT_ZIGZAG_CAP, help="longest zigzag explored by localisation")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the report (or constructed document) here instead of stdout")
    common.add_argument("--timings", action="store_true", help="include timings; reports are byte-stable without it")

    parser = _Parser(prog="fibcat", description="Finite categories, functors and fibrations as executable data.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="parse and validate a document")
    p.add_argument("file")

    p = sub.add_parser("construct", parents=[common], help="build a new fibration from a document block")
    p.add_argument("kind", choices=CONSTRUCTIONS)
    p.add_argument("file")
    p.add_argument("--block", help="input block name (default: last suitable block)")
    p.add_argument("--name", help="name of the constructed block")
    p.add_argument("--invert", nargs="*", default=[], help="arrow labels to invert (localize)")

    p = sub.add_parser("check", parents=[common], help="decide a property")
    p.add_argument("property", choices=PROPERTIES)
    p.add_argument("file")
    p.add_argument("--block")

    p = sub.add_parser("classify-gm", parents=[common], help="classify the geometric morphism of an adjunction")
    p.add_argument("file")
    p.add_argument("--block")

    p = sub.add_parser("moens", parents=[common], help="compare a fibration with the glueing of its sum functor")
    p.add_argument("file")
    p.add_argument("--block")

    p = sub.add_parser("sweep-corpus", parents=[common], help="run the acceptance criteria over the corpus")
    p.add_argument("--seed-corpus", metavar="DIR", help="write the corpus documents into DIR (keeping existing files) and sweep them")
    p.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    return parser


def _divergent(report: dict) -> bool:
    if "ok" in report:
        return not report["ok"]
    return any(not c["agree"] for c in report.get("theorem_crosschecks", [])) or report.get("verdict") == "divergent"


def _text(reports: list[dict]) -> str:
    lines = []
    for r in reports:
        if "criterion" in r:
            lines.append(f"criterion {r['criterion']:2d} [{'PASS' if r['ok'] else 'FAIL'}] {r['title']}")
            continue
        head = r["property"] + (f" [{r['block']}]" if "block" in r else "")
        lines.append(f"{head}: {json.dumps(r['verdict'], ensure_ascii=False)}")
        if r.get("counterexample") is not None:
            lines.append(f"  counterexample: {json.dumps(r['counterexample'], ensure_ascii=False)}")
        for w in r.get("witnesses", []):
            lines.append(f"  witness: {json.dumps(w, ensure_ascii=False)}")
        for c in r.get("theorem_crosschecks", []):
            state = "agree" if c["agree"] else "DIVERGE"
            if not c["applicable"]:
                state = "n/a"
            lines.append(f"  crosscheck {c['name']}: {state} {json.dumps(c['values'], ensure_ascii=False)}")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    echo = {"command": args.command, "argv": argv}
    try:
        reports, document = COMMANDS[args.command](args)
        code = EXIT_DIVERGENT if any(_divergent(r) for r in reports) else EXIT_OK
        error = None
    except (UsageError, FibcatError, OSError) as exc:
        reports, document, code = [], None, EXIT_INPUT
        error = {"type": type(exc).__name__, "message": str(exc)}
        line = getattr(exc, "line", None)
        if line is not None:
            error["line"] = line
            if getattr(exc, "col", None) is not None:
                error["col"] = exc.col
        print(f"fibcat: {type(exc).__name__}: {exc}", file=sys.stderr)
    if args.format == "text":
        body = document if document is not None else (_text(reports) if reports else "")
    else:
        payload = {"schema_version": SCHEMA_VERSION, "command": echo, "exit_code": code, "reports": reports}
        if document is not None:
            payload["document"] = document
        if error is not None:
            payload["error"] = error
        body = json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
