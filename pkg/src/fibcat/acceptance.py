"""The acceptance criteria as functions over the corpus.

Each criterion returns a ``CriterionResult``; ``run_all`` runs a selection.
The command line's ``sweep-corpus`` and the test suite both call these.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from . import corpus as cp
from .category import law_violations
from .change_base import pullback_preservation_profile
from .closure import (
    InternalCat,
    change_of_base,
    discrete_internal,
    externalize,
    fam_fibration,
    fam_monad_law_failures,
    fundamental_fibration,
    glueing,
    internal_opposite,
    product_fibration,
    slice_fibration,
)
from .errors import (
    BaseLacksPullbacks,
    FibcatError,
    MissingStructure,
    NoFibrewiseTerminals,
    NoInternalSums,
    NotAFibration,
    NotElementary,
    NotGeometric,
    PreconditionFailed,
)
from .fibration import (
    FibrationData,
    cartesian_composition_failures,
    choose_cleavage,
    cocartesian_remark_failures,
    find_fibred_equivalence,
    is_cartesian_functor,
    is_fibrewise_equivalence,
    is_splittable,
    iso_characterisation_failures,
    liberal_vs_hyper_failures,
    lift_uniqueness_failures,
    split_cleavages,
)
from .fibred_limits import finite_limit_profile
from .functor import adjunction_violations, functor_violations, validate_mapping
from .geomorph import gm_classify, generating_family_tests
from .indexed import grothendieck, to_indexed
from .limits import find_limit
from .localize import localize
from .moens import gen_moens_conditions, moens_reconstruct
from .opposite import double_opposite_comparison, opposite_fibration
from .report import Verdict
from .splitting import split_left, split_right
from .sums import has_internal_products, has_internal_sums, sums_profile
from .analyze import classify_shape, is_locally_small, is_well_powered

# raised when a decider's preconditions do not hold for an input
INAPPLICABLE = (
    BaseLacksPullbacks,
    MissingStructure,
    NoFibrewiseTerminals,
    NoInternalSums,
    NotAFibration,
    NotElementary,
    NotGeometric,
    PreconditionFailed,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"criterion {self.number:2d} [{'PASS' if self.ok else 'FAIL'}] {self.title}"

    def to_json(self, timings: bool = False) -> dict:
        out = {"criterion": self.number, "title": self.title, "ok": self.ok, "details": self.details}
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


# ---------------------------------------------------------------- corpus fibrations


@lru_cache(maxsize=None)
def corpus_fibrations() -> dict[str, FibrationData]:
    """Every corpus fibration, built once and shared so arrow classifications are cached."""
    fibs = {
        "pmod": cp.pmod(),
        "fib(Hwarn)": cp.hwarn(),
        "presheaf_on_2": grothendieck(cp.presheaf_on_2()).fibration,
        "identity(D2)": cp.identity_fibration(cp.D2()),
        "P_T1": fundamental_fibration(cp.T1()),
    }
    for name, make in cp.LATTICES.items():
        fibs[f"P_{name}"] = fundamental_fibration(make())
    for name, adj in cp.lattice_adjunctions().items():
        fibs[f"gl({name})"] = glueing(adj.left)
    for name, make in cp.SYNTHETIC.items():
        fibs[name] = make()
    return fibs


def corpus_categories() -> dict:
    cats = {
        "T1": cp.T1(),
        "2": cp.ordinal2(),
        "chain3": cp.chain3(),
        "D2": cp.D2(),
        "N5": cp.N5(),
        "M3": cp.M3(),
        "Z2": cp.Z2(),
        "Z4": cp.Z4(),
        "discrete2": cp.discrete2(),
        "D2x2": cp.D2_times_2(),
        "walking_cospan": cp.walking_cospan(),
        "vect_f2": cp.vect_f2(),
    }
    return cats


def corpus_internal_categories() -> dict[str, InternalCat]:
    """Discrete internal categories in ``D2`` and the group ``Z2`` inside ``vect_f2``."""
    out = {f"discrete({cp.D2().obj_labels[I]})": discrete_internal(cp.D2(), I) for I in cp.D2().objects}
    V = cp.vect_f2()
    d, i = V.hom(1, 0)[0], V.hom(0, 1)[0]
    m = next(a for a in V.hom(2, 1) if V.arr_labels[a] == "[11]")
    assert find_limit(V, "pullback", (d, d))
    out["Z2 in vect_f2"] = InternalCat(V, 0, 1, d, d, i, m)
    return out


def _fibrations_only() -> dict[str, FibrationData]:
    return {k: P for k, P in corpus_fibrations().items() if P.verdict.fibration}


# ---------------------------------------------------------------- criteria


def criterion_1() -> CriterionResult:
    """Law suites over the corpus and over construction outputs."""
    failures: list[str] = []
    checked = 0

    def cat_ok(name, C):
        nonlocal checked
        checked += 1
        if law_violations(C):
            failures.append(f"category {name}")

    def map_ok(name, F):
        nonlocal checked
        checked += 1
        if validate_mapping(F):
            failures.append(f"mapping {name}")

    for name, C in corpus_categories().items():
        cat_ok(name, C)
    for name, F in cp.lattice_functors().items():
        checked += 1
        if functor_violations(F):
            failures.append(f"functor {name}")
    for name, adj in cp.lattice_adjunctions().items():
        checked += 1
        if adjunction_violations(adj):
            failures.append(f"adjunction {name}")
    for name, H in [("Hwarn", cp.hwarn_indexed()), ("presheaf_on_2", cp.presheaf_on_2()), ("nondisjoint", cp.nondisjoint_indexed())]:
        checked += 1
        if H.violations():
            failures.append(f"indexed {name}")
    for name, ic in corpus_internal_categories().items():
        checked += 1
        if ic.violations():
            failures.append(f"internal {name}")
        E = externalize(ic)
        cat_ok(f"externalize {name}", E.total)
        map_ok(f"externalize {name}", E.proj)

    constructions = 0
    for name, P in corpus_fibrations().items():
        cat_ok(f"{name} total", P.total)
        map_ok(f"{name} projection", P.proj)
        if not P.verdict.fibration:
            continue
        outputs = []
        R, L = split_right(P), split_left(P)
        outputs += [("Sp", R.split.fibration, R.comparison), ("L", L.split.fibration, L.comparison)]
        outputs.append(("op", opposite_fibration(P), None))
        fam = fam_fibration(P)
        outputs.append(("Fam", fam.fibration, fam.eta))
        for label, Q, K in outputs:
            constructions += 1
            cat_ok(f"{label}({name})", Q.total)
            map_ok(f"{label}({name}) projection", Q.proj)
            if K is not None:
                map_ok(f"{label}({name}) comparison", K)
    for name, F in cp.lattice_functors().items():
        constructions += 1
        G = glueing(F)
        cat_ok(f"gl({name})", G.total)
        map_ok(f"gl({name})", G.proj)
    D2 = cp.D2()
    extra = [
        ("slice D2/a", slice_fibration(D2, 1)),
        ("pmod × pmod", product_fibration(cp.pmod(), cp.pmod())),
        ("change of base of P_D2", change_of_base(fundamental_fibration(D2), cp.lattice_functors()["incl_2_D2"])),
    ]
    for name, Q in extra:
        constructions += 1
        cat_ok(name, Q.total)
        map_ok(name, Q.proj)
    loc = localize(D2, [D2.hom(0, 1)[0]])
    constructions += 1
    cat_ok("D2[(⊥≤a)⁻¹]", loc.cat)
    map_ok("D2 → D2[(⊥≤a)⁻¹]", loc.quotient)
    return CriterionResult(1, "law suites", not failures, {"checked": checked, "constructions": constructions, "failures": failures})


def criterion_2() -> CriterionResult:
    """Hypercartesian closure, isomorphism characterisation, lift uniqueness, liberal = hyper."""
    failures = {}
    arrows = 0
    for name, P in _fibrations_only().items():
        arrows += P.total.n_arr
        found = {
            "composition": cartesian_composition_failures(P),
            "iso": iso_characterisation_failures(P),
            "uniqueness": lift_uniqueness_failures(P),
            "liberal": liberal_vs_hyper_failures(P),
            "cocartesian remark": cocartesian_remark_failures(P),
        }
        bad = {k: v for k, v in found.items() if v}
        if bad:
            failures[name] = bad
    return CriterionResult(2, "cartesian arrow lemmas", not failures, {"arrows": arrows, "failures": failures})


def criterion_3() -> CriterionResult:
    """pmod is not splittable; fib(Hwarn) has exactly two split cleavages with one indexed category."""
    pmod_split = is_splittable(cp.pmod())
    H = cp.hwarn_indexed()
    P = cp.hwarn()
    cleavages = split_cleavages(P)
    same = [to_indexed(P, cl) == H for cl in cleavages]
    ok = not pmod_split and len(cleavages) == 2 and all(same)
    return CriterionResult(
        3, "splitting", ok, {"pmod_splittable": pmod_split, "hwarn_split_cleavages": len(cleavages), "to_indexed_equal": same}
    )


def criterion_4() -> CriterionResult:
    """Right splitting comparison E_P and left splitting comparison H_P."""
    failures = []
    for name, P in _fibrations_only().items():
        R = split_right(P)
        if not (is_cartesian_functor(R.comparison, R.split.fibration, P).ok and is_fibrewise_equivalence(R.comparison, R.split.fibration, P)):
            failures.append(f"E_P on {name}")
        L = split_left(P)
        if not L.split.cleavage.is_split:
            failures.append(f"L({name}) not split")
        if not (is_cartesian_functor(L.comparison, P, L.split.fibration).ok and is_fibrewise_equivalence(L.comparison, P, L.split.fibration)):
            failures.append(f"H_P on {name}")
    return CriterionResult(4, "fibred Yoneda", not failures, {"fibrations": len(_fibrations_only()), "failures": failures})


def theorem_verdicts() -> list[tuple[str, Verdict]]:
    """Every verdict that carries a biconditional cross-check, over the corpus."""
    out: list[tuple[str, Verdict]] = []

    def attempt(name: str, f: Callable[[], Verdict]) -> None:
        try:
            out.append((name, f()))
        except INAPPLICABLE:
            pass

    fibs = corpus_fibrations()
    for name, P in _fibrations_only().items():
        attempt(f"shape {name}", lambda: classify_shape(P))
        attempt(f"finite limits {name}", lambda: finite_limit_profile(P))
        if P.verdict.bifibration:
            attempt(f"sums profile {name}", lambda: sums_profile(P))
        attempt(f"generating family {name}", lambda: generating_family_tests(P))
    for name in ("P_T1", "P_2", "P_chain3", "P_D2"):
        P = fibs[name]
        attempt(f"internal sums {name}", lambda: has_internal_sums(P))
        attempt(f"internal products {name}", lambda: has_internal_products(P))
    for name in ("P_T1", *(f"P_{k}" for k in cp.LATTICES)):
        P = fibs[name]
        attempt(f"locally small {name}", lambda: is_locally_small(P))
        attempt(f"well powered {name}", lambda: is_well_powered(P))
    for name, F in cp.lattice_functors().items():
        attempt(f"pullback preservation {name}", lambda: pullback_preservation_profile(F))
    return out


def criterion_5() -> CriterionResult:
    verdicts = theorem_verdicts()
    checks = [(name, c) for name, v in verdicts for c in v.crosschecks if c.applicable]
    divergent = [f"{name}: {c.name}" for name, c in checks if not c.agree]
    return CriterionResult(
        5, "biconditional cross-checks", not divergent, {"verdicts": len(verdicts), "crosschecks": len(checks), "divergent": divergent}
    )


def criterion_6() -> CriterionResult:
    """Local smallness of the fundamental fibration tracks distributivity."""
    fibs = corpus_fibrations()
    table = {}
    for name in cp.LATTICES:
        table[name] = is_locally_small(fibs[f"P_{name}"]).verdict
    N5 = cp.N5()
    P = fibs["P_N5"]
    ce = is_locally_small(P).counterexample or {}
    u = N5.hom(N5.obj("z"), N5.obj("⊤"))[0]
    x_le_z = P.built.o((N5.obj("x"), N5.obj("z"), N5.hom(N5.obj("x"), N5.obj("z"))[0]))
    witness_ok = ce.get("u") == u and ce.get("X") == x_le_z
    ok = all(table[k] == cp.DISTRIBUTIVE[k] for k in table) and witness_ok
    return CriterionResult(6, "local smallness and distributivity", ok, {"locally_small": table, "n5_counterexample": ce, "witness_ok": witness_ok})


def criterion_7() -> CriterionResult:
    fibs = corpus_fibrations()
    table = {name: is_well_powered(fibs[f"P_{name}"]).verdict for name in cp.LATTICES}
    return CriterionResult(7, "well-poweredness", all(v is False for v in table.values()), {"well_powered": table})


def criterion_8() -> CriterionResult:
    """Moens reconstruction of glueings and agreement of the three cancellation conditions."""
    failures = []
    fs = cp.lattice_functors()
    for name in cp.LEX_FUNCTORS:
        R = moens_reconstruct(glueing(fs[name]))
        if R.verdict.verdict is not True or not R.verdict.details.get("delta_iso_to_glued_functor"):
            failures.append(f"moens gl({name})")
        if R.verdict.divergences:
            failures.append(f"moens gl({name}) divergent")
    conditions = {}
    for name, P in corpus_fibrations().items():
        if not P.verdict.bifibration:
            continue
        flags = {k: v is None for k, v in gen_moens_conditions(P).items()}
        conditions[name] = flags
        if len(set(flags.values())) != 1:
            failures.append(f"conditions disagree on {name}")
    for name in cp.SYNTHETIC:
        if any(conditions[name].values()):
            failures.append(f"synthetic {name} satisfies a condition")
    return CriterionResult(8, "Moens reconstruction", not failures, {"conditions": conditions, "failures": failures})


def criterion_9() -> CriterionResult:
    profiles = {}
    divergent = []
    for name, adj in cp.lattice_adjunctions().items():
        prof = gm_classify(adj)
        profiles[name] = {e.name: e.verdict for e in prof.entries()}
        divergent += [f"{name}: {e.name}" for e in prof.divergent]
    return CriterionResult(9, "geometric morphism classification", not divergent, {"profiles": profiles, "divergent": divergent})


def criterion_10() -> CriterionResult:
    failures = []
    for name, P in _fibrations_only().items():
        Op = opposite_fibration(P)
        OpOp = opposite_fibration(Op)
        K = double_opposite_comparison(P, Op, OpOp)
        if validate_mapping(K) or not is_cartesian_functor(K, P, OpOp).ok or not is_fibrewise_equivalence(K, P, OpOp):
            failures.append(f"(P^op)^op ≄ P for {name}")
        other = opposite_fibration(P, choose_cleavage(P, "greatest"))
        if not (other.total == Op.total and other.total.same_labels(Op.total) and other.proj == Op.proj):
            failures.append(f"P^op depends on the cleavage for {name}")
    for name, ic in corpus_internal_categories().items():
        E = externalize(ic)
        lhs = opposite_fibration(E)
        rhs = externalize(internal_opposite(ic))
        if not find_fibred_equivalence(lhs, rhs):
            failures.append(f"externalize({name})^op ≄ externalize({name}^op)")
    return CriterionResult(10, "opposite involution", not failures, {"failures": failures})


def criterion_11() -> CriterionResult:
    failures = []
    for name, P in _fibrations_only().items():
        small = P.total.n_arr <= 40
        bad = fam_monad_law_failures(P, associativity=small)
        if bad:
            failures.append(f"Fam laws on {name}: {bad}")
        fam = fam_fibration(P)
        if not is_cartesian_functor(fam.eta, P, fam.fibration).ok:
            failures.append(f"η not cartesian on {name}")
    T = cp.T1()
    for name, C in [("D2", cp.D2()), ("Z2", cp.Z2()), ("chain3", cp.chain3())]:
        from .functor import constant_functor

        P = FibrationData(constant_functor(C, T, 0), f"{name} over T1")
        fam = fam_fibration(P)
        if not (is_fibrewise_equivalence(fam.eta, P, fam.fibration) and find_fibred_equivalence(fam.fibration, P)):
            failures.append(f"Fam(P) ≄ P for {name} over T1")
    return CriterionResult(11, "Fam monad", not failures, {"failures": failures})


def criterion_12(golden: dict[str, str] | None = None) -> CriterionResult:
    """Parse and print fixed points, and a located error for a corrupted composition entry.

    ``golden`` maps file names to texts; by default the corpus is printed afresh.
    The ``sweep-corpus`` exit code is checked by the test suite, which runs the command.
    """
    import tempfile
    from pathlib import Path

    from .errors import DocumentValidationError
    from .textformat import parse_file, print_document

    if golden is None:
        golden = {k: print_document(d) for k, d in cp.corpus().items()}
    failures = []
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        for k, text in golden.items():
            (root / k).write_text(text, encoding="utf-8")
        for k, text in golden.items():
            try:
                if print_document(parse_file(root / k)) != text:
                    failures.append(f"{k} is not a fixed point")
            except FibcatError as exc:
                failures.append(f"{k}: {exc}")
        corrupt, line = corrupt_composition(golden[cp.CATEGORY_FILE])
        (root / "corrupt.fcat").write_text(corrupt, encoding="utf-8")
        located = None
        try:
            parse_file(root / "corrupt.fcat")
            failures.append("corrupted file parsed")
        except DocumentValidationError as exc:
            located = exc.line
            if exc.line != line:
                failures.append(f"corruption on line {line} reported at line {exc.line}")
    return CriterionResult(12, "text format and command line", not failures, {"files": len(golden), "corrupted_line": line, "reported_line": located, "failures": failures})


def corrupt_composition(text: str) -> tuple[str, int]:
    """Change the result of the first non-identity composite of ``D2``; returns the text and line."""
    lines = text.splitlines()
    start = lines.index("category D2")
    for i in range(start, len(lines)):
        if lines[i].strip() == "comp a≤⊤ ⊥≤a = ⊥≤⊤":
            lines[i] = lines[i].replace("= ⊥≤⊤", "= ⊥≤a")
            return "\n".join(lines) + "\n", i + 1
    raise ValueError("D2 block not found")


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
}


def run_criterion(n: int) -> CriterionResult:
    start = time.perf_counter()
    try:
        result = CRITERIA[n]()
    except FibcatError as exc:
        result = CriterionResult(n, CRITERIA[n].__name__, False, {"error": repr(exc)})
    result.seconds = time.perf_counter() - start
    return result


def run_all(numbers: list[int] | None = None) -> list[CriterionResult]:
    return [run_criterion(n) for n in (numbers or sorted(CRITERIA))]
