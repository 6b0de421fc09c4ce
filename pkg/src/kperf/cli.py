"""Command-line front end.

Exit codes: 0 when every verdict is positive (or the verb only computes),
1 when some verdict is negative, 2 for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .abelian import AbelianGroupError, FGAbelianGroup, GroupHom
from .jsonio import InputError, dumps, group_from_json, hom_from_json, load, loads, parse_int
from .lambda_ring import (
    LambdaRing,
    LambdaRingError,
    adams,
    adams_on_kernel,
    gamma,
    gamma_filtration,
    load_lambda_ring,
    verify_graded_adams,
    verify_prop_lambda,
)
from .localization import BudgetExceeded, DirectLimit, lemell_check, localize
from .perfection import (
    KGroupDatum,
    PerfectionError,
    scaling_iteration_consistent,
    verify_k0_splitting,
    verify_main_theorem_k1,
    verify_negative_k_scaling,
    verify_ptorsion_remark,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2

BUNDLED_RINGS = {
    "Z": "ring_Z.json",
    "R(C2)": "ring_rc2.json",
    "rc2": "ring_rc2.json",
    "R(C3)": "ring_rc3.json",
    "rc3": "ring_rc3.json",
    "c2mod2": "ring_c2mod2.json",
    **{f"u{m}": f"ring_u{m}.json" for m in range(2, 7)},
}


def corpus_dir() -> Path:
    return Path(str(resources.files("kperf") / "corpus"))


# ---------------------------------------------------------------------------
# input helpers


def _load_group(path: str) -> FGAbelianGroup:
    return group_from_json(load(path), f"{path}")


def _load_endo(path: str, group: FGAbelianGroup | None) -> GroupHom:
    obj = load(path)
    h = hom_from_json(obj, group, group, f"{path}")
    if h.source != h.target:
        raise InputError(f"{path}: expected an endomorphism (source and target differ)")
    return h


def _ring_source(name: str, corpus: Path | None = None) -> tuple[str, Any]:
    base = corpus or corpus_dir()
    if name in BUNDLED_RINGS:
        path = base / BUNDLED_RINGS[name]
    else:
        path = Path(name)
    return str(path), load(path)


def _load_ring(name: str, corpus: Path | None = None, cap: int | None = None) -> LambdaRing:
    where, obj = _ring_source(name, corpus)
    if cap is not None and isinstance(obj, dict) and "degree_cap" not in obj:
        obj = dict(obj, degree_cap=max(16, cap + 1))
    try:
        return load_lambda_ring(obj)
    except LambdaRingError as exc:
        raise InputError(f"{where}: {exc}") from None


def _vector(text: str, n: int, where: str) -> list[int]:
    obj = loads(text, where)
    if not isinstance(obj, list) or len(obj) != n:
        raise InputError(f"{where}: expected a JSON list of {n} integers")
    return [parse_int(c, where) for c in obj]


# ---------------------------------------------------------------------------
# verbs; each returns (inputs, verdicts, witnesses, computational)


def cmd_lemell(args):
    group = _load_group(args.group) if args.group else None
    theta = _load_endo(args.endo, group)
    rep = lemell_check(theta, args.ell, args.budget)
    d = rep.to_dict()
    verdicts = {k: d[k] for k in ("cond_a", "cond_b", "cond_c", "overall")}
    witnesses = {"explanations": d["explanations"], **d["witnesses"], "spot_checks": d["spot_checks"]}
    inputs = {"group": args.group, "endo": args.endo, "ell": args.ell, "group_structure": theta.source.describe()}
    return inputs, verdicts, witnesses, False


def cmd_colim_equal(args):
    group = _load_group(args.group) if args.group else None
    theta = _load_endo(args.endo, group)
    k = theta.source.num_generators
    lim = DirectLimit(theta)
    x = lim.element(_vector(args.x, k, "--x"), args.i)
    y = lim.element(_vector(args.y, k, "--y"), args.j)
    equal = lim.equal(x, y)
    inputs = {"group": args.group, "endo": args.endo, "x": args.x, "i": args.i, "y": args.y, "j": args.j}
    return inputs, {"equal": equal}, {"stabilization_index": lim.stabilization_index}, False


def cmd_localize(args):
    A = _load_group(args.group)
    L = localize(A, args.ell)
    result = {"group": A.describe(), "localization": L.describe(), "free_rank": L.free_rank,
              "torsion": [str(d) for d in L.torsion], "inverted_primes": list(L.primes)}
    return {"group": args.group, "ell": args.ell}, {}, result, True


def cmd_lambda_load(args):
    R = _load_ring(args.ring, cap=args.cap)
    info = {"name": R.name, "basis": list(R.basis), "additive_group": R.additive.describe(),
            "augmentation_kernel": R.augmentation_kernel.group.describe(), "checks": dict(R.checks)}
    return {"ring": args.ring}, {"loaded": True}, info, True


def cmd_lambda_adams(args):
    R = _load_ring(args.ring, cap=args.cap)
    x = _element(R, args.element)
    y = adams(x, args.n)
    out = {"element": x.describe(), "n": args.n, "value": y.describe(), "coords": [str(c) for c in y.coords]}
    return {"ring": args.ring, "element": args.element, "n": args.n}, {}, out, True


def cmd_lambda_gamma(args):
    R = _load_ring(args.ring, cap=args.cap)
    cap = args.cap or 8
    if args.element:
        x = _element(R, args.element)
        vals = [gamma(x, n).describe() for n in range(cap + 1)]
        return {"ring": args.ring, "element": args.element, "cap": cap}, {}, {"gamma": vals}, True
    F = gamma_filtration(R, cap)
    d = F.to_dict()
    d["top_level_nonzero"] = not F.steps[-1].is_trivial()
    return {"ring": args.ring, "cap": cap}, {"filtration": F.verdict}, d, True


def cmd_lambda_verify(args):
    R = _load_ring(args.ring, cap=args.cap)
    rep = verify_prop_lambda(R, args.ell, args.cap, args.budget)
    d = rep.to_dict()
    verdicts = {"conclusion": rep.conclusion, "cond_a": d["lemell"]["cond_a"], "cond_b": d["lemell"]["cond_b"],
                "cond_c": d["lemell"]["cond_c"], "consistent": rep.consistent}
    failed = rep.lemell.failing()
    if failed:
        d["failed_conditions"] = failed
    return {"ring": args.ring, "ell": args.ell, "cap": args.cap}, verdicts, d, False


def _element(R: LambdaRing, text: str):
    try:
        return R.element(text)
    except (LambdaRingError, KeyError, ValueError) as exc:
        raise InputError(f"--element {text!r}: {exc}") from None


def cmd_k1(args):
    rep = verify_main_theorem_k1(args.p, args.m)
    return {"p": args.p, "m": args.m}, {"agree": rep.agree, "holds": rep.holds}, rep.to_dict(), False


def cmd_ptorsion(args):
    rep = verify_ptorsion_remark(args.p, args.m)
    return {"p": args.p, "m": args.m}, {"holds": rep.holds}, rep.to_dict(), False


def _load_datum(path: str) -> KGroupDatum:
    obj = load(path)
    try:
        return KGroupDatum.from_json(obj)
    except (PerfectionError, AbelianGroupError) as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_negk(args):
    datum = _load_datum(args.datum)
    rep = verify_negative_k_scaling(datum, args.p, args.budget)
    consistent = scaling_iteration_consistent(datum, args.p, args.budget)
    d = rep.to_dict()
    return ({"datum": args.datum, "p": args.p}, {"holds": rep.holds, "iteration_consistent": consistent}, d, False)


def cmd_k0(args):
    datum = _load_datum(args.datum)
    rep = verify_k0_splitting(args.c, datum, args.p, args.budget)
    return {"datum": args.datum, "c": args.c, "p": args.p}, {"holds": rep.holds}, rep.to_dict(), False


# ---------------------------------------------------------------------------
# bundled regression suite


def _suite_lemell(corpus: str, ell: int, cap: int, budget):
    c = Path(corpus)
    theta = _load_endo(str(c / f"example_endo_ell{ell}.json"), _load_group(str(c / "example_group.json")))
    rep = lemell_check(theta, ell, budget)
    return ("PASS" if rep.overall else "FAIL"), {"overall": rep.overall, "failing": rep.failing()}


def _suite_counterexample(corpus: str, ell: int, cap: int, budget):
    R = _load_ring("R(C2)", Path(corpus), cap)
    y = R.element("1 - x")
    psi_zero = adams(y, 2).is_zero()
    rep = verify_prop_lambda(R, 2, cap, budget)
    F = gamma_filtration(R, cap)
    top_nonzero = not F.steps[-1].is_trivial()
    ok = psi_zero and "a" in rep.lemell.failing() and not rep.conclusion and not F.finite and top_nonzero
    return ("PASS" if ok else "FAIL"), {"psi2(1-x)": adams(y, 2).describe(), "failing": rep.lemell.failing(),
                                        "conclusion": rep.conclusion, "filtration": F.verdict,
                                        "top_level_nonzero": top_nonzero}


def _suite_truncated(corpus: str, key: tuple[int, int], cap: int, budget):
    m, ell = key
    R = _load_ring(f"u{m}", Path(corpus), cap)
    F = gamma_filtration(R, cap)
    details: dict[str, Any] = {"filtration": F.verdict}
    if not F.finite:
        return "INCONCLUSIVE", details
    graded = verify_graded_adams(R, ell, F)
    rep = verify_prop_lambda(R, ell, cap, budget)
    details.update(graded_adams=graded.passed, conclusion=rep.conclusion)
    ok = F.finite_at == m and graded.passed and rep.conclusion
    if m == 3 and ell == 2:
        M = adams_on_kernel(R, 2).matrix.tolist()
        details["psi2_matrix"] = [[str(v) for v in r] for r in M]
        ok = ok and M == [[2, 0], [1, 4]]
    return ("PASS" if ok else "FAIL"), details


def _suite_k1(corpus: str, key: tuple[int, int], cap: int, budget):
    p, m = key
    rep = verify_main_theorem_k1(p, m)
    return ("PASS" if rep.holds else "FAIL"), {"colimit": rep.to_dict()["colimit_under_frobenius"],
                                               "localization": rep.to_dict()["localization"],
                                               "units_of_perfection": rep.to_dict()["units_of_perfection"]}


def _suite_ptorsion(corpus: str, key: tuple[int, int], cap: int, budget):
    rep = verify_ptorsion_remark(*key)
    return ("PASS" if rep.holds else "FAIL"), {"r": rep.description, "order": rep.order}


def _suite_negk(corpus: str, n: int, cap: int, budget):
    datum = _load_datum(str(Path(corpus) / f"datum_delta{n}.json"))
    results = {}
    ok = True
    for p in (2, 3, 5):
        rep = verify_negative_k_scaling(datum, p, budget)
        good = rep.holds and rep.localization == f"Z[1/{p}]" and scaling_iteration_consistent(datum, p, budget)
        results[str(p)] = rep.localization
        ok = ok and good
    return ("PASS" if ok else "FAIL"), {"localizations": results}


def suite_entries() -> list[tuple[str, Callable, Any]]:
    entries: list[tuple[str, Callable, Any]] = []
    for ell in (2, 3, 5):
        entries.append((f"lemell example ell={ell}", _suite_lemell, ell))
    entries.append(("R(C2) counterexample ell=2", _suite_counterexample, 2))
    for m in range(2, 7):
        for ell in (2, 3):
            entries.append((f"Z[u]/(u^{m}) ell={ell}", _suite_truncated, (m, ell)))
    for p in (2, 3, 5):
        for m in (2, 3, 4):
            entries.append((f"K1 units p={p} m={m}", _suite_k1, (p, m)))
            entries.append((f"p-torsion unit p={p} m={m}", _suite_ptorsion, (p, m)))
    for n in (1, 2, 3):
        entries.append((f"negative K scaling n={n}", _suite_negk, n))
    return entries


def _run_entry(entry: tuple[str, Callable, Any], corpus: str, cap: int, budget) -> dict:
    name, fn, key = entry
    t0 = time.perf_counter()
    try:
        status, details = fn(corpus, key, cap, budget)
    except InputError as exc:
        return {"name": name, "status": "ERROR", "error": str(exc), "seconds": time.perf_counter() - t0}
    return {"name": name, "status": status, "details": details, "seconds": time.perf_counter() - t0}


def _preflight(corpus: Path, cap: int):
    """Load every corpus file up front so a broken input fails fast with exit 2."""
    for name in sorted(set(BUNDLED_RINGS.values())):
        _load_ring(str(corpus / name), cap=cap)
    _load_group(str(corpus / "example_group.json"))
    for n in (1, 2, 3):
        _load_datum(str(corpus / f"datum_delta{n}.json"))


def cmd_suite(args):
    corpus = Path(args.corpus) if args.corpus else corpus_dir()
    cap = args.cap or 8
    _preflight(corpus, cap)
    entries = suite_entries()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_run_entry, e, str(corpus), cap, args.budget) for e in entries]
            results = [f.result() for f in futures]
    else:
        results = [_run_entry(e, str(corpus), cap, args.budget) for e in entries]
    errors = [r for r in results if r["status"] == "ERROR"]
    if errors:
        raise InputError(errors[0]["error"])
    timings = {r["name"]: r.pop("seconds") for r in results}
    counts = {s: sum(r["status"] == s for r in results) for s in ("PASS", "FAIL", "INCONCLUSIVE")}
    verdicts = {"all_pass": counts["FAIL"] == 0, **{k.lower(): v for k, v in counts.items()}}
    return {"corpus": str(corpus) if args.corpus else "bundled", "cap": cap}, verdicts, {"results": results}, timings


# ---------------------------------------------------------------------------
# driver


def _common(top: bool) -> argparse.ArgumentParser:
    # subcommands repeat the flags without defaults so they never reset a flag given before the verb
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", default=d(False), help="emit a JSON report")
    common.add_argument("--cap", type=_positive, default=d(None), help="gamma-filtration cap (default 8)")
    common.add_argument("--budget", type=_positive, default=d(None), help="step budget for orbit enumeration")
    common.add_argument("--jobs", type=_positive, default=d(1), help="parallel workers (paper-suite)")
    return common


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _ell(text: str) -> int:
    v = _positive(text)
    if v < 2:
        raise argparse.ArgumentTypeError("ell must be >= 2")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _common(False)
    parser = argparse.ArgumentParser(prog="kperf", description="Localization, Adams operations and perfection checks.",
                                     parents=[_common(True)], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"kperf {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, fn, sp=sub, **kw):
        p = sp.add_parser(name, parents=[common], allow_abbrev=False, **kw)
        p.set_defaults(func=fn, verb_name=name)
        return p

    p = verb("lemell-check", cmd_lemell, help="three-condition test for colim = localization")
    p.add_argument("--group", help="group JSON (optional if the endo file carries it)")
    p.add_argument("--endo", required=True, help="endomorphism JSON")
    p.add_argument("--ell", type=_ell, required=True)

    p = verb("colim-equal", cmd_colim_equal, help="equality of two elements of colim_theta A")
    p.add_argument("--group")
    p.add_argument("--endo", required=True)
    p.add_argument("--x", required=True, help="JSON list of generator coordinates")
    p.add_argument("--i", type=int, default=0, help="stage of x")
    p.add_argument("--y", required=True)
    p.add_argument("--j", type=int, default=0, help="stage of y")

    p = verb("localize", cmd_localize, help="isomorphism class of A[1/ell]")
    p.add_argument("--group", required=True)
    p.add_argument("--ell", type=_ell, required=True)

    lam = sub.add_parser("lambda", help="lambda-ring operations", allow_abbrev=False).add_subparsers(dest="lambda_verb", required=True)
    ring_help = "ring JSON path or bundled name (" + ", ".join(sorted(BUNDLED_RINGS)) + ")"
    p = verb("load", cmd_lambda_load, lam, help="validate a ring description")
    p.add_argument("--ring", required=True, help=ring_help)
    p = verb("adams", cmd_lambda_adams, lam, help="psi^n of an element")
    p.add_argument("--ring", required=True, help=ring_help)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--element", required=True, help="name, coordinates, or expression like '1 - x'")
    p = verb("gamma-filtration", cmd_lambda_gamma, lam, help="gamma filtration on the augmentation kernel")
    p.add_argument("--ring", required=True, help=ring_help)
    p.add_argument("--element", help="list gamma^0..gamma^cap of this element instead")
    p = verb("verify-prop", cmd_lambda_verify, lam, help="colim along psi^ell versus localization of ker eps")
    p.add_argument("--ring", required=True, help=ring_help)
    p.add_argument("--ell", type=_ell, required=True)

    perf = sub.add_parser("perfection", help="units model and K-group data", allow_abbrev=False).add_subparsers(dest="perf_verb", required=True)
    for name, fn in (("k1-units", cmd_k1), ("ptorsion", cmd_ptorsion)):
        p = verb(name, fn, perf)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
    p = verb("negk", cmd_negk, perf, help="p^i-rescaled Frobenius on a negative K-group datum")
    p.add_argument("--datum", required=True)
    p.add_argument("--p", type=int, required=True)
    p = verb("k0-split", cmd_k0, perf, help="predicted K_0 of the perfection from a degree-0 datum")
    p.add_argument("--datum", required=True)
    p.add_argument("--c", type=int, required=True, help="rank of H_0")
    p.add_argument("--p", type=int, required=True)

    p = verb("paper-suite", cmd_suite, help="run the bundled regression examples")
    p.add_argument("--corpus", help="directory replacing the bundled corpus")
    return parser


def _full_verb(args) -> str:
    for group in ("lambda_verb", "perf_verb"):
        if getattr(args, group, None):
            return f"{args.verb} {getattr(args, group)}"
    return args.verb


def _text(report: dict) -> str:
    lines = [f"{report['verb']}"]
    for k, v in report["inputs"].items():
        if v is not None:
            lines.append(f"  input {k}: {v}")
    for k, v in report["verdicts"].items():
        lines.append(f"  {k}: {v}")
    w = report["witnesses"]
    if "results" in w:
        for r in w["results"]:
            lines.append(f"  [{r['status']}] {r['name']}")
    else:
        for k, v in w.items():
            if k not in report["verdicts"]:
                lines.append(f"  {k}: {v}")
    return "\n".join(lines)


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    verb = _full_verb(args)
    t0 = time.perf_counter()
    try:
        result = args.func(args)
    except (InputError, LambdaRingError, PerfectionError, AbelianGroupError, BudgetExceeded) as exc:
        print(f"kperf {verb}: error: {exc}", file=err)
        if args.json:
            print(dumps({"verb": verb, "error": str(exc), "version": __version__}), file=out)
        return EXIT_INPUT
    inputs, verdicts, witnesses, extra = result
    timings = {"total_seconds": round(time.perf_counter() - t0, 6)}
    computational = extra is True
    if isinstance(extra, dict):
        timings["entries"] = {k: round(v, 6) for k, v in extra.items()}
    report = {"verb": verb, "inputs": inputs, "verdicts": verdicts, "witnesses": witnesses,
              "timings": timings, "version": __version__}
    print(dumps(report) if args.json else _text(report), file=out)
    if computational:
        return EXIT_OK
    return EXIT_OK if all(_positive_verdict(k, v) for k, v in verdicts.items()) else EXIT_NEGATIVE


def _positive_verdict(key: str, value) -> bool:
    if isinstance(value, bool):
        return value
    return True  # counts and labels carry no verdict


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
