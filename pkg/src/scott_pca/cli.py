"""``scott-pca`` command line."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import assembly as asm
from . import paths, sierpinski
from .coding import pair
from .enumset import (
    EnumSet, EnumerationLimit, Literal, apply, finset_to_json, from_json, graph_cap,
    set_eq_upto,
)
from .lam import TermSyntaxError, UnboundVariable, interpret, numeral, parse_term, term_from_json
from .lam.semantics import default_constants

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


# -- helpers -------------------------------------------------------------------------

def _show_set(p) -> str:
    return "{" + ",".join(str(e) for e in sorted(p)) + "}"


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def _load_assembly(path: str) -> asm.FiniteAssembly:
    obj = _load_json(path)
    try:
        return asm.assembly_from_json(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{path}: not an assembly ({e})") from None


def _term(text: str, jmax: int, env=None) -> EnumSet:
    return interpret(parse_term(text, constants=set(default_constants(jmax)) | set(env or {})),
                     env, jmax=jmax)


def _tracker(obj, jmax: int) -> EnumSet:
    if isinstance(obj, str):
        return _term(obj, jmax)
    if isinstance(obj, dict) and "term" in obj:
        return interpret(term_from_json(obj["term"]), jmax=jmax)
    consts = default_constants(jmax)
    return from_json(obj, lambda name: consts[name])


def _labels(X: asm.FiniteAssembly) -> dict:
    return {str(x): x for x in X.carrier}


def _verdict_json(v) -> dict:
    out = {"verdict": type(v).__name__}
    for key, val in vars(v).items():
        out[key] = _plain(val)
    return out


def _plain(val):
    if isinstance(val, frozenset):
        return finset_to_json(val)
    if isinstance(val, (tuple, list)):
        return [_plain(v) for v in val]
    if isinstance(val, dict):
        return {str(k): _plain(v) for k, v in val.items()}
    if isinstance(val, (str, int, bool)) or val is None:
        return val
    return str(val)


def _exit_for(v) -> int:
    name = type(v).__name__
    if name in ("Verified", "Accepted", "AgreeThrough", "Lands", "Yes"):
        return EXIT_OK
    if name in ("Refuted", "Violation") or getattr(v, "definitive", False):
        return EXIT_FAIL
    return EXIT_UNKNOWN


def _worst(codes) -> int:
    codes = list(codes)
    if EXIT_FAIL in codes:
        return EXIT_FAIL
    if EXIT_UNKNOWN in codes:
        return EXIT_UNKNOWN
    return EXIT_OK


def _partition_json(part) -> list:
    return sorted(sorted(str(x) for x in b) for b in part.blocks)


# -- verbs ---------------------------------------------------------------------------

def cmd_eval(a):
    value = _term(a.term, a.jmax)
    now, later = value.stage(a.fuel), value.stage(a.budget)
    report = {"term": a.term, "fuel": a.fuel, "budget": a.budget,
              "elements": finset_to_json(now), "stable": now == later}
    return report, _show_set(now), EXIT_OK


def cmd_apply(a):
    value = _term(a.function, a.jmax)
    for arg in a.args:
        value = apply(value, _term(arg, a.jmax))
    now = value.stage(a.fuel)
    report = {"function": a.function, "args": a.args, "fuel": a.fuel,
              "elements": finset_to_json(now), "stable": now == value.stage(a.budget)}
    return report, _show_set(now), EXIT_OK


def cmd_check_tracker(a):
    obj = _load_json(a.file)
    try:
        src = asm.assembly_from_json(obj["source"])
        tgt = asm.assembly_from_json(obj["target"])
        sl, tl = _labels(src), _labels(tgt)
        m = {sl[str(k)]: tl[str(v)] for k, v in obj["map"].items()}
        tracker = _tracker(obj["tracker"], a.jmax)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{a.file}: not a morphism ({e})") from None
    f = asm.check_tracker(asm.Morphism(src, tgt, m, tracker), a.fuel, a.budget)
    report = {"file": a.file, "fuel": a.fuel, "budget": a.budget, **_verdict_json(f.verdict)}
    return report, type(f.verdict).__name__, _exit_for(f.verdict)


def cmd_classify(a):
    X = _load_assembly(a.file)
    c = asm.classify_assembly(X)
    od = sierpinski.is_order_discrete(X)
    report = {"partitioned": c.partitioned, "modest": c.modest, "discrete": c.discrete,
              "join_property": c.join_property, "order_discrete": bool(od)}
    if not od:
        report["comparable"] = _plain(od.witness)
    text = " ".join(f"{k}={'yes' if v else 'no'}" for k, v in report.items() if isinstance(v, bool))
    return report, text, EXIT_OK


def cmd_reflect(a):
    X = _load_assembly(a.file)
    part, quot = sierpinski.od_reflection(X)
    is_identity = all(len(b) == 1 for b in part.blocks)
    report = {"blocks": _partition_json(part), "identity": is_identity,
              "links": [_plain(link) for link in part.links],
              "quotient_order_discrete": bool(sierpinski.is_order_discrete(quot))}
    text = " | ".join(",".join(b) for b in report["blocks"])
    return report, text, EXIT_OK


def cmd_lift(a):
    X = _load_assembly(a.file)
    LX = sierpinski.lift_object(X)
    checks = {
        "eta": sierpinski.eta(X, a.fuel, a.budget).verdict,
        "mu": sierpinski.mu(X, a.fuel, a.budget).verdict,
        "chi": sierpinski.chi_classifier(X, a.fuel, a.budget).verdict,
    }
    report = {"lift": LX.to_json(), "bottom": str(LX.bottom),
              "checks": {k: _verdict_json(v) for k, v in checks.items()},
              "suggested_budget": sierpinski.lift_jmax(sierpinski.lift_object(LX))}
    text = " ".join(f"{k}={type(v).__name__}" for k, v in checks.items())
    return report, text, _worst(_exit_for(v) for v in checks.values())


def cmd_paths(a):
    X = _load_assembly(a.file)
    comps = paths.path_components(X, a.fuel, a.budget)
    refl, _ = sierpinski.od_reflection(X)
    agree = comps.as_sets() == refl.as_sets()
    report = {"components": _partition_json(comps), "agrees_with_reflection": agree}
    text = " | ".join(",".join(b) for b in report["components"])
    return report, text, EXIT_OK if agree else EXIT_FAIL


def cmd_space(a):
    obj = _load_json(a.file)
    try:
        space = paths.space_from_json(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{a.file}: not a space ({e})") from None
    try:
        rep = paths.embed_finite_t0(space)
    except paths.NotT0 as e:
        report = {"t0": False, "indistinguishable": [str(p) for p in e.pair]}
        return report, str(e), EXIT_FAIL
    report = {"t0": True, "embedding": rep.assembly.to_json()["E"]}
    if a.report:
        report.update({
            "order": sorted([str(x), str(y)] for x, y in rep.order),
            "t1": rep.t1, "order_discrete": rep.order_discrete,
            "components": _partition_json(rep.components),
            "partitioned": rep.partitioned, "modest": rep.modest,
        })
        text = (f"t1={'yes' if rep.t1 else 'no'} order_discrete={'yes' if rep.order_discrete else 'no'} "
                f"components={len(rep.components.blocks)}")
    else:
        text = " ".join(f"{x}:{_show_set(space.code(x))}" for x in space.points)
    return report, text, EXIT_OK


# -- demos ---------------------------------------------------------------------------

def demo_chi_iso(a):
    """Trackers of ``S ~= Sigma^N`` for ``U <= {0..m}`` and ``n <= m``."""
    m = a.max_n
    jmax = max(a.jmax, a.budget)
    forward, backward = sierpinski.chi_iso_trackers(jmax)
    failures, unknown = [], []
    with graph_cap(jmax):
        for code in range(1 << (m + 1)):
            u = frozenset(i for i in range(m + 1) if code >> i & 1)
            U = Literal(u)
            for n in range(m + 1):
                want = Literal({1} if n in u else ())
                v = set_eq_upto(forward(U, numeral(n)), want, a.fuel, a.budget)
                if not v:
                    (failures if v.definitive else unknown).append(["chi", sorted(u), n])
            v = set_eq_upto(backward(forward(U)), U, a.fuel, a.budget)
            if not v:
                (failures if v.definitive else unknown).append(["roundtrip", sorted(u)])
    report = {"demo": "prop3.3", "max_n": m, "fuel": a.fuel, "budget": a.budget,
              "failures": failures, "inconclusive": unknown,
              "needed_budget": pair(1 << m, 1)}
    code = EXIT_FAIL if failures else EXIT_UNKNOWN if unknown else EXIT_OK
    text = {EXIT_OK: "all checks agree", EXIT_FAIL: f"{len(failures)} failures",
            EXIT_UNKNOWN: f"{len(unknown)} inconclusive (try --budget {pair(1 << m, 1)})"}[code]
    return report, text, code


def _candidate(spec, builtin: dict, jmax: int) -> EnumSet:
    if spec in builtin:
        return builtin[spec]
    return _term(spec, jmax)


def demo_union_falsifier(a):
    builtin = sierpinski.falsifier_candidates(a.jmax)
    if a.candidates:
        entries = _load_json(a.candidates)
        if not isinstance(entries, list):
            raise UsageError(f"{a.candidates}: expected a list of candidates")
    else:
        entries = [{"name": g, "F": "union", "G": g}
                   for g in ("const0", "const1", "identity", "shift-down", "left-on-marker")]
    results, codes = [], []
    for i, e in enumerate(entries):
        try:
            F = _candidate(e["F"], builtin, a.jmax)
            G = _candidate(e["G"], builtin, a.jmax)
        except (KeyError, TypeError) as err:
            raise UsageError(f"candidate {i}: missing field {err}") from None
        v = sierpinski.union_failure_falsifier(F, G, a.budget)
        results.append({"name": e.get("name", f"#{i}"), **_verdict_json(v)})
        codes.append(EXIT_FAIL if isinstance(v, sierpinski.Violation) else EXIT_UNKNOWN)
    report = {"demo": "prop6.1", "budget": a.budget, "candidates": results}
    text = "\n".join(f"{r['name']}: {r['verdict']}" +
                     (f" (condition {r['condition']} at U={_show_set(r['U'])}, V={_show_set(r['V'])})"
                      if r["verdict"] == "Violation" else "") for r in results)
    # a violation for every candidate is the expected outcome
    code = EXIT_UNKNOWN if EXIT_UNKNOWN in codes else EXIT_FAIL
    return report, text, code


def demo_lift_one(a):
    """``L(1)`` against ``Sigma`` through the explicit bijection of realizers."""
    f, g = sierpinski.lift_one_iso(a.fuel, a.budget)
    report = {"demo": "lift-one", "to_sigma": _verdict_json(f.verdict),
              "from_sigma": _verdict_json(g.verdict)}
    text = f"L(1)->Sigma {type(f.verdict).__name__}, Sigma->L(1) {type(g.verdict).__name__}"
    return report, text, _worst([_exit_for(f.verdict), _exit_for(g.verdict)])


DEMOS = {"prop3.3": demo_chi_iso, "prop6.1": demo_union_falsifier, "lift-one": demo_lift_one}


def cmd_demo(a):
    return DEMOS[a.name](a)


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--fuel", type=int, default=8, help="stage used for answers (default 8)")
    common.add_argument("--budget", type=int, default=16,
                        help="stage used to look for witnesses (default 16)")
    common.add_argument("--jmax", type=int, default=12, help="graph enumeration cap (default 12)")
    common.add_argument("--json", action="store_true", help="print a JSON report")

    parser = _Parser(prog="scott-pca", description="Graph model, assemblies and paths.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate a lambda term")
    p.add_argument("term")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("apply", parents=[common], help="apply a term to argument terms")
    p.add_argument("function")
    p.add_argument("args", nargs="+")
    p.set_defaults(run=cmd_apply)

    p = sub.add_parser("check-tracker", parents=[common], help="verify a morphism file")
    p.add_argument("file")
    p.set_defaults(run=cmd_check_tracker)

    for verb, fn, desc in (("classify", cmd_classify, "partitioned/modest/discrete flags"),
                           ("reflect", cmd_reflect, "order-discrete reflection"),
                           ("lift", cmd_lift, "lift object and monad checks"),
                           ("paths", cmd_paths, "path components")):
        p = sub.add_parser(verb, parents=[common], help=desc)
        p.add_argument("file")
        p.set_defaults(run=fn)

    p = sub.add_parser("space", parents=[common], help="embed a finite T0 space")
    p.add_argument("file")
    p.add_argument("--report", action="store_true")
    p.set_defaults(run=cmd_space)

    p = sub.add_parser("demo", parents=[common], help="run a packaged demonstration")
    p.add_argument("name", choices=sorted(DEMOS))
    p.add_argument("--candidates", help="JSON list of {name, F, G}")
    p.add_argument("--max-n", type=int, default=2, help="largest index for the chi demo (default 2)")
    p.set_defaults(run=cmd_demo)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if min(a.fuel, a.budget, a.jmax) < 0:
            raise UsageError("--fuel, --budget and --jmax must be non-negative")
        if a.budget < a.fuel:
            raise UsageError(f"--budget ({a.budget}) must be at least --fuel ({a.fuel})")
        with graph_cap(a.jmax):
            report, text, code = a.run(a)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except TermSyntaxError as e:
        print(f"syntax error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UnboundVariable as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationLimit as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    if a.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
