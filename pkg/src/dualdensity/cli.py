"""Command-line interface.

JSON goes to stdout, a one-line human summary to stderr.  Exit codes: 0 on
success, 1 on domain errors (ungrammatical input, invalid lexicon, ...),
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import density as dn
from . import tensor as tc
from .demo import beirut_demo, noun_matches
from .errors import DomainError
from .lexicon import compose, resolve, validate
from .pregroup import parse_type, parse_types, reduce


def _base(args):
    return "e" if args.base == "e" else 2


def _round(x):
    return None if x is None else round(float(x), 12)


def cmd_reduce(args):
    d = reduce(parse_types(args.types), parse_type(args.target))
    links = [[i + 1, j + 1] for i, j in d.links]
    out = {"result": "reducible", "links": links,
           "diagnostics": {"survivors": [s + 1 for s in d.survivors],
                           "simples": [str(p.simple) for p in d.positions]}}
    return out, f"reduces to {d.target} with links {links}"


def cmd_compose(args):
    lex = resolve(args.lexicon)
    tokens = args.phrase.split()
    result, diag, readings = compose(lex, tokens, args.target, _base(args))
    info = diag.as_dict()
    out = {
        "result": {"wires": [str(w) for w in result.wires],
                   "readings": [r.provenance for r in readings],
                   "proportional_to": noun_matches(lex, result, args.tol)},
        "links": info["links"],
        "entropies": {"S1": _round(info["entropy1"]), "S2": _round(info["entropy2"])},
        "diagnostics": {"trace": _round(info["trace"]), "survivors": info["survivors"]},
    }
    return out, f"composed {' '.join(tokens)!r}; S1={out['entropies']['S1']} S2={out['entropies']['S2']}"


def cmd_entail(args):
    lex = resolve(args.lexicon)
    a, b = lex.dual(args.word_a), lex.dual(args.word_b)
    k = dn.graded_entailment(dn.reduced_operator(a), dn.reduced_operator(b), tol=dn.PSD_TOL)
    k1 = dn.graded_entailment(dn.phi1(a), dn.phi1(b), tol=dn.PSD_TOL)
    out = {"result": {"word_a": args.word_a, "word_b": args.word_b},
           "k": round(k, 9),
           "diagnostics": {"operator": "reduced", "k_phi1": round(k1, 9)}}
    return out, f"k({args.word_a} ⊑ {args.word_b}) = {k:.6f}"


def cmd_entropy(args):
    lex = resolve(args.lexicon)
    d = lex.dual(args.word)
    s1, s2 = dn.entropies(d, _base(args))
    out = {"result": {"word": args.word},
           "entropies": {"S1": _round(s1), "S2": _round(s2)},
           "diagnostics": {"purity1": _round(dn.purity(dn.phi1(d))),
                           "purity2": _round(dn.purity(dn.phi2(d))),
                           "base": args.base}}
    return out, f"{args.word}: S1={s1:.6f} S2={s2:.6f}"


def cmd_demo(args):
    res = beirut_demo(args.tol, _base(args))
    lines = [f"{p['phrase']}: expected {p['expected']} -> "
             f"{'match' if p['proportional_to_expected'] else 'no match'} "
             f"(proportional to {sorted(p['proportional_to']) or 'nothing'})"
             for p in res["phrases"]]
    return {"result": res, "diagnostics": {"tol": args.tol}}, "\n".join(lines)


def cmd_validate(args):
    lex = resolve(args.lexicon)
    findings = validate(lex)
    out = {"result": {"valid": not findings, "findings": [str(f) for f in findings]},
           "diagnostics": {"words": len(lex.entries)}}
    if findings:
        out["error"] = "ValidationError"
    return out, "valid" if not findings else f"{len(findings)} finding(s)"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=tc.DEFAULT_TOL)
    common.add_argument("--base", choices=["2", "e"], default="2")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON")
    common.set_defaults(pretty=False)

    p = argparse.ArgumentParser(prog="dualdensity", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", parents=[common], help="find a pregroup reduction")
    s.add_argument("--types", required=True, help='comma-separated word types, e.g. "n, n^r s n^l, n"')
    s.add_argument("--target", required=True)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("compose", parents=[common], help="compose a phrase meaning")
    s.add_argument("--lexicon", required=True, help="path to a .ddlex.json file, or 'beirut'")
    s.add_argument("--phrase", required=True)
    s.add_argument("--target", default="n")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("entail", parents=[common], help="graded entailment between two words")
    s.add_argument("--lexicon", required=True)
    s.add_argument("--word-a", required=True)
    s.add_argument("--word-b", required=True)
    s.set_defaults(func=cmd_entail)

    s = sub.add_parser("entropy", parents=[common], help="the two entropies of a word")
    s.add_argument("--lexicon", required=True)
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser("demo", parents=[common], help="run a built-in demonstration")
    s.add_argument("name", choices=["beirut"])
    s.set_defaults(func=cmd_demo)

    s = sub.add_parser("validate", parents=[common], help="check a lexicon file")
    s.add_argument("--lexicon", required=True)
    s.set_defaults(func=cmd_validate)
    return p


def _emit(obj, pretty: bool):
    print(json.dumps(obj, indent=2 if pretty else None, ensure_ascii=False, sort_keys=True))


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, summary = args.func(args)
    except (DomainError, OSError) as e:
        kind = e.kind if isinstance(e, DomainError) else "IoError"
        _emit({"error": kind, "message": str(e)}, args.pretty)
        print(f"error: {kind}: {e}", file=sys.stderr)
        return 1
    _emit(out, args.pretty)
    print(summary, file=sys.stderr)
    return 1 if "error" in out else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
