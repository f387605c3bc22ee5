"""The Beirut disambiguation run, as plain data."""

from __future__ import annotations

from . import density as dn
from . import tensor as tc
from .lexicon import Lexicon, builtin_beirut, compose

BEIRUT_PHRASES = (
    (("Beirut", "that", "plays-at", "Beirut"), "Beirut-band"),
    (("Beirut", "that", "Beirut", "plays-at"), "Beirut-city"),
)


def _rounded(x, nd=12):
    return None if x is None else round(float(x), nd)


def noun_matches(lex: Lexicon, result, tol: float) -> dict[str, float]:
    """Every single-noun lexicon word the result is proportional to, with the factor."""
    out = {}
    for word in lex.entries:
        e = lex[word]
        if tuple(e.meaning.wires) != tuple(result.wires):
            continue
        lam = tc.proportional_to(result, e.meaning, tol)
        if lam is not None:
            out[word] = _rounded(lam)
    return out


def beirut_demo(tol: float = tc.DEFAULT_TOL, base: float = 2) -> dict:
    lex = builtin_beirut()
    s1, s2 = dn.entropies(lex.dual("Beirut"), base)
    phrases = []
    for tokens, expected in BEIRUT_PHRASES:
        result, diag, readings = compose(lex, list(tokens), "n", base)
        lam = tc.proportional_to(result, lex[expected].meaning, tol)
        k = dn.graded_entailment(dn.reduced_operator(result), dn.reduced_operator(lex.dual(expected)))
        phrases.append({
            "phrase": " ".join(tokens),
            "readings": [r.provenance for r in readings],
            "links": [[i + 1, j + 1] for i, j in diag.diagram.links],
            "expected": expected,
            "proportional_to_expected": lam is not None,
            "factor": _rounded(lam),
            "proportional_to": noun_matches(lex, result, tol),
            "entailment_k_into_expected": _rounded(k, 9),
            "entropy1": _rounded(diag.entropy1),
            "entropy2": _rounded(diag.entropy2),
        })
    return {
        "before": {"word": "Beirut", "entropy1": _rounded(s1), "entropy2": _rounded(s2)},
        "phrases": phrases,
        "collapse": all(p["entropy1"] is not None and abs(p["entropy1"]) <= tol for p in phrases),
    }
