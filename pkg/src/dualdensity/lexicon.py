"""Lexicon files (``*.ddlex.json``) and the built-in Beirut model.

A lexicon is one JSON object::

    {
      "spaces": [{"name": "N", "basis": ["A", "M", "Z", "P"]},
                 {"name": "S", "basis": ["bot", "top"]}],
      "types":  {"n": "N", "s": "S"},
      "words":  [ ...entries... ]
    }

Word entries come in four kinds.  Every vector is a list of
``[label, weight]`` pairs (``label`` is a list of labels for multi-wire
types, ``weight`` defaults to 1):

* mixture: ``{"word", "type", "groups": [{"weight", "senses": [{"weight", "vector"}]}]}``
  builds the dual density Σ_k p'_k |ρ_k> ⊗ conj|ρ_k>;
* pure: ``{"word", "type", "vector"}`` lifts a single vector;
* raw: ``{"word", "type", "layout": "N N* N N*", "data": [...]}`` gives the
  lifted tensor directly, row-major;
* builtin: ``{"word", "builtin": "that_subj" | "that_obj" | "that"}``; ``that``
  registers both readings.

Weights are taken literally (no normalisation), so an entry with two unit
weights is the unweighted sum.
"""

from __future__ import annotations

import copy
import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from . import density as dn
from . import tensor as tc
from .errors import DomainError, NotReducible, ParseError, PregroupSyntaxError, ValidationError
from .pregroup import PregroupType, parse_type
from .semantics import (THAT_OBJ_TYPE, THAT_SUBJ_TYPE, LexiconEntry, TypeAssignment,
                        compose_phrase, that_obj, that_subj)
from .tensor import Space, Tensor, Wire

BUILTINS = {
    "that_subj": (THAT_SUBJ_TYPE, that_subj),
    "that_obj": (THAT_OBJ_TYPE, that_obj),
}


@dataclass(frozen=True)
class Finding:
    word: str | None
    line: int | None
    message: str

    def __str__(self):
        where = f"line {self.line}: " if self.line else ""
        who = f"word {self.word!r}: " if self.word else ""
        return where + who + self.message


@dataclass
class Lexicon:
    spaces: dict[str, Space]
    types: TypeAssignment
    entries: dict[str, list[LexiconEntry]]
    document: dict = field(repr=False, default_factory=dict)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def readings(self, word: str) -> list[LexiconEntry]:
        try:
            return self.entries[word]
        except KeyError:
            raise ValidationError([Finding(word, None, "not in lexicon")]) from None

    def __getitem__(self, word: str) -> LexiconEntry:
        return self.readings(word)[0]

    def dual(self, word: str) -> dn.DualDensity:
        return dn.as_dual(self[word].meaning)


def _line_of(text: str | None, word: str) -> int | None:
    if text is None:
        return None
    m = re.search(r'"word"\s*:\s*' + re.escape(json.dumps(word)), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _weight(x) -> float:
    if isinstance(x, str):
        return float(Fraction(x))
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError(f"weight {x!r} is not a number")
    return float(x)


def _vector(wires: tuple[Wire, ...], terms_json) -> Tensor:
    if not isinstance(terms_json, list) or not terms_json:
        raise ValueError("vector must be a nonempty list of [label, weight] pairs")
    terms = []
    for item in terms_json:
        if isinstance(item, str):
            item = [item]
        if not isinstance(item, list) or not 1 <= len(item) <= 2:
            raise ValueError(f"bad vector term {item!r}")
        labels = item[0] if isinstance(item[0], list) else [item[0]]
        w = _weight(item[1]) if len(item) == 2 else 1.0
        if w < 0:
            raise ValueError(f"negative weight {w} in vector")
        terms.append((tuple(labels), w))
    return tc.vector(wires, terms)


def _parse_layout(text: str, spaces: dict[str, Space]) -> tuple[Wire, ...]:
    wires = []
    for tok in text.split():
        conj = tok.endswith("*")
        name = tok.rstrip("*")
        if name not in spaces:
            raise ValueError(f"layout names unknown space {name!r}")
        wires.append(Wire(spaces[name], conj))
    return tuple(wires)


def _build_entry(w: dict, spaces, ta: TypeAssignment, psd_tol: float) -> list[LexiconEntry]:
    word = w["word"]
    if "builtin" in w:
        names = ["that_subj", "that_obj"] if w["builtin"] == "that" else [w["builtin"]]
        out = []
        for name in names:
            if name not in BUILTINS:
                raise ValueError(f"unknown builtin {name!r}")
            t, make = BUILTINS[name]
            out.append(LexiconEntry(word, t, make(ta), name, w))
        return out

    t = parse_type(w.get("type", ""), ta.keys())
    base = ta.wires(t, lifted=False)
    if "groups" in w:
        groups = []
        for g in w["groups"]:
            senses = [(_weight(s.get("weight", 1)), _vector(base, s["vector"])) for s in g["senses"]]
            gw = _weight(g.get("weight", 1))
            if gw < 0 or any(p < 0 for p, _ in senses):
                raise ValueError("negative weight")
            groups.append((gw, senses))
        d = dn.dual_density_from_mixtures(groups, normalized=False)
        return [LexiconEntry(word, t, d.tensor, "mixture", w)]
    if "vector" in w:
        v = _vector(base, w["vector"])
        return [LexiconEntry(word, t, dn.lift_pure(v, factored=True), "pure", w)]
    if "data" in w:
        layout = _parse_layout(w.get("layout", ""), spaces)
        if layout != ta.wires(t, lifted=True):
            raise ValueError(f"layout [{tc.fmt_wires(layout)}] does not match type {t} "
                             f"([{tc.fmt_wires(ta.wires(t))}])")
        tensor = Tensor(layout, [_weight(x) for x in w["data"]])
        d = dn.DualDensity(tensor)
        if not (dn.is_psd(dn.phi1(d), psd_tol) and dn.is_psd(dn.phi2(d), psd_tol)):
            raise ValueError("raw tensor is not a dual density (a view fails the PSD check)")
        return [LexiconEntry(word, t, tensor, "raw", w)]
    raise ValueError("entry needs one of: groups, vector, data, builtin")


def from_dict(doc: dict, text: str | None = None, psd_tol: float = dn.PSD_TOL) -> Lexicon:
    findings: list[Finding] = []
    if not isinstance(doc, dict) or "spaces" not in doc or "words" not in doc:
        raise ParseError("lexicon must be an object with 'spaces' and 'words'")
    spaces = {}
    for s in doc["spaces"]:
        try:
            spaces[s["name"]] = Space(s["name"], tuple(s["basis"]))
        except (KeyError, TypeError, DomainError) as e:
            findings.append(Finding(None, None, f"bad space declaration {s!r}: {e}"))
    ta = TypeAssignment()
    for base, name in doc.get("types", {"n": "N", "s": "S"}).items():
        if name not in spaces:
            findings.append(Finding(None, None, f"type {base!r} maps to unknown space {name!r}"))
        else:
            ta[base] = spaces[name]
    entries: dict[str, list[LexiconEntry]] = {}
    for w in doc["words"]:
        word = w.get("word") if isinstance(w, dict) else None
        if not word:
            findings.append(Finding(None, None, f"entry without a word name: {w!r}"))
            continue
        try:
            entries.setdefault(word, []).extend(_build_entry(w, spaces, ta, psd_tol))
        except (ValueError, KeyError, TypeError, DomainError, PregroupSyntaxError) as e:
            msg = str(e) if not isinstance(e, KeyError) else f"missing field {e}"
            findings.append(Finding(word, _line_of(text, word), msg))
    if findings:
        raise ValidationError(findings)
    return Lexicon(spaces, ta, entries, copy.deepcopy(doc))


def load(path) -> Lexicon:
    path = Path(path)
    text = path.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    return from_dict(doc, text)


def dumps(lex: Lexicon) -> str:
    return json.dumps(lex.document, indent=2, ensure_ascii=False) + "\n"


def save(lex: Lexicon, path) -> None:
    Path(path).write_text(dumps(lex))


def validate(lex: Lexicon, tol: float = dn.PSD_TOL) -> list[Finding]:
    """Re-check every entry; an empty list means the lexicon is sound."""
    findings = []
    for word, readings in lex.entries.items():
        for e in readings:
            if tuple(e.meaning.wires) != lex.types.wires(e.type):
                findings.append(Finding(word, None, "meaning layout does not match its type"))
                continue
            if e.provenance in ("that_subj", "that_obj"):
                continue
            d = dn.as_dual(e.meaning)
            bad = []
            for name, view in (("phi1", dn.phi1), ("phi2", dn.phi2)):
                try:
                    if not dn.is_psd(view(d), tol):
                        bad.append(name)
                except DomainError as err:
                    bad.append(f"{name} ({err})")
            if bad:
                findings.append(Finding(word, None, f"not positive semidefinite: {', '.join(bad)}"))
    return findings


# --- the Beirut model ---------------------------------------------------------

def _group(*labels):
    return {"weight": 1, "senses": [{"weight": 1, "vector": [[l, 1]]} for l in labels]}


BEIRUT_DOC = {
    "spaces": [
        {"name": "N", "basis": ["A", "M", "Z", "P"]},
        {"name": "S", "basis": ["bot", "top"]},
    ],
    "types": {"n": "N", "s": "S"},
    "words": [
        {"word": "Beirut", "type": "n", "groups": [_group("A", "M"), _group("Z", "P")]},
        {"word": "Beirut-city", "type": "n", "groups": [_group("A", "M")]},
        {"word": "Beirut-band", "type": "n", "groups": [_group("Z", "P")]},
        {"word": "Beirut-city-A", "type": "n", "vector": [["A", 1]]},
        {"word": "Beirut-city-M", "type": "n", "vector": [["M", 1]]},
        {"word": "Beirut-band-Z", "type": "n", "vector": [["Z", 1]]},
        {"word": "Beirut-band-P", "type": "n", "vector": [["P", 1]]},
        {"word": "play-at", "type": "n^r s n^l",
         "vector": [[["Z", "top", "A"], 1], [["P", "top", "A"], 1]]},
        {"word": "plays-at", "type": "n^r s n^l",
         "vector": [[["Z", "top", "A"], 1], [["P", "top", "A"], 1]]},
        {"word": "that", "builtin": "that"},
    ],
}


def builtin_beirut() -> Lexicon:
    return from_dict(copy.deepcopy(BEIRUT_DOC))


def builtin_path() -> Path:
    return Path(str(resources.files("dualdensity") / "data" / "beirut.ddlex.json"))


def resolve(name_or_path: str) -> Lexicon:
    """``beirut`` names the built-in model; anything else is a file path."""
    if name_or_path == "beirut":
        return builtin_beirut()
    return load(name_or_path)


def compose(lex: Lexicon, tokens, target, base: float = 2):
    """Compose a phrase from lexicon words.

    Words with several readings (``that``) are tried in the order they were
    registered, subject reading first; the first combination that reduces
    to ``target`` is used.
    """
    if isinstance(target, str):
        target = parse_type(target, lex.types.keys())
    options = [lex.readings(t) for t in tokens]
    for combo in itertools.product(*options):
        try:
            result, diag = compose_phrase(list(combo), target, lex.types, base)
        except NotReducible:
            continue
        return result, diag, list(combo)
    raise NotReducible(f"{' '.join(tokens)!r} does not reduce to {target} under any reading")
