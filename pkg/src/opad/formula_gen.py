"""Signed cup_i and bracket formulas read off smooth lattice paths.

A formula is a signed sum of terms ``E(f1)(a) * E(f2)(b)`` (or the reverse
product).  Terms are kept merged and in a canonical order so formulas can be
compared for equality and printed stably.
"""

from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Iterable

from .lattice_ops import enumerate_smooth_lp, project_to_m, sign
from .simplicial_core import (
    OrdinalMap,
    codegeneracy,
    coface,
    compose,
    generator_word,
    identity,
    parity_sign,
)

MINUS = "−"


@dataclass(frozen=True)
class Term:
    coeff: int
    f1: OrdinalMap
    f2: OrdinalMap
    order: str = "ab"  # "ab": E(f1)(a) first; "ba": E(f2)(b) first

    def __post_init__(self) -> None:
        if self.order not in ("ab", "ba"):
            raise ValueError(f"order must be 'ab' or 'ba', got {self.order!r}")
        if self.f1.cod != self.f2.cod:
            raise ValueError("both maps must land in the same degree")

    def key(self) -> tuple:
        return (self.order, self.f1.values, self.f2.values)


@dataclass(frozen=True)
class Formula:
    p: int
    q: int
    out_degree: int
    terms: tuple[Term, ...]

    def __post_init__(self) -> None:
        for t in self.terms:
            if t.f1.dom != self.p or t.f2.dom != self.q or t.f1.cod != self.out_degree:
                raise ValueError(f"term {t} does not match degrees ({self.p},{self.q})->{self.out_degree}")
            if type(t.coeff) is not int or t.coeff not in (1, -1):
                raise ValueError(f"coefficient {t.coeff} is not a unit sign")

    def __len__(self) -> int:
        return len(self.terms)

    def text(self) -> str:
        return format_formula(self)

    def __str__(self) -> str:
        return self.text()

    def to_json(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "q": self.q,
            "out_degree": self.out_degree,
            "terms": [
                {"coeff": t.coeff, "f1": list(t.f1.values), "f2": list(t.f2.values), "order": t.order}
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Formula":
        out = data["out_degree"]
        terms = [
            Term(int(t["coeff"]), OrdinalMap(data["p"], out, t["f1"]), OrdinalMap(data["q"], out, t["f2"]), t["order"])
            for t in data["terms"]
        ]
        return cls(data["p"], data["q"], out, tuple(terms))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def make_formula(p: int, q: int, out: int, terms: Iterable[Term]) -> Formula:
    """Merge like terms, drop cancellations and sort canonically."""
    acc: dict[tuple, int] = defaultdict(int)
    reps: dict[tuple, Term] = {}
    for t in terms:
        acc[t.key()] += t.coeff
        reps.setdefault(t.key(), t)
    merged = []
    for k in sorted(acc):
        c = acc[k]
        if c == 0:
            continue
        if c not in (1, -1):
            raise ValueError(f"coefficient {c} after merging; formulas carry unit signs only")
        t = reps[k]
        merged.append(Term(c, t.f1, t.f2, t.order))
    return Formula(p, q, out, tuple(merged))


# text form


def map_text(f: OrdinalMap, var: str) -> str:
    """``d4d2(a)`` style; the rightmost operator acts first."""
    if f.is_identity():
        return var
    ops = "".join(f"{k}{i}" for k, i in reversed(generator_word(f)))
    return f"{ops}({var})"


def term_text(t: Term) -> str:
    a, b = map_text(t.f1, "a"), map_text(t.f2, "b")
    body = f"{a} {b}" if t.order == "ab" else f"{b} {a}"
    return ("+ " if t.coeff > 0 else f"{MINUS} ") + body


def format_formula(F: Formula) -> str:
    return " ".join(term_text(t) for t in F.terms) if F.terms else "0"


_FACTOR = re.compile(r"^((?:[ds]\d+)*)\(([ab])\)$|^([ab])$")


def _parse_factor(tok: str, p: int, q: int) -> tuple[str, OrdinalMap]:
    m = _FACTOR.match(tok)
    if not m:
        raise ValueError(f"cannot parse factor {tok!r}")
    var = m.group(3) or m.group(2)
    dom = p if var == "a" else q
    if m.group(3):
        return var, identity(dom)
    ops = re.findall(r"([ds])(\d+)", m.group(1))
    f = identity(dom)
    for kind, i in reversed(ops):
        g = coface(int(i), f.cod) if kind == "d" else codegeneracy(int(i), f.cod)
        f = compose(g, f)
    return var, f


def parse_formula(p: int, q: int, text: str) -> Formula:
    """Inverse of :func:`format_formula`; ``-`` and the minus sign are both accepted."""
    toks = text.replace(MINUS, "-").split()
    terms: list[Term] = []
    k = 0
    out = None
    while k < len(toks):
        s = toks[k]
        if s not in "+-":
            raise ValueError(f"expected a sign at token {k}: {s!r}")
        v1, g1 = _parse_factor(toks[k + 1], p, q)
        v2, g2 = _parse_factor(toks[k + 2], p, q)
        if {v1, v2} != {"a", "b"}:
            raise ValueError("each term needs exactly one a and one b")
        fa, fb, order = (g1, g2, "ab") if v1 == "a" else (g2, g1, "ba")
        out = fa.cod if out is None else out
        terms.append(Term(1 if s == "+" else -1, fa, fb, order))
        k += 3
    return make_formula(p, q, out if out is not None else 0, terms)


# generation from smooth lattice paths


def _path_term(psi, coeff: int, order: str) -> Term:
    f1, f2 = project_to_m(psi).maps()
    return Term(coeff, f1, f2, order)


@lru_cache(maxsize=None)
def cup_formula(p: int, q: int, i: int) -> Formula:
    """``a cup_i b``: even smooth paths of complexity ``i+1``."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    even, _ = enumerate_smooth_lp(p, q, i + 1)
    s = parity_sign((p - 1) * (q - 1))
    return make_formula(p, q, p + q - i, (_path_term(psi, s * sign(psi), "ab") for psi in even))


@lru_cache(maxsize=None)
def bracket_formula(p: int, q: int, n_minus_1: int) -> Formula:
    """``beta^(n-1)``: even paths of complexity n give ``a..b`` terms, odd ones ``b..a`` terms."""
    n = n_minus_1 + 1
    if n < 2:
        raise ValueError("the bracket needs n >= 2")
    even, odd = enumerate_smooth_lp(p, q, n)
    se = parity_sign((p - 1) * (q - 1))
    # the sign that makes brackets of cocycles cocycles
    so = parity_sign(n + p * q)
    terms = [_path_term(psi, se * sign(psi), "ab") for psi in even]
    terms += [_path_term(psi, so * sign(psi), "ba") for psi in odd]
    return make_formula(p, q, p + q - n + 1, terms)


def circ_maps(p: int, q: int, i: int) -> tuple[OrdinalMap, OrdinalMap]:
    """Maps of ``a o_i b``: ``b`` fills slots ``i-1..i-1+q`` of the output."""
    out = p + q - 1
    f1 = OrdinalMap(p, out, tuple(j if j < i else j + q - 1 for j in range(p + 1)))
    f2 = OrdinalMap(q, out, tuple(range(i - 1, i + q)))
    return f1, f2


@lru_cache(maxsize=None)
def gerstenhaber_formula(p: int, q: int) -> Formula:
    """Closed form of the degree one bracket built from insertion maps."""
    if p < 1 or q < 1:
        raise ValueError("p, q >= 1 required")
    terms = []
    for i in range(1, p + 1):
        f1, f2 = circ_maps(p, q, i)
        terms.append(Term(parity_sign(i * (q - 1)), f1, f2, "ab"))
    outer = -parity_sign(p * (q - 1))
    for i in range(1, q + 1):
        g2, g1 = circ_maps(q, p, i)
        terms.append(Term(outer * parity_sign((i - 1) * (p - 1)), g1, g2, "ba"))
    return make_formula(p, q, p + q - 1, terms)


def swap_arguments(F: Formula) -> Formula:
    """The same operation read with its arguments exchanged."""
    flip = {"ab": "ba", "ba": "ab"}
    return make_formula(F.q, F.p, F.out_degree, (Term(t.coeff, t.f2, t.f1, flip[t.order]) for t in F.terms))


def negate(F: Formula, s: int = -1) -> Formula:
    return make_formula(F.p, F.q, F.out_degree, (Term(s * t.coeff, t.f1, t.f2, t.order) for t in F.terms))


# evaluation on instances


def compile(F: Formula, inst) -> Callable:  # noqa: A001 - mirrors the operation name
    """Bilinear map ``E(p) x E(q) -> E(out)`` on a cosimplicial algebra instance."""
    if F.out_degree > inst.max_degree:
        raise ValueError(f"instance stops at degree {inst.max_degree}, formula needs {F.out_degree}")

    def apply(a, b):
        out = inst.zero()
        for t in F.terms:
            x = inst.apply_map(t.f1, a)
            y = inst.apply_map(t.f2, b)
            prod = inst.multiply(F.out_degree, x, y) if t.order == "ab" else inst.multiply(F.out_degree, y, x)
            out = inst.add(out, prod, t.coeff)
        return out

    return apply
