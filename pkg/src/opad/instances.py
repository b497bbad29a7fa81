"""Concrete instances built from a Lie algebra.

``U(g)`` is modelled in the PBW basis (exponent vectors in the fixed basis
order) truncated at total degree ``D``.  Products are computed exactly over
the rationals and only then cut back to degree ``D``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations_with_replacement, permutations, product
from math import comb, factorial
from pathlib import Path
from typing import Any, Mapping, Sequence

import jsonschema

from .cosim_algebra import (
    CosimplicialAlgebraInstance,
    FieldSpec,
    Vec,
    alt,
    kernel,
    perm_sign,
    vadd,
    vclean,
)

Mono = tuple[int, ...]


# Lie algebras

_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z_]\w*)\s*")


def parse_combination(text: str, names: Sequence[str]) -> dict[int, Fraction]:
    """``"2e - h"`` -> ``{idx(e): 2, idx(h): -1}``; ``"0"`` is the zero vector."""
    text = text.strip()
    if text in ("", "0"):
        return {}
    pos = {n: i for i, n in enumerate(names)}
    out: dict[int, Fraction] = {}
    k = 0
    while k < len(text):
        m = _TERM.match(text, k)
        if not m or m.end() == k:
            raise ValueError(f"cannot parse {text!r} at position {k}")
        sign, coeff, name = m.groups()
        if name not in pos:
            raise ValueError(f"unknown basis element {name!r}")
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        out[pos[name]] = out.get(pos[name], 0) + c
        k = m.end()
    return {i: c for i, c in out.items() if c}


@dataclass
class LieAlgebraSpec:
    """Structure constants ``[e_i, e_j] = sum_k c[i,j][k] e_k`` over a field."""

    names: list[str]
    brackets: dict[tuple[int, int], dict[int, Fraction]]
    field: FieldSpec = field(default_factory=FieldSpec)
    truncation: int = 3
    max_degree: int = 3
    label: str = ""
    complex_kind: str = "forgetful"
    restricted: bool = False

    def __post_init__(self) -> None:
        full: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), v in self.brackets.items():
            if i == j:
                if v:
                    raise ValueError(f"[{self.names[i]},{self.names[i]}] must vanish")
                continue
            neg = {k: -c for k, c in v.items()}
            for key, val in (((i, j), dict(v)), ((j, i), neg)):
                if key in full and full[key] != val:
                    raise ValueError(f"inconsistent brackets for {key}")
                full[key] = val
        self.brackets = full
        bad = self.jacobi_failures()
        if bad:
            raise ValueError(f"Jacobi identity fails on {bad[0]}")

    @property
    def dim(self) -> int:
        return len(self.names)

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        return self.brackets.get((i, j), {})

    def bracket_vec(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c}

    def jacobi_failures(self) -> list[tuple[str, str, str]]:
        fs = self.field
        fails = []
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    tot: dict[int, Fraction] = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = self.bracket(a, b)
                        for key, val in self.bracket_vec(inner, {c: Fraction(1)}).items():
                            tot[key] = tot.get(key, 0) + val
                    if any(fs(v) for v in tot.values()):
                        fails.append((self.names[i], self.names[j], self.names[k]))
        return fails

    @classmethod
    def from_config(cls, data: Mapping[str, Any]) -> "LieAlgebraSpec":
        validate_config(data)
        names = list(data["basis"])
        brackets = {}
        for key, val in data.get("brackets", {}).items():
            m = re.fullmatch(r"\s*\[\s*(\w+)\s*,\s*(\w+)\s*\]\s*", key)
            if not m or m.group(1) not in names or m.group(2) not in names:
                raise ValueError(f"bad bracket key {key!r}")
            brackets[(names.index(m.group(1)), names.index(m.group(2)))] = parse_combination(str(val), names)
        D = int(data.get("truncation", 3))
        return cls(
            names,
            brackets,
            FieldSpec(int(data.get("char", 0))),
            D,
            int(data.get("max_degree", 3)),
            str(data.get("name", "")),
            str(data.get("complex", "forgetful")),
            bool(data.get("restricted", False)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "LieAlgebraSpec":
        with open(path) as fh:
            return cls.from_config(json.load(fh))

    def with_field(self, characteristic: int, truncation: int | None = None) -> "LieAlgebraSpec":
        return LieAlgebraSpec(
            self.names,
            {k: v for k, v in self.brackets.items() if k[0] < k[1]},
            FieldSpec(characteristic),
            self.truncation if truncation is None else truncation,
            self.max_degree,
            self.label,
            self.complex_kind,
            self.restricted,
        )


def load_schema(name: str) -> dict:
    return json.loads(resources.files("opad").joinpath("schemas", name).read_text())


def validate_config(data: Any) -> None:
    """Raise ``jsonschema.ValidationError`` on malformed configs."""
    jsonschema.validate(data, load_schema("lie_algebra.schema.json"))


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("opad").joinpath("fixtures", name)))


def load_fixture(name: str, characteristic: int | None = None, truncation: int | None = None) -> LieAlgebraSpec:
    spec = LieAlgebraSpec.load(fixture_path(name if name.endswith(".json") else name + ".json"))
    if characteristic is None and truncation is None:
        return spec
    return spec.with_field(spec.field.characteristic if characteristic is None else characteristic, truncation)


# truncated universal enveloping algebra


class TruncatedUEA:
    """PBW model of ``U(g)`` in degrees ``<= D``; optionally the restricted quotient."""

    def __init__(self, spec: LieAlgebraSpec, D: int, restricted: bool = False):
        if D < 2:
            raise ValueError("truncation degree must be at least 2")
        self.spec = spec
        self.field = spec.field
        self.D = D
        self.restricted = restricted
        self.d = spec.dim
        p = self.field.characteristic
        if restricted:
            if not p:
                raise ValueError("the restricted model needs a prime characteristic")
            self._check_restricted()
        self.zero_mono: Mono = (0,) * self.d
        monos = [m for deg in range(D + 1) for m in self._monos_of_degree(deg)]
        if restricted:
            monos = [m for m in monos if max(m, default=0) < p]
        self.basis: list[Mono] = monos
        self._mul: dict[tuple[Mono, Mono], dict[Mono, Fraction]] = {}
        self._left: dict[tuple[int, Mono], dict[Mono, Fraction]] = {}

    def _monos_of_degree(self, deg: int) -> list[Mono]:
        out = []
        for combo in combinations_with_replacement(range(self.d), deg):
            e = [0] * self.d
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
        return out

    def _check_restricted(self) -> None:
        # x^p must be central, i.e. ad(x)^p = 0 on the generators
        p = self.field.characteristic
        for i in range(self.d):
            for j in range(self.d):
                v: dict[int, Fraction] = {j: Fraction(1)}
                for _ in range(p):
                    v = self.spec.bracket_vec({i: Fraction(1)}, v)
                if any(self.field(c) for c in v.values()):
                    raise ValueError("ad(x)^p does not vanish; no restricted model with zero p-map")

    @staticmethod
    def degree(m: Mono) -> int:
        return sum(m)

    def in_range(self, m: Mono) -> bool:
        if sum(m) > self.D:
            return False
        return not self.restricted or max(m, default=0) < self.field.characteristic

    def left_generator(self, i: int, m: Mono) -> dict[Mono, Fraction]:
        """``e_i * x^m`` straightened, exact."""
        key = (i, m)
        if key in self._left:
            return self._left[key]
        j = next((k for k, e in enumerate(m) if e), None)
        if j is None or i <= j:
            e = list(m)
            e[i] += 1
            res = {tuple(e): Fraction(1)}
        else:
            rest = list(m)
            rest[j] -= 1
            rest_t = tuple(rest)
            res = {}
            # e_i e_j rest = e_j (e_i rest) + [e_i, e_j] rest
            for mono, c in self.left_generator(i, rest_t).items():
                for mono2, c2 in self.left_generator(j, mono).items():
                    res[mono2] = res.get(mono2, 0) + c * c2
            for k, ck in self.spec.bracket(i, j).items():
                for mono2, c2 in self.left_generator(k, rest_t).items():
                    res[mono2] = res.get(mono2, 0) + ck * c2
            res = {k: c for k, c in res.items() if c}
        self._left[key] = res
        return res

    def multiply_exact(self, a: Mono, b: Mono) -> dict[Mono, Fraction]:
        """PBW product over the rationals, no truncation."""
        key = (a, b)
        if key in self._mul:
            return self._mul[key]
        cur = {b: Fraction(1)}
        letters = [i for i in range(self.d) for _ in range(a[i])]
        for i in reversed(letters):
            nxt: dict[Mono, Fraction] = {}
            for mono, c in cur.items():
                for mono2, c2 in self.left_generator(i, mono).items():
                    nxt[mono2] = nxt.get(mono2, 0) + c * c2
            cur = {k: c for k, c in nxt.items() if c}
        self._mul[key] = cur
        return cur

    def multiply(self, a: Mono, b: Mono) -> dict[Mono, Fraction]:
        """Exact product; in the restricted model ``x_i^p`` is set to zero."""
        res = self.multiply_exact(a, b)
        if self.restricted:
            p = self.field.characteristic
            res = {m: c for m, c in res.items() if max(m, default=0) < p}
        return res

    def coproduct(self, a: Mono) -> dict[tuple[Mono, Mono], int]:
        out = {}
        for b in product(*(range(e + 1) for e in a)):
            c = 1
            for e, k in zip(a, b):
                c *= comb(e, k)
            out[(tuple(b), tuple(e - k for e, k in zip(a, b)))] = c
        return out

    def counit(self, a: Mono) -> int:
        return 1 if not any(a) else 0

    def generator(self, i: int) -> Mono:
        e = [0] * self.d
        e[i] = 1
        return tuple(e)

    def mono_text(self, m: Mono) -> str:
        if not any(m):
            return "1"
        parts = []
        for name, e in zip(self.spec.names, m):
            if e:
                parts.append(name if e == 1 else f"{name}^{e}")
        return "".join(parts) if all(len(n) == 1 for n in self.spec.names) else "*".join(parts)

    def primitives(self) -> list[dict[Mono, Any]]:
        """Solutions of ``Delta(a) = a(x)1 + 1(x)a`` among positive-degree elements."""
        fs = self.field
        src = [{m: fs.one} for m in self.basis if any(m)]
        imgs = []
        for v in src:
            (m,) = v
            img: dict = {}
            for (l, r), c in self.coproduct(m).items():
                if any(l) and any(r):
                    img[(l, r)] = fs(c)
            imgs.append(img)
        return kernel(src, imgs, fs)


def build_uea(spec: LieAlgebraSpec, D: int | None = None) -> TruncatedUEA:
    return TruncatedUEA(spec, spec.truncation if D is None else D)


def build_restricted(spec: LieAlgebraSpec) -> TruncatedUEA:
    """``u(g)`` with zero p-operation: exponents below ``p``, no degree cap."""
    p = spec.field.characteristic
    return TruncatedUEA(spec, spec.dim * (p - 1) if p else 2, restricted=True)


# co-Hochschild complex


class ForgetfulComplex(CosimplicialAlgebraInstance):
    """``E(n) = H^{(x)n}`` cut to total PBW degree ``<= D``; keys are tuples of monomials."""

    symmetric = True

    def __init__(self, uea: TruncatedUEA, N: int):
        if N < 2:
            raise ValueError("max degree must be at least 2")
        self.uea = uea
        self.field = uea.field
        self.max_degree = N
        self._basis: dict[int, list] = {}
        self._cache: dict = {}

    @property
    def D(self) -> int:
        return self.uea.D

    def basis(self, n):
        if n not in self._basis:
            monos = self.uea.basis
            keys = [k for k in product(monos, repeat=n) if self.in_range(n, k)]
            keys.sort(key=lambda k: (sum(map(sum, k)), k))
            self._basis[n] = keys
        return self._basis[n]

    def in_range(self, n, key):
        if self.uea.restricted:
            return all(self.uea.in_range(m) for m in key)
        return sum(sum(m) for m in key) <= self.uea.D

    def _memo(self, tag, fn, *args):
        k = (tag,) + args
        if k not in self._cache:
            self._cache[k] = fn(*args)
        return self._cache[k]

    def coface_key(self, i, n, key):
        return self._memo("d", self._coface, i, n, key)

    def _coface(self, i, n, key):
        one = self.field.one
        z = self.uea.zero_mono
        if i == 0:
            return {(z,) + key: one}
        if i == n + 1:
            return {key + (z,): one}
        out = {}
        for (l, r), c in self.uea.coproduct(key[i - 1]).items():
            out[key[: i - 1] + (l, r) + key[i:]] = self.field(c)
        return vclean(out)

    def codegeneracy_key(self, i, n, key):
        if any(key[i]):
            return {}
        return {key[:i] + key[i + 1 :]: self.field.one}

    def swap_key(self, i, n, key):
        k = list(key)
        k[i - 1], k[i] = k[i], k[i - 1]
        return {tuple(k): self.field.one}

    def multiply_keys(self, n, k1, k2):
        return self._memo("m", self._multiply, n, k1, k2)

    def _multiply(self, n, k1, k2):
        acc: dict[tuple, Fraction] = {(): Fraction(1)}
        for a, b in zip(k1, k2):
            leg = self.uea.multiply(a, b)
            acc = {t + (m,): c * c2 for t, c in acc.items() for m, c2 in leg.items()}
        return vclean({k: self.field(c) for k, c in acc.items()})

    def unit(self, n):
        return {(self.uea.zero_mono,) * n: self.field.one}

    def normalized_basis(self, n):
        one = self.field.one
        return [{k: one} for k in self.basis(n) if all(any(m) for m in k)]

    # element helpers

    def element(self, legs_terms: Mapping[tuple[str, ...], Any]) -> Vec:
        """Build a vector from ``{("x", "z"): 1, ...}`` where legs are monomial strings."""
        out: Vec = {}
        for legs, c in legs_terms.items():
            key = tuple(self.parse_mono(s) for s in legs)
            out = vadd(out, {key: self.field.one}, self.field(c))
        return out

    def parse_mono(self, s: str) -> Mono:
        e = [0] * self.uea.d
        if s.strip() == "1":
            return tuple(e)
        names = self.uea.spec.names
        for tok in re.findall(r"([A-Za-z_]\w*?)(?:\^(\d+))?(?=[A-Za-z_*]|$)", s.replace("*", "")):
            name, power = tok
            e[names.index(name)] += int(power) if power else 1
        return tuple(e)

    def text(self, v: Mapping) -> str:
        if not v:
            return "0"
        parts = []
        for k in sorted(v, key=lambda k: (sum(map(sum, k)), k)):
            c = self.field.to_text(v[k])
            legs = "⊗".join(self.uea.mono_text(m) for m in k) if k else "1"
            parts.append(f"{c}*{legs}" if c != "1" else legs)
        return " + ".join(parts)


def forgetful_complex(uea: TruncatedUEA, N: int = 3) -> ForgetfulComplex:
    return ForgetfulComplex(uea, N)


class InvariantComplex(ForgetfulComplex):
    """Centralisers of the diagonal image of ``g`` inside the forgetful complex."""

    def __init__(self, uea: TruncatedUEA, N: int):
        super().__init__(uea, N)
        self._sub: dict[int, list[Vec]] = {}
        self._norm: dict[int, list[Vec]] = {}

    def commutator_image(self, n: int, v: Mapping) -> Vec:
        """``([Delta^(n-1)(x), v])_x`` stacked over the generators ``x``."""
        out: Vec = {}
        for g in range(self.uea.d):
            x = self.uea.generator(g)
            z = self.uea.zero_mono
            for leg in range(n):
                X = {tuple(x if l == leg else z for l in range(n)): self.field.one}
                w = vadd(self.product(n, X, v)[0], self.product(n, v, X)[0], -1)
                for k, c in w.items():
                    out[(g, k)] = out.get((g, k), 0) + c
        return vclean(out)

    def _centralizer(self, src: list[Vec], n: int) -> list[Vec]:
        if n == 0:
            return src
        return kernel(src, [self.commutator_image(n, v) for v in src], self.field)

    def subspace(self, n):
        if n not in self._sub:
            one = self.field.one
            self._sub[n] = self._centralizer([{k: one} for k in self.basis(n)], n)
        return self._sub[n]

    def normalized_basis(self, n):
        if n not in self._norm:
            self._norm[n] = self._centralizer(super().normalized_basis(n), n)
        return self._norm[n]

    def contains(self, n: int, v: Mapping) -> bool:
        return not self.commutator_image(n, v)


def invariant_complex(uea: TruncatedUEA, N: int = 3) -> InvariantComplex:
    return InvariantComplex(uea, N)


def complex_from_spec(spec: LieAlgebraSpec, kind: str | None = None) -> ForgetfulComplex:
    """The complex a config asks for, up to its ``max_degree``."""
    uea = build_restricted(spec) if spec.restricted else build_uea(spec)
    kind = kind or spec.complex_kind
    if kind == "forgetful":
        return forgetful_complex(uea, spec.max_degree)
    if kind == "invariant":
        return invariant_complex(uea, spec.max_degree)
    raise ValueError(f"unknown complex {kind!r}")


# exterior algebra and the Schouten bracket

Multivector = dict  # sorted index tuple -> Fraction


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    if len(set(idx)) != len(idx):
        return 0, ()
    inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return (-1) ** inv, tuple(sorted(idx))


def wedge(u: Mapping, v: Mapping) -> Multivector:
    out: dict = {}
    for a, c in u.items():
        for b, d in v.items():
            s, key = _sort_sign(tuple(a) + tuple(b))
            if s:
                out[key] = out.get(key, 0) + s * c * d
    return {k: c for k, c in out.items() if c}


def mv_add(u: Mapping, v: Mapping, c=1) -> Multivector:
    out = dict(u)
    for k, x in v.items():
        out[k] = out.get(k, 0) + c * x
    return {k: x for k, x in out.items() if x}


def schouten(a: Mapping, b: Mapping, spec: LieAlgebraSpec) -> Multivector:
    """Schouten bracket of multivectors on ``g``."""
    if spec.field.characteristic:
        raise ValueError("the Schouten oracle works in characteristic 0")
    out: Multivector = {}
    for xs, c in a.items():
        for ys, d in b.items():
            for i, x in enumerate(xs, start=1):
                for j, y in enumerate(ys, start=1):
                    br = {(k,): v for k, v in spec.bracket(x, y).items()}
                    rest = {tuple(xs[: i - 1] + xs[i:]) + tuple(ys[: j - 1] + ys[j:]): Fraction(1)}
                    term = wedge(br, _fix(rest))
                    out = mv_add(out, term, (-1) ** (i + j) * c * d)
    return out


def _fix(mv: Mapping) -> Multivector:
    out: dict = {}
    for k, c in mv.items():
        s, key = _sort_sign(k)
        if s:
            out[key] = out.get(key, 0) + s * c
    return out


def lambda_embed(w: Mapping, inst: ForgetfulComplex) -> Vec:
    """``x_1 ^ ... ^ x_n`` -> ``(1/n!) sum sgn(s) x_s(1) (x) ... (x) x_s(n)``."""
    fs = inst.field
    uea = inst.uea
    out: Vec = {}
    for idx, c in w.items():
        n = len(idx)
        if fs.divides_factorial(n):
            raise ValueError(f"{n}! is not invertible in {fs.name}")
        scale = fs(Fraction(c) / factorial(n))
        for perm in permutations(range(n)):
            key = tuple(uea.generator(idx[p]) for p in perm)
            out = vadd(out, {key: fs.one}, scale * fs(perm_sign([p + 1 for p in perm])))
    return out


def alt_project(x: Mapping, n: int, inst: ForgetfulComplex) -> Multivector:
    """Read the antisymmetrisation of ``x`` as a multivector; degree-one legs only."""
    a = alt(inst, n, x)
    out: Multivector = {}
    for key, c in a.items():
        if not all(sum(m) == 1 for m in key):
            continue
        idx = tuple(m.index(1) for m in key)
        if list(idx) == sorted(idx) and len(set(idx)) == n:
            q = Fraction(factorial(n)) * _to_fraction(c)
            if q:
                out[idx] = q
    return out


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def divided_power_cocycle(inst: ForgetfulComplex, gen: int) -> Vec:
    """``(1/p) sum_{0<i<p} C(p,i) x^i (x) x^(p-i)`` with binomials divided in the integers."""
    p = inst.field.characteristic
    if not p:
        raise ValueError("needs a prime characteristic")
    out: Vec = {}
    for i in range(1, p):
        c = comb(p, i) // p
        a = tuple(i if k == gen else 0 for k in range(inst.uea.d))
        b = tuple(p - i if k == gen else 0 for k in range(inst.uea.d))
        out = vadd(out, {(a, b): inst.field.one}, inst.field(c))
    return out


def multivector_text(mv: Mapping, spec: LieAlgebraSpec) -> str:
    if not mv:
        return "0"
    return " + ".join(f"{c}*" + "∧".join(spec.names[i] for i in k) for k, c in sorted(mv.items()))

