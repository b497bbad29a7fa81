"""Finite-dimensional cosimplicial algebras over exact fields.

Elements are sparse vectors: dicts from basis keys to field elements.  An
instance supplies its structure maps on basis keys; this module extends them
linearly and builds the normalized complex, its cohomology, commutativity
checks and the symmetric-group tools on top of that.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from math import factorial
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from sympy import GF, QQ, isprime
from sympy.polys.matrices import DomainMatrix

from .simplicial_core import OrdinalMap, generator_word, pi, pi_i, tau, tau_i

Vec = dict  # basis key -> field element


@dataclass(frozen=True)
class FieldSpec:
    """The rationals (characteristic 0) or a prime field."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        c = self.characteristic
        if c < 0 or (c and not isprime(c)):
            raise ValueError(f"characteristic must be 0 or a prime, got {c}")

    @cached_property
    def dom(self):
        return QQ if self.characteristic == 0 else GF(self.characteristic)

    @property
    def name(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    def __call__(self, x: Any):
        """Convert an int, Fraction or ``"a/b"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if self.characteristic and x.denominator % self.characteristic == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.name}")
            return self.dom(x.numerator) / self.dom(x.denominator)
        return self.dom(x)

    @property
    def zero(self):
        return self.dom.zero

    @property
    def one(self):
        return self.dom.one

    def to_text(self, c) -> str:
        if self.characteristic:
            return str(int(c) % self.characteristic)
        r = Fraction(int(c.numerator), int(c.denominator))
        return str(r)

    def divides_factorial(self, n: int) -> bool:
        return self.characteristic != 0 and self.characteristic <= n


# sparse vectors


def vclean(v: Mapping) -> Vec:
    return {k: c for k, c in v.items() if c}


def vadd(u: Mapping, v: Mapping, c=1) -> Vec:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k)
        y = x * c if y is None else y + x * c
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vscale(v: Mapping, c) -> Vec:
    return vclean({k: x * c for k, x in v.items()})


def vlinear(fn: Callable[[Hashable], Mapping], v: Mapping) -> Vec:
    """Extend a map on basis keys linearly."""
    out: Vec = {}
    for k, c in v.items():
        out = vadd(out, fn(k), c)
    return out


# exact linear algebra on lists of sparse vectors


def _matrix(vectors: Sequence[Mapping], index: dict, dom) -> DomainMatrix:
    """Columns are the given vectors."""
    rows: dict[int, dict[int, Any]] = {}
    for j, v in enumerate(vectors):
        for k, c in v.items():
            if c:
                rows.setdefault(index[k], {})[j] = c
    return DomainMatrix(rows, (len(index), len(vectors)), dom)


def _index(vectors: Iterable[Mapping]) -> dict:
    idx: dict = {}
    for v in vectors:
        for k in v:
            if k not in idx:
                idx[k] = len(idx)
    return idx


def rank(vectors: Sequence[Mapping], fs: FieldSpec) -> int:
    if not vectors:
        return 0
    idx = _index(vectors)
    if not idx:
        return 0
    return _matrix(vectors, idx, fs.dom).rank()


def pivots(vectors: Sequence[Mapping], fs: FieldSpec) -> tuple[int, ...]:
    """Positions of a maximal independent subfamily, chosen greedily from the left."""
    idx = _index(vectors)
    if not vectors or not idx:
        return ()
    return tuple(_matrix(vectors, idx, fs.dom).rref()[1])


def kernel(sources: Sequence[Mapping], images: Sequence[Mapping], fs: FieldSpec) -> list[Vec]:
    """Combinations of ``sources`` whose combined image vanishes."""
    if not sources:
        return []
    idx = _index(images)
    if not idx:
        return [dict(s) for s in sources]
    ns = _matrix(images, idx, fs.dom).nullspace().to_sdm()
    out = []
    for r in sorted(ns):
        v: Vec = {}
        for j, c in ns[r].items():
            v = vadd(v, sources[j], c)
        out.append(v)
    return out


def in_span(vectors: Sequence[Mapping], target: Mapping, fs: FieldSpec) -> bool:
    if not vclean(target):
        return True
    return rank(list(vectors) + [target], fs) == rank(vectors, fs)


def solve(vectors: Sequence[Mapping], target: Mapping, fs: FieldSpec) -> list | None:
    """Coefficients ``c`` with ``sum c_j vectors[j] == target``, or ``None``."""
    idx = _index(list(vectors) + [target])
    if not idx:
        return [fs.zero] * len(vectors)
    A = _matrix(vectors, idx, fs.dom)
    b = _matrix([target], idx, fs.dom)
    aug = A.hstack(b)
    red, piv = aug.rref()
    if len(vectors) in piv:
        return None
    sol = [fs.zero] * len(vectors)
    R = red.to_sdm()
    for r, pc in enumerate(piv):
        sol[pc] = R.get(r, {}).get(len(vectors), fs.zero)
    return sol


# algebras


@dataclass
class FDAlgebra:
    """An associative unital algebra given by structure constants on a labelled basis."""

    field: FieldSpec
    labels: list
    table: dict  # (i, j) -> {k: c}
    unit: Vec
    check: bool = True

    def __post_init__(self) -> None:
        if self.check:
            bad = self.law_failures()
            if bad:
                raise ValueError(f"algebra laws fail, e.g. {bad[0]}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def multiply(self, u: Mapping, v: Mapping) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                out = vadd(out, self.table.get((i, j), {}), a * b)
        return out

    def law_failures(self) -> list[str]:
        fails = []
        e = [{i: self.field.one} for i in range(self.dim)]
        for i in range(self.dim):
            if self.multiply(self.unit, e[i]) != e[i] or self.multiply(e[i], self.unit) != e[i]:
                fails.append(f"unit law at {self.labels[i]}")
            for j in range(self.dim):
                ij = self.multiply(e[i], e[j])
                for k in range(self.dim):
                    if self.multiply(ij, e[k]) != self.multiply(e[i], self.multiply(e[j], e[k])):
                        fails.append(f"associativity at {(self.labels[i], self.labels[j], self.labels[k])}")
        return fails


def matrix_algebra(fs: FieldSpec, size: int) -> FDAlgebra:
    """Full matrix algebra with matrix units ``E_ij`` as basis."""
    labels = [(i, j) for i in range(size) for j in range(size)]
    pos = {lab: k for k, lab in enumerate(labels)}
    table = {}
    for (i, j) in labels:
        for (k, l) in labels:
            if j == k:
                table[(pos[(i, j)], pos[(k, l)])] = {pos[(i, l)]: fs.one}
    unit = {pos[(i, i)]: fs.one for i in range(size)}
    return FDAlgebra(fs, labels, table, unit)


# instances


class CosimplicialAlgebraInstance:
    """Base class: subclasses define the structure maps on basis keys.

    Required: ``field``, ``max_degree``, ``basis(n)``, ``coface_key``,
    ``codegeneracy_key``, ``multiply_keys``, ``unit(n)``.  Optional:
    ``swap_key`` when ``symmetric`` is true, ``subspace(n)`` when the
    components are proper subspaces of the ambient coordinate spaces, and
    ``normalized_basis(n)`` as a fast path.
    """

    field: FieldSpec
    max_degree: int
    symmetric: bool = False

    # interface to override

    def basis(self, n: int) -> list:
        raise NotImplementedError

    def coface_key(self, i: int, n: int, key) -> Mapping:
        raise NotImplementedError

    def codegeneracy_key(self, i: int, n: int, key) -> Mapping:
        raise NotImplementedError

    def multiply_keys(self, n: int, k1, k2) -> Mapping:
        """Exact product; keys outside :meth:`in_range` signal truncation overflow."""
        raise NotImplementedError

    def unit(self, n: int) -> Vec:
        raise NotImplementedError

    def swap_key(self, i: int, n: int, key) -> Mapping:
        raise NotImplementedError("instance has no symmetric structure")

    def in_range(self, n: int, key) -> bool:
        return True

    def subspace(self, n: int) -> list[Vec] | None:
        return None

    def normalized_basis(self, n: int) -> list[Vec] | None:
        return None

    # derived operations

    def _check_degree(self, n: int) -> None:
        if not 0 <= n <= self.max_degree:
            raise ValueError(f"degree {n} outside 0..{self.max_degree}")

    def zero(self) -> Vec:
        return {}

    def add(self, u: Mapping, v: Mapping, c=1) -> Vec:
        return vadd(u, v, self.field(c) if isinstance(c, int) else c)

    def component_basis(self, n: int) -> list[Vec]:
        sub = self.subspace(n)
        if sub is not None:
            return sub
        one = self.field.one
        return [{k: one} for k in self.basis(n)]

    def coface(self, i: int, n: int, v: Mapping) -> Vec:
        self._check_degree(n + 1)
        return vlinear(lambda k: self.coface_key(i, n, k), v)

    def codegeneracy(self, i: int, n: int, v: Mapping) -> Vec:
        self._check_degree(n)
        return vlinear(lambda k: self.codegeneracy_key(i, n, k), v)

    def swap(self, i: int, n: int, v: Mapping) -> Vec:
        if not self.symmetric:
            raise ValueError("instance has no symmetric structure")
        if not 1 <= i <= n - 1:
            raise ValueError(f"t_{i} does not act on degree {n}")
        return vlinear(lambda k: self.swap_key(i, n, k), v)

    def product(self, n: int, u: Mapping, v: Mapping) -> tuple[Vec, bool]:
        """Truncated product and whether anything was cut off."""
        out: Vec = {}
        for k1, a in u.items():
            for k2, b in v.items():
                out = vadd(out, self.multiply_keys(n, k1, k2), a * b)
        kept = {k: c for k, c in out.items() if self.in_range(n, k)}
        return kept, len(kept) != len(out)

    def multiply(self, n: int, u: Mapping, v: Mapping) -> Vec:
        return self.product(n, u, v)[0]

    def apply_map(self, f: OrdinalMap, v: Mapping) -> Vec:
        """``E(f)`` through codegeneracies then cofaces."""
        self._check_degree(f.cod)
        n = f.dom
        for kind, i in generator_word(f):
            if kind == "s":
                v = self.codegeneracy(i, n, v)
                n -= 1
            else:
                v = self.coface(i, n, v)
                n += 1
        return dict(v)

    def differential(self, n: int, v: Mapping) -> Vec:
        out: Vec = {}
        for i in range(n + 2):
            out = vadd(out, self.coface(i, n, v), self.field((-1) ** i))
        return out


def differential(inst: CosimplicialAlgebraInstance, n: int, x: Mapping) -> Vec:
    if n >= inst.max_degree:
        raise ValueError(f"no differential out of the top degree {inst.max_degree}")
    return inst.differential(n, x)


def normalized_space(inst: CosimplicialAlgebraInstance, n: int) -> list[Vec]:
    """Basis of the intersection of the codegeneracy kernels in ``E(n)``."""
    inst._check_degree(n)
    fast = inst.normalized_basis(n)
    if fast is not None:
        return fast
    src = inst.component_basis(n)
    if n == 0:
        return src
    images = []
    for v in src:
        img: Vec = {}
        for i in range(n):
            img.update({(i, k): c for k, c in inst.codegeneracy(i, n, v).items()})
        images.append(img)
    return kernel(src, images, inst.field)


@dataclass
class Cohomology:
    degree: int
    dimension: int
    representatives: list[Vec]
    cocycles: list[Vec] = field(repr=False, default_factory=list)
    coboundaries: list[Vec] = field(repr=False, default_factory=list)


def cocycles(inst: CosimplicialAlgebraInstance, n: int) -> list[Vec]:
    src = normalized_space(inst, n)
    return kernel(src, [inst.differential(n, v) for v in src], inst.field)


def coboundaries(inst: CosimplicialAlgebraInstance, n: int) -> list[Vec]:
    if n == 0:
        return []
    return [v for v in (inst.differential(n - 1, w) for w in normalized_space(inst, n - 1)) if v]


def cohomology(inst: CosimplicialAlgebraInstance, n: int) -> Cohomology:
    """``H^n`` of the normalized complex with pivot-chosen representatives."""
    if not 0 <= n < inst.max_degree:
        raise ValueError(f"cohomology needs 0 <= n < {inst.max_degree}")
    Z = cocycles(inst, n)
    B = coboundaries(inst, n)
    piv = pivots(B + Z, inst.field)
    rb = sum(1 for k in piv if k < len(B))
    reps = [Z[k - len(B)] for k in piv if k >= len(B)]
    return Cohomology(n, len(Z) - rb, reps, Z, B)


def is_coboundary(inst: CosimplicialAlgebraInstance, n: int, x: Mapping) -> bool:
    return in_span(coboundaries(inst, n), x, inst.field)


# commutativity


@dataclass
class CommutativityReport:
    n: int
    passed: bool
    checked: int
    skipped: int
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.passed


def _commute_pairs(inst, pairs, report: CommutativityReport) -> CommutativityReport:
    for f, g in pairs:
        out = f.cod
        As = [inst.apply_map(f, a) for a in inst.component_basis(f.dom)]
        Bs = [inst.apply_map(g, b) for b in inst.component_basis(g.dom)]
        for ai, x in enumerate(As):
            for bi, y in enumerate(Bs):
                xy, o1 = inst.product(out, x, y)
                yx, o2 = inst.product(out, y, x)
                if o1 or o2:
                    report.skipped += 1
                    continue
                report.checked += 1
                if xy != yx:
                    report.passed = False
                    report.witness = (f.values, g.values, ai, bi)
                    return report
    return report


def verify_n_commutativity(inst: CosimplicialAlgebraInstance, n: int, degree_bound: int) -> CommutativityReport:
    """Check the generating pairs: ``(tau, pi)`` for ``n >= 1`` and ``(tau^i, pi^i)`` for ``n >= 2``."""
    bound = min(degree_bound, inst.max_degree)
    pairs = []
    for total in range(bound + 1):
        for m in range(total + 1):
            pairs.append((tau(m, total - m), pi(m, total - m)))
    if n >= 2:
        for total in range(1, bound + 2):
            for m in range(total + 1):
                k = total - m
                if m + k - 1 > bound or max(m, k) > inst.max_degree:
                    continue
                for i in range(k):
                    pairs.append((tau_i(i, m, k), pi_i(i, m, k)))
    return _commute_pairs(inst, pairs, CommutativityReport(n, True, 0, 0))


def commutativity_oracle(inst: CosimplicialAlgebraInstance, n: int, degree_bound: int) -> CommutativityReport:
    """Slow check over every pair of maps with linking number at most ``n``."""
    from .paths_m import linking_number
    from .simplicial_core import all_maps

    bound = min(degree_bound, inst.max_degree)
    pairs = []
    for out in range(bound + 1):
        for p in range(out + 1):
            for q in range(out + 1):
                for f in all_maps(p, out):
                    for g in all_maps(q, out):
                        if linking_number(f, g) <= n:
                            pairs.append((f, g))
    return _commute_pairs(inst, pairs, CommutativityReport(n, True, 0, 0))


# structural identities


def _basis_vecs(inst, n):
    one = inst.field.one
    return [{k: one} for k in inst.basis(n)]


def axiom_failures(inst: CosimplicialAlgebraInstance, max_degree: int | None = None) -> list[str]:
    """Cosimplicial identities and homomorphism property on ambient basis elements."""
    N = inst.max_degree if max_degree is None else max_degree
    d, s = inst.coface, inst.codegeneracy
    fails: list[str] = []
    for n in range(N + 1):
        for v in _basis_vecs(inst, n):
            if n + 2 <= N:
                for j in range(n + 3):
                    for i in range(j):
                        if d(j, n + 1, d(i, n, v)) != d(i, n + 1, d(j - 1, n, v)):
                            fails.append(f"d{j}d{i} in degree {n}")
            if n >= 2:
                for j in range(n - 1):
                    for i in range(j + 1):
                        if s(j, n - 1, s(i, n, v)) != s(i, n - 1, s(j + 1, n, v)):
                            fails.append(f"s{j}s{i} in degree {n}")
            if n >= 1 and n + 1 <= N:
                for j in range(n):
                    for i in range(n + 2):
                        lhs = s(j, n + 1, d(i, n, v))
                        if i < j:
                            rhs = d(i, n - 1, s(j - 1, n, v))
                        elif i in (j, j + 1):
                            rhs = dict(v)
                        else:
                            rhs = d(i - 1, n - 1, s(j, n, v))
                        if lhs != rhs:
                            fails.append(f"s{j}d{i} in degree {n}")
            if n == 0 and N >= 1:
                if s(0, 1, d(0, 0, v)) != v or s(0, 1, d(1, 0, v)) != v:
                    fails.append("s0 d in degree 0")
    return sorted(set(fails))


def homomorphism_failures(inst: CosimplicialAlgebraInstance, max_degree: int | None = None) -> list[str]:
    """Structure maps preserve units and products (pairs whose product overflows are skipped)."""
    N = inst.max_degree if max_degree is None else max_degree
    fails: list[str] = []
    for n in range(N + 1):
        ops: list[tuple[str, int, Callable]] = []
        if n + 1 <= N:
            ops += [(f"d{i}", n + 1, lambda v, i=i: inst.coface(i, n, v)) for i in range(n + 2)]
        if n >= 1:
            ops += [(f"s{i}", n - 1, lambda v, i=i: inst.codegeneracy(i, n, v)) for i in range(n)]
        if inst.symmetric:
            ops += [(f"t{i}", n, lambda v, i=i: inst.swap(i, n, v)) for i in range(1, n)]
        basis = _basis_vecs(inst, n)
        for name, m, op in ops:
            if op(inst.unit(n)) != inst.unit(m):
                fails.append(f"{name} unit in degree {n}")
            for u in basis:
                for v in basis:
                    uv, over = inst.product(n, u, v)
                    if over:
                        continue
                    lhs, o2 = inst.product(m, op(u), op(v))
                    if not o2 and op(uv) != lhs:
                        fails.append(f"{name} product in degree {n}")
                        break
    return sorted(set(fails))


def symmetry_failures(inst: CosimplicialAlgebraInstance, max_degree: int | None = None) -> list[str]:
    """Transposition relations with cofaces and codegeneracies.

    Codegeneracies are compared with the index shifted by one: ``c_i`` below is
    ``codegeneracy(i - 1)`` for ``i = 1..n``.
    """
    if not inst.symmetric:
        raise ValueError("instance has no symmetric structure")
    N = inst.max_degree if max_degree is None else max_degree
    d, s, t = inst.coface, inst.codegeneracy, inst.swap
    fails: list[str] = []
    for n in range(N + 1):
        for v in _basis_vecs(inst, n):
            if n + 1 <= N:
                w = d(0, n, v)
                for i in range(1, n + 1):
                    w = t(i, n + 1, w)
                if w != d(n + 1, n, v):
                    fails.append(f"t..t d0 = d{n + 1} in degree {n}")
                for i in range(1, n + 1):
                    if t(i, n + 1, d(i, n, v)) != d(i, n, v):
                        fails.append(f"t{i} d{i} in degree {n}")
                for j in range(1, n):
                    for i in range(n + 2):
                        lhs = d(i, n, t(j, n, v))
                        if i > j + 1:
                            rhs = t(j, n + 1, d(i, n, v))
                        elif i == j + 1:
                            rhs = t(i - 1, n + 1, t(i, n + 1, d(i - 1, n, v)))
                        elif i == j:
                            rhs = t(i + 1, n + 1, t(i, n + 1, d(i + 1, n, v)))
                        else:
                            rhs = t(j + 1, n + 1, d(i, n, v))
                        if lhs != rhs:
                            fails.append(f"d{i} t{j} in degree {n}")
            if n >= 1:

                def c(i, w, n=n):
                    return s(i - 1, n, w)

                for j in range(1, n):
                    for i in range(1, n + 1):
                        lhs = c(i, t(j, n, v))
                        if i > j + 1:
                            rhs = t(j, n - 1, c(i, v))
                        elif i == j + 1:
                            rhs = c(i - 1, v)
                        elif i == j:
                            rhs = c(i + 1, v)
                        else:
                            rhs = t(j - 1, n - 1, c(i, v))
                        if lhs != rhs:
                            fails.append(f"s{i} t{j} in degree {n}")
    return sorted(set(fails))


# symmetric structure


def reduced_word(perm: Sequence[int]) -> list[int]:
    """Indices ``i`` with ``perm = t_{w[0]} o t_{w[1]} o ...`` (one-line notation, 1-based)."""
    p = list(perm)
    word: list[int] = []
    while True:
        for i in range(len(p) - 1):
            if p[i] > p[i + 1]:
                p[i], p[i + 1] = p[i + 1], p[i]
                word.append(i + 1)
                break
        else:
            break
    return word[::-1]


def perm_sign(perm: Sequence[int]) -> int:
    return -1 if len(reduced_word(perm)) % 2 else 1


def act(inst: CosimplicialAlgebraInstance, perm: Sequence[int], n: int, x: Mapping) -> Vec:
    """``perm`` moves leg ``k`` to position ``perm[k-1]``; the rightmost transposition acts first."""
    if len(perm) != n:
        raise ValueError(f"permutation of {len(perm)} letters on degree {n}")
    v = dict(x)
    for i in reversed(reduced_word(perm)):
        v = inst.swap(i, n, v)
    return v


def compose_perms(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """``s o t`` in one-line notation."""
    return tuple(s[t[k] - 1] for k in range(len(t)))


def _need_symmetry(inst) -> None:
    if not inst.symmetric:
        raise ValueError("instance has no symmetric structure")


def _need_invertible_factorial(inst, n: int) -> None:
    if inst.field.divides_factorial(n):
        raise ValueError(f"{n}! is not invertible in {inst.field.name}")


def alt(inst: CosimplicialAlgebraInstance, n: int, x: Mapping) -> Vec:
    """Antisymmetrisation divided by ``n!``."""
    _need_symmetry(inst)
    _need_invertible_factorial(inst, n)
    out: Vec = {}
    for perm in permutations(range(1, n + 1)):
        out = vadd(out, act(inst, perm, n, x), inst.field(perm_sign(perm)))
    return vscale(out, inst.field(Fraction(1, factorial(n))))


def hat(inst: CosimplicialAlgebraInstance, n: int, x: Mapping, i: int) -> Vec:
    """``t_i ... t_1 d_0 (x)`` in degree ``n+1``."""
    _need_symmetry(inst)
    v = inst.coface(0, n, x)
    for k in range(1, i + 1):
        v = inst.swap(k, n + 1, v)
    return v


def _pp_defect(inst, n: int, x: Mapping) -> Vec:
    if n + 1 > inst.max_degree:
        raise ValueError(f"poly-primitivity in degree {n} needs degree {n + 1}")
    hats = [hat(inst, n, x, i) for i in range(n + 1)]
    out: Vec = {}
    for i in range(1, n + 1):
        w = vadd(vadd(inst.coface(i, n, x), hats[i - 1], -1), hats[i], -1)
        out.update({(i, k): c for k, c in w.items()})
    return out


def is_poly_primitive(inst: CosimplicialAlgebraInstance, n: int, x: Mapping) -> bool:
    return not _pp_defect(inst, n, x)


def poly_primitive_basis(inst: CosimplicialAlgebraInstance, n: int) -> list[Vec]:
    _need_symmetry(inst)
    src = inst.component_basis(n)
    return kernel(src, [_pp_defect(inst, n, v) for v in src], inst.field)


def hodge_top(inst: CosimplicialAlgebraInstance, n: int) -> list[Vec]:
    """Antisymmetric poly-primitive elements of degree ``n``."""
    _need_symmetry(inst)
    _need_invertible_factorial(inst, n)
    src = inst.component_basis(n)
    images = []
    for v in src:
        img = _pp_defect(inst, n, v)
        for i in range(1, n):
            w = vadd(inst.swap(i, n, v), v)
            img.update({("t", i, k): c for k, c in w.items()})
        images.append(img)
    return kernel(src, images, inst.field)


@dataclass
class SymmetricOps:
    inst: CosimplicialAlgebraInstance

    def act(self, perm, n, x):
        return act(self.inst, perm, n, x)

    def alt(self, n, x):
        return alt(self.inst, n, x)

    def is_poly_primitive(self, n, x):
        return is_poly_primitive(self.inst, n, x)

    def poly_primitive_basis(self, n):
        return poly_primitive_basis(self.inst, n)

    def hodge_top(self, n):
        return hodge_top(self.inst, n)


def symmetric_ops(inst: CosimplicialAlgebraInstance) -> SymmetricOps:
    _need_symmetry(inst)
    return SymmetricOps(inst)


def _signed_perm_sum(inst, perms: Iterable[Sequence[int]], n: int, x: Mapping) -> Vec:
    out: Vec = {}
    for perm in perms:
        out = vadd(out, act(inst, perm, n, x), inst.field(perm_sign(perm)))
    return out


def shuffle_side_perms(n: int) -> list[tuple[int, ...]]:
    """Permutations of ``n+1`` letters with ``s^-1(1) < s^-1(2)``."""
    return [p for p in permutations(range(1, n + 2)) if p.index(1) < p.index(2)]


def operator_identity_sides(inst: CosimplicialAlgebraInstance, n: int, x: Mapping) -> tuple[Vec, Vec]:
    """Both sides of the antisymmetrisation identity applied to ``x`` in degree ``n``."""
    a = _signed_perm_sum(inst, permutations(range(1, n + 1)), n, x)
    lhs = vadd(vadd(inst.coface(0, n, a), inst.coface(1, n, a), -1), hat(inst, n, a, 1))
    rhs = _signed_perm_sum(inst, shuffle_side_perms(n), n + 1, inst.differential(n, x))
    return lhs, rhs


def operator_identity_check(inst: CosimplicialAlgebraInstance, n: int) -> bool:
    _need_symmetry(inst)
    if n + 1 > inst.max_degree:
        raise ValueError(f"needs degree {n + 1} but the instance stops at {inst.max_degree}")
    for v in _basis_vecs(inst, n):
        lhs, rhs = operator_identity_sides(inst, n, v)
        if lhs != rhs:
            return False
    return True


# explicit matrix instances


class MatrixInstance(CosimplicialAlgebraInstance):
    """Every map stored explicitly; basis keys of ``E(n)`` are ``0..dim-1``."""

    def __init__(self, fs: FieldSpec, algebras: list[FDAlgebra], cofaces: dict, codegeneracies: dict,
                 swaps: dict | None = None):
        self.field = fs
        self.algebras = algebras
        self.max_degree = len(algebras) - 1
        self.cofaces = cofaces  # (i, n) -> {key: vec}
        self.codegeneracies = codegeneracies
        self.swaps = swaps or {}
        self.symmetric = swaps is not None

    def basis(self, n):
        return list(range(self.algebras[n].dim))

    def coface_key(self, i, n, key):
        return self.cofaces[(i, n)].get(key, {})

    def codegeneracy_key(self, i, n, key):
        return self.codegeneracies[(i, n)].get(key, {})

    def swap_key(self, i, n, key):
        return self.swaps[(i, n)].get(key, {})

    def multiply_keys(self, n, k1, k2):
        return self.algebras[n].table.get((k1, k2), {})

    def unit(self, n):
        return dict(self.algebras[n].unit)

    @classmethod
    def from_instance(cls, inst: CosimplicialAlgebraInstance, max_degree: int | None = None) -> "MatrixInstance":
        """Materialize the ambient coordinate spaces of another instance."""
        N = inst.max_degree if max_degree is None else max_degree
        fs = inst.field
        bases = [inst.basis(n) for n in range(N + 1)]
        pos = [{k: j for j, k in enumerate(b)} for b in bases]

        def relabel(n, v):
            return {pos[n][k]: c for k, c in v.items() if k in pos[n]}

        algebras = []
        for n in range(N + 1):
            table = {}
            for a in bases[n]:
                for b in bases[n]:
                    prod = relabel(n, inst.multiply_keys(n, a, b))
                    if prod:
                        table[(pos[n][a], pos[n][b])] = prod
            algebras.append(FDAlgebra(fs, [repr(k) for k in bases[n]], table, relabel(n, inst.unit(n)), check=False))
        cof, cod, sw = {}, {}, {}
        for n in range(N + 1):
            for k in bases[n]:
                if n + 1 <= N:
                    for i in range(n + 2):
                        cof.setdefault((i, n), {})[pos[n][k]] = relabel(n + 1, inst.coface_key(i, n, k))
                for i in range(n):
                    cod.setdefault((i, n), {})[pos[n][k]] = relabel(n - 1, inst.codegeneracy_key(i, n, k))
                if inst.symmetric:
                    for i in range(1, n):
                        sw.setdefault((i, n), {})[pos[n][k]] = relabel(n, inst.swap_key(i, n, k))
        return cls(fs, algebras, cof, cod, sw if inst.symmetric else None)

    def to_json(self) -> dict[str, Any]:
        fs = self.field

        def vec(v):
            return {str(k): fs.to_text(c) for k, c in v.items()}

        def maps(d):
            return [
                {"index": i, "degree": n, "columns": {str(k): vec(v) for k, v in cols.items() if v}}
                for (i, n), cols in sorted(d.items())
            ]

        return {
            "field": {"characteristic": fs.characteristic},
            "components": [
                {
                    "dim": A.dim,
                    "labels": [str(x) for x in A.labels],
                    "unit": vec(A.unit),
                    "products": [{"left": i, "right": j, "value": vec(v)} for (i, j), v in sorted(A.table.items())],
                }
                for A in self.algebras
            ],
            "cofaces": maps(self.cofaces),
            "codegeneracies": maps(self.codegeneracies),
            "symmetry": maps(self.swaps) if self.symmetric else None,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "MatrixInstance":
        fs = FieldSpec(int(data["field"]["characteristic"]))

        def vec(d):
            return vclean({int(k): fs(c) for k, c in d.items()})

        def maps(entries):
            out = {}
            for e in entries:
                out[(e["index"], e["degree"])] = {int(k): vec(v) for k, v in e["columns"].items()}
            return out

        algebras = []
        for comp in data["components"]:
            table = {(p["left"], p["right"]): vec(p["value"]) for p in comp["products"]}
            labels = comp.get("labels") or [str(k) for k in range(comp["dim"])]
            algebras.append(FDAlgebra(fs, labels, table, vec(comp["unit"]), check=False))
        sym = data.get("symmetry")
        return cls(fs, algebras, maps(data["cofaces"]), maps(data["codegeneracies"]), maps(sym) if sym is not None else None)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def constant_instance(algebra: FDAlgebra, max_degree: int) -> MatrixInstance:
    """Every component the same algebra and every structure map the identity."""
    ident = {k: {k: algebra.field.one} for k in range(algebra.dim)}
    cof = {(i, n): dict(ident) for n in range(max_degree) for i in range(n + 2)}
    cod = {(i, n): dict(ident) for n in range(1, max_degree + 1) for i in range(n)}
    return MatrixInstance(algebra.field, [algebra] * (max_degree + 1), cof, cod)
