"""Ordinals, monotone maps, intervals and Joyal duality.

An ordinal ``[n]`` is ``{0, ..., n}``; a morphism of the simplex category is
a nondecreasing map stored as its value vector.  An interval ``<n>`` has
objects ``0..n`` and generators ``0..n-1`` (generator ``k`` goes from object
``k`` to ``k+1``); a functor between intervals preserving both endpoints is
stored as its object map.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator, Sequence


@dataclass(frozen=True)
class OrdinalMap:
    """Nondecreasing map ``[dom] -> [cod]``."""

    dom: int
    cod: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.dom < 0 or self.cod < 0:
            raise ValueError("ordinals must be nonnegative")
        if len(vals) != self.dom + 1:
            raise ValueError(f"expected {self.dom + 1} values, got {len(vals)}")
        if any(v < 0 or v > self.cod for v in vals):
            raise ValueError(f"values {vals} leave [0, {self.cod}]")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"values {vals} are not nondecreasing")

    @classmethod
    def from_values(cls, values: Sequence[int], cod: int | None = None) -> "OrdinalMap":
        values = tuple(values)
        if cod is None:
            cod = max(values) if values else 0
        return cls(len(values) - 1, cod, values)

    def __call__(self, i: int) -> int:
        return self.values[i]

    def image(self) -> frozenset[int]:
        return frozenset(self.values)

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.cod + 1

    def is_identity(self) -> bool:
        return self.dom == self.cod and self.values == tuple(range(self.dom + 1))

    def missing(self) -> list[int]:
        """Values of ``[cod]`` not hit, in increasing order."""
        im = set(self.values)
        return [k for k in range(self.cod + 1) if k not in im]


@dataclass(frozen=True)
class IntervalMap:
    """Endpoint preserving functor ``<dom> -> <cod>`` given on objects."""

    dom: int
    cod: int
    obj: tuple[int, ...]

    def __post_init__(self) -> None:
        obj = tuple(int(v) for v in self.obj)
        object.__setattr__(self, "obj", obj)
        if len(obj) != self.dom + 1:
            raise ValueError(f"expected {self.dom + 1} objects, got {len(obj)}")
        if obj[0] != 0 or obj[-1] != self.cod:
            raise ValueError("interval maps must preserve both endpoints")
        if any(a > b for a, b in zip(obj, obj[1:])):
            raise ValueError(f"object map {obj} is not nondecreasing")

    def generator_image(self, k: int) -> tuple[int, int]:
        """Generator ``k`` goes to the composite of generators ``[a, b)``."""
        return self.obj[k], self.obj[k + 1]

    def is_identity(self) -> bool:
        return self.dom == self.cod and self.obj == tuple(range(self.dom + 1))


def parity_sign(e: int) -> int:
    """``(-1)**e`` as an int, also for negative ``e``."""
    return -1 if e % 2 else 1


def identity(n: int) -> OrdinalMap:
    return OrdinalMap(n, n, tuple(range(n + 1)))


def interval_identity(n: int) -> IntervalMap:
    return IntervalMap(n, n, tuple(range(n + 1)))


def coface(i: int, n: int) -> OrdinalMap:
    """The injection ``[n] -> [n+1]`` that skips ``i``."""
    if n < 0 or not 0 <= i <= n + 1:
        raise ValueError(f"coface index {i} out of range for [{n}]")
    return OrdinalMap(n, n + 1, tuple(k if k < i else k + 1 for k in range(n + 1)))


def codegeneracy(i: int, n: int) -> OrdinalMap:
    """The surjection ``[n] -> [n-1]`` that hits ``i`` twice."""
    if n < 1 or not 0 <= i <= n - 1:
        raise ValueError(f"codegeneracy index {i} out of range for [{n}]")
    return OrdinalMap(n, n - 1, tuple(k if k <= i else k - 1 for k in range(n + 1)))


def compose(g: OrdinalMap, f: OrdinalMap) -> OrdinalMap:
    """``g o f``."""
    if f.cod != g.dom:
        raise ValueError(f"cannot compose: f lands in [{f.cod}], g starts at [{g.dom}]")
    return OrdinalMap(f.dom, g.cod, tuple(g.values[v] for v in f.values))


def compose_all(*maps: OrdinalMap) -> OrdinalMap:
    """``maps[0] o maps[1] o ...``."""
    out = maps[-1]
    for g in reversed(maps[:-1]):
        out = compose(g, out)
    return out


def interval_compose(h: IntervalMap, g: IntervalMap) -> IntervalMap:
    """``h o g`` for interval functors."""
    if g.cod != h.dom:
        raise ValueError("interval maps are not composable")
    return IntervalMap(g.dom, h.cod, tuple(h.obj[k] for k in g.obj))


def epi_mono_factor(f: OrdinalMap) -> tuple[OrdinalMap, OrdinalMap]:
    """Return ``(epi, mono)`` with ``mono o epi == f``."""
    im = sorted(set(f.values))
    pos = {v: k for k, v in enumerate(im)}
    r = len(im) - 1
    epi = OrdinalMap(f.dom, r, tuple(pos[v] for v in f.values))
    mono = OrdinalMap(r, f.cod, tuple(im))
    return epi, mono


def joyal_dual(f: OrdinalMap) -> IntervalMap:
    """Dual of ``f: [m] -> [l]`` as a functor ``<l+1> -> <m+1>``.

    Object ``k`` goes to the number of ``j`` with ``f(j) < k``.
    """
    obj = tuple(sum(1 for v in f.values if v < k) for k in range(f.cod + 2))
    return IntervalMap(f.cod + 1, f.dom + 1, obj)


def joyal_inverse(g: IntervalMap) -> OrdinalMap:
    """Inverse of :func:`joyal_dual`: ``<l+1> -> <m+1>`` back to ``[m] -> [l]``."""
    if g.dom < 1 or g.cod < 1:
        raise ValueError("interval maps of the form <l+1> -> <m+1> are required")
    vals = []
    for j in range(g.cod):
        for i in range(g.dom):
            if g.obj[i] <= j < g.obj[i + 1]:
                vals.append(i)
                break
    return OrdinalMap(g.cod - 1, g.dom - 1, tuple(vals))


def generator_word(f: OrdinalMap) -> list[tuple[str, int]]:
    """Factor ``f`` into generators, listed in application order.

    Codegeneracies come first as ``('s', j)``, then cofaces as ``('d', i)``.
    Applying them left to right to ``id_[dom]`` rebuilds ``f``.
    """
    epi, mono = epi_mono_factor(f)
    word: list[tuple[str, int]] = []
    e = list(epi.values)
    while True:
        js = [j for j in range(len(e) - 1) if e[j] == e[j + 1]]
        if not js:
            break
        j = js[-1]
        word.append(("s", j))
        # e = e' o s_j where e' forgets position j+1
        e = e[: j + 1] + e[j + 2 :]
    # skipping the missing values in increasing order keeps earlier gaps intact
    word.extend(("d", i) for i in mono.missing())
    return word


def from_generator_word(dom: int, word: Sequence[tuple[str, int]]) -> OrdinalMap:
    f = identity(dom)
    for kind, i in word:
        g = codegeneracy(i, f.cod) if kind == "s" else coface(i, f.cod)
        f = compose(g, f)
    return f


def all_maps(p: int, m: int) -> Iterator[OrdinalMap]:
    """Every nondecreasing map ``[p] -> [m]`` in lexicographic order."""
    for vals in combinations_with_replacement(range(m + 1), p + 1):
        yield OrdinalMap(p, m, vals)


def tau(m: int, n: int) -> OrdinalMap:
    """``[n] -> [m+n]`` onto the initial segment ``{0..n}``."""
    return OrdinalMap(n, m + n, tuple(range(n + 1)))


def pi(m: int, n: int) -> OrdinalMap:
    """``[m] -> [m+n]`` onto the final segment ``{n..m+n}``."""
    return OrdinalMap(m, m + n, tuple(range(n, m + n + 1)))


def tau_i(i: int, m: int, n: int) -> OrdinalMap:
    """``[n] -> [m+n-1]`` with image ``{0..i} U {i+m..m+n-1}``."""
    if not 0 <= i <= n - 1:
        raise ValueError("need 0 <= i <= n-1")
    return OrdinalMap(n, m + n - 1, tuple(k if k <= i else k + m - 1 for k in range(n + 1)))


def pi_i(i: int, m: int, n: int) -> OrdinalMap:
    """``[m] -> [m+n-1]`` with image ``{i..i+m}``."""
    if not 0 <= i <= n - 1:
        raise ValueError("need 0 <= i <= n-1")
    return OrdinalMap(m, m + n - 1, tuple(range(i, i + m + 1)))
