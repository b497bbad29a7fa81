"""Binary operations of the paths operad: grid paths with stops.

A path ``<m+1> -> <p+1> x <q+1>`` is stored as its vertex list: object ``k``
of the source sits at ``points[k]``.  Generator ``k`` of the source is the
step from ``points[k]`` to ``points[k+1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .simplicial_core import (
    IntervalMap,
    OrdinalMap,
    epi_mono_factor,
    interval_compose,
    interval_identity,
    joyal_dual,
    joyal_inverse,
)

STEP_NAMES = {(1, 1): "D", (1, 0): "x", (0, 1): "y", (0, 0): "o"}


@dataclass(frozen=True)
class MPath:
    """Componentwise nondecreasing path from ``(0, 0)`` to ``(p+1, q+1)``."""

    m: int
    p: int
    q: int
    points: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pts = tuple((int(a), int(b)) for a, b in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) != self.m + 2:
            raise ValueError(f"expected {self.m + 2} points, got {len(pts)}")
        if pts[0] != (0, 0) or pts[-1] != (self.p + 1, self.q + 1):
            raise ValueError("a path must run from (0,0) to (p+1,q+1)")
        for (a, b), (c, d) in zip(pts, pts[1:]):
            if c < a or d < b:
                raise ValueError(f"path {pts} is not monotone")

    @classmethod
    def from_steps(cls, steps: Sequence[tuple[int, int]]) -> "MPath":
        pts = [(0, 0)]
        for dx, dy in steps:
            x, y = pts[-1]
            pts.append((x + dx, y + dy))
        return cls(len(steps) - 1, pts[-1][0] - 1, pts[-1][1] - 1, tuple(pts))

    @classmethod
    def from_word(cls, word: str) -> "MPath":
        """Build a surjective path from letters ``D``, ``x``, ``y``, ``o``."""
        inv = {v: k for k, v in STEP_NAMES.items()}
        return cls.from_steps([inv[c] for c in word])

    def steps(self) -> list[tuple[int, int]]:
        return [(c - a, d - b) for (a, b), (c, d) in zip(self.points, self.points[1:])]

    def word(self) -> str:
        """Step letters; only meaningful for surjective paths."""
        return "".join(STEP_NAMES.get(s, "?") for s in self.steps())

    def projections(self) -> tuple[IntervalMap, IntervalMap]:
        xs = tuple(pt[0] for pt in self.points)
        ys = tuple(pt[1] for pt in self.points)
        return IntervalMap(self.m + 1, self.p + 1, xs), IntervalMap(self.m + 1, self.q + 1, ys)

    def maps(self) -> tuple[OrdinalMap, OrdinalMap]:
        """The pair ``(tau, pi)`` whose Joyal duals are the projections."""
        a, b = self.projections()
        return joyal_inverse(a), joyal_inverse(b)

    def supports(self) -> tuple[frozenset[int], frozenset[int]]:
        s1 = frozenset(k for k, (dx, _) in enumerate(self.steps()) if dx)
        s2 = frozenset(k for k, (_, dy) in enumerate(self.steps()) if dy)
        return s1, s2

    def transpose(self) -> "MPath":
        return MPath(self.m, self.q, self.p, tuple((b, a) for a, b in self.points))

    def __str__(self) -> str:
        return " ".join(f"({a},{b})" for a, b in self.points)


@dataclass(frozen=True)
class Shuffling:
    """Alternating block decomposition of two sets of generators."""

    a_blocks: tuple[tuple[int, ...], ...]
    b_blocks: tuple[tuple[int, ...], ...]
    first_side: str = "A"

    def __post_init__(self) -> None:
        if self.first_side not in ("A", "B"):
            raise ValueError("first_side must be 'A' or 'B'")
        first, second = self.sequence_sides()
        s, t = len(first), len(second)
        if not (s == t or s == t + 1):
            raise ValueError("block counts do not alternate")
        if any(not blk for blk in self.a_blocks + self.b_blocks):
            raise ValueError("blocks must be nonempty")
        seq = self.sequence()
        for u, v in zip(seq, seq[1:]):
            if max(u[1]) > min(v[1]):
                raise ValueError("interleaving inequality fails")

    def sequence_sides(self):
        if self.first_side == "A":
            return self.a_blocks, self.b_blocks
        return self.b_blocks, self.a_blocks

    def sequence(self) -> list[tuple[str, tuple[int, ...]]]:
        """Blocks in interleaved order, tagged by side."""
        first, second = self.sequence_sides()
        tags = ("A", "B") if self.first_side == "A" else ("B", "A")
        out = []
        for i, blk in enumerate(first):
            out.append((tags[0], blk))
            if i < len(second):
                out.append((tags[1], second[i]))
        return out

    @property
    def length(self) -> int:
        return len(self.a_blocks) + len(self.b_blocks) - 1

    def sort_key(self):
        return (self.length, self.first_side, self.a_blocks, self.b_blocks)


def mpath_from_maps(tau: OrdinalMap, pi: OrdinalMap) -> MPath:
    """Path whose projections are the Joyal duals of ``tau`` and ``pi``."""
    if tau.cod != pi.cod:
        raise ValueError("tau and pi must share a codomain")
    a, b = joyal_dual(tau), joyal_dual(pi)
    return MPath(tau.cod, tau.dom, pi.dom, tuple(zip(a.obj, b.obj)))


def _compositions(elems: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    n = len(elems)
    for r in range(n):
        for cuts in combinations(range(1, n), r):
            bounds = (0,) + cuts + (n,)
            yield tuple(tuple(elems[bounds[k] : bounds[k + 1]]) for k in range(len(bounds) - 1))


@lru_cache(maxsize=None)
def shufflings_of_sets(a: frozenset[int], b: frozenset[int]) -> tuple[Shuffling, ...]:
    """All shufflings of two sets, sorted by length, side and blocks."""
    out = []
    for ab in _compositions(sorted(a)):
        for bb in _compositions(sorted(b)):
            for side in ("A", "B"):
                try:
                    out.append(Shuffling(ab, bb, side))
                except ValueError:
                    pass
    return tuple(sorted(out, key=Shuffling.sort_key))


def enumerate_shufflings(tau: OrdinalMap, pi: OrdinalMap) -> list[Shuffling]:
    if tau.cod != pi.cod:
        raise ValueError("tau and pi must share a codomain")
    return list(shufflings_of_sets(tau.image(), pi.image()))


@lru_cache(maxsize=None)
def linking_number_sets(a: frozenset[int], b: frozenset[int]) -> int:
    """Minimal shuffling length.  Empty sides give 0 (``s + t - 1`` with one side empty)."""
    if not a or not b:
        return 0
    sh = shufflings_of_sets(a, b)
    return sh[0].length


def linking_number(tau: OrdinalMap, pi: OrdinalMap) -> int:
    if tau.cod != pi.cod:
        raise ValueError("tau and pi must share a codomain")
    return linking_number_sets(tau.image(), pi.image())


def shufflings_of_path(phi: MPath) -> list[Shuffling]:
    s1, s2 = phi.supports()
    return list(shufflings_of_sets(s1, s2))


def linking_number_path(phi: MPath) -> int:
    s1, s2 = phi.supports()
    return linking_number_sets(s1, s2)


def minimal_shuffling(phi: MPath) -> Shuffling:
    sh = shufflings_of_path(phi)
    if not sh:
        raise ValueError("path has an empty support")
    return sh[0]


def segment_orders(phi: MPath, sh: Shuffling) -> list[str]:
    """Letter order per generator induced by a shuffling of ``phi``.

    Returns ``'xy'`` when the x-part comes first, ``'yx'`` otherwise.
    Generators in one support only get the trivial order.
    """
    s1, s2 = phi.supports()
    if set().union(*sh.a_blocks) != set(s1) or set().union(*sh.b_blocks) != set(s2):
        raise ValueError("not a shuffling of this path")
    pos: dict[tuple[str, int], int] = {}
    for r, (tag, blk) in enumerate(sh.sequence()):
        for k in blk:
            pos[(tag, k)] = r
    orders = []
    for k in range(phi.m + 1):
        if k in s1 and k in s2:
            orders.append("xy" if pos[("A", k)] < pos[("B", k)] else "yx")
        else:
            orders.append("xy")
    return orders


@dataclass(frozen=True)
class PathClass:
    surjective: bool
    injective: bool
    delannoy: bool
    sharp: bool
    smooth: bool
    low_corners: tuple[tuple[int, int], ...] = field(default=())
    upper_corners: tuple[tuple[int, int], ...] = field(default=())


def _corners(phi: MPath) -> tuple[list[tuple[int, int, int]], list[tuple[int, int, int]]]:
    """Low and upper corners as ``(i, x, y)``: steps ``i, i+1`` meet at ``(x, y)``."""
    low, up = [], []
    steps = phi.steps()
    for i in range(len(steps) - 1):
        x, y = phi.points[i + 1]
        if steps[i] == (1, 0) and steps[i + 1] == (0, 1):
            low.append((i, x, y))
        elif steps[i] == (0, 1) and steps[i + 1] == (1, 0):
            up.append((i, x, y))
    return low, up


def classify(phi: MPath) -> PathClass:
    steps = phi.steps()
    surj = all(dx <= 1 and dy <= 1 for dx, dy in steps)
    inj = all((dx, dy) != (0, 0) for dx, dy in steps)
    dela = surj and inj
    low, up = _corners(phi) if dela else ([], [])
    sharp = surj and (1, 1) not in steps
    smooth = dela and not low and not up
    return PathClass(
        surjective=surj,
        injective=inj,
        delannoy=dela,
        sharp=sharp,
        smooth=smooth,
        low_corners=tuple((x, y) for _, x, y in low),
        upper_corners=tuple((x, y) for _, x, y in up),
    )


def factor_surjective(phi: MPath) -> tuple[MPath, tuple[IntervalMap, IntervalMap]]:
    """``phi = post o phi'`` with ``phi'`` surjective, via epi-mono on the duals."""
    tau, pi = phi.maps()
    e1, m1 = epi_mono_factor(tau)
    e2, m2 = epi_mono_factor(pi)
    return mpath_from_maps(m1, m2), (joyal_dual(e1), joyal_dual(e2))


def factor_injective(phi: MPath) -> tuple[IntervalMap, MPath]:
    """``phi = phi' o pre`` where ``phi'`` has no stationary steps."""
    steps = phi.steps()
    keep = [s for s in steps if s != (0, 0)]
    obj = [0]
    for s in steps:
        obj.append(obj[-1] + (s != (0, 0)))
    new = MPath.from_steps(keep)
    return IntervalMap(phi.m + 1, new.m + 1, tuple(obj)), new


def apply_post(phi: MPath, post: tuple[IntervalMap, IntervalMap]) -> MPath:
    f, g = post
    return MPath(phi.m, f.cod - 1, g.cod - 1, tuple((f.obj[a], g.obj[b]) for a, b in phi.points))


def apply_pre(phi: MPath, pre: IntervalMap) -> MPath:
    return MPath(pre.dom - 1, phi.p, phi.q, tuple(phi.points[k] for k in pre.obj))


def sharpen(phi: MPath) -> tuple[IntervalMap, MPath]:
    """Split each diagonal step along a minimal lifting: ``phi = phi' o delta``."""
    if not classify(phi).delannoy:
        raise ValueError("sharpen needs a Delannoy path")
    orders = segment_orders(phi, minimal_shuffling(phi))
    new_steps: list[tuple[int, int]] = []
    obj = [0]
    for k, s in enumerate(phi.steps()):
        if s == (1, 1):
            new_steps += [(1, 0), (0, 1)] if orders[k] == "xy" else [(0, 1), (1, 0)]
        else:
            new_steps.append(s)
        obj.append(len(new_steps))
    new = MPath.from_steps(new_steps)
    return IntervalMap(phi.m + 1, new.m + 1, tuple(obj)), new


def _skip(n: int, s: int) -> IntervalMap:
    """``<n+1> -> <n>`` sending generator ``s`` to an identity."""
    return IntervalMap(n + 1, n, tuple(k if k <= s else k - 1 for k in range(n + 2)))


def remove_corner(phi: MPath) -> tuple[MPath, tuple[IntervalMap, IntervalMap]] | None:
    """One corner removal step on the leftmost corner, or ``None`` if smooth."""
    low, up = _corners(phi)
    cands = sorted([(i, "low") for i, _, _ in low] + [(i, "up") for i, _, _ in up])
    if not cands:
        return None
    i, kind = cands[0]
    pts = list(phi.points)
    if kind == "low":
        s = pts[i][0]  # the x-step at i is generator s
        new = pts[: i + 2] + [(x + 1, y) for x, y in pts[i + 2 :]]
        post = (_skip(phi.p + 1, s + 1), interval_identity(phi.q + 1))
        out = MPath(phi.m, phi.p + 1, phi.q, tuple(new))
    else:
        s = pts[i][1]
        new = pts[: i + 2] + [(x, y + 1) for x, y in pts[i + 2 :]]
        post = (interval_identity(phi.p + 1), _skip(phi.q + 1, s + 1))
        out = MPath(phi.m, phi.p, phi.q + 1, tuple(new))
    return out, post


def smooth_factor(phi: MPath) -> tuple[MPath, tuple[IntervalMap, IntervalMap]]:
    """Iterate corner removal until smooth; ``phi = post o phi'``."""
    if not classify(phi).delannoy:
        raise ValueError("smooth_factor needs a Delannoy path")
    post = (interval_identity(phi.p + 1), interval_identity(phi.q + 1))
    cur = phi
    while True:
        step = remove_corner(cur)
        if step is None:
            return cur, post
        cur, (f, g) = step
        post = (interval_compose(post[0], f), interval_compose(post[1], g))


def merge_corners(phi: MPath) -> MPath:
    """Replace each corner pair by one diagonal step, scanning left to right.

    This is the picture-level smoothing: the target rectangle is kept and the
    source shrinks by one object per corner.
    """
    if not classify(phi).delannoy:
        raise ValueError("merge_corners needs a Delannoy path")
    steps = phi.steps()
    out: list[tuple[int, int]] = []
    i = 0
    while i < len(steps):
        if i + 1 < len(steps) and {steps[i], steps[i + 1]} == {(1, 0), (0, 1)}:
            out.append((1, 1))
            i += 2
        else:
            out.append(steps[i])
            i += 1
    return MPath.from_steps(out)


def enumerate_delannoy(p: int, q: int) -> list[MPath]:
    """All Delannoy paths to ``(p+1, q+1)`` in step-word order ``D < x < y``."""
    out: list[MPath] = []

    def rec(x: int, y: int, steps: list[tuple[int, int]]) -> None:
        if (x, y) == (p + 1, q + 1):
            out.append(MPath.from_steps(steps))
            return
        for dx, dy in ((1, 1), (1, 0), (0, 1)):
            if x + dx <= p + 1 and y + dy <= q + 1:
                steps.append((dx, dy))
                rec(x + dx, y + dy, steps)
                steps.pop()

    rec(0, 0, [])
    return out


@lru_cache(maxsize=None)
def delannoy_number(a: int, b: int) -> int:
    """Recurrence oracle; ``a, b`` count unit steps in each direction."""
    if a == 0 or b == 0:
        return 1
    return delannoy_number(a - 1, b) + delannoy_number(a, b - 1) + delannoy_number(a - 1, b - 1)


def enumerate_smooth(p: int, q: int, n: int) -> list[MPath]:
    """Smooth Delannoy paths to ``(p+1, q+1)`` with linking number exactly ``n``."""
    return [
        phi
        for phi in enumerate_delannoy(p, q)
        if classify(phi).smooth and linking_number_path(phi) == n
    ]


def n_equivalent(phi: MPath, n: int) -> bool:
    """Whether the two orderings of ``phi`` are identified at level ``n``."""
    return linking_number_path(phi) <= n


def eta(m: int, n: int) -> MPath:
    """Path ``<m+n+1> -> <m+1> x <n+1>``: ``m`` x-steps, one diagonal, ``n`` y-steps."""
    pts = [(i, 0) for i in range(m + 1)] + [(m + 1, j) for j in range(1, n + 2)]
    return MPath(m + n, m, n, tuple(pts))


def all_paths(p: int, q: int, m: int) -> Iterable[MPath]:
    """Every path ``<m+1> -> <p+1> x <q+1>``."""
    from .simplicial_core import all_maps

    for tau in all_maps(p, m):
        for pi in all_maps(q, m):
            yield mpath_from_maps(tau, pi)
