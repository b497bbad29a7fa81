"""Lattice paths with stop labels, sketches, signs and the bicomplex.

A lattice path of arity ``k`` with extents ``n_1..n_k`` is a unit-step walk
on the grid, recorded as a direction word over ``1..k`` (letter ``i`` occurs
``n_i + 1`` times) plus one label per vertex.  The label counts how many
objects of the source interval stop at that vertex.

Text form: the word as digits, a bar, then comma separated labels, e.g.
``"1221|1,0,1,0,1"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterable, Iterator, Mapping, Sequence

from .paths_m import MPath, Shuffling, classify, segment_orders
from .simplicial_core import IntervalMap, parity_sign


@dataclass(frozen=True)
class LatticePath:
    extents: tuple[int, ...]
    word: tuple[int, ...]
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        ext = tuple(int(e) for e in self.extents)
        word = tuple(int(c) for c in self.word)
        labels = tuple(int(v) for v in self.labels)
        object.__setattr__(self, "extents", ext)
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "labels", labels)
        for i, e in enumerate(ext, start=1):
            if word.count(i) != e + 1:
                raise ValueError(f"letter {i} must occur {e + 1} times in {word}")
        if any(c < 1 or c > len(ext) for c in word):
            raise ValueError(f"letters of {word} must lie in 1..{len(ext)}")
        if len(labels) != len(word) + 1:
            raise ValueError("need one label per vertex")
        if labels[0] < 1 or labels[-1] < 1 or min(labels) < 0:
            raise ValueError("endpoint labels must be positive and all labels nonnegative")

    @property
    def arity(self) -> int:
        return len(self.extents)

    @property
    def m(self) -> int:
        """The source is ``<m+1>``."""
        return sum(self.labels) - 2

    @classmethod
    def parse(cls, text: str, arity: int | None = None) -> "LatticePath":
        try:
            w, lab = text.strip().split("|")
            word = tuple(int(c) for c in w.strip())
            labels = tuple(int(v) for v in lab.split(","))
        except ValueError as exc:
            raise ValueError(f"malformed lattice path {text!r}") from exc
        k = arity or max(word)
        return cls(tuple(word.count(i) - 1 for i in range(1, k + 1)), word, labels)

    @classmethod
    def shuffle(cls, word: Sequence[int], arity: int | None = None) -> "LatticePath":
        """The shuffle path with this word (every label 1)."""
        k = arity or max(word)
        return cls(tuple(list(word).count(i) - 1 for i in range(1, k + 1)), tuple(word), (1,) * (len(word) + 1))

    def text(self) -> str:
        return "".join(map(str, self.word)) + "|" + ",".join(map(str, self.labels))

    def __str__(self) -> str:
        return self.text()

    def object_vertices(self) -> list[int]:
        """Vertex index of each object ``0..m+1``."""
        out = []
        for v, lab in enumerate(self.labels):
            out.extend([v] * lab)
        return out

    def vertex_coords(self) -> list[tuple[int, ...]]:
        pos = [0] * self.arity
        out = [tuple(pos)]
        for c in self.word:
            pos[c - 1] += 1
            out.append(tuple(pos))
        return out

    def corners(self) -> list[int]:
        """Internal vertices where the direction changes."""
        return [v for v in range(1, len(self.word)) if self.word[v] != self.word[v - 1]]

    def is_shuffle(self) -> bool:
        return all(v == 1 for v in self.labels)

    def is_normal(self) -> bool:
        cs = set(self.corners())
        return all(lab == (0 if v in cs else 1) for v, lab in enumerate(self.labels))

    def is_degenerate(self) -> bool:
        """Some internal vertex that is not a corner carries label 0."""
        cs = set(self.corners())
        return any(self.labels[v] == 0 and v not in cs for v in range(1, len(self.word)))

    def transpose(self) -> "LatticePath":
        if self.arity != 2:
            raise ValueError("transpose is for binary paths")
        return LatticePath(self.extents[::-1], tuple(3 - c for c in self.word), self.labels)


def reduce_word(word: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for c in word:
        if not out or out[-1] != c:
            out.append(c)
    return tuple(out)


def _project_word(word: Sequence[int], i: int, j: int) -> tuple[int, ...]:
    return reduce_word(1 if c == i else 2 for c in word if c in (i, j))


def complexity_ij(psi: LatticePath, i: int, j: int) -> int:
    if not 1 <= i < j <= psi.arity:
        raise ValueError(f"bad pair ({i}, {j}) for arity {psi.arity}")
    return len(_project_word(psi.word, i, j)) - 1


def complexity(psi: LatticePath) -> int:
    k = psi.arity
    return max((complexity_ij(psi, i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)), default=0)


def first_movement(psi: LatticePath | Sequence[int]) -> tuple[int, ...]:
    word = psi.word if isinstance(psi, LatticePath) else psi
    seen: list[int] = []
    for c in word:
        if c not in seen:
            seen.append(c)
    return tuple(seen)


def ass_compose(sigma: Sequence[int], i: int, tau: Sequence[int]) -> tuple[int, ...]:
    """Composition ``sigma o_i tau`` of linear orders in the associative operad."""
    r = len(tau)
    out: list[int] = []
    for c in sigma:
        if c == i:
            out.extend(i + t - 1 for t in tau)
        else:
            out.append(c if c < i else c + r - 1)
    return tuple(out)


def compose(psi: LatticePath, i: int, omega: LatticePath) -> LatticePath:
    """Operadic ``psi o_i omega``: the ``i``-th coordinate of ``psi`` is fed through ``omega``."""
    if not 1 <= i <= psi.arity:
        raise ValueError("bad slot")
    if psi.extents[i - 1] != omega.m:
        raise ValueError(
            f"colour mismatch: slot {i} has extent {psi.extents[i - 1]}, omega has source <{omega.m + 1}>"
        )
    r = omega.arity
    ov = omega.object_vertices()

    def rename(c: int) -> int:
        return c if c < i else c + r - 1

    word: list[int] = []
    labels: list[int] = [0]
    j = 0
    for v, c in enumerate(psi.word):
        labels[-1] += psi.labels[v]
        if c == i:
            seg = omega.word[ov[j] : ov[j + 1]]
            j += 1
            for letter in seg:
                word.append(i + letter - 1)
                labels.append(0)
        else:
            word.append(rename(c))
            labels.append(0)
    labels[-1] += psi.labels[-1]
    ext = psi.extents[: i - 1] + omega.extents + psi.extents[i:]
    return LatticePath(ext, tuple(word), tuple(labels))


def project_to_m(psi: LatticePath) -> MPath | tuple[IntervalMap, ...]:
    """Forget the order of commuting steps; binary paths become ``MPath`` values."""
    coords = psi.vertex_coords()
    pts = [coords[v] for v in psi.object_vertices()]
    if psi.arity == 2:
        return MPath(psi.m, psi.extents[0], psi.extents[1], tuple(pts))
    return tuple(
        IntervalMap(psi.m + 1, psi.extents[c] + 1, tuple(pt[c] for pt in pts)) for c in range(psi.arity)
    )


def _from_segments(phi: MPath, segments: Sequence[Sequence[int]]) -> LatticePath:
    word: list[int] = []
    labels = [1]
    for seg in segments:
        for c in seg:
            word.append(c)
            labels.append(0)
        labels[-1] += 1
    return LatticePath((phi.p, phi.q), tuple(word), tuple(labels))


def lift(phi: MPath, sh: Shuffling) -> LatticePath:
    """The lifting of ``phi`` attached to a shuffling of its supports."""
    orders = segment_orders(phi, sh)
    segs = []
    for (dx, dy), order in zip(phi.steps(), orders):
        segs.append([1] * dx + [2] * dy if order == "xy" else [2] * dy + [1] * dx)
    return _from_segments(phi, segs)


def shuffling_of_lifting(psi: LatticePath) -> Shuffling:
    """Inverse of :func:`lift` on liftings of surjective paths: maximal runs become blocks."""
    ov = psi.object_vertices()
    gen_of_letter: list[int] = []
    for k in range(len(ov) - 1):
        gen_of_letter.extend([k] * (ov[k + 1] - ov[k]))
    runs: list[tuple[int, list[int]]] = []
    for pos, c in enumerate(psi.word):
        g = gen_of_letter[pos]
        if runs and runs[-1][0] == c:
            if runs[-1][1][-1] != g:
                runs[-1][1].append(g)
        else:
            runs.append((c, [g]))
    a = tuple(tuple(gs) for c, gs in runs if c == 1)
    b = tuple(tuple(gs) for c, gs in runs if c == 2)
    return Shuffling(a, b, "A" if runs[0][0] == 1 else "B")


def _arrangements(dx: int, dy: int) -> list[tuple[int, ...]]:
    n = dx + dy
    out = []
    for pos in combinations(range(n), dx):
        seg = [2] * n
        for k in pos:
            seg[k] = 1
        out.append(tuple(seg))
    return out


def liftings(phi: MPath) -> Iterator[LatticePath]:
    """Every lifting of ``phi`` to the funny tensor product."""
    for segs in product(*(_arrangements(dx, dy) for dx, dy in phi.steps())):
        yield _from_segments(phi, segs)


def min_lifting_complexity(phi: MPath) -> int:
    """Dynamic program over per-step letter orders; state is the last letter written."""
    inf = float("inf")
    best = {0: 0}  # 0 means nothing written yet
    for dx, dy in phi.steps():
        if dx == 0 and dy == 0:
            continue
        new: dict[int, float] = {}
        if dx == 0 or dy == 0:
            options = [(1 if dx else 2, 1 if dx else 2, 0)]
        else:
            # entry letter, exit letter, internal direction changes
            options = [(1, 2, 1), (2, 1, 1), (1, 1, 2), (2, 2, 2)]
        for last, cost in best.items():
            for enter, leave, internal in options:
                c = cost + internal + (1 if last and last != enter else 0)
                if c < new.get(leave, inf):
                    new[leave] = c
        best = new
    return int(min(best.values()))


def shuffle_factor(psi: LatticePath) -> tuple[IntervalMap, LatticePath]:
    """``psi = dagger o pre`` with ``dagger`` a shuffle path."""
    dagger = LatticePath(psi.extents, psi.word, (1,) * (len(psi.word) + 1))
    pre = IntervalMap(psi.m + 1, len(psi.word), tuple(psi.object_vertices()))
    return pre, dagger


def shuffle_permutation(psi: LatticePath) -> tuple[int, ...]:
    """Value list of the shuffle permutation of a shuffle path."""
    if not psi.is_shuffle():
        raise ValueError("shuffle_permutation needs a shuffle path")
    offsets = [0]
    for e in psi.extents:
        offsets.append(offsets[-1] + e + 1)
    seen = [0] * psi.arity
    out = []
    for c in psi.word:
        out.append(offsets[c - 1] + seen[c - 1])
        seen[c - 1] += 1
    return tuple(out)


def inversions(word: Sequence[int]) -> int:
    """Pairs where a larger letter precedes a smaller one."""
    count = 0
    tally = [0] * (max(word, default=0) + 2)
    for c in word:
        count += sum(tally[c + 1 :])
        tally[c] += 1
    return count


def sign(psi: LatticePath) -> int:
    """Sign of the shuffle permutation of ``psi``'s shuffle factor."""
    if psi.arity != 2:
        raise ValueError("sign is defined for binary paths")
    return -1 if inversions(psi.word) % 2 else 1


def permutation_sign(values: Sequence[int]) -> int:
    inv = sum(1 for a in range(len(values)) for b in range(a + 1, len(values)) if values[a] > values[b])
    return -1 if inv % 2 else 1


# sketches


@dataclass(frozen=True)
class Sketch:
    word: tuple[int, ...]

    def __post_init__(self) -> None:
        w = tuple(int(c) for c in self.word)
        object.__setattr__(self, "word", w)
        if reduce_word(w) != w:
            raise ValueError(f"{w} is not reduced")
        if w and set(w) != set(range(1, max(w) + 1)):
            raise ValueError(f"{w} misses a variable")

    @property
    def arity(self) -> int:
        return max(self.word, default=0)

    @property
    def length(self) -> int:
        return len(self.word)

    def project(self, i: int, j: int) -> "Sketch":
        return Sketch(_project_word(self.word, i, j))

    def complexity_ij(self, i: int, j: int) -> int:
        return self.project(i, j).length - 1

    def complexity(self) -> int:
        k = self.arity
        return max((self.complexity_ij(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)), default=0)

    def first_movement(self) -> tuple[int, ...]:
        return first_movement(self.word)


def sketch(psi: LatticePath | Sequence[int]) -> Sketch:
    word = psi.word if isinstance(psi, LatticePath) else psi
    return Sketch(reduce_word(word))


def sketch_expansion(psi: LatticePath | Sequence[int], i: int) -> tuple[int, ...]:
    """Reduce with respect to every variable except ``i``."""
    word = psi.word if isinstance(psi, LatticePath) else tuple(psi)
    out: list[int] = []
    for c in word:
        if out and out[-1] == c and c != i:
            continue
        out.append(c)
    return tuple(out)


def expansion(s: Sketch, i: int, counts: Sequence[int] | None = None) -> tuple[int, ...]:
    """Repeat the ``k``-th occurrence of ``i`` in ``s`` ``counts[k]`` times."""
    occ = s.word.count(i)
    counts = list(counts) if counts is not None else [1] * occ
    if len(counts) != occ or min(counts, default=1) < 1:
        raise ValueError("need one positive count per occurrence")
    out: list[int] = []
    k = 0
    for c in s.word:
        if c == i:
            out.extend([i] * counts[k])
            k += 1
        else:
            out.append(c)
    return tuple(out)


def _substituted_word(s_exp: Sequence[int], i: int, t: Sequence[int]) -> tuple[int, ...]:
    occ = list(s_exp).count(i)
    if occ != len(t):
        raise ValueError(f"expansion has {occ} copies of {i} but t has length {len(t)}")
    d = max(t)
    out = []
    j = 0
    for c in s_exp:
        if c == i:
            out.append(i + t[j] - 1)
            j += 1
        else:
            out.append(c if c < i else c + d - 1)
    return tuple(out)


def substitute(s_exp: Sequence[int], i: int, t: Sequence[int]) -> Sketch:
    """Sketch of ``(s)_i o t``."""
    return sketch(_substituted_word(s_exp, i, t))


def complexity_recipe(s_exp: Sequence[int], t: Sequence[int], i: int, j: int, at: int = 1) -> int:
    """Pairwise complexity of ``(s)_at o t`` without building the composite."""
    if list(s_exp).count(at) != len(t):
        raise ValueError("length mismatch between the expansion and t")
    if not i < j:
        raise ValueError("need i < j")
    d = max(t)

    def origin(c: int) -> tuple[str, int]:
        if c < at:
            return "s", c
        if c < at + d:
            return "t", c - at + 1
        return "s", c - d + 1

    (ki, vi), (kj, vj) = origin(i), origin(j)
    if ki == kj == "s":
        return len(_project_word(s_exp, vi, vj)) - 1
    if ki == kj == "t":
        return len(_project_word(t, vi, vj)) - 1
    u = vi if ki == "t" else vj
    v = vj if ki == "t" else vi
    # keep at and v, collapse repeated v only
    s1: list[int] = []
    for c in s_exp:
        if c == at or c == v:
            if c == v and s1 and s1[-1] == v:
                continue
            s1.append(c)
    t1 = [c == u for c in t]
    merged: list[str] = []
    k = 0
    for c in s1:
        if c == at:
            if t1[k]:
                merged.append("t")
            k += 1
        else:
            merged.append("s")
    return len(reduce_word(merged)) - 1


# normal and smooth lattice paths


def binary_words(p: int, q: int) -> Iterator[tuple[int, ...]]:
    """Words with ``p+1`` ones and ``q+1`` twos in lexicographic order."""
    n = p + q + 2
    for pos in combinations(range(n), p + 1):
        w = [2] * n
        for k in pos:
            w[k] = 1
        yield tuple(w)


def normal_path(word: Sequence[int], arity: int = 2) -> LatticePath:
    word = tuple(word)
    cs = {v for v in range(1, len(word)) if word[v] != word[v - 1]}
    labels = tuple(0 if v in cs else 1 for v in range(len(word) + 1))
    return LatticePath(tuple(word.count(i) - 1 for i in range(1, arity + 1)), word, labels)


def is_even(psi: LatticePath) -> bool:
    return first_movement(psi) == (1, 2)


@lru_cache(maxsize=None)
def enumerate_normal(p: int, q: int, n: int) -> tuple[tuple[LatticePath, ...], tuple[LatticePath, ...]]:
    """Normal binary lattice paths of complexity exactly ``n``, split into (even, odd)."""
    paths = [normal_path(w) for w in binary_words(p, q) if len(reduce_word(w)) - 1 == n]
    return tuple(x for x in paths if is_even(x)), tuple(x for x in paths if not is_even(x))


@lru_cache(maxsize=None)
def enumerate_smooth_lp(p: int, q: int, n: int) -> tuple[tuple[LatticePath, ...], tuple[LatticePath, ...]]:
    """Normal paths of complexity ``n`` whose projection is smooth, split into (even, odd)."""
    even, odd = enumerate_normal(p, q, n)

    def keep(xs):
        return tuple(x for x in xs if classify(project_to_m(x)).smooth)

    return keep(even), keep(odd)


# the bicomplex of binary paths

BicomplexElement = dict  # LatticePath -> int


def _clean(x: Mapping[LatticePath, int]) -> dict[LatticePath, int]:
    return {k: v for k, v in x.items() if v}


def coboundary_delta(psi: LatticePath) -> list[LatticePath]:
    """Results of doubling object ``i`` for ``i = 0..m+1``."""
    out = []
    for v in psi.object_vertices():
        lab = list(psi.labels)
        lab[v] += 1
        out.append(LatticePath(psi.extents, psi.word, tuple(lab)))
    return out


def collapse(psi: LatticePath, letter: int, i: int) -> LatticePath | None:
    """Delete the ``i``-th step in direction ``letter`` and merge its two ends."""
    if psi.arity != 2:
        raise ValueError("collapse is for binary paths")
    if psi.extents[letter - 1] == 0:
        return None
    pos = [k for k, c in enumerate(psi.word) if c == letter][i]
    word = psi.word[:pos] + psi.word[pos + 1 :]
    lab = psi.labels[:pos] + (psi.labels[pos] + psi.labels[pos + 1],) + psi.labels[pos + 2 :]
    ext = list(psi.extents)
    ext[letter - 1] -= 1
    return LatticePath(tuple(ext), word, lab)


def _keep(psi: LatticePath | None, n: int) -> bool:
    return psi is not None and not psi.is_degenerate() and complexity(psi) <= n


def bicomplex_diff(x: Mapping[LatticePath, int], n: int) -> dict[LatticePath, int]:
    """Total differential on normalized chains of binary paths of complexity ``<= n``.

    Signs: ``(-1)^(n+p+q+m)`` on the object direction, ``(-1)^(q+1)`` on the
    first grid direction and ``-1`` on the second, each with the usual
    alternating face signs.
    """
    out: dict[LatticePath, int] = {}

    def add(psi: LatticePath | None, c: int) -> None:
        if _keep(psi, n):
            out[psi] = out.get(psi, 0) + c

    for psi, c in x.items():
        if psi.arity != 2:
            raise ValueError("the bicomplex is binary")
        p, q = psi.extents
        h = parity_sign(n + p + q + psi.m)
        for i, y in enumerate(coboundary_delta(psi)):
            add(y, c * h * parity_sign(i))
        s1 = parity_sign(q + 1)
        for i in range(p + 1):
            add(collapse(psi, 1, i), c * s1 * parity_sign(i))
        for i in range(q + 1):
            add(collapse(psi, 2, i), -c * parity_sign(i))
    return _clean(out)


def path_coefficient(psi: LatticePath, n: int) -> int:
    """Coefficient of a normal path of complexity ``n`` in the bracket cocycle."""
    p, q = psi.extents
    if is_even(psi):
        return parity_sign((p - 1) * (q - 1)) * sign(psi)
    return parity_sign(n + p * q) * sign(psi)


def lambda_cocycle(n_minus_1: int, m: int) -> dict[LatticePath, int]:
    """Signed sum of normal paths of complexity ``n`` with source ``<m+1>``."""
    n = n_minus_1 + 1
    out: dict[LatticePath, int] = {}
    for p in range(0, m + n):
        q = m + n - 1 - p
        even, odd = enumerate_normal(p, q, n)
        for psi in even + odd:
            out[psi] = path_coefficient(psi, n)
    return _clean(out)


def lambda_residual(n_minus_1: int, m_max: int) -> dict[LatticePath, int]:
    """``(delta + d) lambda`` restricted to sources ``<m+1>`` with ``m <= m_max``."""
    n = n_minus_1 + 1
    tot: dict[LatticePath, int] = {}
    for m in range(m_max + 1):
        for psi, c in bicomplex_diff(lambda_cocycle(n_minus_1, m), n).items():
            if psi.m <= m_max:
                tot[psi] = tot.get(psi, 0) + c
    return _clean(tot)


def nondegenerate_paths(p: int, q: int, n: int, max_label: int = 2) -> Iterator[LatticePath]:
    """Binary nondegenerate paths of complexity ``<= n`` with labels ``<= max_label``."""
    for w in binary_words(p, q):
        if len(reduce_word(w)) - 1 > n:
            continue
        for lab in product(range(max_label + 1), repeat=len(w) + 1):
            if lab[0] == 0 or lab[-1] == 0:
                continue
            psi = LatticePath((p, q), w, lab)
            if not psi.is_degenerate():
                yield psi


def brute_min_lifting(phi: MPath) -> int:
    return min(complexity(x) for x in liftings(phi))


def random_shuffle_word(rng, counts: Sequence[int]) -> tuple[int, ...]:
    letters = [i + 1 for i, c in enumerate(counts) for _ in range(c)]
    rng.shuffle(letters)
    return tuple(letters)

