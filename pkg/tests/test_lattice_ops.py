from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from opad.lattice_ops import (
    LatticePath,
    Sketch,
    ass_compose,
    bicomplex_diff,
    binary_words,
    collapse,
    complexity,
    complexity_ij,
    complexity_recipe,
    compose,
    enumerate_normal,
    enumerate_smooth_lp,
    expansion,
    first_movement,
    inversions,
    lambda_cocycle,
    lambda_residual,
    lift,
    liftings,
    min_lifting_complexity,
    nondegenerate_paths,
    normal_path,
    project_to_m,
    random_shuffle_word,
    reduce_word,
    shuffle_factor,
    shuffle_permutation,
    shuffling_of_lifting,
    sign,
    sketch,
    substitute,
)
from opad.paths_m import (
    MPath,
    classify,
    enumerate_delannoy,
    enumerate_shufflings,
    eta,
    linking_number,
    linking_number_path,
    mpath_from_maps,
)
from opad.simplicial_core import all_maps, identity


def shuffle_words(counts):
    letters = [i + 1 for i, c in enumerate(counts) for _ in range(c)]
    seen = set()
    for w in product(range(1, len(counts) + 1), repeat=len(letters)):
        if sorted(w) == letters and w not in seen:
            seen.add(w)
            yield w


def test_text_round_trip():
    psi = LatticePath.parse("12|1,0,1")
    assert psi.extents == (0, 0)
    assert LatticePath.parse(psi.text()) == psi


def test_label_sum_is_source_size():
    psi = LatticePath.parse("1221|1,0,1,0,1")
    assert psi.m == 1
    assert sum(psi.labels) == psi.m + 2


def test_rejects_bad_labels():
    with pytest.raises(ValueError):
        LatticePath.parse("12|0,1,1")


def test_complexity_examples():
    for m, n in ((1, 1), (2, 3), (3, 1)):
        lifted = [psi for psi in liftings(eta(m, n)) if complexity(psi) == 1]
        assert len(lifted) == 1
    assert complexity(LatticePath.shuffle((1, 1, 1))) == 0
    assert complexity(LatticePath.shuffle((1, 1, 2, 2))) == 1


def test_middle_liftings_of_square_diagonal():
    diag = MPath.from_steps([(1, 1), (1, 1)])
    by_c = sorted(complexity(psi) for psi in liftings(diag))
    assert by_c.count(2) == 2
    assert min(by_c) == 2


def test_complexity_ij_bad_pair():
    with pytest.raises(ValueError):
        complexity_ij(LatticePath.shuffle((1, 2)), 2, 1)


def test_first_movement_examples():
    assert first_movement(LatticePath.shuffle((3, 3, 2, 1))) == (3, 2, 1)
    assert first_movement(LatticePath.shuffle((1, 2))) == (1, 2)


def test_first_movement_counterexample_at_complexity_two():
    a = LatticePath.parse("1221|1,0,1,0,1")
    b = LatticePath((0,), (1,), (2, 1))
    assert complexity(a) == 2 and first_movement(a) == (1, 2)
    c = compose(a, 1, b)
    assert first_movement(c) == (2, 1)
    assert ass_compose(first_movement(a), 1, first_movement(b)) == (1, 2)


def test_compose_with_identity():
    psi = LatticePath.parse("1221|1,0,1,0,1")
    unit = LatticePath((1,), (1, 1), (1, 1, 1))
    assert compose(psi, 1, unit) == psi
    assert compose(psi, 2, unit) == psi


def test_compose_colour_mismatch():
    with pytest.raises(ValueError):
        compose(LatticePath.shuffle((1, 2)), 1, LatticePath.shuffle((1, 1, 2)))


def _random_path(rng, extents, max_label=2):
    word = random_shuffle_word(rng, [e + 1 for e in extents])
    labels = [rng.randint(0, max_label) for _ in range(len(word) + 1)]
    labels[0] = max(labels[0], 1)
    labels[-1] = max(labels[-1], 1)
    return LatticePath(tuple(extents), word, tuple(labels))


def test_filtration_closure_and_complexity_one_homomorphism():
    rng = random.Random(7)
    checked = 0
    while checked < 400:
        psi = _random_path(rng, [rng.randint(0, 2) for _ in range(2)])
        i = rng.randint(1, 2)
        m = psi.extents[i - 1]
        omega = _random_path(rng, [rng.randint(0, 2) for _ in range(2)])
        if omega.m != m:
            continue
        c = compose(psi, i, omega)
        bound = max(complexity(psi), complexity(omega))
        assert complexity(c) <= bound
        if bound <= 1:
            assert first_movement(c) == ass_compose(first_movement(psi), i, first_movement(omega))
        checked += 1


def test_operad_associativity_sample():
    rng = random.Random(11)
    done = 0
    while done < 100:
        a = _random_path(rng, [1, 1])
        b = _random_path(rng, [rng.randint(0, 1), rng.randint(0, 1)])
        c = _random_path(rng, [rng.randint(0, 1)])
        if b.m != a.extents[0] or c.m != b.extents[1]:
            continue
        assert compose(compose(a, 1, b), 2, c) == compose(a, 1, compose(b, 2, c))
        done += 1


def test_project_to_m_examples():
    square = MPath.from_steps([(1, 1)])
    assert {project_to_m(psi) for psi in liftings(square)} == {square}
    assert len(list(liftings(square))) == 2
    (low,) = [psi for psi in liftings(eta(2, 2)) if complexity(psi) == 1]
    assert project_to_m(low) == eta(2, 2)


def test_project_lift_section():
    for p in range(3):
        for q in range(3):
            for phi in enumerate_delannoy(p, q):
                for psi in liftings(phi):
                    assert project_to_m(psi) == phi


def test_lift_examples_on_diagonal():
    diag = mpath_from_maps(identity(2), identity(2))
    shs = enumerate_shufflings(identity(2), identity(2))
    assert max(complexity(lift(diag, sh)) for sh in shs) == 5
    assert min(complexity(lift(diag, sh)) for sh in shs) == 3
    for sh in shs:
        psi = lift(diag, sh)
        assert complexity(psi) == sh.length
        assert project_to_m(psi) == diag
        assert shuffling_of_lifting(psi) == sh


def test_sharp_lifting_is_unique():
    sharp = MPath.from_steps([(1, 0), (0, 1), (1, 0)])
    assert classify(sharp).sharp
    (psi,) = liftings(sharp)
    assert complexity(psi) == linking_number_path(sharp)


def test_min_lifting_matches_lk():
    for p in range(5):
        for q in range(5):
            for m in range(5):
                if max(p, q, m) > 4:
                    continue
                for t in all_maps(p, m):
                    for s in all_maps(q, m):
                        phi = mpath_from_maps(t, s)
                        assert min_lifting_complexity(phi) == linking_number(t, s)


def test_shuffle_factor():
    psi = LatticePath.parse("1221|1,0,1,0,1")
    pre, dagger = shuffle_factor(psi)
    assert dagger.is_shuffle()
    assert complexity(dagger) == complexity(psi)
    assert first_movement(dagger) == first_movement(psi)
    s = LatticePath.shuffle((2, 1, 2))
    assert shuffle_factor(s)[1] == s and shuffle_factor(s)[0].is_identity()


def test_shuffle_permutation_identity():
    psi = LatticePath.shuffle((1, 1, 2, 2))
    assert shuffle_permutation(psi) == (0, 1, 2, 3)
    assert sign(psi) == 1


def test_sign_transpose_relation():
    for p in range(6):
        for q in range(6):
            for w in binary_words(p, q):
                psi = LatticePath.shuffle(w, 2)
                assert sign(psi) == (-1) ** ((p - 1) * (q - 1)) * sign(psi.transpose())


def test_inversions_of_eta_type_lifting():
    # x^a y^b x^c y^d: inversions are the y's of the first block times the x's after them
    for a, b, c, d in product(range(1, 3), repeat=4):
        w = (1,) * a + (2,) * b + (1,) * c + (2,) * d
        assert inversions(w) == b * c


def test_sketch_examples():
    assert sketch((1, 1, 2)).word == (1, 2)
    s = Sketch((1, 3, 1, 3, 4, 1, 2, 3, 1, 2))
    assert s.project(2, 3).word == (2, 1, 2, 1)
    with pytest.raises(ValueError):
        Sketch((1, 1, 2))


def test_recipe_worked_example():
    s_exp = (1, 2, 3, 2, 1, 1, 1, 1)
    t = (1, 2, 3, 2, 1)
    assert complexity_recipe(s_exp, t, 2, 4) == 1


def test_recipe_length_mismatch():
    with pytest.raises(ValueError):
        complexity_recipe((1, 2, 1), (1, 2, 1), 1, 2)


def test_expansion():
    s = Sketch((1, 2, 1))
    assert expansion(s, 1, [2, 3]) == (1, 1, 2, 1, 1, 1)


def test_recipe_agrees_with_composite():
    rng = random.Random(2024)
    checked = 0
    while checked < 1200:
        k = rng.randint(2, 3)
        s_word = random_shuffle_word(rng, [rng.randint(1, 3) for _ in range(k)])
        t_word = random_shuffle_word(rng, [rng.randint(1, 2) for _ in range(rng.randint(2, 3))])
        at = rng.randint(1, k)
        if s_word.count(at) != len(t_word):
            continue
        composite = compose(LatticePath.shuffle(s_word, k), at, LatticePath.shuffle(t_word))
        direct = substitute(s_word, at, t_word)
        assert sketch(composite) == direct
        n = composite.arity
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                assert complexity_recipe(s_word, t_word, i, j, at) == complexity_ij(composite, i, j)
        checked += 1


def test_normal_paths():
    psi = normal_path((1, 1, 2, 2, 2, 1))
    assert psi.is_normal() and not psi.is_degenerate()
    assert psi.labels == (1, 1, 0, 1, 1, 0, 1)


def test_normal_source_size():
    for p in range(4):
        for q in range(4):
            for n in range(1, p + q + 3):
                even, odd = enumerate_normal(p, q, n)
                for psi in even + odd:
                    assert psi.m == p + q - n + 1
                    assert complexity(psi) == n


def test_smooth_census():
    even, odd = enumerate_smooth_lp(3, 3, 3)
    assert (len(even), len(odd)) == (4, 4)
    # the two middle liftings on the square with two steps per side
    even, odd = enumerate_smooth_lp(1, 1, 2)
    assert (len(even), len(odd)) == (1, 1)
    assert {project_to_m(psi) for psi in even + odd} == {MPath.from_steps([(1, 1), (1, 1)])}
    # frozen from exhaustive enumeration
    assert tuple(map(len, enumerate_smooth_lp(2, 2, 2))) == (2, 2)
    assert tuple(map(len, enumerate_smooth_lp(2, 2, 3))) == (1, 1)


def test_smooth_complexity_one():
    for p in range(1, 6):
        for q in range(1, 6):
            even, odd = enumerate_smooth_lp(p, q, 1)
            assert len(even) == 1 and len(odd) == 1


def test_collapse_merges_labels():
    psi = LatticePath.parse("1122|1,1,0,1,1")
    out = collapse(psi, 1, 1)
    assert out.word == (1, 2, 2)
    assert out.labels == (1, 1, 1, 1)


def test_total_differential_squares_to_zero():
    for n in (1, 2, 3):
        for p in range(3):
            for q in range(3):
                for psi in nondegenerate_paths(p, q, n, max_label=1):
                    d = bicomplex_diff({psi: 1}, n)
                    assert bicomplex_diff(d, n) == {}


def test_lambda_is_a_cocycle():
    assert lambda_residual(1, 4) == {}
    assert lambda_residual(2, 4) == {}


def test_lambda_support():
    lam = lambda_cocycle(1, 1)
    assert all(complexity(psi) == 2 and psi.is_normal() for psi in lam)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=12))
def test_reduce_word_idempotent(word):
    r = reduce_word(word)
    assert reduce_word(r) == r
    assert all(a != b for a, b in zip(r, r[1:]))
