from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from opad.simplicial_core import (
    IntervalMap,
    OrdinalMap,
    all_maps,
    codegeneracy,
    coface,
    compose,
    epi_mono_factor,
    from_generator_word,
    generator_word,
    identity,
    interval_compose,
    interval_identity,
    joyal_dual,
    joyal_inverse,
    pi,
    pi_i,
    tau,
    tau_i,
)


@st.composite
def ordinal_maps(draw, max_size: int = 5):
    dom = draw(st.integers(0, max_size))
    cod = draw(st.integers(0, max_size))
    vals = sorted(draw(st.lists(st.integers(0, cod), min_size=dom + 1, max_size=dom + 1)))
    return OrdinalMap(dom, cod, tuple(vals))


def test_rejects_decreasing_values():
    with pytest.raises(ValueError):
        OrdinalMap(2, 2, (0, 2, 1))


def test_rejects_out_of_range():
    with pytest.raises(ValueError):
        OrdinalMap(1, 1, (0, 2))


def test_compose_example():
    # d0 then s0 on [1]
    assert compose(codegeneracy(0, 2), coface(0, 1)).values == (0, 1)


def test_compose_identity():
    f = OrdinalMap(2, 3, (0, 2, 3))
    assert compose(identity(3), f) == f
    assert compose(f, identity(2)) == f


def test_compose_mismatch():
    with pytest.raises(ValueError):
        compose(coface(0, 1), coface(0, 1))


def test_epi_mono_example():
    epi, mono = epi_mono_factor(OrdinalMap(2, 2, (0, 0, 2)))
    assert epi.values == (0, 0, 1)
    assert mono.values == (0, 2)


def test_epi_mono_trivial_cases():
    d = coface(1, 2)
    assert epi_mono_factor(d) == (identity(2), d)
    s = codegeneracy(0, 2)
    assert epi_mono_factor(s) == (s, identity(1))


def test_epi_mono_exhaustive():
    for dom in range(6):
        for cod in range(6):
            for f in all_maps(dom, cod):
                epi, mono = epi_mono_factor(f)
                assert compose(mono, epi) == f
                assert epi.is_surjective() and mono.is_injective()
                assert mono.image() == f.image()


def test_joyal_dual_examples():
    assert joyal_dual(identity(3)) == interval_identity(4)
    assert joyal_dual(coface(0, 0)) == IntervalMap(2, 1, (0, 0, 1))
    assert joyal_dual(codegeneracy(0, 1)) == IntervalMap(1, 2, (0, 2))


def test_joyal_inverse_examples():
    assert joyal_inverse(interval_identity(3)) == identity(2)
    assert joyal_inverse(IntervalMap(2, 1, (0, 0, 1))) == coface(0, 0)


def test_joyal_round_trip_exhaustive():
    for dom in range(5):
        for cod in range(5):
            for f in all_maps(dom, cod):
                assert joyal_inverse(joyal_dual(f)) == f


def test_joyal_dual_is_contravariant():
    for a in range(4):
        for b in range(4):
            for c in range(4):
                for f in all_maps(a, b):
                    for g in all_maps(b, c):
                        lhs = joyal_dual(compose(g, f))
                        assert lhs == interval_compose(joyal_dual(f), joyal_dual(g))


def test_generator_image_rule():
    # generator i of the dual goes to [min f^-1(i), max f^-1(i) + 1], or collapses
    for f in all_maps(3, 3):
        g = joyal_dual(f)
        for i in range(f.cod + 1):
            pre = [j for j, v in enumerate(f.values) if v == i]
            a, b = g.generator_image(i)
            if pre:
                assert (a, b) == (min(pre), max(pre) + 1)
            else:
                assert a == b


def test_cosimplicial_identities():
    for n in range(6):
        for j in range(n + 2):
            for i in range(j):
                # d_j d_i = d_i d_{j-1}
                assert compose(coface(j, n + 1), coface(i, n)) == compose(coface(i, n + 1), coface(j - 1, n))
        for j in range(n):
            for i in range(j + 1):
                # s_j s_i = s_i s_{j+1}
                assert compose(codegeneracy(j, n), codegeneracy(i, n + 1)) == compose(
                    codegeneracy(i, n), codegeneracy(j + 1, n + 1)
                )


def test_mixed_identities():
    for n in range(1, 6):
        for j in range(n):
            for i in range(n + 2):
                lhs = compose(codegeneracy(j, n + 1), coface(i, n))
                if i < j:
                    rhs = compose(coface(i, n - 1), codegeneracy(j - 1, n))
                elif i in (j, j + 1):
                    rhs = identity(n)
                else:
                    rhs = compose(coface(i - 1, n - 1), codegeneracy(j, n))
                assert lhs == rhs


@given(ordinal_maps())
def test_generator_word_rebuilds(f):
    assert from_generator_word(f.dom, generator_word(f)) == f


def test_generator_word_order():
    word = generator_word(OrdinalMap(2, 3, (0, 0, 3)))
    kinds = [k for k, _ in word]
    assert kinds == sorted(kinds, key=lambda k: k != "s")


def test_tau_pi_images():
    assert tau(2, 3).image() == frozenset(range(4))
    assert pi(2, 3).image() == frozenset(range(3, 6))
    assert tau_i(1, 2, 3).image() == frozenset({0, 1, 3, 4})
    assert pi_i(1, 2, 3).image() == frozenset({1, 2, 3})


def test_tau_i_range():
    with pytest.raises(ValueError):
        tau_i(3, 2, 3)
