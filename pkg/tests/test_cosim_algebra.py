from __future__ import annotations

import json
from fractions import Fraction
from itertools import permutations

import jsonschema
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from opad.cosim_algebra import (
    FDAlgebra,
    FieldSpec,
    MatrixInstance,
    act,
    alt,
    axiom_failures,
    cocycles,
    cohomology,
    commutativity_oracle,
    compose_perms,
    constant_instance,
    differential,
    hodge_top,
    homomorphism_failures,
    in_span,
    is_coboundary,
    is_poly_primitive,
    kernel,
    matrix_algebra,
    normalized_space,
    operator_identity_check,
    perm_sign,
    rank,
    reduced_word,
    solve,
    symmetric_ops,
    symmetry_failures,
    vadd,
    verify_n_commutativity,
)
from opad.formula_gen import bracket_formula, compile, cup_formula
from opad.instances import build_uea, forgetful_complex, invariant_complex, load_fixture, load_schema

QQ = FieldSpec(0)
F3 = FieldSpec(3)


@pytest.fixture(scope="module")
def heis():
    return forgetful_complex(build_uea(load_fixture("heisenberg")), 3)


@pytest.fixture(scope="module")
def heis_inv():
    return invariant_complex(build_uea(load_fixture("heisenberg")), 3)


# fields and linear algebra


def test_field_conversions():
    assert QQ("3/4") == QQ(3) / QQ(4)
    assert QQ.to_text(QQ(Fraction(-2, 6))) == "-1/3"
    assert F3.to_text(F3(5)) == "2"
    assert F3(Fraction(1, 2)) == F3(2)
    with pytest.raises(ZeroDivisionError):
        F3(Fraction(1, 3))
    with pytest.raises(ValueError):
        FieldSpec(4)


def test_divides_factorial():
    assert not QQ.divides_factorial(10)
    assert not F3.divides_factorial(2)
    assert F3.divides_factorial(3)


vectors = st.lists(
    st.dictionaries(st.integers(0, 4), st.integers(-3, 3), max_size=4),
    min_size=1,
    max_size=5,
)


def _dense(vs, n=5):
    return sympy.Matrix([[v.get(i, 0) for v in vs] for i in range(n)])


@settings(max_examples=60, deadline=None)
@given(vectors)
def test_rank_matches_sympy(vs):
    conv = [{k: QQ(c) for k, c in v.items() if c} for v in vs]
    assert rank(conv, QQ) == _dense(vs).rank()


@settings(max_examples=60, deadline=None)
@given(vectors)
def test_kernel_vectors_vanish(vs):
    conv = [{k: QQ(c) for k, c in v.items() if c} for v in vs]
    srcs = [{("e", j): QQ.one} for j in range(len(conv))]
    ker = kernel(srcs, conv, QQ)
    assert len(ker) == len(conv) - rank(conv, QQ)
    for w in ker:
        img: dict = {}
        for (_, j), c in w.items():
            img = vadd(img, conv[j], c)
        assert img == {}


@settings(max_examples=60, deadline=None)
@given(vectors, st.dictionaries(st.integers(0, 4), st.integers(-3, 3), max_size=3))
def test_solve_consistent_with_span(vs, target):
    conv = [{k: QQ(c) for k, c in v.items() if c} for v in vs]
    t = {k: QQ(c) for k, c in target.items() if c}
    sol = solve(conv, t, QQ)
    assert (sol is not None) == in_span(conv, t, QQ)
    if sol is not None:
        back: dict = {}
        for c, v in zip(sol, conv):
            back = vadd(back, v, c)
        assert back == t


def test_rank_over_f3():
    v = [{0: F3(1), 1: F3(1)}, {0: F3(2), 1: F3(2)}, {1: F3(1)}]
    assert rank(v, F3) == 2


# algebras


def test_matrix_algebra_laws():
    A = matrix_algebra(QQ, 2)
    assert A.dim == 4
    assert A.law_failures() == []
    e01, e10 = {1: QQ.one}, {2: QQ.one}
    assert A.multiply(e01, e10) == {0: QQ.one}
    assert A.multiply(e10, e01) == {3: QQ.one}


def test_nonassociative_table_rejected():
    # no products with the unit on the left or right of u, so the unit law fails
    with pytest.raises(ValueError):
        FDAlgebra(QQ, ["1", "u"], {(0, 0): {0: QQ.one}, (1, 1): {1: QQ.one}}, {0: QQ.one})


# instance structure


def test_axioms_hold(heis):
    assert axiom_failures(heis) == []
    assert homomorphism_failures(heis) == []
    assert symmetry_failures(heis) == []


def test_differential_squares_to_zero(heis):
    for n in range(2):
        for v in heis.component_basis(n):
            assert differential(heis, n + 1, differential(heis, n, v)) == {}


def test_differential_out_of_top_degree(heis):
    with pytest.raises(ValueError):
        differential(heis, 3, heis.unit(3))


def test_normalized_space_is_in_codegeneracy_kernels(heis):
    for n in range(1, 4):
        for v in normalized_space(heis, n):
            for i in range(n):
                assert heis.codegeneracy(i, n, v) == {}


def test_normalized_fast_path_agrees(heis):
    m = MatrixInstance.from_instance(heis, 2)
    for n in range(3):
        assert len(normalized_space(m, n)) == len(normalized_space(heis, n))


def test_constant_instance_has_no_symmetry():
    inst = constant_instance(matrix_algebra(QQ, 2), 2)
    with pytest.raises(ValueError):
        symmetric_ops(inst)
    with pytest.raises(ValueError):
        alt(inst, 2, inst.unit(2))


# cohomology


@pytest.mark.parametrize(
    "name, dims",
    [("heisenberg", (1, 3, 3)), ("sl2", (1, 3, 3)), ("abelian2", (1, 2, 1))],
)
def test_cohomology_is_exterior_algebra(name, dims):
    inst = forgetful_complex(build_uea(load_fixture(name)), 3)
    assert tuple(cohomology(inst, n).dimension for n in range(3)) == dims


def test_cohomology_representatives_are_cocycles(heis):
    H = cohomology(heis, 2)
    for v in H.representatives:
        assert differential(heis, 2, v) == {}
        assert not is_coboundary(heis, 2, v)
    with pytest.raises(ValueError):
        cohomology(heis, 3)


def test_primitives_are_cocycles(heis):
    x = heis.element({("x",): 1})
    assert differential(heis, 1, x) == {}
    assert len(cocycles(heis, 1)) == 3


# commutativity


def test_forgetful_is_1_commutative(heis):
    assert verify_n_commutativity(heis, 1, 3)
    rep = verify_n_commutativity(heis, 2, 3)
    assert not rep and rep.witness is not None


def test_invariant_is_2_commutative(heis_inv):
    rep = verify_n_commutativity(heis_inv, 2, 3)
    assert rep and rep.checked > 0


def test_generating_pairs_match_oracle(heis):
    small = MatrixInstance.from_instance(heis, 2)
    for n in (1, 2):
        assert bool(verify_n_commutativity(small, n, 2)) == bool(commutativity_oracle(small, n, 2))


def test_noncommutative_constant_instance_fails():
    inst = constant_instance(matrix_algebra(QQ, 2), 2)
    rep = verify_n_commutativity(inst, 1, 2)
    assert not rep
    assert rep.witness[:2] == ((0,), (0,))


# symmetric structure


def test_reduced_word_and_sign():
    for perm in permutations(range(1, 5)):
        word = reduced_word(perm)
        assert perm_sign(perm) == (-1) ** len(word)
    assert reduced_word((2, 1, 3)) == [1]


def test_action_is_a_group_action(heis):
    v = heis.element({("x", "y", "z"): 1, ("x^2", "y", "1"): 2})
    for s in permutations(range(1, 4)):
        for t in permutations(range(1, 4)):
            assert act(heis, s, 3, act(heis, t, 3, v)) == act(heis, compose_perms(s, t), 3, v)


def test_alt_is_idempotent(heis):
    v = heis.element({("x", "y"): 1, ("z", "x"): 3})
    a = alt(heis, 2, v)
    assert alt(heis, 2, a) == a


def test_alt_refuses_small_characteristic():
    inst = forgetful_complex(build_uea(load_fixture("heisenberg", 3)), 3)
    with pytest.raises(ValueError):
        alt(inst, 3, inst.unit(3))


def test_alt_kills_coboundaries(heis):
    for n in range(1, 3):
        for v in heis.component_basis(n):
            assert alt(heis, n + 1, differential(heis, n, v)) == {}


def test_poly_primitive_examples(heis):
    xy = heis.element({("x", "y"): 1})
    assert is_poly_primitive(heis, 2, xy)
    assert not is_poly_primitive(heis, 2, heis.element({("x^2", "y"): 1}))


def test_hodge_top_dimensions(heis, heis_inv):
    assert [len(hodge_top(heis, n)) for n in (1, 2)] == [3, 3]
    assert [len(hodge_top(heis_inv, n)) for n in (1, 2)] == [1, 2]


@pytest.mark.parametrize("n", [2, 3])
def test_operator_identity(n):
    inst = forgetful_complex(build_uea(load_fixture("heisenberg"), 2), 4)
    assert operator_identity_check(inst, n)


# operations


def test_cup_graded_commutative_in_cohomology(heis):
    cup = compile(cup_formula(1, 1, 0), heis)
    cup1 = compile(cup_formula(1, 1, 1), heis)
    gens = [heis.element({(s,): 1}) for s in "xyz"]
    for a in gens:
        for b in gens:
            # a b + b a is minus the coboundary of a cup_1 b
            assert vadd(cup(a, b), cup(b, a)) == vadd({}, differential(heis, 1, cup1(a, b)), -1)


def test_bracket_degree_one_vanishes_on_invariant(heis_inv):
    br = compile(bracket_formula(1, 1, 1), heis_inv)
    basis = normalized_space(heis_inv, 1)
    for a in basis:
        for b in basis:
            assert br(a, b) == {}


# serialization


def test_matrix_instance_round_trip(heis):
    m = MatrixInstance.from_instance(heis, 2)
    data = json.loads(m.dumps())
    jsonschema.validate(data, load_schema("instance.schema.json"))
    back = MatrixInstance.from_json(data)
    assert back.dumps() == m.dumps()
    assert axiom_failures(back) == []
    assert cohomology(back, 1).dimension == 3


def test_constant_instance_json_has_null_symmetry():
    inst = constant_instance(matrix_algebra(F3, 1), 2)
    data = inst.to_json()
    assert data["symmetry"] is None
    assert MatrixInstance.from_json(data).field == F3
