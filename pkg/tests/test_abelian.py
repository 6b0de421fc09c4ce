import math

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

import oracles
from kperf.abelian import (
    AbelianGroupError,
    GroupHom,
    IntMatrix,
    cokernel,
    cyclic_group,
    element_equal,
    free_group,
    group_from_relations,
    hom_is_well_defined,
    image,
    kernel,
    quotient,
    smith_normal_form,
    subgroup_generated,
    torsion_subgroup,
)


def matrices(max_dim=8, bound=50):
    return st.integers(0, max_dim).flatmap(
        lambda r: st.integers(0, max_dim).flatmap(
            lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r)
            .map(lambda rows: IntMatrix(rows, r, c))
        )
    )


def check_smith(A: IntMatrix):
    S = smith_normal_form(A)
    assert S.U @ A @ S.V == S.D
    assert abs(S.U.det()) == 1 and abs(S.V.det()) == 1
    assert S.V @ S.V_inv == IntMatrix.identity(A.cols)
    diag = S.diagonal
    for i in range(S.D.rows):
        for j in range(S.D.cols):
            if i != j:
                assert S.D[i, j] == 0
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[: len(nz)] == tuple(nz), "zeros come last"
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return S


@given(matrices())
def test_smith_form_properties(A):
    check_smith(A)


@given(matrices(max_dim=5, bound=30))
def test_smith_factors_match_sympy(A):
    S = smith_normal_form(A)
    if A.rows == 0 or A.cols == 0:
        assert S.invariant_factors == ()
        return
    expected = tuple(int(d) for d in invariant_factors(Matrix(A.tolist()), domain=ZZ) if d != 0)
    assert tuple(d for d in S.diagonal if d) == tuple(abs(d) for d in expected)


def test_smith_examples():
    assert smith_normal_form(IntMatrix.identity(2)).diagonal == (1, 1)
    assert smith_normal_form(IntMatrix.zeros(2, 2)).invariant_factors == ()
    S = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
    assert S.invariant_factors == (2, 4)
    assert S.diagonal[0] == math.gcd(2, 4, 6, 8) and S.diagonal[0] * S.diagonal[1] == 8
    assert smith_normal_form(IntMatrix([], 0, 3)).diagonal == ()


def test_smith_large_entries():
    big = 10**40 + 7
    A = IntMatrix([[big, 3 * big], [5, big * big]])
    S = check_smith(A)
    assert math.prod(S.diagonal) == abs(A.det())


def test_smith_is_deterministic():
    A = IntMatrix([[4, -6, 2], [8, 3, 1]])
    assert smith_normal_form(A) == smith_normal_form(A)


def test_group_examples():
    Z12 = group_from_relations(1, [[12]])
    assert (Z12.free_rank, Z12.torsion_factors) == (0, (12,))
    Z2 = group_from_relations(2)
    assert Z2.free_rank == 2 and Z2.torsion_factors == ()
    G = group_from_relations(3, [[2, 0, 0], [0, 3, 0]])
    assert (G.free_rank, G.torsion_factors) == (1, (6,))
    T = group_from_relations(0)
    assert T.is_trivial() and T.order == 1
    with pytest.raises(AbelianGroupError):
        group_from_relations(2, [[1, 2, 3]])


@given(st.integers(1, 2).flatmap(
    lambda k: st.lists(st.lists(st.integers(-12, 12), min_size=k, max_size=k), min_size=k, max_size=k + 2)))
def test_torsion_order_against_coset_enumeration(rows):
    k = len(rows[0])
    A = group_from_relations(k, rows)
    if not A.is_finite:
        return
    # N = |Z^k/R| kills the quotient, so N e_i lies in the relation span
    N = A.order
    if N ** k > 10**4:
        return
    assert oracles.quotient_order(k, rows, N) == N == math.prod(A.torsion_factors)


def test_well_definedness():
    Z12 = cyclic_group(12)
    assert hom_is_well_defined(Z12, Z12, IntMatrix([[2]])).ok
    w = hom_is_well_defined(cyclic_group(2), free_group(1), IntMatrix([[1]]))
    assert not w.ok and w.violating_relation == 0
    assert hom_is_well_defined(free_group(2), free_group(2), IntMatrix([[2, 0], [1, 4]])).ok
    with pytest.raises(AbelianGroupError):
        GroupHom(cyclic_group(2), free_group(1), [[1]])


def test_element_equal_examples():
    Z12 = cyclic_group(12)
    assert element_equal(Z12.element([13]), Z12.element([1]))
    Z = free_group(1)
    assert not element_equal(Z.element([1]), Z.element([-1]))
    G = group_from_relations(3, [[2, 0, 0], [0, 3, 0]])
    assert element_equal(G.element([0, 3, 0]), G.element([0, -3, 0]))
    with pytest.raises(AbelianGroupError):
        element_equal(Z.element([1]), Z12.element([1]))


def test_element_equal_matches_cosets():
    # Z/2 + Z/3 presented on three generators with a redundant one
    rels = [[2, 0, 0], [0, 3, 0], [0, 0, 1]]
    G = group_from_relations(3, rels)
    sub = oracles.closure([tuple(c % 6 for c in r) for r in rels], (6, 6, 6))
    box = oracles.elements((6, 6, 6))[::7]
    for x in box:
        for y in box[:20]:
            same = tuple((a - b) % 6 for a, b in zip(x, y)) in sub
            assert element_equal(G.element(x), G.element(y)) == same


@given(st.lists(st.integers(-30, 30), min_size=3, max_size=3), st.lists(st.integers(-30, 30), min_size=3, max_size=3),
       st.lists(st.integers(-30, 30), min_size=3, max_size=3))
def test_element_equal_is_a_congruence(x, y, z):
    G = group_from_relations(3, [[4, 2, 0], [0, 6, 0]])
    a, b, c = G.element(x), G.element(y), G.element(z)
    assert element_equal(a, a)
    assert element_equal(a, b) == element_equal(b, a)
    b2 = G.element([x[0] + 4, x[1] + 2, x[2]])
    assert element_equal(a, b2)
    assert element_equal(a + c, b2 + c)
    if element_equal(a, b) and element_equal(b, c):
        assert element_equal(a, c)


def _random_hom(draw, A, B):
    cols = [draw(st.lists(st.integers(-5, 5), min_size=B.num_generators, max_size=B.num_generators))
            for _ in range(A.num_generators)]
    M = [[cols[j][i] for j in range(A.num_generators)] for i in range(B.num_generators)]
    return M


@st.composite
def hom_pairs(draw):
    mods = [draw(st.sampled_from([0, 2, 3, 4, 6, 12])) for _ in range(3)]
    groups = [group_from_relations(1, [[n]]) if n else free_group(1) for n in mods]
    A, B, C = groups
    return A, B, C, _random_hom(draw, A, B), _random_hom(draw, B, C)


@given(hom_pairs())
def test_composition(data):
    A, B, C, M1, M2 = data
    if not (hom_is_well_defined(A, B, M1).ok and hom_is_well_defined(B, C, M2).ok):
        return
    h, g = GroupHom(A, B, M1), GroupHom(B, C, M2)
    gh = g @ h
    assert gh.matrix == IntMatrix(M2) @ IntMatrix(M1)
    assert hom_is_well_defined(A, C, gh.matrix).ok
    assert GroupHom.identity(B) @ h == h
    for x in ([1], [5], [-7]):
        assert gh(A.element(x)) == g(h(A.element(x)))


def test_kernel_examples():
    Z = free_group(1)
    assert kernel(GroupHom.scalar(Z, 2)).is_trivial()
    Z12 = cyclic_group(12)
    K = kernel(GroupHom.scalar(Z12, 2))
    assert K.group.torsion_factors == (2,)
    assert {x.canonical for x in K.elements()} == {Z12.element([0]).canonical, Z12.element([6]).canonical}
    Z2 = cyclic_group(2)
    assert kernel(GroupHom.scalar(Z2, 0)).group.torsion_factors == (2,)


def test_cokernel_examples():
    Z = free_group(1)
    assert cokernel(GroupHom.scalar(Z, 5)).group.torsion_factors == (5,)
    Z2 = free_group(2)
    assert cokernel(GroupHom.identity(Z2)).group.is_trivial()
    Q = cokernel(GroupHom(Z2, Z2, [[2, 4], [6, 8]]))
    assert Q.group.torsion_factors == (2, 4) and Q.group.order == 8


def test_torsion_subgroup_examples():
    assert torsion_subgroup(free_group(1), 2).is_trivial()
    Z12 = cyclic_group(12)
    for ell, expected in ((2, {0, 6}), (3, {0, 4, 8})):
        T = torsion_subgroup(Z12, ell)
        got = {Z12.canonical(x.coords)[0] for x in T.elements()}
        assert got == expected


@given(st.lists(st.sampled_from([1, 2, 3, 4, 6, 8, 9]), min_size=1, max_size=3), st.integers(2, 6))
def test_torsion_subgroup_matches_enumeration(moduli, ell):
    A = group_from_relations(len(moduli), [[n if i == j else 0 for j in range(len(moduli))] for i, n in enumerate(moduli)])
    T = torsion_subgroup(A, ell)
    got = {A.canonical(x.coords) for x in T.elements()}
    brute = {A.canonical(x) for x in oracles.elements(moduli) if all((ell * a) % n == 0 for a, n in zip(x, moduli))}
    assert got == brute


@given(st.lists(st.sampled_from([2, 3, 4, 6]), min_size=1, max_size=2), st.data())
def test_image_kernel_orders(moduli, data):
    k = len(moduli)
    A = group_from_relations(k, [[n if i == j else 0 for j in range(k)] for i, n in enumerate(moduli)])
    M = data.draw(st.lists(st.lists(st.integers(0, 11), min_size=k, max_size=k), min_size=k, max_size=k))
    if not oracles.well_defined(M, moduli):
        return
    h = GroupHom(A, A, M)
    img = {oracles.apply(M, x, moduli) for x in oracles.elements(moduli)}
    assert image(h).group.order == len(img)
    assert kernel(h).group.order * len(img) == A.order
    assert cokernel(h).group.order * len(img) == A.order


def test_quotient_and_subgroup():
    Z2 = free_group(2)
    Q = quotient(Z2, [Z2.element([2, 0]), Z2.element([0, 3])])
    assert Q.group.torsion_factors == (6,)
    S = subgroup_generated(Z2, [Z2.element([2, 2]), Z2.element([4, 0])])
    assert S.contains(Z2.element([0, 4])) and not S.contains(Z2.element([2, 0]))
