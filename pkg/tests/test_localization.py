import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from kperf.abelian import GroupHom, cyclic_group, free_group, group_from_relations
from kperf.localization import (
    BudgetExceeded,
    ConditionFailure,
    DirectLimit,
    check_condition_a,
    check_condition_b,
    check_condition_c,
    colim_equal,
    comparison_map,
    lemell_check,
    localize,
    localized_hom,
)


def diagonal_group(moduli):
    k = len(moduli)
    return group_from_relations(k, [[n if i == j else 0 for j in range(k)] for i, n in enumerate(moduli)])


def paper_endo(ell):
    Z2 = free_group(2)
    return GroupHom(Z2, Z2, [[ell, 0], [1, ell * ell]])


@st.composite
def finite_systems(draw, max_order=1000):
    """(moduli, T, ell) with T a well-defined endomorphism of prod Z/moduli."""
    k = draw(st.integers(1, 3))
    moduli = draw(st.lists(st.sampled_from([2, 3, 4, 5, 6, 8, 9, 10, 12]), min_size=k, max_size=k))
    while len(oracles.elements(moduli)) > max_order:
        moduli = moduli[:-1]
    k = len(moduli)
    T = [[0] * k for _ in range(k)]
    for j in range(k):
        for i in range(k):
            # image of e_j in coordinate i must be killed by n_j: multiples of n_i / gcd(n_i, n_j)
            step = moduli[i] // __import__("math").gcd(moduli[i], moduli[j])
            T[i][j] = step * draw(st.integers(0, 10))
    ell = draw(st.sampled_from([2, 3, 4, 5, 6]))
    return moduli, T, ell


def test_localize_examples():
    assert localize(cyclic_group(12), 2).torsion == (3,)
    L = localize(free_group(2), 3)
    assert L.free_rank == 2 and L.describe() == "Z[1/3]^2"
    assert localize(cyclic_group(4), 2).is_trivial()
    with pytest.raises(ValueError):
        localize(free_group(1), 1)


def test_localized_hom_examples():
    Z = free_group(1)
    assert localized_hom(GroupHom.scalar(Z, 2), 2).is_automorphism()
    assert not localized_hom(GroupHom.scalar(Z, 0), 2).is_automorphism()
    e = localized_hom(paper_endo(2), 2)
    assert e.free_det() == 8 and e.is_automorphism()


def test_condition_examples():
    Z = free_group(1)
    for p in (2, 3, 5):
        assert check_condition_a(GroupHom.scalar(Z, p), p).holds
    zero = check_condition_a(GroupHom.scalar(Z, 0), 3)
    assert not zero.holds and zero.witness
    assert check_condition_a(paper_endo(2), 2).holds

    b = check_condition_b(GroupHom.scalar(Z, 2), 2)
    assert b.holds and b.witness["exponents"] == [1]
    assert not check_condition_b(GroupHom.identity(Z), 2).holds
    assert check_condition_b(paper_endo(2), 2).witness["exponents"][0] == 2

    assert check_condition_c(paper_endo(3), 3).holds
    Z2 = cyclic_group(2)
    c = check_condition_c(GroupHom.identity(Z2), 2)
    assert not c.holds and c.witness
    Z4 = cyclic_group(4)
    assert check_condition_c(GroupHom.scalar(Z4, 2), 2).holds


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_paper_example(ell):
    rep = lemell_check(paper_endo(ell), ell)
    assert rep.cond_a.holds and rep.cond_b.holds and rep.cond_c.holds and rep.overall


def test_lemell_examples():
    Z = free_group(1)
    rep = lemell_check(GroupHom.scalar(Z, 0), 2)
    assert not rep.overall and rep.failing() == ["a"]
    Z4 = cyclic_group(4)
    rep = lemell_check(GroupHom.scalar(Z4, 6), 2)
    assert rep.overall
    d = rep.to_dict()
    assert set(d) >= {"cond_a", "cond_b", "cond_c", "overall", "witnesses"}


def test_every_negative_verdict_has_a_witness():
    Z2 = cyclic_group(2)
    rep = lemell_check(GroupHom.identity(Z2), 2)
    assert rep.failing() == ["b", "c"]
    for name in rep.failing():
        assert rep.to_dict()["witnesses"][f"cond_{name}"]


def test_colim_equal_examples():
    Z = free_group(1)
    lim = DirectLimit(GroupHom.scalar(Z, 2))
    assert colim_equal(lim.element([1], 0), lim.element([2], 1))
    assert not colim_equal(lim.element([1], 0), lim.element([3], 1))
    Z4 = cyclic_group(4)
    lim4 = DirectLimit(GroupHom.scalar(Z4, 2))
    assert colim_equal(lim4.element([1], 0), lim4.element([0], 0))
    with pytest.raises(ValueError):
        colim_equal(lim.element([1], 0), lim4.element([1], 0))


def test_comparison_map_examples():
    Z = free_group(1)
    for ell in (2, 3, 5):
        phi = comparison_map(GroupHom.scalar(Z, ell), ell)
        lim = phi.limit
        assert phi(lim.element([1], 1)).free == (Fraction(1, ell),)
        assert phi(lim.element([ell], 1)).free == (Fraction(1),)
    phi = comparison_map(paper_endo(2), 2)
    e1 = phi.limit.element([1, 0], 0)
    assert phi(e1).free == (Fraction(1), Fraction(0))
    with pytest.raises(ConditionFailure):
        comparison_map(GroupHom.scalar(Z, 0), 2)


def test_comparison_map_bijective_on_samples():
    rng = random.Random(5)
    phi = comparison_map(paper_endo(2), 2)
    lim = phi.limit
    seen = {}
    for _ in range(120):
        x = lim.element([rng.randint(-20, 20), rng.randint(-20, 20)], rng.randint(0, 4))
        z = phi(x)
        # surjective onto what we hit, and the preimage maps back
        back = phi.preimage(z)
        assert colim_equal(back, x)
        for w, y in seen.items():
            if w == z:
                assert colim_equal(x, y)
        seen.setdefault(z, x)
    # a generic element of Z[1/2]^2 has a preimage
    target = phi.target
    z = target.element([Fraction(3, 8), Fraction(-5, 32)], [])
    assert phi(phi.preimage(z)) == z


def test_comparison_on_finite_group():
    A = diagonal_group([4, 3])
    theta = GroupHom(A, A, [[2, 0], [0, 2]])
    phi = comparison_map(theta, 2)
    for x in A.elements():
        for i in range(3):
            c = phi.limit.element(x.coords, i)
            assert colim_equal(phi.preimage(phi(c)), c)


@given(finite_systems())
def test_lemell_sound_and_converse_on_finite_groups(system):
    moduli, T, ell = system
    A = diagonal_group(moduli)
    theta = GroupHom(A, A, T)
    rep = lemell_check(theta, ell)
    brute = oracles.colimit_is_localization(T, moduli, ell)
    assert rep.overall == brute
    if rep.overall:
        colim = oracles.finite_colimit_invariants(T, moduli)
        assert colim == localize(A, ell).torsion == oracles.strip_invariants(A.torsion_factors, ell)


@given(finite_systems(max_order=200))
def test_colim_equal_against_orbits(system):
    moduli, T, _ = system
    A = diagonal_group(moduli)
    lim = DirectLimit(GroupHom(A, A, T))
    pts = oracles.elements(moduli)[:12]
    n = len(oracles.elements(moduli))

    f = {x: oracles.apply(T, x, moduli) for x in oracles.elements(moduli)}

    def iterate(x, k):
        for _ in range(k):
            x = f[x]
        return x

    for x in pts:
        for y in pts:
            for i, j in ((0, 0), (0, 1), (2, 0)):
                m = max(i, j) + n
                brute = iterate(x, m - i) == iterate(y, m - j)
                assert colim_equal(lim.element(x, i), lim.element(y, j)) == brute


def test_colim_equal_equivalence_and_addition():
    rng = random.Random(1)
    A = diagonal_group([8, 6])
    lim = DirectLimit(GroupHom(A, A, [[2, 0], [0, 3]]))
    els = [lim.element([rng.randrange(8), rng.randrange(6)], rng.randrange(3)) for _ in range(25)]
    for x in els:
        assert colim_equal(x, x)
        for y in els:
            assert colim_equal(x, y) == colim_equal(y, x)
            if colim_equal(x, y):
                for z in els[:5]:
                    assert colim_equal(x + z, y + z)


@given(st.lists(st.sampled_from([0, 0, 2, 3, 4, 6, 12, 18]), min_size=1, max_size=3), st.sampled_from([2, 3, 6, 10]))
def test_localize_idempotent(moduli, ell):
    A = diagonal_group(moduli)
    L = localize(A, ell)
    again = localize(L, ell)
    assert again.isomorphic(L) and again.describe() == L.describe()


@given(st.lists(st.sampled_from([3, 5, 7, 9]), min_size=1, max_size=2), st.data())
def test_prime_to_ell_automorphism(moduli, data):
    """|A| coprime to ell and theta invertible: true, and colim_theta A ~ A."""
    A = diagonal_group(moduli)
    k = len(moduli)
    units = [u for u in range(1, 10)]
    diag = [data.draw(st.sampled_from([u for u in units if __import__("math").gcd(u, n) == 1])) for n in moduli]
    T = [[diag[i] if i == j else 0 for j in range(k)] for i in range(k)]
    theta = GroupHom(A, A, T)
    assert lemell_check(theta, 2).overall
    assert oracles.finite_colimit_invariants(T, moduli) == A.torsion_factors


@given(finite_systems(max_order=300), st.randoms(use_true_random=False))
def test_condition_b_on_random_elements(system, rnd):
    moduli, T, ell = system
    A = diagonal_group(moduli)
    theta = GroupHom(A, A, T)
    if not check_condition_b(theta, ell).holds:
        return
    n = len(oracles.elements(moduli))
    for _ in range(50):
        x = tuple(rnd.randrange(m) for m in moduli)
        y, ok = x, False
        for _ in range(n + 1):
            if all(c % __import__("math").gcd(ell, m) == 0 for c, m in zip(y, moduli)):
                ok = True
                break
            y = oracles.apply(T, y, moduli)
        assert ok


def test_budget_is_enforced():
    A = cyclic_group(1024)
    theta = GroupHom(A, A, [[3]])
    # A[2] = {0, 512} and theta is the identity there: needs 1 step to decide
    with pytest.raises(BudgetExceeded):
        check_condition_b(GroupHom(diagonal_group([2] * 10), diagonal_group([2] * 10),
                                   [[1 if j == (i + 1) % 10 else 0 for j in range(10)] for i in range(10)]), 2, budget=3)
    assert not check_condition_c(theta, 2).holds


def test_composite_ell():
    A = diagonal_group([4, 9, 5])
    L = localize(A, 6)
    assert L.torsion == (5,) and L.primes == (2, 3)
    rep = lemell_check(GroupHom.scalar(A, 6), 6)
    assert rep.overall
