import itertools

import numpy as np
import pytest

import oracles
from kperf.abelian import GroupHom, cyclic_group, free_group, group_from_relations
from kperf.jsonio import InputError
from kperf.perfection import (
    KGroupDatum,
    PerfectionError,
    TruncatedPolyAlgebra,
    delta_datum,
    frobenius_is_multiplicative,
    scaling_iteration_consistent,
    units_group,
    verify_k0_splitting,
    verify_main_theorem_k1,
    verify_negative_k_scaling,
    verify_ptorsion_remark,
)

GRID = [(p, m) for p in (2, 3, 5) for m in (2, 3, 4)]


def brute_units(p, m):
    A = TruncatedPolyAlgebra(p, m)
    units = [u for u in itertools.product(range(p), repeat=m) if u[0]]
    return A, units


def test_algebra_arithmetic():
    A = TruncatedPolyAlgebra(3, 3)
    t = A.t_power(1)
    assert A.mul(t, A.t_power(2)) == A.zero()
    assert A.pow(A.element([1, 1]), 3) == A.element([1, 0, 0])
    with pytest.raises(PerfectionError):
        TruncatedPolyAlgebra(4, 2)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2)])
def test_frobenius_is_a_ring_endomorphism(p, m):
    A = TruncatedPolyAlgebra(p, m)
    elems = list(itertools.product(range(p), repeat=m))
    F = A.frobenius
    for x in elems:
        for y in elems:
            assert F(A.add(x, y)) == A.add(F(x), F(y))
            assert F(A.mul(x, y)) == A.mul(F(x), F(y))


def test_units_examples():
    G = units_group(2, 3)
    assert G.group.torsion_factors == (4,)
    assert G.generators == [(1, 1, 0)]
    A = G.algebra
    assert A.frobenius((1, 1, 0)) == (1, 0, 1)
    assert G.log((1, 0, 1)) == 2 * G.log((1, 1, 0))

    G = units_group(3, 2)
    assert G.group.torsion_factors == (6,)  # Z/2 + Z/3
    for a in range(3):
        assert G.algebra.pow((1, a), 3) == (1, 0)
    assert G.frobenius.canonical_matrix() == [[3]]

    G = units_group(2, 2)
    assert G.group.torsion_factors == (2,)
    assert G.algebra.frobenius((1, 1)) == (1, 0)
    assert G.frobenius.is_zero()


@pytest.mark.parametrize("p,m", GRID)
def test_units_group_against_enumeration(p, m):
    A, units = brute_units(p, m)
    G = units_group(p, m)
    assert G.size == len(units) == (p - 1) * p ** (m - 1) == G.group.order
    assert G.group.torsion_factors == oracles.invariants_from_orders([A.multiplicative_order(u) for u in units])
    # log is a bijective homomorphism and exp inverts it
    logs = {u: G.log(u) for u in units}
    assert len({x.canonical for x in logs.values()}) == len(units)
    for u in units[:15]:
        assert G.exp(logs[u]) == u
        for v in units[:15]:
            assert logs[A.mul(u, v)] == logs[u] + logs[v]
    for u in units:
        assert G.frobenius(logs[u]) == logs[A.frobenius(u)]


@pytest.mark.parametrize("p,m", GRID)
def test_main_theorem_desk_scale(p, m):
    rep = verify_main_theorem_k1(p, m)
    assert rep.colimit == rep.localization == rep.perfection_units
    assert rep.holds
    # independent: the stable image under x -> x^p by plain sets
    A, units = brute_units(p, m)
    S = set(units)
    while True:
        S2 = {A.frobenius(u) for u in S}
        if len(S2) == len(S):
            break
        S = S2
    assert len(S) == p - 1
    assert oracles.invariants_from_orders([A.multiplicative_order(u) for u in S]) == rep.colimit
    assert rep.checks["colimit_order_prime_to_p"]


def test_main_theorem_examples():
    assert verify_main_theorem_k1(2, 3).to_dict()["colimit_under_frobenius"] == "0"
    r = verify_main_theorem_k1(3, 2)
    assert r.colimit == r.localization == r.perfection_units == (2,)
    r = verify_main_theorem_k1(5, 2)
    assert r.unit_group == (20,) and r.colimit == (4,)


def test_perfection_is_prime_field():
    for p, m in GRID:
        assert TruncatedPolyAlgebra(p, m).perfection_check()["is_prime_field"]


def test_frobenius_multiplicative_sampled():
    G = units_group(3, 4)
    assert frobenius_is_multiplicative(G)
    assert frobenius_is_multiplicative(G, max_pairs=500)


def test_size_bound():
    with pytest.raises(PerfectionError):
        units_group(2, 22)
    with pytest.raises(PerfectionError):
        units_group(3, 5, bound=100)


@pytest.mark.parametrize("p,m", GRID + [(7, 2), (2, 6), (3, 5)])
def test_ptorsion(p, m):
    rep = verify_ptorsion_remark(p, m)
    assert rep.holds and rep.order == p
    A = TruncatedPolyAlgebra(p, m)
    assert any(rep.nilpotent) and A.pow(rep.nilpotent, p) == A.zero()


def test_ptorsion_examples():
    assert verify_ptorsion_remark(2, 2).description == "t"
    assert verify_ptorsion_remark(3, 2).description == "t"
    r = verify_ptorsion_remark(2, 3)
    assert r.description == "t^2" and r.order == 2
    with pytest.raises(PerfectionError):
        verify_ptorsion_remark(2, 1)


def test_datum_round_trip_and_errors():
    d = delta_datum(2)
    again = KGroupDatum.from_json(d.to_json())
    assert again == d
    bad = d.to_json()
    bad["frobenius"] = {"matrix": [["1", "0"]]}
    with pytest.raises(InputError):
        KGroupDatum.from_json(bad)
    with pytest.raises(InputError):
        KGroupDatum.from_json({"label": "x"})


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_negative_k_identity_model(n, p):
    d = delta_datum(n)
    rep = verify_negative_k_scaling(d, p)
    assert rep.theta_prime == [[p**n]]
    assert rep.holds and rep.localization == f"Z[1/{p}]"
    assert scaling_iteration_consistent(d, p)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_negative_k_finite_prime_to_p(q):
    A = cyclic_group(q)
    for f in range(q):
        d = KGroupDatum("test", A, GroupHom.scalar(A, f), -1)
        rep = verify_negative_k_scaling(d, 2)
        # A/2A and A[2] vanish, so only invertibility of 2f mod q matters
        assert rep.holds == (np.gcd(2 * f, q) == 1)
        assert scaling_iteration_consistent(d, 2)


def test_negative_k_trivial_and_errors():
    O = free_group(0)
    assert verify_negative_k_scaling(KGroupDatum("0", O, GroupHom.identity(O), -1), 2).holds
    Z = free_group(1)
    with pytest.raises(PerfectionError):
        verify_negative_k_scaling(KGroupDatum("x", Z, GroupHom.identity(Z), 0), 2)


def test_iteration_consistency_on_torsion():
    A = group_from_relations(2, [[4, 0], [0, 3]])
    theta = GroupHom(A, A, [[1, 0], [0, 2]])
    for i in (1, 2, 3):
        assert scaling_iteration_consistent(KGroupDatum("t", A, theta, -i), 2)


def test_k0_splitting_examples():
    O = free_group(0)
    assert verify_k0_splitting(1, KGroupDatum("0", O, GroupHom.identity(O), 0), 2).predicted == "Z"
    for p in (2, 3):
        Zp = cyclic_group(p)
        r = verify_k0_splitting(2, KGroupDatum("t", Zp, GroupHom.scalar(Zp, 0), 0), p)
        assert r.predicted == "Z^2" and r.holds
        Z = free_group(1)
        r = verify_k0_splitting(1, KGroupDatum("z", Z, GroupHom.scalar(Z, p), 0), p)
        assert r.predicted == f"Z + Z[1/{p}]" and r.holds
    Z2 = cyclic_group(2)
    r = verify_k0_splitting(1, KGroupDatum("id", Z2, GroupHom.identity(Z2), 0), 2)
    assert not r.holds and r.predicted == "Z + Z/2"
    with pytest.raises(PerfectionError):
        verify_k0_splitting(1, delta_datum(1), 2)
