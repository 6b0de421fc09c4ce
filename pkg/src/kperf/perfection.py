"""Frobenius perfection of ``F_p[t]/(t^m)`` and a units model of ``K_1``.

For these local rings ``K_1`` is the unit group, so the statement
``K_1(R_perf) = K_1(R)[1/p]`` can be checked by finite enumeration: the
colimit of the units along ``x -> x^p`` is the stable image of Frobenius.

Negative K-groups are not computed here.  :class:`KGroupDatum` carries a
user-supplied group with its Frobenius action, and
:func:`verify_negative_k_scaling` checks what the rescaled map
``p^i K_{-i}(Fr)`` implies about it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

import numpy as np

from . import kernels
from .abelian import FGAbelianGroup, GroupElement, GroupHom, group_from_relations
from .brute import finite_colimit, invariant_factors_from_orders
from .jsonio import InputError, group_from_json, group_to_json, hom_from_json, parse_int
from .localization import lemell_check, localize, prime_factors

UNIT_BOUND = 10**6


class PerfectionError(ValueError):
    pass


def is_prime(p: int) -> bool:
    return p >= 2 and prime_factors(p) == (p,)


class TruncatedPolyAlgebra:
    """``F_p[t]/(t^m)``; elements are length-``m`` coefficient tuples, constant first."""

    def __init__(self, p: int, m: int):
        if not is_prime(p):
            raise PerfectionError(f"p = {p} is not prime")
        if m < 1:
            raise PerfectionError(f"truncation order must be >= 1, got {m}")
        self.p, self.m = p, m

    def __repr__(self):
        return f"F_{self.p}[t]/(t^{self.m})"

    @property
    def size(self) -> int:
        return self.p**self.m

    def element(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        c = [int(a) % self.p for a in coeffs][: self.m]
        return tuple(c + [0] * (self.m - len(c)))

    def one(self) -> tuple[int, ...]:
        return self.element([1])

    def zero(self) -> tuple[int, ...]:
        return self.element([])

    def t_power(self, k: int) -> tuple[int, ...]:
        return self.element([0] * k + [1]) if k < self.m else self.zero()

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b) -> tuple[int, ...]:
        out = [0] * self.m
        for i, x in enumerate(a):
            if x:
                for j in range(self.m - i):
                    out[i + j] = (out[i + j] + x * b[j]) % self.p
        return tuple(out)

    def pow(self, a, e: int) -> tuple[int, ...]:
        result, base = self.one(), tuple(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def frobenius(self, a) -> tuple[int, ...]:
        return self.pow(a, self.p)

    def is_unit(self, a) -> bool:
        return a[0] % self.p != 0

    def multiplicative_order(self, a) -> int:
        if not self.is_unit(a):
            raise PerfectionError(f"{self.describe(a)} is not a unit")
        x, n = tuple(a), 1
        while x != self.one():
            x, n = self.mul(x, a), n + 1
        return n

    def elements(self):
        codes = np.arange(self.size, dtype=np.int64)
        return kernels.decode(codes, self.p, self.m)

    def describe(self, a) -> str:
        terms = []
        for i, c in enumerate(a):
            if c:
                mono = "1" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(mono if c == 1 and i else (f"{c}" if i == 0 else f"{c}*{mono}"))
        return " + ".join(terms) if terms else "0"

    def perfection_check(self) -> dict:
        """Element-level colimit of ``R`` along Frobenius.

        Returns the stable image of ``Fr`` on all of ``R`` and whether it is
        the prime field (constants, on which ``Fr`` is the identity).
        """
        X = self.elements()
        codes = set(kernels.encode(X, self.p).tolist())
        step = 0
        while True:
            Y = kernels.poly_pow(X, self.p, self.p)
            new = np.unique(kernels.encode(Y, self.p))
            step += 1
            if len(new) == len(codes):
                break
            codes = set(new.tolist())
            X = kernels.decode(new, self.p, self.m)
        stable = sorted(codes)
        constants = list(range(self.p))
        fixed = all(self.frobenius(self.element([c])) == self.element([c]) for c in constants)
        return {
            "stable_image_size": len(stable),
            "is_prime_field": stable == constants and fixed,
            "steps": step,
        }


# ---------------------------------------------------------------------------
# units


@dataclass
class UnitsGroup:
    """``R^x`` with an explicit group structure.

    ``generators[i]`` is the unit sent to the ``i``-th generator of ``group``;
    ``log`` and ``exp`` translate between units and group elements.
    """

    algebra: TruncatedPolyAlgebra
    group: FGAbelianGroup
    generators: list[tuple[int, ...]]
    units: np.ndarray  # (N, m) coefficient rows, sorted by code
    orders: np.ndarray  # multiplicative order of each row
    dlog: np.ndarray  # (N, r) coordinates on the generators
    _index: np.ndarray = field(repr=False)  # code -> row, -1 for non-units

    @property
    def size(self) -> int:
        return self.units.shape[0]

    def index(self, unit) -> int:
        code = kernels.encode(np.asarray([self.algebra.element(unit)]), self.algebra.p)[0]
        i = int(self._index[code])
        if i < 0:
            raise PerfectionError(f"{self.algebra.describe(unit)} is not a unit")
        return i

    def unit(self, i: int) -> tuple[int, ...]:
        return tuple(int(a) for a in self.units[i])

    def log(self, unit) -> GroupElement:
        return self.group.element([int(c) for c in self.dlog[self.index(unit)]])

    def exp(self, x: GroupElement | Sequence[int]) -> tuple[int, ...]:
        coords = x.coords if isinstance(x, GroupElement) else tuple(x)
        A = self.algebra
        out = A.one()
        for g, c in zip(self.generators, coords):
            out = A.mul(out, A.pow(g, c % int(self.orders[self.index(g)])))
        return out

    @cached_property
    def frobenius(self) -> GroupHom:
        """The endomorphism induced by ``x -> x^p``."""
        A = self.algebra
        cols = [self.log(A.frobenius(g)).coords for g in self.generators]
        return GroupHom(self.group, self.group, [list(r) for r in zip(*cols)] if cols else [])

    def frobenius_indices(self, rows: np.ndarray | None = None) -> np.ndarray:
        """Row indices of ``Fr(u)`` for the given rows (default: all units)."""
        X = self.units if rows is None else self.units[rows]
        Y = kernels.poly_pow(X, self.algebra.p, self.algebra.p)
        return self._index[kernels.encode(Y, self.algebra.p)]

    def check_log(self) -> bool:
        """``log`` hits every group element exactly once."""
        canon = {self.group.canonical([int(c) for c in row]) for row in self.dlog}
        return len(canon) == self.size == self.group.order


def _orders(U: np.ndarray, p: int, N: int) -> np.ndarray:
    """Multiplicative order of every row, by prime-wise exponent search."""
    m = U.shape[1]
    one = np.zeros(m, dtype=np.int64)
    one[0] = 1
    orders = np.ones(U.shape[0], dtype=np.int64)
    for q in prime_factors(N):
        e = 0
        while N % q ** (e + 1) == 0:
            e += 1
        Y = kernels.poly_pow(U, N // q**e, p)
        for _ in range(e):
            done = (Y == one).all(axis=1)
            orders[~done] *= q
            if done.all():
                break
            Y = kernels.poly_pow(Y, q, p)
    return orders


def units_group(p: int, m: int, bound: int = UNIT_BOUND) -> UnitsGroup:
    """Enumerate ``(F_p[t]/t^m)^x`` and decompose it.

    The group is grown one generator at a time: take a unit of maximal order
    outside the current subgroup ``H``, find the least ``k`` with ``g^k`` in
    ``H``, and record the relation ``k e_new = log(g^k)``.
    """
    A = TruncatedPolyAlgebra(p, m)
    N = (p - 1) * p ** (m - 1)
    if N > bound:
        raise PerfectionError(f"unit group of order {N} exceeds the enumeration bound {bound}")
    codes = np.arange(p**m, dtype=np.int64)
    codes = codes[codes % p != 0]
    U = kernels.decode(codes, p, m)
    index = np.full(p**m, -1, dtype=np.int64)
    index[codes] = np.arange(N)
    orders = _orders(U, p, N)

    member = np.zeros(N, dtype=bool)
    member[0] = True  # the code of 1 is 1, the first unit
    H = np.array([0], dtype=np.int64)
    dlog = np.zeros((N, 0), dtype=np.int64)
    relations: list[list[int]] = []
    gens: list[tuple[int, ...]] = []
    while len(H) < N:
        masked = np.where(member, 0, orders)
        gi = int(np.argmax(masked))
        g = U[gi]
        # relative order of g modulo H
        k, cur = 1, g.copy()
        while not member[index[kernels.encode(cur[None, :], p)[0]]]:
            cur = kernels.poly_mul(cur[None, :], g, p)[0]
            k += 1
        hk = index[kernels.encode(cur[None, :], p)[0]]
        r = dlog.shape[1]
        dlog = np.hstack([dlog, np.zeros((N, 1), dtype=np.int64)])
        relations = [rel + [0] for rel in relations]
        relations.append([-int(c) for c in dlog[hk, :r]] + [k])
        gens.append(tuple(int(a) for a in g))
        blocks = [H]
        power = np.zeros(m, dtype=np.int64)
        power[0] = 1
        for j in range(1, k):
            power = kernels.poly_mul(power[None, :], g, p)[0]
            rows = index[kernels.encode(kernels.poly_mul(U[H], power, p), p)]
            dlog[rows, :r] = dlog[H, :r]
            dlog[rows, r] = j
            member[rows] = True
            blocks.append(rows)
        H = np.concatenate(blocks)
    group = group_from_relations(len(gens), relations)
    return UnitsGroup(A, group, gens, U, orders, dlog, index)


# ---------------------------------------------------------------------------
# the units model of K_1


def _fmt(factors: Sequence[int]) -> str:
    return " + ".join(f"Z/{d}" for d in factors) if factors else "0"


@dataclass
class K1Report:
    p: int
    m: int
    unit_group: tuple[int, ...]
    colimit: tuple[int, ...]
    localization: tuple[int, ...]
    perfection_units: tuple[int, ...]
    checks: dict[str, bool]
    model: str = "K_1(F_p[t]/t^m) identified with the unit group (local ring)"

    @property
    def agree(self) -> bool:
        return self.colimit == self.localization == self.perfection_units

    @property
    def holds(self) -> bool:
        return self.agree and all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "model": self.model,
            "units": _fmt(self.unit_group),
            "colimit_under_frobenius": _fmt(self.colimit),
            "localization": _fmt(self.localization),
            "units_of_perfection": _fmt(self.perfection_units),
            "invariant_factors": {
                "units": [str(d) for d in self.unit_group],
                "colimit": [str(d) for d in self.colimit],
                "localization": [str(d) for d in self.localization],
                "units_of_perfection": [str(d) for d in self.perfection_units],
            },
            "checks": dict(self.checks),
            "agree": self.agree,
            "holds": self.holds,
        }


def frobenius_is_multiplicative(G: UnitsGroup, max_pairs: int = 10**6, seed: int = 0) -> bool:
    """``Fr(xy) = Fr(x) Fr(y)`` on all unit pairs (a random sample above ``max_pairs``)."""
    p, N = G.algebra.p, G.size
    fr = G.frobenius_indices()
    if N * N <= max_pairs:
        I, J = np.divmod(np.arange(N * N, dtype=np.int64), N)
    else:
        rng = np.random.default_rng(seed)
        I, J = rng.integers(0, N, max_pairs), rng.integers(0, N, max_pairs)
    prod = G._index[kernels.encode(kernels.poly_mul(G.units[I], G.units[J], p), p)]
    lhs = fr[prod]
    rhs = G._index[kernels.encode(kernels.poly_mul(G.units[fr[I]], G.units[fr[J]], p), p)]
    return bool((lhs == rhs).all())


def frobenius_matches_log(G: UnitsGroup) -> bool:
    """The abstract endomorphism agrees with ``x -> x^p`` on every unit."""
    fr = G.frobenius_indices()
    for i in range(G.size):
        x = [int(c) for c in G.dlog[i]]
        y = [int(c) for c in G.dlog[fr[i]]]
        if G.group.canonical(G.frobenius.apply_coords(x)) != G.group.canonical(y):
            return False
    return True


def verify_main_theorem_k1(p: int, m: int, bound: int = UNIT_BOUND) -> K1Report:
    """Compare ``colim_Fr R^x``, ``R^x[1/p]`` and ``(R_perf)^x = F_p^x``.

    The colimit is the stable image of Frobenius on the unit set; its structure
    and that of ``F_p^x`` come from element orders, independently of the
    presentation used by the localization.
    """
    G = units_group(p, m, bound)
    A = G.algebra
    rows = np.arange(G.size)
    while True:
        nxt = np.unique(G.frobenius_indices(rows))
        if len(nxt) == len(rows):
            break
        rows = nxt
    colim = invariant_factors_from_orders(G.orders[rows].tolist())
    loc = localize(G.group, p)
    perf = A.perfection_check()
    field_units = units_group(p, 1)
    fp = invariant_factors_from_orders(field_units.orders.tolist())
    checks = {
        "perfection_is_prime_field": perf["is_prime_field"],
        "frobenius_is_multiplicative": frobenius_is_multiplicative(G),
        "frobenius_matches_group_endomorphism": frobenius_matches_log(G),
        "colimit_order_prime_to_p": math.gcd(len(rows), p) == 1,
        "unit_count": G.size == (p - 1) * p ** (m - 1) == G.group.order,
        "log_is_bijective": G.check_log(),
        "localization_is_finite": loc.free_rank == 0,
    }
    return K1Report(p, m, G.group.torsion_factors, colim, tuple(loc.torsion), fp, checks)


@dataclass
class PTorsionReport:
    p: int
    m: int
    nilpotent: tuple[int, ...]
    unit: tuple[int, ...]
    order: int
    description: str

    @property
    def holds(self) -> bool:
        return any(self.nilpotent) and self.order == self.p

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "r": self.description,
            "r_coefficients": [str(c) for c in self.nilpotent],
            "unit": [str(c) for c in self.unit],
            "order_of_1_plus_r": str(self.order),
            "holds": self.holds,
        }


def verify_ptorsion_remark(p: int, m: int) -> PTorsionReport:
    """Exhibit ``r != 0`` with ``r^p = 0``; then ``1 + r`` has order ``p``."""
    A = TruncatedPolyAlgebra(p, m)
    if m < 2:
        raise PerfectionError("Frobenius is injective on F_p; need m >= 2")
    k = -(-m // p)
    r = A.t_power(k)
    if A.pow(r, p) != A.zero():
        raise AssertionError("t^ceil(m/p) should have vanishing p-th power")
    u = A.add(A.one(), r)
    return PTorsionReport(p, m, r, u, A.multiplicative_order(u), A.describe(r))


# ---------------------------------------------------------------------------
# user-supplied K-group data


@dataclass(frozen=True)
class KGroupDatum:
    """A K-group with its Frobenius action, supplied as input rather than computed."""

    label: str
    group: FGAbelianGroup
    frobenius: GroupHom
    degree: int
    source: str = "user"

    def __post_init__(self):
        if self.frobenius.source != self.group or self.frobenius.target != self.group:
            raise PerfectionError("frobenius must be an endomorphism of the datum's group")

    @classmethod
    def from_json(cls, obj: Any) -> KGroupDatum:
        if not isinstance(obj, dict):
            raise InputError("datum: expected a JSON object")
        for key in ("group", "frobenius", "degree"):
            if key not in obj:
                raise InputError(f"datum: missing {key!r}")
        A = group_from_json(obj["group"], "datum.group")
        theta = hom_from_json(obj["frobenius"], A, A, "datum.frobenius")
        return cls(str(obj.get("label", "")), A, theta, parse_int(obj["degree"], "datum.degree"), str(obj.get("source", "user")))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "group": group_to_json(self.group),
            "frobenius": {"matrix": [[str(c) for c in r] for r in self.frobenius.matrix.tolist()]},
            "degree": self.degree,
            "source": self.source,
        }


def delta_datum(n: int) -> KGroupDatum:
    """``K_{-n}(Delta_n(F_p)) = Z`` with the identity as (assumed) Frobenius action."""
    Z = group_from_relations(1)
    return KGroupDatum(f"K_{{-{n}}}(Delta_{n}(F_p))", Z, GroupHom.identity(Z), -n,
                       "model: group value Z; identity Frobenius is an assumed input")


def _describe_sum(c: int, loc: str) -> str:
    parts = []
    if c:
        parts.append("Z" if c == 1 else f"Z^{c}")
    if loc != "0":
        parts.append(loc)
    return " + ".join(parts) if parts else "0"


@dataclass
class K0SplittingReport:
    h0_rank: int
    label: str
    lemell: dict
    predicted: str | None
    localized: str
    colimit_by_enumeration: str | None

    @property
    def holds(self) -> bool:
        ok = self.lemell["overall"]
        if self.colimit_by_enumeration is not None:
            ok = ok and self.colimit_by_enumeration == self.localized
        return ok

    def to_dict(self) -> dict:
        return {
            "H0_rank": self.h0_rank,
            "label": self.label,
            "lemell": self.lemell,
            "predicted_K0_of_perfection": self.predicted,
            "H0_plus_localization": self.localized,
            "H0_plus_colimit_by_enumeration": self.colimit_by_enumeration,
            "holds": self.holds,
        }


def verify_k0_splitting(c: int, datum: KGroupDatum, p: int, budget: int | None = None) -> K0SplittingReport:
    """Predict ``K_0(R_perf) = Z^c + colim_Fr K~_0(R)`` and compare with ``Z^c + K~_0[1/p]``."""
    if datum.degree != 0:
        raise PerfectionError(f"K_0 splitting needs a degree-0 datum, got degree {datum.degree}")
    if c < 0:
        raise PerfectionError("H_0 rank must be >= 0")
    rep = lemell_check(datum.frobenius, p, budget)
    localized = _describe_sum(c, localize(datum.group, p).describe())
    enum = None
    if datum.group.is_finite:
        enum = _describe_sum(c, _fmt(finite_colimit(datum.frobenius)))
    predicted = localized if rep.overall else enum
    return K0SplittingReport(c, datum.label, rep.to_dict(), predicted, localized, enum)


@dataclass
class NegKReport:
    label: str
    degree: int
    p: int
    theta_prime: list[list[int]]
    lemell: dict
    localization: str

    @property
    def holds(self) -> bool:
        return self.lemell["overall"]

    @property
    def conclusion(self) -> str | None:
        if not self.holds:
            return None
        k = -self.degree
        return f"K_{{-{k}}}(R)[1/{self.p}] = K_{{-{k}}}(R_perf)[1/{self.p}] = {self.localization}"

    def essence(self) -> tuple:
        """The parts that do not depend on how the scaling was reached."""
        return (self.theta_prime, json.dumps(self.lemell, sort_keys=True), self.localization, self.holds)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "degree": self.degree,
            "p": self.p,
            "theta_prime": [[str(c) for c in r] for r in self.theta_prime],
            "lemell": self.lemell,
            "localization": self.localization,
            "holds": self.holds,
            "conclusion": self.conclusion,
        }


def _scaled_check(datum: KGroupDatum, i: int, p: int, budget) -> NegKReport:
    theta = datum.frobenius.scale(p**i)
    rep = lemell_check(theta, p, budget)
    return NegKReport(datum.label, datum.degree, p, theta.matrix.tolist(), rep.to_dict(),
                      localize(datum.group, p).describe())


def verify_negative_k_scaling(datum: KGroupDatum, p: int, budget: int | None = None) -> NegKReport:
    """Test ``theta' = p^i Fr`` on ``K_{-i}`` against the three conditions at ``p``."""
    if datum.degree >= 0:
        raise PerfectionError(f"negative K scaling needs degree < 0, got {datum.degree}")
    return _scaled_check(datum, -datum.degree, p, budget)


def scaling_iteration_consistent(datum: KGroupDatum, p: int, budget: int | None = None) -> bool:
    """Scaling by ``p^i`` equals scaling ``p Fr`` by ``p^(i-1)``, down to ``i - 1 = 0``."""
    if datum.degree >= 0:
        raise PerfectionError(f"negative K scaling needs degree < 0, got {datum.degree}")
    i = -datum.degree
    once = _scaled_check(datum, i, p, budget)
    stepped = KGroupDatum(datum.label, datum.group, datum.frobenius.scale(p), datum.degree + 1, datum.source)
    return once.essence() == _scaled_check(stepped, i - 1, p, budget).essence()
