"""Localization ``A[1/l]``, direct limits along an endomorphism, and the
three-condition test for ``colim_theta A ~ A[1/l]``.

The conditions checked by :func:`lemell_check` for an endomorphism ``theta``
of a finitely generated ``A`` and an integer ``l > 1``:

(a) ``theta[1/l]`` is an automorphism of ``A[1/l]``;
(b) every ``a`` has some ``theta^i(a)`` in ``l A``;
(c) every ``a`` with ``l a = 0`` has some ``theta^i(a) = 0``.

When all three hold, :func:`comparison_map` realises the isomorphism
``colim_theta A -> A[1/l]``, ``[(a, i)] -> theta[1/l]^{-i}(a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Sequence

import numpy as np

from . import kernels
from .abelian import (
    AbelianGroupError,
    FGAbelianGroup,
    GroupElement,
    GroupHom,
    IntMatrix,
    Subgroup,
    cokernel,
    image,
    is_power_torsion,
    kernel,
    quotient,
    restrict,
    solve_int,
    strip_primes,
    torsion_subgroup,
)


class BudgetExceeded(RuntimeError):
    """An orbit search needed more steps than the caller's budget allowed."""


class ConditionFailure(ValueError):
    """The comparison map was requested for a system failing the conditions."""


def prime_factors(n: int) -> tuple[int, ...]:
    n = abs(n)
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def _is_ell_unit(x: Fraction, ell: int) -> bool:
    return x != 0 and strip_primes(x.numerator, ell) == 1 and strip_primes(x.denominator, ell) == 1


def _in_ring(x: Fraction, ell: int) -> bool:
    """``x`` lies in ``Z[1/ell]``."""
    return strip_primes(x.denominator, ell) == 1


# ---------------------------------------------------------------------------
# localized groups


class LocalizedGroup:
    """``A[1/l] ~ Z[1/l]^r + Z/d'_1 + ...`` with the ``l``-primary torsion stripped."""

    def __init__(self, base: FGAbelianGroup, ell: int):
        if ell <= 1:
            raise AbelianGroupError(f"localization needs ell > 1, got {ell}")
        self.base = base
        self.ell = ell
        self.primes = prime_factors(ell)
        stripped = [strip_primes(d, ell) for d in base.torsion_factors]
        self._kept = tuple(i for i, d in enumerate(stripped) if d > 1)
        self.torsion = tuple(stripped[i] for i in self._kept)
        self.free_rank = base.free_rank
        self._nt = len(base.torsion_factors)

    @property
    def prime_to_ell_torsion(self) -> tuple[int, ...]:
        return self.torsion

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def isomorphic(self, other: LocalizedGroup) -> bool:
        return (self.free_rank, self.torsion, self.primes) == (other.free_rank, other.torsion, other.primes)

    def invariants(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "inverted_primes": list(self.primes)}

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            ring = f"Z[1/{math.prod(self.primes)}]"
            parts.append(ring if self.free_rank == 1 else f"{ring}^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"LocalizedGroup({self.describe()})"

    # -- elements ----------------------------------------------------------

    def element(self, free: Sequence, torsion: Sequence[int]) -> LocalizedElement:
        free = tuple(Fraction(x) for x in free)
        if len(free) != self.free_rank or len(torsion) != len(self.torsion):
            raise AbelianGroupError("localized element has the wrong shape")
        if not all(_in_ring(x, self.ell) for x in free):
            raise AbelianGroupError(f"free coordinates must lie in Z[1/{self.ell}]")
        return LocalizedElement(self, free, tuple(int(t) % d for t, d in zip(torsion, self.torsion)))

    def zero(self) -> LocalizedElement:
        return LocalizedElement(self, (Fraction(0),) * self.free_rank, (0,) * len(self.torsion))

    def map(self, a: GroupElement) -> LocalizedElement:
        """The localization map ``A -> A[1/l]`` on an element."""
        if a.group != self.base:
            raise AbelianGroupError("element not in the base group")
        can = a.canonical
        tors = tuple(can[i] % d for i, d in zip(self._kept, self.torsion))
        free = tuple(Fraction(x) for x in can[self._nt:])
        return LocalizedElement(self, free, tors)

    def lift(self, x: LocalizedElement) -> GroupElement:
        """A preimage in ``A`` of an element with integral free part."""
        if any(f.denominator != 1 for f in x.free):
            raise AbelianGroupError("only elements with integral free part lift to A")
        vec = [0] * self.base.canonical_rank
        for idx, y, dp in zip(self._kept, x.torsion, self.torsion):
            d = self.base.torsion_factors[idx]
            e = d // dp
            # y mod d', 0 mod e
            vec[idx] = (y * e * pow(e, -1, dp)) % d
        for s, f in enumerate(x.free):
            vec[self._nt + s] = int(f)
        return self.base.from_canonical(vec)

    def to_modulus(self, f: Fraction, d: int) -> int:
        """Image of ``f`` in ``Z[1/l] -> Z/d`` for ``d`` coprime to ``l``."""
        return (f.numerator * pow(f.denominator, -1, d)) % d


@dataclass(frozen=True, eq=False)
class LocalizedElement:
    parent: LocalizedGroup
    free: tuple[Fraction, ...]
    torsion: tuple[int, ...]

    def _check(self, other):
        if not isinstance(other, LocalizedElement) or other.parent is not self.parent:
            raise AbelianGroupError("localized elements of different groups")

    def __add__(self, other: LocalizedElement) -> LocalizedElement:
        self._check(other)
        P = self.parent
        return LocalizedElement(P, tuple(a + b for a, b in zip(self.free, other.free)),
                                tuple((a + b) % d for a, b, d in zip(self.torsion, other.torsion, P.torsion)))

    def __neg__(self) -> LocalizedElement:
        P = self.parent
        return LocalizedElement(P, tuple(-a for a in self.free), tuple((-a) % d for a, d in zip(self.torsion, P.torsion)))

    def __sub__(self, other: LocalizedElement) -> LocalizedElement:
        return self + (-other)

    def scale(self, c) -> LocalizedElement:
        """Multiply by an element ``c`` of ``Z[1/l]``."""
        c = Fraction(c)
        P = self.parent
        if not _in_ring(c, P.ell):
            raise AbelianGroupError(f"{c} is not in Z[1/{P.ell}]")
        return LocalizedElement(P, tuple(c * a for a in self.free),
                                tuple((P.to_modulus(c, d) * a) % d for a, d in zip(self.torsion, P.torsion)))

    def __eq__(self, other):
        if not isinstance(other, LocalizedElement):
            return NotImplemented
        return self.parent is other.parent and self.free == other.free and self.torsion == other.torsion

    def __hash__(self):
        return hash((id(self.parent), self.free, self.torsion))

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def __repr__(self):
        free = ", ".join(str(f) for f in self.free)
        return f"LocalizedElement(free=[{free}], torsion={list(self.torsion)})"


def localize(A, ell: int) -> LocalizedGroup:
    """``A[1/ell]`` for an FG abelian group, or a further localization of one."""
    if ell <= 1:
        raise AbelianGroupError(f"localization needs ell > 1, got {ell}")
    if isinstance(A, LocalizedGroup):
        # Z[1/a][1/b] = Z[1/ab]; strip again on the already-stripped factors
        return LocalizedGroup(A.base, math.lcm(A.ell, ell))
    return LocalizedGroup(A, ell)


# ---------------------------------------------------------------------------
# the induced endomorphism of A[1/l]


class LocalizedEndo:
    """``theta[1/l]`` as block data on the localized canonical coordinates.

    With free coordinates first, the map is block lower triangular::

        [ F  0 ]   F: free -> free         (integers)
        [ L  T ]   L: free -> torsion      (mod d')
                   T: torsion -> torsion   (mod d')
    """

    def __init__(self, theta: GroupHom, ell: int):
        if not theta.is_endomorphism:
            raise AbelianGroupError("localized_hom needs an endomorphism")
        self.theta = theta
        self.group = G = localize(theta.source, ell)
        Tc = theta.canonical_matrix()
        nt = len(theta.source.torsion_factors)
        free = list(range(nt, nt + G.free_rank))
        kept = list(G._kept)
        self.free_block = [[Tc[i][j] for j in free] for i in free]
        self.mixed_block = [[Tc[i][j] % d for j in free] for i, d in zip(kept, G.torsion)]
        self.torsion_block = [[Tc[i][j] % d for j in kept] for i, d in zip(kept, G.torsion)]

    @property
    def ell(self) -> int:
        return self.group.ell

    def free_det(self) -> int:
        return IntMatrix(self.free_block, self.group.free_rank, self.group.free_rank).det()

    def apply(self, x: LocalizedElement) -> LocalizedElement:
        G = self.group
        free = tuple(sum((Fraction(F_ij) * f for F_ij, f in zip(row, x.free)), Fraction(0)) for row in self.free_block)
        tors = []
        for row_L, row_T, d in zip(self.mixed_block, self.torsion_block, G.torsion):
            acc = sum(a * b for a, b in zip(row_T, x.torsion))
            acc += sum(l_ij * G.to_modulus(f, d) for l_ij, f in zip(row_L, x.free))
            tors.append(acc % d)
        return LocalizedElement(G, free, tuple(tors))

    @cached_property
    def _torsion_group(self) -> FGAbelianGroup:
        t = self.group.torsion
        return FGAbelianGroup(len(t), [[d if i == j else 0 for j in range(len(t))] for i, d in enumerate(t)])

    def torsion_bijective(self) -> bool:
        H = self._torsion_group
        h = GroupHom(H, H, IntMatrix(self.torsion_block, len(self.group.torsion), len(self.group.torsion)))
        return kernel(h).is_trivial()

    def is_automorphism(self) -> bool:
        r = self.group.free_rank
        if r:
            det = self.free_det()
            if det == 0 or strip_primes(det, self.ell) != 1:
                return False
        return self.torsion_bijective()

    def apply_inverse(self, x: LocalizedElement) -> LocalizedElement:
        if not self.is_automorphism():
            raise AbelianGroupError("theta[1/l] is not an automorphism")
        G = self.group
        free = _solve_rational(self.free_block, x.free)
        if not all(_in_ring(f, G.ell) for f in free):  # pragma: no cover - guaranteed by the det test
            raise AssertionError("inverse left Z[1/l]")
        rhs = []
        for row_L, t, d in zip(self.mixed_block, x.torsion, G.torsion):
            rhs.append((t - sum(l_ij * G.to_modulus(f, d) for l_ij, f in zip(row_L, free))) % d)
        n = len(G.torsion)
        if n:
            block = [list(row) + [d if i == j else 0 for j in range(n)]
                     for i, (row, d) in enumerate(zip(self.torsion_block, G.torsion))]
            z = solve_int(IntMatrix(block, n, 2 * n), rhs)
            tors = tuple(zi % d for zi, d in zip(z[:n], G.torsion))
        else:
            tors = ()
        return LocalizedElement(G, tuple(free), tors)


def _solve_rational(M: list[list[int]], b: Sequence[Fraction]) -> list[Fraction]:
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(M, b)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [v - f * w for v, w in zip(A[r], A[c])]
    return [A[i][n] for i in range(n)]


def localized_hom(theta: GroupHom, ell: int) -> LocalizedEndo:
    return LocalizedEndo(theta, ell)


# ---------------------------------------------------------------------------
# orbit machinery on finite groups


def _orbit_first_hits(h: GroupHom, starts: Sequence[Sequence[int]], cutoff: int,
                      budget: int | None = None) -> list[int]:
    """First ``i <= cutoff`` with ``h^i(x) = 0`` for each start (``-1`` if none).

    ``h`` must be an endomorphism of a finite group; starts are generator
    coordinates.
    """
    G = h.source
    if not G.is_finite:
        raise AbelianGroupError("orbit search needs a finite group")
    steps = cutoff if budget is None else min(cutoff, budget)
    if not starts:
        return []
    if G.is_trivial():
        return [0] * len(starts)
    moduli = G.torsion_factors
    Tc = h.canonical_matrix()
    X0 = [G.canonical(s) for s in starts]
    if max(moduli) < kernels.SAFE_MODULUS:
        T = np.array([[v % d for v in row] for row, d in zip(Tc, moduli)], dtype=np.int64)
        hits = kernels.first_zero_hits(T, np.array(moduli, dtype=np.int64),
                                       np.array(X0, dtype=np.int64), steps).tolist()
    else:
        hits = []
        for x in X0:
            hit = -1
            for step in range(steps + 1):
                if not any(x):
                    hit = step
                    break
                x = tuple(sum(a * b for a, b in zip(row, x)) % d for row, d in zip(Tc, moduli))
            hits.append(hit)
    if steps < cutoff and any(v < 0 for v in hits):
        raise BudgetExceeded(f"orbit search needs up to {cutoff} steps, budget is {budget}")
    return hits


# ---------------------------------------------------------------------------
# the three conditions


@dataclass
class ConditionVerdict:
    holds: bool
    explanation: str
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {"holds": self.holds, "explanation": self.explanation, "witness": self.witness}


def _coords(x: GroupElement) -> list[str]:
    return [str(c) for c in x.coords]


def _offending_generator(sub_group: FGAbelianGroup, ell: int):
    """Index and multiplier of a canonical generator that is not l-power torsion."""
    nt = len(sub_group.torsion_factors)
    for j, d in enumerate(sub_group.torsion_factors):
        dp = strip_primes(d, ell)
        if dp > 1:
            return j, d // dp
    if sub_group.free_rank:
        return nt, 1
    return None


def check_condition_a(theta: GroupHom, ell: int) -> ConditionVerdict:
    """``theta[1/l]`` bijective iff ``ker theta`` and ``coker theta`` are l-power torsion."""
    K = kernel(theta)
    C = cokernel(theta)
    ker_ok = is_power_torsion(K.group, ell)
    coker_ok = is_power_torsion(C.group, ell)
    witness: dict[str, Any] = {"kernel": K.group.describe(), "cokernel": C.group.describe()}
    if not ker_ok:
        j, mult = _offending_generator(K.group, ell)
        w = K.inclusion(mult * K.group.canonical_generators()[j])
        witness["kernel_element"] = _coords(w)
    if not coker_ok:
        j, mult = _offending_generator(C.group, ell)
        w = mult * C.group.canonical_generators()[j]
        witness["cokernel_element"] = _coords(w)
    holds = ker_ok and coker_ok
    if holds:
        explanation = f"kernel {K.group.describe()} and cokernel {C.group.describe()} are {ell}-power torsion"
    else:
        bad = []
        if not ker_ok:
            bad.append(f"kernel {K.group.describe()}")
        if not coker_ok:
            bad.append(f"cokernel {C.group.describe()}")
        explanation = " and ".join(bad) + f" not {ell}-power torsion"
    return ConditionVerdict(holds, explanation, witness)


def check_condition_b(theta: GroupHom, ell: int, budget: int | None = None) -> ConditionVerdict:
    """Every generator reaches ``l A`` under iteration (orbits in ``A / l A``)."""
    A = theta.source
    Q = quotient(A, [tuple(ell * int(i == j) for i in range(A.num_generators)) for j in range(A.num_generators)]).group
    induced = GroupHom(Q, Q, theta.matrix, check=False)
    starts = [g.coords for g in A.generators()]
    cutoff = int(Q.order)
    hits = _orbit_first_hits(induced, starts, cutoff, budget)
    witness: dict[str, Any] = {"quotient": Q.describe(), "exponents": hits}
    bad = [j for j, h in enumerate(hits) if h < 0]
    if bad:
        witness["generator"] = bad[0]
        witness["element"] = [str(c) for c in starts[bad[0]]]
        return ConditionVerdict(False, f"orbit of generator {bad[0]} in A/{ell}A never reaches 0", witness)
    exp = max(hits, default=0)
    return ConditionVerdict(True, f"every generator lands in {ell}A after at most {exp} steps", witness)


def check_condition_c(theta: GroupHom, ell: int, budget: int | None = None) -> ConditionVerdict:
    """``theta`` is nilpotent on ``A[l]``."""
    A = theta.source
    S = torsion_subgroup(A, ell)
    witness: dict[str, Any] = {"torsion_subgroup": S.group.describe()}
    if S.is_trivial():
        witness["nilpotency_exponent"] = 0
        return ConditionVerdict(True, f"A[{ell}] is trivial", witness)
    theta_S = restrict(theta, S, S)
    starts = [g.coords for g in S.group.generators()]
    hits = _orbit_first_hits(theta_S, starts, int(S.group.order), budget)
    bad = [j for j, h in enumerate(hits) if h < 0]
    if bad:
        w = S.inclusion(S.group.generators()[bad[0]])
        witness["element"] = _coords(w)
        return ConditionVerdict(False, f"an element of A[{ell}] survives every power of theta", witness)
    exp = max(hits, default=0)
    witness["nilpotency_exponent"] = exp
    return ConditionVerdict(True, f"theta^{exp} kills A[{ell}]", witness)


@dataclass
class LemEllReport:
    ell: int
    cond_a: ConditionVerdict
    cond_b: ConditionVerdict
    cond_c: ConditionVerdict
    spot_checks: dict = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return self.cond_a.holds and self.cond_b.holds and self.cond_c.holds

    def failing(self) -> list[str]:
        return [name for name, v in (("a", self.cond_a), ("b", self.cond_b), ("c", self.cond_c)) if not v.holds]

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "cond_a": self.cond_a.holds,
            "cond_b": self.cond_b.holds,
            "cond_c": self.cond_c.holds,
            "overall": self.overall,
            "explanations": {
                "cond_a": self.cond_a.explanation,
                "cond_b": self.cond_b.explanation,
                "cond_c": self.cond_c.explanation,
            },
            "witnesses": {
                "cond_a": self.cond_a.witness,
                "cond_b": self.cond_b.witness,
                "cond_c": self.cond_c.witness,
            },
            "spot_checks": self.spot_checks,
        }


def lemell_check(theta: GroupHom, ell: int, budget: int | None = None) -> LemEllReport:
    """Decide conditions (a), (b), (c); on success spot-verify the colimit comparison."""
    if ell <= 1:
        raise AbelianGroupError(f"ell must be > 1, got {ell}")
    if not theta.is_endomorphism:
        raise AbelianGroupError("lemell_check needs an endomorphism")
    report = LemEllReport(ell, check_condition_a(theta, ell), check_condition_b(theta, ell, budget),
                          check_condition_c(theta, ell, budget))
    endo = localized_hom(theta, ell)
    # the determinant/bijectivity route must agree with the ker/coker route
    agree = endo.is_automorphism() == report.cond_a.holds
    report.spot_checks["cond_a_routes_agree"] = agree
    if not agree:  # pragma: no cover - would indicate a bug
        raise AssertionError("condition (a): ker/coker test disagrees with the localized matrix test")
    if report.overall:
        phi = ComparisonMap(theta, ell, _report=report)
        lim = phi.limit
        ok = True
        for g in theta.source.generators():
            x0, x1 = lim.element(g, 0), lim.element(theta(g), 1)
            ok &= phi(x0) == phi(x1)
            ok &= phi.preimage(phi(lim.element(g, 1))) == lim.element(g, 1)
        report.spot_checks["comparison_compatible_with_structure_map"] = bool(ok)
    return report


# ---------------------------------------------------------------------------
# direct limits


class DirectLimit:
    """``colim (A -theta-> A -theta-> ...)`` with lazily represented elements."""

    def __init__(self, theta: GroupHom):
        if not theta.is_endomorphism:
            raise AbelianGroupError("a direct limit needs an endomorphism")
        self.theta = theta
        self.group = theta.source
        self._powers = {0: GroupHom.identity(self.group), 1: theta}

    def power(self, n: int) -> GroupHom:
        if n not in self._powers:
            self._powers[n] = self.theta.power(n)
        return self._powers[n]

    def element(self, rep, stage: int = 0) -> ColimitElement:
        if not isinstance(rep, GroupElement):
            rep = self.group.element(rep)
        if rep.group != self.group:
            raise AbelianGroupError("representative not in the system's group")
        if stage < 0:
            raise AbelianGroupError("stage must be >= 0")
        return ColimitElement(self, rep, stage)

    @cached_property
    def stabilization_index(self) -> int:
        """Least ``m`` with ``ker theta^m = ker theta^(m+1)``."""
        n = 0
        while True:
            K = kernel(self.power(n + 1))
            tn = self.power(n)
            if all(tn(g).is_zero() for g in K.generators()):
                return n
            n += 1

    def eventually_zero(self, a: GroupElement) -> bool:
        return self.power(self.stabilization_index)(a).is_zero()

    def align(self, x: ColimitElement, y: ColimitElement) -> tuple[GroupElement, GroupElement, int]:
        k = max(x.stage, y.stage)
        return self.power(k - x.stage)(x.rep), self.power(k - y.stage)(y.rep), k

    def equal(self, x: ColimitElement, y: ColimitElement) -> bool:
        if x.system is not self or y.system is not self:
            raise AbelianGroupError("colimit elements from different systems")
        a, b, _ = self.align(x, y)
        return self.eventually_zero(a - b)


@dataclass(frozen=True, eq=False)
class ColimitElement:
    system: DirectLimit
    rep: GroupElement
    stage: int

    def __add__(self, other: ColimitElement) -> ColimitElement:
        if other.system is not self.system:
            raise AbelianGroupError("colimit elements from different systems")
        a, b, k = self.system.align(self, other)
        return ColimitElement(self.system, a + b, k)

    def __neg__(self) -> ColimitElement:
        return ColimitElement(self.system, -self.rep, self.stage)

    def __sub__(self, other: ColimitElement) -> ColimitElement:
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ColimitElement):
            return NotImplemented
        return colim_equal(self, other)

    __hash__ = None

    def __repr__(self):
        return f"ColimitElement({list(self.rep.coords)}, stage={self.stage})"


def colim_equal(x: ColimitElement, y: ColimitElement) -> bool:
    if x.system is not y.system:
        raise AbelianGroupError("colim_equal: elements belong to different systems")
    return x.system.equal(x, y)


# ---------------------------------------------------------------------------
# comparison map


class ComparisonMap:
    """``colim_theta A -> A[1/l]``, ``[(a, i)] -> theta[1/l]^{-i}(a)``."""

    def __init__(self, theta: GroupHom, ell: int, budget: int | None = None, _report: LemEllReport | None = None):
        report = _report if _report is not None else lemell_check(theta, ell, budget)
        if not report.overall:
            raise ConditionFailure(f"conditions {', '.join(report.failing())} fail; no comparison isomorphism")
        self.report = report
        self.theta = theta
        self.ell = ell
        self.limit = DirectLimit(theta)
        self.endo = localized_hom(theta, ell)
        self.target = self.endo.group

    def __call__(self, x: ColimitElement) -> LocalizedElement:
        if x.system.theta is not self.theta and x.system.theta != self.theta:
            raise AbelianGroupError("element of a different system")
        z = self.target.map(x.rep)
        for _ in range(x.stage):
            z = self.endo.apply_inverse(z)
        return z

    def preimage(self, z: LocalizedElement, max_stage: int = 10_000) -> ColimitElement:
        """A colimit element mapping to ``z`` (exists whenever the conditions hold)."""
        w = z
        for i in range(max_stage + 1):
            if all(f.denominator == 1 for f in w.free):
                return self.limit.element(self.target.lift(w), i)
            w = self.endo.apply(w)
        raise BudgetExceeded(f"no preimage found within {max_stage} stages")


def comparison_map(theta: GroupHom, ell: int, budget: int | None = None) -> ComparisonMap:
    return ComparisonMap(theta, ell, budget)


def eventual_image(theta: GroupHom) -> Subgroup:
    """The stable image ``theta^m(A)`` of an endomorphism of a finite group."""
    if not theta.source.is_finite:
        raise AbelianGroupError("eventual image is only computed for finite groups")
    n, prev = 1, None
    while True:
        sub = image(theta.power(n))
        order = sub.group.order
        if prev is not None and order == prev.group.order:
            return prev
        prev = sub
        n += 1
