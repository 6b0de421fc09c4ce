"""Presented lambda-rings with a finite additive basis.

A ring is given by a Z-basis ``b_0 = 1, b_1, ...`` (optionally with torsion
relations), structure constants, an augmentation ``eps`` to ``Z^c``, and
lambda-tables on a family of *lambda-generators*: elements forming a Z-basis
whose lambda-series ``lambda_t(g) = 1 + g t + ... + lambda^K(g) t^K`` are
polynomials.  ``lambda_t`` of any other element follows from
``lambda_t(x + y) = lambda_t(x) lambda_t(y)``.

Line elements (``lambda_t(g) = 1 + g t``) are the typical generators: in
``Z[u]/(u^m)`` the powers ``xi^k`` of ``xi = 1 + u`` form such a basis,
whereas ``lambda_t(u)`` itself is an infinite series.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

from .abelian import (
    FGAbelianGroup,
    GroupElement,
    GroupHom,
    IntMatrix,
    Subgroup,
    free_group,
    kernel,
    restrict,
    solve_int,
    subgroup_generated,
)
from .localization import DirectLimit, LemEllReport, eventual_image, lemell_check, localize


class LambdaRingError(ValueError):
    """The description is not a (special) lambda-ring we can work with."""


class DegreeCapError(LambdaRingError):
    pass


Vec = tuple[int, ...]


def binom(x: int, n: int) -> int:
    """Generalised binomial ``x (x-1) ... (x-n+1) / n!`` for any integer ``x``."""
    if n < 0:
        return 0
    num = 1
    for i in range(n):
        num *= x - i
    return num // math.factorial(n)


# ---------------------------------------------------------------------------
# ring


class LambdaRing:
    def __init__(
        self,
        basis: Sequence[str],
        mult: Sequence[Sequence[Sequence[int]]],
        augmentation: Sequence[Sequence[int]],
        lambda_generators: Sequence[tuple[str, Sequence[int], Sequence[Sequence[int]]]],
        additive_relations: Sequence[Sequence[int]] = (),
        elements: dict[str, Sequence[int]] | None = None,
        kernel_basis: Sequence[Sequence[int]] | None = None,
        degree_cap: int = 16,
        name: str = "",
    ):
        self.name = name
        self.basis = tuple(basis)
        k = self.rank = len(self.basis)
        if k == 0 or self.basis[0] != "1":
            raise LambdaRingError("the basis must start with the unit '1'")
        self.additive = FGAbelianGroup(k, [list(r) for r in additive_relations])
        self.mult = tuple(tuple(tuple(int(c) for c in mult[i][j]) for j in range(k)) for i in range(k))
        self.augmentation = tuple(tuple(int(c) for c in e) for e in augmentation)
        if len(self.augmentation) != k:
            raise LambdaRingError("augmentation must be given on every basis element")
        self.aug_rank = len(self.augmentation[0])
        if any(len(e) != self.aug_rank for e in self.augmentation):
            raise LambdaRingError("augmentation vectors have different lengths")
        self.degree_cap = degree_cap
        self.generators = tuple((n, tuple(int(c) for c in v), tuple(tuple(int(c) for c in s) for s in series))
                                for n, v, series in lambda_generators)
        self.aliases = {name: tuple(int(c) for c in v) for name, v in (elements or {}).items()}
        for i, b in enumerate(self.basis):
            self.aliases.setdefault(b, tuple(int(i == j) for j in range(k)))
        self._kernel_basis = None if kernel_basis is None else [tuple(v) for v in kernel_basis]
        self.checks: dict[str, Any] = {}
        self._validate()

    # -- coordinate arithmetic ----------------------------------------------

    @cached_property
    def one_vec(self) -> Vec:
        return tuple(int(i == 0) for i in range(self.rank))

    @cached_property
    def zero_vec(self) -> Vec:
        return (0,) * self.rank

    def _add(self, a: Vec, b: Vec) -> Vec:
        return tuple(x + y for x, y in zip(a, b))

    def _scale(self, c: int, a: Vec) -> Vec:
        return tuple(c * x for x in a)

    def _mul(self, a: Vec, b: Vec) -> Vec:
        out = [0] * self.rank
        M = self.mult
        for i, ai in enumerate(a):
            if not ai:
                continue
            Mi = M[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * bj
                for s, m in enumerate(Mi[j]):
                    if m:
                        out[s] += c * m
        return self._reduce(tuple(out))

    def _reduce(self, a: Vec) -> Vec:
        """Small representative mod the additive relations (identity when there are none)."""
        if self.additive.relations.rows == 0:
            return a
        return self.additive.from_canonical(self.additive.canonical(a)).coords

    def _is_zero(self, a: Vec) -> bool:
        return self.additive.is_zero(a)

    def _eq(self, a: Vec, b: Vec) -> bool:
        return self._is_zero(tuple(x - y for x, y in zip(a, b)))

    def _eps(self, a: Vec) -> Vec:
        return tuple(sum(ai * e[c] for ai, e in zip(a, self.augmentation)) for c in range(self.aug_rank))

    # -- power series over the ring (truncated lists of coordinate vectors) --

    def _series_mul(self, A, B, n):
        out = [self.zero_vec] * (n + 1)
        for i, a in enumerate(A[: n + 1]):
            if not any(a):
                continue
            for j, b in enumerate(B[: n + 1 - i]):
                if any(b):
                    out[i + j] = self._add(out[i + j], self._mul(a, b))
        return [self._reduce(v) for v in out]

    def _series_inv(self, A, n):
        # constant term is 1
        out = [self.one_vec] + [self.zero_vec] * n
        for m in range(1, n + 1):
            acc = self.zero_vec
            for j in range(1, min(m, len(A) - 1) + 1):
                acc = self._add(acc, self._mul(A[j], out[m - j]))
            out[m] = self._reduce(self._scale(-1, acc))
        return out

    def _series_pow(self, A, e, n):
        base = A if e >= 0 else self._series_inv(A, n)
        e = abs(e)
        result = [self.one_vec] + [self.zero_vec] * n
        while e:
            if e & 1:
                result = self._series_mul(result, base, n)
            e >>= 1
            if e:
                base = self._series_mul(base, base, n)
        return result

    def _poly_mul(self, A, B):
        if not A or not B:
            return []
        return self._series_mul(A, B, len(A) + len(B) - 2)

    def _trim(self, A):
        A = list(A)
        while len(A) > 1 and self._is_zero(A[-1]):
            A.pop()
        return A

    # -- generator decomposition ----------------------------------------------

    @cached_property
    def _generator_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns([v for _, v, _ in self.generators], self.rank)

    def generator_coords(self, a: Vec) -> Vec:
        """Coordinates of ``a`` in the lambda-generator basis."""
        z = solve_int(self._generator_matrix, a)
        if z is None:  # pragma: no cover - unimodularity is checked at load
            raise LambdaRingError("element outside the span of the lambda-generators")
        return z

    def _generator_poly(self, idx: int):
        _, v, series = self.generators[idx]
        return [self.one_vec] + [s for s in series]

    def _split_polys(self, a: Vec):
        """``lambda_t(a) = pos(t) / neg(t)`` as exact polynomials."""
        c = self.generator_coords(a)
        pos, neg = [self.one_vec], [self.one_vec]
        for idx, ci in enumerate(c):
            if not ci:
                continue
            P = self._generator_poly(idx)
            for _ in range(abs(ci)):
                if ci > 0:
                    pos = self._poly_mul(pos, P)
                else:
                    neg = self._poly_mul(neg, P)
        return self._trim(pos), self._trim(neg)

    def _series_is_polynomial(self, a: Vec, target) -> bool:
        """Exact test of ``lambda_t(a) == target(t)`` via ``pos == target * neg``."""
        pos, neg = self._split_polys(a)
        rhs = self._trim(self._poly_mul(list(target), neg))
        n = max(len(pos), len(rhs))
        pos = pos + [self.zero_vec] * (n - len(pos))
        rhs = rhs + [self.zero_vec] * (n - len(rhs))
        return all(self._eq(x, y) for x, y in zip(pos, rhs))

    # -- validation ------------------------------------------------------------

    def _validate(self):
        k = self.rank
        e = [tuple(int(i == j) for j in range(k)) for i in range(k)]
        for i in range(k):
            for j in range(k):
                if len(self.mult[i][j]) != k:
                    raise LambdaRingError("structure constants have the wrong length")
        for j in range(k):
            if not (self._eq(self.mult[0][j], e[j]) and self._eq(self.mult[j][0], e[j])):
                raise LambdaRingError(f"'1' is not a unit for {self.basis[j]}")
        for i, j in itertools.combinations_with_replacement(range(k), 2):
            if not self._eq(self.mult[i][j], self.mult[j][i]):
                raise LambdaRingError(f"multiplication not commutative on ({self.basis[i]}, {self.basis[j]})")
        for i, j, l in itertools.product(range(k), repeat=3):
            if not self._eq(self._mul(self.mult[i][j], e[l]), self._mul(e[i], self.mult[j][l])):
                raise LambdaRingError(
                    f"multiplication not associative on ({self.basis[i]}, {self.basis[j]}, {self.basis[l]})")
        for r in self.additive.relations.data:
            if any(not self._is_zero(self._mul(r, e[j])) for j in range(k)):
                raise LambdaRingError("additive relations do not form an ideal")
        # augmentation is a ring map
        if self._eps(self.one_vec) != (1,) * self.aug_rank:
            raise LambdaRingError("augmentation does not send 1 to (1, ..., 1)")
        for i, j in itertools.product(range(k), repeat=2):
            lhs = self._eps(self.mult[i][j])
            rhs = tuple(a * b for a, b in zip(self.augmentation[i], self.augmentation[j]))
            if lhs != rhs:
                raise LambdaRingError(f"augmentation not multiplicative on ({self.basis[i]}, {self.basis[j]})")
        for r in self.additive.relations.data:
            if any(self._eps(r)):
                raise LambdaRingError("augmentation does not vanish on the additive relations")
        # lambda-generators: a Z-basis with lambda^1 = identity
        if len(self.generators) != k:
            raise LambdaRingError(f"need exactly {k} lambda-generators forming a Z-basis, got {len(self.generators)}")
        if abs(self._generator_matrix.det()) != 1:
            raise LambdaRingError("lambda-generators do not form a Z-basis")
        for gname, v, series in self.generators:
            if not series or not self._eq(series[0], v):
                raise LambdaRingError(f"lambda^1({gname}) is not {gname}")
            if len(series) > self.degree_cap:
                raise LambdaRingError(f"lambda-table of {gname} exceeds the degree cap")
            ev = self._eps(v)
            K = len(series)
            for c, val in enumerate(ev):
                if not 0 <= val <= K:
                    raise LambdaRingError(
                        f"eps({gname}) = {val} has nonvanishing binomials beyond the declared degree {K}")
            for n, s in enumerate(series, start=1):
                if self._eps(s) != tuple(binom(val, n) for val in ev):
                    raise LambdaRingError(f"eps(lambda^{n}({gname})) is not binomial")
        if not self._series_is_polynomial(self.one_vec, [self.one_vec, self.one_vec]):
            raise LambdaRingError("lambda_t(1) is not 1 + t")
        for idx, r in enumerate(self.additive.relations.data):
            if not self._series_is_polynomial(tuple(r), [self.one_vec]):
                raise LambdaRingError(f"lambda_t does not vanish on additive relation {idx}")
        self.checks["structure"] = "unit, commutativity, associativity, ideal relations: ok"
        self.checks["augmentation"] = "ring map, binomial on lambda-generators: ok"
        self.checks["lambda_unit"] = "lambda_t(1) = 1 + t: ok"
        self._check_product_axiom()

    def _check_product_axiom(self):
        """Degree-2 product axiom on basis and generator pairs.

        ``lambda^2(xy) = x^2 lambda^2(y) + y^2 lambda^2(x) - 2 lambda^2(x) lambda^2(y)``.
        Higher universal polynomials are not checked.
        """
        samples = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        samples += [v for _, v, _ in self.generators]
        pairs = 0
        for x, y in itertools.combinations_with_replacement(samples, 2):
            lx, ly = self._lambdas(x, 2), self._lambdas(y, 2)
            lxy = self._lambdas(self._mul(x, y), 2)
            rhs = self._add(self._add(self._mul(self._mul(x, x), ly[2]), self._mul(self._mul(y, y), lx[2])),
                            self._scale(-2, self._mul(lx[2], ly[2])))
            if not self._eq(lxy[2], rhs):
                raise LambdaRingError("degree-2 product axiom fails; not a special lambda-ring")
            pairs += 1
        self.checks["product_axiom_degree_2"] = f"checked on {pairs} pairs; higher degrees not verified"

    # -- lambda, Adams, gamma on coordinate vectors ---------------------------

    def _lambdas(self, a: Vec, n: int):
        if n > self.degree_cap:
            raise DegreeCapError(f"degree {n} exceeds the ring's degree cap {self.degree_cap}")
        c = self.generator_coords(a)
        out = [self.one_vec] + [self.zero_vec] * n
        for idx, ci in enumerate(c):
            if ci:
                out = self._series_mul(out, self._series_pow(self._generator_poly(idx), ci, n), n)
        return out

    def _adams(self, a: Vec, n: int) -> Vec:
        if n < 1:
            raise LambdaRingError("Adams operations are indexed by n >= 1")
        lam = self._lambdas(a, n)
        psi = [None, lam[1]]
        for m in range(2, n + 1):
            acc = self._scale((-1) ** (m - 1) * m, lam[m])
            for i in range(1, m):
                acc = self._add(acc, self._scale((-1) ** (i - 1), self._mul(lam[i], psi[m - i])))
            psi.append(self._reduce(acc))
        return psi[n]

    def _gamma(self, a: Vec, n: int) -> Vec:
        if n == 0:
            return self.one_vec
        lam = self._lambdas(a, n)
        acc = self.zero_vec
        for i in range(n + 1):
            acc = self._add(acc, self._scale(binom(n - 1, n - i), lam[i]))
        return self._reduce(acc)

    def _gamma_rational(self, a: Vec):
        """``gamma_t(a) = A(t) / B(t)`` with polynomial ``A``, ``B`` and ``B(0) = 1``.

        Uses ``gamma_t(a) = lambda_{t/(1-t)}(a)``; each generator polynomial of
        degree ``K`` becomes ``(1-t)^K P(t/(1-t))`` over ``(1-t)^K``.
        """
        c = self.generator_coords(a)
        num, den = [self.one_vec], [self.one_vec]
        shift = 0
        for idx, ci in enumerate(c):
            if not ci:
                continue
            P = self._generator_poly(idx)
            K = len(P) - 1
            Pt = [self.zero_vec] * (K + 1)
            for m, coeff in enumerate(P):
                # coeff t^m (1-t)^(K-m)
                for r in range(K - m + 1):
                    Pt[m + r] = self._add(Pt[m + r], self._scale(binom(K - m, r) * (-1) ** r, coeff))
            for _ in range(abs(ci)):
                if ci > 0:
                    num = self._poly_mul(num, Pt)
                else:
                    den = self._poly_mul(den, Pt)
            shift -= ci * K
        one_minus_t = [self.one_vec, self._scale(-1, self.one_vec)]
        for _ in range(abs(shift)):
            if shift > 0:
                num = self._poly_mul(num, one_minus_t)
            else:
                den = self._poly_mul(den, one_minus_t)
        return self._trim(num), self._trim(den)

    def _gamma_coefficients(self, a: Vec, n: int):
        A, B = self._gamma_rational(a)
        A = A + [self.zero_vec] * max(0, n + 1 - len(A))
        return self._series_mul(A[: n + 1], self._series_inv(B, n), n), len(A) - 1, len(B) - 1

    # -- public element API ------------------------------------------------

    def element(self, value) -> RingElement:
        """Build an element from coordinates, a name, or a linear expression like ``'1 - x'``."""
        if isinstance(value, RingElement):
            return value
        if isinstance(value, str):
            return RingElement(self, self.parse(value))
        if isinstance(value, int):
            return RingElement(self, self._scale(value, self.one_vec))
        vec = tuple(int(c) for c in value)
        if len(vec) != self.rank:
            raise LambdaRingError(f"coordinate vector of length {len(vec)}, expected {self.rank}")
        return RingElement(self, vec)

    _TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+)\s*\*?\s*)?([A-Za-z_][\w]*)?\s*")

    def parse(self, text: str) -> Vec:
        out = self.zero_vec
        pos = 0
        text = text.strip()
        if not text:
            raise LambdaRingError("empty element expression")
        while pos < len(text):
            m = self._TERM.match(text, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise LambdaRingError(f"cannot parse element expression {text!r} at offset {pos}")
            sign = -1 if m.group(1) == "-" else 1
            coef = int(m.group(2)) if m.group(2) else 1
            name = m.group(3)
            if name is None:
                vec = self.one_vec
            elif name in self.aliases:
                vec = self.aliases[name]
            else:
                raise LambdaRingError(f"unknown element name {name!r}")
            out = self._add(out, self._scale(sign * coef, vec))
            pos = m.end()
            if pos < len(text) and text[pos] not in "+-":
                raise LambdaRingError(f"cannot parse element expression {text!r} at offset {pos}")
        return out

    def one(self) -> RingElement:
        return RingElement(self, self.one_vec)

    def zero(self) -> RingElement:
        return RingElement(self, self.zero_vec)

    def basis_elements(self) -> list[RingElement]:
        return [RingElement(self, tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    def epsilon(self, x: RingElement) -> Vec:
        return self._eps(x.coords)

    # -- additive structure --------------------------------------------------

    @cached_property
    def augmentation_hom(self) -> GroupHom:
        target = free_group(self.aug_rank)
        cols = [self.augmentation[j] for j in range(self.rank)]
        M = IntMatrix.from_columns(cols, self.aug_rank)
        return GroupHom(self.additive, target, M)

    @cached_property
    def augmentation_kernel(self) -> Subgroup:
        """``ker eps`` on the declared kernel basis when given, else on computed generators."""
        if self._kernel_basis is None:
            return kernel(self.augmentation_hom)
        sub = subgroup_generated(self.additive, self._kernel_basis, keep_generators=True)
        full = kernel(self.augmentation_hom)
        if not sub.equals(full):
            raise LambdaRingError("declared kernel_basis does not generate ker eps")
        return sub

    def adams_hom(self, n: int) -> GroupHom:
        cols = [self._adams(tuple(int(i == j) for j in range(self.rank)), n) for i in range(self.rank)]
        return GroupHom(self.additive, self.additive, IntMatrix.from_columns(cols, self.rank))

    def to_group_element(self, x: RingElement) -> GroupElement:
        return GroupElement(self.additive, x.coords)

    def __repr__(self):
        label = self.name or "LambdaRing"
        return f"<{label}: basis {list(self.basis)}, additive group {self.additive.describe()}>"


@dataclass(frozen=True, eq=False)
class RingElement:
    ring: LambdaRing
    coords: Vec

    def _check(self, other):
        if isinstance(other, int):
            return RingElement(self.ring, self.ring._scale(other, self.ring.one_vec))
        if not isinstance(other, RingElement) or other.ring is not self.ring:
            raise LambdaRingError("elements of different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        return RingElement(self.ring, self.ring._add(self.coords, other.coords))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, self.ring._scale(-1, self.coords))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.ring, self.ring._scale(other, self.coords))
        other = self._check(other)
        return RingElement(self.ring, self.ring._mul(self.coords, other.coords))

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return self.ring._is_zero(self.coords)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._check(other)
        if not isinstance(other, RingElement) or other.ring is not self.ring:
            return NotImplemented
        return self.ring._eq(self.coords, other.coords)

    def __hash__(self):
        return hash((id(self.ring), self.ring.additive.canonical(self.coords)))

    def reduced(self) -> RingElement:
        return RingElement(self.ring, self.ring._reduce(self.coords))

    def describe(self) -> str:
        terms = []
        for c, b in zip(self.ring._reduce(self.coords), self.ring.basis):
            if c:
                terms.append(f"{c}" if b == "1" else (b if c == 1 else f"-{b}" if c == -1 else f"{c}*{b}"))
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def __repr__(self):
        return f"RingElement({self.describe()})"


# ---------------------------------------------------------------------------
# operations


def lambda_series(x: RingElement, degree: int) -> list[RingElement]:
    """``[lambda^0(x), ..., lambda^degree(x)]``."""
    R = x.ring
    return [RingElement(R, v) for v in R._lambdas(x.coords, degree)]


def adams(x: RingElement, n: int) -> RingElement:
    """``psi^n(x)`` by the Newton recursion on the lambda-series."""
    return RingElement(x.ring, x.ring._adams(x.coords, n))


def gamma(x: RingElement, n: int) -> RingElement:
    """``gamma^n(x) = lambda^n(x + n - 1)``."""
    return RingElement(x.ring, x.ring._gamma(x.coords, n))


def gamma_series(x: RingElement, degree: int) -> list[RingElement]:
    """``gamma^0(x) .. gamma^degree(x)`` from the closed form of ``gamma_t``."""
    coeffs, _, _ = x.ring._gamma_coefficients(x.coords, degree)
    return [RingElement(x.ring, v) for v in coeffs]


def certified_gamma_degree(x: RingElement, search: int = 16) -> int | None:
    """Largest ``w`` with ``gamma^w(x) != 0``, certified; None if undecided.

    ``gamma_t(x) = A(t)/B(t)``, so past ``deg A`` the coefficients obey a
    linear recurrence of order ``deg B``; a run of ``deg B`` zeros beyond
    ``deg A`` is therefore permanent.
    """
    R = x.ring
    A, B = R._gamma_rational(x.coords)
    dA, dB = len(A) - 1, len(B) - 1
    N = dA + search + max(dB, 1)
    A = A + [R.zero_vec] * max(0, N + 1 - len(A))
    c = R._series_mul(A[: N + 1], R._series_inv(B, N), N)
    zero = [R._is_zero(v) for v in c]
    for w0 in range(dA + 1, dA + search + 1):
        if all(zero[w0 : w0 + dB]):
            return max((w for w in range(w0) if not zero[w]), default=0)
    return None


# ---------------------------------------------------------------------------
# gamma filtration


@dataclass
class GammaFiltration:
    ring: LambdaRing
    steps: list[Subgroup]
    cap: int
    finite_at: int | None
    gamma_degrees: list[int | None]
    notes: list[str] = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return self.finite_at is not None

    @property
    def verdict(self) -> str:
        return f"FINITE({self.finite_at})" if self.finite else f"INCONCLUSIVE({self.cap})"

    def level(self, n: int) -> Subgroup:
        if n >= len(self.steps):
            if self.finite:
                return self.steps[self.finite_at]
            raise IndexError(f"level {n} beyond the computed cap {self.cap}")
        return self.steps[n]

    def generators(self, n: int) -> list[RingElement]:
        return [RingElement(self.ring, g.coords) for g in self.level(n).generators()]

    def contains(self, n: int, x: RingElement) -> bool:
        return self.level(n).contains(self.ring.to_group_element(x))

    def describe_levels(self) -> list[str]:
        return [s.group.describe() for s in self.steps]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "cap": self.cap,
            "levels": self.describe_levels(),
            "generators": [[RingElement(self.ring, g.coords).describe() for g in s.generators()] for s in self.steps],
            "certified_gamma_degrees": self.gamma_degrees,
            "notes": self.notes,
        }


def gamma_filtration(ring: LambdaRing, cap: int = 8) -> GammaFiltration:
    """``F^0 = ring, F^1 = ker eps, F^n = sum_j sum_i gamma^i(y_j) F^(n-i)`` up to ``cap``.

    ``y_j`` runs over additive generators of ``ker eps``.  When every
    ``gamma_t(y_j)`` is certified to be a polynomial the levels are exact and a
    zero level gives ``FINITE(N)``.  Otherwise weights are added in ascending
    order up to ``cap``, stopping once two consecutive weights contribute
    nothing, and the verdict is ``INCONCLUSIVE(cap)``.
    """
    if cap < 1:
        raise LambdaRingError("filtration cap must be >= 1")
    R = ring
    K1 = R.augmentation_kernel
    ys = [RingElement(R, g.coords) for g in K1.generators()]
    degrees = [certified_gamma_degree(y, search=max(cap, 8)) for y in ys]
    certified = all(d is not None for d in degrees)
    notes = []
    depth = [d if d is not None else cap for d in degrees]
    max_w = max(depth, default=0)
    gam = [R._gamma_coefficients(y.coords, max(max_w, 1))[0] for y in ys]

    full = subgroup_generated(R.additive, [b.coords for b in R.basis_elements()])
    steps = [full, K1]
    for n in range(2, cap + 1):
        gens: list[Vec] = []
        current = None
        for j, y in enumerate(ys):
            idle = 0
            for i in range(1, depth[j] + 1):
                gi = gam[j][i]
                if R._is_zero(gi):
                    if degrees[j] is None:
                        idle += 1
                        if idle >= 2:
                            break
                    continue
                lower = steps[max(n - i, 0)]
                new = [R._mul(gi, h.coords) for h in lower.generators()]
                new = [v for v in new if not R._is_zero(v)]
                if degrees[j] is None:
                    test = subgroup_generated(R.additive, gens + new)
                    if current is not None and test.equals(current):
                        idle += 1
                        if idle >= 2:
                            break
                    else:
                        idle = 0
                    current = test
                gens.extend(new)
        steps.append(subgroup_generated(R.additive, gens))
    finite_at = None
    if certified:
        finite_at = next((n for n, s in enumerate(steps) if s.is_trivial()), None)
        if finite_at is not None:
            steps = steps[: finite_at + 1]
    else:
        bad = [ys[j].describe() for j, d in enumerate(degrees) if d is None]
        notes.append(f"gamma_t not certified polynomial for {', '.join(bad)}; levels are lower bounds "
                     "from weights up to the cap")
        if steps[-1].is_trivial():
            notes.append("a computed level vanished but the vanishing is not certified")
    return GammaFiltration(R, steps, cap, finite_at, degrees, notes)


# ---------------------------------------------------------------------------
# verifiers


@dataclass
class GradedAdamsReport:
    ell: int
    levels: list[dict]

    @property
    def passed(self) -> bool:
        return all(lv["pass"] for lv in self.levels)

    def to_dict(self) -> dict:
        return {"ell": self.ell, "pass": self.passed, "levels": self.levels}


def verify_graded_adams(ring: LambdaRing, ell: int, filtration: GammaFiltration) -> GradedAdamsReport:
    """``psi^ell - ell^n`` maps ``F^n`` into ``F^(n+1)`` on every level ``n < N``."""
    if not filtration.finite:
        raise LambdaRingError(f"graded Adams check needs a finite filtration, got {filtration.verdict}")
    N = filtration.finite_at
    levels = []
    for n in range(N):
        failures = []
        gens = filtration.generators(n)
        for g in gens:
            diff = adams(g, ell) - (ell ** n) * g
            if not filtration.contains(n + 1, diff):
                failures.append({"generator": g.describe(), "psi_minus_scalar": diff.describe()})
        levels.append({"level": n, "scalar": ell ** n, "generators": len(gens), "pass": not failures,
                       "failures": failures})
    return GradedAdamsReport(ell, levels)


@dataclass
class PropLambdaReport:
    ring: str
    ell: int
    preserves_kernel: bool
    kernel: str
    psi_matrix: list[list[int]]
    lemell: LemEllReport
    filtration_verdict: str
    expected: bool | None
    colimit: str
    localization: str

    @property
    def conclusion(self) -> bool:
        return self.preserves_kernel and self.lemell.overall

    @property
    def consistent(self) -> bool:
        return self.expected is None or self.expected == self.conclusion

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "ell": self.ell,
            "preserves_kernel": self.preserves_kernel,
            "kernel": self.kernel,
            "psi_matrix": [[str(v) for v in row] for row in self.psi_matrix],
            "lemell": self.lemell.to_dict(),
            "filtration": self.filtration_verdict,
            "expected": self.expected,
            "conclusion": self.conclusion,
            "consistent": self.consistent,
            "colimit": self.colimit,
            "localization": self.localization,
        }


def adams_on_kernel(ring: LambdaRing, ell: int) -> GroupHom:
    """``psi^ell`` restricted to ``ker eps`` on the kernel's generators."""
    K = ring.augmentation_kernel
    return restrict(ring.adams_hom(ell), K, K)


def verify_prop_lambda(ring: LambdaRing, ell: int, cap: int | None = None,
                       budget: int | None = None) -> PropLambdaReport:
    """Test ``colim_{psi^ell}(ker eps) ~ (ker eps)[1/ell]`` on a presented ring."""
    if ell <= 1:
        raise LambdaRingError("ell must be > 1")
    K = ring.augmentation_kernel
    psi = ring.adams_hom(ell)
    preserves = all(not any(ring._eps(psi(g).coords)) for g in K.generators())
    theta = restrict(psi, K, K)
    report = lemell_check(theta, ell, budget)
    filt = gamma_filtration(ring, cap if cap is not None else max(ell, 8))
    expected = True if filt.finite else None
    loc = localize(K.group, ell)
    if report.overall:
        colim = loc.describe()
    else:
        lim = DirectLimit(theta)
        m = lim.stabilization_index
        if all(lim.power(m)(g).is_zero() for g in K.group.generators()):
            colim = "0"
        elif K.group.is_finite:
            colim = eventual_image(theta).group.describe()
        else:
            colim = "not computed"
    return PropLambdaReport(ring.name, ell, preserves, K.group.describe(), theta.matrix.tolist(), report,
                            filt.verdict, expected, colim, loc.describe())


# ---------------------------------------------------------------------------
# descriptions (JSON-shaped dicts)


def _int(v) -> int:
    if isinstance(v, bool):
        raise LambdaRingError("booleans are not integers")
    if isinstance(v, int):
        return v
    if isinstance(v, str) and re.fullmatch(r"[+-]?\d+", v.strip()):
        return int(v)
    raise LambdaRingError(f"expected an integer or decimal string, got {v!r}")


def _vector(v, basis: Sequence[str], where: str) -> Vec:
    k = len(basis)
    if isinstance(v, dict):
        out = [0] * k
        for name, c in v.items():
            if name not in basis:
                raise LambdaRingError(f"{where}: unknown basis element {name!r}")
            out[basis.index(name)] += _int(c)
        return tuple(out)
    if not isinstance(v, (list, tuple)) or len(v) != k:
        raise LambdaRingError(f"{where}: expected a vector of length {k}")
    return tuple(_int(c) for c in v)


def load_lambda_ring(description: dict) -> LambdaRing:
    """Build and validate a ring from its JSON-shaped description.

    Keys: ``basis``, ``mult`` (``"a*b": vector``; products with ``1`` are
    implicit, missing pairs are zero), ``lambda`` (per lambda-generator,
    ``{"1": vec, ..., "nilpotent_above": K}``), ``augmentation`` (per basis
    element), and optionally ``elements`` (named vectors usable as
    lambda-generators or in expressions), ``additive_relations``,
    ``kernel_basis``, ``degree_cap``, ``name``.  Vectors are lists of
    integers / decimal strings or ``{basis_name: coefficient}`` dicts.
    """
    if not isinstance(description, dict):
        raise LambdaRingError("ring description must be a JSON object")
    try:
        basis = [str(b) for b in description["basis"]]
        lam = description["lambda"]
        aug = description["augmentation"]
    except KeyError as exc:
        raise LambdaRingError(f"ring description is missing {exc.args[0]!r}") from None
    k = len(basis)
    if len(set(basis)) != k:
        raise LambdaRingError("duplicate basis names")
    elements = {name: _vector(v, basis, f"elements[{name}]") for name, v in description.get("elements", {}).items()}
    named = dict(elements)
    for i, b in enumerate(basis):
        named.setdefault(b, tuple(int(i == j) for j in range(k)))

    mult = [[[0] * k for _ in range(k)] for _ in range(k)]
    if k:
        for j in range(k):
            mult[0][j] = list(named[basis[j]])
            mult[j][0] = list(named[basis[j]])
    given = set()
    for key, v in description.get("mult", {}).items():
        parts = [p.strip() for p in str(key).split("*")]
        if len(parts) != 2 or any(p not in basis for p in parts):
            raise LambdaRingError(f"mult key {key!r} must be 'a*b' with basis names")
        i, j = basis.index(parts[0]), basis.index(parts[1])
        vec = list(_vector(v, basis, f"mult[{key}]"))
        if (j, i) in given and mult[j][i] != vec:
            raise LambdaRingError(f"mult[{key}] disagrees with its transpose; multiplication not commutative")
        mult[i][j] = vec
        given.add((i, j))
        if (j, i) not in given:
            mult[j][i] = vec

    gens = []
    for gname, table in lam.items():
        if gname not in named:
            raise LambdaRingError(f"lambda table for unknown element {gname!r}")
        if not isinstance(table, dict):
            raise LambdaRingError(f"lambda[{gname}] must be an object")
        degrees = sorted(_int(n) for n in table if n != "nilpotent_above")
        top = _int(table.get("nilpotent_above", max(degrees, default=0)))
        if degrees != list(range(1, top + 1)):
            raise LambdaRingError(f"lambda[{gname}] must list lambda^1 .. lambda^{top} exactly")
        series = [_vector(table[str(n)], basis, f"lambda[{gname}][{n}]") for n in range(1, top + 1)]
        gens.append((gname, named[gname], series))

    try:
        augmentation = [[_int(c) for c in aug[b]] for b in basis]
    except KeyError as exc:
        raise LambdaRingError(f"augmentation missing for {exc.args[0]!r}") from None
    relations = [_vector(r, basis, "additive_relations") for r in description.get("additive_relations", [])]
    kb = description.get("kernel_basis")
    kernel_basis = None
    if kb is not None:
        kernel_basis = []
        for item in kb:
            if isinstance(item, str):
                if item not in named:
                    raise LambdaRingError(f"kernel_basis: unknown element {item!r}")
                kernel_basis.append(named[item])
            else:
                kernel_basis.append(_vector(item, basis, "kernel_basis"))
    return LambdaRing(basis, mult, augmentation, gens, relations, elements, kernel_basis,
                      degree_cap=_int(description.get("degree_cap", 16)), name=str(description.get("name", "")))


def ring_description(ring: LambdaRing) -> dict:
    """Inverse of :func:`load_lambda_ring` (integers written as decimal strings)."""
    basis = list(ring.basis)

    def vec(v):
        return [str(c) for c in v]

    mult = {}
    for i in range(1, ring.rank):
        for j in range(i, ring.rank):
            if any(ring.mult[i][j]):
                mult[f"{basis[i]}*{basis[j]}"] = vec(ring.mult[i][j])
    names = {v: n for n, v in ring.aliases.items() if n not in basis}
    elements = {}
    lam = {}
    for gname, v, series in ring.generators:
        if gname not in basis:
            elements[gname] = vec(v)
        table = {str(n): vec(s) for n, s in enumerate(series, start=1)}
        table["nilpotent_above"] = len(series)
        lam[gname] = table
    for n, v in ring.aliases.items():
        if n not in basis and n not in elements:
            elements[n] = vec(v)
    out = {
        "name": ring.name,
        "basis": basis,
        "mult": mult,
        "lambda": lam,
        "augmentation": {b: [str(c) for c in e] for b, e in zip(basis, ring.augmentation)},
    }
    if elements:
        out["elements"] = elements
    if ring.additive.relations.rows:
        out["additive_relations"] = [vec(r) for r in ring.additive.relations.data]
    if ring._kernel_basis is not None:
        out["kernel_basis"] = [names.get(v, vec(v)) if v in names else vec(v) for v in ring._kernel_basis]
    if ring.degree_cap != 16:
        out["degree_cap"] = ring.degree_cap
    return out


# ---------------------------------------------------------------------------
# ring families


def integers_ring() -> LambdaRing:
    """``Z`` with ``lambda^n(m) = C(m, n)``."""
    return load_lambda_ring({
        "name": "Z",
        "basis": ["1"],
        "lambda": {"1": {"1": [1], "nilpotent_above": 1}},
        "augmentation": {"1": [1]},
    })


def truncated_polynomial_ring(m: int) -> LambdaRing:
    """``Z[u]/(u^m)`` with ``xi = 1 + u`` a line element and ``eps(u) = 0``.

    Basis ``1, u, u2, ...``; lambda-generators ``xi^k = (1 + u)^k``; the
    kernel of ``eps`` is declared on ``u, u2, ..., u(m-1)``.
    """
    if m < 1:
        raise LambdaRingError("truncation order must be >= 1")
    basis = ["1"] + [("u" if i == 1 else f"u{i}") for i in range(1, m)]
    mult = {}
    for i in range(1, m):
        for j in range(i, m):
            if i + j < m:
                mult[f"{basis[i]}*{basis[j]}"] = {basis[i + j]: 1}
    elements, lam = {}, {}
    for k in range(m):
        coeffs = [math.comb(k, i) for i in range(m)]
        name = "1" if k == 0 else ("xi" if k == 1 else f"xi{k}")
        if k:
            elements[name] = coeffs
        lam[name] = {"1": coeffs, "nilpotent_above": 1}
    return load_lambda_ring({
        "name": f"Z[u]/(u^{m})",
        "basis": basis,
        "mult": mult,
        "elements": elements,
        "lambda": lam,
        "augmentation": {b: [1 if b == "1" else 0] for b in basis},
        "kernel_basis": basis[1:],
    })


def representation_ring_cyclic(n: int) -> LambdaRing:
    """``R(C_n) = Z[x]/(x^n - 1)``, ``x`` the regular character's line, ``eps`` = dimension."""
    if n < 1:
        raise LambdaRingError("group order must be >= 1")
    basis = ["1"] + [("x" if i == 1 else f"x{i}") for i in range(1, n)]
    mult = {}
    for i in range(1, n):
        for j in range(i, n):
            mult[f"{basis[i]}*{basis[j]}"] = {basis[(i + j) % n]: 1}
    lam = {b: {"1": {b: 1}, "nilpotent_above": 1} for b in basis}
    desc = {
        "name": f"R(C{n})",
        "basis": basis,
        "mult": mult,
        "lambda": lam,
        "augmentation": {b: [1] for b in basis},
    }
    if n > 1:
        desc["kernel_basis"] = [{"1": 1, b: -1} for b in basis[1:]]
    return load_lambda_ring(desc)


def c2_mod_two_ring() -> LambdaRing:
    """``R(C_2) / (2(1 - x))``: additive group ``Z + Z/2``, a ring with torsion."""
    return load_lambda_ring({
        "name": "R(C2)/(2(1-x))",
        "basis": ["1", "u"],
        "mult": {"u*u": {"u": -2}},
        "elements": {"x": [1, 1]},
        "lambda": {"1": {"1": [1, 0], "nilpotent_above": 1}, "x": {"1": [1, 1], "nilpotent_above": 1}},
        "augmentation": {"1": [1], "u": [0]},
        "additive_relations": [[0, 2]],
        "kernel_basis": ["u"],
    })


def square_zero_extension(ring: LambdaRing, names: Sequence[str], relations: Sequence[Sequence[int]],
                          action: dict[str, Sequence[Sequence[int]]],
                          lambda_tables: dict[str, dict]) -> LambdaRing:
    """``ring + M`` with ``M * M = 0``, for an FG module ``M`` on generators ``names``.

    ``action[b]`` is the matrix (columns = images of the ``M`` generators) of
    multiplication by basis element ``b``; ``lambda_tables`` gives the
    lambda-table of each new generator in the extended basis (there is no
    canonical choice, so it must be supplied).  ``eps`` vanishes on ``M``.
    """
    desc = ring_description(ring)
    old = list(ring.basis)
    basis = old + list(names)
    k, s = len(old), len(names)

    def extend(v):
        return [str(c) for c in v] + ["0"] * s

    out = dict(desc)
    out["name"] = f"{ring.name} + sq0({', '.join(names)})"
    out["basis"] = basis
    out["mult"] = {key: extend(v) for key, v in desc.get("mult", {}).items()}
    for b in old[1:]:
        A = action.get(b)
        if A is None:
            raise LambdaRingError(f"action of {b!r} on the module is missing")
        for j, nm in enumerate(names):
            out["mult"][f"{b}*{nm}"] = ["0"] * k + [str(A[i][j]) for i in range(s)]
    out["elements"] = {n: extend(v) for n, v in desc.get("elements", {}).items()}
    out["lambda"] = {}
    for g, table in desc["lambda"].items():
        out["lambda"][g] = {key: (extend(v) if key != "nilpotent_above" else v) for key, v in table.items()}
    out["lambda"].update(lambda_tables)
    out["augmentation"] = dict(desc["augmentation"])
    for nm in names:
        out["augmentation"][nm] = ["0"] * ring.aug_rank
    rels = [extend(r) for r in desc.get("additive_relations", [])]
    rels += [["0"] * k + [str(c) for c in r] for r in relations]
    if rels:
        out["additive_relations"] = rels
    if "kernel_basis" in desc:
        kb = [extend(v) if isinstance(v, list) else v for v in desc["kernel_basis"]]
        out["kernel_basis"] = kb + list(names)
    return load_lambda_ring(out)


def bundled_rings() -> dict[str, LambdaRing]:
    rings = {"Z": integers_ring(), "R(C2)": representation_ring_cyclic(2), "R(C3)": representation_ring_cyclic(3),
             "R(C2)/(2(1-x))": c2_mod_two_ring()}
    for m in range(2, 7):
        R = truncated_polynomial_ring(m)
        rings[R.name] = R
    return rings
