"""Finitely generated abelian groups over exact Python integers.

A group is ``Z^k`` modulo the row span of an integer relation matrix.  Every
group carries its Smith normal form, which gives the canonical decomposition

    Z^k / rows(R)  ~  Z/d_1 + ... + Z/d_s + Z^r,     d_1 | d_2 | ... | d_s,

and a canonical coordinate vector for each element (torsion parts reduced to
``[0, d_i)``, free parts exact).  Homomorphisms are integer matrices whose
columns are the images of the source generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class AbelianGroupError(ValueError):
    """Malformed presentation, dimension mismatch, or ill-defined hom."""


# ---------------------------------------------------------------------------
# integer matrices


class IntMatrix:
    """Immutable integer matrix with explicit shape (empty shapes allowed)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[int]], rows: int | None = None, cols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise AbelianGroupError(f"ragged or mis-shaped matrix, expected {rows}x{cols}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        cols = len(columns)
        return cls([[columns[j][i] for j in range(cols)] for i in range(rows)], rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[int, ...]:
        """Row-major flat entries."""
        return tuple(x for row in self.data for x in row)

    @property
    def T(self) -> IntMatrix:
        return IntMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         self.cols, self.rows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.data)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise AbelianGroupError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.T.data
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ocols] for row in self.data],
                         self.rows, other.cols)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise AbelianGroupError(f"vector of length {len(vec)} for {self.shape} matrix")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.data)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix([[c * x for x in row] for row in self.data], self.rows, self.cols)

    def __pow__(self, n: int) -> IntMatrix:
        if self.rows != self.cols or n < 0:
            raise AbelianGroupError("matrix power needs a square matrix and n >= 0")
        result, base = IntMatrix.identity(self.rows), self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def det(self) -> int:
        """Determinant by Bareiss fraction-free elimination."""
        if self.rows != self.cols:
            raise AbelianGroupError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        M = [list(r) for r in self.data]
        sign, prev = 1, 1
        for k in range(n - 1):
            if M[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
                if swap is None:
                    return 0
                M[k], M[swap] = M[swap], M[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            prev = M[k][k]
        return sign * M[n - 1][n - 1]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.shape, self.data))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"


def as_matrix(obj, rows: int | None = None, cols: int | None = None) -> IntMatrix:
    if isinstance(obj, IntMatrix):
        return obj
    return IntMatrix(obj, rows, cols)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular; ``V_inv`` is ``V``'s inverse."""

    U: IntMatrix
    V: IntMatrix
    D: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nonzero diagonal entries (units included, zeros excluded)."""
        return tuple(d for d in self.diagonal if d != 0)


def smith_normal_form(A) -> SmithForm:
    """Smith normal form with minimal-absolute-value pivoting.

    Deterministic for a fixed input.  Diagonal entries are nonnegative, form a
    divisibility chain, and zeros come last.
    """
    A = as_matrix(A)
    m, n = A.shape
    D = [list(r) for r in A.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        Dd, Ds = D[dst], D[src]
        for c in range(n):
            Dd[c] += q * Ds[c]
        Ud, Us = U[dst], U[src]
        for c in range(m):
            Ud[c] += q * Us[c]

    def add_col(dst, src, q):
        # col dst += q * col src; inverse: row src of Vi -= q * row dst
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vs, Vd = Vi[src], Vi[dst]
        for c in range(n):
            Vs[c] -= q * Vd[c]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            piv = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -_round_div(D[i][t], piv))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -_round_div(D[t][j], piv))
            # smaller remainders become the next pivot
            cand = None
            for i in range(t + 1, m):
                if D[i][t] and (cand is None or abs(D[i][t]) < cand[0]):
                    cand = (abs(D[i][t]), "r", i)
            for j in range(t + 1, n):
                if D[t][j] and (cand is None or abs(D[t][j]) < cand[0]):
                    cand = (abs(D[t][j]), "c", j)
            if cand is not None:
                if cand[1] == "r":
                    swap_rows(t, cand[2])
                else:
                    swap_cols(t, cand[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    return SmithForm(IntMatrix(U, m, m), IntMatrix(V, n, n), IntMatrix(D, m, n), IntMatrix(Vi, n, n))


def _round_div(a: int, b: int) -> int:
    """Nearest-integer quotient, keeping remainders small."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


def solve_int(C: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """An integer solution ``z`` of ``C z = b``, or None if none exists."""
    if len(b) != C.rows:
        raise AbelianGroupError("right-hand side length mismatch")
    snf = smith_normal_form(C)
    w = snf.U.apply(b)
    diag = snf.diagonal
    r = snf.rank
    sol = [0] * C.cols
    for i, wi in enumerate(w):
        if i < r:
            q, rem = divmod(wi, diag[i])
            if rem:
                return None
            sol[i] = q
        elif wi:
            return None
    return snf.V.apply(sol)


def integer_kernel(C: IntMatrix) -> list[tuple[int, ...]]:
    """A basis of ``{z in Z^n : C z = 0}`` as column vectors."""
    snf = smith_normal_form(C)
    r = snf.rank
    return [snf.V.column(j) for j in range(r, C.cols)]


def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """A basis of the row lattice spanned by ``vectors`` in ``Z^dim``."""
    if not vectors:
        return []
    snf = smith_normal_form(IntMatrix(vectors, len(vectors), dim))
    diag = snf.diagonal
    return [tuple(diag[i] * x for x in snf.V_inv.data[i]) for i in range(snf.rank)]


# ---------------------------------------------------------------------------
# groups and elements


class FGAbelianGroup:
    """``Z^k`` modulo the row span of ``relations``.

    >>> G = FGAbelianGroup(3, [[2, 0, 0], [0, 3, 0]])
    >>> G.torsion_factors, G.free_rank
    ((6,), 1)
    """

    def __init__(self, num_generators: int, relations=()):
        k = int(num_generators)
        if k < 0:
            raise AbelianGroupError("negative generator count")
        rel = as_matrix(relations, None, k) if not isinstance(relations, IntMatrix) else relations
        if rel.rows == 0:
            rel = IntMatrix.zeros(0, k)
        if rel.cols != k:
            raise AbelianGroupError(f"relations have {rel.cols} columns, expected {k}")
        self.num_generators = k
        self.relations = rel
        self.smith = smith_normal_form(rel)
        diag = self.smith.diagonal
        moduli = [diag[j] if j < len(diag) else 0 for j in range(k)]
        # canonical slots: torsion (d > 1), then free (d == 0); units dropped
        self._tors_slots = tuple(j for j in range(k) if moduli[j] > 1)
        self._free_slots = tuple(j for j in range(k) if moduli[j] == 0)
        self._slots = self._tors_slots + self._free_slots
        self.torsion_factors = tuple(moduli[j] for j in self._tors_slots)
        self.free_rank = len(self._free_slots)
        self.moduli = self.torsion_factors + (0,) * self.free_rank

    # -- structure ---------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | float:
        return math.prod(self.torsion_factors) if self.is_finite else math.inf

    @property
    def torsion_order(self) -> int:
        return math.prod(self.torsion_factors)

    @property
    def canonical_rank(self) -> int:
        return len(self._slots)

    def is_trivial(self) -> bool:
        return self.canonical_rank == 0

    def isomorphic(self, other: FGAbelianGroup) -> bool:
        return (self.free_rank, self.torsion_factors) == (other.free_rank, other.torsion_factors)

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FGAbelianGroup({self.num_generators}, {self.relations.tolist()!r})  # {self.describe()}"

    def __eq__(self, other):
        if not isinstance(other, FGAbelianGroup):
            return NotImplemented
        return self.num_generators == other.num_generators and self.relations == other.relations

    def __hash__(self):
        return hash((self.num_generators, self.relations))

    # -- elements ----------------------------------------------------------

    def canonical(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.num_generators:
            raise AbelianGroupError(f"coordinate vector of length {len(coords)}, expected {self.num_generators}")
        Vd = self.smith.V.data
        y = [sum(coords[i] * Vd[i][j] for i in range(self.num_generators)) for j in self._slots]
        for s, d in enumerate(self.torsion_factors):
            y[s] %= d
        return tuple(y)

    def from_canonical(self, vec: Sequence[int]) -> GroupElement:
        if len(vec) != self.canonical_rank:
            raise AbelianGroupError("canonical vector length mismatch")
        gens = self.canonical_generator_coords
        coords = [0] * self.num_generators
        for c, g in zip(vec, gens):
            if c:
                for i in range(self.num_generators):
                    coords[i] += c * g[i]
        return GroupElement(self, tuple(coords))

    @cached_property
    def canonical_generator_coords(self) -> tuple[tuple[int, ...], ...]:
        """Generator coordinates of the canonical cyclic generators."""
        return tuple(self.smith.V_inv.data[j] for j in self._slots)

    def element(self, coords: Sequence[int]) -> GroupElement:
        return GroupElement(self, tuple(int(c) for c in coords))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.num_generators)

    def generators(self) -> list[GroupElement]:
        k = self.num_generators
        return [GroupElement(self, tuple(int(i == j) for i in range(k))) for j in range(k)]

    def canonical_generators(self) -> list[GroupElement]:
        return [GroupElement(self, g) for g in self.canonical_generator_coords]

    def is_zero(self, coords: Sequence[int]) -> bool:
        return not any(self.canonical(coords))

    def elements(self) -> Iterator[GroupElement]:
        """All elements of a finite group, in canonical-coordinate order."""
        if not self.is_finite:
            raise AbelianGroupError("cannot enumerate an infinite group")
        for vec in _mixed_radix(self.torsion_factors):
            yield self.from_canonical(vec)

    def element_order(self, coords: Sequence[int]) -> int | float:
        can = self.canonical(coords)
        if any(can[len(self.torsion_factors):]):
            return math.inf
        out = 1
        for c, d in zip(can, self.torsion_factors):
            out = math.lcm(out, d // math.gcd(c, d))
        return out


def _mixed_radix(moduli: Sequence[int]) -> Iterator[tuple[int, ...]]:
    vec = [0] * len(moduli)
    while True:
        yield tuple(vec)
        i = len(moduli) - 1
        while i >= 0:
            vec[i] += 1
            if vec[i] < moduli[i]:
                break
            vec[i] = 0
            i -= 1
        if i < 0:
            return


def group_from_relations(k: int, relations=()) -> FGAbelianGroup:
    return FGAbelianGroup(k, relations)


def free_group(k: int) -> FGAbelianGroup:
    return FGAbelianGroup(k)


def cyclic_group(n: int) -> FGAbelianGroup:
    return FGAbelianGroup(1, [[n]])


@dataclass(frozen=True, eq=False)
class GroupElement:
    group: FGAbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.num_generators:
            raise AbelianGroupError("coordinate vector length mismatch")

    @cached_property
    def canonical(self) -> tuple[int, ...]:
        return self.group.canonical(self.coords)

    def _check(self, other: GroupElement):
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise AbelianGroupError("elements of different groups")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __rmul__(self, c: int) -> GroupElement:
        return GroupElement(self.group, tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.canonical)

    @property
    def order(self) -> int | float:
        return self.group.element_order(self.coords)

    def reduced(self) -> GroupElement:
        """The representative whose generator coordinates come from the canonical vector."""
        return self.group.from_canonical(self.canonical)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group == other.group and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.group, self.canonical))

    def __repr__(self):
        return f"GroupElement({list(self.coords)} in {self.group.describe()})"


def element_equal(x: GroupElement, y: GroupElement) -> bool:
    if x.group != y.group:
        raise AbelianGroupError("element_equal: parent groups differ")
    return x.canonical == y.canonical


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class WellDefinedness:
    ok: bool
    violating_relation: int | None = None
    image: tuple[int, ...] | None = None

    def __bool__(self):
        return self.ok


def hom_is_well_defined(source: FGAbelianGroup, target: FGAbelianGroup, matrix) -> WellDefinedness:
    """Every source relation must map into the target relation lattice."""
    matrix = as_matrix(matrix, target.num_generators, source.num_generators)
    if matrix.shape != (target.num_generators, source.num_generators):
        raise AbelianGroupError(
            f"hom matrix shape {matrix.shape}, expected {(target.num_generators, source.num_generators)}")
    for idx, rel in enumerate(source.relations.data):
        img = matrix.apply(rel)
        if not target.is_zero(img):
            return WellDefinedness(False, idx, img)
    return WellDefinedness(True)


class GroupHom:
    """A homomorphism given by the images of the source generators (as columns)."""

    def __init__(self, source: FGAbelianGroup, target: FGAbelianGroup, matrix, check: bool = True):
        matrix = as_matrix(matrix, target.num_generators, source.num_generators)
        if matrix.shape != (target.num_generators, source.num_generators):
            raise AbelianGroupError(
                f"hom matrix shape {matrix.shape}, expected {(target.num_generators, source.num_generators)}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            wd = hom_is_well_defined(source, target, matrix)
            if not wd:
                raise AbelianGroupError(
                    f"hom not well defined: source relation {wd.violating_relation} maps to nonzero {list(wd.image)}")

    @classmethod
    def identity(cls, A: FGAbelianGroup) -> GroupHom:
        return cls(A, A, IntMatrix.identity(A.num_generators), check=False)

    @classmethod
    def scalar(cls, A: FGAbelianGroup, c: int) -> GroupHom:
        return cls(A, A, IntMatrix.identity(A.num_generators).scale(c), check=False)

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise AbelianGroupError("element not in the source group")
        return GroupElement(self.target, self.matrix.apply(x.coords))

    def apply_coords(self, coords: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.apply(coords)

    def compose(self, other: GroupHom) -> GroupHom:
        """``self o other``."""
        if other.target != self.source:
            raise AbelianGroupError("composition of non-composable homs")
        return GroupHom(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __matmul__(self, other: GroupHom) -> GroupHom:
        return self.compose(other)

    def power(self, n: int) -> GroupHom:
        if not self.is_endomorphism:
            raise AbelianGroupError("power of a non-endomorphism")
        return GroupHom(self.source, self.source, self.matrix ** n, check=False)

    def scale(self, c: int) -> GroupHom:
        return GroupHom(self.source, self.target, self.matrix.scale(c), check=False)

    def with_groups(self, source: FGAbelianGroup, target: FGAbelianGroup) -> GroupHom:
        """Same matrix read between other presentations on the same generators (checked)."""
        return GroupHom(source, target, self.matrix)

    def __eq__(self, other):
        """Equal as maps: same groups and same values on every generator."""
        if not isinstance(other, GroupHom):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        return all(self.target.is_zero(tuple(a - b for a, b in zip(self.matrix.column(j), other.matrix.column(j))))
                   for j in range(self.source.num_generators))

    def __hash__(self):
        return hash((self.source, self.target))

    def canonical_matrix(self) -> list[list[int]]:
        """The map in canonical coordinates: column j is the image of canonical generator j."""
        cols = [self.target.canonical(self.matrix.apply(g)) for g in self.source.canonical_generator_coords]
        n = self.target.canonical_rank
        return [[cols[j][i] for j in range(len(cols))] for i in range(n)]

    def is_zero(self) -> bool:
        return all(self.target.is_zero(self.matrix.column(j)) for j in range(self.source.num_generators))

    def __repr__(self):
        return f"GroupHom({self.source.describe()} -> {self.target.describe()}, {self.matrix.tolist()})"


Endomorphism = GroupHom


def endomorphism(A: FGAbelianGroup, matrix) -> GroupHom:
    return GroupHom(A, A, matrix)


# ---------------------------------------------------------------------------
# subgroups, kernels, cokernels


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup realised as an injective hom ``group -> ambient``."""

    group: FGAbelianGroup
    inclusion: GroupHom

    @property
    def ambient(self) -> FGAbelianGroup:
        return self.inclusion.target

    def generators(self) -> list[GroupElement]:
        """Images in the ambient group of the subgroup's canonical generators."""
        return [self.inclusion(g) for g in self.group.canonical_generators()]

    def contains(self, x: GroupElement) -> bool:
        return self.coords_of(x) is not None

    def coords_of(self, x: GroupElement) -> GroupElement | None:
        """The element of :attr:`group` mapping to ``x``, or None if ``x`` is outside."""
        if x.group != self.ambient:
            raise AbelianGroupError("element not in the ambient group")
        A = self.ambient
        s = self.group.num_generators
        block = [list(row) + list(rel_col) for row, rel_col in
                 zip(self.inclusion.matrix.data, A.relations.T.data or [()] * A.num_generators)]
        C = IntMatrix(block, A.num_generators, s + A.relations.rows)
        z = solve_int(C, x.coords)
        if z is None:
            return None
        return GroupElement(self.group, tuple(z[:s]))

    def is_trivial(self) -> bool:
        return self.group.is_trivial()

    def equals(self, other: Subgroup) -> bool:
        if other.ambient != self.ambient:
            return False
        return all(other.contains(g) for g in self.generators()) and all(self.contains(g) for g in other.generators())

    def elements(self) -> Iterator[GroupElement]:
        for e in self.group.elements():
            yield self.inclusion(e)


def _preimage_lattice(matrix: IntMatrix, target: FGAbelianGroup) -> list[tuple[int, ...]]:
    """Basis of ``{x in Z^s : matrix x = 0 in target}``."""
    s = matrix.cols
    rel_cols = target.relations.T  # k x r
    block = [list(row) + [-v for v in rrow] for row, rrow in
             zip(matrix.data, rel_cols.data or [()] * target.num_generators)]
    C = IntMatrix(block, target.num_generators, s + target.relations.rows)
    ker = integer_kernel(C)
    return lattice_basis([z[:s] for z in ker], s)


def subgroup_generated(A: FGAbelianGroup, elements: Sequence, keep_generators: bool = False) -> Subgroup:
    """The subgroup of ``A`` generated by the given elements (or coordinate vectors).

    By default the result is re-presented on its canonical cyclic generators.
    With ``keep_generators=True`` the subgroup's generators are exactly the
    given elements, in order.
    """
    vecs = [tuple(e.coords) if isinstance(e, GroupElement) else tuple(e) for e in elements]
    s = len(vecs)
    G = IntMatrix.from_columns(vecs, A.num_generators) if s else IntMatrix.zeros(A.num_generators, 0)
    rels = _preimage_lattice(G, A)
    sub = FGAbelianGroup(s, rels)
    if keep_generators:
        return Subgroup(sub, GroupHom(sub, A, G, check=False))
    # re-present on canonical generators to keep presentations small
    gens = [G.apply(g) for g in sub.canonical_generator_coords]
    rel = [[d if i == j else 0 for j in range(sub.canonical_rank)] for i, d in enumerate(sub.torsion_factors)]
    small = FGAbelianGroup(sub.canonical_rank, rel)
    M = IntMatrix.from_columns(gens, A.num_generators) if gens else IntMatrix.zeros(A.num_generators, 0)
    return Subgroup(small, GroupHom(small, A, M, check=False))


def image(h: GroupHom) -> Subgroup:
    return subgroup_generated(h.target, [h.matrix.column(j) for j in range(h.source.num_generators)])


def kernel(h: GroupHom) -> Subgroup:
    """``ker h`` with its inclusion into the source."""
    basis = _preimage_lattice(h.matrix, h.target)
    return subgroup_generated(h.source, basis)


@dataclass(frozen=True, eq=False)
class Quotient:
    group: FGAbelianGroup
    projection: GroupHom


def quotient(A: FGAbelianGroup, elements: Sequence) -> Quotient:
    """``A`` modulo the subgroup generated by ``elements``, on the same generators."""
    extra = [tuple(e.coords) if isinstance(e, GroupElement) else tuple(e) for e in elements]
    Q = FGAbelianGroup(A.num_generators, list(A.relations.data) + extra)
    return Quotient(Q, GroupHom(A, Q, IntMatrix.identity(A.num_generators), check=False))


def cokernel(h: GroupHom) -> Quotient:
    """``target / im h`` with its projection."""
    return quotient(h.target, [h.matrix.column(j) for j in range(h.source.num_generators)])


def torsion_subgroup(A: FGAbelianGroup, ell: int) -> Subgroup:
    """``A[ell] = {a : ell a = 0}``, built from the canonical decomposition."""
    if ell == 0:
        raise AbelianGroupError("torsion_subgroup needs ell != 0")
    ell = abs(ell)
    gens, orders = [], []
    for j, d in enumerate(A.torsion_factors):
        g = math.gcd(d, ell)
        if g > 1:
            vec = [0] * A.canonical_rank
            vec[j] = d // g
            gens.append(A.from_canonical(vec).coords)
            orders.append(g)
    n = len(gens)
    sub = FGAbelianGroup(n, [[orders[i] if i == j else 0 for j in range(n)] for i in range(n)])
    M = IntMatrix.from_columns(gens, A.num_generators) if gens else IntMatrix.zeros(A.num_generators, 0)
    return Subgroup(sub, GroupHom(sub, A, M, check=False))


def restrict(h: GroupHom, source: Subgroup, target: Subgroup) -> GroupHom:
    """``h`` restricted to subgroups with ``h(source) <= target``."""
    cols = []
    for g in source.group.generators():
        img = h(source.inclusion(g))
        c = target.coords_of(img)
        if c is None:
            raise AbelianGroupError("restriction: image leaves the target subgroup")
        cols.append(c.coords)
    M = IntMatrix.from_columns(cols, target.group.num_generators) if cols else \
        IntMatrix.zeros(target.group.num_generators, 0)
    return GroupHom(source.group, target.group, M)


def strip_primes(n: int, ell: int) -> int:
    """``n`` with every prime factor of ``ell`` removed."""
    n, ell = abs(n), abs(ell)
    if n == 0:
        return 0
    g = math.gcd(n, ell)
    while g > 1:
        n //= g
        g = math.gcd(n, ell)
    return n


def is_power_torsion(A: FGAbelianGroup, ell: int) -> bool:
    """True iff every element of ``A`` is killed by a power of ``ell``."""
    return A.free_rank == 0 and all(strip_primes(d, ell) == 1 for d in A.torsion_factors)
