"""Exact integer matrix algebra and finitely generated abelian groups.

Everything here works over Python integers, so entries never overflow.  The
workhorse is :func:`smith_normal_form`; cokernels, kernels, images and
integer linear solves are all read off a Smith decomposition.

Groups are stored in invariant-factor form ``Z/d_1 + ... + Z/d_t + Z^f``
with ``d_1 | d_2 | ... | d_t`` and every ``d_i >= 2``.  An element is a tuple
of ``t + f`` integers, torsion coordinates first and reduced to
``[0, d_i)``.  A group obtained as a quotient ``Z^a / R`` remembers the
quotient map and a section (its :class:`Presentation`), which is what lets
homomorphisms be induced from integer matrices on the ambient lattices.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import InfiniteGroup, InvariantViolation, NoIntegerSolution, ValidationError

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major.

    ``ncols`` is stored explicitly so that matrices with no rows keep their
    width.
    """

    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix rows")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: int | None = None) -> IntMatrix:
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
        return cls(tuple(tuple(int(c[i]) for c in columns) for i in range(nrows)), len(columns))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> IntMatrix:
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def columns(self) -> list[Vector]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(tuple(self.columns()), self.nrows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return IntMatrix(
                tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
                other.ncols,
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(vec)}")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.rows)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __neg__(self) -> IntMatrix:
        return IntMatrix(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def hstack(self, *others: IntMatrix) -> IntMatrix:
        rows = [list(r) for r in self.rows]
        ncols = self.ncols
        for o in others:
            if o.nrows != self.nrows:
                raise ValueError("row count mismatch in hstack")
            for r, extra in zip(rows, o.rows):
                r.extend(extra)
            ncols += o.ncols
        return IntMatrix(tuple(tuple(r) for r in rows), ncols)

    def select_rows(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix(tuple(self.rows[i] for i in idx), self.ncols)

    def select_columns(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix(tuple(tuple(r[j] for j in idx) for r in self.rows), len(idx))

    def det(self) -> int:
        """Exact determinant by fraction-free Bareiss elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self.rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.nrows == self.ncols and abs(self.det()) == 1

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class SNFDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form.

    ``U_inv`` and ``V_inv`` are carried along because the cokernel and solver
    code needs them and tracking them during elimination is cheaper than
    inverting afterwards.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(A: IntMatrix) -> SNFDecomposition:
    """Smith normal form with explicit unimodular transforms.

    The pivot is always the entry of least nonzero absolute value in the
    active block; entries in the pivot row and column are reduced by
    Euclidean steps until they vanish, and a non-divisible entry elsewhere
    in the block is folded into the pivot row.
    """
    m, n = A.shape
    D = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    # Row operation "row_i += q * row_t" on D and U; its inverse acts on the
    # columns of U_inv as "col_t -= q * col_i".
    def row_add(i, t, q):
        if q == 0:
            return
        Di, Dt = D[i], D[t]
        for j in range(n):
            Di[j] += q * Dt[j]
        Ui_, Ut = U[i], U[t]
        for j in range(m):
            Ui_[j] += q * Ut[j]
        for r in Ui:
            r[t] -= q * r[i]

    def row_swap(i, t):
        if i == t:
            return
        D[i], D[t] = D[t], D[i]
        U[i], U[t] = U[t], U[i]
        for r in Ui:
            r[i], r[t] = r[t], r[i]

    def row_negate(t):
        D[t] = [-x for x in D[t]]
        U[t] = [-x for x in U[t]]
        for r in Ui:
            r[t] = -r[t]

    # Column operation "col_j += q * col_t" on D and V; inverse on rows of
    # V_inv is "row_t -= q * row_j".
    def col_add(j, t, q):
        if q == 0:
            return
        for r in D:
            r[j] += q * r[t]
        for r in V:
            r[j] += q * r[t]
        Vt, Vj = Vi[t], Vi[j]
        for k in range(n):
            Vt[k] -= q * Vj[k]

    def col_swap(j, t):
        if j == t:
            return
        for r in D:
            r[j], r[t] = r[t], r[j]
        for r in V:
            r[j], r[t] = r[t], r[j]
        Vi[j], Vi[t] = Vi[t], Vi[j]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        row_swap(t, best[1])
        col_swap(t, best[2])
        while True:
            p = D[t][t]
            for i in range(t + 1, m):
                row_add(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                col_add(j, t, -(D[t][j] // p))
            # Leftover remainders are strictly smaller than |p|: move the
            # smallest into the pivot slot and repeat.
            cand = None
            for i in range(t + 1, m):
                if D[i][t] and (cand is None or abs(D[i][t]) < cand[0]):
                    cand = (abs(D[i][t]), "r", i)
            for j in range(t + 1, n):
                if D[t][j] and (cand is None or abs(D[t][j]) < cand[0]):
                    cand = (abs(D[t][j]), "c", j)
            if cand is not None:
                if cand[1] == "r":
                    row_swap(t, cand[2])
                else:
                    col_swap(t, cand[2])
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if D[t][t] < 0:
            row_negate(t)

    def freeze(rows, ncols):
        return IntMatrix(tuple(tuple(r) for r in rows), ncols)

    return SNFDecomposition(freeze(U, m), freeze(D, n), freeze(V, n), freeze(Ui, m), freeze(Vi, n))


def is_smith_form(D: IntMatrix) -> bool:
    m, n = D.shape
    for i in range(m):
        for j in range(n):
            if i != j and D[i, j] != 0:
                return False
    diag = [D[i, i] for i in range(min(m, n))]
    if any(d < 0 for d in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            return False
        if a != 0 and b % a:
            return False
    return True


def integer_kernel(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{x in Z^n : A x = 0}``."""
    snf = smith_normal_form(A)
    r = snf.rank
    return snf.V.select_columns(range(r, A.ncols))


def lattice_basis(G: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of the lattice spanned by the columns of ``G``."""
    snf = smith_normal_form(G)
    diag = snf.diagonal
    cols = []
    for i, d in enumerate(diag):
        if d == 0:
            break
        cols.append(tuple(d * x for x in snf.U_inv.column(i)))
    return IntMatrix.from_columns(cols, G.nrows)


def solve_integer(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    """Return an integer ``X`` with ``A @ X == B``.

    Raises :class:`NoIntegerSolution` when the system has no integral
    solution.  When ``A`` has a nontrivial kernel the free part is set to 0.
    """
    if A.nrows != B.nrows:
        raise ValueError("row count mismatch")
    snf = smith_normal_form(A)
    diag = snf.diagonal
    r = snf.rank
    UB = snf.U @ B
    Z = [[0] * B.ncols for _ in range(A.ncols)]
    for i in range(A.nrows):
        for j in range(B.ncols):
            x = UB[i, j]
            if i < r:
                q, rem = divmod(x, diag[i])
                if rem:
                    raise NoIntegerSolution("system has no integral solution")
                Z[i][j] = q
            elif x != 0:
                raise NoIntegerSolution("system is inconsistent")
    return snf.V @ IntMatrix(tuple(tuple(z) for z in Z), B.ncols)


# ---------------------------------------------------------------------------
# Finitely generated abelian groups


@dataclass(frozen=True)
class Presentation:
    """Witness that a group is ``Z^ambient_rank / column-span(relations)``.

    ``to_group`` maps ambient vectors to unreduced group coordinates;
    ``from_group`` maps group coordinates back to ambient representatives.
    """

    ambient_rank: int
    relations: IntMatrix
    to_group: IntMatrix
    from_group: IntMatrix


@dataclass(frozen=True)
class FinGenAbGroup:
    torsion: tuple[int, ...]
    free_rank: int = 0
    presentation: Presentation | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factors must be >= 2, got {d}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors must divide in order: {self.torsion}")

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def moduli(self) -> tuple[int, ...]:
        """Order of each generator, 0 meaning infinite."""
        return self.torsion + (0,) * self.free_rank

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def order(self) -> int | float:
        if self.free_rank:
            return math.inf
        return math.prod(self.torsion)

    def zero(self) -> Vector:
        return (0,) * self.ngens

    def reduce(self, x: Sequence[int]) -> Vector:
        if len(x) != self.ngens:
            raise ValueError(f"element of length {len(x)} in group with {self.ngens} generators")
        return tuple(v % d if d else v for v, d in zip(x, self.moduli))

    def add(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        return self.reduce([a + b for a, b in zip(x, y)])

    def sub(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        return self.reduce([a - b for a, b in zip(x, y)])

    def neg(self, x: Sequence[int]) -> Vector:
        return self.reduce([-a for a in x])

    def elements(self) -> list[Vector]:
        """All elements, lexicographically ordered."""
        if not self.is_finite():
            raise InfiniteGroup("cannot enumerate an infinite group")
        return list(itertools.product(*(range(d) for d in self.torsion)))

    def element_order(self, x: Sequence[int]) -> int | float:
        x = self.reduce(x)
        if any(x[len(self.torsion):]):
            return math.inf
        o = 1
        for v, d in zip(x, self.torsion):
            o = math.lcm(o, d // math.gcd(v, d))
        return o

    def project(self, v: Sequence[int]) -> Vector:
        """Image of an ambient lattice vector (requires a presentation)."""
        if self.presentation is None:
            raise ValueError("group has no presentation")
        return self.reduce(self.presentation.to_group @ v)

    def lift(self, x: Sequence[int]) -> Vector:
        if self.presentation is None:
            raise ValueError("group has no presentation")
        return self.presentation.from_group @ tuple(x)

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class AbHom:
    """Homomorphism given by its matrix on the invariant-factor generators.

    Column ``j`` of ``matrix`` is the image of generator ``j`` of ``source``
    in the coordinates of ``target``.
    """

    source: FinGenAbGroup
    target: FinGenAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise ValueError(
                f"hom matrix has shape {self.matrix.shape}, "
                f"expected {(self.target.ngens, self.source.ngens)}"
            )
        for j, d in enumerate(self.source.moduli):
            if d and self.target.reduce([d * x for x in self.matrix.column(j)]) != self.target.zero():
                raise ValidationError(f"generator {j} of order {d} does not map to an element of order dividing {d}")

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.target.reduce(self.matrix @ tuple(x))

    def is_zero(self) -> bool:
        return all(self.target.reduce(c) == self.target.zero() for c in self.matrix.columns())

    def compose(self, inner: AbHom) -> AbHom:
        """``self o inner``."""
        return AbHom(inner.source, self.target, self.matrix @ inner.matrix)


def cokernel(A: IntMatrix) -> FinGenAbGroup:
    """``Z^rows / column-span(A)`` with its projection recorded.

    The projection is ``group.project``; it is surjective with kernel exactly
    the column span of ``A``.
    """
    snf = smith_normal_form(A)
    m = A.nrows
    diag = snf.diagonal + [0] * (m - len(snf.diagonal))
    keep = [i for i, d in enumerate(diag) if d != 1]
    torsion = tuple(diag[i] for i in keep if diag[i] != 0)
    free = sum(1 for i in keep if diag[i] == 0)
    pres = Presentation(
        ambient_rank=m,
        relations=A,
        to_group=snf.U.select_rows(keep),
        from_group=snf.U_inv.select_columns(keep),
    )
    return FinGenAbGroup(torsion, free, pres)


def relation_matrix(G: FinGenAbGroup) -> IntMatrix:
    """Diagonal relations of ``G`` on its own generators (zero for free ones)."""
    return IntMatrix.diagonal(list(G.moduli))


def induced_hom(source: FinGenAbGroup, target: FinGenAbGroup, ambient_map: IntMatrix) -> AbHom:
    """Hom induced by an integer matrix between the ambient lattices.

    Both groups must carry presentations; ``ambient_map`` must send the
    source relations into the target relations, which the :class:`AbHom`
    constructor checks.
    """
    ps, pt = source.presentation, target.presentation
    if ps is None or pt is None:
        raise ValueError("induced_hom needs presented groups")
    M = pt.to_group @ ambient_map @ ps.from_group
    mod = target.moduli
    M = IntMatrix(tuple(tuple(x % mod[i] if mod[i] else x for x in row) for i, row in enumerate(M.rows)), M.ncols)
    return AbHom(source, target, M)


def _relations_of_span(E: IntMatrix, G: FinGenAbGroup) -> IntMatrix:
    """Basis of ``{y : E y = 0 in G}`` where ``E`` has columns in ``G``."""
    r = E.ncols
    K = integer_kernel(E.hstack(relation_matrix(G)))
    K = K.select_rows(range(r))
    if K.ncols == 0:
        return IntMatrix.zeros(r, 0)
    return lattice_basis(K)


def subgroup_generated(G: FinGenAbGroup, elements: Sequence[Sequence[int]]) -> tuple[FinGenAbGroup, AbHom]:
    """Subgroup generated by ``elements``, with its inclusion into ``G``."""
    E = IntMatrix.from_columns([G.reduce(e) for e in elements], G.ngens)
    R = _relations_of_span(E, G)
    S = cokernel(R)
    incl = AbHom(S, G, _reduce_cols(E @ S.presentation.from_group, G))
    return S, incl


def image(f: AbHom) -> tuple[FinGenAbGroup, AbHom]:
    return subgroup_generated(f.target, f.matrix.columns())


def hom_kernel(f: AbHom) -> tuple[FinGenAbGroup, AbHom]:
    """Kernel of ``f`` in invariant-factor form, with its inclusion.

    The kernel is computed as ``{x in Z^s : M x in im diag(target)} / im
    diag(source)`` and then put in Smith form.
    """
    A, B = f.source, f.target
    s = A.ngens
    K = integer_kernel(f.matrix.hstack(relation_matrix(B))).select_rows(range(s))
    rel_cols = [c for c in relation_matrix(A).columns() if any(c)]
    gens = K.hstack(IntMatrix.from_columns(rel_cols, s)) if rel_cols else K
    if gens.ncols == 0:
        basis = IntMatrix.zeros(s, 0)
    else:
        basis = lattice_basis(gens)
    r = basis.ncols
    if rel_cols and r:
        Y = solve_integer(basis, IntMatrix.from_columns(rel_cols, s))
    else:
        Y = IntMatrix.zeros(r, 0)
    H = cokernel(Y)
    incl = AbHom(H, A, _reduce_cols(basis @ H.presentation.from_group, A))
    if not f.compose(incl).is_zero():
        raise InvariantViolation("kernel inclusion does not compose to zero")
    return H, incl


def _reduce_cols(M: IntMatrix, G: FinGenAbGroup) -> IntMatrix:
    mod = G.moduli
    return IntMatrix(tuple(tuple(x % mod[i] if mod[i] else x for x in row) for i, row in enumerate(M.rows)), M.ncols)


# ---------------------------------------------------------------------------
# Characters of finite abelian groups


_QUARTER_TURNS = (1 + 0j, 1j, -1 + 0j, -1j)


@dataclass(frozen=True)
class DualCharacter:
    """``x -> exp(2 pi i sum_i k_i x_i / d_i)`` on ``Z/d_1 + ... + Z/d_t``."""

    exponents: tuple[int, ...]
    moduli: tuple[int, ...]

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def phase(self, x: Sequence[int]) -> Fraction:
        return sum((Fraction(k * v, d) for k, v, d in zip(self.exponents, x, self.moduli)), Fraction(0)) % 1

    def __call__(self, x: Sequence[int]) -> complex:
        p = self.phase(x)
        # exact values at quarter turns keep real characters real
        if p.denominator <= 4 and 4 % p.denominator == 0:
            return _QUARTER_TURNS[int(p * 4)]
        return cmath.exp(2j * math.pi * float(p))

    def label(self) -> str:
        return "chi_" + "_".join(str(k) for k in self.exponents) if self.exponents else "chi_"


def character_group(H: FinGenAbGroup) -> list[DualCharacter]:
    """All characters of a finite group, trivial first, lexicographic order."""
    if not H.is_finite():
        raise InfiniteGroup("character group of an infinite group")
    return [DualCharacter(k, H.torsion) for k in itertools.product(*(range(d) for d in H.torsion))]


def iter_nontrivial(chars: Iterable[DualCharacter]) -> Iterator[DualCharacter]:
    return (c for c in chars if not c.is_trivial())
