"""Root data on a concrete lattice ``Z^n``.

Coordinate convention
---------------------
One lattice ``X = Z^n`` plays every role at once: it is the character
lattice of the dual maximal torus and, through the canonical
identification, the cocharacter lattice of the torus ``T_g`` of the group
``G``.  Simple roots are vectors in ``X`` (they span the root lattice of
the dual group, which is the coroot lattice of ``G``); simple coroots are
integer covectors on ``X``.  The Cartan matrix is
``C[i][j] = <alpha_j, alpha_i^vee>`` (Kac convention: row ``i`` of a
non-simply-laced Cartan matrix carries the entry ``-2``/``-3`` when
``alpha_i`` is short).

Every lattice is built as a sublattice of the weight lattice written in
fundamental-weight coordinates (plus plain coordinates for central torus
factors).  In those coordinates simple root ``j`` is column ``j`` of the
Cartan matrix and simple coroot ``i`` is the ``i``-th coordinate
functional.  ``rho`` is half-integral in general, so only ``2 rho`` is
ever stored.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

from .abelian import IntMatrix, NoIntegerSolution, lattice_basis, solve_integer
from .errors import GroupTooLarge, InvalidCartanType, LatticeDoesNotContainRoots, NonDominantWeight, ValidationError

Weight = tuple[int, ...]

WEYL_GROUP_CAP = 10**6

SERIES = "ABCDEFGT"
_ROOT_CAP = 10_000


@dataclass(frozen=True)
class CartanType:
    """Direct product of simple factors, plus optional central torus factors.

    ``("T", r)`` is a rank-``r`` torus with no roots.
    """

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        for series, rank in self.factors:
            _check_factor(series, rank)

    @classmethod
    def parse(cls, text: str) -> CartanType:
        """Parse ``"A2"``, ``"A1xA1"``, ``"B2xT1"``, ...  ``D2`` becomes ``A1xA1``."""
        text = text.strip()
        if not text:
            raise InvalidCartanType("empty Cartan type")
        factors: list[tuple[str, int]] = []
        for part in re.split(r"\s*[x×*]\s*", text):
            m = re.fullmatch(r"([A-Za-z])(\d+)", part)
            if not m:
                raise InvalidCartanType(f"cannot parse Cartan factor {part!r}")
            series, rank = m.group(1).upper(), int(m.group(2))
            if series == "D" and rank == 2:
                factors += [("A", 1), ("A", 1)]
                continue
            _check_factor(series, rank)
            factors.append((series, rank))
        return cls(tuple(factors))

    @property
    def semisimple_rank(self) -> int:
        return sum(r for s, r in self.factors if s != "T")

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.factors)

    @property
    def torus_rank(self) -> int:
        return sum(r for s, r in self.factors if s == "T")

    def cartan_matrix(self) -> IntMatrix:
        """Block-diagonal Cartan matrix of the semisimple factors."""
        n = self.semisimple_rank
        rows = [[0] * n for _ in range(n)]
        off = 0
        for series, rank in self.factors:
            if series == "T":
                continue
            block = _simple_cartan(series, rank)
            for i in range(rank):
                for j in range(rank):
                    rows[off + i][off + j] = block[i][j]
            off += rank
        return IntMatrix.from_rows(rows, n)

    def weyl_order(self) -> int:
        return math.prod(_weyl_order(s, r) for s, r in self.factors)

    def __str__(self) -> str:
        return "x".join(f"{s}{r}" for s, r in self.factors)


def _check_factor(series: str, rank: int) -> None:
    if series not in SERIES:
        raise InvalidCartanType(f"unknown series {series!r}")
    if rank < 1:
        raise InvalidCartanType(f"rank must be positive, got {series}{rank}")
    if series == "D" and rank < 3:
        raise InvalidCartanType(f"D{rank} is not a valid type (use A1xA1 for D2)")
    if series == "E" and rank not in (6, 7, 8):
        raise InvalidCartanType(f"E{rank} does not exist")
    if series == "F" and rank != 4:
        raise InvalidCartanType(f"F{rank} does not exist")
    if series == "G" and rank != 2:
        raise InvalidCartanType(f"G{rank} does not exist")


def _simple_cartan(series: str, n: int) -> list[list[int]]:
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, a_ij=-1, a_ji=-1):
        C[i][j], C[j][i] = a_ij, a_ji

    if series in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if series == "B" and n >= 2:
            link(n - 2, n - 1, -1, -2)  # alpha_n short
        if series == "C" and n >= 2:
            link(n - 2, n - 1, -2, -1)  # alpha_n long
    elif series == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif series == "E":
        # Bourbaki labelling: 1-3-4-5-6-(7-8), node 2 attached to 4.
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif series == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif series == "G":
        link(0, 1, -3, -1)  # alpha_1 short
    return C


def _weyl_order(series: str, n: int) -> int:
    if series == "T":
        return 1
    if series == "A":
        return math.factorial(n + 1)
    if series in "BC":
        return 2**n * math.factorial(n)
    if series == "D":
        return 2 ** (n - 1) * math.factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152, ("G", 2): 12}[(series, n)]


@dataclass(frozen=True)
class RootDatum:
    """Simple roots (vectors) and simple coroots (covectors) on ``Z^n``.

    Construct directly for ad-hoc data (e.g. a torus with no roots), or via
    :func:`build_root_datum` from a Cartan type.
    """

    lattice_rank: int
    simple_roots: tuple[Weight, ...]
    simple_coroots: tuple[Weight, ...]
    cartan_type: CartanType | None = None

    def __post_init__(self):
        n = self.lattice_rank
        if len(self.simple_roots) != len(self.simple_coroots):
            raise ValidationError("need as many simple coroots as simple roots")
        for v in self.simple_roots + self.simple_coroots:
            if len(v) != n:
                raise ValidationError(f"vector {v} does not have length {n}")
        C = self.cartan_matrix
        r = self.rank
        for i in range(r):
            if C[i, i] != 2:
                raise ValidationError("<alpha_i, alpha_i^vee> must equal 2")
        if r and _rank(self.root_matrix) != r:
            raise ValidationError("simple roots are not linearly independent")
        if self.cartan_type is not None:
            if self.cartan_type.semisimple_rank != r or self.cartan_type.cartan_matrix() != C:
                raise ValidationError(f"pairings do not reproduce the Cartan matrix of {self.cartan_type}")

    @property
    def rank(self) -> int:
        """Semisimple rank (number of simple roots)."""
        return len(self.simple_roots)

    @property
    def cartan_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [[pair(a, c) for a in self.simple_roots] for c in self.simple_coroots], self.rank
        )

    @property
    def root_matrix(self) -> IntMatrix:
        """``n x r`` matrix whose columns are the simple roots."""
        return IntMatrix.from_columns(self.simple_roots, self.lattice_rank)

    def fundamental_coords(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(pair(x, c) for c in self.simple_coroots)

    def is_dominant(self, x: Sequence[int]) -> bool:
        return all(v >= 0 for v in self.fundamental_coords(x))

    def reflect(self, i: int, x: Sequence[int]) -> Weight:
        k = pair(x, self.simple_coroots[i])
        return tuple(a - k * b for a, b in zip(x, self.simple_roots[i]))

    def root_coords(self, x: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of ``x`` in the simple-root basis; raises if ``x`` is not in the root lattice."""
        sol = solve_integer(self.root_matrix, IntMatrix.from_columns([x], self.lattice_rank))
        return sol.column(0)

    def in_root_lattice(self, x: Sequence[int]) -> bool:
        try:
            self.root_coords(x)
        except NoIntegerSolution:
            return False
        return True


def pair(x: Sequence[int], covector: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, covector))


def _rank(M: IntMatrix) -> int:
    from .abelian import smith_normal_form

    return smith_normal_form(M).rank


def build_root_datum(cartan_type: CartanType | str, lattice: str | Sequence[Sequence[int]] = "root") -> RootDatum:
    """Root datum of the given type on a chosen lattice.

    Parameters
    ----------
    cartan_type
        A :class:`CartanType` or a string such as ``"A2"`` or ``"A1xA1"``.
    lattice
        ``"root"`` for the root lattice (simple roots become the standard
        basis, so the fundamental group is trivial), ``"weight"`` for the
        full weight lattice, or a list of generators written in
        fundamental-weight coordinates.  Custom generators must span a
        full-rank lattice containing every simple root.
    """
    ct = CartanType.parse(cartan_type) if isinstance(cartan_type, str) else cartan_type
    C = ct.cartan_matrix()
    r, t = ct.semisimple_rank, ct.torus_rank
    n = r + t
    # Columns of P are the simple roots in fundamental-weight coordinates.
    P = IntMatrix.from_rows([list(row) for row in C.rows] + [[0] * r for _ in range(t)], r)

    if lattice == "root":
        basis = IntMatrix.from_rows(
            [list(C.rows[i]) + [0] * t for i in range(r)] + [[0] * r + [int(i == j) for j in range(t)] for i in range(t)],
            n,
        )
    elif lattice == "weight":
        basis = IntMatrix.identity(n)
    else:
        gens = [tuple(int(v) for v in g) for g in lattice]
        if any(len(g) != n for g in gens):
            raise ValidationError(f"lattice generators must have length {n}")
        basis = lattice_basis(IntMatrix.from_columns(gens, n)) if gens else IntMatrix.zeros(n, 0)
        if basis.ncols != n:
            raise ValidationError("custom lattice generators do not span a full-rank lattice")
    try:
        roots = solve_integer(basis, P)
    except NoIntegerSolution:
        raise LatticeDoesNotContainRoots("the lattice does not contain every simple root") from None
    # Coroot i, as a functional, is the i-th fundamental coordinate; in the
    # new basis it is row i of the basis matrix.
    coroots = [basis.rows[i] for i in range(r)]
    return RootDatum(n, tuple(roots.columns()), tuple(tuple(c) for c in coroots), ct)


# ---------------------------------------------------------------------------
# Roots, coroots, Weyl group


def _closure(C: IntMatrix) -> list[tuple[int, ...]]:
    """Positive roots as coefficient vectors, by reflection closure."""
    r = C.nrows
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for c in frontier:
            for i in range(r):
                k = sum(C[i, j] * c[j] for j in range(r))
                if k == 0:
                    continue
                d = list(c)
                d[i] -= k
                d = tuple(d)
                if all(v >= 0 for v in d) and d not in seen:
                    seen.add(d)
                    nxt.append(d)
        if len(seen) > _ROOT_CAP:
            raise ValidationError("Cartan matrix is not of finite type")
        frontier = nxt
    return sorted(seen, key=lambda c: (sum(c), c))


@lru_cache(maxsize=256)
def positive_root_coeffs(rd: RootDatum) -> tuple[tuple[int, ...], ...]:
    """Positive roots in the simple-root basis, sorted by height."""
    return tuple(_closure(rd.cartan_matrix))


@lru_cache(maxsize=256)
def positive_roots(rd: RootDatum) -> tuple[Weight, ...]:
    """All positive roots in ``X`` coordinates, sorted by height."""
    S = rd.root_matrix
    return tuple(S @ c for c in positive_root_coeffs(rd))


@lru_cache(maxsize=256)
def positive_coroots(rd: RootDatum) -> tuple[Weight, ...]:
    """Positive coroots as covectors on ``X``; same count as positive roots."""
    n = rd.lattice_rank
    K = IntMatrix.from_columns(rd.simple_coroots, n)
    return tuple(K @ c for c in _closure(rd.cartan_matrix.T))


def two_rho(rd: RootDatum) -> Weight:
    """Sum of the positive roots."""
    total = [0] * rd.lattice_rank
    for a in positive_roots(rd):
        for i, v in enumerate(a):
            total[i] += v
    return tuple(total)


def two_rho_check(rd: RootDatum) -> Weight:
    """Sum of the positive coroots, as a covector."""
    total = [0] * rd.lattice_rank
    for a in positive_coroots(rd):
        for i, v in enumerate(a):
            total[i] += v
    return tuple(total)


class WeylElement(NamedTuple):
    matrix: IntMatrix
    length: int

    @property
    def sign(self) -> int:
        return -1 if self.length % 2 else 1

    def act(self, x: Sequence[int]) -> Weight:
        return self.matrix @ tuple(x)


def simple_reflection_matrix(rd: RootDatum, i: int) -> IntMatrix:
    a, c = rd.simple_roots[i], rd.simple_coroots[i]
    n = rd.lattice_rank
    return IntMatrix.from_rows([[int(p == q) - a[p] * c[q] for q in range(n)] for p in range(n)], n)


def weyl_group_elements(rd: RootDatum, cap: int = WEYL_GROUP_CAP) -> list[WeylElement]:
    """Every Weyl group element once, as a matrix on ``Z^n`` with its length.

    Elements are found by breadth-first search on the orbit of the regular
    vector ``2 rho`` plus a generic central vector, so BFS depth equals word
    length.  Raises :class:`GroupTooLarge` if more than ``cap`` elements
    would be produced.
    """
    if rd.cartan_type is not None and rd.cartan_type.weyl_order() > cap:
        raise GroupTooLarge(f"Weyl group of {rd.cartan_type} has {rd.cartan_type.weyl_order()} elements (cap {cap})")
    n = rd.lattice_rank
    gens = [simple_reflection_matrix(rd, i) for i in range(rd.rank)]
    ident = IntMatrix.identity(n)
    v = two_rho(rd)
    seen = {v: WeylElement(ident, 0)}
    frontier = [(v, ident)]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for vec, M in frontier:
            for i, g in enumerate(gens):
                w = rd.reflect(i, vec)
                if w in seen:
                    continue
                if len(seen) >= cap:
                    raise GroupTooLarge(f"Weyl group exceeds cap {cap}")
                gM = g @ M
                seen[w] = WeylElement(gM, depth)
                nxt.append((w, gM))
        frontier = nxt
    return list(seen.values())


def mu_m(rd: RootDatum, m: int) -> Weight:
    """The weight ``4 m rho = 2 m (2 rho)``."""
    if m < 0:
        raise ValidationError("m must be nonnegative")
    return tuple(2 * m * v for v in two_rho(rd))


def weyl_dim(rd: RootDatum, mu: Sequence[int]) -> int:
    """Dimension of the irreducible representation of highest weight ``mu``.

    Product over positive coroots of ``<2 mu + 2 rho, a^vee> / <2 rho, a^vee>``.
    """
    if not rd.is_dominant(mu):
        raise NonDominantWeight(f"{tuple(mu)} is not dominant")
    tr = two_rho(rd)
    num = [2 * a + b for a, b in zip(mu, tr)]
    q = Fraction(1)
    for c in positive_coroots(rd):
        q *= Fraction(pair(num, c), pair(tr, c))
    if q.denominator != 1:
        raise ArithmeticError("Weyl dimension formula gave a non-integer")
    return q.numerator


def symmetrizer(rd: RootDatum) -> tuple[int, ...]:
    """Minimal positive integers ``d`` with ``d_i C[i][j] == d_j C[j][i]``.

    ``d_i`` is half the squared length of ``alpha_i`` under the invariant form
    normalised so that the shortest root in each component has ``d = 1``.
    """
    C = rd.cartan_matrix
    r = rd.rank
    d: list[Fraction | None] = [None] * r
    for start in range(r):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        comp = [start]
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(r):
                if j != i and C[i, j] != 0 and d[j] is None:
                    d[j] = d[i] * C[i, j] / C[j, i]
                    comp.append(j)
                    stack.append(j)
        scale = math.lcm(*(d[i].denominator for i in comp))
        g = math.gcd(*(int(d[i] * scale) for i in comp))
        for i in comp:
            d[i] = d[i] * scale / g
    out = tuple(int(x) for x in d)
    for i in range(r):
        for j in range(r):
            if out[i] * C[i, j] != out[j] * C[j, i]:
                raise ValidationError("Cartan matrix is not symmetrizable")
    return out
