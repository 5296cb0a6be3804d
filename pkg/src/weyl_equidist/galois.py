"""Finite Galois actions on ``X`` and the groups built from them.

The action is supplied as generator matrices in ``GL_n(Z)`` acting on column
vectors.  From it we compute

* the coinvariants ``X_Gamma = X / sum_g (g - 1) X`` (the Kottwitz set of the
  torus),
* ``pi_1 = X / Lambda`` where ``Lambda`` is the span of the simple roots,
* ``pi_1_Gamma = X / (Lambda + sum_g (g - 1) X)``,
* ``H = ker(X_Gamma -> pi_1_Gamma)`` together with the map from the root
  lattice onto ``H``.

Coinvariants under the generated group only need the generators, because
``(gh - 1) = g(h - 1) + (g - 1)`` and ``g y = y + (g - 1) y``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .abelian import (
    AbHom,
    FinGenAbGroup,
    IntMatrix,
    NoIntegerSolution,
    cokernel,
    hom_kernel,
    induced_hom,
    solve_integer,
    subgroup_generated,
)
from .errors import (
    ActionDoesNotPreserveCorootLattice,
    GroupTooLarge,
    InvariantViolation,
    NotElliptic,
    NotUnimodular,
    SupportOutsideRootLattice,
    ValidationError,
)
from .rootdatum import RootDatum

GALOIS_CLOSURE_CAP = 10_000


@dataclass(frozen=True)
class GaloisAction:
    datum: RootDatum
    generators: tuple[IntMatrix, ...]
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = self.datum.lattice_rank
        S = self.datum.root_matrix
        for g in self.generators:
            if g.shape != (n, n):
                raise ValidationError(f"generator has shape {g.shape}, expected {(n, n)}")
            if not g.is_unimodular():
                raise NotUnimodular(f"generator {g.tolist()} is not invertible over Z")
            if self.datum.rank:
                try:
                    solve_integer(S, g @ S)
                except NoIntegerSolution:
                    raise ActionDoesNotPreserveCorootLattice(
                        f"generator {g.tolist()} does not preserve the span of the simple roots"
                    ) from None

    def __reduce__(self):
        return (GaloisAction, (self.datum, self.generators))

    @classmethod
    def from_lists(cls, datum: RootDatum, generators: Sequence[Sequence[Sequence[int]]]) -> GaloisAction:
        n = datum.lattice_rank
        for g in generators:
            if len(g) != n or any(len(row) != n for row in g):
                raise ValidationError(f"generator {g} is not {n}x{n}")
        return cls(datum, tuple(IntMatrix.from_rows(g, n) for g in generators))

    def elements(self, cap: int = GALOIS_CLOSURE_CAP) -> tuple[IntMatrix, ...]:
        """All elements of the generated group, computed once."""
        cached = self.__dict__.get("_elements")
        if cached is not None:
            return cached
        with self._lock:
            cached = self.__dict__.get("_elements")
            if cached is None:
                cached = _close(self.datum.lattice_rank, self.generators, cap)
                object.__setattr__(self, "_elements", cached)
        return cached

    def order(self) -> int:
        return len(self.elements())

    def restricted_to_root_lattice(self) -> list[IntMatrix]:
        """Generators written in the simple-root basis of the root lattice."""
        S = self.datum.root_matrix
        return [solve_integer(S, g @ S) for g in self.generators]


def _close(n: int, gens: Sequence[IntMatrix], cap: int) -> tuple[IntMatrix, ...]:
    ident = IntMatrix.identity(n)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for M in frontier:
            for g in gens:
                P = g @ M
                if P not in seen:
                    if len(seen) >= cap:
                        raise GroupTooLarge(f"Galois group closure exceeds cap {cap}")
                    seen.add(P)
                    order.append(P)
                    nxt.append(P)
        frontier = nxt
    return tuple(order)


def _minus_identity_block(n: int, gens: Sequence[IntMatrix]) -> IntMatrix:
    ident = IntMatrix.identity(n)
    M = IntMatrix.zeros(n, 0)
    return M.hstack(*(g - ident for g in gens)) if gens else M


def coinvariants(act: GaloisAction) -> FinGenAbGroup:
    """``X_Gamma`` as a presented group; ``.project`` is the quotient map."""
    act.elements()  # finiteness check
    return cokernel(_minus_identity_block(act.datum.lattice_rank, act.generators))


def root_lattice_coinvariants(act: GaloisAction) -> FinGenAbGroup:
    """Coinvariants of the root lattice, in simple-root coordinates."""
    return cokernel(_minus_identity_block(act.datum.rank, act.restricted_to_root_lattice()))


def is_elliptic(act: GaloisAction) -> bool:
    return root_lattice_coinvariants(act).free_rank == 0


def pi1(rd: RootDatum) -> FinGenAbGroup:
    """``X / Lambda``; ``.project`` is the quotient map."""
    return cokernel(rd.root_matrix)


def pi1_coinvariants(act: GaloisAction) -> FinGenAbGroup:
    n = act.datum.lattice_rank
    return cokernel(act.datum.root_matrix.hstack(_minus_identity_block(n, act.generators)))


@dataclass(frozen=True)
class HgData:
    """``H = ker(X_Gamma -> pi_1_Gamma)`` and everything needed to label weights by it."""

    H: FinGenAbGroup
    x_gamma: FinGenAbGroup
    pi1_gamma: FinGenAbGroup
    to_pi1_gamma: AbHom
    inclusion: AbHom
    lattice_image: FinGenAbGroup
    _table: dict = field(repr=False, compare=False)
    datum: RootDatum = field(repr=False, compare=False)

    def elements(self) -> list[tuple[int, ...]]:
        return self.H.elements()

    def index(self, h: Sequence[int]) -> int:
        return self.elements().index(tuple(h))

    def project(self, x: Sequence[int]) -> tuple[int, ...]:
        """Class in ``H`` of a lattice vector whose image lies in ``H``."""
        a = self.x_gamma.project(x)
        try:
            return self._table[a]
        except KeyError:
            raise SupportOutsideRootLattice(f"{tuple(x)} does not map into H") from None

    def projector(self) -> Callable[[Sequence[int]], tuple[int, ...]]:
        """Fast projection for bulk binning (skips the kernel lookup error path)."""
        P = self.x_gamma.presentation.to_group.rows
        mod = self.x_gamma.moduli
        table = self._table

        def proj(x):
            a = tuple(
                (s % d if d else s) for s, d in zip((sum(p * v for p, v in zip(row, x)) for row in P), mod)
            )
            return table[a]

        return proj


def compute_H(act: GaloisAction) -> HgData:
    """Build ``H`` and check the structural facts it must satisfy.

    Raises :class:`NotElliptic` when the root-lattice coinvariants are
    infinite (then ``H`` need not be finite).  After construction it checks
    that the root lattice lands in ``H``, that its image is all of ``H``, and
    that ``H`` is finite; a failure raises :class:`InvariantViolation`.
    """
    if not is_elliptic(act):
        raise NotElliptic("the Galois action has infinite coinvariants on the root lattice")
    return _compute_H(act)


@lru_cache(maxsize=64)
def _compute_H(act: GaloisAction) -> HgData:
    rd = act.datum
    n = rd.lattice_rank
    xg = coinvariants(act)
    p1g = pi1_coinvariants(act)
    f = induced_hom(xg, p1g, IntMatrix.identity(n))
    H, incl = hom_kernel(f)
    if not H.is_finite():
        raise InvariantViolation(f"H = {H} is infinite for an elliptic action")
    table = {incl(h): h for h in H.elements()}
    if len(table) != H.order():
        raise InvariantViolation("kernel inclusion is not injective")

    root_images = [xg.project(a) for a in rd.simple_roots]
    for a in root_images:
        if f(a) != p1g.zero():
            raise InvariantViolation("root lattice does not map to zero in pi_1 coinvariants")
    img, _ = subgroup_generated(xg, root_images)
    if img.order() != H.order():
        raise InvariantViolation(f"root lattice image has order {img.order()}, H has order {H.order()}")
    return HgData(H, xg, p1g, f, incl, img, table, rd)

