"""Coset fractions of weight multiplicities and their convergence.

For each ``m`` the weights of ``V_{4 m rho}`` are binned by their class in
``H``; ``S_{h,m}`` is the fraction of the total dimension landing in class
``h``.  Everything on the main path is an exact :class:`~fractions.Fraction`.
Complex numbers appear only when a character of ``H`` is applied.

The averaging operator ``A_m[x][y] = S_{y - x, m}`` is a circulant on ``H``;
its eigenvalue on the character ``chi`` is ``sum_h chi(h) S_{h,m}``.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .abelian import DualCharacter, FinGenAbGroup, character_group
from .charring import char_mu_m, coset_sums
from .errors import NotElliptic, ValidationError
from .galois import GaloisAction, HgData, compute_H, is_elliptic
from .rootdatum import RootDatum, pair, positive_roots, two_rho_check

Element = tuple[int, ...]


def _hg(act: GaloisAction) -> HgData:
    if not is_elliptic(act):
        raise NotElliptic("equidistribution needs an elliptic action")
    return compute_H(act)


def s_values(rd: RootDatum, act: GaloisAction, m: int) -> dict[Element, Fraction]:
    """Exact ``S_{h,m}`` for every ``h`` in ``H`` (lexicographic key order)."""
    hg = _hg(act)
    ch = char_mu_m(rd, m)
    dim = ch.dimension()
    return {h: Fraction(c, dim) for h, c in coset_sums(ch, hg).items()}


def char_sum(rd: RootDatum, act: GaloisAction, m: int, chi: DualCharacter) -> complex:
    """``chi`` applied to the character of ``V_{4 m rho}``, via the coset sums."""
    hg = _hg(act)
    sums = coset_sums(char_mu_m(rd, m), hg)
    if chi.is_trivial():
        return complex(sum(sums.values()))
    return sum(c * chi(h) for h, c in sums.items())


def char_sum_product(rd: RootDatum, act: GaloisAction, m: int, chi: DualCharacter) -> complex:
    """Same quantity from the product over positive roots.

    ``prod_a chi(a)^{-2m} (1 + chi(a) + ... + chi(a)^{4m})``; it never
    touches the expanded character, so it is an independent check on
    :func:`char_sum`.
    """
    hg = _hg(act)
    out = complex(1)
    for a in positive_roots(rd):
        z = chi(hg.project(a))
        out *= sum(z**j for j in range(-2 * m, 2 * m + 1))
    return out


@dataclass
class MRecord:
    m: int
    dim: int
    s: dict[Element, Fraction]
    max_pairwise_dev: Fraction
    dev_from_uniform: Fraction
    char_ratios: dict[str, float] = field(default_factory=dict)

    def dev_per_class(self) -> dict[Element, Fraction]:
        u = Fraction(1, len(self.s))
        return {h: abs(v - u) for h, v in self.s.items()}


@dataclass
class EquidistReport:
    elements: list[Element]
    characters: list[DualCharacter]
    records: list[MRecord]

    @property
    def order(self) -> int:
        return len(self.elements)

    def by_m(self, m: int) -> MRecord:
        for r in self.records:
            if r.m == m:
                return r
        raise KeyError(m)

    def to_csv(self) -> tuple[str, str]:
        """(per-class CSV, per-m summary CSV)."""
        idx = {h: i for i, h in enumerate(self.elements)}
        a = io.StringIO()
        w = csv.writer(a, lineterminator="\n")
        w.writerow(["m", "h_index", "S_num", "S_den", "dev_from_uniform_float"])
        for rec in self.records:
            devs = rec.dev_per_class()
            for h in self.elements:
                v = rec.s[h]
                w.writerow([rec.m, idx[h], v.numerator, v.denominator, repr(float(devs[h]))])
        b = io.StringIO()
        w = csv.writer(b, lineterminator="\n")
        labels = [c.label() for c in self.characters if not c.is_trivial()]
        w.writerow(["m", "dim", "max_pairwise_dev_float"] + labels)
        for rec in self.records:
            w.writerow([rec.m, rec.dim, repr(float(rec.max_pairwise_dev))] + [repr(rec.char_ratios[l]) for l in labels])
        return a.getvalue(), b.getvalue()

    def to_json(self) -> tuple[str, str]:
        idx = {h: i for i, h in enumerate(self.elements)}
        rows = []
        summary = []
        for rec in self.records:
            devs = rec.dev_per_class()
            for h in self.elements:
                v = rec.s[h]
                rows.append(
                    {
                        "m": rec.m,
                        "h_index": idx[h],
                        "h": list(h),
                        "S_num": str(v.numerator),
                        "S_den": str(v.denominator),
                        "dev_from_uniform_num": str(devs[h].numerator),
                        "dev_from_uniform_den": str(devs[h].denominator),
                        "dev_from_uniform_float": float(devs[h]),
                    }
                )
            summary.append(
                {
                    "m": rec.m,
                    "dim": str(rec.dim),
                    "max_pairwise_dev_num": str(rec.max_pairwise_dev.numerator),
                    "max_pairwise_dev_den": str(rec.max_pairwise_dev.denominator),
                    "max_pairwise_dev_float": float(rec.max_pairwise_dev),
                    "dev_from_uniform_num": str(rec.dev_from_uniform.numerator),
                    "dev_from_uniform_den": str(rec.dev_from_uniform.denominator),
                    "char_ratios": rec.char_ratios,
                }
            )
        dump = lambda obj: json.dumps(obj, indent=1, sort_keys=True) + "\n"  # noqa: E731
        return dump({"H_order": self.order, "rows": rows}), dump({"H_order": self.order, "summary": summary})


def _one_m(rd: RootDatum, act: GaloisAction, m: int) -> MRecord:
    hg = _hg(act)
    ch = char_mu_m(rd, m)
    dim = ch.dimension()
    sums = coset_sums(ch, hg)
    total = sum(sums.values())
    if total != dim:
        raise AssertionError(f"coset sums total {total}, dimension is {dim}")
    s = {h: Fraction(c, dim) for h, c in sums.items()}
    if sum(s.values()) != 1:
        raise AssertionError("S values do not sum to 1")
    u = Fraction(1, len(s))
    vals = list(s.values())
    ratios = {}
    for chi in character_group(hg.H):
        if chi.is_trivial():
            continue
        z = sum(c * chi(h) for h, c in sums.items())
        ratios[chi.label()] = abs(z) / dim
    return MRecord(
        m=m,
        dim=dim,
        s=s,
        max_pairwise_dev=max(vals) - min(vals),
        dev_from_uniform=max(abs(v - u) for v in vals),
        char_ratios=ratios,
    )


def run_equidist(rd: RootDatum, act: GaloisAction, m_range: Sequence[int], workers: int = 1) -> EquidistReport:
    """Compute the report for every ``m`` in ``m_range``.

    ``workers > 1`` spreads the ``m`` values over processes; records are
    assembled in ``m_range`` order either way, so the output is identical.
    """
    ms = list(m_range)
    if not ms:
        raise ValidationError("m_range is empty")
    hg = _hg(act)
    if workers > 1 and len(ms) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_one_m, [rd] * len(ms), [act] * len(ms), ms))
    else:
        records = [_one_m(rd, act, m) for m in ms]
    return EquidistReport(hg.elements(), character_group(hg.H), records)


def workers_from_env(var: str = "WEYL_EQUIDIST_THREADS") -> int:
    """Parallelism cap from the environment; 0 or unset means one per CPU."""
    raw = os.environ.get(var, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"{var} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValidationError(f"{var} must be nonnegative")
    return n or (os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# Averaging operator


@dataclass(frozen=True)
class StabilityOperator:
    """``A[x][y] = S_{y - x}`` on a finite group; ``symbol`` holds the ``S`` values."""

    group: FinGenAbGroup
    elements: tuple[Element, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    symbol: dict = field(compare=False)

    def eigenvalues(self) -> dict[str, complex]:
        """Eigenvalue on each character ``chi``: ``sum_h chi(h) S_h``."""
        return {
            chi.label(): sum(float(v) * chi(h) for h, v in self.symbol.items())
            for chi in character_group(self.group)
        }

    def apply(self, theta: Sequence[Fraction]) -> list[Fraction]:
        if len(theta) != len(self.elements):
            raise ValidationError("theta has the wrong length")
        return [sum((a * Fraction(t) for a, t in zip(row, theta)), Fraction(0)) for row in self.matrix]

    def row_sums(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.matrix]

    def is_symmetric(self) -> bool:
        n = len(self.elements)
        return all(self.matrix[i][j] == self.matrix[j][i] for i in range(n) for j in range(n))

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix])


def build_stability_operator(rd: RootDatum, act: GaloisAction, m: int) -> StabilityOperator:
    hg = _hg(act)
    s = s_values(rd, act, m)
    H = hg.H
    els = tuple(hg.elements())
    mat = tuple(tuple(s[H.sub(y, x)] for y in els) for x in els)
    return StabilityOperator(H, els, mat, s)


@dataclass
class ConvergenceRecord:
    ms: list[int]
    deviations: list[Fraction]
    bounds: list[float]
    images: list[list[Fraction]]

    def decreasing_overall(self) -> bool:
        return self.deviations[-1] < self.deviations[0]

    def within_bounds(self, tol: float = 1e-12) -> bool:
        return all(float(d) <= b + tol for d, b in zip(self.deviations, self.bounds))


def stable_average_simulation(
    operators: Sequence[tuple[int, StabilityOperator]],
    theta: Sequence[Fraction | int],
) -> ConvergenceRecord:
    """Apply each ``A_m`` to ``theta`` and measure the distance to its mean.

    Each record carries the bound ``max|theta| * sum_{chi != 1} |eigenvalue(chi)|``
    computed from the operator's symbol.
    """
    theta = [Fraction(t) for t in theta]
    mean = sum(theta, Fraction(0)) / len(theta)
    tmax = max(abs(t) for t in theta)
    ms, devs, bounds, images = [], [], [], []
    for m, op in operators:
        img = op.apply(theta)
        dev = max(abs(v - mean) for v in img)
        eig = op.eigenvalues()
        bound = sum(abs(z) for label, z in eig.items() if label != _trivial_label(op.group))
        ms.append(m)
        devs.append(dev)
        bounds.append(float(tmax) * bound)
        images.append(img)
    return ConvergenceRecord(ms, devs, bounds, images)


def _trivial_label(G: FinGenAbGroup) -> str:
    return DualCharacter((0,) * len(G.torsion), G.torsion).label()


# ---------------------------------------------------------------------------
# Sign parity


@dataclass(frozen=True)
class ParityResult:
    d: int

    @property
    def sign(self) -> int:
        return -1 if self.d % 2 else 1


def transfer_parity(rd: RootDatum, mu: Sequence[int]) -> ParityResult:
    """``d = <mu, sum of positive coroots>`` and the sign ``(-1)^d``."""
    return ParityResult(pair(mu, two_rho_check(rd)))


__all__ = [
    "ConvergenceRecord",
    "EquidistReport",
    "MRecord",
    "ParityResult",
    "StabilityOperator",
    "build_stability_operator",
    "char_sum",
    "char_sum_product",
    "run_equidist",
    "s_values",
    "stable_average_simulation",
    "transfer_parity",
    "workers_from_env",
]
