"""Invariant suites run by ``weyl-equidist verify``.

Each check yields a :class:`Check`.  A check that raises an unexpected
exception is recorded as a failure rather than aborting the run, except for
:class:`~weyl_equidist.errors.NotElliptic` and validation errors, which the
CLI maps to their own exit codes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .charring import char_mu_m, dualize, freudenthal
from .equidist import build_stability_operator, run_equidist, stable_average_simulation, transfer_parity
from .errors import NotElliptic, ValidationError, WeylEquidistError
from .galois import compute_H, is_elliptic
from .rootdatum import mu_m, positive_roots, weyl_dim, weyl_group_elements
from .scenario import Scenario

# keep the suite quick on the larger shipped types
FREUDENTHAL_MAX_M = 1
WEYL_INVARIANCE_MAX_ORDER = 2_000
SPECTRAL_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    scenario: str
    name: str
    ok: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        tail = f": {self.detail}" if self.detail and not self.ok else ""
        return f"{tag} {self.scenario} {self.name}{tail}"


def _run(scn: str, name: str, fn: Callable[[], str | None]) -> Check:
    try:
        detail = fn()
    except (NotElliptic, ValidationError):
        raise
    except (AssertionError, WeylEquidistError, ArithmeticError) as exc:
        return Check(scn, name, False, f"{type(exc).__name__}: {exc}")
    return Check(scn, name, True, detail or "")


def datum_checks(s: Scenario) -> Iterator[Check]:
    rd = s.datum()
    k = len(positive_roots(rd))
    small_ms = range(0, min(s.m_max, 3) + 1)

    def dimension_law():
        for m in small_ms:
            d = char_mu_m(rd, m).dimension()
            assert d == (4 * m + 1) ** k, f"m={m}: dimension {d} != {(4 * m + 1) ** k}"
            assert weyl_dim(rd, mu_m(rd, m)) == d, f"m={m}: Weyl dimension formula disagrees"

    def oracle():
        for m in range(0, min(s.m_max, FREUDENTHAL_MAX_M) + 1):
            assert char_mu_m(rd, m) == freudenthal(rd, mu_m(rd, m)), f"m={m}: product and Freudenthal differ"

    def self_dual():
        for m in small_ms:
            ch = char_mu_m(rd, m)
            assert dualize(ch) == ch, f"m={m}: character is not self-dual"

    def weyl_invariant():
        if rd.cartan_type is not None and rd.cartan_type.weyl_order() > WEYL_INVARIANCE_MAX_ORDER:
            return "skipped: Weyl group too large"
        W = weyl_group_elements(rd)
        for m in range(0, min(s.m_max, 2) + 1):
            ch = char_mu_m(rd, m)
            for w in W:
                assert ch.transform(w.matrix) == ch, f"m={m}: not invariant under a Weyl element"
        return None

    def parity():
        for m in small_ms:
            r = transfer_parity(rd, mu_m(rd, m))
            assert r.sign == 1, f"m={m}: d={r.d} is odd"

    yield _run(s.name, "dimension_law", dimension_law)
    yield _run(s.name, "product_vs_freudenthal", oracle)
    yield _run(s.name, "self_dual", self_dual)
    yield _run(s.name, "weyl_invariant", weyl_invariant)
    yield _run(s.name, "parity_mu_m", parity)


def action_checks(s: Scenario) -> Iterator[Check]:
    act = s.action()
    if not is_elliptic(act):
        raise NotElliptic(f"scenario {s.name}: action is not elliptic")

    def structure():
        # compute_H itself asserts finiteness and surjectivity from the root lattice
        hg = compute_H(act)
        return f"H = {hg.H}"

    yield _run(s.name, "H_structure", structure)


def equidist_checks(s: Scenario, workers: int = 1) -> Iterator[Check]:
    rd, act = s.datum(), s.action()
    report = run_equidist(rd, act, s.m_range, workers=workers)
    first, last = report.records[0], report.records[-1]
    n = report.order

    def exact_sum():
        for rec in report.records:
            assert sum(rec.s.values()) == 1, f"m={rec.m}: S values sum to {sum(rec.s.values())}"

    def limit_value():
        if n == 1 or len(report.records) < 2:
            return "vacuous"
        u = Fraction(1, n)
        for h in report.elements:
            a, b = abs(last.s[h] - u), abs(first.s[h] - u)
            assert a < b or a == b == 0, f"class {h}: deviation {a} at m={last.m} not below {b} at m={first.m}"
        return None

    def growth():
        if n == 1 or len(report.records) < 2:
            return "vacuous"
        for label in first.char_ratios:
            lo, hi = first.char_ratios[label], last.char_ratios[label]
            assert hi < 1, f"{label}: ratio {hi} not below 1"
            assert hi < lo, f"{label}: ratio {hi} at m={last.m} not below {lo} at m={first.m}"
            assert hi < 1 / math.sqrt(last.m), f"{label}: ratio {hi} not below m^(-1/2)"
        return None

    def spectrum():
        for rec in report.records:
            op = build_stability_operator(rd, act, rec.m)
            assert all(v == 1 for v in op.row_sums()), f"m={rec.m}: not row-stochastic"
            numeric = np.linalg.eigvals(op.to_numpy())
            expected = list(op.eigenvalues().values())
            for z in expected:
                j = int(np.argmin(np.abs(numeric - z)))
                assert abs(numeric[j] - z) < SPECTRAL_TOL, f"m={rec.m}: eigenvalue {z} not found"
                numeric = np.delete(numeric, j)

    def stable_average():
        if n == 1:
            return "vacuous"
        ops = [(m, build_stability_operator(rd, act, m)) for m in (first.m, last.m)]
        theta = [1] + [0] * (n - 1)
        rec = stable_average_simulation(ops, theta)
        assert rec.within_bounds(), f"deviations {rec.deviations} exceed bounds {rec.bounds}"
        if len(report.records) > 1:
            assert rec.decreasing_overall(), f"deviations {rec.deviations} do not decrease"
        return None

    yield _run(s.name, "sum_S_is_one", exact_sum)
    yield _run(s.name, "limit_value", limit_value)
    yield _run(s.name, "growth_separation", growth)
    yield _run(s.name, "circulant_spectrum", spectrum)
    yield _run(s.name, "stable_average", stable_average)


def verify_scenario(s: Scenario, workers: int = 1) -> list[Check]:
    out = list(datum_checks(s))
    out += list(action_checks(s))
    out += list(equidist_checks(s, workers))
    return out
