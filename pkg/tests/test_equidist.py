import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyl_equidist.abelian import character_group
from weyl_equidist.equidist import (
    build_stability_operator,
    char_sum,
    char_sum_product,
    run_equidist,
    s_values,
    stable_average_simulation,
    transfer_parity,
    workers_from_env,
)
from weyl_equidist.errors import NotElliptic, ValidationError
from weyl_equidist.galois import GaloisAction, compute_H
from weyl_equidist.rootdatum import build_root_datum, mu_m, positive_roots
from weyl_equidist.scenario import builtin_scenarios, load_scenario


def binning_oracle(roots, m, label, n_classes):
    """Enumerate every choice of string position per root and bin by ``label``."""
    counts = [0] * n_classes
    rank = len(roots[0])
    for js in itertools.product(range(-2 * m, 2 * m + 1), repeat=len(roots)):
        x = tuple(sum(j * a[i] for j, a in zip(js, roots)) for i in range(rank))
        counts[label(x)] += 1
    total = sum(counts)
    return sorted(Fraction(c, total) for c in counts)


@pytest.mark.parametrize("m", range(0, 8))
def test_a1_closed_form(a1z2, m):
    rd, act = a1z2
    s = s_values(rd, act, m)
    assert s == {(0,): Fraction(2 * m + 1, 4 * m + 1), (1,): Fraction(2 * m, 4 * m + 1)}


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_a2_matches_binning_oracle(a2z3, m):
    rd, act = a2z3
    # x1 + x2 mod 3 is the unique (up to units) functional killing the image of g - 1
    expected = binning_oracle(positive_roots(rd), m, lambda x: (x[0] + x[1]) % 3, 3)
    assert sorted(s_values(rd, act, m).values()) == expected


def test_a2_m1_denominators(a2z3):
    rd, act = a2z3
    s = s_values(rd, act, 1)
    assert sorted(s.values()) == [Fraction(41, 125), Fraction(42, 125), Fraction(42, 125)]


def test_b2_matches_binning_oracle():
    rd = build_root_datum("B2")
    act = GaloisAction.from_lists(rd, [[[-1, 0], [0, -1]]])
    # -1 acts, X_Gamma = X/2X and H is all of it
    s = s_values(rd, act, 1)
    hg = compute_H(act)
    classes = {h: hg.project(h) for h in [(0, 0), (1, 0), (0, 1), (1, 1)]}
    expected = binning_oracle(positive_roots(rd), 1, lambda x: 2 * (x[0] % 2) + (x[1] % 2), 4)
    assert sorted(s.values()) == expected
    assert len(set(classes.values())) == 4


def test_m0_concentrated(a2z3):
    rd, act = a2z3
    s = s_values(rd, act, 0)
    assert s[(0,)] == 1 and sum(s.values()) == 1


def test_not_elliptic():
    rd = build_root_datum("A1")
    act = GaloisAction.from_lists(rd, [[[1]]])
    with pytest.raises(NotElliptic):
        s_values(rd, act, 1)
    with pytest.raises(NotElliptic):
        run_equidist(rd, act, range(1, 3))
    with pytest.raises(NotElliptic):
        build_stability_operator(rd, act, 1)


def test_char_sum_values(a1z2):
    rd, act = a1z2
    triv, sign = character_group(compute_H(act).H)
    assert char_sum(rd, act, 1, triv) == 5
    for m in range(0, 6):
        assert char_sum(rd, act, m, sign) == 1


@pytest.mark.parametrize("name", ["a1_root_z2", "a2_root_z3", "b2_root_inv", "g2_root_inv", "a1xa1_root_inv"])
def test_char_sum_two_routes(name):
    s = load_scenario(f"builtin:{name}")
    rd, act = s.datum(), s.action()
    for chi in character_group(compute_H(act).H):
        for m in range(0, 3):
            assert abs(char_sum(rd, act, m, chi) - char_sum_product(rd, act, m, chi)) < 1e-6


def test_run_equidist_report(a1z2):
    rd, act = a1z2
    r = run_equidist(rd, act, range(1, 26))
    devs = [rec.dev_from_uniform for rec in r.records]
    assert devs == [Fraction(1, 2 * (4 * m + 1)) for m in range(1, 26)]
    assert all(a > b for a, b in zip(devs, devs[1:]))
    assert [rec.max_pairwise_dev for rec in r.records] == [Fraction(1, 4 * m + 1) for m in range(1, 26)]
    assert r.by_m(3).dim == 13
    with pytest.raises(KeyError):
        r.by_m(99)
    with pytest.raises(ValidationError):
        run_equidist(rd, act, [])


def test_torus_scenario():
    s = load_scenario("builtin:torus_t2")
    r = run_equidist(s.datum(), s.action(), s.m_range)
    assert r.order == 1
    for rec in r.records:
        assert rec.s == {(): 1} and rec.max_pairwise_dev == 0 and rec.dim == 1


def test_parallel_matches_serial(a2z3):
    rd, act = a2z3
    a = run_equidist(rd, act, range(1, 6), workers=1)
    b = run_equidist(rd, act, range(1, 6), workers=2)
    assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()


def test_csv_schema(a1z2):
    rd, act = a1z2
    main, summary = run_equidist(rd, act, range(1, 4)).to_csv()
    lines = main.splitlines()
    assert lines[0] == "m,h_index,S_num,S_den,dev_from_uniform_float"
    assert len(lines) == 1 + 6
    assert lines[1].startswith("1,0,3,5,")
    assert summary.splitlines()[0] == "m,dim,max_pairwise_dev_float,chi_1"


def test_operator_a1(a1z2):
    rd, act = a1z2
    op = build_stability_operator(rd, act, 1)
    F = Fraction
    assert op.matrix == ((F(3, 5), F(2, 5)), (F(2, 5), F(3, 5)))
    eig = op.eigenvalues()
    assert eig["chi_0"] == 1 and abs(eig["chi_1"] - 0.2) < 1e-15
    assert op.is_symmetric()


def test_operator_m0_is_identity(a2z3):
    op = build_stability_operator(*a2z3, 0)
    assert op.matrix == tuple(tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3))


@pytest.mark.parametrize("name", ["a1_root_z2", "a2_root_z3", "b2_root_inv", "a1xa1_root_inv"])
def test_operator_structure(name):
    s = load_scenario(f"builtin:{name}")
    rd, act = s.datum(), s.action()
    for m in range(1, 4):
        op = build_stability_operator(rd, act, m)
        H = op.group
        assert op.row_sums() == [1] * len(op.elements)
        idx = {h: i for i, h in enumerate(op.elements)}
        for x, y, t in itertools.product(op.elements, repeat=3):
            assert op.matrix[idx[H.add(x, t)]][idx[H.add(y, t)]] == op.matrix[idx[x]][idx[y]]
        numeric = sorted(np.linalg.eigvals(op.to_numpy()), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        exact = sorted(op.eigenvalues().values(), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        assert np.allclose(numeric, exact, atol=1e-9)


def test_stable_average(a1z2):
    rd, act = a1z2
    ops = [(m, build_stability_operator(rd, act, m)) for m in range(1, 8)]
    rec = stable_average_simulation(ops, [1, 0])
    assert rec.images[0] == [Fraction(3, 5), Fraction(2, 5)]
    assert rec.deviations == [Fraction(1, 2 * (4 * m + 1)) for m in range(1, 8)]
    assert rec.decreasing_overall() and rec.within_bounds()
    const = stable_average_simulation(ops, [Fraction(7, 3)] * 2)
    assert all(img == [Fraction(7, 3)] * 2 for img in const.images)
    with pytest.raises(ValidationError):
        ops[0][1].apply([1, 2, 3])


def test_parity_examples():
    a1 = build_root_datum("A1")
    assert transfer_parity(a1, mu_m(a1, 1)).d == 4
    assert transfer_parity(a1, (0,)).sign == 1
    w = transfer_parity(build_root_datum("A1", "weight"), (1,))
    assert (w.d, w.sign) == (1, -1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A1", "A2", "B2", "G2", "A3", "C3"]), st.sampled_from(["root", "weight"]), st.integers(0, 10**9))
def test_parity_invariant_under_root_shifts(name, lattice, seed):
    rd = build_root_datum(name, lattice)
    rng = random.Random(seed)
    mu = tuple(rng.randint(-5, 5) for _ in range(rd.lattice_rank))
    shift = [rng.randint(-4, 4) for _ in range(rd.rank)]
    nu = tuple(x + sum(c * a[i] for c, a in zip(shift, rd.simple_roots)) for i, x in enumerate(mu))
    assert transfer_parity(rd, mu).sign == transfer_parity(rd, nu).sign


def test_workers_from_env(monkeypatch):
    monkeypatch.setenv("WEYL_EQUIDIST_THREADS", "3")
    assert workers_from_env() == 3
    monkeypatch.setenv("WEYL_EQUIDIST_THREADS", "0")
    assert workers_from_env() >= 1
    monkeypatch.setenv("WEYL_EQUIDIST_THREADS", "x")
    with pytest.raises(ValidationError):
        workers_from_env()


def test_every_builtin_sums_to_one():
    for s in builtin_scenarios():
        r = run_equidist(s.datum(), s.action(), range(s.m_min, min(s.m_max, 4) + 1))
        assert all(sum(rec.s.values()) == 1 for rec in r.records)
