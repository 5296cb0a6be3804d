"""Sparse Laurent polynomials over ``X`` and highest-weight characters.

A :class:`CharElement` is a finitely supported function ``X -> Z``, written
``sum_lambda c_lambda e^lambda``.  Two independent routes compute the
character of the irreducible representation of highest weight ``4 m rho``:

* :func:`char_mu_m` multiplies one geometric factor
  ``e^{2m a} + e^{(2m-1) a} + ... + e^{-2m a}`` per positive root ``a``;
* :func:`freudenthal` runs Freudenthal's recursion for an arbitrary dominant
  highest weight.

They share nothing beyond the list of positive roots.
"""

from __future__ import annotations

import json
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import NonDominantWeight, RankMismatch, SupportOutsideRootLattice, ZeroRoot
from .galois import HgData, pi1
from .rootdatum import RootDatum, Weight, positive_root_coeffs, positive_roots, symmetrizer


class CharElement:
    """Element of the group ring ``Z[X]`` with exact integer coefficients.

    Treated as immutable: every operation returns a new element.
    """

    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, rank: int, terms: Mapping[Sequence[int], int] | Iterable[tuple[Sequence[int], int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Weight, int] = {}
        for exp, c in items:
            exp = tuple(int(v) for v in exp)
            if len(exp) != rank:
                raise RankMismatch(f"exponent {exp} does not have length {rank}")
            c = int(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if clean[exp] == 0:
                    del clean[exp]
        self.rank = rank
        self._terms = clean
        self._hash = None

    @classmethod
    def _trusted(cls, rank: int, terms: dict[Weight, int]) -> CharElement:
        obj = cls.__new__(cls)
        obj.rank = rank
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def one(cls, rank: int) -> CharElement:
        return cls._trusted(rank, {(0,) * rank: 1})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff: int = 1) -> CharElement:
        return cls(len(exp), {tuple(exp): coeff})

    @property
    def terms(self) -> Mapping[Weight, int]:
        return self._terms

    def __getitem__(self, exp: Sequence[int]) -> int:
        return self._terms.get(tuple(exp), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Weight]:
        return iter(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> set[Weight]:
        return set(self._terms)

    def dimension(self) -> int:
        """Sum of coefficients."""
        return sum(self._terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharElement):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self._terms.items())))
        return self._hash

    def __mul__(self, other: CharElement) -> CharElement:
        return char_mul(self, other)

    def __add__(self, other: CharElement) -> CharElement:
        if self.rank != other.rank:
            raise RankMismatch("rank mismatch")
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return CharElement._trusted(self.rank, out)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*e^{e}" for e, c in sorted(self._terms.items()))
        return f"CharElement({body or '0'})"

    def transform(self, matrix) -> CharElement:
        """Relabel exponents by a linear map (an :class:`IntMatrix`)."""
        out: dict[Weight, int] = {}
        for e, c in self._terms.items():
            out[matrix @ e] = out.get(matrix @ e, 0) + c
        return CharElement(self.rank, out)

    def sorted_terms(self) -> list[tuple[Weight, int]]:
        return sorted(self._terms.items())

    def to_json(self) -> str:
        """Canonical dump: terms sorted by exponent, coefficients as decimal strings."""
        payload = {
            "rank": self.rank,
            "terms": [{"exp": list(e), "coeff": str(c)} for e, c in self.sorted_terms()],
        }
        return json.dumps(payload, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> CharElement:
        data = json.loads(text)
        return cls(data["rank"], [(t["exp"], int(t["coeff"])) for t in data["terms"]])


def char_mul(a: CharElement, b: CharElement) -> CharElement:
    """Exact convolution product."""
    if a.rank != b.rank:
        raise RankMismatch(f"cannot multiply elements of rank {a.rank} and {b.rank}")
    if len(a) < len(b):
        a, b = b, a
    out: defaultdict[Weight, int] = defaultdict(int)
    bt = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bt:
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return CharElement._trusted(a.rank, {e: c for e, c in out.items() if c})


def geometric_factor(alpha: Sequence[int], m: int) -> CharElement:
    """``sum_{j=-2m}^{2m} e^{j alpha}``."""
    alpha = tuple(alpha)
    if not any(alpha):
        raise ZeroRoot("geometric factor of the zero vector")
    if m < 0:
        raise ValueError("m must be nonnegative")
    return CharElement._trusted(len(alpha), {tuple(j * a for a in alpha): 1 for j in range(-2 * m, 2 * m + 1)})


def mul_geometric(a: CharElement, alpha: Sequence[int], m: int) -> CharElement:
    """``a * geometric_factor(alpha, m)`` by sliding-window sums along ``alpha``-strings.

    Cost is linear in the size of the result instead of ``(4m + 1)`` times the
    size of ``a``.
    """
    alpha = tuple(alpha)
    if not any(alpha):
        raise ZeroRoot("geometric factor of the zero vector")
    if a.rank != len(alpha):
        raise RankMismatch("rank mismatch")
    w = 2 * m
    piv = next(i for i, v in enumerate(alpha) if v)
    ap = alpha[piv]

    # Each exponent is base + t * alpha with base[piv] a fixed residue mod ap.
    lines: dict[Weight, dict[int, int]] = defaultdict(dict)
    for e, c in a.items():
        t = e[piv] // ap
        base = tuple(x - t * y for x, y in zip(e, alpha))
        lines[base][t] = c

    out: dict[Weight, int] = {}
    for base, line in lines.items():
        lo, hi = min(line) - w, max(line) + w
        running = 0
        # window covers source positions [t - w, t + w]
        for t in range(lo - w, lo + w):
            running += line.get(t, 0)
        for t in range(lo, hi + 1):
            running += line.get(t + w, 0)
            if running:
                out[tuple(x + t * y for x, y in zip(base, alpha))] = running
            running -= line.get(t - w, 0)
    return CharElement._trusted(a.rank, out)


@lru_cache(maxsize=64)
def char_mu_m(rd: RootDatum, m: int) -> CharElement:
    """Character of the irreducible representation of highest weight ``4 m rho``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    result = CharElement.one(rd.lattice_rank)
    if m == 0:
        return result
    # Simple roots first keeps intermediate supports small: their factors
    # span independent directions and fill the box before longer roots
    # smear it.
    for alpha in positive_roots(rd):
        result = mul_geometric(result, alpha, m)
    return result


def dualize(a: CharElement) -> CharElement:
    return CharElement._trusted(a.rank, {tuple(-x for x in e): c for e, c in a.items()})


def freudenthal(rd: RootDatum, mu: Sequence[int]) -> CharElement:
    """Weight multiplicities of the irreducible representation ``V_mu``.

    Weights are tracked as ``mu - sum_j n_j alpha_j`` with ``n >= 0``.  With
    the invariant form ``(alpha_i, alpha_j) = d_i C[i][j]`` (``d`` the minimal
    symmetrizer) every inner product the recursion needs is an integer:

    ``(x, alpha_j) = d_j <x, alpha_j^vee>`` and
    ``|mu + rho|^2 - |mu - b + rho|^2 = 2 (mu + rho, b) - (b, b)``.
    """
    mu = tuple(mu)
    if not rd.is_dominant(mu):
        raise NonDominantWeight(f"{mu} is not dominant")
    r = rd.rank
    if r == 0:
        return CharElement.monomial(mu)
    C = rd.cartan_matrix
    d = symmetrizer(rd)
    B = [[d[i] * C[i, j] for j in range(r)] for i in range(r)]
    mu_f = rd.fundamental_coords(mu)
    mu_rho_simple = [d[j] * (mu_f[j] + 1) for j in range(r)]  # (mu + rho, alpha_j)
    mu_simple = [d[j] * mu_f[j] for j in range(r)]  # (mu, alpha_j)

    roots = []
    for c in positive_root_coeffs(rd):
        # (beta, alpha) = n^T B c ; store B c for fast dot products
        Bc = [sum(B[i][j] * c[j] for j in range(r)) for i in range(r)]
        mu_a = sum(c[j] * mu_simple[j] for j in range(r))
        aa = sum(c[i] * Bc[i] for i in range(r))
        roots.append((c, Bc, mu_a, aa))

    mult: dict[tuple[int, ...], int] = {(0,) * r: 1}
    frontier = [(0,) * r]
    while frontier:
        nxt = set()
        for n in frontier:
            for j in range(r):
                cand = n[:j] + (n[j] + 1,) + n[j + 1 :]
                if cand not in mult:
                    nxt.add(cand)
        level = []
        for n in sorted(nxt):
            # |mu+rho|^2 - |lambda+rho|^2 with lambda = mu - beta
            Bn = [sum(B[i][j] * n[j] for j in range(r)) for i in range(r)]
            bb = sum(n[i] * Bn[i] for i in range(r))
            denom = 2 * sum(n[j] * mu_rho_simple[j] for j in range(r)) - bb
            if denom <= 0:
                # Weights other than mu satisfy |lambda+rho| < |mu+rho|.
                continue
            num = 0
            for c, Bc, mu_a, aa in roots:
                beta_a = sum(n[i] * Bc[i] for i in range(r))
                k = 1
                while True:
                    shifted = tuple(x - k * y for x, y in zip(n, c))
                    if min(shifted) < 0:
                        break
                    mlt = mult.get(shifted, 0)
                    if mlt:
                        num += (mu_a - beta_a + k * aa) * mlt
                    k += 1
            q = Fraction(2 * num, denom)
            if q.denominator != 1:
                raise ArithmeticError(f"Freudenthal recursion produced non-integer multiplicity {q}")
            if q:
                mult[n] = q.numerator
                level.append(n)
        frontier = level

    S = rd.root_matrix
    out = {}
    for n, c in mult.items():
        out[tuple(a - b for a, b in zip(mu, S @ n))] = c
    return CharElement._trusted(rd.lattice_rank, out)


def coset_sums(a: CharElement, hg: HgData) -> dict[tuple[int, ...], int]:
    """Total multiplicity of the weights in each class of ``H``.

    Every element of ``H`` appears as a key, including those with sum 0.
    """
    rd = hg.datum
    if a.rank != rd.lattice_rank:
        raise RankMismatch("character rank does not match the root datum")
    p1 = pi1(rd)
    zero = p1.zero()
    proj = hg.projector()
    sums = {h: 0 for h in hg.elements()}
    for e, c in a.items():
        if p1.project(e) != zero:
            raise SupportOutsideRootLattice(f"exponent {e} is not in the root lattice")
        sums[proj(e)] += c
    return sums

