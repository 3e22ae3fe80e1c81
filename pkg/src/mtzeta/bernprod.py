"""Expansions of products of Bernoulli polynomials into the Bernoulli basis.

Four independent routes produce the same object, a linear combination of
single Bernoulli polynomials plus a constant:

* :func:`naive_product` -- exact polynomial multiplication followed by
  descending-degree elimination against the Bernoulli basis.  This is the
  oracle the formula implementations are tested against.
* :func:`carlitz_product` -- the classical two-factor closed formula.
* :func:`expand_by_subsets` -- the closed formula summing over proper
  subsets of slots and bounded transfer indices (not weight-homogeneous).
* :func:`expand_by_partitions` -- the weight-homogeneous formula summing
  over pre-fat partitions (polynomial part) and fat partitions (constant
  part) with their dependent index sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Mapping, Sequence

from .exact import bernoulli, multinomial
from .partitions import (
    PartitionKind,
    enumerate_partitions,
    index_assignments,
    inflate,
)

__all__ = [
    "BernCombo",
    "naive_product",
    "carlitz_product",
    "expand_by_subsets",
    "expand_by_partitions",
]


@dataclass(frozen=True)
class BernCombo:
    """Combination sum_m terms[m] * B_m(x) + constant, m >= 1, no zero terms."""

    terms: Mapping[int, Fraction]
    constant: Fraction = Fraction(0)

    @staticmethod
    def build(raw: Mapping[int, Fraction], constant: Fraction) -> "BernCombo":
        cleaned: dict[int, Fraction] = {}
        const = Fraction(constant)
        for m, c in raw.items():
            if not c:
                continue
            if m == 0:
                const += c  # B_0(x) = 1 folds into the constant
            else:
                cleaned[m] = Fraction(c)
        return BernCombo(dict(sorted(cleaned.items())), const)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BernCombo):
            return NotImplemented
        return dict(self.terms) == dict(other.terms) and self.constant == other.constant

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.terms.items())), self.constant))

    def as_poly(self) -> list[Fraction]:
        """Expand back to plain polynomial coefficients (ascending)."""
        deg = max(self.terms, default=0)
        out = [Fraction(0)] * (deg + 1)
        out[0] = self.constant
        for m, c in self.terms.items():
            for k, b in enumerate(_bern_poly_coeffs(m)):
                out[k] += c * b
        return out


def _bern_poly_coeffs(n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(comb(n, k)) * bernoulli(n - k) for k in range(n + 1))


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] += ai * bj
    return out


def naive_product(s: Sequence[int]) -> BernCombo:
    """Multiply the B_{s_j}(x) exactly, then rewrite in the Bernoulli basis.

    Elimination runs from the top degree down; it terminates because every
    B_m(x) is monic.  The remaining degree-0 coefficient is the constant.
    """
    if len(s) < 1 or any(e < 1 for e in s):
        raise ValueError(f"need positive integer exponents, got {s}")
    poly = [Fraction(1)]
    for e in s:
        poly = _poly_mul(poly, _bern_poly_coeffs(e))
    terms: dict[int, Fraction] = {}
    for m in range(len(poly) - 1, 0, -1):
        c = poly[m]
        if not c:
            continue
        terms[m] = c
        for k, b in enumerate(_bern_poly_coeffs(m)):
            poly[k] -= c * b
    return BernCombo.build(terms, poly[0])


def carlitz_product(s1: int, s2: int) -> BernCombo:
    """Two-factor expansion

        B_{s1}(x) B_{s2}(x) =
            sum_{r=0}^{floor(max(s1,s2)/2)}
                [C(s1,2r) s2 + C(s2,2r) s1] B_{2r} B_{s1+s2-2r}(x) / (s1+s2-2r)
            - (-1)^{s2} s1! s2! / (s1+s2)! * B_{s1+s2}.
    """
    if s1 < 1 or s2 < 1:
        raise ValueError("exponents must be >= 1")
    w = s1 + s2
    terms: dict[int, Fraction] = {}
    for r in range(max(s1, s2) // 2 + 1):
        b2r = bernoulli(2 * r)
        if not b2r:
            continue
        coeff = Fraction(comb(s1, 2 * r) * s2 + comb(s2, 2 * r) * s1) * b2r / (w - 2 * r)
        if coeff:
            terms[w - 2 * r] = terms.get(w - 2 * r, Fraction(0)) + coeff
    const = -((-1) ** s2) * Fraction(factorial(s1) * factorial(s2), factorial(w)) * bernoulli(w)
    return BernCombo.build(terms, const)


def expand_by_subsets(s: Sequence[int]) -> BernCombo:
    """Expansion over proper subsets of slots:

        B_s(x) = C_s + sum_{i proper subset of [t]} sum_{0 <= j_i <= s_i}
                 (|s|-|j|+l(i)-t choose s - Inf(j)) * prod B_{j}/j! *
                 s! B_{n}(x) / n!,     n = |s| - |j| + l(i) - t + 1,

    with the multinomial taken over the component differences and defined
    as 0 when any component is negative.
    """
    from .exact import product_integral

    s = tuple(s)
    t = len(s)
    if t < 2 or any(e < 1 for e in s):
        raise ValueError("need at least two positive integer exponents")
    w = sum(s)
    s_fact = 1
    for e in s:
        s_fact *= factorial(e)
    terms: dict[int, Fraction] = {}
    slots = list(range(1, t + 1))
    for size in range(t):  # proper subsets only
        for positions in itertools.combinations(slots, size):
            # Transfer index j_l runs 0..s_l per chosen slot; odd Bernoulli
            # indices > 1 contribute nothing and are skipped outright.
            ranges = [
                [j for j in range(s[p - 1] + 1) if j <= 1 or j % 2 == 0]
                for p in positions
            ]
            for jvec in itertools.product(*ranges):
                bprod = Fraction(1)
                jfact = 1
                for j in jvec:
                    bprod *= bernoulli(j)
                    jfact *= factorial(j)
                if not bprod:
                    continue
                inflated = inflate(jvec, positions, t)
                diff = tuple(a - b for a, b in zip(s, inflated))
                mult = multinomial(diff)
                if not mult:
                    continue
                n = w - sum(jvec) + size - t + 1
                coeff = bprod * mult * s_fact / (jfact * factorial(n))
                if coeff:
                    terms[n] = terms.get(n, Fraction(0)) + coeff
    return BernCombo.build(terms, product_integral(s))


def _index_weight_factor(part: tuple[int, ...], r: tuple[int, ...]) -> Fraction:
    """Product over the part's index entries of

        [C(A_i, 2 r_i) * part[i+1] + C(part[i+1], 2 r_i) * A_i] * B_{2 r_i} / A_{i+1}

    where A_i = sigma_i(part) - 2 sigma_{i-1}(r) stays >= 1 for every index
    vector within bounds.  Empty r gives the empty product 1.
    """
    out = Fraction(1)
    for i, ri in enumerate(r, start=1):
        head = sum(part[:i]) - 2 * sum(r[: i - 1])
        nxt = part[i]
        denom = head + nxt - 2 * ri
        out *= (
            Fraction(comb(head, 2 * ri) * nxt + comb(nxt, 2 * ri) * head)
            * bernoulli(2 * ri)
            / denom
        )
        if not out:
            return out
    return out


def _closing_number(part: tuple[int, ...], r: tuple[int, ...]) -> Fraction:
    """Closing factor of a part whose index vector has len(part)-2 entries:

        (-1)^(1+last) * (|part|-last-2|r|)! * last! / (|part|-2|r|)! * B_{|part|-2|r|}
    """
    last = part[-1]
    m = sum(part) - 2 * sum(r)
    sign = -1 if last % 2 == 0 else 1  # (-1)^(1+last)
    return (
        sign
        * Fraction(factorial(m - last) * factorial(last), factorial(m))
        * bernoulli(m)
    )


def expand_by_partitions(s: Sequence[int]) -> BernCombo:
    """Weight-homogeneous expansion over pre-fat and fat partitions.

    The pre-fat sum contributes B_m(x) terms (the last part supplies the
    polynomial factor, every earlier part a Bernoulli-number factor); the
    fat sum, where every part closes with a number, contributes the
    constant.
    """
    s = tuple(s)
    if len(s) < 2 or any(e < 1 for e in s):
        raise ValueError("need at least two positive integer exponents")

    terms: dict[int, Fraction] = {}
    constant = Fraction(0)

    for P in enumerate_partitions(s, PartitionKind.PRE_FAT):
        parts = P.parts
        q = len(parts)
        for assignment in index_assignments(P, PartitionKind.PRE_FAT):
            coeff = Fraction(1)
            for part, r in zip(parts[:-1], assignment.parts[:-1]):
                coeff *= _index_weight_factor(part, r)
                if not coeff:
                    break
                coeff *= _closing_number(part, r)
                if not coeff:
                    break
            if not coeff:
                continue
            last, r_last = parts[-1], assignment.parts[-1]
            coeff *= _index_weight_factor(last, r_last)
            if not coeff:
                continue
            m = sum(last) if len(last) == 1 else sum(last) - 2 * sum(r_last)
            terms[m] = terms.get(m, Fraction(0)) + coeff

    for P in enumerate_partitions(s, PartitionKind.FAT):
        parts = P.parts
        for assignment in index_assignments(P, PartitionKind.FAT):
            coeff = Fraction(1)
            for part, r in zip(parts, assignment.parts):
                coeff *= _index_weight_factor(part, r)
                if not coeff:
                    break
                coeff *= _closing_number(part, r)
                if not coeff:
                    break
            constant += coeff

    return BernCombo.build(terms, constant)
