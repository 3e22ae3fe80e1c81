"""Exact rational arithmetic: Bernoulli numbers and polynomials, binomial and
multinomial coefficients, and integrals of Bernoulli-polynomial products.

Conventions:

* Bernoulli numbers follow the generating function t*e^(x*t)/(e^t - 1), so
  B_1 = -1/2 and B_n = 0 for odd n >= 3.
* Out-of-range binomials vanish: C(n, k) = 0 for k < 0 or k > n.  Several
  depth-2 coefficient formulas produce such indices, so this convention is
  load-bearing.  Negative n is rejected (generalized binomials never occur).
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

__all__ = [
    "bernoulli",
    "binomial",
    "multinomial",
    "bernoulli_poly",
    "bernoulli_poly_eval",
    "product_integral",
]

# Cache of B_0..B_n, grown on demand.  Guarded by a lock so concurrent
# readers never observe a partially extended table.
_bernoulli_cache: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
_cache_lock = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """Return the Bernoulli number B_n (convention B_1 = -1/2)."""
    if n < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {n}")
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    with _cache_lock:
        while len(_bernoulli_cache) <= n:
            # Defining recurrence: sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1.
            m = len(_bernoulli_cache)
            acc = sum(
                Fraction(comb(m + 1, k)) * _bernoulli_cache[k] for k in range(m)
            )
            _bernoulli_cache.append(-acc / (m + 1))
        return _bernoulli_cache[n]


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) with C(n, k) = 0 for k < 0 or k > n.

    Negative n is rejected: no call site needs generalized binomials, and a
    negative upper index would silently change several coefficient formulas.
    """
    if n < 0:
        raise ValueError(f"negative upper binomial index: C({n}, {k})")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def multinomial(parts: Iterable[int]) -> int:
    """Multinomial coefficient (sum(parts) choose parts).

    Returns 0 when any part is negative; this matches the vanishing of the
    corresponding generating-function coefficient.
    """
    parts = tuple(parts)
    if any(p < 0 for p in parts):
        return 0
    out = 1
    total = 0
    for p in parts:
        total += p
        out *= comb(total, p)
    return out


def bernoulli_poly(n: int) -> tuple[Fraction, ...]:
    """Coefficients of B_n(x) = sum_k C(n, k) B_{n-k} x^k, ascending powers."""
    if n < 0:
        raise ValueError(f"Bernoulli polynomial degree must be >= 0, got {n}")
    return tuple(Fraction(comb(n, k)) * bernoulli(n - k) for k in range(n + 1))


def bernoulli_poly_eval(n: int, x: Fraction) -> Fraction:
    """Evaluate B_n(x) exactly at a rational point."""
    acc = Fraction(0)
    for c in reversed(bernoulli_poly(n)):
        acc = acc * x + c
    return acc


def _even_or_unit(s: int) -> list[int]:
    # Indices r with B_{s-r} possibly nonzero: s-r in {0, 1} or even.
    return [r for r in range(s + 1) if s - r <= 1 or (s - r) % 2 == 0]


def product_integral(s: Sequence[int]) -> Fraction:
    """Integral over [0, 1] of the product of B_{s_j}(x), j = 1..t.

    Computed by the closed double sum
        sum_{0 <= r <= s} prod_j C(s_j, r_j) * prod_j B_{s_j - r_j} / (|r| + 1),
    not by polynomial multiplication, so it can serve as one side of an
    exact cross-check against direct integration.
    """
    if len(s) < 1 or any(e < 1 for e in s):
        raise ValueError(f"need a nonempty vector of positive integers, got {s}")
    total = Fraction(0)
    choices = [_even_or_unit(e) for e in s]

    def rec(idx: int, coeff: Fraction, rsum: int) -> None:
        nonlocal total
        if idx == len(s):
            total += coeff / (rsum + 1)
            return
        e = s[idx]
        for r in choices[idx]:
            b = bernoulli(e - r)
            if b:
                rec(idx + 1, coeff * comb(e, r) * b, rsum + r)

    rec(0, Fraction(1), 0)
    return total
