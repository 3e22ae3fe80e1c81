"""Reduction identities for signed cyclic sums of Mordell-Tornheim values.

The central object is the expression E(s, i, alpha) attached to a subset i
of the first k slots: a sum over pre-fat partitions of s(i) and their
dependent index sets, whose terms are products of even zeta values, a
parity-filtered zeta per non-last part, and a single lower-depth MT value
carrying the symbolic variable z.  The cyclic-sum identity states

    (-1)^(k+|s|) MT(s, z; 0..0, alpha)
      + sum_j (-1)^(s_j) MT(s with z at slot j, s_j; alpha at slot j)
    = sum over subsets i with |i| >= 2 of (-1)^(|i|) E(s, i, alpha),

valid away from singular points; all evaluation here stays in Re(z) >= 1.

An exact finite-truncation check (:func:`finite_sum_check`) validates the
sign and range conventions end to end: at every truncation level N the
zero-frequency coefficient of a product of one- and two-sided exponential
polynomials equals a signed sum of constrained lattice sums, with no
analysis involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .exact import binomial, multinomial
from .numerics import DEFAULT_CONFIG, EvalConfig, EvalResult, eval_expr
from .partitions import PartitionKind, enumerate_partitions, index_assignments
from .symexpr import Atom, EvenZeta, Expr, TildeZeta, Z, lerch, mt_value

__all__ = [
    "Identity",
    "subset_reduction",
    "cyclic_sum_identity",
    "finite_sum_check",
    "depth2_identity",
    "quad_e2",
    "quad_e3",
    "quad_e4",
    "quad_identity",
    "quad_ones_identity",
    "strong_reduction_pair",
]


@dataclass(frozen=True)
class Identity:
    """A constructed identity: signed MT values on the left, a reduced
    expression on the right, equal for all admissible z."""

    lhs: tuple[tuple[Fraction, Atom], ...]
    rhs: Expr
    s: tuple[int, ...]
    alpha: Fraction
    depth: int

    def lhs_expr(self) -> Expr:
        total = Expr.zero()
        for coeff, atom in self.lhs:
            total = total + Expr.term(coeff, (atom,))
        return total

    def residual(self, z0: Any, cfg: EvalConfig = DEFAULT_CONFIG) -> EvalResult:
        """Evaluate lhs - rhs at a point; bound is the combined majorant."""
        return eval_expr(self.lhs_expr() - self.rhs, z0, cfg)


def _f_atom(
    s: Sequence[int], subset: Sequence[int], alpha: Fraction, n: int
) -> Atom:
    """The z-carrying MT value of a subset term: slots are the exponents
    outside the subset, then z, then the closing exponent n; only the z
    slot is colored."""
    rest = [s[j - 1] for j in range(1, len(s) + 1) if j not in subset]
    exps = tuple(rest) + (Z, n)
    colors = (Fraction(0),) * len(rest) + (alpha, Fraction(0))
    return mt_value(exps, colors)


def subset_reduction(
    s: Sequence[int], subset: Sequence[int], alpha: Fraction | int = 0
) -> Expr:
    """E(s, i, alpha): the reduced contribution of subset i (|i| >= 2).

    Every term is (-1)^(|s(i)|) 2^(|i|-q) times a product of per-index
    factors [C(A-1, s-1) + C(A-1, s-2r)] zeta(2r), a parity-filtered zeta
    for each non-last part, and the closing MT value of depth k+1-|i|.
    """
    s = tuple(s)
    k = len(s)
    subset = tuple(sorted(subset))
    if not 2 <= len(subset) <= k:
        raise ValueError(f"subset size must be in [2, {k}], got {subset}")
    if any(not 1 <= j <= k for j in subset) or len(set(subset)) != len(subset):
        raise ValueError(f"subset {subset} is not a subset of 1..{k}")
    if any(e < 1 for e in s):
        raise ValueError("exponents must be positive")
    alpha = Fraction(alpha) % 1

    sub = tuple(s[j - 1] for j in subset)
    sign = -1 if sum(sub) % 2 else 1
    total = Expr.zero()
    for P in enumerate_partitions(sub, PartitionKind.PRE_FAT):
        parts = P.parts
        q = len(parts)
        prefactor = Fraction(sign * 2 ** (len(subset) - q))
        for assignment in index_assignments(P, PartitionKind.PRE_FAT):
            coeff = prefactor
            atoms: list[Atom] = []
            dead = False
            for pj, (part, r) in enumerate(zip(parts, assignment.parts)):
                for n_i, rv in enumerate(r, start=1):
                    # partial sum of r through rv itself: the coefficient
                    # index runs one ahead of the raw expansion's
                    top = sum(part[: n_i + 1]) - 2 * sum(r[:n_i]) - 1
                    c = binomial(top, part[n_i] - 1) + binomial(
                        top, part[n_i] - 2 * rv
                    )
                    if c == 0:
                        dead = True
                        break
                    coeff *= c
                    atoms.append(EvenZeta(2 * rv))
                if dead:
                    break
                if pj < q - 1:
                    m = sum(part) - 2 * sum(r)
                    if m % 2:  # parity-filtered zeta vanishes
                        dead = True
                        break
                    if part[-1] % 2:
                        coeff = -coeff
                    atoms.append(TildeZeta(m))
                else:
                    m = sum(part) if len(part) == 1 else sum(part) - 2 * sum(r)
                    atoms.append(_f_atom(s, subset, alpha, m))
            if not dead:
                total = total + Expr.term(coeff, atoms)
    return total


def _cyclic_lhs(
    s: tuple[int, ...], alpha: Fraction
) -> tuple[tuple[Fraction, Atom], ...]:
    k = len(s)
    zeros = (Fraction(0),) * k
    full_sign = Fraction(-1 if (k + sum(s)) % 2 else 1)
    out = [(full_sign, mt_value(s + (Z,), zeros + (alpha,)))]
    for j in range(1, k + 1):
        exps = s[: j - 1] + (Z,) + s[j:] + (s[j - 1],)
        colors = zeros[: j - 1] + (alpha,) + zeros[j:] + (Fraction(0),)
        sign = Fraction(-1 if s[j - 1] % 2 else 1)
        out.append((sign, mt_value(exps, colors)))
    return tuple(out)


def _subsets(k: int, min_size: int = 2):
    for size in range(min_size, k + 1):
        yield from itertools.combinations(range(1, k + 1), size)


def cyclic_sum_identity(s: Sequence[int], alpha: Fraction | int = 0) -> Identity:
    """The full reduction identity for the signed cyclic sum over s."""
    s = tuple(s)
    k = len(s)
    if k < 2:
        raise ValueError("depth must be >= 2")
    if any(not isinstance(e, int) or e < 1 for e in s):
        raise ValueError("exponents must be positive integers")
    alpha = Fraction(alpha) % 1
    rhs = Expr.zero()
    for subset in _subsets(k):
        e = subset_reduction(s, subset, alpha)
        rhs = rhs + (e if len(subset) % 2 == 0 else -e)
    return Identity(_cyclic_lhs(s, alpha), rhs, s, alpha, k)


# ---------------------------------------------------------------------------
# exact finite-truncation cross-check


def finite_sum_check(
    s: Sequence[int],
    subset: Sequence[int],
    alpha: Fraction | int,
    z0: Any,
    N: int,
) -> tuple[complex, complex]:
    """Both sides of the truncation-exact integral identity at level N.

    Left: the zero-frequency coefficient of
        prod_{j in i} f_{s_j,N} * prod_{j not in i} f^+_{s_j,N} * f^+_{z,N}(x+alpha),
    where f^+ is the one-sided exponential polynomial sum_{m<=N} e(mx)/m^s
    and f = f^+ + (-1)^s f^+(-x).  Computed by coefficient convolution.

    Right: sum over sub-subsets j of i of (-1)^(|s(j)|) S_N(s, j, alpha),
    where S_N is the lattice sum over m_1..m_{k+1} <= N constrained by
    sum_{j in subset} m = sum of the rest, with phase e(m_{k+1} alpha).
    Computed by value-bucket convolution, a distinct pipeline from the
    frequency convolution on the left.
    """
    s = tuple(s)
    k = len(s)
    subset = tuple(sorted(subset))
    if not subset or any(not 1 <= j <= k for j in subset):
        raise ValueError(f"subset {subset} invalid for k={k}")
    if N < 1:
        raise ValueError("N must be >= 1")
    alpha = Fraction(alpha) % 1
    af = float(alpha)
    zc = complex(z0)
    m = np.arange(1, N + 1)

    def one_sided(expo: complex, phase: float = 0.0) -> np.ndarray:
        coeff = np.zeros(2 * N + 1, dtype=complex)  # index = freq + N
        vals = m.astype(float) ** (-expo.real)
        if expo.imag:
            vals = vals * np.exp(-1j * expo.imag * np.log(m))
        if phase:
            vals = vals * np.exp(2j * np.pi * phase * m)
        coeff[N + 1 :] = vals
        return coeff

    # left: frequency-space product
    lhs_poly = np.zeros(1, dtype=complex)
    lhs_poly[0] = 1.0
    for j in range(1, k + 1):
        arr = one_sided(complex(s[j - 1]))
        if j in subset:
            two = arr.copy()
            two[:N] = ((-1) ** s[j - 1]) * arr[N + 1 :][::-1]
            arr = two
        lhs_poly = np.convolve(lhs_poly, arr)
    lhs_poly = np.convolve(lhs_poly, one_sided(zc, af))
    mid = (len(lhs_poly) - 1) // 2
    lhs = complex(lhs_poly[mid])

    # right: signed constrained lattice sums via value buckets
    def bucket(expos: list[complex], phases: list[float]) -> np.ndarray:
        out = np.zeros(1, dtype=complex)
        out[0] = 1.0
        for expo, ph in zip(expos, phases):
            vals = np.zeros(N + 1, dtype=complex)
            v = m.astype(float) ** (-expo.real)
            if expo.imag:
                v = v * np.exp(-1j * expo.imag * np.log(m))
            if ph:
                v = v * np.exp(2j * np.pi * ph * m)
            vals[1:] = v
            out = np.convolve(out, vals)
        return out

    rhs = 0j
    all_exps = [complex(e) for e in s] + [zc]
    for size in range(0, len(subset) + 1):
        for sub in itertools.combinations(subset, size):
            if not sub:
                continue  # empty constraint set has no solutions
            a_expos = [all_exps[j - 1] for j in sub]
            b_expos = [all_exps[j - 1] for j in range(1, k + 2) if j not in sub]
            b_phases = [af if j == k + 1 else 0.0 for j in range(1, k + 2) if j not in sub]
            ua = bucket(a_expos, [0.0] * len(a_expos))
            vb = bucket(b_expos, b_phases)
            t = min(len(ua), len(vb))
            val = complex(np.dot(ua[:t], vb[:t]))
            sgn = -1 if sum(s[j - 1] for j in sub) % 2 else 1
            rhs += sgn * val
    return lhs, rhs


# ---------------------------------------------------------------------------
# closed specializations


def depth2_identity(a: int, b: int, alpha: Fraction | int = 0) -> Identity:
    """Depth-2 identity with the right side built from the closed display

        2 sum_r [C(a+b-2r-1, a-1) + C(a+b-2r-1, a-2r)] zeta(2r) phi(a+b+z-2r)

    (normalized by (-1)^(a+b) to the cyclic-sum convention), constructed
    independently of :func:`subset_reduction` so the two can cross-check.
    """
    if a < 1 or b < 1:
        raise ValueError("exponents must be >= 1")
    alpha = Fraction(alpha) % 1
    sign = Fraction(-1 if (a + b) % 2 else 1)
    rhs = Expr.zero()
    for r in range(max(a, b) // 2 + 1):
        c = binomial(a + b - 2 * r - 1, a - 1) + binomial(a + b - 2 * r - 1, a - 2 * r)
        rhs = rhs + Expr.term(
            sign * 2 * c,
            (EvenZeta(2 * r), lerch(Z.shift(a + b - 2 * r), alpha)),
        )
    return Identity(_cyclic_lhs((a, b), alpha), rhs, (a, b), alpha, 2)


def quad_e2(n: int, alpha: Fraction | int = 0) -> Expr:
    """Size-2 subset term for four equal exponents:
    4 sum_r C(2n-2r-1, n-1) zeta(2r) MT(n, n, z, 2n-2r; 0,0,alpha,0)."""
    alpha = Fraction(alpha) % 1
    out = Expr.zero()
    for r in range(n // 2 + 1):
        out = out + Expr.term(
            4 * binomial(2 * n - 2 * r - 1, n - 1),
            (
                EvenZeta(2 * r),
                mt_value((n, n, Z, 2 * n - 2 * r), (0, 0, alpha, 0)),
            ),
        )
    return out


def quad_e3(n: int, alpha: Fraction | int = 0) -> Expr:
    """Size-3 subset term for four equal exponents."""
    alpha = Fraction(alpha) % 1
    out = Expr.term(2, (TildeZeta(2 * n), mt_value((n, Z, n), (0, alpha, 0))))
    sgn = Fraction(-1 if n % 2 else 1)
    for mu in range(n // 2 + 1):
        for nu in range(max(2 * n - 2 * mu, n) // 2 + 1):
            c = binomial(2 * n - 2 * mu - 1, n - 1) * binomial(
                3 * n - 2 * mu - 2 * nu - 1, n - 1
            ) + multinomial((n - 2 * mu, n - 1, n - 2 * nu))
            if not c:
                continue
            out = out + Expr.term(
                sgn * 8 * c,
                (
                    EvenZeta(2 * mu),
                    EvenZeta(2 * nu),
                    mt_value((n, Z, 3 * n - 2 * mu - 2 * nu), (0, alpha, 0)),
                ),
            )
    return out


def quad_e4(n: int, alpha: Fraction | int = 0) -> Expr:
    """Size-4 subset term for four equal exponents."""
    alpha = Fraction(alpha) % 1
    out = Expr.zero()
    for mu in range(n // 2 + 1):
        for nu in range(max(2 * n - 2 * mu, n) // 2 + 1):
            for lam in range(max(3 * n - 2 * mu - 2 * nu, n) // 2 + 1):
                w = 4 * n - 2 * (mu + nu + lam)
                c = (
                    binomial(2 * n - 2 * mu - 1, n - 1)
                    * binomial(3 * n - 2 * mu - 2 * nu - 1, n - 1)
                    * binomial(w - 1, n - 1)
                    + multinomial((n - 2 * mu, n - 1, n - 2 * nu))
                    * binomial(w - 1, n - 1)
                    + binomial(2 * n - 2 * mu - 1, n - 1)
                    * multinomial((2 * n - 2 * mu - 2 * nu, n - 1, n - 2 * lam))
                    + multinomial((n - 2 * mu, n - 1, n - 2 * nu, n - 2 * lam))
                )
                if not c:
                    continue
                out = out + Expr.term(
                    16 * c,
                    (
                        EvenZeta(2 * mu),
                        EvenZeta(2 * nu),
                        EvenZeta(2 * lam),
                        lerch(Z.shift(w), alpha),
                    ),
                )
    sgn = Fraction(-1 if n % 2 else 1)
    for mu in range(n // 2 + 1):
        out = out + Expr.term(
            sgn * 8 * binomial(2 * n - 2 * mu - 1, n - 1),
            (
                TildeZeta(2 * n),
                EvenZeta(2 * mu),
                lerch(Z.shift(2 * n - 2 * mu), alpha),
            ),
        )
    for mu in range(n // 2 + 1):
        out = out + Expr.term(
            8 * binomial(2 * n - 2 * mu - 1, n - 1),
            (
                EvenZeta(2 * mu),
                TildeZeta(3 * n - 2 * mu),
                lerch(Z.shift(n), alpha),
            ),
        )
    return out


def quad_identity(n: int, alpha: Fraction | int = 0) -> Identity:
    """Four equal exponents: lhs collapses to two distinct MT values with
    multiplicities 1 and 4; rhs is (4 choose 2) E2 - (4 choose 3) E3 + E4.

    The rotated-term sign is (-1)^n as the general identity requires; the
    printed specialization shows -4 outright, which holds only for odd n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    alpha = Fraction(alpha) % 1
    rhs = quad_e2(n, alpha).scale(6) - quad_e3(n, alpha).scale(4) + quad_e4(n, alpha)
    return Identity(_cyclic_lhs((n, n, n, n), alpha), rhs, (n, n, n, n), alpha, 4)


def quad_ones_identity(alpha: Fraction | int = 0) -> Identity:
    """All-ones case, in its rearranged display form:

        4 MT({1}_3, z, 1) - MT({1}_4, z) = 12 MT(1,1,z,2)
            + 24 [zeta(2) MT(1,z,1) - MT(1,z,3) - zeta(2) phi(z+2) + phi(z+4)],

    with the color alpha riding on the z slot throughout.
    """
    alpha = Fraction(alpha) % 1
    lhs = (
        (Fraction(4), mt_value((1, 1, 1, Z, 1), (0, 0, 0, alpha, 0))),
        (Fraction(-1), mt_value((1, 1, 1, 1, Z), (0, 0, 0, 0, alpha))),
    )
    rhs = (
        Expr.term(12, (mt_value((1, 1, Z, 2), (0, 0, alpha, 0)),))
        + Expr.term(24, (EvenZeta(2), mt_value((1, Z, 1), (0, alpha, 0))))
        - Expr.term(24, (mt_value((1, Z, 3), (0, alpha, 0)),))
        - Expr.term(24, (EvenZeta(2), lerch(Z.shift(2), alpha)))
        + Expr.term(24, (lerch(Z.shift(4), alpha),))
    )
    return Identity(lhs, rhs, (1, 1, 1, 1), alpha, 4)


def strong_reduction_pair(n: int) -> tuple[Expr, Expr]:
    """The all-ones identity at z = n, trivial color, with the right side
    strongly reduced to plain MZVs.  Returns (lhs, rhs); both sides are
    z-free and evaluate to equal numbers (72 zeta(5) at n = 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    from .symexpr import mzv

    lhs = Expr.term(4, (mt_value((1, 1, 1, n, 1), (0,) * 5),)) - Expr.term(
        1, (mt_value((1, 1, 1, 1, n), (0,) * 5),)
    )

    def zt(*exps: int) -> Expr:
        return Expr.atom(mzv(exps, (0,) * len(exps)))

    # The depth-3 double-sum family is implemented with the transfer index
    # in the middle slot and multiplicity two, and the companion single sum
    # closes with 2 zeta(3+nu, n-nu, 1); splitting these into the two
    # transposed copies one sees printed elsewhere is only correct at n=1.
    inner = (
        zt(n + 4).scale(2)
        - zt(n + 3, 1).scale(2)
        + zt(n + 2, 1, 1).scale(2)
        + Expr.term(2, (EvenZeta(2),)) * (zt(n + 1, 1) - zt(n + 2))
    )
    for nu in range(n):
        for mu in range(n - nu):
            inner = inner + zt(3 + nu, 1 + mu, n - nu - mu).scale(2)
    for nu in range(n):
        inner = (
            inner
            + Expr.term(2, (EvenZeta(2),)) * zt(2 + nu, n - nu)
            - zt(4 + nu, n - nu).scale(2)
            + zt(3 + nu, n - nu, 1).scale(2)
        )
    return lhs, inner.scale(12)
