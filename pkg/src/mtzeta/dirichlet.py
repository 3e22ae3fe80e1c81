"""Dirichlet characters with exact root-of-unity values, Gauss sums, and
assembly of MT L-values from colored MT values.

A character mod f is stored as a table of exact rational angles: the value
at a residue a coprime to f is e(angle), the angle being determined by the
character's exponents on a fixed generating set of the unit group.  All
character arithmetic (products, conjugation, conductor search,
orthogonality) is therefore exact; only Gauss sums and L-values float.

The character-to-color bridge rests on the Fourier expansion of a
primitive character, chi(m) = (1/tau(conj chi)) sum_a conj(chi)(a) e(am/f):
every character-twisted sum is a conj(chi)(a)/tau(conj chi)-weighted
combination of colored values at colors a/f.  (For real characters the
conjugation is invisible; the depth-1 consistency check against the
Hurwitz route pins the convention for complex ones.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

from mpmath import mp, mpc

from .numerics import (
    DEFAULT_CONFIG,
    EvalConfig,
    EvalResult,
    _GUARD_BITS,
    _e_of,
    _mp_lock,
    eval_expr,
)
from .reduction import Identity, cyclic_sum_identity
from .symexpr import Expr, lerch, mt_value

__all__ = [
    "DirichletCharacter",
    "unit_group",
    "enumerate_characters",
    "gauss_sum",
    "mt_l_value",
    "character_identities",
]

MAX_MODULUS = 50


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def _order_mod(g: int, m: int) -> int:
    x, k = g % m, 1
    while x != 1:
        x = x * g % m
        k += 1
    return k


def _crt_lift(residue: int, q: int, f: int) -> int:
    """The unit mod f that is `residue` mod q and 1 mod f/q."""
    rest = f // q
    for x in range(1, f + 1):
        if x % q == residue % q and x % rest == 1 % rest:
            return x
    raise AssertionError("CRT lift failed")


def unit_group(f: int) -> list[tuple[int, int]]:
    """Generators (g, order) of (Z/f)*, each g congruent to 1 outside its
    own prime-power component."""
    if f == 1:
        return []
    gens: list[tuple[int, int]] = []
    for p, e in _factorize(f):
        q = p**e
        if p == 2:
            if e == 1:
                continue
            if e == 2:
                gens.append((_crt_lift(3, q, f), 2))
            else:
                gens.append((_crt_lift(q - 1, q, f), 2))
                gens.append((_crt_lift(5, q, f), 2 ** (e - 2)))
        else:
            phi = q // p * (p - 1)
            g = next(
                x for x in range(2, q) if math.gcd(x, q) == 1 and _order_mod(x, q) == phi
            )
            gens.append((_crt_lift(g, q, f), phi))
    return gens


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod f as exact angles: value at a is e(angles[a]), or 0
    when gcd(a, f) > 1 (angles[a] is None there)."""

    modulus: int
    angles: tuple[Optional[Fraction], ...]
    conductor: int
    index: int

    @property
    def primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def principal(self) -> bool:
        return all(a is None or a == 0 for a in self.angles)

    def angle(self, n: int) -> Optional[Fraction]:
        return self.angles[n % self.modulus]

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus,
            tuple(None if a is None else (-a) % 1 for a in self.angles),
            self.conductor,
            self.index,
        )

    def value(self, n: int, prec: int = 64) -> Any:
        a = self.angle(n)
        if a is None:
            return mpc(0)
        return _e_of(a, prec)


def _conductor(f: int, angles: Sequence[Optional[Fraction]]) -> int:
    for d in sorted(
        d for d in range(1, f + 1) if f % d == 0
    ):
        if all(
            angles[a % f] == 0
            for a in range(1, f + 1)
            if a % d == 1 % d and math.gcd(a, f) == 1
        ):
            return d
    return f


def enumerate_characters(f: int) -> list[DirichletCharacter]:
    """All phi(f) characters mod f, indexed by generator-exponent tuples in
    odometer order (first generator fastest).  Index 0 is principal."""
    if not 1 <= f <= MAX_MODULUS:
        raise ValueError(f"modulus must be in 1..{MAX_MODULUS}, got {f}")
    gens = unit_group(f)
    units = [a for a in range(f) if math.gcd(a, f) == 1] if f > 1 else [0]

    # discrete logs: enumerate the group as products of generator powers
    dlog: dict[int, tuple[int, ...]] = {1 % f: (0,) * len(gens)}
    frontier = [1 % f]
    for i, (g, order) in enumerate(gens):
        current = list(dlog.items())
        for x, expo in current:
            y = x
            for t in range(1, order):
                y = y * g % f
                dlog[y] = expo[:i] + (t,) + expo[i + 1 :]
    assert len(dlog) == len(units)

    out = []
    orders = [order for _, order in gens]
    count = 1
    for o in orders:
        count *= o
    for index in range(count):
        rem, expo = index, []
        for o in orders:
            expo.append(rem % o)
            rem //= o
        angles: list[Optional[Fraction]] = [None] * f
        for a in units:
            t = dlog[a]
            ang = sum(
                (Fraction(e * k, o) for e, k, o in zip(expo, t, orders)),
                Fraction(0),
            )
            angles[a] = ang % 1
        if f == 1:
            angles = [Fraction(0)]
        out.append(
            DirichletCharacter(f, tuple(angles), _conductor(f, angles), index)
        )
    return out


def gauss_sum(chi: DirichletCharacter, cfg: EvalConfig = DEFAULT_CONFIG) -> EvalResult:
    """tau(chi) = sum_{n=1..f} chi(n) e(n/f) at working precision."""
    f = chi.modulus
    prec = cfg.precision_bits + _GUARD_BITS
    with _mp_lock, mp.workprec(prec):
        total = mpc(0)
        for n in range(1, f + 1):
            a = chi.angle(n)
            if a is None:
                continue
            total += _e_of(a + Fraction(n, f), prec)
        return EvalResult(total, 8 * f * float(mp.mpf(2) ** (1 - prec)))


def _colored_value_expr(exps: Sequence[Any], colors: Sequence[Fraction]) -> Expr:
    if len(exps) == 1:
        return Expr.atom(lerch(exps[0], colors[0]))
    return Expr.atom(mt_value(exps, colors))


def mt_l_value(
    exps: Sequence[int],
    chis: Sequence[DirichletCharacter],
    cfg: EvalConfig = DEFAULT_CONFIG,
    budget: int = 100_000,
) -> EvalResult:
    """Character-twisted MT value assembled from colored values:

        sum over j in prod [1..f_i] of prod_i chi_i(j_i)/tau(conj(chi_i))
            * colored MT value at colors (j_1/f_1, ..., j_d/f_d).

    Requires every character primitive (the color bridge needs it); the
    f-grid size is guarded by ``budget``.
    """
    import itertools

    exps = tuple(exps)
    if any(not isinstance(e, int) or e < 1 for e in exps):
        raise ValueError(f"assembly needs positive integer exponents, got {exps}")
    if len(chis) != len(exps):
        raise ValueError("need one character per slot")
    for chi in chis:
        if not chi.primitive:
            raise ValueError(
                f"character index {chi.index} mod {chi.modulus} is not primitive"
            )
    grid = 1
    for chi in chis:
        grid *= chi.modulus
    if grid > budget:
        raise ValueError(f"f-grid of size {grid} exceeds budget {budget}")

    prec = cfg.precision_bits + _GUARD_BITS
    taus = [gauss_sum(chi.conjugate(), cfg) for chi in chis]
    with _mp_lock, mp.workprec(prec):
        inv_taus = []
        inv_tau_errs = []
        for t in taus:
            tv = mpc(t.value)
            inv_taus.append(1 / tv)
            # |d(1/t)| <= err / (|t| (|t| - err))
            tm = float(abs(tv))
            inv_tau_errs.append(t.bound / (tm * max(tm - t.bound, 1e-300)))

    total = mpc(0)
    bound = 0.0
    for jvec in itertools.product(*[range(1, chi.modulus + 1) for chi in chis]):
        angs = [
            None if a is None else (-a) % 1
            for a in (chi.angle(j) for chi, j in zip(chis, jvec))
        ]
        if any(a is None for a in angs):
            continue
        colors = [Fraction(j, chi.modulus) for chi, j in zip(chis, jvec)]
        val = eval_expr(_colored_value_expr(exps, colors), cfg=cfg)
        with _mp_lock, mp.workprec(prec):
            wt = mpc(1)
            wt_err = 0.0
            for a, it, ie in zip(angs, inv_taus, inv_tau_errs):
                wt *= _e_of(a, prec) * it
                wt_err += ie  # relative errors add to first order
            wmag = float(abs(wt))
            total += wt * mpc(val.value)
            bound += wmag * val.bound + float(abs(mpc(val.value))) * wmag * (
                wt_err + 8 * float(mp.mpf(2) ** (1 - prec))
            )
    return EvalResult(total, bound)


def character_identities(
    s: Sequence[int],
    chi: DirichletCharacter,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> list[tuple[EvalResult, Identity]]:
    """The character-level cyclic-sum identity as a weighted family: for
    n = 1..f the weight conj(chi)(n)/tau(conj(chi)) paired with the
    color-n/f identity.  Their weighted sum is the character identity;
    non-coprime n carry weight zero."""
    if not chi.primitive:
        raise ValueError("character must be primitive")
    f = chi.modulus
    tau = gauss_sum(chi.conjugate(), cfg)
    prec = cfg.precision_bits + _GUARD_BITS
    out = []
    for n in range(1, f + 1):
        ident = cyclic_sum_identity(s, Fraction(n, f))
        a = chi.angle(n)
        with _mp_lock, mp.workprec(prec):
            tv = mpc(tau.value)
            if a is None:
                w = EvalResult(mpc(0), 0.0)
            else:
                wv = _e_of((-a) % 1, prec) / tv
                tm = float(abs(tv))
                err = tau.bound / (tm * max(tm - tau.bound, 1e-300))
                w = EvalResult(wv, float(abs(wv)) * (err + 8 * float(mp.mpf(2) ** (1 - prec))))
        out.append((w, ident))
    return out
